#include "conformal/manifold_file.hpp"

#include "conformal/builtins.hpp"
#include "conformal/expression.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace conformal {

using nlohmann::json;

namespace {

double parse_bound(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    try {
      return Expression::compile(s, {})(Vecd());
    } catch (const InputError&) {
    }
  }
  throw InputError(where + ": expected a number, \"inf\" or \"-inf\"");
}

Edge parse_edge(const std::string& s, const std::string& where) {
  if (s == "unbounded") return Edge::Unbounded;
  if (s == "boundary") return Edge::Boundary;
  if (s == "puncture") return Edge::Puncture;
  if (s == "chart-singularity") return Edge::ChartSingularity;
  throw InputError(where + ": unknown edge kind '" + s + "'");
}

Axisd parse_axis(const json& a, int i) {
  const std::string where = "domain[" + std::to_string(i) + "]";
  Axisd ax;
  ax.name = "x" + std::to_string(i + 1);
  json lo, hi;
  if (a.is_array()) {
    if (a.size() != 2) throw InputError(where + ": expected [lo, hi]");
    lo = a[0];
    hi = a[1];
  } else if (a.is_object()) {
    if (a.value("periodic", false)) {
      ax.periodic = true;
      return ax;
    }
    if (!a.contains("lo") || !a.contains("hi")) throw InputError(where + ": needs lo and hi");
    lo = a["lo"];
    hi = a["hi"];
  } else {
    throw InputError(where + ": expected an array or object");
  }
  ax.lo = parse_bound(lo, where + ".lo");
  ax.hi = parse_bound(hi, where + ".hi");
  if (!(ax.lo < ax.hi)) throw InputError(where + ": lo must be below hi");
  ax.lo_edge = std::isfinite(ax.lo) ? Edge::Boundary : Edge::Unbounded;
  ax.hi_edge = std::isfinite(ax.hi) ? Edge::Boundary : Edge::Unbounded;
  if (a.is_object()) {
    if (a.contains("lo_edge")) ax.lo_edge = parse_edge(a["lo_edge"].get<std::string>(), where + ".lo_edge");
    if (a.contains("hi_edge")) ax.hi_edge = parse_edge(a["hi_edge"].get<std::string>(), where + ".hi_edge");
    if (ax.lo_edge == Edge::Unbounded && std::isfinite(ax.lo)) throw InputError(where + ": finite lo marked unbounded");
    if (ax.hi_edge == Edge::Unbounded && std::isfinite(ax.hi)) throw InputError(where + ": finite hi marked unbounded");
  }
  return ax;
}

Expression compile_entry(const json& e, int dim, const std::string& where) {
  std::string src;
  if (e.is_number())
    src = json(e.get<double>()).dump();
  else if (e.is_string())
    src = e.get<std::string>();
  else
    throw InputError(where + ": expected an expression string or a number");
  try {
    return Expression::compile_coordinates(src, dim);
  } catch (const InputError& err) {
    throw InputError(where + ": " + err.what());
  }
}

std::vector<Expression> compile_table(const json& t, int dim, const std::string& where) {
  if (!t.is_array() || static_cast<int>(t.size()) != dim) throw InputError(where + ": expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " table");
  std::vector<Expression> out;
  for (int i = 0; i < dim; ++i) {
    if (!t[i].is_array() || static_cast<int>(t[i].size()) != dim)
      throw InputError(where + ": row " + std::to_string(i) + " must have " + std::to_string(dim) + " entries");
    for (int j = 0; j < dim; ++j)
      out.push_back(compile_entry(t[i][j], dim, where + "[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
  }
  return out;
}

std::function<Matd(const Vecd&)> table_evaluator(std::vector<Expression> table, int dim) {
  return [table = std::move(table), dim](const Vecd& x) {
    Matd m(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) m(i, j) = table[static_cast<std::size_t>(i * dim + j)](x);
    return m;
  };
}

}  // namespace

ScalarFieldd scalar_field_from_expression(const std::string& expr, int dim) {
  Expression e = Expression::compile_coordinates(expr, dim);
  return ScalarFieldd([e](const Vecd& x) { return e(x); }, expr);
}

Vecd parse_point(const std::string& text) {
  std::string s = text;
  for (char& c : s)
    if (c == ',') c = ' ';
  std::istringstream in(s);
  std::vector<double> v;
  std::string tok;
  while (in >> tok) {
    try {
      v.push_back(Expression::compile(tok, {})(Vecd()));
    } catch (const InputError& e) {
      throw InputError("point '" + text + "': " + e.what());
    }
  }
  if (v.empty()) throw InputError("point '" + text + "' is empty");
  return Eigen::Map<Vecd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

ManifoldDefinition parse_manifold(const std::string& text, const std::string& source) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(source + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw InputError(source + ": top level must be an object");
  try {
    ManifoldDefinition def;
    def.source = source;
    if (j.contains("grammar_version") && j["grammar_version"].get<int>() != kExpressionGrammarVersion)
      throw InputError("grammar_version " + j["grammar_version"].dump() + " is not supported (expected " +
                       std::to_string(kExpressionGrammarVersion) + ")");
    if (!j.contains("metric")) throw InputError("missing 'metric'");
    const json& m = j["metric"];
    int dim = j.contains("dim") ? j["dim"].get<int>() : 0;

    if (m.is_string()) {
      const std::string name = m.get<std::string>();
      if (name.rfind("builtin:", 0) != 0) throw InputError("metric string must be 'builtin:<name>'");
      const BuiltinEntry& b = find_builtin(name.substr(8));
      def.metric = b.make();
      def.base = b.base;
      def.base_complete = b.complete;
      if (dim != 0 && dim != def.metric.dim()) throw InputError("dim does not match builtin " + b.name);
      dim = def.metric.dim();
    } else {
      if (dim < 1) throw InputError("'dim' must be a positive integer");
      if (!j.contains("domain")) throw InputError("missing 'domain'");
      const json& d = j["domain"];
      if (!d.is_array() || static_cast<int>(d.size()) != dim) throw InputError("'domain' must have dim entries");
      std::vector<Axisd> axes;
      for (int i = 0; i < dim; ++i) axes.push_back(parse_axis(d[i], i));
      Domaind dom(std::move(axes));
      if (j.contains("excluded")) {
        for (const auto& e : j["excluded"]) {
          if (e.contains("point")) {
            std::vector<double> p = e["point"].get<std::vector<double>>();
            if (static_cast<int>(p.size()) != dim) throw InputError("excluded point has wrong dimension");
            dom.excluded.push_back(ExcludedSetd::at_point(Eigen::Map<Vecd>(p.data(), dim)));
          } else if (e.contains("axis")) {
            const int ax = e["axis"].get<int>();
            if (ax < 1 || ax > dim) throw InputError("excluded axis out of range (1-based)");
            dom.excluded.push_back(ExcludedSetd::hyperplane(ax - 1, e.value("value", 0.0)));
          } else {
            throw InputError("excluded entries need 'point' or 'axis'");
          }
        }
      }
      if (j.contains("singular_margin")) dom.singular_margin = j["singular_margin"].get<double>();
      def.metric = MetricChartd(std::move(dom), table_evaluator(compile_table(m, dim, "metric"), dim), source);
    }

    if (j.contains("factor")) {
      const json& f = j["factor"];
      def.factor = scalar_field_from_expression(f.is_number() ? json(f.get<double>()).dump() : f.get<std::string>(), dim);
    }
    if (j.contains("base")) {
      std::vector<double> p = j["base"].get<std::vector<double>>();
      if (static_cast<int>(p.size()) != dim) throw InputError("'base' has wrong dimension");
      def.base = Eigen::Map<Vecd>(p.data(), dim);
    }
    if (j.contains("base_complete")) def.base_complete = j["base_complete"].get<bool>();
    if (j.contains("tensor")) {
      def.tensor = SymTensorFieldd(table_evaluator(compile_table(j["tensor"], dim, "tensor"), dim), "s",
                                   j.value("tensor_nonnegative", true));
    }
    if (j.contains("oneform")) {
      const json& b = j["oneform"];
      if (!b.is_array() || static_cast<int>(b.size()) != dim) throw InputError("'oneform' must have dim entries");
      std::vector<Expression> comps;
      for (int i = 0; i < dim; ++i) comps.push_back(compile_entry(b[i], dim, "oneform[" + std::to_string(i) + "]"));
      def.oneform = OneFormd(
          [comps, dim](const Vecd& x) {
            Vecd v(dim);
            for (int i = 0; i < dim; ++i) v(i) = comps[static_cast<std::size_t>(i)](x);
            return v;
          },
          "beta");
    }
    if (j.contains("exhaustion")) {
      const json& e = j["exhaustion"];
      def.exhaustion.shells = e.value("shells", def.exhaustion.shells);
      def.exhaustion.first_radius = e.value("first_radius", def.exhaustion.first_radius);
      def.exhaustion.radius_ratio = e.value("radius_ratio", def.exhaustion.radius_ratio);
      def.exhaustion.first_margin = e.value("first_margin", def.exhaustion.first_margin);
      def.exhaustion.margin_ratio = e.value("margin_ratio", def.exhaustion.margin_ratio);
      try {
        def.exhaustion.at(Vecd::Zero(dim));
      } catch (const ConfigurationError& err) {
        throw InputError(std::string("exhaustion: ") + err.what());
      }
    }
    if (def.base) def.metric.domain().require(*def.base, "base point");
    return def;
  } catch (const json::exception& e) {
    throw InputError(source + ": " + e.what());
  } catch (const DomainError& e) {
    throw InputError(source + ": " + e.what());
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(source, 0) == 0) throw;
    throw InputError(source + ": " + msg);
  }
}

ManifoldDefinition load_manifold_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifold file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifold(ss.str(), path);
}

}  // namespace conformal
