// conformal: command-line front end.
//
// Exit codes: analyze 0 complete / 1 incomplete / 2 inconclusive;
// integral 0 diverges / 1 converges / 2 inconclusive; 64 malformed input.

#include "conformal/builtins.hpp"
#include "conformal/expression.hpp"
#include "conformal/manifold_file.hpp"
#include "conformal/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace conformal;

namespace {

constexpr int kExitMalformed = 64;

struct Common {
  std::string example;
  std::string manifold;
  std::string factor;
  std::string base;
  std::string out;
  int rays = 64;
  double horizon = 1e4;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;
};

void add_source_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--example", c.example, "builtin chart name (see `example list`)");
  cmd->add_option("--manifold", c.manifold, "manifold-definition JSON file");
  cmd->add_option("--base", c.base, "base point x0, comma separated (default: the chart's documented base)");
  cmd->add_option("--out", c.out, "output directory (default: $CONFORMAL_OUT_DIR or .)");
  cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)");
}

void add_spray_flags(CLI::App* cmd, Common& c) {
  cmd->add_option("--rays", c.rays, "spray size")->check(CLI::PositiveNumber);
  cmd->add_option("--horizon", c.horizon, "arc-length horizon")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "spray seed");
}

fs::path output_dir(const Common& c) {
  std::string dir = c.out;
  if (dir.empty()) {
    const char* env = std::getenv("CONFORMAL_OUT_DIR");
    dir = env && *env ? env : ".";
  }
  fs::create_directories(dir);
  return fs::path(dir);
}

ManifoldDefinition load_source(const Common& c) {
  if (!c.example.empty() && !c.manifold.empty()) throw InputError("give either --example or --manifold, not both");
  ManifoldDefinition def;
  if (!c.manifold.empty()) {
    def = load_manifold_file(c.manifold);
  } else {
    const BuiltinEntry& b = find_builtin(c.example.empty() ? "cylinder" : c.example);
    def.metric = b.make();
    def.base = b.base;
    def.base_complete = b.complete;
    def.source = "builtin:" + b.name;
    if (b.name == "beta") {
      BetaBundle bb = example_beta_bundle();
      def.tensor = bb.s;
      def.oneform = bb.beta;
    }
  }
  const int dim = def.metric.dim();
  if (!c.factor.empty()) def.factor = scalar_field_from_expression(c.factor, dim);
  if (!c.base.empty()) {
    Vecd x = parse_point(c.base);
    if (x.size() != dim) throw InputError("--base has " + std::to_string(x.size()) + " coordinates, chart has " + std::to_string(dim));
    def.base = x;
  }
  if (!def.base) def.base = Vecd::Zero(dim);
  def.metric.domain().require(*def.base, "base point");
  return def;
}

std::string joined_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

int cmd_analyze(const Common& c, bool no_axis_rays, const std::string& command) {
  ManifoldDefinition def = load_source(c);
  const ScalarFieldd a = def.factor ? *def.factor : ScalarFieldd::constant(1.0);
  VerdictConfig cfg;
  cfg.base_complete = def.base_complete;
  cfg.rays = c.rays;
  cfg.horizon = c.horizon;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  cfg.exhaustion = def.exhaustion;
  cfg.include_axis_rays = !no_axis_rays;
  const CompletenessVerdict v = completeness_verdict(def.metric, a, *def.base, cfg);

  const fs::path dir = output_dir(c);
  std::string witness_file;
  if (v.witness) {
    witness_file = "witness.csv";
    write_text_file((dir / witness_file).string(), trace_csv(*v.witness, def.metric));
  }
  std::string tables = "curve,T,truncation\n";
  for (const auto& t : v.tables)
    for (std::size_t k = 0; k < t.verdict.horizons.size(); ++k)
      tables += t.curve + "," + format_number(t.verdict.horizons[k]) + "," + format_number(t.verdict.truncations[k]) + "\n";
  write_text_file((dir / "truncations.csv").string(), tables);
  write_text_file((dir / "verdict.json").string(), verdict_json(v, witness_file));
  write_text_file((dir / "metadata.json").string(), metadata_json(command));

  std::cout << "verdict: " << to_string(v.kind);
  if (v.length_bound) std::cout << " length_bound=" << format_number(*v.length_bound);
  if (v.certificate) std::cout << " certificate c1=" << format_number(v.certificate->c1) << " c2=" << format_number(v.certificate->c2);
  std::cout << " rays_tested=" << v.rays_tested << "\n";
  for (const auto& d : v.diagnostics) std::cout << "  " << d << "\n";
  switch (v.kind) {
    case VerdictKind::Complete:
      return 0;
    case VerdictKind::Incomplete:
      return 1;
    default:
      return 2;
  }
}

int integral_exit(const IntegralVerdict& v) {
  std::cout << "integral: " << to_string(v.kind);
  if (v.kind == IntegralKind::Converges) std::cout << " value=" << format_number(v.value);
  if (v.kind == IntegralKind::Diverges) {
    std::cout << " " << to_string(v.rate);
    if (v.rate == DivergenceRate::Power) std::cout << " exponent=" << format_number(v.rate_exponent);
  }
  std::cout << "\n";
  return v.kind == IntegralKind::Diverges ? 0 : (v.kind == IntegralKind::Converges ? 1 : 2);
}

int cmd_integral(const Common& c, const std::string& profile, const std::string& direction, const std::string& command) {
  const std::vector<double> hz = default_horizons(c.horizon);
  if (hz.size() < 4) throw InputError("--horizon must be at least 80 (four doubling horizons from 10)");
  IntegralVerdict v;
  std::string trace;
  if (!profile.empty()) {
    if (!c.example.empty() || !c.manifold.empty() || !c.factor.empty())
      throw InputError("--profile cannot be combined with a chart or factor");
    const Expression e = Expression::compile(profile, {"s"});
    v = classify_improper_integral([&e](double s) { return e(s); }, hz);
  } else {
    ManifoldDefinition def = load_source(c);
    const ScalarFieldd a = def.factor ? *def.factor : ScalarFieldd::constant(1.0);
    const int dim = def.metric.dim();
    Vecd dir = direction.empty() ? Vecd::Unit(dim, 0).eval() : parse_point(direction);
    if (dir.size() != dim) throw InputError("--direction has the wrong dimension");
    const double speed = std::sqrt(dir.dot(def.metric.at(*def.base) * dir));
    if (!(speed > 0)) throw InputError("--direction must be non-zero");
    GeodesicOptions go;
    CurvePath ray = integrate_geodesic(def.metric, *def.base, dir / speed, c.horizon, go);
    ray.arclength = speed_drift(ray, def.metric) <= 1e-6;
    if (!ray.arclength) ray = arclength_reparam(ray, def.metric);
    const double len = ray.end_param() - ray.start_param();
    const std::vector<double> rh = ray.end == CurveEnd::Horizon ? default_horizons(len) : finite_end_horizons(len);
    const ScalarFieldd inv([&a](const Vecd& x) { return 1.0 / a(x); }, "1/A");
    v = classify_truncations(rh, weighted_truncations(inv, ray, def.metric, rh));
    trace = trace_csv(ray, def.metric);
  }
  const fs::path dir = output_dir(c);
  write_text_file((dir / "truncations.csv").string(), truncation_csv(v));
  write_text_file((dir / "integral.json").string(), integral_json(v));
  write_text_file((dir / "metadata.json").string(), metadata_json(command));
  if (!trace.empty()) write_text_file((dir / "ray.csv").string(), trace);
  return integral_exit(v);
}

// Rows separated by ';', entries by ','.
SymTensorFieldd parse_tensor_flag(const std::string& text, int dim) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream rs(text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    std::vector<std::string> entries;
    std::stringstream es(row);
    std::string e;
    while (std::getline(es, e, ',')) entries.push_back(e);
    rows.push_back(entries);
  }
  if (static_cast<int>(rows.size()) != dim) throw InputError("--tensor needs " + std::to_string(dim) + " rows");
  std::vector<Expression> table;
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != dim) throw InputError("--tensor rows need " + std::to_string(dim) + " entries");
    for (const auto& e : r) table.push_back(Expression::compile_coordinates(e, dim));
  }
  return SymTensorFieldd(
      [table, dim](const Vecd& x) {
        Matd m(dim, dim);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j) m(i, j) = table[static_cast<std::size_t>(i * dim + j)](x);
        return m;
      },
      text);
}

int cmd_norm(const Common& c, const std::string& tensor, const std::string& oneform, int axis,
             const std::string& range, int samples, const std::string& corollary, const std::string& command) {
  ManifoldDefinition def = load_source(c);
  const int dim = def.metric.dim();
  MetricChartd h = def.metric;
  if (c.example == "beta") h = example_beta_bundle().h_base;
  std::optional<SymTensorFieldd> s = def.tensor;
  if (!tensor.empty()) s = parse_tensor_flag(tensor, dim);
  if (!oneform.empty()) {
    std::vector<Expression> comps;
    std::stringstream ss(oneform);
    std::string e;
    while (std::getline(ss, e, ',')) comps.push_back(Expression::compile_coordinates(e, dim));
    if (static_cast<int>(comps.size()) != dim) throw InputError("--oneform needs " + std::to_string(dim) + " entries");
    def.oneform = OneFormd(
        [comps, dim](const Vecd& x) {
          Vecd v(dim);
          for (int i = 0; i < dim; ++i) v(i) = comps[static_cast<std::size_t>(i)](x);
          return v;
        },
        oneform);
    s = def.oneform->outer_square();
  } else if (!s && def.oneform) {
    s = def.oneform->outer_square();
  }
  if (!s) throw InputError("no tensor: give --tensor, --oneform, or a manifold/builtin that defines one");
  if (axis < 1 || axis > dim) throw InputError("--axis must be in 1.." + std::to_string(dim));
  const Vecd lim = parse_point(range);
  if (lim.size() != 2 || !(lim(0) < lim(1))) throw InputError("--range must be lo,hi with lo < hi");
  if (samples < 2) throw InputError("--samples must be >= 2");

  NormField norm(*s, h);
  std::string csv;
  for (int i = 1; i <= dim; ++i) csv += "x" + std::to_string(i) + ",";
  csv += "norm\n";
  std::vector<Vecd> pts;
  for (int k = 0; k < samples; ++k) {
    Vecd x = *def.base;
    x(axis - 1) = lim(0) + (lim(1) - lim(0)) * k / (samples - 1);
    const double n = norm.sample(x);
    pts.push_back(x);
    for (int i = 0; i < dim; ++i) csv += format_number(x(i)) + ",";
    csv += format_number(n) + "\n";
  }
  const fs::path dir = output_dir(c);
  write_text_file((dir / "norm.csv").string(), csv);
  write_text_file((dir / "metadata.json").string(), metadata_json(command));
  std::cout << "norm: " << samples << " samples, sup estimate " << format_number(norm.sup_estimate()) << "\n";

  if (corollary.empty()) return 0;
  CorollaryMode mode;
  if (corollary == "integral")
    mode = CorollaryMode::Integral;
  else if (corollary == "inequality")
    mode = CorollaryMode::Inequality;
  else
    throw InputError("--corollary must be integral or inequality");
  CorollaryOptions opt;
  opt.verdict.rays = c.rays;
  opt.verdict.horizon = c.horizon;
  opt.verdict.seed = c.seed;
  opt.verdict.threads = c.threads;
  opt.verdict.base_complete = def.base_complete;
  std::vector<CurvePath> grid;
  if (mode == CorollaryMode::Inequality) {
    // The sample line, split at the base point into two straight pieces.
    CurvePath line;
    line.params.resize(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) line.params[k] = static_cast<double>(k);
    line.points = pts;
    line.velocities.assign(pts.size(), Vecd::Unit(dim, axis - 1) * (lim(1) - lim(0)) / (samples - 1));
    grid.push_back(line);
    opt.samples_per_ray = samples;
  }
  ConstantsFn constants = c.example == "beta" ? ConstantsFn(example_constants)
                                              : ConstantsFn([](const Vecd&) { return CorollaryConstants{}; });
  const CorollaryReport rep = corollary_check(h, *s, *def.base, grid, mode, constants, opt);
  write_text_file((dir / "corollary.json").string(), corollary_json(rep));
  std::cout << "corollary (" << to_string(mode) << "): " << (rep.pass ? "pass" : "fail");
  if (mode == CorollaryMode::Inequality) std::cout << " worst_margin=" << format_number(rep.worst_margin);
  std::cout << "\n";
  return rep.pass ? 0 : 1;
}

int cmd_rays(const Common& c, const std::string& command) {
  ManifoldDefinition def = load_source(c);
  SprayOptions so;
  so.exhaustion = def.exhaustion;
  so.threads = c.threads;
  const auto rays = spray_rays(def.metric, *def.base, c.rays, c.horizon, c.seed, so);
  const fs::path dir = output_dir(c);
  std::string summary = "ray,escaped,mode,end,length,crossings\n";
  for (std::size_t i = 0; i < rays.size(); ++i) {
    const auto& r = rays[i];
    write_text_file((dir / ("ray_" + std::to_string(i) + ".csv")).string(), trace_csv(r.path, def.metric));
    summary += std::to_string(i) + "," + (r.escape.escaped ? "true" : "false") + "," + to_string(r.escape.mode) + "," +
               to_string(r.path.end) + "," + format_number(r.path.end_param() - r.path.start_param()) + "," +
               std::to_string(r.escape.crossing_params.size()) + "\n";
  }
  write_text_file((dir / "rays.csv").string(), summary);
  write_text_file((dir / "metadata.json").string(), metadata_json(command));
  std::cout << "rays: " << rays.size() << " traces written to " << dir.string() << "\n";
  return 0;
}

int cmd_example(const std::string& action, const std::string& name) {
  if (action == "list") {
    for (const auto& e : builtin_catalog()) std::cout << e.name << "\t" << e.description << "\n";
    return 0;
  }
  if (action == "describe") {
    const BuiltinEntry& e = find_builtin(name);
    std::cout << "name: " << e.name << "\ncoordinates: " << e.coordinates << "\ndescription: " << e.description
              << "\nexpected: " << e.expected << "\nbase point: " << format_point(e.base) << "\n";
    return 0;
  }
  throw InputError("example: action must be list or describe");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Completeness of conformally rescaled Riemannian metrics"};
  app.require_subcommand(1);
  Common c;
  bool no_axis_rays = false;
  std::string profile, direction, tensor, oneform, range = "-5,5", corollary, action, name;
  int axis = 1, samples = 101;

  auto* analyze = app.add_subcommand("analyze", "completeness verdict for g/A^2");
  add_source_flags(analyze, c);
  add_spray_flags(analyze, c);
  analyze->add_option("--factor", c.factor, "conformal factor A as an expression in x1..xn");
  analyze->add_flag("--no-axis-rays", no_axis_rays, "spray random directions only");

  auto* integral = app.add_subcommand("integral", "classify one improper integral");
  add_source_flags(integral, c);
  integral->add_option("--horizon", c.horizon, "largest truncation horizon")->check(CLI::PositiveNumber);
  integral->add_option("--profile", profile, "integrand as an expression in s");
  integral->add_option("--factor", c.factor, "conformal factor A; integrates 1/A along a geodesic ray");
  integral->add_option("--direction", direction, "initial direction of the ray (default: first axis)");

  auto* norm = app.add_subcommand("norm", "tensor-norm trace along a coordinate line");
  add_source_flags(norm, c);
  add_spray_flags(norm, c);
  norm->add_option("--tensor", tensor, "symmetric tensor: rows separated by ';', entries by ','");
  norm->add_option("--oneform", oneform, "one-form components separated by ','");
  norm->add_option("--axis", axis, "coordinate varied along the trace (1-based)");
  norm->add_option("--range", range, "lo,hi of the varied coordinate");
  norm->add_option("--samples", samples, "number of trace points");
  norm->add_option("--corollary", corollary, "also run the corollary check: integral | inequality");

  auto* rays = app.add_subcommand("rays", "export a geodesic spray as CSV traces");
  add_source_flags(rays, c);
  add_spray_flags(rays, c);

  auto* example = app.add_subcommand("example", "list or describe builtins");
  example->add_option("action", action, "list | describe")->required();
  example->add_option("name", name, "builtin name for describe");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitMalformed;
  }

  const std::string command = joined_args(argc, argv);
  try {
    if (*analyze) return cmd_analyze(c, no_axis_rays, command);
    if (*integral) return cmd_integral(c, profile, direction, command);
    if (*norm) return cmd_norm(c, tensor, oneform, axis, range, samples, corollary, command);
    if (*rays) return cmd_rays(c, command);
    if (*example) return cmd_example(action, name);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const ConfigurationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 70;
  }
  return kExitMalformed;
}
