#include "conformal/report.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace conformal {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trace_csv(const CurvePath& curve, const MetricChartd& metric) {
  const int n = curve.dim();
  std::string out = "s";
  for (int i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
  for (int i = 1; i <= n; ++i) out += ",v" + std::to_string(i);
  out += ",g_speed\n";
  for (std::size_t k = 0; k < curve.size(); ++k) {
    const Vecd& x = curve.points[k];
    const Vecd& v = curve.velocities[k];
    out += format_number(curve.params[k]);
    for (int i = 0; i < n; ++i) out += "," + format_number(x(i));
    for (int i = 0; i < n; ++i) out += "," + format_number(v(i));
    out += "," + format_number(std::sqrt(std::max(0.0, v.dot(metric.components(x) * v)))) + "\n";
  }
  return out;
}

std::string truncation_csv(const IntegralVerdict& v) {
  std::string out = "T,truncation\n";
  for (std::size_t k = 0; k < v.horizons.size(); ++k)
    out += format_number(v.horizons[k]) + "," + format_number(v.truncations[k]) + "\n";
  return out;
}

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

ordered_json integral_object(const IntegralVerdict& v) {
  ordered_json o;
  o["kind"] = to_string(v.kind);
  o["value"] = v.kind == IntegralKind::Converges ? finite_or_null(v.value) : json(nullptr);
  o["rate"] = to_string(v.rate);
  o["rate_exponent"] = v.rate == DivergenceRate::Power ? json(v.rate_exponent) : json(nullptr);
  o["horizons"] = v.horizons;
  o["truncations"] = v.truncations;
  o["note"] = v.note;
  return o;
}

}  // namespace

std::string verdict_json(const CompletenessVerdict& v, const std::string& witness_trace_file) {
  ordered_json o;
  o["schema_version"] = kReportSchemaVersion;
  o["verdict"] = to_string(v.kind);
  o["witness_trace_file"] = witness_trace_file.empty() ? json(nullptr) : json(witness_trace_file);
  o["witness"] = v.witness_name.empty() ? json(nullptr) : json(v.witness_name);
  o["length_bound"] = v.length_bound ? finite_or_null(*v.length_bound) : json(nullptr);
  if (v.certificate) {
    ordered_json c;
    c["kind"] = to_string(v.certificate->kind);
    c["c1"] = v.certificate->c1;
    c["c2"] = v.certificate->c2;
    c["eps"] = v.certificate->kind == GrowthKind::Superlinear ? json(v.certificate->eps) : json(nullptr);
    o["certificate"] = c;
  } else {
    o["certificate"] = nullptr;
  }
  ordered_json g;
  g["kind"] = to_string(v.growth.kind);
  g["c1"] = v.growth.c1;
  g["c2"] = v.growth.c2;
  g["eps"] = v.growth.eps;
  g["fit_residual"] = v.growth.fit_residual;
  g["note"] = v.growth.note;
  o["growth"] = g;
  o["rays_tested"] = v.rays_tested;
  o["escaping_curves"] = v.escaping_curves;
  ordered_json tables = ordered_json::array();
  for (const auto& t : v.tables) {
    ordered_json e = integral_object(t.verdict);
    e["curve"] = t.curve;
    tables.push_back(e);
  }
  o["truncation_tables"] = tables;
  o["diagnostics"] = v.diagnostics;
  return o.dump(2) + "\n";
}

std::string integral_json(const IntegralVerdict& v) {
  ordered_json o;
  o["schema_version"] = kReportSchemaVersion;
  o.update(integral_object(v));
  return o.dump(2) + "\n";
}

std::string corollary_json(const CorollaryReport& r) {
  ordered_json o;
  o["schema_version"] = kReportSchemaVersion;
  o["mode"] = to_string(r.mode);
  o["pass"] = r.pass;
  o["worst_margin"] = r.mode == CorollaryMode::Inequality ? finite_or_null(r.worst_margin) : json(nullptr);
  o["witness_point"] = std::vector<double>(r.witness_point.data(), r.witness_point.data() + r.witness_point.size());
  o["sup_norm_estimate"] = r.sup_norm_estimate;
  o["points_checked"] = r.points_checked;
  o["verdict"] = r.verdict ? json(to_string(r.verdict->kind)) : json(nullptr);
  o["note"] = r.note;
  return o.dump(2) + "\n";
}

std::string metadata_json(const std::string& command) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  ordered_json o;
  o["tool"] = "conformal";
  o["schema_version"] = kReportSchemaVersion;
  o["created"] = buf;
  o["command"] = command;
  return o.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write '" + path + "'");
  out << content;
  if (!out) throw ConfigurationError("write failed for '" + path + "'");
}

}  // namespace conformal
