#include "conformal/builtins.hpp"
#include "conformal/manifold_file.hpp"
#include "conformal/report.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>

using namespace conformal;

namespace {

Vecd vec(std::initializer_list<double> v) {
  Vecd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x(i++) = d;
  return x;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("builtin metric by name") {
    const auto def = parse_manifold(R"({"metric": "builtin:cylinder", "factor": "abs(x1)+1"})");
    CHECK(def.metric.dim() == 3);
    REQUIRE(def.factor);
    CHECK((*def.factor)(vec({-2, 1, 0})) == 3.0);
    REQUIRE(def.base);
    CHECK(def.base_complete);
    CHECK_FALSE(parse_manifold(R"({"metric": "builtin:punctured"})").base_complete);
  }

  TEST_CASE("expression metric with domain, exclusions and extras") {
    const auto def = parse_manifold(R"({
      "grammar_version": 1,
      "dim": 2,
      "domain": [{"lo": 0, "hi": "inf", "lo_edge": "puncture"}, {"periodic": true}],
      "metric": [["1", 0], [0, "x1^2"]],
      "factor": 2,
      "base": [1, 0],
      "base_complete": false,
      "tensor": [["0.25", 0], [0, 0]],
      "oneform": ["1/x1", 0],
      "exhaustion": {"shells": 10, "first_radius": 1}
    })");
    CHECK(def.metric.at(vec({3, 1}))(1, 1) == 9.0);
    CHECK_THROWS_AS(def.metric.at(vec({-1, 0})), DomainError);
    CHECK(def.metric.domain().axes[0].lo_edge == Edge::Puncture);
    CHECK(def.metric.domain().axes[1].periodic);
    CHECK((*def.factor)(vec({1, 1})) == 2.0);
    CHECK_FALSE(def.base_complete);
    CHECK((*def.tensor)(vec({1, 1}))(0, 0) == 0.25);
    CHECK((*def.oneform)(vec({4, 1}))(0) == 0.25);
    CHECK(def.exhaustion.shells == 10);
    CHECK(def.exhaustion.first_radius == 1.0);

    const auto ex = parse_manifold(R"({"dim": 2, "domain": [[-1, 1], ["-inf", "inf"]],
      "excluded": [{"axis": 2, "value": 0.5}, {"point": [0, 0]}], "metric": [[1, 0], [0, 1]]})");
    CHECK(ex.metric.domain().axes[0].lo_edge == Edge::Boundary);
    CHECK(ex.metric.domain().axes[1].lo_edge == Edge::Unbounded);
    CHECK_THROWS_AS(ex.metric.at(vec({0, 0})), DomainError);
    CHECK_THROWS_AS(ex.metric.at(vec({0.2, 0.5})), DomainError);
    CHECK_NOTHROW(ex.metric.at(vec({0.2, 0.4})));
  }

  TEST_CASE("malformed manifold files") {
    const char* bad[] = {
        "not json",
        "[]",
        R"({"dim": 1})",
        R"({"metric": "cylinder"})",
        R"({"metric": "builtin:nope"})",
        R"({"dim": 2, "metric": [[1,0],[0,1]]})",
        R"({"dim": 2, "domain": [[0,1]], "metric": [[1,0],[0,1]]})",
        R"({"dim": 1, "domain": [[1,0]], "metric": [[1]]})",
        R"({"dim": 1, "domain": [[0,1]], "metric": [["x1+"]]})",
        R"({"dim": 1, "domain": [[0,1]], "metric": [[1, 2]]})",
        R"({"dim": 1, "domain": [{"lo": 0, "hi": 1, "lo_edge": "wall"}], "metric": [[1]]})",
        R"({"dim": 1, "domain": [[0,1]], "metric": [[1]], "base": [2]})",
        R"({"dim": 1, "domain": [[0,1]], "metric": [[1]], "base": [0.5, 1]})",
        R"({"grammar_version": 7, "metric": "builtin:flat1"})",
        R"({"metric": "builtin:flat1", "exhaustion": {"radius_ratio": 0.5}})",
        R"({"dim": 1, "domain": [[0,1]], "metric": [[1]], "excluded": [{"axis": 3}]})",
        R"({"dim": "two", "metric": [[1]]})",
    };
    for (const char* text : bad) {
      CAPTURE(text);
      CHECK_THROWS_AS(parse_manifold(text, "test.json"), InputError);
    }
    CHECK_THROWS_AS(load_manifold_file("/nonexistent/file.json"), InputError);
  }

  TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    CHECK(std::stod(format_number(M_PI)) == M_PI);
  }

  TEST_CASE("trace and truncation CSV") {
    const auto cyl = cylinder_metric();
    const CurvePath c = make_curve([](double s) { return vec({s, 1, 0}); }, [](double) { return vec({1, 0, 0}); },
                                   linspace(0, 1, 3));
    const std::string csv = trace_csv(c, cyl);
    CHECK(csv.rfind("s,x1,x2,x3,v1,v2,v3,g_speed\n", 0) == 0);
    CHECK(csv.find("\n1,1,1,0,1,0,0,1\n") != std::string::npos);

    IntegralVerdict v;
    v.horizons = {10, 20};
    v.truncations = {1.5, 2.5};
    CHECK(truncation_csv(v) == "T,truncation\n10,1.5\n20,2.5\n");
  }

  TEST_CASE("verdict JSON carries no timestamp and round-trips its numbers") {
    CompletenessVerdict v;
    v.kind = VerdictKind::Incomplete;
    v.length_bound = M_PI / 2;
    v.witness_name = "axis ray 0";
    v.rays_tested = 70;
    v.escaping_curves = 3;
    v.diagnostics = {"note"};
    TruncationTable t;
    t.curve = "axis ray 0";
    t.verdict.kind = IntegralKind::Converges;
    t.verdict.value = 1.25;
    t.verdict.horizons = {10, 20, 40, 80};
    t.verdict.truncations = {1, 1.2, 1.24, 1.249};
    v.tables.push_back(t);
    const std::string a = verdict_json(v, "witness.csv");
    CHECK(a == verdict_json(v, "witness.csv"));
    const auto j = nlohmann::json::parse(a);
    CHECK(j["schema_version"] == kReportSchemaVersion);
    CHECK(j["verdict"] == "incomplete");
    CHECK(j["length_bound"].get<double>() == M_PI / 2);
    CHECK(j["witness_trace_file"] == "witness.csv");
    CHECK(j["certificate"].is_null());
    CHECK(j["truncation_tables"][0]["value"].get<double>() == 1.25);
    CHECK(j["rays_tested"] == 70);
    CHECK_FALSE(j.contains("created"));

    const auto m = nlohmann::json::parse(metadata_json("analyze"));
    CHECK(m.contains("created"));
    CHECK(m["command"] == "analyze");
  }

  TEST_CASE("corollary and integral JSON") {
    CorollaryReport r;
    r.mode = CorollaryMode::Inequality;
    r.pass = true;
    r.worst_margin = 0.25;
    r.witness_point = vec({1, 2, 3});
    const auto j = nlohmann::json::parse(corollary_json(r));
    CHECK(j["mode"] == "inequality");
    CHECK(j["pass"] == true);
    CHECK(j["worst_margin"] == 0.25);
    CHECK(j["witness_point"].size() == 3);

    IntegralVerdict v;
    v.kind = IntegralKind::Diverges;
    v.rate = DivergenceRate::Logarithmic;
    const auto k = nlohmann::json::parse(integral_json(v));
    CHECK(k["kind"] == "diverges");
    CHECK(k["rate"] == "logarithmic");
    CHECK(k["value"].is_null());
  }
}
