#pragma once

// Manifold-definition files (JSON). Schema:
//
//   {
//     "grammar_version": 1,                       optional, must match the expression grammar
//     "dim": 2,
//     "domain": [[lo, hi], ...] | [{"lo":..,"hi":..,"lo_edge":..,"hi_edge":..,"periodic":..}, ...],
//                                                 bounds are numbers or "inf"/"-inf"; edges are
//                                                 "unbounded" | "boundary" | "puncture" | "chart-singularity"
//                                                 (finite sides default to "boundary")
//     "excluded": [{"point": [..]}, {"axis": 1, "value": 0}],   axis is 1-based
//     "singular_margin": 1e-3,
//     "metric": "builtin:<name>" | [["expr", ...], ...],
//     "factor": "expr",
//     "base": [..],
//     "base_complete": true,
//     "tensor": [["expr", ...], ...],  "tensor_nonnegative": true,
//     "oneform": ["expr", ...],
//     "exhaustion": {"shells": 48, "first_radius": 2, "radius_ratio": 2,
//                    "first_margin": 0.5, "margin_ratio": 0.5}
//   }
//
// Expressions use the coordinates x1..xn. With a builtin metric, "dim" and
// "domain" may be omitted; the builtin's chart is used.

#include "conformal/chart.hpp"
#include "conformal/escape.hpp"

#include <optional>
#include <string>

namespace conformal {

struct ManifoldDefinition {
  MetricChartd metric;
  std::optional<ScalarFieldd> factor;
  std::optional<Vecd> base;
  bool base_complete = true;
  std::optional<SymTensorFieldd> tensor;
  std::optional<OneFormd> oneform;
  ExhaustionSchedule exhaustion;
  std::string source;
};

/// Throws InputError on malformed content.
ManifoldDefinition parse_manifold(const std::string& json_text, const std::string& source = "<string>");
ManifoldDefinition load_manifold_file(const std::string& path);

/// Compiles an expression in x1..x<dim> into a scalar field.
ScalarFieldd scalar_field_from_expression(const std::string& expr, int dim);

/// Parses "1,2,3" or "1 2 3" (also "pi/2" style expressions per entry).
Vecd parse_point(const std::string& text);

}  // namespace conformal
