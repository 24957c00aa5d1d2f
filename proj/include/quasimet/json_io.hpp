#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "quasimet/almost_iso.hpp"
#include "quasimet/fermat.hpp"
#include "quasimet/finsler.hpp"
#include "quasimet/graph.hpp"
#include "quasimet/quasimetric.hpp"
#include "quasimet/rational.hpp"

namespace quasimet {

using nlohmann::json;

// Rounds to 12 significant digits, the precision of every numeric report.
double round12(double value);
std::string format12(double value);

// Space files: {"labels": [...], "d": [[...]]}. In rational mode integer
// entries stay exact and float/decimal-string entries are read as exact
// decimals, so 1.3 means 13/10.
struct SpaceInput {
    std::vector<std::string> labels;
    std::vector<std::vector<double>> d_double;
    std::vector<std::vector<Rational>> d_rational;
};
SpaceInput parse_space(const json& j);

template <class S>
json violations_to_json(const std::vector<Violation<S>>& violations) {
    json out = json::array();
    for (const auto& v : violations) {
        out.push_back({{"kind", v.kind == ViolationKind::Triangle ? "triangle" : "positivity"},
                       {"indices", v.indices},
                       {"slack", round12(scalar_traits<S>::to_double(v.slack))}});
    }
    return out;
}

template <class S>
json group_to_json(const std::vector<AlmostIsometry<S>>& group) {
    json out = json::array();
    for (const auto& a : group) {
        json potential = json::array();
        for (const auto& f : a.potential) {
            potential.push_back(round12(scalar_traits<S>::to_double(f)));
        }
        out.push_back(
            {{"map", a.map}, {"potential", potential}, {"base_point", a.base_point}});
    }
    return out;
}

// Graph files: {"n": ..., "edges": [[u, v, w], ...], "coords": [[x, y], ...]}.
DirectedWeightedGraph<double> parse_graph(const json& j);
DirectedWeightedGraph<Rational> parse_graph_rational(const json& j);

// Chart files: {"kind": "riemannian"|"randers"|"custom", "domain": [x0,x1,y0,y1],
// "h": [[expr,expr],[expr,expr]], "omega": [expr,expr], "expression": expr}.
// Metric entries are expressions in x, y; a custom metric also sees vx, vy.
FinslerChart parse_chart(const json& j);

// Splitting files: {"domain": [...], "Omega": expr(x,y,t),
// "g0": [[expr,expr],[expr,expr]], "omega": [expr,expr]}.
Splitting parse_splitting(const json& j);

json conformality_to_json(const ConformalityReport& report);
json projective_to_json(const ProjectiveReport& report);

// Distance table as CSV, row = from, column = to.
std::string distance_csv(const ShortestPathTable<double>& table,
                         const std::vector<std::string>& labels);

}  // namespace quasimet
