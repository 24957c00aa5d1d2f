#include "quasimet/json_io.hpp"

#include <cstdio>
#include <stdexcept>

#include "quasimet/expression.hpp"

namespace quasimet {

std::string format12(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

double round12(double value) { return std::strtod(format12(value).c_str(), nullptr); }

namespace {

Rational rational_entry(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_float()) return Rational::from_double(j.get<double>());
    throw std::invalid_argument("expected a number or rational string");
}

double double_entry(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return Rational::parse(j.get<std::string>()).to_double();
    throw std::invalid_argument("expected a number");
}

Rect parse_domain(const json& j) {
    if (!j.is_array() || j.size() != 4) {
        throw std::invalid_argument("domain must be [x0, x1, y0, y1]");
    }
    Rect r{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) {
        throw std::invalid_argument("domain rectangle is empty");
    }
    return r;
}

Expr expr_entry(const json& j, const std::vector<std::string>& vars) {
    if (j.is_number()) return Expr::constant(j.get<double>());
    if (j.is_string()) return Expr::parse(j.get<std::string>(), vars);
    throw std::invalid_argument("expected an expression string or number");
}

std::function<Sym2(Vec2)> matrix_field(const json& j, const std::vector<std::string>& vars) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 ||
        !j[1].is_array() || j[1].size() != 2) {
        throw std::invalid_argument("metric must be a 2x2 array");
    }
    Expr exx = expr_entry(j[0][0], vars);
    Expr exy = expr_entry(j[0][1], vars);
    Expr eyx = expr_entry(j[1][0], vars);
    Expr eyy = expr_entry(j[1][1], vars);
    return [exx, exy, eyx, eyy](Vec2 p) {
        const double vals[] = {p.x, p.y};
        const double off = 0.5 * (exy.eval(vals) + eyx.eval(vals));
        return Sym2{exx.eval(vals), off, eyy.eval(vals)};
    };
}

std::function<Vec2(Vec2)> covector_field(const json& j, const std::vector<std::string>& vars) {
    if (!j.is_array() || j.size() != 2) {
        throw std::invalid_argument("one-form must be a 2-entry array");
    }
    Expr e1 = expr_entry(j[0], vars);
    Expr e2 = expr_entry(j[1], vars);
    return [e1, e2](Vec2 p) {
        const double vals[] = {p.x, p.y};
        return Vec2{e1.eval(vals), e2.eval(vals)};
    };
}

}  // namespace

SpaceInput parse_space(const json& j) {
    if (!j.contains("d") || !j["d"].is_array()) {
        throw std::invalid_argument("space file needs a \"d\" matrix");
    }
    SpaceInput input;
    if (j.contains("labels")) input.labels = j["labels"].get<std::vector<std::string>>();
    const json& d = j["d"];
    const std::size_t n = d.size();
    input.d_double.resize(n);
    input.d_rational.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!d[i].is_array() || d[i].size() != n) {
            throw std::invalid_argument("\"d\" must be a square matrix");
        }
        for (const auto& cell : d[i]) {
            input.d_double[i].push_back(double_entry(cell));
            input.d_rational[i].push_back(rational_entry(cell));
        }
    }
    return input;
}

namespace {

template <class S, class EntryFn>
DirectedWeightedGraph<S> parse_graph_impl(const json& j, EntryFn entry) {
    DirectedWeightedGraph<S> g;
    if (!j.contains("n") || !j.contains("edges")) {
        throw std::invalid_argument("graph file needs \"n\" and \"edges\"");
    }
    g.n = j["n"].get<int>();
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 3) {
            throw std::invalid_argument("edges must be [from, to, weight] triples");
        }
        g.edges.push_back({e[0].get<int>(), e[1].get<int>(), entry(e[2])});
    }
    if (j.contains("coords")) {
        std::vector<Vec2> coords;
        for (const auto& c : j["coords"]) {
            coords.push_back({c[0].get<double>(), c[1].get<double>()});
        }
        g.coords = std::move(coords);
    }
    g.check();
    return g;
}

}  // namespace

DirectedWeightedGraph<double> parse_graph(const json& j) {
    return parse_graph_impl<double>(j, double_entry);
}

DirectedWeightedGraph<Rational> parse_graph_rational(const json& j) {
    return parse_graph_impl<Rational>(j, rational_entry);
}

FinslerChart parse_chart(const json& j) {
    const Rect domain = parse_domain(j.at("domain"));
    const std::string kind = j.value("kind", "custom");
    const std::vector<std::string> point_vars{"x", "y"};
    if (kind == "riemannian") {
        return riemannian_chart(domain, matrix_field(j.at("h"), point_vars));
    }
    if (kind == "randers") {
        return randers_chart(domain, matrix_field(j.at("h"), point_vars),
                             covector_field(j.at("omega"), point_vars));
    }
    if (kind == "custom") {
        const std::vector<std::string> fiber_vars{"x", "y", "vx", "vy"};
        Expr f = Expr::parse(j.at("expression").get<std::string>(), fiber_vars);
        return custom_chart(domain, [f](Vec2 x, Vec2 v) {
            const double vals[] = {x.x, x.y, v.x, v.y};
            return f.eval(vals);
        });
    }
    throw std::invalid_argument("unknown chart kind \"" + kind + "\"");
}

Splitting parse_splitting(const json& j) {
    Splitting split;
    split.domain = parse_domain(j.at("domain"));
    const std::vector<std::string> point_vars{"x", "y"};
    const std::vector<std::string> spacetime_vars{"x", "y", "t"};
    Expr omega_expr = expr_entry(j.value("Omega", json("1")), spacetime_vars);
    split.Omega = [omega_expr](Vec2 p, double t) {
        const double vals[] = {p.x, p.y, t};
        return omega_expr.eval(vals);
    };
    split.g0 = matrix_field(j.at("g0"), point_vars);
    split.omega = covector_field(j.at("omega"), point_vars);
    return split;
}

json conformality_to_json(const ConformalityReport& report) {
    return {{"pass", report.pass},
            {"lambda_min", round12(report.lambda_min)},
            {"lambda_max", round12(report.lambda_max)},
            {"max_pair_spread", round12(report.max_pair_spread)}};
}

json projective_to_json(const ProjectiveReport& report) {
    const char* stage = "none";
    switch (report.failure) {
        case ProjectiveFailure::None: stage = "none"; break;
        case ProjectiveFailure::NonLinear: stage = "linearity"; break;
        case ProjectiveFailure::NotClosed: stage = "closedness"; break;
        case ProjectiveFailure::PathDependent: stage = "path"; break;
    }
    return {{"related", report.related},
            {"failed_stage", stage},
            {"linearity_error", round12(report.linearity_error)},
            {"closedness_error", round12(report.closedness_error)},
            {"path_error", round12(report.path_error)}};
}

std::string distance_csv(const ShortestPathTable<double>& table,
                         const std::vector<std::string>& labels) {
    if (static_cast<int>(labels.size()) != table.n) {
        throw std::invalid_argument("label count must match table size");
    }
    std::string out = "from\\to";
    for (const auto& l : labels) {
        out += ',';
        out += l;
    }
    out += '\n';
    for (int i = 0; i < table.n; ++i) {
        out += labels[i];
        for (int j = 0; j < table.n; ++j) {
            out += ',';
            const auto& d = table.distance(i, j);
            out += d ? format12(*d) : "inf";
        }
        out += '\n';
    }
    return out;
}

}  // namespace quasimet
