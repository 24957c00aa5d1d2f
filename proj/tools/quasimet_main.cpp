// quasimet: validate quasi-metric spaces, enumerate extended isometry
// groups, and run Fermat-metric pipelines from JSON descriptions.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "quasimet/almost_iso.hpp"
#include "quasimet/expression.hpp"
#include "quasimet/fermat.hpp"
#include "quasimet/finsler.hpp"
#include "quasimet/graph.hpp"
#include "quasimet/json_io.hpp"
#include "quasimet/quasimetric.hpp"

namespace {

using quasimet::json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitMath = 2;
constexpr int kExitCap = 3;

struct GlobalOptions {
    std::string arithmetic = "rational";
    double tolerance = 1e-9;
    int search_cap = 10;
    int resolution = 32;
    std::uint64_t seed = 0;
    std::string out;
};

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

int emit(const GlobalOptions& opts, const json& report, int code) {
    const std::string text = report.dump(2) + "\n";
    if (opts.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opts.out);
        if (!out) {
            std::cerr << "cannot write " << opts.out << "\n";
            return kExitInput;
        }
        out << text;
    }
    return code;
}

int run_validate(const GlobalOptions& opts, const std::string& path) {
    json input = load_json(path);
    auto space = quasimet::parse_space(input);
    json report{{"seed", opts.seed}, {"arithmetic", opts.arithmetic}};
    if (opts.arithmetic == "rational") {
        auto result = quasimet::QuasiMetric<quasimet::Rational>::validate(
            space.d_rational, space.labels, quasimet::Rational::from_double(opts.tolerance));
        report["valid"] = result.ok();
        if (!result.ok()) report["violations"] = quasimet::violations_to_json(result.violations);
        return emit(opts, report, result.ok() ? kExitOk : kExitMath);
    }
    auto result = quasimet::QuasiMetric<double>::validate(space.d_double, space.labels,
                                                          opts.tolerance);
    report["valid"] = result.ok();
    if (!result.ok()) report["violations"] = quasimet::violations_to_json(result.violations);
    return emit(opts, report, result.ok() ? kExitOk : kExitMath);
}

template <class S>
int run_group_typed(const GlobalOptions& opts, const std::vector<std::vector<S>>& d,
                    const std::vector<std::string>& labels, S tolerance) {
    auto result = quasimet::QuasiMetric<S>::validate(d, labels, tolerance);
    json report{{"seed", opts.seed}, {"arithmetic", opts.arithmetic}};
    if (!result.ok()) {
        report["valid"] = false;
        report["violations"] = quasimet::violations_to_json(result.violations);
        return emit(opts, report, kExitMath);
    }
    try {
        auto group = quasimet::enumerate_extended_group(*result.space, opts.search_cap);
        report["size"] = group.size();
        report["group"] = quasimet::group_to_json(group);
        return emit(opts, report, kExitOk);
    } catch (const quasimet::SearchCapExceeded& e) {
        report["error"] = e.what();
        return emit(opts, report, kExitCap);
    }
}

int run_group(const GlobalOptions& opts, const std::string& path) {
    json input = load_json(path);
    auto space = quasimet::parse_space(input);
    if (opts.arithmetic == "rational") {
        return run_group_typed<quasimet::Rational>(
            opts, space.d_rational, space.labels,
            quasimet::Rational::from_double(opts.tolerance));
    }
    return run_group_typed<double>(opts, space.d_double, space.labels, opts.tolerance);
}

quasimet::PlanarMap parse_map_spec(const std::string& spec) {
    if (spec == "identity") return quasimet::PlanarMap::identity();
    double a = 0.0, b = 0.0;
    if (std::sscanf(spec.c_str(), "translate(%lf,%lf)", &a, &b) == 2) {
        return quasimet::PlanarMap::translation({a, b});
    }
    if (std::sscanf(spec.c_str(), "rotate(%lf)", &a) == 1) {
        return quasimet::PlanarMap::rotation(a);
    }
    if (std::sscanf(spec.c_str(), "shear(%lf)", &a) == 1) {
        return quasimet::PlanarMap::shear(a);
    }
    throw std::runtime_error(
        "bad map spec '" + spec +
        "' (expected identity, translate(dx,dy), rotate(angle) or shear(k))");
}

json chart_summary(const quasimet::FinslerChart& chart) {
    json samples = json::array();
    const quasimet::Vec2 probes[] = {{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.6, 0.8}};
    const quasimet::Vec2 x = {0.5 * (chart.domain.x0 + chart.domain.x1),
                              0.5 * (chart.domain.y0 + chart.domain.y1)};
    for (const auto& v : probes) {
        samples.push_back({{"v", {v.x, v.y}}, {"F", quasimet::round12(chart.metric(x, v))}});
    }
    json out{{"domain", {chart.domain.x0, chart.domain.x1, chart.domain.y0, chart.domain.y1}},
             {"kind", "randers"},
             {"center_samples", samples}};
    if (chart.randers) {
        out["max_omega_h_norm"] =
            quasimet::round12(quasimet::max_omega_norm(*chart.randers, chart.domain));
    }
    return out;
}

int run_fermat(const GlobalOptions& opts, const std::string& path,
               const std::optional<std::string>& reslice_expr, bool with_distances,
               const std::vector<std::string>& lift_spec, const std::string& csv_out) {
    json input = load_json(path);
    quasimet::Splitting split = quasimet::parse_splitting(input);
    json report{{"seed", opts.seed}, {"arithmetic", opts.arithmetic}};
    int code = kExitOk;

    quasimet::FinslerChart chart;
    try {
        chart = quasimet::fermat_metric(split);
    } catch (const std::invalid_argument& e) {
        report["error"] = e.what();
        return emit(opts, report, kExitMath);
    }
    report["fermat"] = chart_summary(chart);

    std::optional<quasimet::Splitting> resliced;
    if (reslice_expr) {
        auto f = quasimet::ScalarField::from_expression(*reslice_expr);
        auto result = quasimet::reslice(split, f);
        if (result.ok()) {
            resliced = *result.splitting;
            report["reslice"] = {{"ok", true},
                                 {"fermat", chart_summary(quasimet::fermat_metric(*resliced))}};
        } else {
            report["reslice"] = {
                {"ok", false},
                {"point", {result.violation->point.x, result.violation->point.y}},
                {"omega_h_norm", quasimet::round12(result.violation->omega_norm)},
                {"slack", quasimet::round12(result.violation->slack)}};
            code = kExitMath;
        }
    }

    if (with_distances) {
        auto grid = quasimet::discretize_planar_metric(chart.metric, chart.domain,
                                                       opts.resolution);
        auto table = quasimet::induced_quasimetric(grid);
        std::string csv = quasimet::distance_csv(table, quasimet::grid_labels(opts.resolution));
        if (!csv_out.empty()) {
            std::ofstream out(csv_out);
            if (!out) throw std::runtime_error("cannot write " + csv_out);
            out << csv;
            report["distances_file"] = csv_out;
        } else {
            report["distances_csv"] = csv;
        }
    }

    if (!lift_spec.empty()) {
        auto phi = parse_map_spec(lift_spec[0]);
        auto f = quasimet::ScalarField::from_expression(lift_spec[1]);
        const quasimet::Splitting& target = resliced ? *resliced : split;
        auto result = quasimet::lift(phi, f, split, target);
        json lift_report{{"certified", result.ok()}};
        lift_report["pushforward"] = quasimet::projective_to_json(result.pushforward.projective);
        lift_report["potential_mismatch"] = quasimet::round12(result.potential_mismatch);
        if (result.ok()) {
            lift_report["conformality"] = quasimet::conformality_to_json(
                quasimet::verify_conformality(*result.lift, split, target));
        } else {
            code = kExitMath;
        }
        report["lift"] = lift_report;
    }

    return emit(opts, report, code);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quasi-metric spaces, almost isometries and Fermat metrics"};
    app.require_subcommand(1);

    GlobalOptions opts;
    app.add_option("--arithmetic", opts.arithmetic, "rational or float")
        ->check(CLI::IsMember({"rational", "float"}));
    app.add_option("--tol", opts.tolerance, "comparison tolerance")->check(CLI::NonNegativeNumber);
    app.add_option("--cap", opts.search_cap, "group search cap")->check(CLI::PositiveNumber);
    app.add_option("--res", opts.resolution, "grid resolution")->check(CLI::Range(8, 4096));
    app.add_option("--seed", opts.seed, "seed recorded in reports");
    app.add_option("--out", opts.out, "write the report to this path");

    std::string space_path;
    auto* validate = app.add_subcommand("validate", "check the quasi-metric axioms");
    validate->add_option("input", space_path, "space JSON file")->required();

    std::string group_path;
    auto* group = app.add_subcommand("group", "enumerate the extended isometry group");
    group->add_option("input", group_path, "space JSON file")->required();

    std::string splitting_path;
    std::optional<std::string> reslice_expr;
    bool with_distances = false;
    std::vector<std::string> lift_spec;
    std::string csv_out;
    auto* fermat = app.add_subcommand("fermat", "Fermat metric pipelines");
    fermat->add_option("input", splitting_path, "splitting JSON file")->required();
    fermat->add_option("--reslice", reslice_expr, "slice expression f(x, y)");
    fermat->add_flag("--distances", with_distances, "emit the discretized distance table");
    fermat->add_option("--lift", lift_spec, "map spec and potential expression")
        ->expected(2);
    fermat->add_option("--csv-out", csv_out, "write the distance CSV to this path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return run_validate(opts, space_path);
        if (group->parsed()) return run_group(opts, group_path);
        if (fermat->parsed()) {
            return run_fermat(opts, splitting_path, reslice_expr, with_distances, lift_spec,
                              csv_out);
        }
    } catch (const quasimet::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
