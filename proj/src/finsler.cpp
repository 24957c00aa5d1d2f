#include "quasimet/finsler.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quasimet/expression.hpp"

namespace quasimet {

namespace {

constexpr double kZeroSectionGuard = 1e-8;

void check_domain(const FinslerChart& chart, Vec2 x) {
    if (!chart.domain.contains(x, 1e-12)) {
        throw std::domain_error("point outside chart domain");
    }
}

double sq(double v) { return v * v; }

}  // namespace

FinslerChart euclidean_chart(const Rect& domain) {
    FinslerChart chart;
    chart.domain = domain;
    chart.kind = ChartKind::Riemannian;
    chart.metric = [](Vec2, Vec2 v) { return v.norm(); };
    chart.randers = RandersData{[](Vec2) { return Sym2::identity(); }, [](Vec2) { return Vec2{}; }};
    return chart;
}

FinslerChart riemannian_chart(const Rect& domain, std::function<Sym2(Vec2)> h) {
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            Vec2 x = domain.lerp(i / 4.0, j / 4.0);
            if (!h(x).positive_definite()) {
                throw std::invalid_argument("riemannian metric not positive definite");
            }
        }
    }
    FinslerChart chart;
    chart.domain = domain;
    chart.kind = ChartKind::Riemannian;
    auto hh = h;
    chart.metric = [hh](Vec2 x, Vec2 v) { return std::sqrt(hh(x).quad(v)); };
    chart.randers = RandersData{std::move(h), [](Vec2) { return Vec2{}; }};
    return chart;
}

double max_omega_norm(const RandersData& data, const Rect& domain, int grid) {
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            Vec2 x = domain.lerp(grid == 1 ? 0.5 : i / double(grid - 1),
                                 grid == 1 ? 0.5 : j / double(grid - 1));
            Sym2 h = data.h(x);
            if (!h.positive_definite()) {
                throw std::invalid_argument("randers base metric not positive definite");
            }
            Vec2 w = data.omega(x);
            worst = std::max(worst, std::sqrt(h.inverse().quad(w)));
        }
    }
    return worst;
}

FinslerChart randers_chart(const Rect& domain, std::function<Sym2(Vec2)> h,
                           std::function<Vec2(Vec2)> omega) {
    RandersData data{std::move(h), std::move(omega)};
    if (max_omega_norm(data, domain) >= 1.0) {
        throw std::invalid_argument("randers one-form has h-norm >= 1 somewhere");
    }
    FinslerChart chart;
    chart.domain = domain;
    chart.kind = ChartKind::Randers;
    auto hh = data.h;
    auto ww = data.omega;
    chart.metric = [hh, ww](Vec2 x, Vec2 v) {
        return std::sqrt(hh(x).quad(v)) + ww(x).dot(v);
    };
    chart.randers = std::move(data);
    return chart;
}

FinslerChart custom_chart(const Rect& domain, std::function<double(Vec2, Vec2)> metric,
                          bool smooth) {
    // Spot checks: positive homogeneity and definiteness across fixed samples.
    const Vec2 probes[] = {{1.0, 0.0}, {0.0, 1.0}, {-0.6, 0.8}, {0.3, -0.4}, {-1.0, -2.0}};
    const double lambdas[] = {0.5, 2.0, 10.0};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            Vec2 x = domain.lerp(i / 2.0, j / 2.0);
            if (std::fabs(metric(x, Vec2{})) > 1e-12) {
                throw std::invalid_argument("custom metric must vanish at v = 0");
            }
            for (Vec2 v : probes) {
                double f = metric(x, v);
                if (!(f > 0.0)) throw std::invalid_argument("custom metric not positive");
                for (double lam : lambdas) {
                    if (std::fabs(metric(x, v * lam) - lam * f) > 1e-9 * lam * f) {
                        throw std::invalid_argument("custom metric not positively homogeneous");
                    }
                }
            }
        }
    }
    FinslerChart chart;
    chart.domain = domain;
    chart.kind = ChartKind::Custom;
    chart.smooth = smooth;
    chart.metric = std::move(metric);
    return chart;
}

double eval(const FinslerChart& chart, Vec2 x, Vec2 v) {
    check_domain(chart, x);
    return chart.metric(x, v);
}

Sym2 fundamental_tensor(const FinslerChart& chart, Vec2 x, Vec2 u, double step) {
    if (!chart.smooth) throw std::domain_error("chart is not smooth away from the zero section");
    if (u.norm() < kZeroSectionGuard) {
        throw std::invalid_argument("direction too close to the zero section");
    }
    const double h = step > 0.0 ? step : 1e-4 * std::max(1.0, u.norm());

    auto f2 = [&](Vec2 v) { return sq(chart.metric(x, v)); };
    auto mixed = [&](Vec2 v, Vec2 w) {
        return (f2(u + v * h + w * h) - f2(u + v * h - w * h) - f2(u - v * h + w * h) +
                f2(u - v * h - w * h)) /
               (4.0 * h * h);
    };
    const Vec2 e1{1.0, 0.0}, e2{0.0, 1.0};
    return Sym2{0.5 * mixed(e1, e1), 0.5 * mixed(e1, e2), 0.5 * mixed(e2, e2)};
}

FinslerChart symmetrize(const FinslerChart& chart) {
    FinslerChart out;
    out.domain = chart.domain;
    out.kind = chart.kind == ChartKind::Riemannian ? ChartKind::Riemannian : ChartKind::Custom;
    out.smooth = chart.smooth;
    auto f = chart.metric;
    out.metric = [f](Vec2 x, Vec2 v) { return 0.5 * (f(x, v) + f(x, -v)); };
    return out;
}

Sym2 average_metric(const FinslerChart& chart, Vec2 x, int quadrature_points) {
    if (quadrature_points < 16) {
        throw std::invalid_argument("quadrature needs at least 16 points");
    }
    check_domain(chart, x);

    const double dtheta = 2.0 * std::numbers::pi / quadrature_points;
    double area2 = 0.0;  // 2 * area of the unit ball
    Sym2 accum{};
    for (int k = 0; k < quadrature_points; ++k) {
        const double theta = k * dtheta;
        const Vec2 e{std::cos(theta), std::sin(theta)};
        const double fe = chart.metric(x, e);
        if (!(fe > 0.0)) throw std::domain_error("metric not positive on the circle");
        const double r = 1.0 / fe;
        const double r2 = r * r;
        Sym2 g = fundamental_tensor(chart, x, e * r);
        if (!g.positive_definite()) {
            throw std::domain_error("chart is not strongly convex at a quadrature sample");
        }
        accum = accum + g * r2;
        area2 += r2;
    }
    // dtheta cancels between the integral and the ball area.
    const double area = 0.5 * area2;
    return accum * (1.0 / area);
}

namespace {

struct GridSpec {
    Rect domain;
    int res;
    double hx;
    double hy;

    Vec2 point(int ix, int iy) const {
        return {domain.x0 + ix * hx, domain.y0 + iy * hy};
    }
};

}  // namespace

ProjectiveReport projective_test(const FinslerChart& c1, const FinslerChart& c2,
                                 const ProjectiveTestOptions& options) {
    const Rect domain = options.domain.value_or(c1.domain);
    const int res = options.resolution;
    if (res < 8) throw std::invalid_argument("projective test resolution must be at least 8");
    GridSpec grid{domain, res, domain.width() / (res - 1), domain.height() / (res - 1)};

    auto diff = [&](Vec2 x, Vec2 v) { return c1.metric(x, v) - c2.metric(x, v); };

    ProjectiveReport report;

    // Stage 1: D(x, .) must be linear on fibers. Additivity over a fixed
    // basis of pairs plus odd symmetry pins this down.
    const Vec2 probes[] = {{1.0, 0.0}, {0.0, 1.0}, {0.6, 0.8}, {-0.8, 0.6}, {0.5, -1.2}};
    double linearity = 0.0;
    for (int ix = 0; ix < res; ++ix) {
        for (int iy = 0; iy < res; ++iy) {
            const Vec2 x = grid.point(ix, iy);
            for (std::size_t a = 0; a < std::size(probes); ++a) {
                const double da = diff(x, probes[a]);
                linearity = std::max(linearity, std::fabs(diff(x, -probes[a]) + da));
                for (std::size_t b = a + 1; b < std::size(probes); ++b) {
                    const double additivity =
                        diff(x, probes[a] + probes[b]) - da - diff(x, probes[b]);
                    linearity = std::max(linearity, std::fabs(additivity));
                }
            }
        }
    }
    report.linearity_error = linearity;
    if (linearity > options.tolerance) {
        report.failure = ProjectiveFailure::NonLinear;
        return report;
    }

    // The difference is linear; read off the one-form on the grid.
    std::vector<double> beta1(static_cast<std::size_t>(res) * res);
    std::vector<double> beta2(static_cast<std::size_t>(res) * res);
    for (int ix = 0; ix < res; ++ix) {
        for (int iy = 0; iy < res; ++iy) {
            const Vec2 x = grid.point(ix, iy);
            beta1[ix * res + iy] = diff(x, {1.0, 0.0});
            beta2[ix * res + iy] = diff(x, {0.0, 1.0});
        }
    }

    // Stage 2: closedness d1(beta2) = d2(beta1) by interior central
    // differences.
    double curl = 0.0;
    for (int ix = 1; ix + 1 < res; ++ix) {
        for (int iy = 1; iy + 1 < res; ++iy) {
            const double d1b2 =
                (beta2[(ix + 1) * res + iy] - beta2[(ix - 1) * res + iy]) / (2.0 * grid.hx);
            const double d2b1 =
                (beta1[ix * res + iy + 1] - beta1[ix * res + iy - 1]) / (2.0 * grid.hy);
            curl = std::max(curl, std::fabs(d1b2 - d2b1));
        }
    }
    report.closedness_error = curl;
    if (curl > options.closedness_tolerance) {
        report.failure = ProjectiveFailure::NotClosed;
        return report;
    }

    // Stage 3: integrate from the corner along the horizontal-then-vertical
    // staircase; the transposed staircase must agree.
    std::vector<double> along_x(static_cast<std::size_t>(res) * res);  // per row
    std::vector<double> along_y(static_cast<std::size_t>(res) * res);  // per column
    for (int iy = 0; iy < res; ++iy) {
        for (int ix = 1; ix < res; ++ix) {
            along_x[ix * res + iy] =
                along_x[(ix - 1) * res + iy] +
                0.5 * grid.hx * (beta1[(ix - 1) * res + iy] + beta1[ix * res + iy]);
        }
    }
    for (int ix = 0; ix < res; ++ix) {
        for (int iy = 1; iy < res; ++iy) {
            along_y[ix * res + iy] =
                along_y[ix * res + iy - 1] +
                0.5 * grid.hy * (beta2[ix * res + iy - 1] + beta2[ix * res + iy]);
        }
    }

    ScalarGrid potential{domain, res, std::vector<double>(static_cast<std::size_t>(res) * res)};
    double path_error = 0.0;
    for (int ix = 0; ix < res; ++ix) {
        for (int iy = 0; iy < res; ++iy) {
            const double horizontal_first = along_x[ix * res] + along_y[ix * res + iy];
            const double vertical_first = along_y[iy] + along_x[ix * res + iy];
            path_error = std::max(path_error, std::fabs(horizontal_first - vertical_first));
            potential.values[ix * res + iy] = horizontal_first;
        }
    }
    report.path_error = path_error;
    if (path_error > options.path_tolerance) {
        report.failure = ProjectiveFailure::PathDependent;
        return report;
    }

    report.related = true;
    report.potential = std::move(potential);
    return report;
}

PlanarMap PlanarMap::identity() {
    return {[](Vec2 p) { return p; }, [](Vec2 p) { return p; },
            [](Vec2) { return Mat2::identity(); }};
}

PlanarMap PlanarMap::translation(Vec2 offset) {
    return {[offset](Vec2 p) { return p + offset; }, [offset](Vec2 p) { return p - offset; },
            [](Vec2) { return Mat2::identity(); }};
}

PlanarMap PlanarMap::rotation(double angle) {
    Mat2 rot = Mat2::rotation(angle);
    Mat2 inv = Mat2::rotation(-angle);
    return {[rot](Vec2 p) { return rot.apply(p); }, [inv](Vec2 p) { return inv.apply(p); },
            [rot](Vec2) { return rot; }};
}

PlanarMap PlanarMap::shear(double factor) {
    Mat2 m{1.0, factor, 0.0, 1.0};
    Mat2 inv{1.0, -factor, 0.0, 1.0};
    return {[m](Vec2 p) { return m.apply(p); }, [inv](Vec2 p) { return inv.apply(p); },
            [m](Vec2) { return m; }};
}

PlanarMap PlanarMap::from_expressions(const std::string& fx, const std::string& fy,
                                      const std::string& inv_fx, const std::string& inv_fy) {
    const std::vector<std::string> vars{"x", "y"};
    Expr ex = Expr::parse(fx, vars);
    Expr ey = Expr::parse(fy, vars);
    Expr ix = Expr::parse(inv_fx, vars);
    Expr iy = Expr::parse(inv_fy, vars);
    Expr dxx = ex.derivative(0), dxy = ex.derivative(1);
    Expr dyx = ey.derivative(0), dyy = ey.derivative(1);

    auto apply = [](const Expr& a, const Expr& b) {
        return [a, b](Vec2 p) {
            const double vals[] = {p.x, p.y};
            return Vec2{a.eval(vals), b.eval(vals)};
        };
    };
    PlanarMap map;
    map.forward = apply(ex, ey);
    map.inverse = apply(ix, iy);
    map.jacobian = [dxx, dxy, dyx, dyy](Vec2 p) {
        const double vals[] = {p.x, p.y};
        return Mat2{dxx.eval(vals), dxy.eval(vals), dyx.eval(vals), dyy.eval(vals)};
    };
    return map;
}

FinslerChart pushforward_chart(const PlanarMap& map, const FinslerChart& source,
                               const Rect& domain) {
    FinslerChart out;
    out.domain = domain;
    out.kind = ChartKind::Custom;
    out.smooth = source.smooth;
    auto f = source.metric;
    auto inv = map.inverse;
    auto jac = map.jacobian;
    Rect source_domain = source.domain;
    out.metric = [f, inv, jac, source_domain](Vec2 y, Vec2 w) {
        const Vec2 x = inv(y);
        if (!source_domain.contains(x, 1e-9)) {
            throw std::domain_error("pushforward probe leaves the source chart domain");
        }
        const Mat2 j = jac(x);
        if (std::fabs(j.det()) < 1e-12) {
            throw std::domain_error("map Jacobian is singular at a sample");
        }
        return f(x, j.inverse().apply(w));
    };
    return out;
}

PushforwardReport pushforward_check(const PlanarMap& map, const FinslerChart& c1,
                                    const FinslerChart& c2,
                                    const ProjectiveTestOptions& options) {
    const Rect probe = options.domain.value_or(c2.domain);
    FinslerChart pushed = pushforward_chart(map, c1, probe);
    ProjectiveTestOptions opts = options;
    opts.domain = probe;
    PushforwardReport report;
    report.projective = projective_test(c2, pushed, opts);
    report.pass = report.projective.related;
    return report;
}

}  // namespace quasimet
