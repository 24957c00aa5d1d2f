#include "quasimet/fermat.hpp"

#include <cmath>
#include <stdexcept>

#include "quasimet/expression.hpp"

namespace quasimet {

ScalarField ScalarField::zero() { return linear(0.0, 0.0, 0.0); }

ScalarField ScalarField::linear(double ax, double ay, double c) {
    return {[ax, ay, c](Vec2 p) { return ax * p.x + ay * p.y + c; },
            [ax, ay](Vec2) { return Vec2{ax, ay}; }};
}

ScalarField ScalarField::from_expression(const std::string& text) {
    const std::vector<std::string> vars{"x", "y"};
    Expr f = Expr::parse(text, vars);
    Expr fx = f.derivative(0);
    Expr fy = f.derivative(1);
    return {[f](Vec2 p) {
                const double vals[] = {p.x, p.y};
                return f.eval(vals);
            },
            [fx, fy](Vec2 p) {
                const double vals[] = {p.x, p.y};
                return Vec2{fx.eval(vals), fy.eval(vals)};
            }};
}

Splitting static_splitting(const Rect& domain) {
    return {domain, [](Vec2, double) { return 1.0; }, [](Vec2) { return Sym2::identity(); },
            [](Vec2) { return Vec2{}; }};
}

double spacetime_metric(const Splitting& split, Vec2 x, double t, Vec2 v, double tau, Vec2 w,
                        double sigma) {
    const Sym2 g0 = split.g0(x);
    const Vec2 om = split.omega(x);
    return split.Omega(x, t) *
           (g0.apply(v, w) + om.dot(v) * sigma + om.dot(w) * tau - tau * sigma);
}

namespace {

// Symmetrized product a (x) b + b (x) a as a bilinear form.
Sym2 sym_product(Vec2 a, Vec2 b) {
    return {2.0 * a.x * b.x, a.x * b.y + a.y * b.x, 2.0 * a.y * b.y};
}

void check_g0(const Splitting& split, int grid = 8) {
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            Vec2 x = split.domain.lerp(i / double(grid - 1), j / double(grid - 1));
            if (!split.g0(x).positive_definite()) {
                throw std::invalid_argument("splitting base metric not positive definite");
            }
        }
    }
}

}  // namespace

FinslerChart fermat_metric(const Splitting& split) {
    check_g0(split);
    auto g0 = split.g0;
    auto om = split.omega;
    auto h = [g0, om](Vec2 x) { return g0(x) + outer(om(x)); };
    return randers_chart(split.domain, h, om);
}

ResliceResult reslice(const Splitting& split, const ScalarField& f, int grid) {
    check_g0(split);
    ResliceResult result;

    // The slice is spacelike iff the new one-form omega - df keeps h-norm
    // below one, h = g0 + omega (x) omega being slice-invariant.
    SliceViolation worst;
    worst.slack = 1.0;
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            Vec2 x = split.domain.lerp(i / double(grid - 1), j / double(grid - 1));
            Sym2 h = split.g0(x) + outer(split.omega(x));
            Vec2 w = split.omega(x) - f.gradient(x);
            double norm = std::sqrt(h.inverse().quad(w));
            if (1.0 - norm < worst.slack) {
                worst = {x, norm, 1.0 - norm};
            }
        }
    }
    if (worst.slack <= 0.0) {
        result.violation = worst;
        return result;
    }

    auto g0 = split.g0;
    auto om = split.omega;
    auto Omega = split.Omega;
    auto value = f.value;
    auto grad = f.gradient;
    Splitting out;
    out.domain = split.domain;
    out.g0 = [g0, om, grad](Vec2 x) {
        const Vec2 df = grad(x);
        return g0(x) + sym_product(om(x), df) - outer(df);
    };
    out.omega = [om, grad](Vec2 x) { return om(x) - grad(x); };
    out.Omega = [Omega, value](Vec2 x, double t) { return Omega(x, t + value(x)); };
    result.splitting = std::move(out);
    return result;
}

LiftResult lift(const PlanarMap& phi, const ScalarField& f, const Splitting& source,
                const Splitting& target, const LiftOptions& options) {
    LiftResult result;
    result.pushforward =
        pushforward_check(phi, fermat_metric(source), fermat_metric(target), options.projective);
    if (!result.pushforward.pass) return result;

    // The recovered potential is normalized at the grid corner; compare up
    // to that constant.
    const ScalarGrid& pot = *result.pushforward.projective.potential;
    const double shift = f.value(pot.point(0, 0));
    double mismatch = 0.0;
    for (int ix = 0; ix < pot.res; ++ix) {
        for (int iy = 0; iy < pot.res; ++iy) {
            const Vec2 x = pot.point(ix, iy);
            mismatch = std::max(mismatch, std::fabs(f.value(x) - shift - pot.at(ix, iy)));
        }
    }
    result.potential_mismatch = mismatch;
    if (mismatch > options.potential_tolerance) return result;

    result.lift = ConformalLift{phi, f};
    return result;
}

std::pair<const PlanarMap&, const ScalarField&> project(const ConformalLift& lift) {
    return {lift.phi, lift.f};
}

ConformalLift compose(const ConformalLift& outer, const ConformalLift& inner) {
    // psi1 o psi2 (x, t) = (phi1(phi2 x), t + f2(x) + f1(phi2 x))
    PlanarMap phi;
    auto f1 = outer.phi.forward, f2 = inner.phi.forward;
    auto i1 = outer.phi.inverse, i2 = inner.phi.inverse;
    auto j1 = outer.phi.jacobian, j2 = inner.phi.jacobian;
    phi.forward = [f1, f2](Vec2 p) { return f1(f2(p)); };
    phi.inverse = [i1, i2](Vec2 p) { return i2(i1(p)); };
    phi.jacobian = [j1, j2, f2](Vec2 p) { return j1(f2(p)) * j2(p); };

    ScalarField f;
    auto v1 = outer.f.value, v2 = inner.f.value;
    auto g1 = outer.f.gradient, g2 = inner.f.gradient;
    f.value = [v1, v2, f2](Vec2 p) { return v2(p) + v1(f2(p)); };
    f.gradient = [g1, g2, f2, j2](Vec2 p) {
        return g2(p) + j2(p).transpose().apply(g1(f2(p)));
    };
    return {std::move(phi), std::move(f)};
}

ConformalLift invert(const ConformalLift& lift) {
    // psi^-1 (x, t) = (phi^-1 x, t - f(phi^-1 x))
    PlanarMap phi;
    auto fwd = lift.phi.forward, inv = lift.phi.inverse;
    auto jac = lift.phi.jacobian;
    phi.forward = inv;
    phi.inverse = fwd;
    phi.jacobian = [jac, inv](Vec2 p) { return jac(inv(p)).inverse(); };

    ScalarField f;
    auto value = lift.f.value;
    auto grad = lift.f.gradient;
    f.value = [value, inv](Vec2 p) { return -value(inv(p)); };
    f.gradient = [grad, jac, inv](Vec2 p) {
        const Vec2 x = inv(p);
        return Vec2{} - jac(x).inverse().transpose().apply(grad(x));
    };
    return {std::move(phi), std::move(f)};
}

std::optional<double> time_translation_offset(const ConformalLift& lift, const Rect& domain,
                                              int grid, double tolerance) {
    const double offset = lift.f.value(domain.corner());
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            Vec2 x = domain.lerp(i / double(grid - 1), j / double(grid - 1));
            Vec2 moved = lift.phi.forward(x);
            if ((moved - x).norm() > tolerance) return std::nullopt;
            if (std::fabs(lift.f.value(x) - offset) > tolerance) return std::nullopt;
        }
    }
    return offset;
}

ConformalityReport verify_conformality(const ConformalLift& lift, const Splitting& source,
                                       const Splitting& target,
                                       const ConformalityOptions& options) {
    struct TangentVec {
        Vec2 v;
        double tau;
    };
    // Two spacelike, one timelike, one null-like direction: proportionality
    // on all their pairs pins a symmetric bilinear form.
    const TangentVec span[] = {{{1.0, 0.0}, 0.0}, {{0.0, 1.0}, 0.0}, {{0.0, 0.0}, 1.0},
                               {{1.0, 0.0}, 1.0}};

    ConformalityReport report;
    report.pass = true;
    bool first = true;
    const int res = options.spatial_res;
    for (int i = 0; i < res; ++i) {
        for (int j = 0; j < res; ++j) {
            const Vec2 x = source.domain.lerp(i / double(res - 1), j / double(res - 1));
            for (double t : options.t_samples) {
                const auto [y, s] = lift.apply(x, t);
                const Mat2 jac = lift.phi.jacobian(x);
                const Vec2 df = lift.f.gradient(x);
                auto push = [&](const TangentVec& u) {
                    return TangentVec{jac.apply(u.v), u.tau + df.dot(u.v)};
                };

                // lambda from the timelike pairing, which never degenerates:
                // g(K, K) = -Omega.
                const TangentVec k = span[2];
                const TangentVec pk = push(k);
                const double num = spacetime_metric(target, y, s, pk.v, pk.tau, pk.v, pk.tau);
                const double den = spacetime_metric(source, x, t, k.v, k.tau, k.v, k.tau);
                const double lambda = num / den;
                if (!(lambda > 0.0) || !std::isfinite(lambda)) {
                    report.pass = false;
                    continue;
                }
                if (first) {
                    report.lambda_min = report.lambda_max = lambda;
                    first = false;
                } else {
                    report.lambda_min = std::min(report.lambda_min, lambda);
                    report.lambda_max = std::max(report.lambda_max, lambda);
                }

                double scale = 1.0;
                double spread = 0.0;
                for (std::size_t a = 0; a < std::size(span); ++a) {
                    for (std::size_t b = a; b < std::size(span); ++b) {
                        const TangentVec pa = push(span[a]);
                        const TangentVec pb = push(span[b]);
                        const double pulled =
                            spacetime_metric(target, y, s, pa.v, pa.tau, pb.v, pb.tau);
                        const double base = spacetime_metric(source, x, t, span[a].v,
                                                             span[a].tau, span[b].v, span[b].tau);
                        scale = std::max({scale, std::fabs(base), std::fabs(pulled)});
                        spread = std::max(spread, std::fabs(pulled - lambda * base));
                    }
                }
                report.max_pair_spread = std::max(report.max_pair_spread, spread / scale);
            }
        }
    }
    report.pass = report.pass && report.max_pair_spread <= options.tolerance && !first;
    return report;
}

}  // namespace quasimet
