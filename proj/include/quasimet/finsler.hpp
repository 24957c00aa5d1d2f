#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "quasimet/geom2d.hpp"

namespace quasimet {

enum class ChartKind { Riemannian, Randers, Custom };

// Pointwise Randers ingredients: a Riemannian base metric h and a one-form
// with h-norm < 1, giving F(x, v) = sqrt(h_x(v, v)) + omega_x(v).
struct RandersData {
    std::function<Sym2(Vec2)> h;
    std::function<Vec2(Vec2)> omega;
};

// Planar chart with an evaluable metric F(x, v): fiberwise positively
// 1-homogeneous, positive away from v = 0.
struct FinslerChart {
    Rect domain;
    ChartKind kind = ChartKind::Custom;
    bool smooth = true;
    std::function<double(Vec2, Vec2)> metric;
    std::optional<RandersData> randers;
};

FinslerChart euclidean_chart(const Rect& domain);
FinslerChart riemannian_chart(const Rect& domain, std::function<Sym2(Vec2)> h);
// Validates h-positivity and the omega norm bound on a sample grid.
FinslerChart randers_chart(const Rect& domain, std::function<Sym2(Vec2)> h,
                           std::function<Vec2(Vec2)> omega);
// Spot-checks homogeneity and positivity on fixed samples.
FinslerChart custom_chart(const Rect& domain, std::function<double(Vec2, Vec2)> metric,
                          bool smooth = true);

// F(x, v) with a domain check on x.
double eval(const FinslerChart& chart, Vec2 x, Vec2 v);

// Largest sampled h-norm of omega over a grid; < 1 for a valid Randers chart.
double max_omega_norm(const RandersData& data, const Rect& domain, int grid = 16);

// Fundamental tensor at direction u by central second differences of F^2:
//   g_u(v, w) = 1/2 * d^2/dt ds F^2(u + t v + s w) |_0
// The halving makes g_u(u, u) = F(u)^2 and the Euclidean tensor the identity.
// step <= 0 selects the default 1e-4 * max(1, |u|).
Sym2 fundamental_tensor(const FinslerChart& chart, Vec2 x, Vec2 u, double step = 0.0);

// Reversible metric (F(x,v) + F(x,-v)) / 2.
FinslerChart symmetrize(const FinslerChart& chart);

// Averaged Riemannian metric over the indicatrix S = {F(x,.) = 1}, against
// the density that gives the unit ball volume one. Parametrizing S by angle,
// u(t) = e(t)/F(x, e(t)) = r(t) e(t), the area form contracts to
// det[u, u'] dt = r(t)^2 dt, so
//   h(v, w) = (1/A) * integral g_u(t)(v, w) r(t)^2 dt,  A = 1/2 integral r^2 dt,
// computed with the periodic trapezoid rule on `quadrature_points` angles.
// For the Euclidean chart this yields exactly twice the identity.
Sym2 average_metric(const FinslerChart& chart, Vec2 x, int quadrature_points);

enum class ProjectiveFailure { None, NonLinear, NotClosed, PathDependent };

// Scalar samples on the res x res tensor grid of a rectangle.
struct ScalarGrid {
    Rect domain;
    int res = 0;
    std::vector<double> values;  // index ix * res + iy

    double at(int ix, int iy) const { return values[ix * res + iy]; }
    Vec2 point(int ix, int iy) const {
        return {domain.x0 + ix * domain.width() / (res - 1),
                domain.y0 + iy * domain.height() / (res - 1)};
    }
};

struct ProjectiveTestOptions {
    int resolution = 64;
    // Stage 1 (linearity of F1 - F2 in v) and the recovered-potential
    // consistency both use `tolerance`. The closedness and path-agreement
    // stages see O(h^2) discretization error on curved potentials, so they
    // get a coarser default.
    double tolerance = 1e-6;
    double closedness_tolerance = 1e-4;
    double path_tolerance = 1e-4;
    std::optional<Rect> domain;  // probe rectangle; defaults to the first chart's
};

struct ProjectiveReport {
    bool related = false;
    ProjectiveFailure failure = ProjectiveFailure::None;
    double linearity_error = 0.0;
    double closedness_error = 0.0;
    double path_error = 0.0;
    std::optional<ScalarGrid> potential;  // f with F1 = F2 + df, f(corner) = 0
};

// Tests whether F1 = F2 + df for some scalar f: the fiberwise difference
// must be linear in v, the extracted one-form closed, and its staircase
// integrals path-independent. On success the potential grid is returned.
ProjectiveReport projective_test(const FinslerChart& c1, const FinslerChart& c2,
                                 const ProjectiveTestOptions& options = {});

// Planar diffeomorphism with explicit inverse and Jacobian of the forward map.
struct PlanarMap {
    std::function<Vec2(Vec2)> forward;
    std::function<Vec2(Vec2)> inverse;
    std::function<Mat2(Vec2)> jacobian;

    static PlanarMap identity();
    static PlanarMap translation(Vec2 offset);
    static PlanarMap rotation(double angle);  // about the origin
    static PlanarMap shear(double factor);    // (x, y) -> (x + factor*y, y)
    // Forward and inverse components in the expression language over x, y;
    // the Jacobian comes from symbolic partials.
    static PlanarMap from_expressions(const std::string& fx, const std::string& fy,
                                      const std::string& inv_fx, const std::string& inv_fy);
};

// Pushforward metric phi_*(F1)(y, w) = F1(phi^-1(y), Dphi^-1_y(w)); throws
// when a probe point leaves the source domain or the Jacobian degenerates.
FinslerChart pushforward_chart(const PlanarMap& map, const FinslerChart& source,
                               const Rect& domain);

struct PushforwardReport {
    bool pass = false;
    ProjectiveReport projective;  // of F2 against phi_*(F1)
};

// Certifies the map as an almost isometry at sample resolution: runs
// projective_test between F2 and phi_*(F1), so the recovered potential f
// satisfies phi_*(F1) = F2 - df, the convention of the distance identity
// d2(phi x, phi y) = d1(x, y) + f(phi y) - f(phi x).
PushforwardReport pushforward_check(const PlanarMap& map, const FinslerChart& c1,
                                    const FinslerChart& c2,
                                    const ProjectiveTestOptions& options = {});

}  // namespace quasimet
