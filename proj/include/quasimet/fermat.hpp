#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "quasimet/finsler.hpp"
#include "quasimet/geom2d.hpp"

namespace quasimet {

// Scalar field on the spatial chart with an analytic gradient.
struct ScalarField {
    std::function<double(Vec2)> value;
    std::function<Vec2(Vec2)> gradient;

    static ScalarField zero();
    static ScalarField linear(double ax, double ay, double c = 0.0);
    // Expression in x, y; the gradient comes from symbolic partials.
    static ScalarField from_expression(const std::string& text);
};

// Conformastationary chart data on S x R:
//   g((v,tau),(w,sigma)) = Omega(x,t) * (g0(v,w) + omega(v) sigma + omega(w) tau - tau sigma),
// the polarization of Omega * (g0(v,v) + 2 omega(v) tau - tau^2). The timelike
// conformal field is the unit t-translation.
struct Splitting {
    Rect domain;
    std::function<double(Vec2, double)> Omega;
    std::function<Sym2(Vec2)> g0;
    std::function<Vec2(Vec2)> omega;
};

Splitting static_splitting(const Rect& domain);

// Spacetime metric pairing of a splitting at (x, t).
double spacetime_metric(const Splitting& split, Vec2 x, double t, Vec2 v, double tau, Vec2 w,
                        double sigma);

// Fermat metric of the splitting: the Randers chart with base metric
// h = g0 + omega (x) omega and one-form omega. Omega never enters; two
// splittings differing only in Omega produce identical charts.
FinslerChart fermat_metric(const Splitting& split);

struct SliceViolation {
    Vec2 point;
    double omega_norm = 0.0;  // h-norm of omega - df at the worst point
    double slack = 0.0;       // 1 - omega_norm, negative when invalid
};

struct ResliceResult {
    std::optional<Splitting> splitting;
    std::optional<SliceViolation> violation;

    bool ok() const { return splitting.has_value(); }
};

// Moves the zero slice onto the graph of f. Valid when the h-norm of
// omega - df stays below one on the sampled domain; the resulting Fermat
// metric is the old one minus df, and h is unchanged.
ResliceResult reslice(const Splitting& split, const ScalarField& f, int grid = 16);

// Fiber-preserving spacetime map psi(x, t) = (phi(x), t + f(x)).
struct ConformalLift {
    PlanarMap phi;
    ScalarField f;

    std::pair<Vec2, double> apply(Vec2 x, double t) const {
        return {phi.forward(x), t + f.value(x)};
    }
};

struct LiftOptions {
    ProjectiveTestOptions projective;
    double potential_tolerance = 1e-6;
};

struct LiftResult {
    std::optional<ConformalLift> lift;
    PushforwardReport pushforward;
    double potential_mismatch = 0.0;

    bool ok() const { return lift.has_value(); }
};

// Builds the lift only after certifying phi as an almost isometry between
// the two Fermat charts whose recovered potential matches f up to a
// constant; uncertified pairs are rejected.
LiftResult lift(const PlanarMap& phi, const ScalarField& f, const Splitting& source,
                const Splitting& target, const LiftOptions& options = {});

// Spatial component and potential of a lift; with compose/invert below this
// realizes the homomorphism onto almost isometries whose kernel is the time
// translations.
std::pair<const PlanarMap&, const ScalarField&> project(const ConformalLift& lift);

ConformalLift compose(const ConformalLift& outer, const ConformalLift& inner);
ConformalLift invert(const ConformalLift& lift);

// If the lift acts as (x, t) -> (x, t + T) on the sampled domain, returns T.
std::optional<double> time_translation_offset(const ConformalLift& lift, const Rect& domain,
                                              int grid = 8, double tolerance = 1e-9);

struct ConformalityOptions {
    int spatial_res = 8;
    std::vector<double> t_samples = {-0.4, 0.0, 0.9};
    double tolerance = 1e-6;
};

struct ConformalityReport {
    bool pass = false;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double max_pair_spread = 0.0;
};

// Pointwise pullback proportionality test: at every sampled spacetime point,
// psi*(g_target) must be a single positive multiple lambda(p) of g_source
// across a spanning set of tangent-vector pairs (two spacelike, one
// timelike, one null-like direction). lambda is the factor in
// psi*(g_target) = lambda * g_source.
ConformalityReport verify_conformality(const ConformalLift& lift, const Splitting& source,
                                       const Splitting& target,
                                       const ConformalityOptions& options = {});

}  // namespace quasimet
