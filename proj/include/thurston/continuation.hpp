#pragma once

// Numerical analytic continuation of sigma through the correspondence.
//
// A state (tau, w, tau') satisfies Y(w) = pi(tau) and X(w) = pi(tau'). Moving
// tau along a path, w follows the root of Y(w) = pi(tau) selected by
// continuity and tau' follows the lift of X(w) selected by continuity.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "thurston/correspondence.hpp"
#include "thurston/error.hpp"
#include "thurston/lambda.hpp"
#include "thurston/moebius.hpp"
#include "thurston/rational_map.hpp"
#include "thurston/sphere.hpp"

namespace thurston {

struct ContinuationState {
    Complex tau;
    SpherePoint w;
    Complex tau_image;
};

struct StepControl {
    double initial_step = 0.25;
    double max_step = 0.5;
    double min_step = 1e-7;
    double growth = 1.5;
    long max_steps = 200000;
    /// Ratio rule for root selection: nearest / second nearest must be below this.
    double separation = 1.0 / 3.0;
    /// Schwarz-Pick slack: d(tau'_new, tau'_old) <= contraction * d(tau_new, tau_old) + 1e-9.
    double contraction = 1.05;
    RootOptions roots{};
};

/// Largest defining residuals seen along accepted steps (chordal metric in
/// moduli coordinates), plus step counts.
struct ContinuationStats {
    double max_residual_y = 0.0;
    double max_residual_x = 0.0;
    long accepted = 0;
    long rejected = 0;

    void merge(const ContinuationStats& o) {
        max_residual_y = std::max(max_residual_y, o.max_residual_y);
        max_residual_x = std::max(max_residual_x, o.max_residual_x);
        accepted += o.accepted;
        rejected += o.rejected;
    }
};

/// The point at hyperbolic distance s from a on the geodesic toward b.
inline Complex geodesic_point(Complex a, Complex b, double s) {
    Complex zb = (b - a) / (b - std::conj(a));
    double r = std::abs(zb);
    if (r == 0.0) return a;
    Complex z = std::tanh(0.5 * s) * (zb / r);
    return (a - std::conj(a) * z) / (1.0 - z);
}

/// Unit tangent direction (in the Cayley disk at a) toward b, rotated by a
/// quarter turn, moved out by distance s. Used for detours.
inline Complex geodesic_offset(Complex a, Complex b, double s) {
    Complex zb = (b - a) / (b - std::conj(a));
    double r = std::abs(zb);
    Complex dir = r == 0.0 ? Complex(0.0, 1.0) : zb / r * Complex(0.0, 1.0);
    Complex z = std::tanh(0.5 * s) * dir;
    return (a - std::conj(a) * z) / (1.0 - z);
}

/// Defining residuals of a state, chordal distance in moduli coordinates.
inline std::pair<double, double> state_residuals(const Correspondence& c, const ContinuationState& st) {
    const auto& n = c.normalizer();
    double ry = chordal_distance(c.Y()(st.w), pi_map(n, st.tau));
    double rx = chordal_distance(c.X()(st.w), pi_map(n, st.tau_image));
    return {ry, rx};
}

namespace detail {

struct Selected {
    SpherePoint point;
    double nearest = 0.0;
    double second = std::numeric_limits<double>::infinity();
};

/// The level-set solution of F(w) = level nearest to the prediction, if it
/// is separated from the others by the given ratio. Solutions are distinct
/// points; a root of multiplicity > 1 nearest to the prediction is ambiguous.
inline std::optional<Selected> select_root(const ChartedMap& f, const Modulus& level, const SpherePoint& pred,
                                          double ratio, const RootOptions& opt) {
    auto roots = f.level_set(level, opt);
    Selected best;
    best.nearest = std::numeric_limits<double>::infinity();
    int best_mult = 0;
    for (const auto& r : roots) {
        double d = chordal_distance(r.point, pred);
        if (d < best.nearest) {
            best.second = std::min(best.second, best.nearest);
            best.nearest = d;
            best.point = r.point;
            best_mult = r.multiplicity;
        } else {
            best.second = std::min(best.second, d);
        }
    }
    if (best_mult > 1) best.second = best.nearest;
    if (!(best.nearest < ratio * best.second)) return std::nullopt;
    return best;
}

inline SpherePoint lambda_point(Complex tau) { return SpherePoint(lambda_std(tau)); }

/// Hyperbolic step length over which log lambda, log(1 - lambda) and
/// log(1 / lambda) change by about one radian at tau. Deep in a cusp a fixed
/// step would wind lambda around the puncture several times, and both the
/// root predictor and the Newton lift would lose track of the sheet.
inline double winding_step(Complex tau) {
    LambdaValue lv = lambda_with_derivative(tau);
    double rate = std::abs(lv.derivative) * std::max(1.0 / std::abs(lv.value), 1.0 / std::abs(lv.one_minus));
    rate *= tau.imag();
    return rate > 0.0 && std::isfinite(rate) ? 1.0 / rate : std::numeric_limits<double>::infinity();
}

}  // namespace detail

struct StepResult {
    std::optional<ContinuationState> state;
    Errc reason = Errc::StepUnderflow;
};

/// One step to tau_new; on rejection the reason says which test failed.
inline StepResult continuation_step(const Correspondence& c, const ContinuationState& cur, Complex tau_new,
                                    const StepControl& ctl, ContinuationStats* stats = nullptr) {
    const ChartedMap& yl = c.Y_lambda();
    const ChartedMap& xl = c.X_lambda();

    SpherePoint l_cur = detail::lambda_point(cur.tau);
    LambdaValue lv_new = lambda_with_derivative(tau_new);
    SpherePoint l_new(lv_new.value);
    SpherePoint pred = yl.predict(cur.w, l_cur, l_new);
    auto sel = detail::select_root(yl, Modulus{lv_new.value, lv_new.one_minus}, pred, ctl.separation, ctl.roots);
    if (!sel) return {std::nullopt, Errc::BranchAmbiguous};
    // The selected root must also be close to the old one, not merely to an
    // extrapolation that may have overshot.
    if (chordal_distance(sel->point, cur.w) > 0.5 * sel->second + sel->nearest) {
        return {std::nullopt, Errc::BranchAmbiguous};
    }
    const SpherePoint w_new = sel->point;

    Modulus x_new = xl.modulus(w_new);
    if (!std::isfinite(std::abs(x_new.value)) || puncture_distance(x_new.value) < 1e-300 ||
        x_new.one_minus == Complex(0.0)) {
        return {std::nullopt, Errc::LiftFailed};
    }
    double h = hyperbolic_distance(cur.tau, tau_new);
    Complex tau_img;
    try {
        Complex predicted = lift_predict(x_new, cur.tau_image);
        LiftOptions lo;
        lo.max_move = ctl.contraction * h + 1e-9;
        tau_img = lift_near(x_new, cur.tau_image, lo);
        if (hyperbolic_distance(tau_img, predicted) > std::max(0.1 * h, 1e-12)) return {std::nullopt, Errc::LiftFailed};
    } catch (const Error&) {
        return {std::nullopt, Errc::LiftFailed};
    }

    ContinuationState next{tau_new, w_new, tau_img};
    if (stats) {
        auto [ry, rx] = state_residuals(c, next);
        stats->max_residual_y = std::max(stats->max_residual_y, ry);
        stats->max_residual_x = std::max(stats->max_residual_x, rx);
        ++stats->accepted;
    }
    return {next, Errc::StepUnderflow};
}

/// Continues the state along the hyperbolic geodesic to target with adaptive
/// steps. Failures raise PathError carrying the point where the step size
/// underflowed; the code names the test that kept failing.
inline ContinuationState continue_sigma(const Correspondence& c, const ContinuationState& start, Complex target,
                                        const StepControl& ctl = {}, ContinuationStats* stats = nullptr) {
    if (!(target.imag() > 0.0)) throw Error(Errc::LiftFailed, "continuation target is not in the upper half-plane");
    const double total = hyperbolic_distance(start.tau, target);
    if (total == 0.0) return start;
    ContinuationState cur = start;
    Complex origin = start.tau;
    double s = 0.0;
    double h = std::min(ctl.initial_step, total);
    for (long n = 0; n < ctl.max_steps; ++n) {
        if (s >= total) return cur;
        double cap = std::min(detail::winding_step(cur.tau), detail::winding_step(cur.tau_image) / ctl.contraction);
        double step = std::min({h, cap, total - s});
        bool finishing = step >= total - s;
        Complex tau_new = finishing ? target : geodesic_point(origin, target, s + step);
        StepResult r = continuation_step(c, cur, tau_new, ctl, stats);
        if (r.state) {
            cur = *r.state;
            s = finishing ? total : s + step;
            h = std::min(ctl.max_step, h * ctl.growth);
            continue;
        }
        if (stats) ++stats->rejected;
        h = 0.5 * step;
        if (h < ctl.min_step) throw PathError(r.reason, "continuation step underflow", tau_new);
    }
    throw PathError(Errc::StepUnderflow, "continuation exceeded its step budget", cur.tau);
}

/// Continues along a polyline of waypoints ending at the last one.
inline ContinuationState continue_along(const Correspondence& c, const ContinuationState& start,
                                        const std::vector<Complex>& waypoints, const StepControl& ctl = {},
                                        ContinuationStats* stats = nullptr) {
    ContinuationState cur = start;
    for (Complex p : waypoints) cur = continue_sigma(c, cur, p, ctl, stats);
    return cur;
}

/// Continuation that reroutes around failures: on a PathError, the segment is
/// replaced by a two-leg path through a point offset perpendicular to it,
/// at most max_detours times.
inline ContinuationState continue_with_detours(const Correspondence& c, const ContinuationState& start,
                                               Complex target, const StepControl& ctl = {},
                                               ContinuationStats* stats = nullptr, int max_detours = 3) {
    try {
        return continue_sigma(c, start, target, ctl, stats);
    } catch (const PathError& e) {
        if (max_detours <= 0) throw;
        Complex where = e.where();
        double total = hyperbolic_distance(start.tau, target);
        double along = std::min(hyperbolic_distance(start.tau, where), total);
        Complex foot = geodesic_point(start.tau, target, along);
        const double offsets[] = {0.3, -0.3, 0.8, -0.8};
        for (int k = 0; k < max_detours && k < 4; ++k) {
            Complex via = geodesic_offset(foot, target, offsets[k]);
            try {
                ContinuationState mid = continue_sigma(c, start, via, ctl, stats);
                return continue_sigma(c, mid, target, ctl, stats);
            } catch (const PathError&) {
            }
        }
        throw;
    }
}

/// Continues only the w-coordinate along a path of lambda values, used for
/// limits toward punctures where tau leaves every compact set. The level
/// path is given as a function of t in [0, 1].
template <class LevelPath>
SpherePoint continue_w_in_lambda(const Correspondence& c, SpherePoint w, LevelPath&& level, double t_end,
                                 const StepControl& ctl = {}) {
    const ChartedMap& yl = c.Y_lambda();
    double t = 0.0;
    double h = 0.05;
    SpherePoint l_cur = level(0.0);
    for (long n = 0; n < ctl.max_steps; ++n) {
        if (t >= t_end) return w;
        double step = std::min(h, t_end - t);
        SpherePoint l_new = level(t + step);
        SpherePoint pred = yl.predict(w, l_cur, l_new);
        auto sel = detail::select_root(yl, ChartedMap::modulus_of(l_new), pred, ctl.separation, ctl.roots);
        if (sel && chordal_distance(sel->point, w) <= 0.5 * sel->second + sel->nearest) {
            w = sel->point;
            l_cur = l_new;
            t += step;
            h = std::min(0.1, h * ctl.growth);
            continue;
        }
        h = 0.5 * step;
        if (h < 1e-12) throw Error(Errc::BranchAmbiguous, "w continuation toward a puncture failed");
    }
    throw Error(Errc::StepUnderflow, "w continuation exceeded its step budget");
}

}  // namespace thurston
