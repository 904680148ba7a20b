#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace mscat {

enum class WeightFamily { StudentType, Custom };

/// Specification of a sample weight function u.
///
/// The built-in family is u(t) = (1+alpha)/(alpha+t) with alpha > 0, for
/// which phi(x) = x*u(x) has the analytic limit phi_inf = 1+alpha.
/// A custom u must be positive, non-increasing, with x*u(x) strictly
/// increasing, and must declare its phi_inf (it cannot be computed from a
/// black box); make_weight() sample-checks these properties.
struct WeightSpec {
    WeightFamily family = WeightFamily::StudentType;
    double alpha = 0.1;
    std::function<double(double)> custom_u;
    double custom_phi_inf = 0.0;

    static WeightSpec student_type(double alpha) {
        WeightSpec s;
        s.family = WeightFamily::StudentType;
        s.alpha = alpha;
        return s;
    }

    static WeightSpec custom(std::function<double(double)> u, double phi_inf) {
        WeightSpec s;
        s.family = WeightFamily::Custom;
        s.custom_u = std::move(u);
        s.custom_phi_inf = phi_inf;
        return s;
    }
};

/// A validated weight function u together with the transforms built from it
/// and a fixed aspect ratio c = N/n:
///
///   phi(x) = x*u(x)                      increasing, bounded by phi_inf
///   g(x)   = x/(1 - c*phi(x))            increasing bijection of [0,inf)
///   v(x)   = u(g^{-1}(x))                positive, non-increasing
///   psi(x) = x*v(x)                      increasing, bounded by psi_inf
///
/// Validity requires 1 < phi_inf < 1/c, which makes g's denominator positive
/// everywhere and gives psi_inf = phi_inf/(1 - c*phi_inf) > 0.
///
/// Instances are immutable; all evaluations are pure and thread-safe.
/// g^{-1} is evaluated by bracketed bisection (relative tolerance inv_tol);
/// closed forms, where they exist for a family, are reserved for test
/// oracles so that a single code path serves custom families too.
class WeightFunction {
public:
    double u(double x) const {
        if (x < 0.0) throw std::invalid_argument("WeightFunction::u: negative argument");
        if (spec_.family == WeightFamily::StudentType)
            return (1.0 + spec_.alpha) / (spec_.alpha + x);
        return spec_.custom_u(x);
    }

    double phi(double x) const { return x * u(x); }

    double g(double x) const {
        // 1 - c*phi(x) >= 1 - c*phi_inf > 0 holds for every validated spec.
        return x / (1.0 - c_ * phi(x));
    }

    /// Inverse of g, bracketed bisection. Exact at 0; otherwise returns x
    /// with |g(x) - y| <= inv_tol * max(1, y).
    double g_inv(double y) const {
        if (y < 0.0) throw std::invalid_argument("WeightFunction::g_inv: negative argument");
        if (y == 0.0) return 0.0;
        // g(x) >= x, so [0, y] brackets the root already; the growth loop
        // only guards custom families with pathological rounding.
        double hi = y;
        while (g(hi) < y) hi *= 2.0;
        double lo = 0.0;
        const double target = inv_tol_ * std::max(1.0, y);
        double mid = 0.5 * (lo + hi);
        for (int it = 0; it < 200; ++it) {
            mid = 0.5 * (lo + hi);
            const double gm = g(mid);
            if (std::abs(gm - y) <= target) return mid;
            (gm < y ? lo : hi) = mid;
            if (hi - lo <= std::numeric_limits<double>::epsilon() * hi) break;
        }
        return mid;
    }

    double v(double x) const { return u(g_inv(x)); }

    double psi(double x) const { return x * v(x); }

    double phi_inf() const { return phi_inf_; }
    double psi_inf() const { return psi_inf_; }
    double aspect_ratio() const { return c_; }
    const WeightSpec& spec() const { return spec_; }

private:
    friend WeightFunction make_weight(const WeightSpec&, double);

    WeightFunction(WeightSpec spec, double c, double phi_inf)
        : spec_(std::move(spec)), c_(c), phi_inf_(phi_inf),
          psi_inf_(phi_inf / (1.0 - c * phi_inf)) {}

    WeightSpec spec_;
    double c_;
    double phi_inf_;
    double psi_inf_;
    double inv_tol_ = 1e-12;
};

/// Validates a weight spec against an aspect ratio c in (0,1) and returns
/// the evaluable WeightFunction. Rejects phi_inf <= 1, phi_inf >= 1/c, and
/// custom u failing the sampled shape checks.
inline WeightFunction make_weight(const WeightSpec& spec, double c) {
    if (!(c > 0.0 && c < 1.0))
        throw std::invalid_argument("make_weight: aspect ratio c must lie in (0,1), got " +
                                    std::to_string(c));

    double phi_inf = 0.0;
    if (spec.family == WeightFamily::StudentType) {
        if (!(spec.alpha > 0.0))
            throw std::invalid_argument("make_weight: student-type family requires alpha > 0");
        phi_inf = 1.0 + spec.alpha;
    } else {
        if (!spec.custom_u)
            throw std::invalid_argument("make_weight: custom spec without a callable u");
        phi_inf = spec.custom_phi_inf;
    }

    if (!(phi_inf > 1.0))
        throw std::invalid_argument("make_weight: phi_inf = " + std::to_string(phi_inf) +
                                    " violates phi_inf > 1");
    if (!(phi_inf < 1.0 / c))
        throw std::invalid_argument("make_weight: phi_inf = " + std::to_string(phi_inf) +
                                    " violates phi_inf < 1/c = " + std::to_string(1.0 / c));

    if (spec.family == WeightFamily::Custom) {
        // Sampled shape check on 1024 log-spaced points: u positive and
        // non-increasing, phi strictly increasing. A black-box u cannot be
        // verified exhaustively; this guards against plain misuse.
        const int kSamples = 1024;
        const double x_lo = 1e-6, x_hi = 1e9;
        const double ratio = std::pow(x_hi / x_lo, 1.0 / (kSamples - 1));
        double x_prev = 0.0;
        double u_prev = spec.custom_u(0.0);
        double phi_prev = 0.0;
        if (!(u_prev > 0.0))
            throw std::invalid_argument("make_weight: custom u is not positive at 0");
        double x = x_lo;
        for (int k = 0; k < kSamples; ++k, x *= ratio) {
            const double uk = spec.custom_u(x);
            const double phik = x * uk;
            if (!(uk > 0.0))
                throw std::invalid_argument("make_weight: custom u not positive at x = " +
                                            std::to_string(x));
            if (uk > u_prev * (1.0 + 1e-12))
                throw std::invalid_argument("make_weight: custom u increases near x = " +
                                            std::to_string(x));
            if (!(phik > phi_prev))
                throw std::invalid_argument("make_weight: custom phi(x)=x*u(x) not strictly "
                                            "increasing near x = " + std::to_string(x));
            x_prev = x;
            u_prev = uk;
            phi_prev = phik;
        }
        (void)x_prev;
        // Declared limit must be consistent with the far tail.
        const double phi_tail = 1e9 * spec.custom_u(1e9);
        if (!(phi_tail <= phi_inf && phi_inf <= phi_tail * (1.0 + 1e-3)))
            throw std::invalid_argument("make_weight: declared phi_inf inconsistent with "
                                        "phi(1e9) = " + std::to_string(phi_tail));
    }

    return WeightFunction(spec, c, phi_inf);
}

}  // namespace mscat
