#pragma once

// Static catenary boundary-value solver. For a cable of length L spanning a
// horizontal distance D with vertical offset dz, finds the parameters (a, c)
// of z(x) = a*cosh((x - c)/a) - a*cosh(c/a) such that
//
//   a*[cosh((D - c)/a) - cosh(c/a)] = dz      (vertical displacement)
//   a*[sinh((D - c)/a) + sinh(c/a)] = L       (total arc length)
//
// Damped Newton on the 2-residual system with analytic Jacobian, seeded from
// the symmetric slack approximation; nested bisection as a fallback.

#include <cmath>
#include <vector>

#include "tethersim/core.hpp"
#include "tethersim/errors.hpp"

namespace tethersim::catenary {

struct CatenaryProblem {
    double dx = 0.0;      // D, horizontal distance, m (> 0)
    double dz = 0.0;      // z_AUV - z_ASV, m
    double length = 0.0;  // L, cable length, m (> chord)
};

struct CatenarySolution {
    double a = 0.0;            // catenary parameter, m
    double c = 0.0;            // horizontal offset of the vertex, m
    double residual_dz = 0.0;  // displacement-equation residual, m
    double residual_len = 0.0; // length-equation residual, m
    CatenaryProblem problem;   // the inputs the solution satisfies
};

namespace detail {

// cosh/sinh argument guard; |x| beyond this overflows double range.
inline constexpr double kMaxHyperbolicArg = 700.0;

inline bool args_ok(double a, double dx, double c) {
    return a > 0.0 && std::abs((dx - c) / a) <= kMaxHyperbolicArg &&
           std::abs(c / a) <= kMaxHyperbolicArg;
}

struct Residuals {
    double f_dz;
    double f_len;
    double norm() const { return std::abs(f_dz) + std::abs(f_len); }
};

inline Residuals residuals(const CatenaryProblem& p, double a, double c) {
    const double u = (p.dx - c) / a;
    const double v = c / a;
    return {a * (std::cosh(u) - std::cosh(v)) - p.dz,
            a * (std::sinh(u) + std::sinh(v)) - p.length};
}

// Symmetric slack approximation: root of 2a*sinh(D/(2a)) = L by bisection.
// The left side decreases monotonically in a, from +inf toward D.
inline double symmetric_parameter(double dx, double length) {
    const double half = 0.5 * dx;
    double lo = half / kMaxHyperbolicArg;
    double hi = std::max({dx, length, 1.0});
    auto g = [&](double a) { return 2.0 * a * std::sinh(half / a) - length; };
    if (g(lo) < 0.0)
        throw NoConvergence("catenary: cable length out of representable range");
    int expand = 0;
    while (g(hi) > 0.0) {
        hi *= 2.0;
        if (++expand > 60)
            throw NoConvergence("catenary: failed to bracket symmetric parameter");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// For a fixed vertex offset c, the arc-length equation has a single root in a:
// f_len -> +inf as a -> 0+ and -> D - L < 0 as a -> inf.
inline double solve_a_for_c(const CatenaryProblem& p, double c) {
    double lo = std::max(std::abs(p.dx - c), std::abs(c)) / kMaxHyperbolicArg;
    lo = std::max(lo, 1e-12);
    auto f = [&](double a) { return residuals(p, a, c).f_len; };
    if (f(lo) < 0.0) throw NoConvergence("catenary: inner bracket failed");
    double hi = std::max({p.dx, std::abs(c), p.length, 1.0});
    int expand = 0;
    while (f(hi) > 0.0) {
        hi *= 2.0;
        if (++expand > 60) throw NoConvergence("catenary: inner bracket failed");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Nested bisection fallback: outer on c (predicted dz decreases as the vertex
// moves right), inner on a via solve_a_for_c.
inline void solve_bisection(const CatenaryProblem& p, double& a_out, double& c_out) {
    auto h = [&](double c) { return residuals(p, solve_a_for_c(p, c), c).f_dz; };
    double c_lo = 0.5 * p.dx, c_hi = 0.5 * p.dx;
    double w = 0.5 * (p.dx + p.length);
    int expand = 0;
    while (h(c_lo) < 0.0) {
        c_lo -= w;
        w *= 2.0;
        if (++expand > 60) throw NoConvergence("catenary: outer bracket failed (low)");
    }
    w = 0.5 * (p.dx + p.length);
    expand = 0;
    while (h(c_hi) > 0.0) {
        c_hi += w;
        w *= 2.0;
        if (++expand > 60) throw NoConvergence("catenary: outer bracket failed (high)");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (c_lo + c_hi);
        (h(mid) > 0.0 ? c_lo : c_hi) = mid;
    }
    c_out = 0.5 * (c_lo + c_hi);
    a_out = solve_a_for_c(p, c_out);
}

}  // namespace detail

inline void check_problem(const CatenaryProblem& p) {
    if (!(p.dx > 0.0) || !std::isfinite(p.dz) || !(p.length > 0.0))
        throw InvalidParams("catenary: need D > 0 and L > 0");
    const double chord = std::sqrt(p.dx * p.dx + p.dz * p.dz);
    if (p.length <= chord * (1.0 + 1e-9))
        throw TautCable("catenary: cable length " + std::to_string(p.length) +
                        " m does not exceed the chord " + std::to_string(chord) + " m");
}

/// Solves the boundary-value problem. Deterministic; residuals of the returned
/// solution satisfy |r_dz| < 1e-9*max(1, |dz|) and |r_L| < 1e-9*L.
inline CatenarySolution solve(const CatenaryProblem& p) {
    check_problem(p);

    double a = detail::symmetric_parameter(p.dx, p.length);
    double c = 0.5 * p.dx;

    const double tol_dz = 1e-12 * std::max(1.0, std::abs(p.dz));
    const double tol_len = 1e-12 * p.length;

    bool converged = false;
    detail::Residuals f = detail::residuals(p, a, c);
    for (int it = 0; it < 100; ++it) {
        if (std::abs(f.f_dz) <= tol_dz && std::abs(f.f_len) <= tol_len) {
            converged = true;
            break;
        }
        const double u = (p.dx - c) / a;
        const double v = c / a;
        const double j11 = (std::cosh(u) - u * std::sinh(u)) -
                           (std::cosh(v) - v * std::sinh(v));
        const double j12 = -std::sinh(u) - std::sinh(v);
        const double j21 = (std::sinh(u) - u * std::cosh(u)) +
                           (std::sinh(v) - v * std::cosh(v));
        const double j22 = -std::cosh(u) + std::cosh(v);
        const double det = j11 * j22 - j12 * j21;
        if (!std::isfinite(det) || std::abs(det) < 1e-300) break;
        const double da = (-f.f_dz * j22 + f.f_len * j12) / det;
        const double dc = (-j11 * f.f_len + j21 * f.f_dz) / det;

        // Damped update: halve the step until the residual improves.
        double lambda = 1.0;
        bool accepted = false;
        for (int back = 0; back < 40; ++back) {
            const double a_try = a + lambda * da;
            const double c_try = c + lambda * dc;
            if (detail::args_ok(a_try, p.dx, c_try)) {
                const detail::Residuals f_try = detail::residuals(p, a_try, c_try);
                if (f_try.norm() < f.norm()) {
                    a = a_try;
                    c = c_try;
                    f = f_try;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted) break;
    }
    if (!converged && !(std::abs(f.f_dz) <= tol_dz && std::abs(f.f_len) <= tol_len)) {
        detail::solve_bisection(p, a, c);
        f = detail::residuals(p, a, c);
    }

    CatenarySolution s;
    s.a = a;
    s.c = c;
    s.residual_dz = f.f_dz;
    s.residual_len = f.f_len;
    s.problem = p;
    if (!(std::abs(s.residual_dz) < 1e-9 * std::max(1.0, std::abs(p.dz))) ||
        !(std::abs(s.residual_len) < 1e-9 * p.length))
        throw NoConvergence("catenary: residuals did not reach tolerance");
    return s;
}

/// Cable height z(x) = a*cosh((x - c)/a) - a*cosh(c/a); z(0) = 0 exactly.
inline double shape(const CatenarySolution& s, double x) {
    if (x < -1e-12 || x > s.problem.dx * (1.0 + 1e-12))
        throw OutOfDomain("catenary::shape: x outside [0, D]");
    return s.a * std::cosh((x - s.c) / s.a) - s.a * std::cosh(s.c / s.a);
}

/// Arc length between horizontal coordinates x0 <= x1.
inline double arc_length(const CatenarySolution& s, double x0, double x1) {
    if (x0 < -1e-12 || x1 > s.problem.dx * (1.0 + 1e-12) || x0 > x1)
        throw OutOfDomain("catenary::arc_length: need 0 <= x0 <= x1 <= D");
    return s.a * (std::sinh((x1 - s.c) / s.a) - std::sinh((x0 - s.c) / s.a));
}

/// n+1 points at equal arc-length spacing L/n along the cable, in the local
/// vertical plane of the solution: (x, 0, z) with the first endpoint at the
/// origin. The arc-length parameterization inverts in closed form.
inline std::vector<Vec3> sample_equal_arc(const CatenarySolution& s, int n) {
    if (n < 1) throw InvalidParams("sample_equal_arc: need n >= 1");
    std::vector<Vec3> pts;
    pts.reserve(static_cast<size_t>(n) + 1);
    const double sinh_v = std::sinh(s.c / s.a);
    for (int i = 0; i <= n; ++i) {
        const double arc = s.problem.length * static_cast<double>(i) / n;
        double x = s.c + s.a * std::asinh(arc / s.a - sinh_v);
        if (x < 0.0) x = 0.0;
        if (x > s.problem.dx) x = s.problem.dx;
        pts.push_back({x, 0.0, shape(s, x)});
    }
    return pts;
}

/// Solves the catenary hanging between two world-frame attachment points and
/// returns n+1 equal-arc sample points in world coordinates. The first point
/// anchors at `from` (the ASV side); x runs along the horizontal bearing
/// from -> to.
inline std::vector<Vec3> sample_between(const Vec3& from, const Vec3& to,
                                        double length, int n) {
    const double dx = (to - from).norm_xy();
    if (dx < 1e-9)
        throw InvalidParams("catenary: attachment points need horizontal separation");
    CatenaryProblem p{dx, to.z - from.z, length};
    const CatenarySolution s = solve(p);
    const Vec3 u{(to.x - from.x) / dx, (to.y - from.y) / dx, 0.0};
    std::vector<Vec3> world;
    world.reserve(static_cast<size_t>(n) + 1);
    for (const Vec3& local : sample_equal_arc(s, n))
        world.push_back(from + u * local.x + Vec3{0.0, 0.0, local.z});
    return world;
}

}  // namespace tethersim::catenary
