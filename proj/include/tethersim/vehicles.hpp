#pragma once

// Rigid-body vehicle dynamics: M*nu_dot + C(nu)*nu + D(nu)*nu + g(eta) =
// tau_control + tau_disturbance + tau_tether. Added mass is folded into M;
// C is built from the combined M. Semi-implicit Euler stepping with the Euler
// kinematic map.

#include <array>
#include <cmath>

#include "tethersim/core.hpp"
#include "tethersim/errors.hpp"

namespace tethersim::vehicles {

struct VehicleState {
    Pose pose;
    BodyVelocity nu;
};

/// Body-frame control wrench. Clamped componentwise to the vehicle's limits.
struct ControlInput {
    Vec3 force;   // N
    Vec3 moment;  // N*m
};

/// Environmental disturbance: world-frame force, body-frame moment.
struct Disturbance {
    Vec3 force;   // N, world frame
    Vec3 moment;  // N*m, body frame
};

struct RestoringParams {
    double weight = 0.0;    // W, N
    double buoyancy = 0.0;  // B_f, N
    Vec3 cg;                // center of gravity, body frame, m
    Vec3 cb;                // center of buoyancy, body frame, m
};

struct VehicleParams {
    Mat6 M = Mat6::identity();      // rigid body + added mass
    Mat6 D_lin;                     // linear damping
    Mat6 D_quad;                    // quadratic damping coefficients
    RestoringParams restoring;
    double hull_beam = 0.0;         // B, m (wave-force dimensions)
    double hull_length = 0.0;       // L, m
    double hull_draft = 0.0;        // T, m
    double wind_cx = 0.0;           // surface vehicle wind coefficients/areas
    double wind_cy = 0.0;
    double wind_area_frontal = 0.0;   // A_w, m^2
    double wind_area_lateral = 0.0;   // A_lw, m^2
    Vec3 force_max{1e9, 1e9, 1e9};    // thrust limits, N
    Vec3 moment_max{1e9, 1e9, 1e9};   // N*m
    bool surface_following = false;   // heave/roll/pitch slaved to the wave surface
};

inline void check_params(const VehicleParams& p) {
    if (!p.M.symmetric(1e-6)) throw InvalidParams("vehicle: M must be symmetric");
    for (int i = 0; i < 6; ++i)
        if (!(p.M(i, i) > 0.0)) throw InvalidParams("vehicle: M diagonal must be positive");
    if (!(p.force_max.x >= 0.0) || !(p.force_max.y >= 0.0) || !(p.force_max.z >= 0.0) ||
        !(p.moment_max.x >= 0.0) || !(p.moment_max.y >= 0.0) || !(p.moment_max.z >= 0.0))
        throw InvalidParams("vehicle: thrust limits must be non-negative");
}

/// Coriolis/centripetal matrix from the combined mass matrix:
///   C = [ 0       -S(M11 v1 + M12 v2) ; -S(M11 v1 + M12 v2)  -S(M21 v1 + M22 v2) ].
/// Skew-symmetric by construction for symmetric M.
inline Mat6 coriolis_matrix(const Mat6& M, const BodyVelocity& nu) {
    const std::array<double, 6> v = nu.as_array();
    Vec3 a, b;  // M11 v1 + M12 v2 and M21 v1 + M22 v2
    for (int i = 0; i < 3; ++i) {
        double sa = 0.0, sb = 0.0;
        for (int j = 0; j < 6; ++j) {
            sa += M(i, j) * v[j];
            sb += M(i + 3, j) * v[j];
        }
        (i == 0 ? a.x : i == 1 ? a.y : a.z) = sa;
        (i == 0 ? b.x : i == 1 ? b.y : b.z) = sb;
    }
    const Mat3 sa = Mat3::skew(a);
    const Mat3 sb = Mat3::skew(b);
    Mat6 c;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            c(i, j + 3) = -sa(i, j);
            c(i + 3, j) = -sa(i, j);
            c(i + 3, j + 3) = -sb(i, j);
        }
    return c;
}

/// g(eta) as it enters the left-hand side of the momentum balance. The applied
/// restoring wrench (net buoyancy force, righting moments) is the negative of
/// this vector.
inline std::array<double, 6> restoring_forces(const Pose& pose, const VehicleParams& p) {
    const Mat3 r = rotation_body_to_world(pose);
    const Vec3 f_gravity = r.transpose_mul({0.0, 0.0, -p.restoring.weight});
    const Vec3 f_buoyancy = r.transpose_mul({0.0, 0.0, p.restoring.buoyancy});
    const Vec3 force = f_gravity + f_buoyancy;
    const Vec3 moment = p.restoring.cg.cross(f_gravity) + p.restoring.cb.cross(f_buoyancy);
    return {-force.x, -force.y, -force.z, -moment.x, -moment.y, -moment.z};
}

/// D(nu)*nu with D(nu) = D_lin + D_quad*diag(|nu|). Dissipative:
/// nu . damping_forces(nu) >= 0 for PSD coefficient matrices.
inline std::array<double, 6> damping_forces(const BodyVelocity& nu, const VehicleParams& p) {
    const std::array<double, 6> v = nu.as_array();
    std::array<double, 6> out{};
    for (int i = 0; i < 6; ++i) {
        double s = 0.0;
        for (int j = 0; j < 6; ++j)
            s += (p.D_lin(i, j) + p.D_quad(i, j) * std::abs(v[j])) * v[j];
        out[i] = s;
    }
    return out;
}

inline double clamp_abs(double v, double limit) {
    return v > limit ? limit : (v < -limit ? -limit : v);
}

inline ControlInput clamp_to_limits(const ControlInput& in, const VehicleParams& p) {
    return {{clamp_abs(in.force.x, p.force_max.x), clamp_abs(in.force.y, p.force_max.y),
             clamp_abs(in.force.z, p.force_max.z)},
            {clamp_abs(in.moment.x, p.moment_max.x), clamp_abs(in.moment.y, p.moment_max.y),
             clamp_abs(in.moment.z, p.moment_max.z)}};
}

/// One semi-implicit Euler step of Eq.-of-motion + kinematics. `tether_force`
/// is the world-frame force the cable applies to the vehicle (at the CG).
inline VehicleState step(const VehicleState& state, const VehicleParams& p,
                         const ControlInput& control, const Disturbance& disturbance,
                         const Vec3& tether_force, double dt) {
    if (!(dt > 0.0) || dt > 0.02)
        throw InvalidParams("vehicle::step: dt must be in (0, 0.02]");

    const Mat3 r = rotation_body_to_world(state.pose);
    const ControlInput u = clamp_to_limits(control, p);
    const Vec3 f_env_body = r.transpose_mul(disturbance.force);
    const Vec3 f_tether_body = r.transpose_mul(tether_force);

    std::array<double, 6> rhs{};
    rhs[0] = u.force.x + f_env_body.x + f_tether_body.x;
    rhs[1] = u.force.y + f_env_body.y + f_tether_body.y;
    rhs[2] = u.force.z + f_env_body.z + f_tether_body.z;
    rhs[3] = u.moment.x + disturbance.moment.x;
    rhs[4] = u.moment.y + disturbance.moment.y;
    rhs[5] = u.moment.z + disturbance.moment.z;

    const std::array<double, 6> cv = coriolis_matrix(p.M, state.nu) * state.nu.as_array();
    const std::array<double, 6> dv = damping_forces(state.nu, p);
    const std::array<double, 6> g = restoring_forces(state.pose, p);
    for (int i = 0; i < 6; ++i) rhs[i] -= cv[i] + dv[i] + g[i];

    const std::array<double, 6> acc = p.M.solve(rhs);

    VehicleState next = state;
    std::array<double, 6> nu = state.nu.as_array();
    for (int i = 0; i < 6; ++i) nu[i] += acc[i] * dt;
    next.nu = BodyVelocity::from_array(nu);

    const PoseRate rate = kinematic_map(state.pose, next.nu);
    next.pose.position += rate.position_rate * dt;
    next.pose.yaw = wrap_angle(state.pose.yaw + rate.yaw_rate * dt);
    next.pose.pitch += rate.pitch_rate * dt;
    next.pose.roll += rate.roll_rate * dt;
    return next;
}

/// Kinetic energy 0.5 * nu^T M nu.
inline double kinetic_energy(const BodyVelocity& nu, const VehicleParams& p) {
    const std::array<double, 6> v = nu.as_array();
    const std::array<double, 6> mv = p.M * v;
    double e = 0.0;
    for (int i = 0; i < 6; ++i) e += v[i] * mv[i];
    return 0.5 * e;
}

// Default parameter sets. Loosely sized after a small catamaran surface boat
// and a work-class mini ROV; every value is overridable from the scenario
// file and dumpable via the CLI's explain-params.

inline VehicleParams default_asv_params() {
    VehicleParams p;
    // 15 kg boat, 30% added mass per axis folded into M.
    p.M = Mat6::diagonal({19.5, 19.5, 19.5, 1.42, 2.25, 3.47});
    p.D_lin = Mat6::diagonal({2.0, 4.0, 10.0, 1.0, 1.0, 1.5});
    p.D_quad = Mat6::diagonal({25.0, 50.0, 60.0, 1.0, 1.0, 2.0});
    p.restoring.weight = 15.0 * 9.81;
    p.restoring.buoyancy = p.restoring.weight;  // heave is wave-slaved
    p.hull_beam = 0.12;   // effective per-hull beam entering the wave force
    p.hull_length = 1.15;
    p.hull_draft = 0.05;
    p.wind_cx = 0.8;
    p.wind_cy = 0.9;
    p.wind_area_frontal = 0.3;
    p.wind_area_lateral = 0.5;
    p.force_max = {40.0, 0.0, 0.0};  // differential thrusters: surge + yaw only
    p.moment_max = {0.0, 0.0, 12.0};
    p.surface_following = true;
    return p;
}

inline VehicleParams default_auv_params() {
    VehicleParams p;
    // 13.5 kg ROV, 30% added mass per axis folded into M.
    p.M = Mat6::diagonal({17.55, 17.55, 17.55, 0.26, 0.40, 0.47});
    p.D_lin = Mat6::diagonal({4.03, 6.22, 5.18, 0.3, 0.3, 0.3});
    p.D_quad = Mat6::diagonal({18.18, 21.66, 36.99, 1.55, 1.55, 1.55});
    p.restoring.weight = 13.5 * 9.81;
    p.restoring.buoyancy = p.restoring.weight * 1.01;  // slightly positive trim
    p.restoring.cb = {0.0, 0.0, 0.02};                 // CB above CG: self-righting
    p.hull_beam = 0.25;  // effective dimensions entering the wave force
    p.hull_length = 0.35;
    p.hull_draft = 0.20;
    p.force_max = {85.0, 85.0, 85.0};
    p.moment_max = {0.0, 0.0, 14.0};
    return p;
}

}  // namespace tethersim::vehicles
