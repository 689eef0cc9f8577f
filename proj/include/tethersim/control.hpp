#pragma once

// Waypoint-tracking PD controllers. The surface vehicle is underactuated
// (surge force + yaw moment, line-of-sight steering); the underwater vehicle
// commands 3-axis body force + yaw moment. In disturbance-aware mode the
// estimated environmental force is subtracted as feedforward before clamping.

#include <cmath>
#include <string>
#include <vector>

#include "tethersim/core.hpp"
#include "tethersim/environment.hpp"
#include "tethersim/errors.hpp"
#include "tethersim/vehicles.hpp"

namespace tethersim::control {

struct WaypointPlan {
    std::vector<Vec3> waypoints;      // world, m
    double acceptance_radius = 0.5;   // m
    double speed_cap = 0.8;           // m/s
};

inline void check_plan(const WaypointPlan& p) {
    if (p.waypoints.empty()) throw InvalidParams("plan: need at least one waypoint");
    if (!(p.acceptance_radius > 0.0)) throw InvalidParams("plan: acceptance radius must be > 0");
    if (!(p.speed_cap > 0.0)) throw InvalidParams("plan: speed cap must be > 0");
}

enum class Mode { Aware, NonAware };

struct Gains {
    double kp = 0.5;   // position error -> desired speed, 1/s
    double kd = 30.0;  // velocity error -> force, N*s/m
    double kpsi = 10.0;  // heading error -> moment, N*m/rad
};

struct ControllerConfig {
    Gains asv;
    Gains auv;
    Mode mode = Mode::Aware;
    std::string label = "custom";  // set_1..set_4 or custom
};

/// Ground-truth pass-through estimator: the engine hands controllers the same
/// disturbance it will apply to the vehicle this step. Isolates the effect of
/// compensation from estimation error.
inline vehicles::Disturbance disturbance_estimator(const vehicles::Disturbance& applied) {
    return applied;
}

/// Maps a configuration label onto (controller mode, sea state):
/// set_1 Aware/Moderate, set_2 NonAware/Moderate, set_3 Aware/Rough,
/// set_4 NonAware/Rough.
inline std::pair<Mode, environment::SeaState> configuration_set(const std::string& label) {
    if (label == "set_1") return {Mode::Aware, environment::sea_state_preset("moderate")};
    if (label == "set_2") return {Mode::NonAware, environment::sea_state_preset("moderate")};
    if (label == "set_3") return {Mode::Aware, environment::sea_state_preset("rough")};
    if (label == "set_4") return {Mode::NonAware, environment::sea_state_preset("rough")};
    throw UnknownSet("unknown configuration set '" + label + "' (expected set_1..set_4)");
}

namespace detail {

inline Vec3 clamp_norm(const Vec3& v, double cap) {
    const double n = v.norm();
    if (n <= cap || n == 0.0) return v;
    return v * (cap / n);
}

// Near-critical yaw-rate damping derived from the heading gain and yaw inertia.
inline double yaw_damping(double kpsi, const vehicles::VehicleParams& params) {
    return 1.4 * std::sqrt(std::max(0.0, kpsi * params.M(5, 5)));
}

}  // namespace detail

/// PD waypoint command for one vehicle. `waypoint_index` selects the active
/// target in the plan (owned by the caller; see advance_waypoint). Aware mode
/// subtracts the body-frame disturbance force estimate before clamping.
inline vehicles::ControlInput compute_control(const vehicles::VehicleState& state,
                                              const vehicles::VehicleParams& params,
                                              const WaypointPlan& plan, size_t waypoint_index,
                                              const Gains& gains, Mode mode,
                                              const vehicles::Disturbance& estimate) {
    check_plan(plan);
    if (waypoint_index >= plan.waypoints.size()) waypoint_index = plan.waypoints.size() - 1;
    const Vec3 target = plan.waypoints[waypoint_index];
    const Mat3 r = rotation_body_to_world(state.pose);

    Vec3 error = target - state.pose.position;
    const bool surface = params.surface_following;
    if (surface) error.z = 0.0;  // heave is wave-slaved, not controlled
    const double dist = surface ? error.norm_xy() : error.norm();

    vehicles::ControlInput cmd;
    const Vec3 v_desired = (dist <= plan.acceptance_radius)
                               ? Vec3{}
                               : detail::clamp_norm(error * gains.kp, plan.speed_cap);
    const Vec3 v_err_body = r.transpose_mul(v_desired) - state.nu.linear;

    if (surface) {
        cmd.force = {gains.kd * v_err_body.x, 0.0, 0.0};
    } else {
        cmd.force = v_err_body * gains.kd;
    }

    // Line-of-sight heading while transiting; pure rate damping inside the
    // acceptance radius.
    double heading_err = 0.0;
    if (error.norm_xy() > plan.acceptance_radius)
        heading_err = wrap_angle(std::atan2(error.y, error.x) - state.pose.yaw);
    const double kd_yaw = detail::yaw_damping(gains.kpsi, params);
    cmd.moment = {0.0, 0.0, gains.kpsi * heading_err - kd_yaw * state.nu.angular.z};

    if (mode == Mode::Aware) {
        cmd.force -= r.transpose_mul(estimate.force);
        cmd.moment -= estimate.moment;
    }
    // Thrust limits do the final word; an underactuated axis has limit 0.
    return vehicles::clamp_to_limits(cmd, params);
}

/// Advances the active waypoint when the vehicle is inside the acceptance
/// radius. Monotone: the index never decreases.
inline size_t advance_waypoint(const vehicles::VehicleState& state, const WaypointPlan& plan,
                               size_t index, bool horizontal_only) {
    if (index >= plan.waypoints.size()) return plan.waypoints.size() - 1;
    Vec3 error = plan.waypoints[index] - state.pose.position;
    if (horizontal_only) error.z = 0.0;
    if (error.norm() <= plan.acceptance_radius && index + 1 < plan.waypoints.size())
        return index + 1;
    return index;
}

}  // namespace tethersim::control
