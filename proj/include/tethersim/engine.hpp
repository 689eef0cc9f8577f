#pragma once

// Fixed-step simulation loop. Per-step order is part of the external contract
// and never changes:
//   (1) environmental forces at t        (2) controllers (aware mode consumes
//   the same forces as a perfect estimate)   (3) tether step against endpoint
//   poses at t -> reaction forces        (4) vehicle steps consuming control +
//   disturbance + tether reaction        (5) t += dt.
// Explicit one-step-lag coupling: the tether sees endpoint states from the
// start of the step, the vehicles see tether forces computed within the step.

#include <cinttypes>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tethersim/catenary.hpp"
#include "tethersim/control.hpp"
#include "tethersim/core.hpp"
#include "tethersim/environment.hpp"
#include "tethersim/errors.hpp"
#include "tethersim/scenario.hpp"
#include "tethersim/tether.hpp"
#include "tethersim/vehicles.hpp"

namespace tethersim::engine {

using scenario::Scenario;

struct WorldState {
    long step = 0;
    double t = 0.0;
    vehicles::VehicleState asv;
    vehicles::VehicleState auv;
    tether::TetherState cable;
    size_t asv_waypoint = 0;
    size_t auv_waypoint = 0;
    tether::EndpointCoupling last_coupling;  // forces from the most recent step
};

/// Draws the wave phase from the run seed (single documented draw) and turns
/// the scenario into its fully deterministic form. Idempotent.
inline void resolve_randomness(Scenario& s) {
    if (!s.wave_phase_random) return;
    std::mt19937_64 rng(static_cast<uint64_t>(s.sim.seed));
    std::uniform_real_distribution<double> dist(0.0, 2.0 * kPi);
    s.sea.wave.phase = wrap_angle(s.sea.wave.phase + dist(rng));
    s.wave_phase_random = false;
}

/// Wave + wind + current force on one vehicle, world frame. Wind applies to
/// surface vehicles only; wave force decays with depth as exp(-2*pi*depth/L);
/// the current enters as quadratic hull drag of the relative flow through the
/// vehicle's D_quad linear-axis coefficients.
inline vehicles::Disturbance environmental_disturbance(const Scenario& s, double t,
                                                       const vehicles::VehicleState& state,
                                                       const vehicles::VehicleParams& params) {
    vehicles::Disturbance d;
    const Mat3 r = rotation_body_to_world(state.pose);

    if (s.sea.wave.amplitude > 0.0 && params.hull_beam > 0.0 && params.hull_length > 0.0 &&
        params.hull_draft > 0.0) {
        Vec3 f = environment::wave_force(t, s.rho_water, s.gravity,
                                         {params.hull_beam, params.hull_length, params.hull_draft},
                                         s.sea.wave);
        if (!params.surface_following)
            f *= environment::wave_depth_attenuation(s.sea.wave, state.pose.position.z);
        d.force += f;
    }

    if (params.surface_following && s.sea.wind.speed > 0.0) {
        environment::WindParams wp = s.sea.wind;
        wp.cx = params.wind_cx;
        wp.cy = params.wind_cy;
        wp.area_frontal = params.wind_area_frontal;
        wp.area_lateral = params.wind_area_lateral;
        d.force += environment::wind_force(wp, state.pose.yaw);
    }

    if (s.sea.current.speed > 0.0) {
        const Vec3 flow_body = r.transpose_mul(environment::current_velocity(s.sea.current));
        const Vec3 rel = flow_body - state.nu.linear;
        const Vec3 f_body{params.D_quad(0, 0) * std::abs(rel.x) * rel.x,
                          params.D_quad(1, 1) * std::abs(rel.y) * rel.y,
                          params.D_quad(2, 2) * std::abs(rel.z) * rel.z};
        d.force += r * f_body;
    }
    return d;
}

/// Slaves the surface vehicle's vertical channel to the sea surface:
/// z = wave elevation at its position, roll = pitch = 0, heave rate = the
/// local surface rate.
inline void apply_surface_following(const Scenario& s, double t, vehicles::VehicleState& v) {
    v.pose.position.z = environment::wave_elevation(s.sea.wave, s.gravity, v.pose.position.x,
                                                    v.pose.position.y, t);
    v.pose.roll = 0.0;
    v.pose.pitch = 0.0;
    v.nu.linear.z = environment::wave_elevation_rate(s.sea.wave, s.gravity, v.pose.position.x,
                                                     v.pose.position.y, t);
    v.nu.angular.x = 0.0;
    v.nu.angular.y = 0.0;
}

inline tether::EndpointState endpoint_state(const vehicles::VehicleState& v, const Vec3& offset) {
    const Mat3 r = rotation_body_to_world(v.pose);
    return {v.pose.position + r * offset,
            r * (v.nu.linear + v.nu.angular.cross(offset))};
}

/// Builds the initial world: vehicles at their configured poses (surface
/// vehicle snapped to the wave surface) and the cable on the static catenary
/// between the attachment points, regularized to uniform link lengths.
inline WorldState initialize_world(const Scenario& s) {
    WorldState w;
    w.asv.pose = s.asv_init;
    w.auv.pose = s.auv_init;
    if (s.asv_params.surface_following) apply_surface_following(s, 0.0, w.asv);

    const tether::EndpointState e0 = endpoint_state(w.asv, s.asv_attach);
    const tether::EndpointState e1 = endpoint_state(w.auv, s.auv_attach);
    std::vector<Vec3> shape = catenary::sample_between(e0.point, e1.point,
                                                       s.tether_params.length,
                                                       s.tether_params.segments);
    tether::equalize_links(shape, s.tether_params.segment_length(), 20000, 1e-10);
    w.cable = tether::build(s.tether_params, shape);

    // Start the cable moving with its attachments (the surface vehicle already
    // rides the wave at t = 0); a cold start from rest kinks the end links.
    const int n = w.cable.node_count() - 1;
    for (int i = 0; i <= n; ++i) {
        const double a = static_cast<double>(i) / n;
        w.cable.velocities[i] = e0.velocity * (1.0 - a) + e1.velocity * a;
    }
    return w;
}

/// Advances the world one step. The fixed stage order documented above is the
/// coupling contract; instability is reported with the step index attached.
inline void step_world(WorldState& w, const Scenario& s) {
    try {
        const double dt = s.sim.dt;

        // (1) Environmental forces at t.
        const vehicles::Disturbance d_asv =
            environmental_disturbance(s, w.t, w.asv, s.asv_params);
        const vehicles::Disturbance d_auv =
            environmental_disturbance(s, w.t, w.auv, s.auv_params);

        // (2) Controllers; the aware mode's estimate is the same force the
        // environment applies this step (perfect estimator).
        const vehicles::ControlInput u_asv = control::compute_control(
            w.asv, s.asv_params, s.asv_plan, w.asv_waypoint, s.controller.asv,
            s.controller.mode, control::disturbance_estimator(d_asv));
        const vehicles::ControlInput u_auv = control::compute_control(
            w.auv, s.auv_params, s.auv_plan, w.auv_waypoint, s.controller.auv,
            s.controller.mode, control::disturbance_estimator(d_auv));

        // (3) Tether step against endpoint states at t.
        const std::vector<Vec3> flow(w.cable.positions.size(),
                                     environment::current_velocity(s.sea.current));
        w.last_coupling = tether::step(w.cable, s.tether_params,
                                       endpoint_state(w.asv, s.asv_attach),
                                       endpoint_state(w.auv, s.auv_attach), flow,
                                       s.gravity, dt);

        // (4) Vehicle steps. The cable pulls each vehicle with the negative of
        // the force its attachment applies to the cable.
        w.asv = vehicles::step(w.asv, s.asv_params, u_asv, d_asv,
                               -w.last_coupling.asv_force, dt);
        w.auv = vehicles::step(w.auv, s.auv_params, u_auv, d_auv,
                               -w.last_coupling.auv_force, dt);

        // (5) Advance time; surface slaving and waypoint bookkeeping.
        w.step += 1;
        w.t = static_cast<double>(w.step) * dt;
        if (s.asv_params.surface_following) apply_surface_following(s, w.t, w.asv);
        if (s.auv_params.surface_following) apply_surface_following(s, w.t, w.auv);

        if (!w.asv.pose.finite() || !w.asv.nu.finite() || !w.auv.pose.finite() ||
            !w.auv.nu.finite())
            throw Unstable("vehicle state is not finite");

        w.asv_waypoint = control::advance_waypoint(w.asv, s.asv_plan, w.asv_waypoint,
                                                   s.asv_params.surface_following);
        w.auv_waypoint = control::advance_waypoint(w.auv, s.auv_plan, w.auv_waypoint,
                                                   s.auv_params.surface_following);
    } catch (const Unstable& e) {
        throw Unstable(e.what(), w.step);
    }
}

/// One recorded output row; the columns of the time-series CSV.
struct Row {
    double t = 0.0;
    Vec3 asv_pos;
    double asv_yaw = 0.0;
    Vec3 auv_pos;
    double auv_yaw = 0.0;
    double asv_err = 0.0;
    double auv_err = 0.0;
    double tension_proxy = 0.0;  // max endpoint coupling force magnitude, N
    double wave_force_x = 0.0;   // wave force on the surface vehicle, world N
    double wave_force_y = 0.0;
};

struct RunResult {
    std::vector<Row> rows;
    scenario::RunMetrics metrics;
    Scenario effective;  // randomness resolved; what the run actually used
};

namespace detail {

inline double waypoint_error(const vehicles::VehicleState& v, const control::WaypointPlan& plan,
                             size_t index, bool horizontal_only) {
    if (index >= plan.waypoints.size()) index = plan.waypoints.size() - 1;
    Vec3 e = plan.waypoints[index] - v.pose.position;
    if (horizontal_only) e.z = 0.0;
    return e.norm();
}

inline Row make_row(const Scenario& s, const WorldState& w) {
    Row r;
    r.t = w.t;
    r.asv_pos = w.asv.pose.position;
    r.asv_yaw = w.asv.pose.yaw;
    r.auv_pos = w.auv.pose.position;
    r.auv_yaw = w.auv.pose.yaw;
    r.asv_err = waypoint_error(w.asv, s.asv_plan, w.asv_waypoint,
                               s.asv_params.surface_following);
    r.auv_err = waypoint_error(w.auv, s.auv_plan, w.auv_waypoint,
                               s.auv_params.surface_following);
    r.tension_proxy = std::max(w.last_coupling.asv_force.norm(),
                               w.last_coupling.auv_force.norm());
    if (s.sea.wave.amplitude > 0.0 && s.asv_params.hull_beam > 0.0) {
        const Vec3 f = environment::wave_force(
            w.t, s.rho_water, s.gravity,
            {s.asv_params.hull_beam, s.asv_params.hull_length, s.asv_params.hull_draft},
            s.sea.wave);
        r.wave_force_x = f.x;
        r.wave_force_y = f.y;
    }
    return r;
}

}  // namespace detail

/// Executes a full run: duration/dt steps, one recorded row every
/// `decimation` steps (t = 0 inclusive), metrics over the recorded rows with
/// link deviation and tension tracked at every step.
inline RunResult run(const Scenario& scenario_in) {
    Scenario s = scenario_in;
    resolve_randomness(s);

    RunResult result;
    result.effective = s;

    WorldState w = initialize_world(s);
    const long total_steps = static_cast<long>(std::llround(s.sim.duration / s.sim.dt));
    result.rows.reserve(static_cast<size_t>(total_steps / s.sim.decimation) + 2);
    result.rows.push_back(detail::make_row(s, w));

    double dev_min = 1e300, dev_max = 0.0, peak_tension = 0.0;
    for (long k = 1; k <= total_steps; ++k) {
        step_world(w, s);
        const double dev = w.cable.max_link_deviation();
        dev_min = std::min(dev_min, dev);
        dev_max = std::max(dev_max, dev);
        peak_tension = std::max(peak_tension,
                                std::max(w.last_coupling.asv_force.norm(),
                                         w.last_coupling.auv_force.norm()));
        if (k % s.sim.decimation == 0) result.rows.push_back(detail::make_row(s, w));
    }

    scenario::RunMetrics& m = result.metrics;
    double asv_sum = 0.0, auv_sum = 0.0;
    for (const Row& r : result.rows) {
        asv_sum += r.asv_err;
        auv_sum += r.auv_err;
        m.asv_max_err = std::max(m.asv_max_err, r.asv_err);
        m.auv_max_err = std::max(m.auv_max_err, r.auv_err);
    }
    const double n = static_cast<double>(result.rows.size());
    m.asv_mean_err = asv_sum / n;
    m.auv_mean_err = auv_sum / n;
    m.combined_err = 0.5 * (m.asv_mean_err + m.auv_mean_err);
    m.link_dev_min_pct = 100.0 * (dev_min == 1e300 ? 0.0 : dev_min);
    m.link_dev_max_pct = 100.0 * dev_max;
    m.peak_tension = peak_tension;
    return result;
}

// ---------------------------------------------------------------------------
// WorldState serialization (hexfloat text; bit-exact round trip). Masses and
// link geometry are rebuilt from the scenario on load, so a resumed run
// reproduces the original exactly.

inline std::string save_world(const WorldState& w) {
    std::ostringstream o;
    o << std::hexfloat;
    auto put = [&o](double v) { o << v << "\n"; };
    o << "tethersim-world 1\n";
    o << w.step << "\n";
    auto put_vec = [&](const Vec3& v) { put(v.x); put(v.y); put(v.z); };
    auto put_vehicle = [&](const vehicles::VehicleState& v) {
        put_vec(v.pose.position);
        put(v.pose.yaw); put(v.pose.pitch); put(v.pose.roll);
        put_vec(v.nu.linear);
        put_vec(v.nu.angular);
    };
    put_vehicle(w.asv);
    put_vehicle(w.auv);
    o << w.asv_waypoint << "\n" << w.auv_waypoint << "\n";
    o << w.cable.positions.size() << "\n";
    for (const Vec3& p : w.cable.positions) put_vec(p);
    for (const Vec3& v : w.cable.velocities) put_vec(v);
    return o.str();
}

inline WorldState load_world(const std::string& text, const Scenario& s) {
    std::istringstream in(text);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "tethersim-world" || version != 1)
        throw ParseError("load_world: not a tethersim world snapshot");

    auto get = [&in]() {
        std::string tok;
        if (!(in >> tok)) throw ParseError("load_world: truncated snapshot");
        return std::strtod(tok.c_str(), nullptr);
    };
    auto get_vec = [&]() { return Vec3{get(), get(), get()}; };

    WorldState w;
    in >> w.step;
    auto get_vehicle = [&]() {
        vehicles::VehicleState v;
        v.pose.position = get_vec();
        v.pose.yaw = get();
        v.pose.pitch = get();
        v.pose.roll = get();
        v.nu.linear = get_vec();
        v.nu.angular = get_vec();
        return v;
    };
    w.asv = get_vehicle();
    w.auv = get_vehicle();
    in >> w.asv_waypoint >> w.auv_waypoint;
    size_t count = 0;
    in >> count;
    if (count != static_cast<size_t>(s.tether_params.segments) + 1)
        throw ParseError("load_world: node count does not match the scenario");
    std::vector<Vec3> pos(count), vel(count);
    for (size_t i = 0; i < count; ++i) pos[i] = get_vec();
    for (size_t i = 0; i < count; ++i) vel[i] = get_vec();

    // Rebuild mass/geometry from parameters; positions come from the snapshot.
    w.cable.positions = pos;
    w.cable.velocities = vel;
    const tether::TetherParams& p = s.tether_params;
    w.cable.segment_mass = p.segment_mass();
    w.cable.segment_inertia = 0.4 * w.cable.segment_mass * p.radius * p.radius;
    w.cable.rest_length = p.segment_length();
    w.cable.node_mass.resize(count);
    w.cable.node_volume.resize(count);
    for (size_t i = 0; i < count; ++i) {
        const bool end = (i == 0 || i + 1 == count);
        w.cable.node_mass[i] = (end ? 0.5 : 1.0) * w.cable.segment_mass;
        w.cable.node_volume[i] = (end ? 0.5 : 1.0) * p.segment_volume();
    }
    w.t = static_cast<double>(w.step) * s.sim.dt;
    return w;
}

}  // namespace tethersim::engine
