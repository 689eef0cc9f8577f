#pragma once

// Scenario configuration: schema with defaults, strict validation, canonical
// dump (load/dump round-trips bit-exactly), and the tracking-error metrics.

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "tethersim/config.hpp"
#include "tethersim/control.hpp"
#include "tethersim/core.hpp"
#include "tethersim/environment.hpp"
#include "tethersim/errors.hpp"
#include "tethersim/tether.hpp"
#include "tethersim/vehicles.hpp"

namespace tethersim::scenario {

struct SimConfig {
    double dt = 0.005;       // s
    double duration = 60.0;  // s
    long seed = 1;
    int decimation = 10;     // steps per recorded row
};

struct OutputOptions {
    std::string dir;  // empty: CLI picks results/<name>-<seed>/
    bool timeseries = true;
    bool metrics = true;
    bool effective_config = true;
};

struct Scenario {
    std::string name = "scenario";
    SimConfig sim;

    double gravity = 9.81;      // m/s^2
    double rho_water = 1025.0;  // kg/m^3

    std::string sea_preset = "calm";  // calm | moderate | rough | custom
    environment::SeaState sea;
    bool wave_phase_random = true;  // draw phi_0 from the run seed

    vehicles::VehicleParams asv_params;
    vehicles::VehicleParams auv_params;
    Pose asv_init;
    Pose auv_init;

    tether::TetherParams tether_params;
    Vec3 asv_attach;  // body-frame attachment offset, m
    Vec3 auv_attach;

    control::WaypointPlan asv_plan;
    control::WaypointPlan auv_plan;
    control::ControllerConfig controller;

    OutputOptions outputs;
};

struct RunMetrics {
    double asv_mean_err = 0.0;  // m
    double asv_max_err = 0.0;
    double auv_mean_err = 0.0;
    double auv_max_err = 0.0;
    double combined_err = 0.0;       // mean of the two per-vehicle means
    double link_dev_min_pct = 0.0;   // per-step max link deviation, best step
    double link_dev_max_pct = 0.0;   // per-step max link deviation, worst step
    double peak_tension = 0.0;       // endpoint tension proxy, N
};

/// Euclidean tracking-error statistics of an actual trajectory against a
/// reference of equal length (the active waypoint at each recorded time).
struct ErrorStats {
    double mean = 0.0;
    double max = 0.0;
};

inline ErrorStats position_error(const std::vector<Vec3>& actual,
                                 const std::vector<Vec3>& reference) {
    if (actual.size() != reference.size())
        throw LengthMismatch("position_error: series lengths differ (" +
                             std::to_string(actual.size()) + " vs " +
                             std::to_string(reference.size()) + ")");
    if (actual.empty()) return {};
    ErrorStats st;
    double sum = 0.0;
    for (size_t i = 0; i < actual.size(); ++i) {
        const double d = (actual[i] - reference[i]).norm();
        sum += d;
        st.max = std::max(st.max, d);
    }
    st.mean = sum / static_cast<double>(actual.size());
    return st;
}

namespace detail {

inline Scenario defaults() {
    Scenario s;
    s.asv_params = vehicles::default_asv_params();
    s.auv_params = vehicles::default_auv_params();
    s.asv_init.yaw = kPi / 2.0;
    // Shallow, close AUV keeps even a 5 m tether slack through rough wave
    // crests (worst-case attachment chord stays below 0.99 * length).
    s.auv_init = Pose{{1.5, 0.0, -1.5}, kPi / 2.0, 0.0, 0.0};
    s.asv_attach = {0.0, 0.0, -0.1};
    s.auv_attach = {0.0, 0.0, 0.15};

    s.tether_params.length = 10.0;
    s.tether_params.segments = 0;      // auto: one per 0.5 m, min 8
    s.tether_params.rho_segment = 0.0; // auto: 1.03 * rho_water

    s.asv_plan.waypoints = {{0.0, 4.0, 0.0}, {0.0, 8.0, 0.0}};
    s.asv_plan.acceptance_radius = 0.4;
    s.asv_plan.speed_cap = 0.8;
    s.auv_plan.waypoints = {{1.5, 4.0, -1.5}, {1.5, 8.0, -1.5}};
    s.auv_plan.acceptance_radius = 0.3;
    s.auv_plan.speed_cap = 0.6;

    s.controller.asv = {0.5, 30.0, 12.0};
    s.controller.auv = {0.5, 40.0, 5.0};
    s.controller.mode = control::Mode::Aware;
    s.controller.label = "custom";
    return s;
}

inline std::array<double, 6> diag_of(const Mat6& m) {
    return {m(0, 0), m(1, 1), m(2, 2), m(3, 3), m(4, 4), m(5, 5)};
}

inline void load_vehicle(const cfg::KeyValues& kv, const std::string& prefix,
                         vehicles::VehicleParams& p, Pose& init) {
    init.position = kv.get_vec3(prefix + ".position", init.position);
    init.yaw = wrap_angle(kv.get_double(prefix + ".yaw", init.yaw));
    p.M = Mat6::diagonal(kv.get_diag6(prefix + ".mass_diag", diag_of(p.M)));
    p.D_lin = Mat6::diagonal(kv.get_diag6(prefix + ".damping_linear", diag_of(p.D_lin)));
    p.D_quad = Mat6::diagonal(kv.get_diag6(prefix + ".damping_quadratic", diag_of(p.D_quad)));
    p.restoring.weight = kv.get_double(prefix + ".weight", p.restoring.weight);
    p.restoring.buoyancy = kv.get_double(prefix + ".buoyancy", p.restoring.buoyancy);
    p.restoring.cg = kv.get_vec3(prefix + ".cg", p.restoring.cg);
    p.restoring.cb = kv.get_vec3(prefix + ".cb", p.restoring.cb);
    const Vec3 hull = kv.get_vec3(prefix + ".hull",
                                  {p.hull_beam, p.hull_length, p.hull_draft});
    p.hull_beam = hull.x;
    p.hull_length = hull.y;
    p.hull_draft = hull.z;
    p.wind_cx = kv.get_double(prefix + ".wind.cx", p.wind_cx);
    p.wind_cy = kv.get_double(prefix + ".wind.cy", p.wind_cy);
    p.wind_area_frontal = kv.get_double(prefix + ".wind.area_frontal", p.wind_area_frontal);
    p.wind_area_lateral = kv.get_double(prefix + ".wind.area_lateral", p.wind_area_lateral);
    p.force_max = kv.get_vec3(prefix + ".force_max", p.force_max);
    p.moment_max = kv.get_vec3(prefix + ".moment_max", p.moment_max);
    p.surface_following = kv.get_bool(prefix + ".surface_following", p.surface_following);
}

inline void load_plan(const cfg::KeyValues& kv, const std::string& prefix,
                      control::WaypointPlan& plan) {
    plan.waypoints = kv.get_vec3_list(prefix + ".waypoints", plan.waypoints);
    plan.acceptance_radius = kv.get_double(prefix + ".radius", plan.acceptance_radius);
    plan.speed_cap = kv.get_double(prefix + ".speed_cap", plan.speed_cap);
}

inline void load_gains(const cfg::KeyValues& kv, const std::string& prefix,
                       control::Gains& g) {
    g.kp = kv.get_double(prefix + ".kp", g.kp);
    g.kd = kv.get_double(prefix + ".kd", g.kd);
    g.kpsi = kv.get_double(prefix + ".kpsi", g.kpsi);
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string fmt(const Vec3& v) {
    return fmt(v.x) + " " + fmt(v.y) + " " + fmt(v.z);
}

inline std::string fmt(const std::array<double, 6>& d) {
    std::string out = fmt(d[0]);
    for (int i = 1; i < 6; ++i) out += " " + fmt(d[i]);
    return out;
}

}  // namespace detail

/// World-frame attachment point of a vehicle's tether offset.
inline Vec3 attachment_point(const Pose& pose, const Vec3& offset) {
    return pose.position + rotation_body_to_world(pose) * offset;
}

inline void validate(const Scenario& s) {
    if (!(s.sim.dt > 0.0) || s.sim.dt > 0.02)
        throw ValidationError("sim.dt: must be in (0, 0.02]");
    if (!(s.sim.duration > 0.0)) throw ValidationError("sim.duration: must be > 0");
    if (s.sim.decimation < 1) throw ValidationError("sim.decimation: must be >= 1");
    if (s.sim.seed < 0) throw ValidationError("sim.seed: must be >= 0");
    if (!(s.gravity > 0.0)) throw ValidationError("env.gravity: must be > 0");
    if (!(s.rho_water > 0.0)) throw ValidationError("env.rho_water: must be > 0");

    try {
        environment::check_wave(s.sea.wave);
        environment::check_wind(s.sea.wind);
        environment::check_current(s.sea.current);
        vehicles::check_params(s.asv_params);
        vehicles::check_params(s.auv_params);
        tether::check_params(s.tether_params);
        control::check_plan(s.asv_plan);
        control::check_plan(s.auv_plan);
    } catch (const InvalidParams& e) {
        throw ValidationError(e.what());
    }

    if (!s.asv_init.finite() || !s.auv_init.finite())
        throw ValidationError("initial poses must be finite");
    if (!s.asv_attach.finite() || !s.auv_attach.finite())
        throw ValidationError("attachment offsets must be finite");
    for (const control::WaypointPlan* plan : {&s.asv_plan, &s.auv_plan})
        for (const Vec3& wp : plan->waypoints)
            if (!wp.finite()) throw ValidationError("waypoints must be finite");

    const Vec3 a0 = attachment_point(s.asv_init, s.asv_attach);
    const Vec3 a1 = attachment_point(s.auv_init, s.auv_attach);
    const double chord = (a1 - a0).norm();
    if (!(s.tether_params.length >= 1.01 * chord))
        throw ValidationError(
            "tether.length: must be at least 1.01 x the initial attachment distance (" +
            std::to_string(chord) + " m)");
    if ((a1 - a0).norm_xy() < 1e-3)
        throw ValidationError(
            "initial attachment points need horizontal separation for the catenary init");
}

/// Parses scenario text, fills defaults, resolves auto values, validates.
/// Unknown keys are rejected.
inline Scenario load_scenario(const std::string& text, const std::string& name = "scenario") {
    const cfg::KeyValues kv = cfg::KeyValues::parse(text);
    Scenario s = detail::defaults();
    s.name = name;

    s.sim.dt = kv.get_double("sim.dt", s.sim.dt);
    s.sim.duration = kv.get_double("sim.duration", s.sim.duration);
    s.sim.seed = kv.get_long("sim.seed", s.sim.seed);
    s.sim.decimation = kv.get_int("sim.decimation", s.sim.decimation);

    s.gravity = kv.get_double("env.gravity", s.gravity);
    s.rho_water = kv.get_double("env.rho_water", s.rho_water);

    s.sea_preset = kv.get_string("sea.preset", s.sea_preset);
    if (s.sea_preset != "custom") {
        try {
            s.sea = environment::sea_state_preset(s.sea_preset);
        } catch (const UnknownPreset& e) {
            throw ValidationError(std::string("sea.preset: ") + e.what());
        }
    } else {
        s.sea.label = environment::SeaStateLabel::Custom;
    }
    s.sea.wave.amplitude = kv.get_double("sea.wave.amplitude", s.sea.wave.amplitude);
    s.sea.wave.wavelength = kv.get_double("sea.wave.wavelength", s.sea.wave.wavelength);
    s.sea.wave.direction = kv.get_double("sea.wave.direction", s.sea.wave.direction);
    s.sea.wave.phase = kv.get_double("sea.wave.phase", s.sea.wave.phase);
    s.sea.wave.omega = kv.get_double("sea.wave.omega", s.sea.wave.omega);
    s.wave_phase_random = kv.get_bool("sea.wave.phase_random", s.wave_phase_random);
    s.sea.wind.speed = kv.get_double("sea.wind.speed", s.sea.wind.speed);
    s.sea.wind.direction = kv.get_double("sea.wind.direction", s.sea.wind.direction);
    s.sea.wind.rho_air = kv.get_double("sea.wind.rho_air", s.sea.wind.rho_air);
    s.sea.current.speed = kv.get_double("sea.current.speed", s.sea.current.speed);
    s.sea.current.alpha = kv.get_double("sea.current.alpha", s.sea.current.alpha);
    s.sea.current.beta = kv.get_double("sea.current.beta", s.sea.current.beta);

    detail::load_vehicle(kv, "asv", s.asv_params, s.asv_init);
    detail::load_vehicle(kv, "auv", s.auv_params, s.auv_init);

    s.tether_params.length = kv.get_double("tether.length", s.tether_params.length);
    s.tether_params.segments = kv.get_int("tether.segments", s.tether_params.segments);
    s.tether_params.radius = kv.get_double("tether.radius", s.tether_params.radius);
    s.tether_params.rho_segment = kv.get_double("tether.rho_segment", s.tether_params.rho_segment);
    s.tether_params.joint_limit = kv.get_double("tether.joint_limit", s.tether_params.joint_limit);
    s.tether_params.joint_damping =
        kv.get_double("tether.joint_damping", s.tether_params.joint_damping);
    s.tether_params.limit_stiffness =
        kv.get_double("tether.limit_stiffness", s.tether_params.limit_stiffness);
    s.tether_params.cd_normal = kv.get_double("tether.cd_normal", s.tether_params.cd_normal);
    s.tether_params.cd_tangent = kv.get_double("tether.cd_tangent", s.tether_params.cd_tangent);
    s.tether_params.projection_iterations =
        kv.get_int("tether.iterations", s.tether_params.projection_iterations);
    s.asv_attach = kv.get_vec3("tether.asv_attach", s.asv_attach);
    s.auv_attach = kv.get_vec3("tether.auv_attach", s.auv_attach);

    detail::load_plan(kv, "plans.asv", s.asv_plan);
    detail::load_plan(kv, "plans.auv", s.auv_plan);

    const std::string mode = kv.get_string("controller.mode",
        s.controller.mode == control::Mode::Aware ? "aware" : "non_aware");
    if (mode == "aware") s.controller.mode = control::Mode::Aware;
    else if (mode == "non_aware") s.controller.mode = control::Mode::NonAware;
    else throw ValidationError("controller.mode: expected 'aware' or 'non_aware'");

    const std::string set = kv.get_string("controller.set", "none");
    if (set != "none") {
        try {
            auto [m, sea] = control::configuration_set(set);
            s.controller.mode = m;
            s.controller.label = set;
            s.sea = sea;
            s.sea_preset =
                sea.label == environment::SeaStateLabel::Moderate ? "moderate" : "rough";
        } catch (const UnknownSet& e) {
            throw ValidationError(std::string("controller.set: ") + e.what());
        }
    }
    detail::load_gains(kv, "controller.asv", s.controller.asv);
    detail::load_gains(kv, "controller.auv", s.controller.auv);

    s.outputs.dir = kv.get_string("outputs.dir", s.outputs.dir);
    s.outputs.timeseries = kv.get_bool("outputs.timeseries", s.outputs.timeseries);
    s.outputs.metrics = kv.get_bool("outputs.metrics", s.outputs.metrics);
    s.outputs.effective_config = kv.get_bool("outputs.effective_config", s.outputs.effective_config);

    kv.reject_unknown_keys();

    // Resolve auto values so the effective configuration is fully explicit.
    s.tether_params.rho_water = s.rho_water;
    if (s.tether_params.segments <= 0)
        s.tether_params.segments = tether::default_segment_count(s.tether_params.length);
    if (s.tether_params.rho_segment <= 0.0)
        s.tether_params.rho_segment = 1.03 * s.rho_water;

    validate(s);
    return s;
}

/// Canonical dump of every effective value; feeding the result back through
/// load_scenario reproduces the scenario exactly.
inline std::string dump_scenario(const Scenario& s) {
    using detail::fmt;
    std::string o;
    o += "# tethersim scenario (effective configuration)\n";
    o += "sim.dt = " + fmt(s.sim.dt) + "\n";
    o += "sim.duration = " + fmt(s.sim.duration) + "\n";
    o += "sim.seed = " + std::to_string(s.sim.seed) + "\n";
    o += "sim.decimation = " + std::to_string(s.sim.decimation) + "\n";
    o += "env.gravity = " + fmt(s.gravity) + "\n";
    o += "env.rho_water = " + fmt(s.rho_water) + "\n";
    o += "sea.preset = custom\n";  // preset already expanded into explicit values
    o += "sea.wave.amplitude = " + fmt(s.sea.wave.amplitude) + "\n";
    o += "sea.wave.wavelength = " + fmt(s.sea.wave.wavelength) + "\n";
    o += "sea.wave.direction = " + fmt(s.sea.wave.direction) + "\n";
    o += "sea.wave.phase = " + fmt(s.sea.wave.phase) + "\n";
    o += "sea.wave.omega = " + fmt(s.sea.wave.omega) + "\n";
    o += std::string("sea.wave.phase_random = ") + (s.wave_phase_random ? "true" : "false") + "\n";
    o += "sea.wind.speed = " + fmt(s.sea.wind.speed) + "\n";
    o += "sea.wind.direction = " + fmt(s.sea.wind.direction) + "\n";
    o += "sea.wind.rho_air = " + fmt(s.sea.wind.rho_air) + "\n";
    o += "sea.current.speed = " + fmt(s.sea.current.speed) + "\n";
    o += "sea.current.alpha = " + fmt(s.sea.current.alpha) + "\n";
    o += "sea.current.beta = " + fmt(s.sea.current.beta) + "\n";

    auto dump_vehicle = [&](const std::string& p, const vehicles::VehicleParams& v,
                            const Pose& init) {
        o += p + ".position = " + fmt(init.position) + "\n";
        o += p + ".yaw = " + fmt(init.yaw) + "\n";
        o += p + ".mass_diag = " + fmt(detail::diag_of(v.M)) + "\n";
        o += p + ".damping_linear = " + fmt(detail::diag_of(v.D_lin)) + "\n";
        o += p + ".damping_quadratic = " + fmt(detail::diag_of(v.D_quad)) + "\n";
        o += p + ".weight = " + fmt(v.restoring.weight) + "\n";
        o += p + ".buoyancy = " + fmt(v.restoring.buoyancy) + "\n";
        o += p + ".cg = " + fmt(v.restoring.cg) + "\n";
        o += p + ".cb = " + fmt(v.restoring.cb) + "\n";
        o += p + ".hull = " + fmt(Vec3{v.hull_beam, v.hull_length, v.hull_draft}) + "\n";
        o += p + ".wind.cx = " + fmt(v.wind_cx) + "\n";
        o += p + ".wind.cy = " + fmt(v.wind_cy) + "\n";
        o += p + ".wind.area_frontal = " + fmt(v.wind_area_frontal) + "\n";
        o += p + ".wind.area_lateral = " + fmt(v.wind_area_lateral) + "\n";
        o += p + ".force_max = " + fmt(v.force_max) + "\n";
        o += p + ".moment_max = " + fmt(v.moment_max) + "\n";
        o += p + ".surface_following = " + std::string(v.surface_following ? "true" : "false") + "\n";
    };
    dump_vehicle("asv", s.asv_params, s.asv_init);
    dump_vehicle("auv", s.auv_params, s.auv_init);

    o += "tether.length = " + fmt(s.tether_params.length) + "\n";
    o += "tether.segments = " + std::to_string(s.tether_params.segments) + "\n";
    o += "tether.radius = " + fmt(s.tether_params.radius) + "\n";
    o += "tether.rho_segment = " + fmt(s.tether_params.rho_segment) + "\n";
    o += "tether.joint_limit = " + fmt(s.tether_params.joint_limit) + "\n";
    o += "tether.joint_damping = " + fmt(s.tether_params.joint_damping) + "\n";
    o += "tether.limit_stiffness = " + fmt(s.tether_params.limit_stiffness) + "\n";
    o += "tether.cd_normal = " + fmt(s.tether_params.cd_normal) + "\n";
    o += "tether.cd_tangent = " + fmt(s.tether_params.cd_tangent) + "\n";
    o += "tether.iterations = " + std::to_string(s.tether_params.projection_iterations) + "\n";
    o += "tether.asv_attach = " + fmt(s.asv_attach) + "\n";
    o += "tether.auv_attach = " + fmt(s.auv_attach) + "\n";

    auto dump_plan = [&](const std::string& p, const control::WaypointPlan& plan) {
        std::string wp;
        for (size_t i = 0; i < plan.waypoints.size(); ++i) {
            if (i) wp += " ; ";
            wp += fmt(plan.waypoints[i]);
        }
        o += p + ".waypoints = " + wp + "\n";
        o += p + ".radius = " + fmt(plan.acceptance_radius) + "\n";
        o += p + ".speed_cap = " + fmt(plan.speed_cap) + "\n";
    };
    dump_plan("plans.asv", s.asv_plan);
    dump_plan("plans.auv", s.auv_plan);

    o += std::string("controller.mode = ") +
         (s.controller.mode == control::Mode::Aware ? "aware" : "non_aware") + "\n";
    auto dump_gains = [&](const std::string& p, const control::Gains& g) {
        o += p + ".kp = " + fmt(g.kp) + "\n";
        o += p + ".kd = " + fmt(g.kd) + "\n";
        o += p + ".kpsi = " + fmt(g.kpsi) + "\n";
    };
    dump_gains("controller.asv", s.controller.asv);
    dump_gains("controller.auv", s.controller.auv);

    if (!s.outputs.dir.empty()) o += "outputs.dir = " + s.outputs.dir + "\n";
    o += std::string("outputs.timeseries = ") + (s.outputs.timeseries ? "true" : "false") + "\n";
    o += std::string("outputs.metrics = ") + (s.outputs.metrics ? "true" : "false") + "\n";
    o += std::string("outputs.effective_config = ") +
         (s.outputs.effective_config ? "true" : "false") + "\n";
    return o;
}

}  // namespace tethersim::scenario
