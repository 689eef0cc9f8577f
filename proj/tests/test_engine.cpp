#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "tethersim/engine.hpp"
#include "tethersim/sweep.hpp"

using namespace tethersim;
using namespace tethersim::engine;

namespace {

// Everything neutral: calm sea, neutral cable with bends inside the joint
// limit, vehicles holding their start positions. Nothing should move.
const char* kNeutralScenario =
    "sea.preset = calm\n"
    "sea.wave.phase_random = false\n"
    "sim.duration = 10\n"
    "tether.length = 3\n"
    "tether.rho_segment = 1025\n"
    "auv.weight = 132.435\n"
    "auv.buoyancy = 132.435\n"
    "plans.asv.waypoints = 0 0 0\n"
    "plans.auv.waypoints = 1.5 0 -1.5\n";

}  // namespace

TEST_CASE("calm neutral world holds its initial state") {
    const auto s = scenario::load_scenario(kNeutralScenario);
    const RunResult r = run(s);
    const Row& first = r.rows.front();
    const Row& last = r.rows.back();
    REQUIRE(last.t == Catch::Approx(10.0));
    REQUIRE((last.asv_pos - first.asv_pos).norm() < 1e-6);
    REQUIRE((last.auv_pos - first.auv_pos).norm() < 1e-6);
    REQUIRE(r.metrics.link_dev_max_pct < 0.01);
}

TEST_CASE("recorded row count is duration/(dt*decimation) + 1") {
    auto s = scenario::load_scenario("sea.preset = calm\nsim.duration = 1\nsim.decimation = 1\n");
    REQUIRE(run(s).rows.size() == 201);
    s = scenario::load_scenario("sea.preset = calm\nsim.duration = 2\nsim.decimation = 10\n");
    REQUIRE(run(s).rows.size() == 41);
}

TEST_CASE("identical scenario and seed give byte-identical output") {
    const auto s = scenario::load_scenario("sea.preset = rough\nsim.duration = 5\n");
    const RunResult a = run(s);
    const RunResult b = run(s);
    REQUIRE(scenario::timeseries_csv(a.rows) == scenario::timeseries_csv(b.rows));
    REQUIRE(scenario::metrics_csv(a.metrics) == scenario::metrics_csv(b.metrics));
}

TEST_CASE("wave phase draw is seeded and idempotent") {
    auto s = scenario::load_scenario("sea.preset = rough\n");
    auto a = s, b = s, c = s;
    resolve_randomness(a);
    resolve_randomness(b);
    c.sim.seed = s.sim.seed + 1;
    resolve_randomness(c);
    REQUIRE(a.sea.wave.phase == b.sea.wave.phase);
    REQUIRE(a.sea.wave.phase != c.sea.wave.phase);
    const double before = a.sea.wave.phase;
    resolve_randomness(a);  // already resolved: no further draw
    REQUIRE(a.sea.wave.phase == before);
}

TEST_CASE("world snapshot resumes bit-exactly") {
    auto s = scenario::load_scenario("sea.preset = rough\nsim.duration = 5\n");
    resolve_randomness(s);

    WorldState w = initialize_world(s);
    for (int k = 0; k < 200; ++k) step_world(w, s);

    const std::string snap = save_world(w);
    WorldState resumed = load_world(snap, s);
    REQUIRE(save_world(resumed) == snap);

    for (int k = 0; k < 200; ++k) {
        step_world(w, s);
        step_world(resumed, s);
    }
    REQUIRE(w.asv.pose.position.x == resumed.asv.pose.position.x);
    REQUIRE(w.asv.pose.position.z == resumed.asv.pose.position.z);
    REQUIRE(w.auv.nu.linear.y == resumed.auv.nu.linear.y);
    REQUIRE(w.asv.pose.yaw == resumed.asv.pose.yaw);
    for (int i = 0; i < w.cable.node_count(); ++i) {
        REQUIRE(w.cable.positions[i].x == resumed.cable.positions[i].x);
        REQUIRE(w.cable.positions[i].y == resumed.cable.positions[i].y);
        REQUIRE(w.cable.positions[i].z == resumed.cable.positions[i].z);
        REQUIRE(w.cable.velocities[i].z == resumed.cable.velocities[i].z);
    }
    REQUIRE(w.asv_waypoint == resumed.asv_waypoint);
}

TEST_CASE("step halving changes the calm endpoint by well under 5 cm") {
    auto endpoint = [](double dt) {
        char cfg[160];
        std::snprintf(cfg, sizeof cfg,
                      "sea.preset = calm\nsim.duration = 30\nsim.dt = %.6f\n", dt);
        const auto s = scenario::load_scenario(cfg);
        const RunResult r = run(s);
        return std::pair{r.rows.back().asv_pos, r.rows.back().auv_pos};
    };
    const auto [asv_a, auv_a] = endpoint(0.005);
    const auto [asv_b, auv_b] = endpoint(0.0025);
    REQUIRE((asv_a - asv_b).norm() < 0.05);
    REQUIRE((auv_a - auv_b).norm() < 0.05);
}

TEST_CASE("surface vehicle rides the wave surface") {
    auto s = scenario::load_scenario(
        "sea.preset = rough\nsim.duration = 8\nsea.wave.phase_random = false\n");
    resolve_randomness(s);
    WorldState w = initialize_world(s);
    for (int k = 0; k < 1600; ++k) {
        step_world(w, s);
        const double zeta = environment::wave_elevation(
            s.sea.wave, s.gravity, w.asv.pose.position.x, w.asv.pose.position.y, w.t);
        REQUIRE(w.asv.pose.position.z == Catch::Approx(zeta).margin(1e-12));
        REQUIRE(w.asv.pose.roll == 0.0);
        REQUIRE(w.asv.pose.pitch == 0.0);
    }
    // The AUV does not follow the surface; it tracks its depth waypoint.
    REQUIRE(w.auv.pose.position.z < -0.5);
}

TEST_CASE("environmental disturbance composition") {
    auto s = scenario::load_scenario("sea.preset = rough\nsea.wave.phase_random = false\n");

    vehicles::VehicleState asv;
    asv.pose = s.asv_init;
    const auto d_asv = environmental_disturbance(s, 0.3, asv, s.asv_params);

    SECTION("matches the sum of the individual force models") {
        const Vec3 wave = environment::wave_force(
            0.3, s.rho_water, s.gravity,
            {s.asv_params.hull_beam, s.asv_params.hull_length, s.asv_params.hull_draft},
            s.sea.wave);
        environment::WindParams wp = s.sea.wind;
        wp.cx = s.asv_params.wind_cx;
        wp.cy = s.asv_params.wind_cy;
        wp.area_frontal = s.asv_params.wind_area_frontal;
        wp.area_lateral = s.asv_params.wind_area_lateral;
        const Vec3 wind = environment::wind_force(wp, asv.pose.yaw);

        const Mat3 r = rotation_body_to_world(asv.pose);
        const Vec3 flow_body = r.transpose_mul(environment::current_velocity(s.sea.current));
        const Vec3 drag_body{s.asv_params.D_quad(0, 0) * std::abs(flow_body.x) * flow_body.x,
                             s.asv_params.D_quad(1, 1) * std::abs(flow_body.y) * flow_body.y,
                             s.asv_params.D_quad(2, 2) * std::abs(flow_body.z) * flow_body.z};
        const Vec3 expect = wave + wind + r * drag_body;
        REQUIRE(d_asv.force.x == Catch::Approx(expect.x).margin(1e-12));
        REQUIRE(d_asv.force.y == Catch::Approx(expect.y).margin(1e-12));
        REQUIRE(d_asv.force.z == Catch::Approx(expect.z).margin(1e-12));
    }

    SECTION("underwater vehicle: attenuated wave, no wind") {
        vehicles::VehicleState auv;
        auv.pose = s.auv_init;  // z = -1.5
        const auto d_auv = environmental_disturbance(s, 0.3, auv, s.auv_params);

        auto gated = s;
        gated.sea.wind.speed = 0.0;
        gated.sea.current.speed = 0.0;
        const auto wave_only = environmental_disturbance(gated, 0.3, auv, s.auv_params);
        const Vec3 surface_wave = environment::wave_force(
            0.3, s.rho_water, s.gravity,
            {s.auv_params.hull_beam, s.auv_params.hull_length, s.auv_params.hull_draft},
            s.sea.wave);
        const double atten = environment::wave_depth_attenuation(s.sea.wave, -1.5);
        REQUIRE(atten < 1.0);
        REQUIRE(wave_only.force.norm() ==
                Catch::Approx(surface_wave.norm() * atten).epsilon(1e-12));
        // Wind contributes nothing underwater: removing it changes nothing
        // except the current and wave terms already accounted for.
        REQUIRE(d_auv.force.z == Catch::Approx(wave_only.force.z).margin(1e-12));
    }

    SECTION("calm sea: zero disturbance (estimator sees zero)") {
        auto calm = scenario::load_scenario("sea.preset = calm\n");
        const auto d = environmental_disturbance(calm, 1.0, asv, calm.asv_params);
        REQUIRE(d.force.norm() == 0.0);
        REQUIRE(d.moment.norm() == 0.0);
    }
}

TEST_CASE("instability carries the step index") {
    auto s = scenario::load_scenario("sea.preset = calm\nsim.duration = 1\n");
    resolve_randomness(s);
    WorldState w = initialize_world(s);
    step_world(w, s);
    w.auv.nu.linear = {5e4, 0.0, 0.0};  // corrupt the state: next tether step blows
    try {
        step_world(w, s);
        step_world(w, s);
        FAIL("expected Unstable");
    } catch (const Unstable& e) {
        REQUIRE(e.step_index >= 1);
        REQUIRE(std::string(e.what()).find("step") != std::string::npos);
    }
}

TEST_CASE("run propagates instability as Unstable") {
    // An absurd joint-limit stiffness on an initially over-bent cable blows up
    // within a few steps.
    const auto s = scenario::load_scenario(
        "sea.preset = calm\nsim.duration = 5\ntether.limit_stiffness = 1e9\n");
    REQUIRE_THROWS_AS(run(s), Unstable);
}

TEST_CASE("truncated world snapshots are rejected") {
    auto s = scenario::load_scenario("sea.preset = calm\nsim.duration = 1\n");
    resolve_randomness(s);
    WorldState w = initialize_world(s);
    const std::string snap = save_world(w);
    REQUIRE_THROWS_AS(load_world(snap.substr(0, snap.size() / 2), s), ParseError);
    REQUIRE_THROWS_AS(load_world("not a snapshot", s), ParseError);
}

TEST_CASE("rough 10 s run stays within the link-length budget") {
    const auto s = scenario::load_scenario("sea.preset = rough\nsim.duration = 10\n");
    const RunResult r = run(s);
    REQUIRE(r.metrics.link_dev_max_pct < 0.5);
    REQUIRE(r.metrics.peak_tension > 0.0);
    REQUIRE(r.metrics.combined_err >= 0.0);
    REQUIRE(r.metrics.combined_err ==
            Catch::Approx(0.5 * (r.metrics.asv_mean_err + r.metrics.auv_mean_err)));
}
