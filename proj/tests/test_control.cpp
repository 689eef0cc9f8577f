#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "tethersim/control.hpp"

using namespace tethersim;
using namespace tethersim::control;
using vehicles::ControlInput;
using vehicles::Disturbance;
using vehicles::VehicleParams;
using vehicles::VehicleState;

namespace {

VehicleParams auv_params() { return vehicles::default_auv_params(); }

WaypointPlan single(const Vec3& wp, double radius = 0.3, double cap = 0.6) {
    WaypointPlan p;
    p.waypoints = {wp};
    p.acceptance_radius = radius;
    p.speed_cap = cap;
    return p;
}

}  // namespace

TEST_CASE("zero command at the waypoint") {
    const VehicleParams params = auv_params();
    VehicleState s;
    s.pose.position = {2.0, 1.0, -1.5};
    const WaypointPlan plan = single(s.pose.position);
    const ControlInput c =
        compute_control(s, params, plan, 0, Gains{}, Mode::Aware, Disturbance{});
    REQUIRE(c.force.norm() == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(c.moment.norm() == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("non-aware mode ignores the estimate entirely") {
    const VehicleParams params = auv_params();
    VehicleState s;
    s.pose.position = {0.0, 0.0, -2.0};
    s.nu.linear = {0.2, -0.1, 0.05};
    const WaypointPlan plan = single({4.0, 3.0, -2.0});

    Disturbance wild;
    wild.force = {123.0, -77.0, 9.0};
    wild.moment = {0.0, 0.0, 5.0};
    const ControlInput a =
        compute_control(s, params, plan, 0, Gains{}, Mode::NonAware, Disturbance{});
    const ControlInput b =
        compute_control(s, params, plan, 0, Gains{}, Mode::NonAware, wild);
    REQUIRE(a.force.x == b.force.x);
    REQUIRE(a.force.y == b.force.y);
    REQUIRE(a.force.z == b.force.z);
    REQUIRE(a.moment.z == b.moment.z);
}

TEST_CASE("aware and non-aware agree when the estimate is zero") {
    const VehicleParams params = auv_params();
    VehicleState s;
    s.pose.yaw = 0.4;
    s.nu.linear = {0.1, 0.0, -0.2};
    const WaypointPlan plan = single({3.0, -2.0, -1.0});
    const ControlInput a =
        compute_control(s, params, plan, 0, Gains{}, Mode::Aware, Disturbance{});
    const ControlInput b =
        compute_control(s, params, plan, 0, Gains{}, Mode::NonAware, Disturbance{});
    REQUIRE(a.force.x == b.force.x);
    REQUIRE(a.force.y == b.force.y);
    REQUIRE(a.moment.z == b.moment.z);
}

TEST_CASE("aware hover balances a constant disturbance") {
    // Closed loop: at-goal hover under a constant force settles with the
    // command holding the disturbance (force balance, within clamps).
    VehicleParams params = auv_params();
    params.restoring.buoyancy = params.restoring.weight;  // neutral for the test
    params.restoring.cb = {};
    VehicleState s;
    s.pose.position = {1.0, 1.0, -2.0};
    const WaypointPlan plan = single(s.pose.position);
    Disturbance d;
    d.force = {6.0, -4.0, 2.0};

    const Gains gains{0.5, 40.0, 5.0};
    ControlInput last;
    for (int k = 0; k < 8000; ++k) {
        last = compute_control(s, params, plan, 0, gains, Mode::Aware, d);
        s = vehicles::step(s, params, last, d, {}, 0.005);
    }
    // Settled: velocity near zero and command equal-opposite the disturbance.
    REQUIRE(s.nu.linear.norm() < 1e-3);
    const Mat3 r = rotation_body_to_world(s.pose);
    const Vec3 cmd_world = r * last.force;
    REQUIRE(cmd_world.x == Catch::Approx(-d.force.x).margin(0.05));
    REQUIRE(cmd_world.y == Catch::Approx(-d.force.y).margin(0.05));
    REQUIRE(cmd_world.z == Catch::Approx(-d.force.z).margin(0.05));
    // And it never left the acceptance neighborhood by much.
    REQUIRE((s.pose.position - plan.waypoints[0]).norm() < plan.acceptance_radius + 0.05);
}

TEST_CASE("commands never exceed thrust limits") {
    VehicleParams params = auv_params();
    params.force_max = {5.0, 5.0, 5.0};
    params.moment_max = {0.0, 0.0, 1.0};
    VehicleState s;
    const WaypointPlan plan = single({100.0, -50.0, -30.0});
    Disturbance d;
    d.force = {500.0, 500.0, -500.0};
    const Gains hot{50.0, 500.0, 300.0};
    for (Mode mode : {Mode::Aware, Mode::NonAware}) {
        const ControlInput c = compute_control(s, params, plan, 0, hot, mode, d);
        REQUIRE(std::abs(c.force.x) <= 5.0);
        REQUIRE(std::abs(c.force.y) <= 5.0);
        REQUIRE(std::abs(c.force.z) <= 5.0);
        REQUIRE(std::abs(c.moment.z) <= 1.0);
        REQUIRE(c.moment.x == 0.0);
    }
}

TEST_CASE("surface vehicle commands surge and yaw only") {
    const VehicleParams params = vehicles::default_asv_params();
    VehicleState s;
    const WaypointPlan plan = single({0.0, 10.0, 0.0}, 0.4, 0.8);
    const ControlInput c =
        compute_control(s, params, plan, 0, Gains{0.5, 30.0, 12.0}, Mode::NonAware, {});
    REQUIRE(c.force.y == 0.0);
    REQUIRE(c.force.z == 0.0);
    REQUIRE(c.moment.z > 0.0);  // line of sight is at +90 degrees
}

TEST_CASE("waypoint progression is monotone") {
    WaypointPlan plan;
    plan.waypoints = {{0.0, 2.0, 0.0}, {0.0, 4.0, 0.0}, {0.0, 6.0, 0.0}};
    plan.acceptance_radius = 0.5;
    VehicleState s;
    size_t index = 0;
    // Drive straight down the +y line; the index must only count up.
    size_t prev = 0;
    for (double y = 0.0; y <= 8.0; y += 0.05) {
        s.pose.position = {0.0, y, 0.0};
        index = advance_waypoint(s, plan, index, true);
        REQUIRE(index >= prev);
        prev = index;
    }
    REQUIRE(index == 2);
    // Moving back toward the start must not regress the index.
    s.pose.position = {0.0, 2.0, 0.0};
    REQUIRE(advance_waypoint(s, plan, index, true) == 2);
}

TEST_CASE("configuration sets") {
    auto [m1, s1] = configuration_set("set_1");
    REQUIRE(m1 == Mode::Aware);
    REQUIRE(s1.label == environment::SeaStateLabel::Moderate);

    auto [m2, s2] = configuration_set("set_2");
    REQUIRE(m2 == Mode::NonAware);
    REQUIRE(s2.label == environment::SeaStateLabel::Moderate);

    auto [m3, s3] = configuration_set("set_3");
    REQUIRE(m3 == Mode::Aware);
    REQUIRE(s3.label == environment::SeaStateLabel::Rough);

    auto [m4, s4] = configuration_set("set_4");
    REQUIRE(m4 == Mode::NonAware);
    REQUIRE(s4.label == environment::SeaStateLabel::Rough);

    REQUIRE_THROWS_AS(configuration_set("set_5"), UnknownSet);
}

TEST_CASE("estimator is a pass-through of the applied disturbance") {
    Disturbance d;
    d.force = {1.0, -2.0, 0.5};
    d.moment = {0.0, 0.0, 0.1};
    const Disturbance est = disturbance_estimator(d);
    REQUIRE(est.force.x == d.force.x);
    REQUIRE(est.force.y == d.force.y);
    REQUIRE(est.force.z == d.force.z);
    REQUIRE(est.moment.z == d.moment.z);
}
