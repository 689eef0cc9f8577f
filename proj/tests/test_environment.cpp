#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "tethersim/environment.hpp"

using namespace tethersim;
using namespace tethersim::environment;

TEST_CASE("wave force magnitude") {
    const HullDims hull{1.0, 2.0, 0.5};

    SECTION("zero amplitude gives zero force") {
        WaveParams w;
        w.amplitude = 0.0;
        w.wavelength = 2.0 * kPi;
        REQUIRE(wave_force_magnitude(1025.0, 9.81, hull, w) == 0.0);
    }

    SECTION("direct evaluation with round parameters") {
        WaveParams w;
        w.amplitude = 0.1;
        w.wavelength = 2.0 * kPi;  // k = (2 pi / Lambda) A = 0.1
        REQUIRE(wave_force_magnitude(1025.0, 9.81, hull, w) ==
                Catch::Approx(1005.525).epsilon(1e-12));
    }

    SECTION("linear in amplitude") {
        WaveParams w;
        w.amplitude = 0.37;
        w.wavelength = 14.0;
        const double f1 = wave_force_magnitude(1025.0, 9.81, hull, w);
        w.amplitude *= 2.0;
        REQUIRE(wave_force_magnitude(1025.0, 9.81, hull, w) == Catch::Approx(2.0 * f1));
    }

    SECTION("scaling laws in each parameter") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> u(0.5, 2.0);
        WaveParams w;
        w.amplitude = 0.4;
        w.wavelength = 11.0;
        for (int k = 0; k < 50; ++k) {
            const double rho = 900.0 * u(rng), g = 9.0 * u(rng);
            HullDims h{u(rng), u(rng), u(rng)};
            const double base = wave_force_magnitude(rho, g, h, w);
            const double s = u(rng);

            REQUIRE(wave_force_magnitude(rho * s, g, h, w) == Catch::Approx(s * base));
            HullDims hb = h;
            hb.beam *= s;
            REQUIRE(wave_force_magnitude(rho, g, hb, w) == Catch::Approx(s * base));
            WaveParams wl = w;
            wl.wavelength *= s;
            REQUIRE(wave_force_magnitude(rho, g, h, wl) == Catch::Approx(base / s));
        }
    }

    SECTION("rejects invalid hull") {
        WaveParams w;
        w.amplitude = 0.1;
        REQUIRE_THROWS_AS(wave_force_magnitude(1025.0, 9.81, {0.0, 1.0, 1.0}, w),
                          InvalidParams);
        REQUIRE_THROWS_AS(wave_force_magnitude(-1.0, 9.81, hull, w), InvalidParams);
    }
}

TEST_CASE("wave force vector") {
    const HullDims hull{1.0, 2.0, 0.5};
    WaveParams w;
    w.amplitude = 0.1;
    w.wavelength = 2.0 * kPi;
    w.omega = 1.0;
    w.phase = 0.0;

    SECTION("zero at sin crossings") {
        const Vec3 f = wave_force(kPi, 1025.0, 9.81, hull, w);  // sin(pi) = 0
        REQUIRE(f.norm() < 1e-9);
    }

    SECTION("full magnitude along the propagation direction") {
        const Vec3 f = wave_force(kPi / 2.0, 1025.0, 9.81, hull, w);  // sin = 1
        REQUIRE(f.x == Catch::Approx(1005.525));
        REQUIRE(f.y == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(f.z == 0.0);
    }

    SECTION("45 degree direction splits x and y equally") {
        w.direction = kPi / 4.0;
        const Vec3 f = wave_force(kPi / 2.0, 1025.0, 9.81, hull, w);
        REQUIRE(f.x == Catch::Approx(f.y).margin(1e-12));
    }

    SECTION("dispersion supplies omega when unset") {
        WaveParams d = w;
        d.omega = 0.0;
        d.wavelength = 20.0;
        REQUIRE(wave_frequency(d, 9.81) == Catch::Approx(1.7555347883683727).epsilon(1e-14));
        d.wavelength = 30.0;
        REQUIRE(wave_frequency(d, 9.81) == Catch::Approx(1.4333881524024554).epsilon(1e-14));
    }
}

TEST_CASE("wave depth attenuation") {
    WaveParams w;
    w.wavelength = 20.0;
    REQUIRE(wave_depth_attenuation(w, 0.0) == 1.0);
    REQUIRE(wave_depth_attenuation(w, 2.0) == 1.0);  // above the surface: no decay
    REQUIRE(wave_depth_attenuation(w, -3.0) ==
            Catch::Approx(std::exp(-2.0 * kPi * 3.0 / 20.0)));
}

TEST_CASE("wind force") {
    WindParams w;
    w.rho_air = 1.225;
    w.speed = 10.0;
    w.cx = 0.8;
    w.cy = 0.9;
    w.area_frontal = 0.5;
    w.area_lateral = 0.8;

    SECTION("zero wind speed gives zero force") {
        WindParams calm = w;
        calm.speed = 0.0;
        REQUIRE(wind_force(calm, 0.7).norm() == 0.0);
    }

    SECTION("aligned wind: 0.5 rho V^2 Cx Aw") {
        const Vec3 f = wind_force(w, 0.0);  // wind along body x
        REQUIRE(f.x == Catch::Approx(24.5));
        REQUIRE(f.y == Catch::Approx(0.0).margin(1e-12));
        REQUIRE(f.z == 0.0);
    }

    SECTION("quadratic in wind speed") {
        const double f1 = wind_force(w, 0.3).norm();
        WindParams w2 = w;
        w2.speed *= 2.0;
        REQUIRE(wind_force(w2, 0.3).norm() == Catch::Approx(4.0 * f1));
    }

    SECTION("stays in the horizontal plane") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> ang(-kPi, kPi);
        for (int k = 0; k < 20; ++k) {
            WindParams wr = w;
            wr.direction = ang(rng);
            REQUIRE(wind_force(wr, ang(rng)).z == 0.0);
        }
    }
}

TEST_CASE("current velocity") {
    SECTION("zero angles point along +x") {
        const Vec3 v = current_velocity({1.3, 0.0, 0.0});
        REQUIRE(v.x == Catch::Approx(1.3));
        REQUIRE(v.y == 0.0);
        REQUIRE(v.z == 0.0);
    }

    SECTION("zero speed gives zero vector") {
        REQUIRE(current_velocity({0.0, 0.7, -0.3}).norm() == 0.0);
    }

    SECTION("magnitude equals V_c for any angles") {
        std::mt19937_64 rng(13);
        std::uniform_real_distribution<double> ang(-kPi, kPi);
        for (int k = 0; k < 100; ++k) {
            const double vc = 0.1 + 2.0 * std::abs(ang(rng)) / kPi;
            const Vec3 v = current_velocity({vc, ang(rng), ang(rng)});
            REQUIRE(v.norm() == Catch::Approx(vc).epsilon(1e-12));
        }
    }
}

TEST_CASE("sea state presets carry the published magnitudes") {
    const SeaState moderate = sea_state_preset("moderate");
    REQUIRE(moderate.current.speed == 0.5);
    REQUIRE(moderate.wind.speed == 3.0);
    REQUIRE(moderate.wave.amplitude == 1.5);  // 3 m significant height / 2
    REQUIRE(moderate.wave.wavelength == 20.0);

    const SeaState rough = sea_state_preset("rough");
    REQUIRE(rough.wind.speed == 4.5);
    REQUIRE(rough.current.speed == 1.0);
    REQUIRE(rough.wave.amplitude == 2.25);
    REQUIRE(rough.wave.wavelength == 30.0);

    SECTION("presets are immutable across calls") {
        const SeaState again = sea_state_preset("rough");
        REQUIRE(again.wave.amplitude == rough.wave.amplitude);
        REQUIRE(again.wind.speed == rough.wind.speed);
        REQUIRE(again.current.speed == rough.current.speed);
    }

    SECTION("unknown label throws") {
        REQUIRE_THROWS_AS(sea_state_preset("hurricane"), UnknownPreset);
    }
}
