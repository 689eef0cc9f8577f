#pragma once

// Environmental disturbance models: sinusoidal wave forcing, quadratic wind
// load, steady ocean current, and the named sea-state presets.

#include <cmath>
#include <string>

#include "tethersim/core.hpp"
#include "tethersim/errors.hpp"

namespace tethersim::environment {

struct WaveParams {
    double amplitude = 0.0;   // A, m
    double wavelength = 20.0; // Lambda, m
    double direction = 0.0;   // chi_w, rad, world frame (propagation heading)
    double phase = 0.0;       // phi_0, rad
    double omega = 0.0;       // rad/s; 0 = derive from deep-water dispersion
};

struct WindParams {
    double rho_air = 1.225;   // kg/m^3
    double speed = 0.0;       // V_w, m/s
    double direction = 0.0;   // chi_wind, rad, world frame (blowing-toward)
    double cx = 0.8;          // longitudinal drag coefficient
    double cy = 0.9;          // lateral drag coefficient
    double area_frontal = 0.3;  // A_w, m^2
    double area_lateral = 0.5;  // A_lw, m^2
};

struct CurrentParams {
    double speed = 0.0;  // V_c, m/s
    double alpha = 0.0;  // attack angle, rad (vertical plane)
    double beta = 0.0;   // sideslip angle, rad (horizontal plane)
};

enum class SeaStateLabel { Calm, Moderate, Rough, Custom };

struct SeaState {
    SeaStateLabel label = SeaStateLabel::Calm;
    WaveParams wave;
    WindParams wind;
    CurrentParams current;
};

/// Dimensions entering the wave-force product rho*g*B*L*T*k.
struct HullDims {
    double beam = 0.0;    // B, m
    double length = 0.0;  // L, m
    double draft = 0.0;   // T, m
};

inline void check_wave(const WaveParams& w) {
    if (!(w.amplitude >= 0.0) || !(w.wavelength > 0.0) || !(w.omega >= 0.0) ||
        !std::isfinite(w.direction) || !std::isfinite(w.phase))
        throw InvalidParams("wave parameters: need A >= 0, Lambda > 0, omega >= 0");
}

inline void check_wind(const WindParams& w) {
    if (!(w.rho_air > 0.0) || !(w.speed >= 0.0) || !(w.cx >= 0.0) || !(w.cy >= 0.0) ||
        !(w.area_frontal >= 0.0) || !(w.area_lateral >= 0.0))
        throw InvalidParams("wind parameters: need rho_air > 0, V_w >= 0, areas and coefficients >= 0");
}

inline void check_current(const CurrentParams& c) {
    if (!(c.speed >= 0.0) || !std::isfinite(c.alpha) || !std::isfinite(c.beta))
        throw InvalidParams("current parameters: need V_c >= 0");
}

/// Angular frequency: configured value, or deep-water dispersion
/// omega = sqrt(g * 2*pi / Lambda) when the configured value is zero.
inline double wave_frequency(const WaveParams& w, double g) {
    if (w.omega > 0.0) return w.omega;
    return std::sqrt(g * 2.0 * kPi / w.wavelength);
}

/// Peak wave-force magnitude rho_water*g*B*L*T*k with k = (2*pi/Lambda)*A.
inline double wave_force_magnitude(double rho_water, double g, const HullDims& hull,
                                   const WaveParams& wave) {
    check_wave(wave);
    if (!(rho_water > 0.0) || !(g > 0.0) || !(hull.beam > 0.0) ||
        !(hull.length > 0.0) || !(hull.draft > 0.0))
        throw InvalidParams("wave_force_magnitude: hull dimensions, rho_water and g must be > 0");
    const double k = (2.0 * kPi / wave.wavelength) * wave.amplitude;
    return rho_water * g * hull.beam * hull.length * hull.draft * k;
}

/// World-frame wave force at time t: the peak magnitude oscillating as
/// sin(omega*t + phi_0), applied along the horizontal propagation direction.
inline Vec3 wave_force(double t, double rho_water, double g, const HullDims& hull,
                       const WaveParams& wave) {
    const double mag = wave_force_magnitude(rho_water, g, hull, wave);
    const double omega = wave_frequency(wave, g);
    const double s = mag * std::sin(omega * t + wave.phase);
    return {s * std::cos(wave.direction), s * std::sin(wave.direction), 0.0};
}

/// Free-surface elevation of the single sinusoidal wave at a horizontal
/// position. Used to slave the surface vehicle's heave to the sea surface.
inline double wave_elevation(const WaveParams& wave, double g, double x, double y,
                             double t) {
    if (wave.amplitude <= 0.0) return 0.0;
    const double omega = wave_frequency(wave, g);
    const double k = 2.0 * kPi / wave.wavelength;
    const double along = x * std::cos(wave.direction) + y * std::sin(wave.direction);
    return wave.amplitude * std::sin(omega * t + wave.phase - k * along);
}

/// d(elevation)/dt at fixed position.
inline double wave_elevation_rate(const WaveParams& wave, double g, double x, double y,
                                  double t) {
    if (wave.amplitude <= 0.0) return 0.0;
    const double omega = wave_frequency(wave, g);
    const double k = 2.0 * kPi / wave.wavelength;
    const double along = x * std::cos(wave.direction) + y * std::sin(wave.direction);
    return wave.amplitude * omega * std::cos(omega * t + wave.phase - k * along);
}

/// Depth attenuation factor exp(-2*pi*depth/Lambda) of linear wave theory.
/// depth is measured positive downward from the surface; z >= 0 gives 1.
inline double wave_depth_attenuation(const WaveParams& wave, double z) {
    const double depth = std::max(0.0, -z);
    return std::exp(-2.0 * kPi * depth / wave.wavelength);
}

/// World-frame wind force on a surface vehicle with heading `vehicle_yaw`.
/// Longitudinal term 0.5*rho*V^2*Cx*Aw acts along the wind direction; the
/// lateral term 0.5*rho*V^2*Cy*Alw*sin(gamma) acts perpendicular to it, where
/// gamma is the wind direction relative to the vehicle heading.
inline Vec3 wind_force(const WindParams& wind, double vehicle_yaw) {
    check_wind(wind);
    if (wind.speed == 0.0) return {0.0, 0.0, 0.0};
    const double q = 0.5 * wind.rho_air * wind.speed * wind.speed;
    const double gamma = wrap_angle(wind.direction - vehicle_yaw);
    const double f_long = q * wind.cx * wind.area_frontal;
    const double f_lat = q * wind.cy * wind.area_lateral * std::sin(gamma);
    const Vec3 u{std::cos(wind.direction), std::sin(wind.direction), 0.0};
    const Vec3 u_perp{-std::sin(wind.direction), std::cos(wind.direction), 0.0};
    return u * f_long + u_perp * f_lat;
}

/// World-frame current velocity: full 3-D decomposition of (V_c, alpha, beta).
/// x = V_c cos(alpha) cos(beta), y = V_c sin(beta), z = V_c sin(alpha) cos(beta).
inline Vec3 current_velocity(const CurrentParams& c) {
    check_current(c);
    return {c.speed * std::cos(c.alpha) * std::cos(c.beta),
            c.speed * std::sin(c.beta),
            c.speed * std::sin(c.alpha) * std::cos(c.beta)};
}

/// Named sea-state presets. Moderate: 3 m wave height / 3 m/s wind /
/// 0.5 m/s current. Rough: 4.5 / 4.5 / 1.0. Amplitude = height/2; wavelength
/// defaults 20 m (Moderate) and 30 m (Rough); directions zero.
inline SeaState sea_state_preset(const std::string& label) {
    SeaState s;
    if (label == "moderate" || label == "Moderate") {
        s.label = SeaStateLabel::Moderate;
        s.wave.amplitude = 1.5;
        s.wave.wavelength = 20.0;
        s.wind.speed = 3.0;
        s.current.speed = 0.5;
    } else if (label == "rough" || label == "Rough") {
        s.label = SeaStateLabel::Rough;
        s.wave.amplitude = 2.25;
        s.wave.wavelength = 30.0;
        s.wind.speed = 4.5;
        s.current.speed = 1.0;
    } else if (label == "calm" || label == "Calm") {
        s.label = SeaStateLabel::Calm;
    } else {
        throw UnknownPreset("unknown sea-state preset '" + label +
                            "' (expected moderate, rough or calm)");
    }
    return s;
}

}  // namespace tethersim::environment
