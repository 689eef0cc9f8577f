#pragma once

// Shared math and frame types: 3-vectors, ZYX Euler rotations, body<->world
// transforms and the small fixed-size dense matrices used by the physics
// modules. World frame is x-forward/y-left/z-up; depth is negative z.

#include <array>
#include <cmath>
#include <limits>

#include "tethersim/errors.hpp"

namespace tethersim {

inline constexpr double kPi = 3.14159265358979323846;

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
    double norm_sq() const { return dot(*this); }
    /// Horizontal (x,y) magnitude.
    double norm_xy() const { return std::hypot(x, y); }

    Vec3 normalized() const {
        const double n = norm();
        if (n <= 0.0) return {0.0, 0.0, 0.0};
        return *this / n;
    }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

/// 3x3 matrix, row-major. Only what the frame math needs.
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    static Mat3 identity() {
        Mat3 r;
        r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
        return r;
    }

    double& operator()(int i, int j) { return m[i][j]; }
    double operator()(int i, int j) const { return m[i][j]; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
                r.m[i][j] = s;
            }
        return r;
    }

    Mat3 transpose() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }

    /// Applies the transpose without forming it (R^T v = world->body for a rotation).
    Vec3 transpose_mul(const Vec3& v) const {
        return {m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
                m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
                m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z};
    }

    double det() const {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }

    /// Skew-symmetric cross-product matrix S(v), so S(v)*w = v x w.
    static Mat3 skew(const Vec3& v) {
        Mat3 s;
        s.m[0][1] = -v.z; s.m[0][2] = v.y;
        s.m[1][0] = v.z;  s.m[1][2] = -v.x;
        s.m[2][0] = -v.y; s.m[2][1] = v.x;
        return s;
    }
};

/// 6x6 matrix used for M, C(nu), D(nu). Row-major.
struct Mat6 {
    std::array<std::array<double, 6>, 6> m{};

    static Mat6 identity() {
        Mat6 r;
        for (int i = 0; i < 6; ++i) r.m[i][i] = 1.0;
        return r;
    }

    static Mat6 diagonal(const std::array<double, 6>& d) {
        Mat6 r;
        for (int i = 0; i < 6; ++i) r.m[i][i] = d[i];
        return r;
    }

    double& operator()(int i, int j) { return m[i][j]; }
    double operator()(int i, int j) const { return m[i][j]; }

    std::array<double, 6> operator*(const std::array<double, 6>& v) const {
        std::array<double, 6> r{};
        for (int i = 0; i < 6; ++i) {
            double s = 0.0;
            for (int j = 0; j < 6; ++j) s += m[i][j] * v[j];
            r[i] = s;
        }
        return r;
    }

    Mat6 operator+(const Mat6& o) const {
        Mat6 r;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) r.m[i][j] = m[i][j] + o.m[i][j];
        return r;
    }

    Mat6 transpose() const {
        Mat6 r;
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) r.m[i][j] = m[j][i];
        return r;
    }

    bool symmetric(double tol = 1e-9) const {
        for (int i = 0; i < 6; ++i)
            for (int j = i + 1; j < 6; ++j)
                if (std::abs(m[i][j] - m[j][i]) > tol) return false;
        return true;
    }

    /// Solves A x = b by LU with partial pivoting. Throws InvalidParams on a
    /// numerically singular matrix.
    std::array<double, 6> solve(const std::array<double, 6>& b) const {
        std::array<std::array<double, 7>, 6> a{};
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) a[i][j] = m[i][j];
            a[i][6] = b[i];
        }
        for (int col = 0; col < 6; ++col) {
            int piv = col;
            for (int r = col + 1; r < 6; ++r)
                if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
            if (std::abs(a[piv][col]) < 1e-300)
                throw InvalidParams("Mat6::solve: singular matrix");
            if (piv != col) std::swap(a[piv], a[col]);
            for (int r = col + 1; r < 6; ++r) {
                const double f = a[r][col] / a[col][col];
                for (int j = col; j < 7; ++j) a[r][j] -= f * a[col][j];
            }
        }
        std::array<double, 6> x{};
        for (int i = 5; i >= 0; --i) {
            double s = a[i][6];
            for (int j = i + 1; j < 6; ++j) s -= a[i][j] * x[j];
            x[i] = s / a[i][i];
        }
        return x;
    }
};

/// Pose eta: world position plus ZYX Euler attitude (yaw, pitch, roll).
struct Pose {
    Vec3 position;       // m, world frame, z positive up
    double yaw = 0.0;    // psi, rad, normalized to (-pi, pi]
    double pitch = 0.0;  // theta, rad
    double roll = 0.0;   // phi, rad

    bool finite() const {
        return position.finite() && std::isfinite(yaw) && std::isfinite(pitch) &&
               std::isfinite(roll);
    }
};

/// Body-frame velocity nu: (u, v, w) linear and (p, q, r) angular.
struct BodyVelocity {
    Vec3 linear;   // m/s, body frame: surge, sway, heave
    Vec3 angular;  // rad/s: p, q, r

    bool finite() const { return linear.finite() && angular.finite(); }

    std::array<double, 6> as_array() const {
        return {linear.x, linear.y, linear.z, angular.x, angular.y, angular.z};
    }
    static BodyVelocity from_array(const std::array<double, 6>& a) {
        return {{a[0], a[1], a[2]}, {a[3], a[4], a[5]}};
    }
};

/// Time derivative of a Pose.
struct PoseRate {
    Vec3 position_rate;     // m/s, world frame
    double yaw_rate = 0.0;  // rad/s
    double pitch_rate = 0.0;
    double roll_rate = 0.0;
};

// Pitch band below pi/2 where Euler rates are still well conditioned.
inline constexpr double kPitchSingularityGuard = 0.01;

/// Body-to-world rotation for ZYX Euler angles: R = Rz(yaw)*Ry(pitch)*Rx(roll).
inline Mat3 rotation_body_to_world(const Pose& pose) {
    const double cy = std::cos(pose.yaw), sy = std::sin(pose.yaw);
    const double cp = std::cos(pose.pitch), sp = std::sin(pose.pitch);
    const double cr = std::cos(pose.roll), sr = std::sin(pose.roll);
    Mat3 r;
    r.m[0][0] = cy * cp;
    r.m[0][1] = cy * sp * sr - sy * cr;
    r.m[0][2] = cy * sp * cr + sy * sr;
    r.m[1][0] = sy * cp;
    r.m[1][1] = sy * sp * sr + cy * cr;
    r.m[1][2] = sy * sp * cr - cy * sr;
    r.m[2][0] = -sp;
    r.m[2][1] = cp * sr;
    r.m[2][2] = cp * cr;
    return r;
}

/// eta_dot = J(eta) nu: world position rate and Euler-angle rates.
/// Throws SingularAttitude when |pitch| is inside the guard band around pi/2.
inline PoseRate kinematic_map(const Pose& pose, const BodyVelocity& nu) {
    if (std::abs(pose.pitch) >= kPi / 2.0 - kPitchSingularityGuard)
        throw SingularAttitude("kinematic_map: pitch too close to +-pi/2");

    PoseRate rate;
    rate.position_rate = rotation_body_to_world(pose) * nu.linear;

    const double cp = std::cos(pose.pitch), tp = std::tan(pose.pitch);
    const double cr = std::cos(pose.roll), sr = std::sin(pose.roll);
    const double p = nu.angular.x, q = nu.angular.y, r = nu.angular.z;
    rate.roll_rate = p + sr * tp * q + cr * tp * r;
    rate.pitch_rate = cr * q - sr * r;
    rate.yaw_rate = (sr / cp) * q + (cr / cp) * r;
    return rate;
}

}  // namespace tethersim
