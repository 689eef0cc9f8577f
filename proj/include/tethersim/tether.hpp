#pragma once

// Lumped-mass dynamic tether: a chain of buoyant spherical segments joined by
// inextensible links. Nodes carry gravity, buoyancy and quadratic drag; joints
// carry damping plus a one-sided angular-limit penalty. Integration is
// semi-implicit Euler followed by iterative link-distance projection with the
// end nodes kinematically pinned to the vehicle attachment points.

#include <cmath>
#include <string>
#include <vector>

#include "tethersim/core.hpp"
#include "tethersim/errors.hpp"

namespace tethersim::tether {

struct TetherParams {
    double length = 10.0;        // L, m
    int segments = 20;           // N
    double radius = 0.025;       // segment sphere radius, m
    double rho_segment = 1055.75;  // kg/m^3, default 1.03 * rho_water (slight sink)
    double rho_water = 1025.0;   // kg/m^3
    double joint_limit = 1.5;    // theta_max, rad
    double joint_damping = 0.05; // d_j, N*m*s/rad
    double limit_stiffness = 50.0;  // penalty moment per rad past the limit, N*m/rad
    double cd_normal = 0.8;      // C_dn
    double cd_tangent = 0.02;    // C_dt
    int projection_iterations = 10;  // K

    double segment_length() const { return length / segments; }
    double segment_volume() const {
        return (4.0 / 3.0) * kPi * radius * radius * radius;
    }
    double segment_mass() const { return rho_segment * segment_volume(); }
};

inline void check_params(const TetherParams& p) {
    if (!(p.length > 0.0) || p.segments < 2 || !(p.radius > 0.0) ||
        !(p.rho_segment > 0.0) || !(p.rho_water > 0.0) || !(p.joint_limit > 0.0) ||
        !(p.joint_damping >= 0.0) || !(p.limit_stiffness >= 0.0) ||
        p.projection_iterations < 1)
        throw InvalidParams("tether: invalid parameters (need L > 0, N >= 2, r > 0, ...)");
}

/// Segment count heuristic: one node per 0.5 m of cable, at least 8 segments.
inline int default_segment_count(double length) {
    const int n = static_cast<int>(std::ceil(length / 0.5));
    return n < 8 ? 8 : n;
}

struct TetherState {
    std::vector<Vec3> positions;   // N+1 nodes, world frame, m
    std::vector<Vec3> velocities;  // m/s
    std::vector<double> node_mass;    // lumped, kg (half segments at the ends)
    std::vector<double> node_volume;  // lumped displaced volume, m^3
    double segment_mass = 0.0;     // m_s per sphere, kg
    double segment_inertia = 0.0;  // 2/5*m_s*r^2, kg*m^2 (unused by the point-mass model)
    double rest_length = 0.0;      // L/N, m

    int node_count() const { return static_cast<int>(positions.size()); }

    double max_link_deviation() const {
        double dev = 0.0;
        for (size_t i = 0; i + 1 < positions.size(); ++i) {
            const double len = (positions[i + 1] - positions[i]).norm();
            dev = std::max(dev, std::abs(len - rest_length) / rest_length);
        }
        return dev;
    }
};

/// Kinematic state of one attachment point.
struct EndpointState {
    Vec3 point;     // world, m
    Vec3 velocity;  // world, m/s
};

/// Forces exchanged with the vehicles. `asv_force`/`auv_force` is the force
/// the attachment applies TO the cable (constraint-projection impulses over dt
/// plus cancellation of the pinned node's external and joint loads); each
/// vehicle experiences the negative. The raw projection impulses are kept for
/// action-reaction bookkeeping.
struct EndpointCoupling {
    Vec3 asv_force;
    Vec3 auv_force;
    Vec3 asv_projection_impulse;  // accumulated impulse given to node 1, N*s
    Vec3 auv_projection_impulse;  // accumulated impulse given to node N-1, N*s
};

/// Builds a tether from an initial node polyline (N+1 points spaced L/N within
/// 1%). Sphere mass is lumped at the nodes, half segments at the two ends;
/// velocities start at zero.
inline TetherState build(const TetherParams& params, const std::vector<Vec3>& init_shape) {
    check_params(params);
    const int n = params.segments;
    if (static_cast<int>(init_shape.size()) != n + 1)
        throw BadInitShape("tether::build: expected " + std::to_string(n + 1) +
                           " points, got " + std::to_string(init_shape.size()));
    const double l0 = params.segment_length();
    for (int i = 0; i < n; ++i) {
        const double len = (init_shape[i + 1] - init_shape[i]).norm();
        if (std::abs(len - l0) > 0.01 * l0)
            throw BadInitShape("tether::build: link " + std::to_string(i) +
                               " length deviates more than 1% from L/N");
    }

    TetherState s;
    s.positions = init_shape;
    s.velocities.assign(init_shape.size(), Vec3{});
    s.segment_mass = params.segment_mass();
    s.segment_inertia = 0.4 * s.segment_mass * params.radius * params.radius;
    s.rest_length = l0;
    s.node_mass.resize(init_shape.size());
    s.node_volume.resize(init_shape.size());
    const double vol = params.segment_volume();
    for (int i = 0; i <= n; ++i) {
        const bool end = (i == 0 || i == n);
        s.node_mass[i] = end ? 0.5 * s.segment_mass : s.segment_mass;
        s.node_volume[i] = end ? 0.5 * vol : vol;
    }
    return s;
}

/// Gravity, buoyancy and quadratic drag per node. Drag decomposes the relative
/// flow (flow - node velocity) into components tangential and normal to the
/// local cable direction; projected areas are pi*r^2 (normal) and 2*r*(L/N)
/// (tangential), halved at the end nodes like the mass lumping.
inline std::vector<Vec3> external_forces(const TetherState& state, const TetherParams& params,
                                         const std::vector<Vec3>& flow, double g) {
    const int count = state.node_count();
    if (static_cast<int>(flow.size()) != count)
        throw InvalidParams("tether::external_forces: flow vector size mismatch");

    std::vector<Vec3> forces(count);
    const double area_n = kPi * params.radius * params.radius;
    const double area_t = 2.0 * params.radius * params.segment_length();

    for (int i = 0; i < count; ++i) {
        const bool end = (i == 0 || i == count - 1);
        Vec3 f{0.0, 0.0, (params.rho_water * state.node_volume[i] - state.node_mass[i]) * g};

        // Local tangent from the neighboring nodes.
        Vec3 tangent;
        if (i == 0) tangent = state.positions[1] - state.positions[0];
        else if (i == count - 1) tangent = state.positions[i] - state.positions[i - 1];
        else tangent = state.positions[i + 1] - state.positions[i - 1];
        tangent = tangent.normalized();

        const Vec3 rel = flow[i] - state.velocities[i];
        const Vec3 rel_t = tangent * rel.dot(tangent);
        const Vec3 rel_n = rel - rel_t;
        const double scale = end ? 0.5 : 1.0;
        f += rel_n * (0.5 * params.rho_water * params.cd_normal * area_n * scale * rel_n.norm());
        f += rel_t * (0.5 * params.rho_water * params.cd_tangent * area_t * scale * rel_t.norm());
        forces[i] = f;
    }
    return forces;
}

/// Joint damping and angular-limit penalty, expressed as equivalent force
/// couples on the node triplets. Damping -d_j * relative link angular velocity
/// is always active; the limit penalty engages one-sidedly past theta_max.
inline std::vector<Vec3> joint_forces(const TetherState& state, const TetherParams& params) {
    const int count = state.node_count();
    std::vector<Vec3> forces(count);

    for (int i = 1; i + 1 < count; ++i) {
        const Vec3 r1 = state.positions[i] - state.positions[i - 1];
        const Vec3 r2 = state.positions[i + 1] - state.positions[i];
        const double l1 = r1.norm(), l2 = r2.norm();
        if (l1 < 1e-12 || l2 < 1e-12) continue;
        const Vec3 d1 = r1 / l1, d2 = r2 / l2;

        // Twist-free link angular velocities omega_k = d_k x d_k_dot.
        const Vec3 dv1 = (state.velocities[i] - state.velocities[i - 1]) / l1;
        const Vec3 dv2 = (state.velocities[i + 1] - state.velocities[i]) / l2;
        const Vec3 omega1 = d1.cross(dv1 - d1 * d1.dot(dv1));
        const Vec3 omega2 = d2.cross(dv2 - d2 * d2.dot(dv2));
        Vec3 torque = (omega2 - omega1) * -params.joint_damping;

        const Vec3 axis = d1.cross(d2);
        const double sin_theta = axis.norm();
        const double theta = std::atan2(sin_theta, d1.dot(d2));
        if (theta > params.joint_limit && sin_theta > 1e-12)
            torque += axis * (-params.limit_stiffness * (theta - params.joint_limit) / sin_theta);

        if (torque.norm_sq() == 0.0) continue;

        // Torque tau on the outgoing link and -tau on the incoming link,
        // realized as force couples (zero net force over the triplet).
        const Vec3 f2 = torque.cross(r2) / (l2 * l2);
        const Vec3 f1 = (-torque).cross(r1) / (l1 * l1);
        forces[i + 1] += f2;
        forces[i] -= f2;
        forces[i] += f1;
        forces[i - 1] -= f1;
    }
    return forces;
}

/// One Gauss-Seidel sweep of link-distance projection (forward or backward;
/// alternating directions propagates corrections along the chain much faster).
/// End nodes are immovable (infinite mass); corrections applied to the two
/// end-adjacent nodes by the end links accumulate into asv_corr/auv_corr.
inline void project_links_once(TetherState& state, Vec3* asv_corr, Vec3* auv_corr,
                               bool backward = false) {
    const int links = state.node_count() - 1;
    for (int k = 0; k < links; ++k) {
        const int j = backward ? links - 1 - k : k;
        Vec3& pa = state.positions[j];
        Vec3& pb = state.positions[j + 1];
        const Vec3 d = pb - pa;
        const double len = d.norm();
        if (len < 1e-12) continue;
        const double err = len - state.rest_length;
        const Vec3 corr = d * (err / len);
        const double wa = (j == 0) ? 0.0 : 1.0 / state.node_mass[j];
        const double wb = (j + 1 == links) ? 0.0 : 1.0 / state.node_mass[j + 1];
        const double wsum = wa + wb;
        if (wsum <= 0.0) continue;
        const Vec3 da = corr * (wa / wsum);
        const Vec3 db = corr * (-wb / wsum);
        pa += da;
        pb += db;
        if (j == 0 && asv_corr) *asv_corr += db;
        if (j + 1 == links && auv_corr) *auv_corr += da;
    }
}

/// Repeated alternating-direction projection until the worst link deviates
/// less than `tol` relative, or `max_sweeps` sweeps. Returns the final
/// relative deviation.
inline double enforce_link_lengths(TetherState& state, int max_sweeps, double tol) {
    double dev = state.max_link_deviation();
    for (int k = 0; k < max_sweeps && dev > tol; ++k) {
        project_links_once(state, nullptr, nullptr);
        dev = state.max_link_deviation();
    }
    return dev;
}

/// Advances the tether one step of size dt. Node 0 is pinned to the ASV
/// attachment, node N to the AUV attachment (position and velocity). Throws
/// Unstable when any node speed exceeds 1e3 m/s.
inline EndpointCoupling step(TetherState& state, const TetherParams& params,
                             const EndpointState& asv, const EndpointState& auv,
                             const std::vector<Vec3>& flow, double g, double dt) {
    if (!(dt > 0.0) || dt > 0.02)
        throw InvalidParams("tether::step: dt must be in (0, 0.02]");
    const int count = state.node_count();
    const int last = count - 1;

    state.positions[0] = asv.point;
    state.velocities[0] = asv.velocity;
    state.positions[last] = auv.point;
    state.velocities[last] = auv.velocity;

    const std::vector<Vec3> f_ext = external_forces(state, params, flow, g);
    const std::vector<Vec3> f_joint = joint_forces(state, params);

    const std::vector<Vec3> p_old = state.positions;
    for (int i = 1; i < last; ++i) {
        state.velocities[i] += (f_ext[i] + f_joint[i]) * (dt / state.node_mass[i]);
        state.positions[i] += state.velocities[i] * dt;
    }

    Vec3 asv_corr, auv_corr;
    for (int k = 0; k < params.projection_iterations; ++k)
        project_links_once(state, &asv_corr, &auv_corr);

    for (int i = 1; i < last; ++i) {
        state.velocities[i] = (state.positions[i] - p_old[i]) / dt;
        if (state.velocities[i].norm_sq() > 1e6)
            throw Unstable("tether node " + std::to_string(i) + " exceeded 1e3 m/s");
        if (!state.positions[i].finite() || !state.velocities[i].finite())
            throw Unstable("tether node " + std::to_string(i) + " is not finite");
    }

    // Position corrections translate to impulses m*dp/dt through the velocity
    // recompute above.
    EndpointCoupling c;
    c.asv_projection_impulse = asv_corr * (state.node_mass[1] / dt);
    c.auv_projection_impulse = auv_corr * (state.node_mass[last - 1] / dt);
    c.asv_force = c.asv_projection_impulse / dt - f_ext[0] - f_joint[0];
    c.auv_force = c.auv_projection_impulse / dt - f_ext[last] - f_joint[last];
    return c;
}

/// Distance-projects a raw polyline (uniform node weights, ends fixed) toward
/// uniform link length. Used to clean up sampled initial shapes whose chords
/// fall short of the arc spacing on strongly curved cables.
inline void equalize_links(std::vector<Vec3>& pts, double rest_length, int max_sweeps,
                           double tol) {
    const int links = static_cast<int>(pts.size()) - 1;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const bool backward = sweep % 2 == 1;
        double dev = 0.0;
        for (int k = 0; k < links; ++k) {
            const int j = backward ? links - 1 - k : k;
            const Vec3 d = pts[j + 1] - pts[j];
            const double len = d.norm();
            if (len < 1e-12) continue;
            dev = std::max(dev, std::abs(len - rest_length) / rest_length);
            const Vec3 corr = d * ((len - rest_length) / len);
            const double wa = (j == 0) ? 0.0 : 1.0;
            const double wb = (j + 1 == links) ? 0.0 : 1.0;
            if (wa + wb <= 0.0) continue;
            pts[j] += corr * (wa / (wa + wb));
            pts[j + 1] -= corr * (wb / (wa + wb));
        }
        if (dev <= tol) break;
    }
}

}  // namespace tethersim::tether
