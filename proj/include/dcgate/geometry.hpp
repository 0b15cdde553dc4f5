#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "dcgate/perturbation.hpp"
#include "dcgate/pulse.hpp"

namespace dcgate {

// One circular arc (straight line when signed_curvature = 0) of the error
// trajectory. The arc is traversed at unit speed, so arc_length equals the
// segment duration and signed_curvature equals the segment's omega;
// curvature > 0 turns counterclockwise.
struct TrajectoryArc {
    complexd start{0.0, 0.0};
    double signed_curvature = 0.0;
    double arc_length = 0.0;
    double start_heading = 0.0;

    // Point after travelling s <= arc_length along the arc.
    complexd point_at(double s) const {
        const complexd z{0.0, signed_curvature * s};
        return start + std::polar(1.0, start_heading) * s * detail::expm1_over(z);
    }

    complexd end() const { return point_at(arc_length); }
    double end_heading() const { return start_heading + signed_curvature * arc_length; }
};

// The planar curve (Re g1(t), Im g1(t)) of a piecewise-constant sequence:
// a chain of exact arcs starting at the origin with heading along +x.
struct ErrorTrajectory {
    std::vector<TrajectoryArc> arcs;

    complexd endpoint() const { return arcs.empty() ? complexd{0.0, 0.0} : arcs.back().end(); }
    double total_length() const {
        double s = 0.0;
        for (const auto& a : arcs) s += a.arc_length;
        return s;
    }
};

// One arc per normalized segment; arc k starts where arc k-1 ended, with
// heading phi(t_{k-1}).
inline ErrorTrajectory trajectory_of(const PulseSequence& seq) {
    ErrorTrajectory traj;
    complexd pos{0.0, 0.0};
    double heading = 0.0;
    for (const auto& seg : normalize(seq).segments) {
        TrajectoryArc arc{pos, seg.omega, seg.duration, heading};
        pos = arc.end();
        heading = arc.end_heading();
        traj.arcs.push_back(arc);
    }
    return traj;
}

// Closure of the trajectory is exactly first-order robustness |g1(T)| <= tol.
inline bool is_closed(const ErrorTrajectory& traj, double tol) {
    if (tol <= 0.0) throw std::domain_error("closure tolerance must be positive");
    return std::abs(traj.endpoint()) <= tol;
}

namespace detail {

// (z - sin z) / z^3
inline double sin_defect(double z) {
    if (std::abs(z) < 1e-4) {
        const double z2 = z * z;
        return (1.0 / 6.0) * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0));
    }
    return (z - std::sin(z)) / (z * z * z);
}

}  // namespace detail

// Green's-theorem line integral (1/2) * closed-integral of (x dy - y dx),
// counterclockwise positive. Each arc contributes its chord's shoelace term
// plus the circular-segment sliver between chord and arc; the value is the
// algebraic (winding-weighted) area once the trajectory is closed, and the
// bare line integral otherwise.
inline double signed_area(const ErrorTrajectory& traj) {
    double area = 0.0;
    for (const auto& a : traj.arcs) {
        const complexd p0 = a.start;
        const complexd p1 = a.end();
        area += 0.5 * (p0.real() * p1.imag() - p1.real() * p0.imag());
        const double w = a.signed_curvature * a.arc_length;
        // (w - sin w) / (2 k^2) = k L^3 sin_defect(w) / 2
        area += 0.5 * a.signed_curvature * a.arc_length * a.arc_length * a.arc_length *
                detail::sin_defect(w);
    }
    return area;
}

struct TrajectorySample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

// Dense polyline for plotting/export: samples_per_arc points past each arc
// start, exact on the arc map. The final sample equals g1(T).
inline std::vector<TrajectorySample> sample_trajectory(const ErrorTrajectory& traj,
                                                       int samples_per_arc) {
    if (samples_per_arc < 2) throw std::domain_error("need at least 2 samples per arc");
    std::vector<TrajectorySample> rows;
    rows.push_back({0.0, 0.0, 0.0});
    double t0 = 0.0;
    for (const auto& a : traj.arcs) {
        for (int j = 1; j <= samples_per_arc; ++j) {
            const double s = a.arc_length * j / samples_per_arc;
            const complexd p = a.point_at(s);
            rows.push_back({t0 + s, p.real(), p.imag()});
        }
        t0 += a.arc_length;
    }
    return rows;
}

// Finite-difference curvature cross(v, a) / |v|^3 from g1 samples at
// t-h, t, t+h. Equals the segment's omega to O(h^2). Curvature is
// discontinuous at segment boundaries, so t must sit at least 10 h inside
// its segment.
inline double reconstruct_curvature(const PulseSequence& seq, double t, double h) {
    if (h <= 0.0) throw std::domain_error("step h must be positive");
    const PulseSequence norm = normalize(seq);
    double edge = 0.0;
    double boundary_dist = std::abs(t - edge);
    for (const auto& seg : norm.segments) {
        edge += seg.duration;
        boundary_dist = std::min(boundary_dist, std::abs(t - edge));
    }
    if (t < 0.0 || t > edge || boundary_dist < 10.0 * h)
        throw std::domain_error("t must be interior to a segment (>= 10 h from boundaries)");

    const complexd m = g1_at(norm, t - h);
    const complexd c = g1_at(norm, t);
    const complexd p = g1_at(norm, t + h);
    const complexd vel = (p - m) / (2.0 * h);
    const complexd acc = (p - 2.0 * c + m) / (h * h);
    const double cross = vel.real() * acc.imag() - vel.imag() * acc.real();
    const double speed = std::abs(vel);
    return cross / (speed * speed * speed);
}

// The unique shortest arc taking a point with the given heading back to the
// origin: if psi is the turn from the heading to the chord direction, the
// arc sweeps 2 psi with curvature 2 sin(psi) / |z|. Appending the returned
// segment to a sequence whose trajectory ends at z with this heading closes
// it exactly. Degenerate when the heading points directly away from the
// origin (psi = pi).
inline PulseSegment closing_arc(complexd endpoint, double heading) {
    const double m = std::abs(endpoint);
    if (m < 1e-12) return {0.0, 0.0};
    double psi = std::remainder(std::arg(-endpoint) - heading, two_pi);
    if (psi < 0.0) psi += two_pi;  // [0, 2 pi)
    if (std::abs(psi - pi) < 1e-9)
        throw std::domain_error("degenerate closing arc: heading opposes the chord");
    if (psi < 1e-12) return {0.0, m};  // straight run home
    const double s = std::sin(psi);
    const double omega = 2.0 * s / m;
    const double length = (psi < pi ? psi : psi - two_pi) * m / s;
    return {omega, length};
}

}  // namespace dcgate
