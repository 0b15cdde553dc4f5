#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcgate {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One piecewise-constant drive interval. omega is the signed drive strength
// (dimensionless, hbar = 1); omega = 0 encodes free evolution.
struct PulseSegment {
    double omega = 0.0;
    double duration = 0.0;
};

// An ordered drive program. Values are immutable once built; every operation
// below returns a new sequence.
struct PulseSequence {
    std::vector<PulseSegment> segments;
    std::string label;

    double total_duration() const {
        double t = 0.0;
        for (const auto& s : segments) t += s.duration;
        return t;
    }
    bool empty() const { return segments.empty(); }
};

inline void validate(const PulseSequence& seq) {
    for (const auto& s : seq.segments) {
        if (!std::isfinite(s.omega))
            throw validation_error("segment omega must be finite");
        if (!std::isfinite(s.duration) || s.duration < 0.0)
            throw validation_error("segment duration must be finite and >= 0");
    }
}

// Drops zero-duration segments and merges adjacent segments with equal omega.
// Total duration and total rotation angle are unchanged.
inline PulseSequence normalize(const PulseSequence& seq) {
    validate(seq);
    PulseSequence out;
    out.label = seq.label;
    for (const auto& s : seq.segments) {
        if (s.duration == 0.0) continue;
        if (!out.segments.empty() && out.segments.back().omega == s.omega)
            out.segments.back().duration += s.duration;
        else
            out.segments.push_back(s);
    }
    return out;
}

// theta = integral of Omega(t) dt over the whole sequence.
inline double total_rotation_angle(const PulseSequence& seq) {
    double theta = 0.0;
    for (const auto& s : seq.segments) theta += s.omega * s.duration;
    return theta;
}

inline PulseSequence concat(const PulseSequence& a, const PulseSequence& b) {
    PulseSequence out = a;
    out.segments.insert(out.segments.end(), b.segments.begin(), b.segments.end());
    if (!b.label.empty()) out.label = a.label.empty() ? b.label : a.label + "+" + b.label;
    return out;
}

// Canonical angle representative in (-2*pi, 2*pi]. The 4*pi period keeps
// theta and theta - 2*pi distinct (they differ by a global phase of -1 as
// unitaries), while collapsing full 4*pi windings.
inline double canonical_angle(double theta) {
    if (!std::isfinite(theta)) throw validation_error("rotation angle must be finite");
    double r = std::remainder(theta, 2.0 * two_pi);
    if (r == -two_pi) r = two_pi;
    return r;
}

// Target z-rotation angle, stored canonically.
struct RotationTarget {
    double theta = 0.0;
    RotationTarget() = default;
    explicit RotationTarget(double t) : theta(canonical_angle(t)) {}
};

}  // namespace dcgate
