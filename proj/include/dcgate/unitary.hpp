#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "dcgate/pulse.hpp"

namespace dcgate {

using complexd = std::complex<double>;

// 2x2 complex matrix, row-major. Constructed values are unitary up to
// roundoff whenever they come from the propagators below.
struct Unitary2 {
    complexd u00{1.0, 0.0}, u01{0.0, 0.0};
    complexd u10{0.0, 0.0}, u11{1.0, 0.0};

    static Unitary2 identity() { return {}; }

    Unitary2 operator*(const Unitary2& r) const {
        return {u00 * r.u00 + u01 * r.u10, u00 * r.u01 + u01 * r.u11,
                u10 * r.u00 + u11 * r.u10, u10 * r.u01 + u11 * r.u11};
    }

    Unitary2 dagger() const {
        return {std::conj(u00), std::conj(u10), std::conj(u01), std::conj(u11)};
    }

    complexd trace() const { return u00 + u11; }
    complexd det() const { return u00 * u11 - u01 * u10; }
};

inline double max_abs_diff(const Unitary2& a, const Unitary2& b) {
    return std::max({std::abs(a.u00 - b.u00), std::abs(a.u01 - b.u01),
                     std::abs(a.u10 - b.u10), std::abs(a.u11 - b.u11)});
}

// Largest entry of U U^dagger - I.
inline double unitarity_defect(const Unitary2& u) {
    return max_abs_diff(u * u.dagger(), Unitary2::identity());
}

// Constant systematic x-axis error term delta * sigma_x / 2.
struct OffResonanceError {
    double delta = 0.0;
};

// exp(-i (Omega sigma_z + delta sigma_x) dt / 2) in closed axis-angle form.
inline Unitary2 segment_propagator(const PulseSegment& seg, OffResonanceError err) {
    const double w = std::hypot(seg.omega, err.delta);
    const double half = 0.5 * w * seg.duration;
    if (w == 0.0 || seg.duration == 0.0) return Unitary2::identity();
    const double c = std::cos(half);
    const double s = std::sin(half);
    const double nz = seg.omega / w;
    const double nx = err.delta / w;
    return {complexd{c, -s * nz}, complexd{0.0, -s * nx},
            complexd{0.0, -s * nx}, complexd{c, s * nz}};
}

// Time-ordered product: later segments multiply on the left.
inline Unitary2 evolve(const PulseSequence& seq, OffResonanceError err) {
    Unitary2 u;
    for (const auto& seg : seq.segments) u = segment_propagator(seg, err) * u;
    return u;
}

// R_z(theta) = diag(e^{-i theta/2}, e^{i theta/2}).
inline Unitary2 target_unitary(RotationTarget t) {
    const complexd phase = std::polar(1.0, -0.5 * t.theta);
    return {phase, 0.0, 0.0, std::conj(phase)};
}

// E = 1 - |Tr(R^dagger U)| / 2, clamped into [0, 1]. The magnitude makes the
// metric insensitive to global phase, in particular to the -1 picked up by an
// extra 2*pi rotation.
inline double infidelity(const Unitary2& u, RotationTarget t) {
    const Unitary2 r = target_unitary(t);
    const double overlap = 0.5 * std::abs((r.dagger() * u).trace());
    return std::clamp(1.0 - overlap, 0.0, 1.0);
}

}  // namespace dcgate
