#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "dcgate/pulse.hpp"
#include "dcgate/unitary.hpp"

namespace dcgate {

namespace detail {

// Branch tolerance for the series forms below; avoids cancellation in
// (e^z - 1) when |z| is tiny.
inline constexpr double series_branch_tol = 1e-6;

// (e^z - 1) / z
inline complexd expm1_over(complexd z) {
    if (std::abs(z) < series_branch_tol)
        return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
    return (std::exp(z) - 1.0) / z;
}

// (e^z - 1 - z) / z^2
inline complexd expm1_over2(complexd z) {
    if (std::abs(z) < series_branch_tol)
        return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0));
    return (std::exp(z) - 1.0 - z) / (z * z);
}

}  // namespace detail

// Error-expansion state at one time point. g0 = 1 identically and the
// f-coefficients vanish for this one-axis drive, so only phi, g1, g2 carry
// information. The trajectory (x, y) = (Re g1, Im g1).
struct GCoefficients {
    double t = 0.0;
    double phi = 0.0;
    complexd g1{0.0, 0.0};
    complexd g2{0.0, 0.0};
};

namespace detail {

// Advance the coefficients across a constant-omega stretch of length s.
// With phi0 the entry phase and a0 = g1 at entry, the exact per-segment
// integrals of g1' = e^{i phi}, g2' = -e^{i phi} conj(g1) reduce to
//   dg1 = e^{i phi0} s E1(i omega s)
//   dg2 = -(e^{i phi0} conj(a0) s E1(i omega s) + s^2 E2(i omega s))
// where E1 = (e^z - 1)/z and E2 = (e^z - 1 - z)/z^2; both limits at
// omega = 0 are regular.
inline void g_advance(GCoefficients& st, double omega, double s) {
    const complexd z{0.0, omega * s};
    const complexd e1 = expm1_over(z);
    const complexd e2 = expm1_over2(z);
    const complexd e = std::polar(1.0, st.phi);
    st.g2 -= e * std::conj(st.g1) * s * e1 + s * s * e2;
    st.g1 += e * s * e1;
    st.phi += omega * s;
    st.t += s;
}

// Walk the sequence up to time t (0 <= t <= T), applying fn(omega, s) for
// every covered stretch.
template <typename Fn>
void walk_until(const PulseSequence& seq, double t, Fn&& fn) {
    const double T = seq.total_duration();
    if (t < 0.0 || t > T * (1.0 + 1e-12) + 1e-12)
        throw std::domain_error("time outside [0, T]");
    double remaining = std::min(t, T);
    for (const auto& seg : seq.segments) {
        if (remaining <= 0.0) break;
        const double s = std::min(seg.duration, remaining);
        fn(seg.omega, s);
        remaining -= s;
    }
}

}  // namespace detail

inline GCoefficients g_coefficients_at(const PulseSequence& seq, double t) {
    GCoefficients st;
    detail::walk_until(seq, t, [&](double omega, double s) { detail::g_advance(st, omega, s); });
    return st;
}

// phi(t) = integral of Omega up to t.
inline double phase_at(const PulseSequence& seq, double t) {
    double phi = 0.0;
    detail::walk_until(seq, t, [&](double omega, double s) { phi += omega * s; });
    return phi;
}

inline complexd g1_at(const PulseSequence& seq, double t) { return g_coefficients_at(seq, t).g1; }

inline complexd g2_at(const PulseSequence& seq, double t) { return g_coefficients_at(seq, t).g2; }

// U reconstructed from the expansion through (delta/2)^2:
//   u1 = e^{-i phi/2} (1 + g2 (delta/2)^2),  u2 = -i e^{i phi/2} conj(g1) delta/2.
inline Unitary2 second_order_reconstruction(const PulseSequence& seq, OffResonanceError err) {
    const GCoefficients g = g_coefficients_at(seq, seq.total_duration());
    const double h = 0.5 * err.delta;
    const complexd u1 = std::polar(1.0, -0.5 * g.phi) * (1.0 + g.g2 * h * h);
    const complexd u2 = complexd{0.0, -1.0} * std::polar(1.0, 0.5 * g.phi) * std::conj(g.g1) * h;
    return {u1, -std::conj(u2), u2, std::conj(u1)};
}

// Max-entry deviation between the exact propagator and the second-order
// reconstruction; O(delta^3) by construction.
inline double expansion_vs_exact_check(const PulseSequence& seq, OffResonanceError err) {
    return max_abs_diff(evolve(seq, err), second_order_reconstruction(seq, err));
}

}  // namespace dcgate
