#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "dcgate/geometry.hpp"
#include "dcgate/perturbation.hpp"
#include "dcgate/pulse.hpp"

namespace dcgate {

// Thrown when an operation's input violates a documented precondition.
struct precondition_error : std::runtime_error {
    double g1_magnitude = 0.0;
    precondition_error(const std::string& msg, double g1_mag)
        : std::runtime_error(msg), g1_magnitude(g1_mag) {}
};

// |g1(T)| at or below this is treated as first-order robust.
inline constexpr double first_order_tol = 1e-9;
// |seed area| at or below this needs no canceling pulse.
inline constexpr double zero_area_tol = 1e-12;

// Single constant-drive segment realizing R_z(theta).
inline PulseSequence square_pulse(RotationTarget target) {
    PulseSequence seq;
    seq.label = "square";
    if (target.theta != 0.0)
        seq.segments.push_back({target.theta > 0.0 ? 1.0 : -1.0, std::abs(target.theta)});
    return seq;
}

// Derived angles of the three-segment first-order-robust sequence:
// kappa = asin(sin(theta/2)/2), theta1 = pi - kappa - theta/2,
// theta2 = 2 pi - 2 kappa. Note theta2 - 2 theta1 = theta.
struct ShortCorpseAngles {
    double kappa = 0.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
};

inline ShortCorpseAngles short_corpse_angles(double theta) {
    if (theta < 0.0 || theta > two_pi)
        throw std::domain_error("short-corpse angles defined for theta in [0, 2 pi]");
    ShortCorpseAngles a;
    a.kappa = std::asin(0.5 * std::sin(0.5 * theta));
    a.theta1 = pi - a.kappa - 0.5 * theta;
    a.theta2 = two_pi - 2.0 * a.kappa;
    return a;
}

// Drive program (-1, theta1), (+1, theta2), (-1, theta1). The target angle is
// reduced mod 2 pi into [0, 2 pi) first; an exact multiple of 2 pi reduces to
// zero and yields the empty sequence.
inline PulseSequence short_corpse(RotationTarget target) {
    double theta = std::fmod(target.theta, two_pi);
    if (theta < 0.0) theta += two_pi;
    PulseSequence seq;
    seq.label = "short-corpse";
    if (theta == 0.0) return seq;
    const ShortCorpseAngles a = short_corpse_angles(theta);
    seq.segments = {{-1.0, a.theta1}, {1.0, a.theta2}, {-1.0, a.theta1}};
    return normalize(seq);
}

// Closed-form enclosed area of the short-corpse error trajectory:
// S = (theta + sin theta + sqrt(14 + 2 cos theta) * sin(theta/2)) / 2.
inline double short_corpse_area(double theta) {
    if (theta <= 0.0 || theta >= two_pi)
        throw std::domain_error("short-corpse area defined for theta in (0, 2 pi)");
    return 0.5 * (theta + std::sin(theta) +
                  std::sqrt(14.0 + 2.0 * std::cos(theta)) * std::sin(0.5 * theta));
}

// What the promotion step did. appended_duration = 2 pi radius and
// |appended_omega| = 1/radius whenever a pulse was appended. phase_flip
// records the -1 global phase of the extra (+-)2 pi rotation; the magnitude
// infidelity convention hides it, exact-matrix callers must track it.
struct PromotionReport {
    double seed_area = 0.0;
    double radius = 0.0;
    double appended_omega = 0.0;
    double appended_duration = 0.0;
    double residual_g1 = 0.0;
    double residual_g2 = 0.0;
    bool phase_flip = false;
};

struct PromotionResult {
    PulseSequence sequence;
    PromotionReport report;
};

namespace detail {

inline PromotionResult promote_impl(const PulseSequence& seed, bool unit_strength) {
    const double T = seed.total_duration();
    const double g1_mag = std::abs(g1_at(seed, T));
    if (g1_mag > first_order_tol)
        throw precondition_error("seed is not first-order robust: |g1(T)| = " +
                                     std::to_string(g1_mag),
                                 g1_mag);

    PromotionResult res;
    res.sequence = normalize(seed);
    res.report.seed_area = signed_area(trajectory_of(seed));
    const double S = res.report.seed_area;
    if (std::abs(S) <= zero_area_tol) {
        const GCoefficients g = g_coefficients_at(res.sequence, T);
        res.report.residual_g1 = std::abs(g.g1);
        res.report.residual_g2 = std::abs(g.g2);
        return res;  // nothing to cancel
    }

    // A full circle of radius r appended with curvature -sign(S)/r has signed
    // area -sign(S) pi r^2; r = sqrt(|S|/pi) cancels the seed area exactly,
    // r = 1 trades exact cancellation for unit drive strength.
    const double r = unit_strength ? 1.0 : std::sqrt(std::abs(S) / pi);
    const double sign = S > 0.0 ? 1.0 : -1.0;
    res.report.radius = r;
    res.report.appended_omega = -sign / r;
    res.report.appended_duration = two_pi * r;
    res.report.phase_flip = true;
    res.sequence.segments.push_back({res.report.appended_omega, res.report.appended_duration});
    res.sequence.label += unit_strength ? "+2pi-unit" : "+2pi";

    const GCoefficients g = g_coefficients_at(res.sequence, res.sequence.total_duration());
    res.report.residual_g1 = std::abs(g.g1);
    res.report.residual_g2 = std::abs(g.g2);
    return res;
}

}  // namespace detail

// Appends the area-canceling 2 pi pulse (radius sqrt(|S|/pi)), turning a
// first-order-robust seed into a second-order-robust sequence.
inline PromotionResult promote_second_order(const PulseSequence& seed) {
    return detail::promote_impl(seed, false);
}

// Same construction with the appended circle forced to unit drive strength
// (radius 1). Cancellation is then imperfect: residual_g2 = 2 |pi - |S||.
inline PromotionResult promote_unit_strength(const PulseSequence& seed) {
    return detail::promote_impl(seed, true);
}

}  // namespace dcgate
