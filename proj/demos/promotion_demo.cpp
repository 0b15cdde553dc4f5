// Builds the three-segment first-order-robust 3pi/2 rotation, promotes it to
// second order by appending the area-canceling 2pi pulse, and compares
// infidelities under off-resonance error.

#include <cstdio>

#include "dcgate/dcgate.hpp"

int main() {
    using namespace dcgate;

    const RotationTarget target{1.5 * pi};
    const PulseSequence square = square_pulse(target);
    const PulseSequence seed = short_corpse(target);
    const PromotionResult promoted = promote_second_order(seed);

    std::printf("seed: %zu segments, duration %.6f, total angle %.6f\n", seed.segments.size(),
                seed.total_duration(), total_rotation_angle(seed));
    std::printf("seed trajectory area: %.6f (closed form %.6f)\n",
                signed_area(trajectory_of(seed)), short_corpse_area(1.5 * pi));
    std::printf("appended pulse: omega %.6f, duration %.6f (1/r = %.6f)\n",
                promoted.report.appended_omega, promoted.report.appended_duration,
                std::abs(promoted.report.appended_omega));
    std::printf("residuals: |g1| = %.3e, |g2| = %.3e\n\n", promoted.report.residual_g1,
                promoted.report.residual_g2);

    std::printf("%10s %14s %14s %14s\n", "delta", "square", "short-corpse", "promoted");
    for (double delta : {0.02, 0.05, 0.1, 0.2}) {
        std::printf("%10.3f %14.3e %14.3e %14.3e\n", delta,
                    infidelity(evolve(square, {delta}), target),
                    infidelity(evolve(seed, {delta}), target),
                    infidelity(evolve(promoted.sequence, {delta}), target));
    }
    return 0;
}
