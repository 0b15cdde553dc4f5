#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dcgate/pulse.hpp"
#include "dcgate/sequences.hpp"

using namespace dcgate;
using Catch::Approx;

namespace {

PulseSequence random_sequence(std::mt19937& rng, int max_segments = 6) {
    std::uniform_int_distribution<int> nseg(0, max_segments);
    std::uniform_real_distribution<double> omega(-2.0, 2.0);
    std::uniform_real_distribution<double> duration(0.0, two_pi);
    std::uniform_int_distribution<int> degenerate(0, 4);
    PulseSequence seq;
    const int n = nseg(rng);
    for (int i = 0; i < n; ++i) {
        PulseSegment s{omega(rng), duration(rng)};
        if (degenerate(rng) == 0) s.duration = 0.0;  // exercise zero-length drops
        seq.segments.push_back(s);
    }
    return seq;
}

}  // namespace

TEST_CASE("normalize drops zero-duration segments", "[pulse]") {
    PulseSequence seq;
    seq.segments = {{1.0, 0.0}, {1.0, pi}};
    const PulseSequence norm = normalize(seq);
    REQUIRE(norm.segments.size() == 1);
    REQUIRE(norm.segments[0].omega == 1.0);
    REQUIRE(norm.segments[0].duration == pi);
}

TEST_CASE("normalize merges adjacent equal-omega segments", "[pulse]") {
    PulseSequence seq;
    seq.segments = {{1.0, 1.0}, {1.0, 2.0}};
    const PulseSequence norm = normalize(seq);
    REQUIRE(norm.segments.size() == 1);
    REQUIRE(norm.segments[0].duration == Approx(3.0).margin(0));
}

TEST_CASE("normalize of the empty sequence is empty", "[pulse]") {
    REQUIRE(normalize(PulseSequence{}).segments.empty());
}

TEST_CASE("normalize is idempotent and preserves duration and angle", "[pulse]") {
    std::mt19937 rng(20240811);
    for (int trial = 0; trial < 200; ++trial) {
        const PulseSequence seq = random_sequence(rng);
        const PulseSequence once = normalize(seq);
        const PulseSequence twice = normalize(once);
        REQUIRE(once.segments.size() == twice.segments.size());
        for (std::size_t i = 0; i < once.segments.size(); ++i) {
            REQUIRE(once.segments[i].omega == twice.segments[i].omega);
            REQUIRE(once.segments[i].duration == twice.segments[i].duration);
        }
        REQUIRE(once.total_duration() == Approx(seq.total_duration()).margin(1e-12));
        REQUIRE(total_rotation_angle(once) ==
                Approx(total_rotation_angle(seq)).margin(1e-12));
        for (std::size_t i = 1; i < once.segments.size(); ++i)
            REQUIRE(once.segments[i].omega != once.segments[i - 1].omega);
        for (const auto& s : once.segments) REQUIRE(s.duration > 0.0);
    }
}

TEST_CASE("total rotation angle of a square pulse is its area", "[pulse]") {
    PulseSequence seq;
    seq.segments = {{1.0, 1.5 * pi}};
    REQUIRE(total_rotation_angle(seq) == Approx(1.5 * pi).margin(1e-15));
    REQUIRE(total_rotation_angle(PulseSequence{}) == 0.0);
}

TEST_CASE("short-corpse total rotation angle equals theta", "[pulse]") {
    for (double theta : {pi / 4.0, pi, 1.5 * pi}) {
        const PulseSequence seq = short_corpse(RotationTarget{theta});
        REQUIRE(total_rotation_angle(seq) == Approx(theta).margin(1e-12));
    }
    for (int k = 1; k <= 15; ++k) {
        const double theta = k * pi / 8.0;
        REQUIRE(total_rotation_angle(short_corpse(RotationTarget{theta})) ==
                Approx(theta).margin(1e-12));
    }
}

TEST_CASE("validation rejects bad segments", "[pulse]") {
    PulseSequence negative;
    negative.segments = {{1.0, -1.0}};
    REQUIRE_THROWS_AS(normalize(negative), validation_error);

    PulseSequence inf_omega;
    inf_omega.segments = {{std::numeric_limits<double>::infinity(), 1.0}};
    REQUIRE_THROWS_AS(normalize(inf_omega), validation_error);
}

TEST_CASE("canonical angle lands in (-2pi, 2pi]", "[pulse]") {
    REQUIRE(canonical_angle(1.5 * pi) == Approx(1.5 * pi).margin(1e-15));
    REQUIRE(canonical_angle(-0.5 * pi) == Approx(-0.5 * pi).margin(1e-15));
    REQUIRE(canonical_angle(2.0 * two_pi) == 0.0);
    REQUIRE(canonical_angle(two_pi) == Approx(two_pi).margin(1e-15));
    REQUIRE(canonical_angle(-two_pi) == Approx(two_pi).margin(1e-15));
    // 3pi/2 and -pi/2 stay distinct: they differ by a -1 global phase.
    REQUIRE(canonical_angle(1.5 * pi) != canonical_angle(-0.5 * pi));
    REQUIRE_THROWS_AS(canonical_angle(std::numeric_limits<double>::quiet_NaN()),
                      validation_error);
}

TEST_CASE("concat joins segment lists", "[pulse]") {
    PulseSequence a, b;
    a.segments = {{1.0, 1.0}};
    b.segments = {{-1.0, 2.0}};
    const PulseSequence ab = concat(a, b);
    REQUIRE(ab.segments.size() == 2);
    REQUIRE(ab.total_duration() == Approx(3.0).margin(0));
}
