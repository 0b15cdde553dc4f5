#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "dcgate/perturbation.hpp"
#include "dcgate/pulse.hpp"
#include "dcgate/unitary.hpp"

namespace dcgate {

// Infidelity-vs-delta table for one target angle; one value column per
// swept sequence, rows ordered by strictly increasing delta.
struct SweepTable {
    struct Column {
        std::string label;
        std::vector<double> infidelity;
    };
    double theta = 0.0;
    std::vector<double> deltas;
    std::vector<Column> columns;
};

// Strictly increasing positive grid, linear or log spaced. With
// include_negative, the mirrored negative grid is prepended (no zero row).
inline std::vector<double> make_delta_grid(double delta_min, double delta_max, int points,
                                           bool log_spaced, bool include_negative) {
    if (!(0.0 < delta_min && delta_min < delta_max))
        throw std::domain_error("need 0 < delta_min < delta_max");
    if (points < 2) throw std::domain_error("need at least 2 grid points");
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) {
        const double u = static_cast<double>(i) / (points - 1);
        grid[i] = log_spaced ? delta_min * std::exp(u * std::log(delta_max / delta_min))
                             : delta_min + u * (delta_max - delta_min);
    }
    if (!include_negative) return grid;
    std::vector<double> full;
    full.reserve(2 * grid.size());
    for (auto it = grid.rbegin(); it != grid.rend(); ++it) full.push_back(-*it);
    full.insert(full.end(), grid.begin(), grid.end());
    return full;
}

// Default plotting grid: linear, symmetric about zero, zero included when
// points is odd.
inline std::vector<double> symmetric_linear_grid(double delta_max, int points) {
    if (delta_max <= 0.0) throw std::domain_error("delta_max must be positive");
    if (points < 2) throw std::domain_error("need at least 2 grid points");
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = delta_max * (2.0 * i / (points - 1) - 1.0);
    return grid;
}

// Evaluates every (sequence, delta) infidelity. Rows are chunked across
// threads; each thread writes disjoint preallocated slots, so the table is
// identical for any thread count.
inline SweepTable run_sweep(const std::vector<PulseSequence>& sequences, RotationTarget target,
                            const std::vector<double>& deltas, unsigned threads = 1) {
    for (std::size_t i = 1; i < deltas.size(); ++i)
        if (!(deltas[i - 1] < deltas[i]))
            throw std::domain_error("delta grid must be strictly increasing");
    for (std::size_t a = 0; a < sequences.size(); ++a)
        for (std::size_t b = a + 1; b < sequences.size(); ++b)
            if (sequences[a].label == sequences[b].label)
                throw std::domain_error("sweep sequences must have distinct labels: '" +
                                        sequences[a].label + "'");

    SweepTable table;
    table.theta = target.theta;
    table.deltas = deltas;
    for (const auto& seq : sequences)
        table.columns.push_back({seq.label, std::vector<double>(deltas.size(), 0.0)});

    auto eval_rows = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            for (std::size_t c = 0; c < sequences.size(); ++c)
                table.columns[c].infidelity[i] =
                    infidelity(evolve(sequences[c], {deltas[i]}), target);
    };

    const unsigned n = std::max(1u, threads);
    if (n == 1 || deltas.size() < 2 * n) {
        eval_rows(0, deltas.size());
        return table;
    }
    std::vector<std::thread> pool;
    const std::size_t chunk = (deltas.size() + n - 1) / n;
    for (unsigned k = 0; k < n; ++k) {
        const std::size_t begin = k * chunk;
        const std::size_t end = std::min(deltas.size(), begin + chunk);
        if (begin < end) pool.emplace_back(eval_rows, begin, end);
    }
    for (auto& th : pool) th.join();
    return table;
}

// Least-squares fit of log E against log delta; a robustness order n shows
// up as slope 2 (n + 1).
struct OrderEstimate {
    double slope = 0.0;
    double intercept = 0.0;
    int inferred_order = -1;
    double fit_delta_min = 0.0;
    double fit_delta_max = 0.0;
    double fit_residual = 0.0;     // rms of log-space residuals
    bool has_fit = false;          // false when too few points stayed above noise
    bool slope_consistent = false; // slope within 0.3 of 2 (order + 1), rms <= 0.05
    bool window_shrunk = false;    // points below the noise floor were dropped
    double g1_mag = 0.0;           // direct certificates |g1(T)|, |g2(T)|
    double g2_mag = 0.0;
    int certificate_order = 0;
};

namespace detail {

// Fit windows per expected order, chosen to keep E within [1e-12, 1e-2];
// below E ~ 1e-13 the trace magnitude loses significance in doubles.
struct FitWindow {
    double lo, hi;
};
inline constexpr FitWindow order_fit_windows[3] = {{1e-3, 1e-1}, {1e-2, 1e-1}, {5e-2, 2.5e-1}};
inline constexpr double infidelity_noise_floor = 1e-13;
inline constexpr int fit_points = 12;
inline constexpr int min_fit_points = 8;

}  // namespace detail

inline OrderEstimate estimate_order(const PulseSequence& seq, RotationTarget target) {
    OrderEstimate est;
    const double T = seq.total_duration();
    est.g1_mag = std::abs(g1_at(seq, T));
    est.g2_mag = std::abs(g2_at(seq, T));
    est.certificate_order = 0;
    if (est.g1_mag <= 1e-9) {
        est.certificate_order = 1;
        if (est.g2_mag <= 1e-8) est.certificate_order = 2;
    }

    const auto window = detail::order_fit_windows[est.certificate_order];
    est.fit_delta_min = window.lo;
    est.fit_delta_max = window.hi;

    std::vector<double> lx, ly;
    for (int i = 0; i < detail::fit_points; ++i) {
        const double u = static_cast<double>(i) / (detail::fit_points - 1);
        const double d = window.lo * std::exp(u * std::log(window.hi / window.lo));
        const double e = infidelity(evolve(seq, {d}), target);
        if (e < detail::infidelity_noise_floor) {
            est.window_shrunk = true;
            continue;
        }
        lx.push_back(std::log(d));
        ly.push_back(std::log(e));
    }
    if (static_cast<int>(lx.size()) < detail::min_fit_points) return est;  // certificates only

    const double n = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    est.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    est.intercept = (sy - est.slope * sx) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - (est.slope * lx[i] + est.intercept);
        ss += r * r;
    }
    est.fit_residual = std::sqrt(ss / n);
    est.has_fit = true;
    est.inferred_order = static_cast<int>(std::lround(0.5 * est.slope)) - 1;
    est.slope_consistent = std::abs(est.slope - 2.0 * (est.inferred_order + 1)) <= 0.3 &&
                           est.fit_residual <= 0.05;
    return est;
}

}  // namespace dcgate
