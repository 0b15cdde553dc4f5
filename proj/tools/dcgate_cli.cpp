// Command-line surface: generate composite z-rotation sequences, promote
// them to second-order robustness, export error trajectories and areas, run
// infidelity sweeps, and estimate robustness order from log-log slopes.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dcgate/dcgate.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 2;
constexpr int exit_precondition = 3;
constexpr int exit_tolerance = 4;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Accepts plain decimals and "<k>pi" (e.g. "1.5pi", "pi", "-0.75pi").
double parse_theta(const std::string& text) {
    std::string body = text;
    double scale = 1.0;
    if (body.size() >= 2 && body.substr(body.size() - 2) == "pi") {
        scale = dcgate::pi;
        body = body.substr(0, body.size() - 2);
        if (body.empty() || body == "+") body = "1";
        if (body == "-") body = "-1";
    }
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(body, &used);
    } catch (const std::exception&) {
        throw usage_error("cannot parse angle '" + text + "' (expected a decimal or '<k>pi')");
    }
    if (used != body.size())
        throw usage_error("cannot parse angle '" + text + "' (expected a decimal or '<k>pi')");
    return value * scale;
}

std::string read_input(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("cannot open input file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw usage_error("cannot open output file '" + path + "'");
    out << text;
}

dcgate::PulseSequence load_sequence(const std::string& path) {
    return dcgate::parse_sequence(read_input(path));
}

std::string fmt(double v) { return dcgate::format_number(v); }

std::string promotion_report_text(const dcgate::PromotionReport& r) {
    std::string out;
    out += "seed_area\t" + fmt(r.seed_area) + "\n";
    out += "radius\t" + fmt(r.radius) + "\n";
    out += "inv_radius\t" + fmt(std::abs(r.appended_omega)) + "\n";
    out += "appended_omega\t" + fmt(r.appended_omega) + "\n";
    out += "appended_duration\t" + fmt(r.appended_duration) + "\n";
    out += "residual_g1\t" + fmt(r.residual_g1) + "\n";
    out += "residual_g2\t" + fmt(r.residual_g2) + "\n";
    out += std::string("phase_flip\t") + (r.phase_flip ? "1" : "0") + "\n";
    return out;
}

int run_gen(const std::string& kind, const std::string& theta_text, std::string label,
            const std::string& out_path) {
    const double theta = parse_theta(theta_text);
    dcgate::PulseSequence seq;
    if (kind == "square") {
        seq = dcgate::square_pulse(dcgate::RotationTarget{theta});
        if (label.empty()) label = "square(" + theta_text + ")";
    } else if (kind == "short-corpse") {
        seq = dcgate::short_corpse(dcgate::RotationTarget{theta});
        if (seq.empty())
            throw usage_error("short-corpse is degenerate for angles that reduce to 0 mod 2pi");
        if (label.empty()) label = "short-corpse(" + theta_text + ")";
    } else {
        throw usage_error("unknown sequence kind '" + kind + "' (square | short-corpse)");
    }
    seq.label = label;
    write_output(out_path, dcgate::emit_sequence(seq));
    return exit_ok;
}

int run_promote(const std::string& in_path, bool unit_strength, const std::string& out_path,
                const std::string& report_path) {
    const dcgate::PulseSequence seed = load_sequence(in_path);
    dcgate::PromotionResult res;
    try {
        res = unit_strength ? dcgate::promote_unit_strength(seed)
                            : dcgate::promote_second_order(seed);
    } catch (const dcgate::precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << "g1_abs\t" << fmt(e.g1_magnitude) << "\n";
        return exit_precondition;
    }
    if (res.report.residual_g1 > dcgate::first_order_tol ||
        (!unit_strength && res.report.residual_g2 > 1e-8)) {
        std::cerr << "error: promoted sequence failed its residual tolerances\n";
        std::cerr << promotion_report_text(res.report);
        return exit_tolerance;
    }
    write_output(out_path, dcgate::emit_sequence(res.sequence));
    const std::string report = promotion_report_text(res.report);
    if (report_path.empty())
        std::cerr << report;
    else
        write_output(report_path, report);
    return exit_ok;
}

int run_traj(const std::string& in_path, int samples, const std::string& out_path) {
    if (samples < 2) throw usage_error("--samples must be at least 2");
    const dcgate::PulseSequence seq = load_sequence(in_path);
    const auto rows = dcgate::sample_trajectory(dcgate::trajectory_of(seq), samples);
    std::string out = "# t\tx\ty\n";
    for (const auto& r : rows)
        out += fmt(r.t) + "\t" + fmt(r.x) + "\t" + fmt(r.y) + "\n";
    write_output(out_path, out);
    return exit_ok;
}

int run_area(const std::string& in_path) {
    const dcgate::PulseSequence seq = load_sequence(in_path);
    const dcgate::ErrorTrajectory traj = dcgate::trajectory_of(seq);
    if (!dcgate::is_closed(traj, 1e-9))
        std::cerr << "warning: trajectory is not closed (|endpoint| = "
                  << fmt(std::abs(traj.endpoint())) << "); value is the bare line integral\n";
    const double s = dcgate::signed_area(traj);
    std::cout << "signed_area\t" << fmt(s) << "\n";
    std::cout << "abs_area\t" << fmt(std::abs(s)) << "\n";
    return exit_ok;
}

int run_sweep(const std::vector<std::string>& in_paths, const std::string& theta_text,
              bool grid_flags_used, double dmin, double dmax, int points, bool log_spaced,
              bool negative, unsigned threads, const std::string& out_path) {
    const double theta = parse_theta(theta_text);
    std::vector<dcgate::PulseSequence> seqs;
    for (const auto& p : in_paths) seqs.push_back(load_sequence(p));

    std::vector<double> grid;
    if (grid_flags_used)
        grid = dcgate::make_delta_grid(dmin, dmax, points, log_spaced, negative);
    else
        grid = dcgate::symmetric_linear_grid(0.3, 121);

    const dcgate::SweepTable table =
        dcgate::run_sweep(seqs, dcgate::RotationTarget{theta}, grid, threads);

    std::string out = "# delta";
    for (const auto& col : table.columns) out += "\t" + col.label;
    out += "\n";
    for (std::size_t i = 0; i < table.deltas.size(); ++i) {
        out += fmt(table.deltas[i]);
        for (const auto& col : table.columns) out += "\t" + fmt(col.infidelity[i]);
        out += "\n";
    }
    write_output(out_path, out);
    return exit_ok;
}

int run_verify(const std::string& in_path, const std::string& theta_text,
               const std::string& out_path) {
    const double theta = parse_theta(theta_text);
    const dcgate::PulseSequence seq = load_sequence(in_path);
    const dcgate::OrderEstimate est =
        dcgate::estimate_order(seq, dcgate::RotationTarget{theta});

    std::string out;
    out += "label\t" + seq.label + "\n";
    out += "theta\t" + fmt(theta) + "\n";
    out += "g1_abs\t" + fmt(est.g1_mag) + "\n";
    out += "g2_abs\t" + fmt(est.g2_mag) + "\n";
    out += "certificate_order\t" + std::to_string(est.certificate_order) + "\n";
    if (est.window_shrunk)
        std::cerr << "warning: dropped sweep points with E below the 1e-13 noise floor\n";
    if (est.has_fit) {
        out += "slope\t" + fmt(est.slope) + "\n";
        out += "intercept\t" + fmt(est.intercept) + "\n";
        out += "inferred_order\t" + std::to_string(est.inferred_order) + "\n";
        out += "fit_delta_min\t" + fmt(est.fit_delta_min) + "\n";
        out += "fit_delta_max\t" + fmt(est.fit_delta_max) + "\n";
        out += "fit_residual\t" + fmt(est.fit_residual) + "\n";
        out += std::string("slope_consistent\t") + (est.slope_consistent ? "1" : "0") + "\n";
    } else {
        std::cerr << "warning: no usable fit window; reporting g-certificates only\n";
    }
    write_output(out_path, out);
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"composite z-rotation pulses under off-resonance error: generation,\n"
                 "trajectory geometry, second-order promotion, infidelity sweeps"};
    app.require_subcommand(1);

    // gen
    std::string gen_kind, gen_theta, gen_label, gen_out;
    auto* gen = app.add_subcommand("gen", "generate a sequence document");
    gen->add_option("kind", gen_kind, "square | short-corpse")->required();
    gen->add_option("theta", gen_theta, "target angle (decimal or '<k>pi')")->required();
    gen->add_option("--label", gen_label, "override the sequence label");
    gen->add_option("--out", gen_out, "write the document here instead of stdout");

    // promote
    std::string pr_in, pr_out, pr_report;
    bool pr_unit = false;
    auto* pr = app.add_subcommand("promote", "append the area-canceling 2pi pulse");
    pr->add_option("input", pr_in, "sequence document ('-' for stdin)")->required();
    pr->add_flag("--unit-strength", pr_unit, "append a radius-1 circle (|omega| = 1)");
    pr->add_option("--out", pr_out, "write the promoted document here");
    pr->add_option("--report", pr_report, "write the key-value report here (default stderr)");

    // traj
    std::string tr_in, tr_out;
    int tr_samples = 200;
    auto* tr = app.add_subcommand("traj", "export the error trajectory as t/x/y rows");
    tr->add_option("input", tr_in, "sequence document ('-' for stdin)")->required();
    tr->add_option("--samples", tr_samples, "samples per arc (>= 2)");
    tr->add_option("--out", tr_out, "write the table here instead of stdout");

    // area
    std::string ar_in;
    auto* ar = app.add_subcommand("area", "signed enclosed area of the error trajectory");
    ar->add_option("input", ar_in, "sequence document ('-' for stdin)")->required();

    // sweep
    std::vector<std::string> sw_in;
    std::string sw_theta, sw_out;
    double sw_dmin = 0.0025, sw_dmax = 0.3;
    int sw_points = 61;
    bool sw_log = false, sw_neg = false;
    unsigned sw_threads = 1;
    auto* sw = app.add_subcommand("sweep", "infidelity vs delta table for one or more sequences");
    sw->add_option("inputs", sw_in, "sequence documents")->required()->expected(-1);
    sw->add_option("--theta", sw_theta, "target angle (decimal or '<k>pi')")->required();
    auto* o_dmin = sw->add_option("--delta-min", sw_dmin, "smallest |delta| (> 0)");
    auto* o_dmax = sw->add_option("--delta-max", sw_dmax, "largest |delta|");
    auto* o_pts = sw->add_option("--points", sw_points, "grid points (>= 2)");
    auto* o_log = sw->add_flag("--log", sw_log, "log-spaced grid");
    auto* o_neg = sw->add_flag("--negative", sw_neg, "mirror the grid to negative delta");
    sw->add_option("--threads", sw_threads, "worker threads for row evaluation");
    sw->add_option("--out", sw_out, "write the table here instead of stdout");

    // verify
    std::string vf_in, vf_theta, vf_out;
    auto* vf = app.add_subcommand("verify", "robustness order from slopes and g-certificates");
    vf->add_option("input", vf_in, "sequence document ('-' for stdin)")->required();
    vf->add_option("--theta", vf_theta, "target angle (decimal or '<k>pi')")->required();
    vf->add_option("--out", vf_out, "write the report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (gen->parsed()) return run_gen(gen_kind, gen_theta, gen_label, gen_out);
        if (pr->parsed()) return run_promote(pr_in, pr_unit, pr_out, pr_report);
        if (tr->parsed()) return run_traj(tr_in, tr_samples, tr_out);
        if (ar->parsed()) return run_area(ar_in);
        if (sw->parsed()) {
            const bool grid_flags = o_dmin->count() || o_dmax->count() || o_pts->count() ||
                                    o_log->count() || o_neg->count();
            return run_sweep(sw_in, sw_theta, grid_flags, sw_dmin, sw_dmax, sw_points, sw_log,
                             sw_neg, sw_threads, sw_out);
        }
        if (vf->parsed()) return run_verify(vf_in, vf_theta, vf_out);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const dcgate::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const dcgate::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_tolerance;
    }
    return exit_usage;
}
