#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dcgate/dcgate.hpp"

using namespace dcgate;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "dcgate-cli-tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = work_dir() / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = work_dir() / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(DCGATE_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_doc(const std::string& name, const PulseSequence& seq) {
    const fs::path p = work_dir() / name;
    std::ofstream f(p, std::ios::binary);
    f << emit_sequence(seq);
    return p;
}

double kv_value(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        if (tab != std::string::npos && line.substr(0, tab) == key)
            return std::stod(line.substr(tab + 1));
    }
    FAIL("key not found: " + key);
    return 0.0;
}

}  // namespace

TEST_CASE("gen short-corpse emits the three-segment document", "[cli]") {
    const RunResult r = run_cli("gen short-corpse 1.5pi");
    REQUIRE(r.exit_code == 0);
    const PulseSequence seq = parse_sequence(r.out);
    REQUIRE(seq.segments.size() == 3);
    REQUIRE(seq.label == "short-corpse(1.5pi)");
    const double kappa = std::asin(std::sqrt(2.0) / 4.0);
    REQUIRE(seq.segments[0].duration == Approx(pi / 4.0 - kappa).margin(1e-12));
}

TEST_CASE("gen square emits a single segment", "[cli]") {
    const RunResult r = run_cli("gen square pi");
    REQUIRE(r.exit_code == 0);
    const PulseSequence seq = parse_sequence(r.out);
    REQUIRE(seq.segments.size() == 1);
    REQUIRE(seq.segments[0].duration == Approx(pi).margin(1e-15));
}

TEST_CASE("gen rejects degenerate and malformed angles", "[cli]") {
    REQUIRE(run_cli("gen short-corpse 0").exit_code == 2);
    REQUIRE(run_cli("gen short-corpse 2pi").exit_code == 2);
    REQUIRE(run_cli("gen square 1.5tau").exit_code == 2);
    REQUIRE(run_cli("gen square").exit_code == 2);
    REQUIRE(run_cli("gen wiggle pi").exit_code == 2);
}

TEST_CASE("promote reports the canceling pulse", "[cli]") {
    const fs::path doc = write_doc("sc32.json", short_corpse(RotationTarget{1.5 * pi}));
    const fs::path report = work_dir() / "sc32-report.txt";
    const RunResult r =
        run_cli("promote " + doc.string() + " --report " + report.string());
    REQUIRE(r.exit_code == 0);
    const std::string rep = slurp(report);
    REQUIRE(kv_value(rep, "inv_radius") == Approx(0.994).margin(1e-3));
    REQUIRE(kv_value(rep, "residual_g2") <= 1e-8);
    REQUIRE(kv_value(rep, "phase_flip") == 1.0);
    const PulseSequence promoted = parse_sequence(r.out);
    REQUIRE(promoted.segments.size() == 4);
}

TEST_CASE("promote rejects non-robust seeds with exit 3", "[cli]") {
    const fs::path doc = write_doc("sq.json", square_pulse(RotationTarget{pi}));
    const RunResult r = run_cli("promote " + doc.string());
    REQUIRE(r.exit_code == 3);
    REQUIRE_THAT(r.err, ContainsSubstring("g1_abs"));
}

TEST_CASE("promote --unit-strength appends a radius-1 circle", "[cli]") {
    const fs::path doc = write_doc("scpi.json", short_corpse(RotationTarget{pi}));
    const RunResult r = run_cli("promote --unit-strength " + doc.string());
    REQUIRE(r.exit_code == 0);
    // inspect the raw document: the appended (-1, 2pi) segment is contiguous
    // with the seed's trailing -1 segment, so parse_sequence would merge it
    const nlohmann::json raw = nlohmann::json::parse(r.out);
    REQUIRE(raw["segments"].size() == 4);
    const auto& tail = raw["segments"][3];
    REQUIRE(std::abs(tail["omega"].get<double>()) == 1.0);
    REQUIRE(tail["duration"].get<double>() == Approx(two_pi).margin(0));
}

TEST_CASE("traj reaches the figure vertices and ends at g1(T)", "[cli]") {
    const fs::path doc = write_doc("sc32t.json", short_corpse(RotationTarget{1.5 * pi}));
    const RunResult r = run_cli("traj " + doc.string() + " --samples 64");
    REQUIRE(r.exit_code == 0);

    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "# t\tx\ty");
    std::vector<std::array<double, 3>> rows;
    double t, x, y;
    while (in >> t >> x >> y) rows.push_back({t, x, y});
    REQUIRE(rows.size() == 1 + 3 * 64);

    const double s7 = std::sqrt(7.0);
    const auto& b = rows[64];   // first arc boundary is an exact sample
    REQUIRE(b[1] == Approx((s7 - 1.0) / 4.0).margin(1e-9));
    REQUIRE(b[2] == Approx((s7 - 3.0) / 4.0).margin(1e-9));
    const auto& c = rows[128];
    REQUIRE(c[1] == Approx((s7 - 3.0) / 4.0).margin(1e-9));
    REQUIRE(c[2] == Approx((s7 - 1.0) / 4.0).margin(1e-9));
    REQUIRE(std::hypot(rows.back()[1], rows.back()[2]) < 1e-9);
}

TEST_CASE("traj of a 2pi square pulse closes the unit circle", "[cli]") {
    const fs::path cdoc = write_doc("circle.json", square_pulse(RotationTarget{two_pi}));
    const RunResult r = run_cli("traj " + cdoc.string() + " --samples 32");
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    std::vector<std::array<double, 3>> rows;
    double t, x, y;
    while (in >> t >> x >> y) rows.push_back({t, x, y});
    REQUIRE(std::hypot(rows.back()[1], rows.back()[2]) < 1e-12);
}

TEST_CASE("area outputs signed and absolute values", "[cli]") {
    const fs::path doc = write_doc("scpi-area.json", short_corpse(RotationTarget{pi}));
    const RunResult r = run_cli("area " + doc.string());
    REQUIRE(r.exit_code == 0);
    const double want = (2.0 * std::sqrt(3.0) + pi) / 2.0;
    REQUIRE(kv_value(r.out, "abs_area") == Approx(want).margin(1e-9));
    REQUIRE(r.err.empty());

    PulseSequence circle;
    circle.label = "circle";
    circle.segments = {{1.0, two_pi}};
    const RunResult rc = run_cli("area " + write_doc("c2.json", circle).string());
    REQUIRE(std::abs(kv_value(rc.out, "signed_area")) == Approx(pi).margin(1e-9));

    const PulseSequence promoted =
        promote_second_order(short_corpse(RotationTarget{pi})).sequence;
    const RunResult rp = run_cli("area " + write_doc("pr.json", promoted).string());
    REQUIRE(kv_value(rp.out, "abs_area") == Approx(0.0).margin(1e-9));

    // open trajectory warns on stderr
    const RunResult ro = run_cli("area " + write_doc("sq2.json", square_pulse(RotationTarget{pi})).string());
    REQUIRE(ro.exit_code == 0);
    REQUIRE_THAT(ro.err, ContainsSubstring("not closed"));
}

TEST_CASE("sweep emits one column block per sequence", "[cli]") {
    const fs::path sq = write_doc("sw-sq.json", square_pulse(RotationTarget{1.5 * pi}));
    const fs::path sc = write_doc("sw-sc.json", short_corpse(RotationTarget{1.5 * pi}));
    const RunResult r = run_cli("sweep " + sq.string() + " " + sc.string() + " --theta 1.5pi");
    REQUIRE(r.exit_code == 0);

    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    REQUIRE(header == "# delta\tsquare\tshort-corpse");
    int rows = 0;
    std::string line;
    double prev = -1e9;
    while (std::getline(in, line)) {
        ++rows;
        std::istringstream ls(line);
        double d, e1, e2;
        ls >> d >> e1 >> e2;
        REQUIRE(d > prev);
        prev = d;
        REQUIRE(e1 >= 0.0);
        REQUIRE(e2 >= 0.0);
        if (d != 0.0 && std::abs(d) <= 0.1) REQUIRE(e2 < e1);
    }
    REQUIRE(rows == 121);  // default grid
}

TEST_CASE("sweep enforces distinct labels and valid grids", "[cli]") {
    const fs::path a = write_doc("dup-a.json", square_pulse(RotationTarget{pi}));
    const fs::path b = write_doc("dup-b.json", square_pulse(RotationTarget{pi}));
    REQUIRE(run_cli("sweep " + a.string() + " " + b.string() + " --theta pi").exit_code == 2);
    REQUIRE(run_cli("sweep " + a.string() + " --theta pi --delta-min 0.2 --delta-max 0.1")
                .exit_code == 2);
}

TEST_CASE("sweep honors log and negative grid flags", "[cli]") {
    const fs::path sq = write_doc("grid-sq.json", square_pulse(RotationTarget{pi}));
    const RunResult r = run_cli("sweep " + sq.string() +
                                " --theta pi --delta-min 0.001 --delta-max 0.1"
                                " --points 9 --log --negative");
    REQUIRE(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string header;
    std::getline(in, header);
    std::vector<double> ds;
    double d, e;
    while (in >> d >> e) ds.push_back(d);
    REQUIRE(ds.size() == 18);
    REQUIRE(ds.front() == Approx(-0.1).margin(1e-15));
    REQUIRE(ds.back() == Approx(0.1).margin(1e-15));
    for (std::size_t i = 1; i < ds.size(); ++i) REQUIRE(ds[i - 1] < ds[i]);
    for (double v : ds) REQUIRE(v != 0.0);
}

TEST_CASE("sweep output is byte-identical across runs and thread counts", "[cli]") {
    const fs::path sc = write_doc("det-sc.json", short_corpse(RotationTarget{pi}));
    const std::string base = "sweep " + sc.string() + " --theta pi --threads ";
    const RunResult r1 = run_cli(base + "1");
    const RunResult r2 = run_cli(base + "1");
    const RunResult r4 = run_cli(base + "4");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(r1.out == r2.out);
    REQUIRE(r1.out == r4.out);
}

TEST_CASE("verify reports slope and certificates", "[cli]") {
    const fs::path sc = write_doc("vf-sc.json", short_corpse(RotationTarget{1.5 * pi}));
    const RunResult r = run_cli("verify " + sc.string() + " --theta 1.5pi");
    REQUIRE(r.exit_code == 0);
    REQUIRE(kv_value(r.out, "slope") == Approx(4.0).margin(0.3));
    REQUIRE(kv_value(r.out, "inferred_order") == 1.0);
    REQUIRE(kv_value(r.out, "certificate_order") == 1.0);
    REQUIRE(kv_value(r.out, "g1_abs") <= 1e-10);
    REQUIRE(kv_value(r.out, "slope_consistent") == 1.0);
}
