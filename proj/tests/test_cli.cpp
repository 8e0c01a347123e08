#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

// End-to-end checks of the installed binary.  CMake points CRADLE_CLI at the
// built executable; without it (manual runs of this binary alone) the tests
// skip rather than fail.
namespace {

const char* cli_path() { return std::getenv("CRADLE_CLI"); }

#define REQUIRE_CLI()                                  \
    do {                                               \
        if (!cli_path()) SKIP("CRADLE_CLI not set");   \
    } while (0)

fs::path scratch_dir() {
    const fs::path dir =
        fs::temp_directory_path() / ("cradle_cli_unit_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

struct RunResult {
    int exit_code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

RunResult run_cli(const std::string& args) {
    const fs::path dir = scratch_dir();
    const fs::path out_path = dir / "stdout.txt";
    const fs::path err_path = dir / "stderr.txt";
    const std::string cmd = std::string(cli_path()) + " " + args + " >" +
                            out_path.string() + " 2>" + err_path.string();
    const int status = std::system(cmd.c_str());
    RunResult result;
    result.exit_code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    return result;
}

size_t count_lines(const std::string& text) {
    size_t n = 0;
    for (const char c : text)
        if (c == '\n') ++n;
    return n;
}

const char* kChainConfig = R"({
    "n_sites": 23,
    "strong_coupling_per_mm": 1.526,
    "weak_coupling_per_mm": 0.189
})";

}  // namespace

TEST_CASE("cli reports its version") {
    REQUIRE_CLI();
    const RunResult r = run_cli("--version");
    CHECK(r.exit_code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("1.0.0"));
}

TEST_CASE("cli rejects a missing subcommand") {
    REQUIRE_CLI();
    const RunResult r = run_cli("");
    CHECK(r.exit_code == 2);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("error: "));
}

TEST_CASE("layout derives couplings and timing") {
    REQUIRE_CLI();
    const RunResult r =
        run_cli("layout --sites 23 --coupling-strong 1.526 --coupling-weak 0.189");
    CHECK(r.exit_code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("sites: 23"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring(
                          "strong_coupling_per_mm: 1.526000000000e+00"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring(
                          "weak_coupling_per_mm: 1.890000000000e-01"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("analytic_tau_mm: 3.80862067"));
    CHECK_THAT(r.out,
               Catch::Matchers::ContainsSubstring("effective_coupling_per_mm: 4.0294935"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("transfer_regime: yes"));

    const RunResult pitches = run_cli("layout --sites 23 --pitch-strong 5 --pitch-weak 16");
    CHECK(pitches.exit_code == 0);
    CHECK_THAT(pitches.out, Catch::Matchers::ContainsSubstring(
                                "strong_coupling_per_mm: 1.52606944"));
    CHECK_THAT(pitches.out,
               Catch::Matchers::ContainsSubstring("weak_coupling_per_mm: 1.88962903"));
}

TEST_CASE("layout records a coupling-pitch conflict") {
    REQUIRE_CLI();
    const RunResult r = run_cli(
        "layout --sites 5 --pitch-strong 5 --coupling-strong 1.6 --coupling-weak 0.2");
    CHECK(r.exit_code == 0);
    CHECK_THAT(r.out,
               Catch::Matchers::ContainsSubstring("note: strong coupling overrides pitch"));
}

TEST_CASE("layout demands one knob per bond") {
    REQUIRE_CLI();
    const RunResult r = run_cli("layout --sites 23 --coupling-strong 1.526");
    CHECK(r.exit_code == 2);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring(
                          "layout needs --pitch-weak or --coupling-weak"));
}

TEST_CASE("evolve writes the field map and reports the revival") {
    REQUIRE_CLI();
    const fs::path dir = scratch_dir();
    const fs::path cfg = dir / "chain.json";
    const fs::path csv = dir / "field.csv";
    write_file(cfg, kChainConfig);

    const RunResult r = run_cli("evolve --config " + cfg.string() +
                                " --z-max 50 --z-step 0.5 --out " + csv.string());
    CHECK(r.exit_code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("tau_star_mm: 4.02594"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("eta_star: 9.712926"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("wrote: " + csv.string()));

    const std::string text = slurp(csv);
    CHECK_THAT(text, Catch::Matchers::StartsWith("z_mm,site_index,probability\n"));
    CHECK(count_lines(text) == 1 + 101 * 23);  // header + 101 z-slices of 23 sites
}

TEST_CASE("evolve surfaces config problems as usage errors") {
    REQUIRE_CLI();
    const fs::path dir = scratch_dir();
    const fs::path cfg = dir / "bad_chain.json";
    write_file(cfg, R"({"n_sites": 2, "strong_coupling_per_mm": 1.0,
                        "weak_coupling_per_mm": 0.5})");
    const RunResult r = run_cli("evolve --config " + cfg.string() +
                                " --z-max 10 --z-step 0.5 --out " +
                                (dir / "unused.csv").string());
    CHECK(r.exit_code == 2);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("chain needs at least 3 sites"));

    const RunResult missing = run_cli("evolve --config /nonexistent/cfg.json "
                                      "--z-max 10 --z-step 0.5 --out " +
                                      (dir / "unused.csv").string());
    CHECK(missing.exit_code == 2);
    CHECK_THAT(missing.err, Catch::Matchers::ContainsSubstring("cannot open config"));
}

TEST_CASE("sweep runs the configured scan and writes csv") {
    REQUIRE_CLI();
    const fs::path dir = scratch_dir();
    const fs::path cfg = dir / "m_scan.json";
    const fs::path csv = dir / "m_scan.csv";
    write_file(cfg, R"({
        "n_sites": 23,
        "strong_coupling_per_mm": 1.526,
        "weak_coupling_per_mm": 0.189,
        "nnn": {"mode": "uniform"},
        "sweep": {"parameter": "nnn_m", "values": [0.0, 0.005]}
    })");

    const RunResult r =
        run_cli("sweep --config " + cfg.string() + " --out " + csv.string());
    CHECK(r.exit_code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("points: 2"));

    const std::string text = slurp(csv);
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring(
                         "# chain: N=23 J=1.526/mm Jw=0.189/mm"));
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring("param_name,param_value,tau_mm,eta"));
    CHECK_THAT(text, Catch::Matchers::ContainsSubstring("nnn_m,0.000000000000e+00"));
}

TEST_CASE("weak-pitch sweep prints the fit summary") {
    REQUIRE_CLI();
    const fs::path dir = scratch_dir();
    const fs::path cfg = dir / "pitch_scan.json";
    write_file(cfg, R"({
        "n_sites": 23,
        "strong_coupling_per_mm": 1.316,
        "weak_pitch_um": 16.0,
        "sweep": {"parameter": "weak_pitch", "values": [12.0, 13.0, 14.0, 15.0]}
    })");

    const RunResult r = run_cli("sweep --config " + cfg.string() + " --out " +
                                (dir / "pitch_scan.csv").string());
    CHECK(r.exit_code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("slope_mm: 6.415"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("intercept_mm: -4.797"));
    CHECK_THAT(r.out,
               Catch::Matchers::ContainsSubstring("implied_strong_coupling_per_mm: 1.122"));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("points: 4"));
}

TEST_CASE("sweep demands a sweep block and a usable nnn mode") {
    REQUIRE_CLI();
    const fs::path dir = scratch_dir();
    const fs::path plain = dir / "no_sweep.json";
    write_file(plain, kChainConfig);
    const RunResult r = run_cli("sweep --config " + plain.string() + " --out " +
                                (dir / "unused.csv").string());
    CHECK(r.exit_code == 2);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("config has no sweep block"));

    const fs::path no_mode = dir / "m_scan_no_mode.json";
    write_file(no_mode, R"({
        "n_sites": 23,
        "strong_coupling_per_mm": 1.526,
        "weak_coupling_per_mm": 0.189,
        "sweep": {"parameter": "nnn_m", "values": [0.0, 0.005]}
    })");
    const RunResult r2 = run_cli("sweep --config " + no_mode.string() + " --out " +
                                 (dir / "unused.csv").string());
    CHECK(r2.exit_code == 2);
    CHECK_THAT(r2.err,
               Catch::Matchers::ContainsSubstring("sweep over nnn_m needs an nnn mode"));
}

TEST_CASE("stats reports estimators with uncertainties") {
    REQUIRE_CLI();
    const fs::path dir = scratch_dir();
    const fs::path est = dir / "est.csv";
    const fs::path rec = dir / "records.csv";

    const RunResult r = run_cli("stats --source heralded --mu 0.0067 --trials 20000 "
                                "--seed 42 --out " +
                                est.string() + " --records " + rec.string());
    CHECK(r.exit_code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("g2_zero: "));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("g_si: "));
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring(" +- "));

    const std::string est_text = slurp(est);
    CHECK_THAT(est_text, Catch::Matchers::StartsWith(
                             "estimator,value,stderr,n_gates,n1,n2,n3,n12,n13,n23,n123\n"));
    CHECK(count_lines(est_text) == 3);  // header + two estimator rows

    const std::string rec_text = slurp(rec);
    CHECK_THAT(rec_text, Catch::Matchers::StartsWith("gate,d1,d2,d3\n"));
    CHECK(count_lines(rec_text) == 1 + 20000);

    const RunResult thermal = run_cli("stats --source thermal --mu 0.05 --trials 20000 "
                                      "--out " +
                                      (dir / "thermal.csv").string());
    CHECK(thermal.exit_code == 0);
    CHECK_THAT(thermal.out, Catch::Matchers::ContainsSubstring("g2_signal: "));
}

TEST_CASE("stats validates source and pair-law names") {
    REQUIRE_CLI();
    const fs::path unused = scratch_dir() / "unused.csv";
    const RunResult r = run_cli("stats --source squeezed --mu 0.1 --trials 10 --out " +
                                unused.string());
    CHECK(r.exit_code == 2);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("unknown source kind 'squeezed'"));

    const RunResult r2 = run_cli("stats --source heralded --pair-law gamma --mu 0.1 "
                                 "--trials 10 --out " +
                                 unused.string());
    CHECK(r2.exit_code == 2);
    CHECK_THAT(r2.err, Catch::Matchers::ContainsSubstring("unknown pair law 'gamma'"));
}

TEST_CASE("identical invocations are byte-identical") {
    REQUIRE_CLI();
    const fs::path dir = scratch_dir();
    const fs::path cfg = dir / "repeat.json";
    write_file(cfg, kChainConfig);

    const fs::path a = dir / "field_a.csv";
    const fs::path b = dir / "field_b.csv";
    const std::string tail = " --z-max 20 --z-step 1.0 --out ";
    const RunResult ra = run_cli("evolve --config " + cfg.string() + tail + a.string());
    const RunResult rb = run_cli("evolve --config " + cfg.string() + tail + b.string());
    CHECK(ra.exit_code == 0);
    CHECK(rb.exit_code == 0);
    CHECK(ra.out.substr(0, ra.out.find("wrote:")) ==
          rb.out.substr(0, rb.out.find("wrote:")));
    CHECK(slurp(a) == slurp(b));

    const fs::path sa = dir / "stats_a.csv";
    const fs::path sb = dir / "stats_b.csv";
    const std::string stats_args = "stats --source coherent --mu 0.05 --trials 5000 "
                                   "--seed 7 --out ";
    CHECK(run_cli(stats_args + sa.string()).exit_code == 0);
    CHECK(run_cli(stats_args + sb.string()).exit_code == 0);
    CHECK(slurp(sa) == slurp(sb));
}
