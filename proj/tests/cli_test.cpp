// End-to-end runs of the installed command-line binary.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>

#include "dfe/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args, bool merge_stderr = true) {
    const std::string cmd =
        std::string(DFE_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

fs::path work_dir() {
    const auto dir = fs::temp_directory_path() / "dfe_cli_tests";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("synth writes deterministic CSV") {
    const auto a = work_dir() / "synth_a.csv";
    const auto b = work_dir() / "synth_b.csv";
    const std::string flags = "synth --tone 1,200,1.5708 --noise 1.0 --seed 7 --n 297 --rate 1000 -o ";
    CHECK(run_cli(flags + a.string()).exit_code == 0);
    CHECK(run_cli(flags + b.string()).exit_code == 0);
    const std::string text = slurp(a);
    CHECK(text == slurp(b));
    CHECK(std::count(text.begin(), text.end(), '\n') == 298);  // header + 297 rows
}

TEST_CASE("synth output round-trips through ingest") {
    const auto path = work_dir() / "round.csv";
    REQUIRE(run_cli("synth --tone 0.5,30,0 --trend 1,0.1 --noise 0.2 --seed 3 --n 200 --rate 100 -o " +
                    path.string())
                .exit_code == 0);
    const auto ts = dfe::ingest_csv(path);
    CHECK(ts.size() == 200);
    CHECK(std::fabs(ts.rate_hz - 100.0) <= 1e-7);
}

TEST_CASE("analyze finds the demo dominant and is byte-stable") {
    const auto csv = work_dir() / "demo.csv";
    REQUIRE(run_cli("synth --tone 1,200,1.5708 --noise 1.0 --seed 7 --n 297 --rate 1000 -o " +
                    csv.string())
                .exit_code == 0);

    const auto first = run_cli("analyze " + csv.string(), false);
    CHECK(first.exit_code == 0);
    CHECK(first.output.find("\"bin\": 102") != std::string::npos);
    CHECK(first.output.find("\"psd_method\": \"raw\"") != std::string::npos);
    CHECK(first.output.find("\"periods_ok\": true") != std::string::npos);

    const auto second = run_cli("analyze " + csv.string(), false);
    CHECK(first.output == second.output);
}

TEST_CASE("analyze emits plot files on request") {
    const auto csv = work_dir() / "plot_demo.csv";
    REQUIRE(run_cli("synth --tone 1,100,0 --noise 0.1 --seed 5 --n 512 --rate 1000 -o " +
                    csv.string())
                .exit_code == 0);
    const auto spectrum = work_dir() / "spectrum.txt";
    const auto phase = work_dir() / "phase.txt";
    const auto residual = work_dir() / "residual.csv";
    const auto r = run_cli("analyze " + csv.string() + " --spectrum-out " + spectrum.string() +
                           " --phase-out " + phase.string() + " --residual-out " + residual.string());
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(spectrum));
    CHECK(fs::exists(phase));
    CHECK(fs::exists(residual));
    CHECK(slurp(spectrum).rfind("# freq_hz power", 0) == 0);
    const auto back = dfe::ingest_csv(residual);
    CHECK(back.size() == 512);
}

TEST_CASE("welch analyze reports the method") {
    const auto csv = work_dir() / "welch_demo.csv";
    REQUIRE(run_cli("synth --tone 1,100,0 --noise 0.5 --seed 6 --n 1000 --rate 1000 -o " +
                    csv.string())
                .exit_code == 0);
    const auto r = run_cli("analyze " + csv.string() + " --welch", false);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"psd_method\": \"welch\"") != std::string::npos);
    // phase output is undefined for averaged periodograms
    const auto bad = run_cli("analyze " + csv.string() + " --welch --phase-out " +
                             (work_dir() / "nope.txt").string());
    CHECK(bad.exit_code == 1);
}

TEST_CASE("band-pass and truncate policies reach the report") {
    const auto csv = work_dir() / "banded.csv";
    REQUIRE(run_cli("synth --tone 1,200,0 --tone 2,40,0 --noise 0.2 --seed 9 --n 700 --rate 1000 -o " +
                    csv.string())
                .exit_code == 0);
    // the 40 Hz tone is stronger, but the band keeps only the 200 Hz one
    const auto r = run_cli("analyze " + csv.string() + " --band 150,250 --policy truncate", false);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"policy\": \"truncate_down\"") != std::string::npos);
    const auto pos = r.output.find("\"freq_hz\":");
    REQUIRE(pos != std::string::npos);
    const double f = std::stod(r.output.substr(pos + 10));
    CHECK(std::fabs(f - 200.0) < 5.0);
}

TEST_CASE("an empty file is a data error") {
    const auto path = work_dir() / "empty.csv";
    std::ofstream(path).close();
    const auto r = run_cli("analyze " + path.string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("no samples") != std::string::npos);
}

TEST_CASE("a missing file is a data error") {
    const auto r = run_cli("analyze " + (work_dir() / "missing.csv").string());
    CHECK(r.exit_code == 2);
}

TEST_CASE("bad flags are usage errors") {
    CHECK(run_cli("analyze").exit_code == 1);
    CHECK(run_cli("frobnicate in.csv").exit_code == 1);
    const auto csv = work_dir() / "usage.csv";
    REQUIRE(run_cli("synth --tone 1,10,0 --n 64 --rate 100 -o " + csv.string()).exit_code == 0);
    CHECK(run_cli("stft " + csv.string() + " --win-len 32 --hop 64").exit_code == 1);
    CHECK(run_cli("stft " + csv.string() + " --win-len 128 --hop 8").exit_code == 1);
    CHECK(run_cli("analyze " + csv.string() + " --policy sideways").exit_code == 1);
}

TEST_CASE("quarter-rate pisarenko is a numeric error") {
    const auto csv = work_dir() / "quarter.csv";
    REQUIRE(run_cli("synth --tone 1,25,1.5708 --n 256 --rate 100 -o " + csv.string()).exit_code == 0);
    const auto r = run_cli("pisarenko " + csv.string());
    CHECK(r.exit_code == 3);
    CHECK(r.output.find("quarter-rate") != std::string::npos);
}

TEST_CASE("pisarenko estimates an eighth-rate tone") {
    const auto csv = work_dir() / "eighth.csv";
    REQUIRE(run_cli("synth --tone 1,125,1.5708 --n 1024 --rate 1000 -o " + csv.string()).exit_code ==
            0);
    const auto r = run_cli("pisarenko " + csv.string(), false);
    CHECK(r.exit_code == 0);
    const auto pos = r.output.find("\"frequency_hz\":");
    REQUIRE(pos != std::string::npos);
    const double f = std::stod(r.output.substr(pos + 15));
    CHECK(std::fabs(f - 125.0) <= 1.0);
}

TEST_CASE("stft tracks a stationary tone as one segment") {
    const auto csv = work_dir() / "stationary.csv";
    REQUIRE(run_cli("synth --tone 1,100,0 --n 2048 --rate 1024 -o " + csv.string()).exit_code == 0);
    const auto frames = work_dir() / "frames.txt";
    const auto r = run_cli("stft " + csv.string() + " --win-len 256 --hop 128 --frames-out " +
                               frames.string(),
                           false);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"segments\"") != std::string::npos);
    // exactly one segment object
    std::size_t count = 0;
    for (std::size_t pos = 0; (pos = r.output.find("\"t_start_s\"", pos)) != std::string::npos; ++pos)
        ++count;
    CHECK(count == 1);
    CHECK(slurp(frames).rfind("# time_s freq_hz power", 0) == 0);
}

TEST_CASE("fit recovers a slow sinusoid via the subcommand") {
    const auto csv = work_dir() / "slow.csv";
    REQUIRE(run_cli("synth --tone 1.5,0.05,0.7 --trend 2,0.1 --n 100 --rate 10 -o " + csv.string())
                .exit_code == 0);
    const auto r = run_cli("fit " + csv.string(), false);
    CHECK(r.exit_code == 0);
    const auto pos = r.output.find("\"frequency_hz\":");
    REQUIRE(pos != std::string::npos);
    const double f = std::stod(r.output.substr(pos + 15));
    CHECK(std::fabs(f - 0.05) <= 0.0025);
}

TEST_CASE("analyze runs the fit automatically below the period floor") {
    const auto csv = work_dir() / "sub_res.csv";
    REQUIRE(run_cli("synth --tone 1.5,0.05,0.7 --trend 2,0.1 --n 100 --rate 10 -o " + csv.string())
                .exit_code == 0);
    const auto r = run_cli("analyze " + csv.string(), false);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"fit\": {") != std::string::npos);
    CHECK(r.output.find("\"converged\": true") != std::string::npos);
}

TEST_CASE("DFE_CONFIG supplies analyze defaults") {
    const auto csv = work_dir() / "cfg_demo.csv";
    REQUIRE(run_cli("synth --tone 1,100,0 --noise 0.3 --seed 2 --n 512 --rate 1000 -o " +
                    csv.string())
                .exit_code == 0);
    const auto cfg = work_dir() / "config.json";
    std::ofstream(cfg) << "{\"margin\": 2.5, \"k_max\": 1}\n";

    const std::string cmd = "env DFE_CONFIG=" + cfg.string() + " " + std::string(DFE_CLI_PATH) +
                            " analyze " + csv.string() + " 2>/dev/null";
    CliResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
    r.exit_code = WEXITSTATUS(pclose(pipe));

    CHECK(r.exit_code == 0);
    CHECK(r.output.find("\"margin\": 2.5") != std::string::npos);
    CHECK(r.output.find("\"k_max\": 1") != std::string::npos);
}

}
