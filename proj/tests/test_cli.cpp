#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

#include "spinj/cli.hpp"
#include "spinj/report_io.hpp"

using namespace spinj;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / ("spinj_test_" + name);
    std::ofstream(p) << content;
    return p;
}

}  // namespace

TEST_CASE("bounds: half-Dicke JSON") {
    const auto r = run({"bounds", "--family", "delta", "--n", "100", "--a", "0", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["schema_version"] == "1.0");
    // Brute-force F11 = 2 j (j+1) for a = 0, j = 50.
    CHECK(j["result"]["local"]["sld_bound"].get<double>() == doctest::Approx(2.0 / (2 * 50.0 * 51.0)));
    CHECK(j["result"]["global"]["eta"].get<double>() == doctest::Approx(2.0).epsilon(0.02));
    CHECK(j["result"]["local"]["rld_bound"]["absent"] == "RLD_SINGULAR");
}

TEST_CASE("bounds: geometric RLD near 4r/(n(r-1)) = 0.04") {
    const auto r = run({"bounds", "--family", "geometric", "--n", "200", "--r", "2"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["result"]["local"]["rld_bound"].get<double>() == doctest::Approx(0.04).epsilon(0.02));
}

TEST_CASE("bounds: validation errors exit 2") {
    auto r = run({"bounds", "--family", "geometric", "--n", "10", "--r", "1"});
    CHECK(r.code == 2);
    CHECK(r.err.find("r must differ from 1") != std::string::npos);
    CHECK(run({"bounds", "--family", "binomial", "--n", "10"}).code == 2);
    CHECK(run({"bounds", "--family", "binomial", "--n", "0", "--p", "0.5"}).code == 2);
    CHECK(run({"bounds", "--family", "poisson", "--n", "3", "--p", "0.5"}).code == 2);
    CHECK(run({"bounds", "--bogus"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("bounds: CSV output is a single sweep row") {
    const auto r = run({"bounds", "--family", "binomial", "--n", "6", "--p", "0.75", "--format", "csv"});
    REQUIRE(r.code == 0);
    const auto rows = parse_sweep_csv(r.out);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].n == 6);
}

TEST_CASE("bounds: custom weights file is normalized with a warning") {
    const auto w = temp_file("weights.txt", "1\n1\n2\n");
    const auto r = run({"bounds", "--family", "custom", "--weights", w.string()});
    REQUIRE(r.code == 0);
    CHECK(r.err.find("warning") != std::string::npos);
    CHECK(json::parse(r.out)["result"]["n"] == 2);
    CHECK(run({"bounds", "--family", "custom", "--weights", w.string(), "--n", "5"}).code == 2);
    const auto bad = temp_file("bad.txt", "1\n-1\n");
    CHECK(run({"bounds", "--family", "custom", "--weights", bad.string()}).code == 2);
}

TEST_CASE("bounds: weight matrix file") {
    const auto g = temp_file("g.txt", "2 0\n0 2\n");
    const auto a = json::parse(run({"bounds", "--family", "geometric", "--n", "5", "--r", "2"}).out);
    const auto b = json::parse(
        run({"bounds", "--family", "geometric", "--n", "5", "--r", "2", "--weight-matrix", g.string()}).out);
    CHECK(b["result"]["local"]["sld_bound"].get<double>() ==
          doctest::Approx(2 * a["result"]["local"]["sld_bound"].get<double>()));
    const auto bad = temp_file("gbad.txt", "1 2\n2 1\n");
    CHECK(run({"bounds", "--family", "geometric", "--n", "5", "--r", "2", "--weight-matrix", bad.string()}).code == 2);
}

TEST_CASE("scan: half-Dicke n = 10..200 step 10") {
    const auto r = run({"scan", "--family", "delta", "--a", "0", "--n-min", "10", "--n-max", "200", "--n-step", "10"});
    REQUIRE(r.code == 0);
    const auto rows = parse_sweep_csv(r.out);
    REQUIRE(rows.size() == 20);
    CHECK(*rows.back().eta.value >= 1.9);
}

TEST_CASE("scan: parameter lists, n lists and JSON") {
    const auto r = run({"scan", "--family", "binomial", "--p", "0.6,0.9", "--n-list", "4,8", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["result"]["rows"].size() == 4);
    CHECK(j["provenance"]["columns"].size() == 14);
}

TEST_CASE("scan: geometric expansion column within its remainder bound") {
    const auto r = run({"scan", "--family", "geometric", "--r", "2", "--n-list", "50,100,200"});
    REQUIRE(r.code == 0);
    for (const auto& row : parse_sweep_csv(r.out)) {
        const double bound = 16.0 * 2.0 / (1.0 * row.n * row.n * row.n);
        CHECK(std::abs(*row.eta.value - *row.asymptotic_eta.value) <= bound);
    }
}

TEST_CASE("scan: empty range and bad outputs exit 2") {
    CHECK(run({"scan", "--family", "delta", "--a", "0", "--n-min", "20", "--n-max", "10"}).code == 2);
    CHECK(run({"scan", "--family", "delta", "--a", "0", "--n-list", "5", "--outputs", "foo"}).code == 2);
}

TEST_CASE("scan: --out writes a file") {
    const auto path = std::filesystem::temp_directory_path() / "spinj_test_scan.csv";
    const auto r = run({"scan", "--family", "geometric", "--r", "3", "--n", "4", "--out", path.string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(parse_sweep_csv(ss.str()).size() == 1);
}

TEST_CASE("simulate: geometric n = 10 within 3 sigma, deterministic") {
    const std::vector<std::string> args = {"simulate", "--family", "geometric", "--n", "10", "--r", "2",
                                           "--samples", "100000", "--seed", "7"};
    const auto a = run(args);
    REQUIRE(a.code == 0);
    const auto j = json::parse(a.out);
    const auto& p = j["result"]["points"][0];
    CHECK(std::abs(p["mean_fidelity"].get<double>() - j["result"]["analytic_r"].get<double>()) <=
          3 * p["std_error"].get<double>());
    CHECK(run(args).out == a.out);
}

TEST_CASE("simulate: grid scan and errors") {
    const auto r = run({"simulate", "--family", "binomial", "--n", "3", "--p", "0.8", "--samples", "500", "--grid",
                        "fibonacci:4", "--format", "csv"});
    REQUIRE(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 5);
    CHECK(run({"simulate", "--family", "geometric", "--n", "4", "--r", "2", "--samples", "0"}).code == 2);
    CHECK(run({"simulate", "--family", "geometric", "--n", "4", "--r", "2", "--grid", "sphere:4"}).code == 2);
    CHECK(run({"simulate", "--family", "geometric", "--n", "4", "--r", "2", "--theta", "1"}).code == 2);
    const auto fail = run({"simulate", "--family", "binomial", "--n", "4", "--p", "0.2", "--samples", "10"});
    CHECK(fail.code == 3);
    CHECK(fail.err.find("BFY_FAILS") != std::string::npos);
}

TEST_CASE("verify: quick mode passes with at least 40 checks") {
    const auto r = run({"verify", "--max-n", "4", "--format", "json"});
    CHECK(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["result"]["total"].get<int>() >= 40);
    CHECK(j["result"]["passed"] == j["result"]["total"]);
}

TEST_CASE("verify: injected fault fails") {
    CHECK(run({"verify", "--max-n", "2", "--inject-fault"}).code != 0);
}

TEST_CASE("binary: exit codes through the real executable") {
    const char* exe = std::getenv("SPINJ_CLI");
    if (!exe) return;
    const auto status = [&](const std::string& args) {
        const int s = std::system((std::string(exe) + " " + args + " >/dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    CHECK(status("verify --max-n 2") == 0);
    CHECK(status("bounds --family geometric --n 10 --r 1") == 2);
    CHECK(status("simulate --family binomial --n 4 --p 0.2 --samples 10") == 3);
    CHECK(status("frobnicate") == 2);
}
