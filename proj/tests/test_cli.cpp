// End-to-end checks of the command-line surface; spawns the real binary.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(INDOORLOC_CLI) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    char buf[4096];
    while (std::fgets(buf, sizeof(buf), pipe) != nullptr) {
        result.out += buf;
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("indoorloc_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

std::string read_text(const fs::path& file) {
    std::ifstream in(file);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

}  // namespace

TEST_CASE("noiseless simulate + evaluate yields zero error everywhere") {
    TempDir tmp;
    auto sim = run("simulate --m 20 --instances-per-rp 10 --seed 1 --sigma 0 --out " +
                   quoted(tmp.path / "train"));
    CHECK(sim.exit_code == 0);
    CHECK(run("simulate --m 20 --instances-per-rp 10 --seed 2 --sigma 0 --out " +
              quoted(tmp.path / "test"))
              .exit_code == 0);

    const auto eval = run("evaluate --train " + quoted(tmp.path / "train") + " --test " +
                          quoted(tmp.path / "test") + " --method I --out " +
                          quoted(tmp.path / "results.jsonl"));
    CHECK(eval.exit_code == 0);

    std::ifstream results(tmp.path / "results.jsonl");
    std::string line;
    int rows = 0;
    while (std::getline(results, line)) {
        const json j = json::parse(line);
        CHECK(j.at("estimate_count").get<int>() == 160);
        CHECK(j.at("mean_error_m").get<double>() == 0.0);
        ++rows;
    }
    CHECK(rows == 49);
}

TEST_CASE("localize replays a training sample onto its RP") {
    TempDir tmp;
    REQUIRE(run("simulate --m 20 --instances-per-rp 10 --seed 3 --sigma 3 --out " +
                quoted(tmp.path / "train"))
                .exit_code == 0);

    const auto out = run("localize --train " + quoted(tmp.path / "train") +
                         " --method I --k 1 --n-aps 4 --query " +
                         quoted(tmp.path / "train" / "readings.csv"));
    CHECK(out.exit_code == 0);

    // The training scenario's RP1 sits at the first grid-zone center.
    std::istringstream lines(out.out);
    std::string line;
    int checked = 0;
    while (std::getline(lines, line)) {
        if (line.empty() || line.front() != '{') {
            continue;
        }
        const json j = json::parse(line);
        if (j.at("query_rp_id").get<int>() == 1 && checked < 5) {
            CHECK(j.at("estimated_position").at("x").get<double>() == 0.4375);
            CHECK(j.at("estimated_position").at("z").get<double>() == 0.87);
            CHECK(j.at("neighbors")[0].at("distance").get<double>() == 0.0);
            ++checked;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("evaluate is byte-deterministic given the same seeds") {
    TempDir tmp;
    for (const char* round : {"a", "b"}) {
        const fs::path base = tmp.path / round;
        REQUIRE(run("simulate --m 10 --instances-per-rp 5 --seed 10 --sigma 3 --out " +
                    quoted(base / "train"))
                    .exit_code == 0);
        REQUIRE(run("simulate --m 10 --instances-per-rp 5 --seed 11 --sigma 3 --out " +
                    quoted(base / "test"))
                    .exit_code == 0);
        REQUIRE(run("evaluate --train " + quoted(base / "train") + " --test " +
                    quoted(base / "test") + " --method II --out " +
                    quoted(base / "results.jsonl"))
                    .exit_code == 0);
    }
    CHECK(read_text(tmp.path / "a" / "train" / "readings.csv") ==
          read_text(tmp.path / "b" / "train" / "readings.csv"));
    CHECK(read_text(tmp.path / "a" / "results.jsonl") ==
          read_text(tmp.path / "b" / "results.jsonl"));

    json meta_a = json::parse(read_text(tmp.path / "a" / "train" / "metadata.json"));
    json meta_b = json::parse(read_text(tmp.path / "b" / "train" / "metadata.json"));
    meta_a.erase("created_at");
    meta_b.erase("created_at");
    CHECK(meta_a == meta_b);
}

TEST_CASE("build-fingerprints emits one row per instance plus a sidecar") {
    TempDir tmp;
    REQUIRE(run("simulate --m 20 --instances-per-rp 10 --seed 4 --sigma 3 --out " +
                quoted(tmp.path / "ds"))
                .exit_code == 0);
    const auto out = run("build-fingerprints --in " + quoted(tmp.path / "ds") +
                         " --representation quartile --out " + quoted(tmp.path / "fp.csv"));
    CHECK(out.exit_code == 0);

    std::ifstream csv(tmp.path / "fp.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "rp_id,attr_1,attr_2,attr_3,attr_4,attr_5,attr_6,attr_7,attr_8,attr_9,"
                    "attr_10,attr_11,attr_12,attr_13,attr_14,attr_15,attr_16,attr_17,attr_18,"
                    "attr_19,attr_20,attr_21,attr_22,attr_23,attr_24");
    int rows = 0;
    std::string line;
    while (std::getline(csv, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 160);
    CHECK(fs::exists(tmp.path / "fp.csv.json"));
}

TEST_CASE("sweep-m reports one row per m") {
    TempDir tmp;
    const auto out = run("sweep-m --method I --k 1 --n-aps 4 --sigma 0 --seed 6 "
                         "--m-values 5,10 --instances-per-rp 3 --out " +
                         quoted(tmp.path / "sweep.csv"));
    CHECK(out.exit_code == 0);
    const std::string csv = read_text(tmp.path / "sweep.csv");
    CHECK(csv.find("m,mean_error_m,mean_time_s") == 0);
    CHECK(csv.find("\n5,0,") != std::string::npos);
    CHECK(csv.find("\n10,0,") != std::string::npos);
}

TEST_CASE("export-cdf converts results to step points") {
    TempDir tmp;
    std::ofstream results(tmp.path / "results.jsonl");
    for (double em : {1.0, 2.0, 2.0, 4.0}) {
        results << json{{"schema_version", 1}, {"method", "I"}, {"n_aps", 2},
                        {"k", 1},              {"mean_error_m", em}, {"estimate_count", 160}}
                       .dump()
                << "\n";
    }
    results.close();

    const auto out = run("export-cdf --results " + quoted(tmp.path / "results.jsonl") +
                         " --out " + quoted(tmp.path / "cdf.csv"));
    CHECK(out.exit_code == 0);
    CHECK(read_text(tmp.path / "cdf.csv") ==
          "threshold_m,cumulative_fraction\n1,0.25\n2,0.75\n4,1\n");
}

TEST_CASE("exit codes separate usage errors from data errors") {
    TempDir tmp;
    CHECK(run("no-such-command").exit_code == 2);
    CHECK(run("simulate").exit_code == 2);                     // missing required --out
    CHECK(run("evaluate --train missing --test missing --method I --out " +
              quoted(tmp.path / "r.jsonl"))
              .exit_code == 1);                                // data error
    CHECK(run("--help").exit_code == 0);

    // Unknown method is a data error with a named field.
    REQUIRE(run("simulate --m 5 --instances-per-rp 2 --seed 1 --sigma 0 --out " +
                quoted(tmp.path / "ds"))
                .exit_code == 0);
    const auto bad = run("localize --train " + quoted(tmp.path / "ds") +
                         " --method IX --k 1 --n-aps 4 --query " +
                         quoted(tmp.path / "ds" / "readings.csv"));
    CHECK(bad.exit_code == 1);
    CHECK(bad.out.find("IX") != std::string::npos);
}
