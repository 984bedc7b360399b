#include "catch2/catch_amalgamated.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "json.hpp"

namespace {

using nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string out, err;
};

const std::string &scratch_dir() {
    static const std::string dir = [] {
        char tmpl[] = "/tmp/gamow_cli_XXXXXX";
        const char *d = mkdtemp(tmpl);
        if (!d) throw std::runtime_error("mkdtemp failed");
        return std::string(d);
    }();
    return dir;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string spit(const std::string &name, const std::string &content) {
    const std::string path = scratch_dir() + "/" + name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
    return path;
}

RunResult run_cli(const std::string &args) {
    static int seq = 0;
    const std::string out = scratch_dir() + "/out" + std::to_string(seq);
    const std::string err = scratch_dir() + "/err" + std::to_string(seq);
    ++seq;
    const std::string cmd =
        std::string(GAMOW_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
    const int rc = std::system(cmd.c_str());
    RunResult r;
    if (rc >= 0 && WIFEXITED(rc)) r.exit_code = WEXITSTATUS(rc);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string &text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream fields(line);
        std::string cell;
        while (std::getline(fields, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

TEST_CASE("pole listing matches the frozen resonance table", "[cli]") {
    const std::string cfg = spit("default.json", "{}\n");
    const RunResult r = run_cli("poles --config " + cfg);
    REQUIRE(r.exit_code == 0);
    const json poles = json::parse(r.out);
    REQUIRE(poles.is_array());
    REQUIRE(poles.size() == 3);
    const double want_k[3][2] = {
        {2.3190998502052733, -0.0093031054809650359},
        {3.9925107140075808, -0.25914986511885285},
        {5.1171498806837459, -0.45400892556992445},
    };
    for (int i = 0; i < 3; ++i) {
        const auto &p = poles[std::size_t(i)];
        CHECK(p.at("n").get<int>() == i + 1);
        CHECK(std::abs(p.at("k").at("re").get<double>() - want_k[i][0]) < 1e-8);
        CHECK(std::abs(p.at("k").at("im").get<double>() - want_k[i][1]) < 1e-8);
    }
}

TEST_CASE("a free potential lists no poles", "[cli]") {
    const std::string cfg =
        spit("free.json", R"({"boundaries":[1.0],"heights":[0.0,0.0]})");
    const RunResult r = run_cli("poles --config " + cfg);
    CHECK(r.exit_code == 0);
    CHECK(json::parse(r.out).empty());
}

TEST_CASE("repeated pole runs are byte-identical", "[cli]") {
    const std::string cfg = spit("det.json", "{}\n");
    const RunResult a = run_cli("poles --config " + cfg);
    const RunResult b = run_cli("poles --config " + cfg);
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("config validation failures exit with code 2 and a JSON record",
          "[cli]") {
    const std::string bad_order = spit(
        "bad_order.json", R"({"boundaries":[2.0,1.0],"heights":[0.0,10.0,0.0]})");
    RunResult r = run_cli("poles --config " + bad_order);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("\"error\":\"ValidationError\"") != std::string::npos);
    CHECK(r.err.find("boundaries") != std::string::npos);

    const std::string unknown = spit("unknown.json", R"({"bogus":1})");
    r = run_cli("poles --config " + unknown);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("bogus") != std::string::npos);

    const std::string fat = spit(
        "fat_testfn.json", R"({"testfn":[{"p":1,"c":0.9,"sigma":0.5}]})");
    r = run_cli("poles --config " + fat);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("not negligible") != std::string::npos);

    const std::string malformed = spit("broken.json", "{ not json");
    r = run_cli("poles --config " + malformed);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("\"error\":\"ParseError\"") != std::string::npos);
}

TEST_CASE("the S-matrix scan stays unimodular line by line", "[cli]") {
    const std::string cfg = spit("sm.json", "{}\n");
    const RunResult r = run_cli("smatrix --config " + cfg);
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 201);
    REQUIRE(rows[0] ==
            std::vector<std::string>({"E", "re_S", "im_S", "abs_S", "delta"}));
    CHECK(std::abs(std::stod(rows[1][0]) - 0.25) < 1e-12);
    CHECK(std::abs(std::stod(rows.back()[0]) - 50.0) < 1e-12);
    for (std::size_t i = 1; i < rows.size(); ++i)
        CHECK(std::abs(std::stod(rows[i][3]) - 1.0) < 1e-10);
}

TEST_CASE("asking for a resonance index past the certified count is refused",
          "[cli]") {
    const std::string cfg = spit("idx.json", "{}\n");
    const RunResult r = run_cli("gamow --n 99 --config " + cfg);
    CHECK(r.exit_code == 4);
    CHECK(r.err.find("\"error\":\"Inconclusive\"") != std::string::npos);
}

TEST_CASE("the verification suite passes and reports deterministically",
          "[cli]") {
    const std::string cfg = spit("verify.json", "{}\n");
    const std::string j1 = scratch_dir() + "/verify1.json";
    const std::string j2 = scratch_dir() + "/verify2.json";

    const RunResult a = run_cli("verify --config " + cfg + " --output " + j1);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out.find("FAIL") == std::string::npos);
    const std::string tail = "all 49 checks passed\n";
    REQUIRE(a.out.size() >= tail.size());
    CHECK(a.out.substr(a.out.size() - tail.size()) == tail);

    const json rep = json::parse(slurp(j1));
    CHECK(rep.at("all_pass").get<bool>());
    CHECK(rep.at("checks").size() == 49);

    const RunResult b = run_cli("verify --config " + cfg + " --output " + j2);
    REQUIRE(b.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(slurp(j1) == slurp(j2));
}
