#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "biharm/cli.hpp"

using namespace biharm;
namespace fs = std::filesystem;

namespace {
struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "biharm");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("biharm_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& text = "") const {
        const fs::path p = path / name;
        if (!text.empty()) std::ofstream(p) << text;
        return p.string();
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string config(const std::string& nonlinearity, const std::string& potential, double mu, double lambda,
                   double radius = 1.0) {
    return "format_version = 1\ndomain.N = 5\ndomain.R = " + std::to_string(radius) + "\nmesh.M = 128\n" + potential +
           "source.kind = constant\nsource.params = 1\n" + nonlinearity + "mu = " + std::to_string(mu) +
           "\nlambda = " + std::to_string(lambda) +
           "\ncontrols.max_iter = 100000\ncontrols.rel_tol = 1e-10\ncontrols.u_cap = 1e8\n";
}

const std::string kZeroPot = "potential.kind = zero\n";
const std::string kPower2 = "nonlinearity.kind = power\nnonlinearity.p = 2\n";
const std::string kLinear = "nonlinearity.kind = zero\n";

std::vector<std::vector<double>> read_csv(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    std::vector<std::vector<double>> rows;
    std::getline(in, line);
    CHECK(line == "# format_version=1");
    std::getline(in, line);
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        rows.push_back(row);
    }
    return rows;
}
}  // namespace

TEST_SUITE("cli") {

TEST_CASE("linear solve profile is lambda times the zeta_1 profile") {
    TempDir tmp;
    const std::string cfg = tmp.file("lin.cfg", config(kLinear, kZeroPot, 0.0, 3.0));
    const Result z = run({"zeta1", "--config", cfg, "--profile", tmp.file("z.csv"), "--report", tmp.file("z.json")});
    REQUIRE(z.code == 0);
    const Result s = run({"solve", "--config", cfg, "--profile", tmp.file("u.csv"), "--report", tmp.file("u.json")});
    REQUIRE(s.code == 0);
    const auto zr = read_csv(tmp.file("z.csv"));
    const auto ur = read_csv(tmp.file("u.csv"));
    REQUIRE(zr.size() == 128);
    REQUIRE(ur.size() == 128);
    for (std::size_t i = 0; i < zr.size(); ++i) {
        CHECK(ur[i][0] == zr[i][0]);
        CHECK(ur[i][1] == doctest::Approx(3.0 * zr[i][1]).epsilon(1e-12));
        CHECK(ur[i][3] == 3.0);
    }
    const auto doc = cli::Json::parse(slurp(tmp.file("u.json")));
    CHECK(doc["status"] == "ok");
    CHECK(doc["format_version"] == 1);
    CHECK(doc["config"]["lambda"] == "3.000000");
}

TEST_CASE("check reports a failed coercivity hypothesis with exit 1") {
    TempDir tmp;
    const std::string cfg = tmp.file(
        "bad.cfg", config(kPower2, "potential.kind = inverse_power\npotential.alpha = 2\npotential.s = 4\n", 1.0, 1.0));
    const Result r = run({"check", "--config", cfg});
    CHECK(r.code == 1);
    CHECK(r.err.find("coercivity hypothesis fails") != std::string::npos);
    const auto doc = cli::Json::parse(r.out);
    CHECK(doc["status"] == "assertion_failed");
    CHECK(doc["body"]["hypotheses"]["gamma_hat"]["holds"] == false);

    const Result ok = run({"check", "--config", tmp.file("ok.cfg", config(kPower2, kZeroPot, 0.0, 1.0))});
    CHECK(ok.code == 0);
}

TEST_CASE("single-level blow-up probe is a valid, inconclusive run") {
    TempDir tmp;
    const std::string cfg = tmp.file("p.cfg", config(kPower2, kZeroPot, 0.0, 1e5));
    const Result r = run({"blowup", "--config", cfg, "--n-ladder", "10"});
    CHECK(r.code == 0);
    const auto doc = cli::Json::parse(r.out);
    CHECK(doc["body"]["blowup"]["verdict"] == "Inconclusive");
}

TEST_CASE("config and usage errors exit 2") {
    TempDir tmp;
    const std::string bad = tmp.file("x.cfg", config(kPower2, kZeroPot, 0.0, 1.0) + "mesh.m = 3\n");
    Result r = run({"solve", "--config", bad});
    CHECK(r.code == 2);
    CHECK(r.err.find("unknown key 'mesh.m'") != std::string::npos);
    CHECK(run({"solve"}).code == 2);
    CHECK(run({"frobnicate", "--config", bad}).code == 2);
    CHECK(run({"solve", "--config", tmp.file("missing.cfg")}).code == 2);
    const std::string good = tmp.file("g.cfg", config(kPower2, kZeroPot, 0.0, 1.0));
    CHECK(run({"solve", "--config", good, "--lambda", "-1"}).code == 2);
    CHECK(run({"sweep", "--config", good, "--lambda-grid", "1,x"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("module errors name the operation and the config digest") {
    TempDir tmp;
    const std::string cfg = tmp.file("lin.cfg", config(kLinear, kZeroPot, 0.0, 1.0));
    const Result r = run({"lambda-star", "--config", cfg});
    CHECK(r.code == 1);
    CHECK(r.err.find("bracket_lambda_star") != std::string::npos);
    CHECK(r.err.find("[config ") != std::string::npos);

    const std::string gate = tmp.file(
        "g.cfg", config(kPower2, "potential.kind = inverse_power\npotential.alpha = 1\npotential.s = 2\n", 100.0, 1.0));
    const Result g = run({"solve", "--config", gate});
    CHECK(g.code == 1);
    CHECK(g.err.find("hypothesis_gate") != std::string::npos);
}

TEST_CASE("reports and CSVs are byte-stable; parallel sweep matches serial") {
    TempDir tmp;
    const std::string cfg = tmp.file("p.cfg", config(kPower2, kZeroPot, 0.0, 1.0));
    const std::vector<std::string> base = {"sweep", "--config", cfg, "--lambda-grid", "1e3,5e4,2e4,1e4"};
    auto with = [&](std::vector<std::string> extra) {
        auto a = base;
        a.insert(a.end(), extra.begin(), extra.end());
        return a;
    };
    REQUIRE(run(with({"--table", tmp.file("a.csv"), "--report", tmp.file("a.json")})).code == 0);
    REQUIRE(run(with({"--table", tmp.file("b.csv"), "--report", tmp.file("b.json")})).code == 0);
    REQUIRE(run(with({"--parallel", "--table", tmp.file("c.csv"), "--report", tmp.file("c.json")})).code == 0);
    CHECK(slurp(tmp.file("a.csv")) == slurp(tmp.file("b.csv")));
    CHECK(slurp(tmp.file("a.csv")) == slurp(tmp.file("c.csv")));
    auto stable = [&](const std::string& name) {
        auto doc = cli::Json::parse(slurp(tmp.file(name)));
        CHECK(doc.contains("footer"));
        doc.erase("footer");
        doc["body"].erase("arguments");
        return doc.dump();
    };
    CHECK(stable("a.json") == stable("b.json"));
    CHECK(stable("a.json") == stable("c.json"));
    const auto doc = cli::Json::parse(slurp(tmp.file("a.json")));
    CHECK(doc["body"]["sweep"][1]["outcome"] == "Diverged");
}

TEST_CASE("lambda-star and stability run clean on the model problem") {
    TempDir tmp;
    const std::string cfg = tmp.file("p.cfg", config(kPower2, kZeroPot, 0.0, 2e4));
    const Result ls = run({"lambda-star", "--config", cfg});
    CHECK(ls.code == 0);
    const auto doc = cli::Json::parse(ls.out);
    CHECK(doc["body"]["bracket"]["relative_width"].get<double>() <= 1e-3);
    CHECK(doc["body"]["lambda_tilde"]["lambda_tilde_plus"].get<double>() >=
          doc["body"]["bracket"]["lambda_plus"].get<double>());
    const Result st = run({"stability", "--config", cfg});
    CHECK(st.code == 0);
    const Result rl = run({"rellich", "--config", cfg, "--meshes", "64,128"});
    CHECK(rl.code == 0);
}

TEST_CASE("CSV helpers") {
    CHECK(cli::format_real(0.1) == "0.10000000000000001");
    CHECK(cli::parse_real_list("1, 2.5,3e2", "--x") == std::vector<double>{1.0, 2.5, 300.0});
    CHECK_THROWS_AS(cli::parse_real_list("", "--x"), ConfigError);
    CHECK_THROWS_AS(cli::parse_real_list("1,,2", "--x"), ConfigError);
}

}
