#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "app/runner.hpp"
#include "doctest.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("ineqforge_test_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        const fs::path p = path / name;
        std::ofstream(p, std::ios::binary) << content;
        return p.string();
    }
    std::string str(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(const std::string& config, const std::string& out_dir,
        std::string* err_text = nullptr, const std::string& matrix = "") {
    ineq::app::RunOptions opt;
    opt.out_dir = out_dir;
    opt.workers = 1;
    opt.distance_matrix = matrix;
    std::ostringstream out, err;
    const int rc = ineq::app::run_experiment(config, opt, out, err);
    if (err_text) *err_text = err.str();
    return rc;
}

const char* kQuickBsy =
    R"({"experiment":"bsy-1d","x_cells":512,"t_cells":256,"twosided":false,
        "rel_tol":0.10,"sweep":{"lo":0.05,"hi":20,"points":12}})";

}  // namespace

TEST_CASE("constants report the frozen oracle values") {
    std::ostringstream text;
    CHECK(ineq::app::print_constants(false, text) == ineq::app::kExitPass);
    CHECK(text.str().find("3.14159265359") != std::string::npos);  // k(2,2)
    CHECK(text.str().find("kappa_N") != std::string::npos);

    std::ostringstream machine;
    CHECK(ineq::app::print_constants(true, machine) == ineq::app::kExitPass);
    const json j = json::parse(machine.str());
    REQUIRE(j.at("k").size() == 9);
    REQUIRE(j.at("kappa").size() == 3);
    for (const auto& row : j.at("k")) {
        if (row.at("N").get<int>() == 1)  // k(p,1) = 2 for every p
            CHECK(row.at("value").get<double>() == doctest::Approx(2.0).epsilon(1e-12));
        if (row.at("p").get<double>() == 2.0 && row.at("N").get<int>() == 2)
            CHECK(row.at("value").get<double>() ==
                  doctest::Approx(3.14159265358979).epsilon(1e-10));
    }
    CHECK(j.at("kappa")[0].at("value").get<double>() ==
          doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("a small pair sweep passes and reports deterministically") {
    TempDir tmp("bsy1d");
    const std::string cfg = tmp.file("quick.json", kQuickBsy);

    CHECK(run(cfg, tmp.str("a")) == ineq::app::kExitPass);
    CHECK(run(cfg, tmp.str("b")) == ineq::app::kExitPass);

    const std::string csv_a = slurp(tmp.str("a") + "/bsy-1d.csv");
    const std::string csv_b = slurp(tmp.str("b") + "/bsy-1d.csv");
    CHECK(!csv_a.empty());
    CHECK(csv_a == csv_b);  // bitwise reproducible
    CHECK(csv_a.substr(0, 15) == "param,value,se\n");
    CHECK(csv_a.find("\r") == std::string::npos);

    json a = json::parse(slurp(tmp.str("a") + "/bsy-1d.json"));
    json b = json::parse(slurp(tmp.str("b") + "/bsy-1d.json"));
    a.erase("wall_time_s");
    b.erase("wall_time_s");
    CHECK(a == b);

    CHECK(a.at("experiment") == "bsy-1d");
    CHECK(a.at("converged").get<bool>());
    CHECK(a.at("passed").get<bool>());
    CHECK(a.at("rel_error").get<double>() < 0.05);
    CHECK(a.at("measured").get<double>() ==
          doctest::Approx(1.2533141373155).epsilon(0.05));
    CHECK(a.at("csv") == "bsy-1d.csv");
    CHECK(a.at("config").at("seed").get<long long>() == 20240816);
}

TEST_CASE("configs that violate preconditions exit with the usage code") {
    TempDir tmp("usage");
    std::string err;

    const std::string low_p =
        tmp.file("p.json", R"({"experiment":"bsy-1d","p":0.5})");
    CHECK(run(low_p, tmp.str("o"), &err) == ineq::app::kExitUsage);
    CHECK(err.find("p >= 1") != std::string::npos);

    const std::string unknown =
        tmp.file("u.json", R"({"experiment":"frobnicate"})");
    CHECK(run(unknown, tmp.str("o"), &err) == ineq::app::kExitUsage);
    CHECK(err.find("unknown experiment") != std::string::npos);

    const std::string stray =
        tmp.file("k.json", R"({"experiment":"heat","bogus_knob":3})");
    CHECK(run(stray, tmp.str("o"), &err) == ineq::app::kExitUsage);
    CHECK(err.find("bogus_knob") != std::string::npos);

    const std::string bad_sweep = tmp.file(
        "s.json", R"({"experiment":"gu-yung","sweep":{"lo":5,"hi":1,"points":8}})");
    CHECK(run(bad_sweep, tmp.str("o"), &err) == ineq::app::kExitUsage);

    const std::string not_json = tmp.file("n.json", "{ not json");
    CHECK(run(not_json, tmp.str("o"), &err) == ineq::app::kExitUsage);

    CHECK(run(tmp.str("missing.json"), tmp.str("o"), &err) ==
          ineq::app::kExitUsage);
}

TEST_CASE("an underresolved spectral grid exits with the numeric code") {
    TempDir tmp("numeric");
    std::string err;
    const std::string cfg = tmp.file(
        "blow.json",
        R"({"experiment":"heat","function":"modulated_gaussian",
            "x_cells":256,"t_cells":64,"rel_tol":0.05})");
    CHECK(run(cfg, tmp.str("o"), &err) == ineq::app::kExitNumeric);
    CHECK(err.find("numeric failure") != std::string::npos);
}

TEST_CASE("metric suites pass and honor the seed override") {
    TempDir tmp("suites");
    const std::string garsia =
        tmp.file("g.json", R"({"experiment":"garsia-suite","trials":5})");
    CHECK(run(garsia, tmp.str("o")) == ineq::app::kExitPass);
    json rep = json::parse(slurp(tmp.str("o") + "/garsia-suite.json"));
    CHECK(rep.at("measured").get<double>() == 1.0);
    CHECK(rep.at("config").at("seed").get<long long>() == 20240816);

    ::setenv("INEQFORGE_SEED", "123", 1);
    const int rc = run(garsia, tmp.str("seeded"));
    ::unsetenv("INEQFORGE_SEED");
    CHECK(rc == ineq::app::kExitPass);
    rep = json::parse(slurp(tmp.str("seeded") + "/garsia-suite.json"));
    CHECK(rep.at("config").at("seed").get<long long>() == 123);

    const std::string mixed = tmp.file(
        "m.json", R"({"experiment":"mixed-norm-suite","trials":200})");
    CHECK(run(mixed, tmp.str("o")) == ineq::app::kExitPass);
    rep = json::parse(slurp(tmp.str("o") + "/mixed-norm-suite.json"));
    CHECK(rep.at("measured").get<double>() == 1.0);
    CHECK(rep.at("extra").at("worst_ratio").get<double>() >= 1.0 - 1e-12);
}

TEST_CASE("file-backed clouds feed the metric suites") {
    TempDir tmp("files");
    const std::string cloud = tmp.file(
        "cloud.csv", "0.0,0.0,1.0\n1.0,0.0,2.0\n0.0,1.0,1.5\n0.5,0.5,1.0\n");
    const std::string cfg = tmp.file(
        "g.json", std::string(R"({"experiment":"garsia-suite","cloud_csv":")") +
                      cloud + "\"}");
    CHECK(run(cfg, tmp.str("o")) == ineq::app::kExitPass);
    const std::string csv = slurp(tmp.str("o") + "/garsia-suite.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);  // header + one cloud

    const std::string matrix =
        tmp.file("dm.txt", "0,1,2\n1,0,1.5\n2,1.5,0\n");
    const std::string cover =
        tmp.file("c.json", R"({"experiment":"cover-suite","trials":3})");
    CHECK(run(cover, tmp.str("o"), nullptr, matrix) == ineq::app::kExitPass);

    std::string err;
    const std::string ragged = tmp.file("bad.txt", "0,1\n1,0,3\n");
    CHECK(run(cover, tmp.str("o"), &err, ragged) == ineq::app::kExitUsage);
    CHECK(err.find("square") != std::string::npos);
}

TEST_CASE("report consolidation aggregates verdicts") {
    TempDir tmp("report");
    std::ostringstream out, err;
    CHECK(ineq::app::consolidate_reports({}, out, err) == ineq::app::kExitPass);
    CHECK(out.str().find("no reports") != std::string::npos);

    const std::string pass = tmp.file("pass.json",
        R"({"experiment":"heat","measured":1.0,"target":1.0,"rel_error":0.0,"passed":true})");
    const std::string fail = tmp.file("fail.json",
        R"({"experiment":"bn-bounds","measured":0.1,"target":5.0,"rel_error":0.98,"passed":false})");

    out.str("");
    CHECK(ineq::app::consolidate_reports({pass}, out, err) == ineq::app::kExitPass);
    CHECK(out.str().find("all reports pass") != std::string::npos);

    out.str("");
    CHECK(ineq::app::consolidate_reports({pass, fail}, out, err) ==
          ineq::app::kExitToleranceFail);
    CHECK(out.str().find("FAIL") != std::string::npos);

    CHECK(ineq::app::consolidate_reports({tmp.str("nope.json")}, out, err) ==
          ineq::app::kExitUsage);

    const std::string shallow = tmp.file("shallow.json", R"({"hello":1})");
    CHECK(ineq::app::consolidate_reports({shallow}, out, err) ==
          ineq::app::kExitUsage);
}

TEST_CASE("registry names are exposed for the CLI") {
    const auto names = ineq::app::experiment_names();
    CHECK(names.size() == 18);
    CHECK(std::find(names.begin(), names.end(), "bsy-1d") != names.end());
    CHECK(std::find(names.begin(), names.end(), "mixed-norm-suite") != names.end());
}
