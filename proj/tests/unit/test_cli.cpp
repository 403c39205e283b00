#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sdiff/cli.hpp"
#include "sdiff/generators.hpp"
#include "sdiff/io.hpp"

using namespace sdiff;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "sdiff_cli_test";
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

std::string write_path3() {
    DiffusionInstance inst;
    inst.network = InfluenceNetwork(3, {{0, 1}, {1, 2}});
    inst.z = 3;
    const auto path = scratch("path3.json");
    save_instance(inst, path);
    return path;
}

}  // namespace

TEST_CASE("solve prints a result object") {
    const auto path = write_path3();
    const Run r = run({"solve", path, "--solver", "dp"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["solver"] == "dp");
    CHECK(j["total_time"] == 3.0);
    CHECK(j["sequence"] == json::array({0, 1, 2}));
    CHECK(j["step_times"].size() == 3);
    CHECK(j.contains("wall_ms"));
    const SolveResult back = result_from_json(j);
    CHECK(back.total_time == 3.0);
}

TEST_CASE("every solver on G(2)") {
    const auto path = scratch("g2.json");
    REQUIRE(run({"generate", "gk", "--k", "2", "--out", path}).code == 0);
    const json meta = read_json_file(scratch("g2.meta.json"));
    CHECK(meta["family"] == "gk");
    CHECK(meta["nodes"] == 6);
    auto total = [&](const std::string& solver) {
        const Run r = run({"solve", path, "--solver", solver});
        REQUIRE(r.code == 0);
        return json::parse(r.out)["total_time"].get<double>();
    };
    CHECK(total("greedy") == doctest::Approx(25.0 / 3.0).epsilon(1e-12));
    CHECK(total("majority") == 8.0);
    CHECK(total("dp") == total("brute"));
    CHECK(total("tw-full") == total("dp"));
    CHECK(total("tw-partial") == total("dp"));
    CHECK(total("decompose-dp") == total("dp"));
}

TEST_CASE("exit codes") {
    const auto path = write_path3();
    CHECK(run({"solve", path, "--solver", "nope"}).code == kExitError);
    CHECK(run({"solve", scratch("missing.json")}).code == kExitError);
    CHECK(run({}).code == kExitError);
    CHECK(run({"--help"}).code == kExitOk);

    DiffusionInstance stuck;
    stuck.network = InfluenceNetwork(3, {{0, 1}, {1, 2, 0.0, 1.0}});
    stuck.z = 3;
    const auto stuck_path = scratch("stuck.json");
    save_instance(stuck, stuck_path);
    const Run inf = run({"solve", stuck_path, "--solver", "dp"});
    CHECK(inf.code == kExitInfeasible);
    CHECK(json::parse(inf.out)["total_time"].is_null());

    const auto big = scratch("g3.json");
    REQUIRE(run({"generate", "gk", "--k", "3", "--out", big}).code == 0);
    const Run refused = run({"solve", big, "--solver", "brute"});
    CHECK(refused.code == kExitGuard);
    const Run forced = run({"solve", big, "--solver", "brute", "--z", "4", "--force"});
    CHECK(forced.code == kExitOk);
    CHECK(forced.err.find("warning") != std::string::npos);
}

TEST_CASE("dp node cap from the environment") {
    const auto big = scratch("g3cap.json");
    REQUIRE(run({"generate", "gk", "--k", "3", "--out", big}).code == 0);
    ::setenv("SD_MAX_DP_NODES", "8", 1);
    CHECK(run({"solve", big, "--solver", "dp"}).code == kExitGuard);
    CHECK(run({"solve", big, "--solver", "dp", "--force"}).code == kExitOk);
    ::setenv("SD_MAX_DP_NODES", "abc", 1);
    CHECK(run({"solve", big, "--solver", "dp"}).code == kExitError);
    ::unsetenv("SD_MAX_DP_NODES");
    CHECK(run({"solve", big, "--solver", "dp"}).code == kExitOk);
}

TEST_CASE("generate families") {
    const Run g3 = run({"generate", "gk", "--k", "3"});
    REQUIRE(g3.code == 0);
    CHECK(json::parse(g3.out)["instance"]["n"] == 12);

    const auto np = scratch("np.json");
    REQUIRE(run({"generate", "np-hard", "--universe", "2", "--sets", "1,2", "--k", "1", "--out", np}).code == 0);
    CHECK(read_json_file(scratch("np.meta.json"))["threshold"] == 5.0);
    const Run solved = run({"solve", np, "--solver", "dp"});
    CHECK(json::parse(solved.out)["total_time"] == 5.0);

    const Run inapprox = run({"generate", "inapprox", "--universe", "2", "--sets", "1;1,2"});
    REQUIRE(inapprox.code == 0);
    CHECK(json::parse(inapprox.out)["meta"]["set_cost"] == 28.0);

    const auto rnd = scratch("rnd.json");
    REQUIRE(run({"generate", "random", "--n", "8", "--seed", "7", "--out", rnd}).code == 0);
    const Run check = run({"validate", rnd});
    CHECK(check.code == 0);
    CHECK(json::parse(check.out)["valid"] == true);
    const auto rnd2 = scratch("rnd2.json");
    REQUIRE(run({"generate", "random", "--n", "8", "--rng-seed", "7", "--out", rnd2}).code == 0);
    CHECK(load_instance(rnd).network == load_instance(rnd2).network);

    CHECK(run({"generate", "np-hard", "--universe", "2", "--sets", "1,3", "--k", "1"}).code == kExitError);
    CHECK(run({"generate", "gk", "--k", "0"}).code == kExitError);
    CHECK(run({"generate", "cube"}).code == kExitError);
}

TEST_CASE("compare table") {
    const Run r = run({"compare", "--k-min", "2", "--k-max", "4"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "k,n,strategy_a,greedy,majority,dp,greedy_ratio,majority_ratio,H_k,greedy_dp_ratio,majority_dp_ratio");
    std::string row;
    std::getline(lines, row);
    CHECK(row.rfind("2,6,8,8.33333333333333", 0) == 0);
    CHECK(row.find(",8,8,") != std::string::npos);
    std::getline(lines, row);
    CHECK(row.rfind("3,12,21,", 0) == 0);
    CHECK(run({"compare", "--k-min", "2", "--k-max", "4"}).out == r.out);
    const Run no_dp = run({"compare", "--k-min", "5", "--k-max", "5", "--no-dp"});
    CHECK(no_dp.out.find("5,30,65,") != std::string::npos);
}

TEST_CASE("simulate") {
    const auto path = write_path3();
    const Run r = run({"simulate", path, "--trials", "20000", "--rng-seed", "3"});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["analytic"] == 3.0);
    CHECK(j["trials"] == 20000);
    CHECK(std::abs(j["mean"].get<double>() - 3.0) <= 4.0 * j["std_error"].get<double>());
    CHECK(run({"simulate", path, "--trials", "20000", "--rng-seed", "3"}).out == r.out);
    CHECK(run({"simulate", path, "--sequence", "0,2,1"}).code == kExitError);
    const Run given = run({"simulate", path, "--sequence", "0,1,2", "--trials", "10"});
    CHECK(given.code == 0);
}

TEST_CASE("decompose, treedec and validate") {
    DiffusionInstance bowtie;
    bowtie.network = InfluenceNetwork(5, {{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}});
    bowtie.z = 5;
    const auto path = scratch("bowtie.json");
    save_instance(bowtie, path);
    const Run d = run({"decompose", path, "--solve"});
    REQUIRE(d.code == 0);
    const json j = json::parse(d.out);
    CHECK(j["cut_nodes"] == json::array({2}));
    CHECK(j["blocks"].size() == 2);
    CHECK(j["blocks"][0]["external"][2] == 2.0);
    CHECK(j.contains("result"));

    const auto td = scratch("bowtie.td");
    REQUIRE(run({"treedec", path, "--out", td}).code == 0);
    const Run v = run({"validate", path, "--td", td});
    CHECK(v.code == 0);
    CHECK(json::parse(v.out)["width"] == 2);
    const Run s = run({"solve", path, "--solver", "tw-full", "--td", td});
    CHECK(s.code == 0);

    const auto bad_td = scratch("bad.json");
    write_text_file(bad_td, R"({"root": 0, "bags": [[0, 1, 2]], "edges": []})");
    const Run bad = run({"validate", path, "--td", bad_td});
    CHECK(bad.code == kExitError);
    CHECK(json::parse(bad.out)["valid"] == false);
}
