#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "qws/graph.hpp"

#ifndef QWS_CLI_PATH
#error "QWS_CLI_PATH must point at the CLI binary"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(QWS_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf{};
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

} // namespace

TEST_CASE("compute on a path file") {
    const auto path = write_temp("qws_path5.txt", qws::serialize_graph(qws::make_path(5),
                                                                       qws::GraphFormat::EdgeList));
    const auto r = run_cli("compute --graph " + path.string());
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j["cbar"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(j["d_K"].get<int>() == 5);
    CHECK(j["connected"].get<bool>());
    CHECK(j["weights"] == "linear");
}

TEST_CASE("compute accepts families and JSON graphs") {
    const auto star = run_cli("compute --family star --d 9");
    CHECK(star.exit_code == 0);
    CHECK(nlohmann::json::parse(star.output)["cbar"].get<double>() ==
          doctest::Approx(0.5).epsilon(1e-12));

    const auto glued = run_cli("compute --family glued-tree --n 2");
    CHECK(glued.exit_code == 0);
    const auto j = nlohmann::json::parse(glued.output);
    CHECK(j["cbar"].get<double>() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(j["d_K"].get<int>() == 5);

    const auto path = write_temp("qws_p3.json", qws::serialize_graph(qws::make_path(3),
                                                                     qws::GraphFormat::Json));
    const auto r = run_cli("compute --graph " + path.string());
    CHECK(r.exit_code == 0);
}

TEST_CASE("compute exit codes") {
    SUBCASE("parse error -> 1") {
        const auto path = write_temp("qws_bad.txt", "2\n0 0\n");
        CHECK(run_cli("compute --graph " + path.string()).exit_code == 1);
        CHECK(run_cli("compute --graph /nonexistent_qws_file").exit_code == 1);
    }
    SUBCASE("disconnected graph -> 2, report still produced") {
        const auto path = write_temp("qws_disc.txt", "4\n0 1\n2 3\n");
        const auto r = run_cli("compute --graph " + path.string());
        CHECK(r.exit_code == 2);
        const auto j = nlohmann::json::parse(r.output);
        CHECK_FALSE(j["connected"].get<bool>());
        CHECK(j["d_K"].get<int>() == 2);
    }
    SUBCASE("invalid flags -> 64") {
        CHECK(run_cli("compute --no-such-flag").exit_code == 64);
        CHECK(run_cli("nonsense-subcommand").exit_code == 64);
    }
    SUBCASE("infeasible parameters -> 65") {
        CHECK(run_cli("compute --family star --d 1").exit_code == 65);
        CHECK(run_cli("generate --family hub-k-regular --d 6 --k 3").exit_code == 65);
        CHECK(run_cli("compute --family nope --d 3").exit_code == 65);
        CHECK(run_cli("compute").exit_code == 65);
        CHECK(run_cli("compute --family path --d 3 --seed-vertex 7").exit_code == 65);
    }
}

TEST_CASE("generate emits parseable graphs") {
    const auto r = run_cli("generate --family glued-tree --n 4");
    CHECK(r.exit_code == 0);
    const qws::Graph g = qws::parse_graph(r.output);
    CHECK(g.dimension() == 46);
    CHECK(g == qws::make_glued_tree(4));

    const auto json = run_cli("generate --family path --d 4 --format json");
    CHECK(json.exit_code == 0);
    CHECK(qws::parse_graph(json.output) == qws::make_path(4));

    const auto dot = run_cli("generate --family path --d 2 --format dot");
    CHECK(dot.exit_code == 0);
    CHECK(dot.output.rfind("graph G {", 0) == 0);
}

TEST_CASE("limiting on the glued tree") {
    const auto r = run_cli("limiting --family glued-tree --n 4");
    CHECK(r.exit_code == 0);
    const auto chi = nlohmann::json::parse(r.output)["chi"];
    REQUIRE(chi.size() == 46);
    CHECK(chi.back().get<double>() == doctest::Approx(0.15).epsilon(1e-9));
}

TEST_CASE("convergence CSV") {
    SUBCASE("empty horizon list: header only") {
        const auto r = run_cli("convergence --family path --d 3");
        CHECK(r.exit_code == 0);
        CHECK(r.output == "T,cbar_T,cbar_infinity\n");
    }
    SUBCASE("long horizon lands on cbar") {
        const auto r = run_cli("convergence --family path --d 3 --t-list 1e6");
        CHECK(r.exit_code == 0);
        const auto line = r.output.substr(r.output.find('\n') + 1);
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const double cbar_T = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        const double cbar_inf = std::stod(line.substr(c2 + 1));
        CHECK(std::abs(cbar_T - 1.0) < 1e-3);
        CHECK(cbar_inf == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("brute-force subcommand") {
    const auto r = run_cli("brute-force --d 4 --direction min");
    CHECK(r.exit_code == 0);
    const auto j = nlohmann::json::parse(r.output);
    CHECK(j["best_cbar"].get<double>() == doctest::Approx(0.375).epsilon(1e-12));
    CHECK(j["edges"].size() == 6);
}

TEST_CASE("sweep matches brute force for D=3..6 and re-runs byte-identically") {
    const std::string flags = "sweep --d-min 3 --d-max 6 --restarts 8 --stale-rounds 60 --seed 0";
    const auto first = run_cli(flags);
    CHECK(first.exit_code == 0);
    CHECK(first.output.rfind("D,cbar,edges\n", 0) == 0);
    const auto again = run_cli(flags);
    CHECK(again.output == first.output);

    // row values equal the exhaustive optimum
    std::istringstream in(first.output);
    std::string line;
    std::getline(in, line); // header
    int expected_d = 3;
    while (std::getline(in, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        CHECK(std::stoi(line.substr(0, c1)) == expected_d);
        const double value = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        const auto exact = run_cli("brute-force --d " + std::to_string(expected_d) +
                                   " --direction max");
        const double best = nlohmann::json::parse(exact.output)["best_cbar"].get<double>();
        CHECK(std::abs(value - best) <= 1e-9);
        ++expected_d;
    }
    CHECK(expected_d == 7);
}

TEST_CASE("sweep reference curves") {
    const auto ref = std::filesystem::temp_directory_path() / "qws_ref.csv";
    std::filesystem::remove(ref);
    const auto r = run_cli("sweep --d-min 3 --d-max 4 --restarts 4 --stale-rounds 25 --reference " +
                           ref.string());
    CHECK(r.exit_code == 0);
    std::ifstream in(ref);
    std::string header, row3;
    std::getline(in, header);
    std::getline(in, row3);
    CHECK(header == "D,cbar_complete,cbar_path,max_fit");
    CHECK(row3 == "3,0.444444444444,1,0.67");
}

TEST_CASE("output goes to --out") {
    const auto path = std::filesystem::temp_directory_path() / "qws_out.csv";
    std::filesystem::remove(path);
    const auto r = run_cli("convergence --family path --d 3 --out " + path.string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.empty());
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "T,cbar_T,cbar_infinity\n");
}
