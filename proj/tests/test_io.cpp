#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gidag/io.hpp"
#include "testutil.hpp"

using namespace gidag;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("gidag_io_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

MultiEnvDataset ingest_string(const std::string& csv, std::vector<std::string>* warnings = nullptr) {
    std::istringstream in(csv);
    return ingest(in, "test.csv", warnings);
}

}  // namespace

TEST_CASE("ingest well-formed data") {
    const auto data = ingest_string(
        "context,x1,x2\n"
        "1,0.5,1.5\n"
        "2,-1.0,2.0\n"
        "1,0.25,-0.75\n");
    CHECK(data.q() == 2);
    CHECK(data.context_count() == 2);
    CHECK(data.rows(1) == 2);
    CHECK(data.rows(2) == 1);
    CHECK(data.blocks[0](1, 1) == -0.75);
    CHECK(data.blocks[1](0, 0) == -1.0);
}

TEST_CASE("ingest errors") {
    CHECK_THROWS_AS(ingest_string("x1,x2\n1,2\n"), DataError);

    // Missing context 1.
    CHECK_THROWS_AS(ingest_string("context,x1\n2,0.5\n"), DataError);

    // Non-numeric cell names row and column.
    try {
        ingest_string("context,x1,x2\n1,0.5,oops\n");
        FAIL("expected DataError");
    } catch (const DataError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("row 1") != std::string::npos);
        CHECK(msg.find("column 3") != std::string::npos);
    }

    // Ragged row.
    CHECK_THROWS_AS(ingest_string("context,x1,x2\n1,0.5\n"), DataError);

    // Fractional context label.
    CHECK_THROWS_AS(ingest_string("context,x1\n1.5,0.5\n"), DataError);
}

TEST_CASE("ingest accepts empty intermediate contexts with a warning") {
    std::vector<std::string> warnings;
    const auto data = ingest_string(
        "context,x1\n"
        "1,0.5\n"
        "3,1.5\n",
        &warnings);
    CHECK(data.context_count() == 3);
    CHECK(data.rows(2) == 0);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("context 2") != std::string::npos);
}

TEST_CASE("dataset CSV round trip") {
    TempDir tmp;
    const GroundTruth t = gen_truth(3, 2, 5);
    const MultiEnvDataset data = simulate_dataset(t, {7, 4}, 5);
    write_dataset_csv(tmp.path / "d.csv", data);
    const MultiEnvDataset back = ingest(tmp.path / "d.csv");
    REQUIRE(back.q() == 3);
    REQUIRE(back.context_count() == 2);
    for (int k = 0; k < 2; ++k) CHECK(back.blocks[k].isApprox(data.blocks[k], 1e-15));
}

TEST_CASE("edge list round trip and 1-based indexing") {
    TempDir tmp;
    const Dag d = Dag::from_edges(4, {{0, 1}, {2, 3}});
    write_edge_list(tmp.path / "g.edges", d);
    std::ifstream in(tmp.path / "g.edges");
    std::string first;
    std::getline(in, first);
    CHECK(first == "1 2");
    CHECK(read_edge_list(tmp.path / "g.edges", 4) == d);

    std::ofstream bad(tmp.path / "bad.edges");
    bad << "1 9\n";
    bad.close();
    CHECK_THROWS_AS(read_edge_list(tmp.path / "bad.edges", 4), DataError);
}

TEST_CASE("intervention JSON round trip") {
    InterventionCollection iv(3, 4);
    iv.context(2).set_target(2, Bitset(4, {0, 1}));
    iv.context(3).set_target(0, Bitset(4, {}));
    iv.context(3).set_target(3, Bitset(4, {2}));

    const auto j = interventions_to_json(iv);
    CHECK(j.at("K") == 3);
    const auto back = interventions_from_json(j, 4);
    CHECK(back == iv);

    CHECK_THROWS_AS(interventions_from_json(nlohmann::json{{"K", 2}}, 4), DataError);
    // Target out of range.
    auto broken = j;
    broken["contexts"][1]["targets"].push_back(9);
    CHECK_THROWS_AS(interventions_from_json(broken, 4), DataError);
}

TEST_CASE("truth JSON round trip") {
    TempDir tmp;
    const GroundTruth t = gen_truth(4, 2, 9);
    write_truth(tmp.path / "truth.json", t);
    const GroundTruth back = read_truth(tmp.path / "truth.json");
    CHECK(back.dag == t.dag);
    CHECK(back.interventions == t.interventions);
    REQUIRE(back.params.context_count() == 2);
    for (int k = 0; k < 2; ++k) {
        CHECK(back.params.coef[k].isApprox(t.params.coef[k], 1e-15));
        CHECK(back.params.cond_var[k].isApprox(t.params.cond_var[k], 1e-15));
    }
}

TEST_CASE("run config parsing and defaults") {
    const RunConfig defaults;
    CHECK(defaults.effective_iterations(10) == 30000);
    CHECK(defaults.effective_burn_in(10) == 10000);
    const Hyperparams h = defaults.hyperparams(3);
    CHECK(h.wishart_a == 3.0);
    CHECK(h.wishart_u.isApprox(Eigen::MatrixXd::Identity(3, 3)));

    const auto cfg = config_from_json(nlohmann::json{
        {"a_phi", 2.0}, {"wishart_a", 5.5}, {"iters", 777}, {"seed", 12}, {"chains", 3}});
    CHECK(cfg.prior.a_phi == 2.0);
    CHECK(cfg.effective_iterations(10) == 777);
    CHECK(cfg.hyperparams(4).wishart_a == 5.5);
    CHECK(cfg.chains == 3);

    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"a_phi", -1.0}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"wishart_a", "banana"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"chains", 0}}), ConfigError);

    // "q" keeps the default coupling to the data dimension.
    const auto cfg_q = config_from_json(nlohmann::json{{"wishart_a", "q"}});
    CHECK(cfg_q.hyperparams(7).wishart_a == 7.0);
}

TEST_CASE("matrix CSV round trip with fixed precision") {
    TempDir tmp;
    Eigen::MatrixXd m(2, 3);
    m << 0.123456789, 1.0, -2.5, 0.0, 3.25, -0.000001;
    write_matrix_csv(tmp.path / "m.csv", m, 6);
    const Eigen::MatrixXd back = read_matrix_csv(tmp.path / "m.csv");
    REQUIRE(back.rows() == 2);
    REQUIRE(back.cols() == 3);
    CHECK(back(0, 0) == doctest::Approx(0.123457).epsilon(1e-9));
    CHECK(back(1, 1) == 3.25);
}

TEST_CASE("content hash is stable and content sensitive") {
    TempDir tmp;
    std::ofstream(tmp.path / "a.txt") << "hello";
    std::ofstream(tmp.path / "b.txt") << "hello";
    std::ofstream(tmp.path / "c.txt") << "hellp";
    CHECK(content_hash_hex(tmp.path / "a.txt") == content_hash_hex(tmp.path / "b.txt"));
    CHECK(content_hash_hex(tmp.path / "a.txt") != content_hash_hex(tmp.path / "c.txt"));
    CHECK_THROWS_AS(content_hash_hex(tmp.path / "missing.txt"), DataError);
}
