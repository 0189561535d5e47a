#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "posgame/counting.hpp"
#include "posgame/experiment.hpp"

#include <cmath>
#include <sstream>

using namespace posgame;

namespace {

    const char* kSmallConfig = R"(
# tiny matchup
pattern = p3
board = complete
n = 12 16
b = 1 2
waiter = random
client = greedy-client
seeds = 1 2
timing = off
)";

} // namespace

TEST_CASE("config parsing")
{
    ExperimentConfig c = parse_config(kSmallConfig);
    CHECK(c.pattern_spec == "p3");
    CHECK(c.sizes == std::vector<int>{12, 16});
    CHECK(c.biases == std::vector<int>{1, 2});
    CHECK(c.seeds == std::vector<std::uint64_t>{1, 2});
    CHECK_FALSE(c.timing);

    CHECK_THROWS_AS(parse_config("pattern = p3\n"), std::invalid_argument); // empty sweep
    CHECK_THROWS_AS(parse_config("pattern = p3\nn = 4\nb = 1\nseeds = 1 1\n"),
                    std::invalid_argument); // duplicate seeds
    CHECK_THROWS_AS(parse_config("nonsense = 1\n"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config("pattern p3\n"), std::invalid_argument);
}

TEST_CASE("runs are deterministic and CSV is byte-stable")
{
    ExperimentConfig c = parse_config(kSmallConfig);
    auto r1 = run_experiment(c, nullptr);
    auto r2 = run_experiment(c, nullptr);
    std::ostringstream csv1, csv2;
    write_csv(csv1, r1);
    write_csv(csv2, r2);
    CHECK(csv1.str() == csv2.str());
    CHECK(r1.size() == 8); // 2 n x 2 b x 2 seeds
    // records appear in config order
    CHECK(r1[0].n == 12);
    CHECK(r1.back().n == 16);

    // a different master seed changes the outcomes
    ExperimentConfig c2 = c;
    c2.master_seed = 7;
    auto r3 = run_experiment(c2, nullptr);
    std::ostringstream csv3;
    write_csv(csv3, r3);
    CHECK(csv1.str() != csv3.str());

    // worker count must not affect results
    ExperimentConfig c4 = c;
    c4.workers = 2;
    auto r4 = run_experiment(c4, nullptr);
    std::ostringstream csv4;
    write_csv(csv4, r4);
    CHECK(csv1.str() == csv4.str());
}

TEST_CASE("json mirror carries the same rows")
{
    ExperimentConfig c = parse_config(kSmallConfig);
    auto r = run_experiment(c, nullptr);
    std::ostringstream json;
    write_json(json, r);
    CHECK(json.str().find("\"pattern\": \"p3\"") != std::string::npos);
    CHECK(json.str().find("\"value\"") != std::string::npos);
}

TEST_CASE("exponent fits recover exact power laws")
{
    std::vector<ResultRecord> recs;
    for (int n : {8, 16, 32, 64})
        for (int b : {1, 2, 3}) {
            ResultRecord r;
            r.n = n;
            r.b = b;
            r.value = static_cast<std::uint64_t>(std::pow(n, 3) / std::pow(b + 1, 3));
            recs.push_back(r);
        }
    ExponentFit fit = fit_exponents(recs);
    CHECK(fit.slope_n == doctest::Approx(3.0).epsilon(0.01));
    CHECK(fit.slope_b == doctest::Approx(-3.0).epsilon(0.05));

    // pure n-law at one b
    std::vector<ResultRecord> nonly;
    for (int n : {8, 16, 32}) {
        ResultRecord r;
        r.n = n;
        r.b = 1;
        r.value = static_cast<std::uint64_t>(std::pow(n, 3));
        nonly.push_back(r);
    }
    CHECK_THROWS_AS(fit_exponents(nonly), std::invalid_argument); // no b support

    // zero values are excluded with a warning
    recs[0].value = 0;
    ExponentFit fit2 = fit_exponents(recs);
    CHECK_FALSE(fit2.warnings.empty());
}

TEST_CASE("bias surrogate substitutes the nearest admissible bias")
{
    // tree-sparse at b < n runs at b = n and flags the record
    ExperimentConfig c;
    c.pattern_spec = "p3";
    c.board_kind = "complete";
    c.sizes = {16};
    c.biases = {8}; // below the sparse window's lower edge n = 16
    c.waiter = "tree-sparse";
    c.client = "random";
    c.seeds = {1};
    c.timing = false;
    std::ostringstream err;
    auto recs = run_experiment(c, &err);
    REQUIRE(recs.size() == 1);
    CHECK_FALSE(recs[0].failed);
    CHECK(recs[0].note.rfind("bias-surrogate", 0) == 0);
    CHECK(err.str().find("surrogate") != std::string::npos);
}

TEST_CASE("incompatible cells are reported and the run continues")
{
    ExperimentConfig c;
    c.pattern_spec = "k3";
    c.board_kind = "complete";
    c.sizes = {12};
    c.biases = {1};
    c.waiter = "triangle"; // needs a blow-up board
    c.client = "random";
    c.seeds = {1};
    c.timing = false;
    std::ostringstream err;
    auto recs = run_experiment(c, &err);
    REQUIRE(recs.size() == 1);
    CHECK(recs[0].failed);
    std::ostringstream csv;
    write_csv(csv, recs);
    CHECK(csv.str() == "pattern,board,n,b,seed,waiter,client,value,normalized,elapsed_ms\n");
}

TEST_CASE("potential-client records respect the potential envelope")
{
    ExperimentConfig c;
    c.pattern_spec = "k3";
    c.board_kind = "complete";
    c.sizes = {7, 8};
    c.biases = {1, 2};
    c.waiter = "random";
    c.client = "potential-client";
    c.seeds = {1, 2};
    c.timing = false;
    auto recs = run_experiment(c, nullptr);
    for (const auto& r : recs) {
        REQUIRE_FALSE(r.failed);
        Board board = Board::complete(r.n);
        EdgeSet full(board.element_count);
        for (Element e = 0; e < board.element_count; ++e)
            full.set(e);
        double copies = static_cast<double>(
            count_copies(board, full, pattern_from_spec("k3")));
        double phi0 = copies * std::pow(static_cast<double>(r.b + 1), -3.0);
        CHECK(static_cast<double>(r.value) <= std::floor(phi0));
    }
}

TEST_CASE("blow-up sweeps count canonical copies")
{
    ExperimentConfig c;
    c.pattern_spec = "k3";
    c.board_kind = "blowup";
    c.sizes = {8};
    c.biases = {1};
    c.waiter = "triangle";
    c.client = "greedy-client";
    c.seeds = {1};
    c.canonical = true;
    c.timing = false;
    auto recs = run_experiment(c, nullptr);
    REQUIRE(recs.size() == 1);
    CHECK_FALSE(recs[0].failed);
    CHECK(recs[0].value > 0);
    CHECK(recs[0].normalized > 0);
}
