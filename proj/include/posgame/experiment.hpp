#pragma once

#include "posgame/board.hpp"
#include "posgame/pattern.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace posgame {

// Flat key = value document; list values are whitespace separated.
struct ExperimentConfig {
    std::string pattern_spec;
    std::string board_kind = "complete"; // complete | blowup
    std::vector<int> sizes;              // n for complete boards, s for blow-ups
    std::vector<int> biases;
    std::string waiter = "random";
    std::string client = "random";
    std::vector<std::uint64_t> seeds = {1};
    double alpha = 0.5;
    double c1 = 1.0, c2 = 1.0;
    bool canonical = false; // count canonical copies on blow-up boards
    bool timing = true;     // off => elapsed_ms column written as 0
    bool bias_surrogate = true;
    bool relax = false;
    int workers = 1;
    std::uint64_t master_seed = 0;
    std::string regime; // optional advisory bias window
    std::string out_csv;
    std::string out_json;
};

ExperimentConfig parse_config(const std::string& text);

struct ResultRecord {
    std::string pattern;
    std::string board_desc;
    int n = 0;
    int b = 0;
    std::uint64_t seed = 0;
    std::string waiter;
    std::string client;
    std::uint64_t value = 0;
    double normalized = 0;
    std::uint64_t elapsed_ms = 0;
    bool failed = false;      // strategy/board incompatibility; row omitted from CSV
    std::string note;         // "", "regime-exceeded", "bias-surrogate:<b>", "error:..."
};

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config, std::ostream* err);

// schema v1: pattern,board,n,b,seed,waiter,client,value,normalized,elapsed_ms
void write_csv(std::ostream& out, const std::vector<ResultRecord>& records);
void write_json(std::ostream& out, const std::vector<ResultRecord>& records);

struct ExponentFit {
    double slope_n = 0;
    double slope_b = 0;
    double intercept = 0;
    int fixed_b = 0; // the b the n-slope was fitted at
    int fixed_n = 0; // the n the b-slope was fitted at
    std::vector<std::string> warnings;
};

// least-squares slopes of log(value) on log(n) and log(b+1); zero values are
// excluded with a warning; throws when fewer than 3 distinct support points
// exist on both axes
ExponentFit fit_exponents(const std::vector<ResultRecord>& records);

// admissible bias range of a scripted waiter on this board, when it has one
std::optional<std::pair<int, int>> admissible_bias_range(const std::string& waiter,
                                                         const Board& board,
                                                         const Pattern& pattern);

} // namespace posgame
