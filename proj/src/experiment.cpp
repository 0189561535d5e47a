#include "posgame/experiment.hpp"

#include "posgame/counting.hpp"
#include "posgame/engine.hpp"
#include "posgame/invariants.hpp"
#include "posgame/rng.hpp"
#include "posgame/strategies.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

namespace posgame {

namespace {

    bool parse_bool(const std::string& v)
    {
        if (v == "on" || v == "true" || v == "1")
            return true;
        if (v == "off" || v == "false" || v == "0")
            return false;
        throw std::invalid_argument("config: expected on/off, got '" + v + "'");
    }

} // namespace

ExperimentConfig parse_config(const std::string& text)
{
    ExperimentConfig c;
    std::istringstream in(text);
    std::string line;
    bool saw_seeds = false;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string key, eq;
        if (!(ls >> key))
            continue;
        if (!(ls >> eq) || eq != "=")
            throw std::invalid_argument("config: expected 'key = values', got '" + line + "'");
        std::vector<std::string> vals;
        std::string v;
        while (ls >> v)
            vals.push_back(v);
        auto one = [&]() -> const std::string& {
            if (vals.size() != 1)
                throw std::invalid_argument("config: key '" + key + "' wants one value");
            return vals[0];
        };
        if (key == "pattern")
            c.pattern_spec = one();
        else if (key == "board")
            c.board_kind = one();
        else if (key == "n" || key == "s") {
            for (auto& s : vals)
                c.sizes.push_back(std::stoi(s));
        } else if (key == "b") {
            for (auto& s : vals)
                c.biases.push_back(std::stoi(s));
        } else if (key == "waiter")
            c.waiter = one();
        else if (key == "client")
            c.client = one();
        else if (key == "seeds") {
            c.seeds.clear();
            saw_seeds = true;
            for (auto& s : vals)
                c.seeds.push_back(std::stoull(s));
        } else if (key == "alpha")
            c.alpha = std::stod(one());
        else if (key == "c1")
            c.c1 = std::stod(one());
        else if (key == "c2")
            c.c2 = std::stod(one());
        else if (key == "canonical")
            c.canonical = parse_bool(one());
        else if (key == "timing")
            c.timing = parse_bool(one());
        else if (key == "bias_surrogate")
            c.bias_surrogate = parse_bool(one());
        else if (key == "relax")
            c.relax = parse_bool(one());
        else if (key == "workers")
            c.workers = std::stoi(one());
        else if (key == "master_seed")
            c.master_seed = std::stoull(one());
        else if (key == "regime")
            c.regime = one();
        else if (key == "out")
            c.out_csv = one();
        else if (key == "json_out")
            c.out_json = one();
        else
            throw std::invalid_argument("config: unknown key '" + key + "'");
    }
    if (c.pattern_spec.empty())
        throw std::invalid_argument("config: missing pattern");
    if (c.sizes.empty() || c.biases.empty())
        throw std::invalid_argument("config: empty n/b sweep");
    if (c.seeds.empty() || (saw_seeds && c.seeds.empty()))
        throw std::invalid_argument("config: empty seed list");
    for (size_t i = 0; i < c.seeds.size(); ++i)
        for (size_t j = i + 1; j < c.seeds.size(); ++j)
            if (c.seeds[i] == c.seeds[j])
                throw std::invalid_argument("config: duplicate seed");
    return c;
}

std::optional<std::pair<int, int>> admissible_bias_range(const std::string& waiter,
                                                         const Board& board,
                                                         const Pattern& pattern)
{
    const int n = board.vertex_count;
    if (waiter == "tree-dense") {
        int k = pattern.vertex_count;
        return std::make_pair(1, n >> std::min(k + 6, 30));
    }
    if (waiter == "tree-sparse") {
        int k = pattern.vertex_count;
        if (k < 2)
            return std::make_pair(1, n);
        double upper = std::pow(n, static_cast<double>(k) / (k - 1)) / std::pow(2.0, k + 6);
        return std::make_pair(n, static_cast<int>(upper));
    }
    if (waiter == "triangle")
        return std::make_pair(1, board.part_size - 1);
    return std::nullopt;
}

namespace {

    struct Cell {
        int n;
        int b;
        std::uint64_t seed;
        std::size_t index;
    };

    ResultRecord run_cell(const ExperimentConfig& cfg, const Pattern& pattern, const Cell& cell,
                          std::ostream* err)
    {
        ResultRecord rec;
        rec.pattern = cfg.pattern_spec;
        rec.n = cell.n;
        rec.b = cell.b;
        rec.seed = cell.seed;
        rec.waiter = cfg.waiter;
        rec.client = cfg.client;

        Board board = cfg.board_kind == "blowup"
            ? Board::blowup(pattern, cell.n, cfg.pattern_spec)
            : Board::complete(cell.n);
        rec.board_desc = board.descriptor();

        int run_b = cell.b;
        bool relax_run = cfg.relax;
        if (auto range = admissible_bias_range(cfg.waiter, board, pattern); range && !cfg.relax) {
            if (cell.b > range->second && cell.b >= range->first) {
                rec.failed = true;
                rec.note = "error: bias above the admissible window, no surrogate exists";
                if (err)
                    *err << "cell n=" << cell.n << " b=" << cell.b << ": " << rec.note << "\n";
                return rec;
            }
            if (cell.b < range->first && cfg.bias_surrogate) {
                // bias monotonicity: the value at the window's lower edge is a
                // lower bound for the requested bias
                run_b = range->first;
                relax_run = true; // the edge itself may be outside a desk-scale window
                rec.note = "bias-surrogate:" + std::to_string(run_b);
                if (err)
                    *err << "cell n=" << cell.n << " b=" << cell.b
                         << ": running surrogate at b=" << run_b << "\n";
            }
        }

        if (!cfg.regime.empty() && err) {
            try {
                auto w = bias_window(pattern, cell.n, regime_from_name(cfg.regime), cfg.alpha,
                                     cfg.c1, cfg.c2);
                if (cell.b + 1 < w.lower || cell.b + 1 > w.upper)
                    *err << "cell n=" << cell.n << " b=" << cell.b << ": regime-exceeded\n";
            } catch (const std::exception& ex) {
                *err << "cell n=" << cell.n << " b=" << cell.b << ": window unavailable ("
                     << ex.what() << ")\n";
            }
        }

        const std::uint64_t cell_seed =
            mix_seed(cfg.master_seed, mix_seed(cell.seed, cell.index));
        WinningFamily family = WinningFamily::copies_of(pattern, cfg.canonical);
        StrategyContext ctx;
        ctx.board = &board;
        ctx.bias = run_b;
        ctx.family = &family;
        ctx.alpha = cfg.alpha;
        ctx.relax_preconditions = relax_run;

        auto t0 = std::chrono::steady_clock::now();
        try {
            ctx.seed = mix_seed(cell_seed, 1);
            auto waiter = make_waiter(cfg.waiter, ctx);
            ctx.seed = mix_seed(cell_seed, 2);
            auto client = make_client(cfg.client, ctx);
            GameState final = play(board, run_b, *waiter, *client);
            rec.value = game_value(final, family);
        } catch (const StrategyError&) {
            throw; // illegal strategy behaviour aborts the whole run
        } catch (const std::exception& ex) {
            rec.failed = true;
            rec.note = std::string("error: ") + ex.what();
            if (err)
                *err << "cell n=" << cell.n << " b=" << cell.b << ": " << rec.note << "\n";
            return rec;
        }
        auto t1 = std::chrono::steady_clock::now();
        if (cfg.timing)
            rec.elapsed_ms = static_cast<std::uint64_t>(
                std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count());

        const double denom = std::pow(static_cast<double>(cell.n), pattern.vertex_count)
            * std::pow(static_cast<double>(cell.b + 1), -pattern.edge_count());
        rec.normalized = denom > 0 ? static_cast<double>(rec.value) / denom : 0.0;
        return rec;
    }

} // namespace

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg, std::ostream* err)
{
    Pattern pattern = pattern_from_spec(cfg.pattern_spec);
    std::vector<Cell> cells;
    std::size_t index = 0;
    for (int n : cfg.sizes)
        for (int b : cfg.biases)
            for (std::uint64_t seed : cfg.seeds)
                cells.push_back({n, b, seed, index++});

    std::vector<ResultRecord> records(cells.size());
    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        for (const Cell& cell : cells)
            records[cell.index] = run_cell(cfg, pattern, cell, err);
        return records;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= cells.size())
                    return;
                records[cells[i].index] = run_cell(cfg, pattern, cells[i], nullptr);
            }
        });
    for (auto& t : pool)
        t.join();
    if (err)
        for (const auto& r : records)
            if (!r.note.empty())
                *err << "cell n=" << r.n << " b=" << r.b << ": " << r.note << "\n";
    return records;
}

void write_csv(std::ostream& out, const std::vector<ResultRecord>& records)
{
    out << "pattern,board,n,b,seed,waiter,client,value,normalized,elapsed_ms\n";
    char buf[64];
    for (const auto& r : records) {
        if (r.failed)
            continue;
        std::snprintf(buf, sizeof buf, "%.9g", r.normalized);
        out << r.pattern << "," << r.board_desc << "," << r.n << "," << r.b << "," << r.seed
            << "," << r.waiter << "," << r.client << "," << r.value << "," << buf << ","
            << r.elapsed_ms << "\n";
    }
}

void write_json(std::ostream& out, const std::vector<ResultRecord>& records)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        if (r.failed)
            continue;
        arr.push_back({{"pattern", r.pattern},
                       {"board", r.board_desc},
                       {"n", r.n},
                       {"b", r.b},
                       {"seed", r.seed},
                       {"waiter", r.waiter},
                       {"client", r.client},
                       {"value", r.value},
                       {"normalized", r.normalized},
                       {"elapsed_ms", r.elapsed_ms}});
    }
    out << arr.dump(2) << "\n";
}

namespace {

    struct Line {
        double slope = 0, intercept = 0;
    };

    Line least_squares(const std::vector<std::pair<double, double>>& pts)
    {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double m = static_cast<double>(pts.size());
        double denom = m * sxx - sx * sx;
        Line l;
        l.slope = (m * sxy - sx * sy) / denom;
        l.intercept = (sy - l.slope * sx) / m;
        return l;
    }

} // namespace

ExponentFit fit_exponents(const std::vector<ResultRecord>& records)
{
    ExponentFit fit;
    std::vector<const ResultRecord*> usable;
    for (const auto& r : records) {
        if (r.failed)
            continue;
        if (r.value == 0) {
            fit.warnings.push_back("zero value at n=" + std::to_string(r.n) + " b="
                                   + std::to_string(r.b) + " excluded");
            continue;
        }
        usable.push_back(&r);
    }

    auto distinct_count = [&](auto proj, auto pred) {
        std::vector<int> seen;
        for (auto* r : usable)
            if (pred(*r)) {
                int v = proj(*r);
                if (std::find(seen.begin(), seen.end(), v) == seen.end())
                    seen.push_back(v);
            }
        return seen;
    };

    // slope_n at the b with the most distinct n values (ties: smallest b)
    std::vector<int> bs = distinct_count([](const ResultRecord& r) { return r.b; },
                                         [](const ResultRecord&) { return true; });
    std::sort(bs.begin(), bs.end());
    int best_b = 0;
    size_t best_b_support = 0;
    for (int b : bs) {
        auto ns = distinct_count([](const ResultRecord& r) { return r.n; },
                                 [&](const ResultRecord& r) { return r.b == b; });
        if (ns.size() > best_b_support) {
            best_b_support = ns.size();
            best_b = b;
        }
    }
    if (best_b_support < 3)
        throw std::invalid_argument("fit_exponents: fewer than 3 distinct n at any fixed b");
    std::vector<std::pair<double, double>> pts;
    for (auto* r : usable)
        if (r->b == best_b)
            pts.push_back({std::log(static_cast<double>(r->n)),
                           std::log(static_cast<double>(r->value))});
    Line ln = least_squares(pts);
    fit.slope_n = ln.slope;
    fit.intercept = ln.intercept;
    fit.fixed_b = best_b;

    // slope_b at the n with the most distinct b values (ties: largest n)
    std::vector<int> ns = distinct_count([](const ResultRecord& r) { return r.n; },
                                         [](const ResultRecord&) { return true; });
    std::sort(ns.begin(), ns.end(), std::greater<>());
    int best_n = 0;
    size_t best_n_support = 0;
    for (int n : ns) {
        auto bs_here = distinct_count([](const ResultRecord& r) { return r.b; },
                                      [&](const ResultRecord& r) { return r.n == n; });
        if (bs_here.size() > best_n_support) {
            best_n_support = bs_here.size();
            best_n = n;
        }
    }
    if (best_n_support < 3)
        throw std::invalid_argument("fit_exponents: fewer than 3 distinct b at any fixed n");
    pts.clear();
    for (auto* r : usable)
        if (r->n == best_n)
            pts.push_back({std::log(static_cast<double>(r->b + 1)),
                           std::log(static_cast<double>(r->value))});
    fit.slope_b = least_squares(pts).slope;
    fit.fixed_n = best_n;
    return fit;
}

} // namespace posgame
