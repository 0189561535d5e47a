#include "posgame/counting.hpp"
#include "posgame/engine.hpp"
#include "posgame/experiment.hpp"
#include "posgame/invariants.hpp"
#include "posgame/randmodels.hpp"
#include "posgame/rng.hpp"
#include "posgame/solver.hpp"
#include "posgame/strategies.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace posgame;

namespace {

    Pattern load_pattern(const std::string& spec, const std::string& file)
    {
        if (!file.empty()) {
            std::ifstream in(file);
            if (!in)
                throw std::invalid_argument("cannot open pattern file " + file);
            std::ostringstream buf;
            buf << in.rdbuf();
            return parse_graph(buf.str());
        }
        if (spec.rfind("km:", 0) == 0) {
            auto comma = spec.find(',');
            int k = std::stoi(spec.substr(3, comma - 3));
            int i = std::stoi(spec.substr(comma + 1));
            return clique_minus_matching(k, i);
        }
        return pattern_from_spec(spec);
    }

    Board load_board(const std::string& spec)
    {
        // "k12" or "complete:12" or "blowup:k3:30"
        if (spec.rfind("blowup:", 0) == 0 || spec.rfind("complete:", 0) == 0)
            return Board::from_descriptor(spec);
        if (!spec.empty() && spec[0] == 'k')
            return Board::complete(std::stoi(spec.substr(1)));
        throw std::invalid_argument("board spec: expected kN, complete:N or blowup:<pattern>:<s>");
    }

    std::uint64_t master_seed_from_env()
    {
        if (const char* env = std::getenv("POSGAME_SEED"))
            return std::stoull(env);
        return 0;
    }

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"biased Waiter-Client games on graphs: invariants, strategies, experiments"};
    app.require_subcommand(1);

    // ---------------------------------------------------------- invariants
    auto* inv = app.add_subcommand("invariants", "density invariants of a pattern");
    std::string inv_spec;
    std::string inv_file;
    inv->add_option("pattern", inv_spec, "pattern spec (k4, p3, s4, c5, km:5,3, edges:...)");
    inv->add_option("--file", inv_file, "edge-list file");

    // ---------------------------------------------------------- solve
    auto* solve = app.add_subcommand("solve", "exact value on a tiny board");
    std::string solve_board = "k4", solve_pattern = "k3", solve_pattern_file;
    int solve_b = 1;
    bool solve_canonical = false;
    solve->add_option("--board", solve_board, "board (kN or blowup:<pattern>:<s>)");
    solve->add_option("--pattern", solve_pattern, "target pattern");
    solve->add_option("--pattern-file", solve_pattern_file, "edge-list file");
    solve->add_option("--b", solve_b, "Waiter bias")->check(CLI::PositiveNumber);
    solve->add_flag("--canonical", solve_canonical, "count canonical copies only");

    // ---------------------------------------------------------- play
    auto* play_cmd = app.add_subcommand("play", "one game between two strategies");
    std::string play_board = "k8", play_pattern = "k3", play_pattern_file, play_waiter = "random",
                play_client = "random", play_transcript;
    int play_b = 1;
    std::uint64_t play_seed = 1;
    bool play_canonical = false, play_relax = false;
    double play_alpha = 0.5;
    play_cmd->add_option("--board", play_board);
    play_cmd->add_option("--pattern", play_pattern);
    play_cmd->add_option("--pattern-file", play_pattern_file, "edge-list file");
    play_cmd->add_option("--waiter", play_waiter);
    play_cmd->add_option("--client", play_client);
    play_cmd->add_option("--b", play_b)->check(CLI::PositiveNumber);
    play_cmd->add_option("--seed", play_seed);
    play_cmd->add_option("--alpha", play_alpha);
    play_cmd->add_option("--transcript", play_transcript, "write the transcript here");
    play_cmd->add_flag("--canonical", play_canonical);
    play_cmd->add_flag("--relax", play_relax, "skip admissibility preconditions");

    // ---------------------------------------------------------- sweep
    auto* sweep = app.add_subcommand("sweep", "run an experiment config");
    std::string sweep_config, sweep_out, sweep_json;
    bool sweep_fit = false;
    sweep->add_option("--config", sweep_config)->required();
    sweep->add_option("--out", sweep_out, "override the config's CSV path");
    sweep->add_option("--json", sweep_json, "also write a JSON mirror");
    sweep->add_flag("--fit", sweep_fit, "print fitted scaling exponents");

    // ---------------------------------------------------------- randlab
    auto* rand_cmd = app.add_subcommand("randlab", "blow-up random graph sampling");
    std::string rl_pattern = "k3", rl_mode = "greedy", rl_out;
    int rl_s = 8, rl_seeds = 10;
    double rl_p = -1, rl_C = 4.0;
    std::int64_t rl_M = -1;
    rand_cmd->add_option("--pattern", rl_pattern);
    rand_cmd->add_option("--s", rl_s, "part size");
    rand_cmd->add_option("--p", rl_p, "edge probability (G(H,n,p))");
    rand_cmd->add_option("--M", rl_M, "edge count (G(H,n,M))");
    rand_cmd->add_option("--seeds", rl_seeds, "number of seeds");
    rand_cmd->add_option("--C", rl_C, "property constant");
    rand_cmd->add_option("--mode", rl_mode, "sampled | greedy");
    rand_cmd->add_option("--out", rl_out, "CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*inv) {
            Pattern h = load_pattern(inv_spec, inv_file);
            auto print = [](const std::string& name, const Rational& r) {
                std::cout << name << " = " << r.str() << " = " << r.to_double() << "\n";
            };
            print("m", max_density(h));
            if (h.vertex_count >= 3)
                print("m2", max_2density(h));
            if (h.vertex_count >= 3 && h.edge_count() >= 2)
                std::cout << "m2-balanced = " << (is_m2_balanced(h) ? "yes" : "no") << "\n";
            if (h.edge_count() >= 2) {
                print("g1", g1(h));
                print("g2", g2(h));
            }
            return 0;
        }

        if (*solve) {
            Board board = load_board(solve_board);
            Pattern h = load_pattern(solve_pattern, solve_pattern_file);
            auto sets = enumerate_copy_sets(board, h, solve_canonical);
            auto family = WinningFamily::explicit_sets(std::move(sets));
            auto result = solve_with_pv(board, family, solve_b);
            std::cout << "value = " << result.value << "\n";
            for (std::uint32_t r = 0; r < result.principal_variation.rounds(); ++r) {
                std::cout << "R" << r << ": offer=";
                auto offer = result.principal_variation.offer(r);
                for (size_t i = 0; i < offer.size(); ++i)
                    std::cout << (i ? "," : "") << offer[i];
                std::cout << " pick=" << result.principal_variation.picks[r] << "\n";
            }
            return 0;
        }

        if (*play_cmd) {
            Board board = load_board(play_board);
            Pattern h = load_pattern(play_pattern, play_pattern_file);
            WinningFamily family = WinningFamily::copies_of(h, play_canonical);
            StrategyContext ctx;
            ctx.board = &board;
            ctx.bias = play_b;
            ctx.family = &family;
            ctx.alpha = play_alpha;
            ctx.relax_preconditions = play_relax;
            std::uint64_t master = mix_seed(master_seed_from_env(), play_seed);
            ctx.seed = mix_seed(master, 1);
            auto waiter = make_waiter(play_waiter, ctx);
            ctx.seed = mix_seed(master, 2);
            auto client = make_client(play_client, ctx);
            GameState final = play(board, play_b, *waiter, *client);
            std::cout << "rounds = " << final.round << "\n";
            std::cout << "value = " << game_value(final, family) << "\n";
            if (!play_transcript.empty()) {
                std::ofstream out(play_transcript);
                out << write_transcript(final, play_seed);
            }
            return 0;
        }

        if (*sweep) {
            std::ifstream in(sweep_config);
            if (!in) {
                std::cerr << "cannot open config " << sweep_config << "\n";
                return 2;
            }
            std::ostringstream buf;
            buf << in.rdbuf();
            ExperimentConfig cfg = parse_config(buf.str());
            if (cfg.master_seed == 0)
                cfg.master_seed = master_seed_from_env();
            if (!sweep_out.empty())
                cfg.out_csv = sweep_out;
            if (!sweep_json.empty())
                cfg.out_json = sweep_json;
            auto records = run_experiment(cfg, &std::cerr);
            if (cfg.out_csv.empty()) {
                write_csv(std::cout, records);
            } else {
                std::ofstream out(cfg.out_csv);
                write_csv(out, records);
            }
            if (!cfg.out_json.empty()) {
                std::ofstream out(cfg.out_json);
                write_json(out, records);
            }
            if (sweep_fit) {
                auto fit = fit_exponents(records);
                std::cout << "slope_n = " << fit.slope_n << " (at b=" << fit.fixed_b << ")\n";
                std::cout << "slope_b = " << fit.slope_b << " (at n=" << fit.fixed_n << ")\n";
                std::cout << "intercept = " << fit.intercept << "\n";
                for (auto& w : fit.warnings)
                    std::cerr << "fit: " << w << "\n";
            }
            return 0;
        }

        if (*rand_cmd) {
            Pattern h = load_pattern(rl_pattern, "");
            Board board = Board::blowup(h, rl_s, rl_pattern);
            ExtractMode mode = extract_mode_from_name(rl_mode);
            std::ostream* out = &std::cout;
            std::ofstream file;
            if (!rl_out.empty()) {
                file.open(rl_out);
                out = &file;
            }
            std::uint64_t master = master_seed_from_env();
            *out << "seed,n,p_or_M,copies,family,p1,p2,p3,p4,p5\n";
            for (int s = 0; s < rl_seeds; ++s) {
                std::uint64_t seed = mix_seed(master, s + 1);
                EdgeSet g = rl_M >= 0 ? sample_gnm(board, static_cast<std::uint64_t>(rl_M), seed)
                                      : sample_gnp(board, rl_p, seed);
                auto res = extract_sparse_family(board, g, rl_C, mode, mix_seed(seed, 7));
                *out << s << "," << rl_s << ","
                     << (rl_M >= 0 ? std::to_string(rl_M) : std::to_string(rl_p)) << ","
                     << res.canonical_copies << "," << res.family.copies.size() << ","
                     << res.report.p1 << "," << res.report.p2 << "," << res.report.p3 << ","
                     << res.report.p4 << "," << res.report.p5 << "\n";
            }
            return 0;
        }
    } catch (const StrategyError& ex) {
        std::cerr << "strategy illegality: " << ex.what() << " [" << ex.snapshot << "]\n";
        return 3;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}
