#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qws/analytic.hpp"
#include "qws/graph.hpp"
#include "qws/krylov.hpp"
#include "qws/optimizer.hpp"

namespace {

constexpr int kExitParse = 1;
constexpr int kExitDisconnected = 2;
constexpr int kExitUsage = 64;    // invalid flags
constexpr int kExitInfeasible = 65;

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "stdout") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
    out << content;
}

// Shared --family/--graph selection. Family parameters follow the
// generators' preconditions; violations exit 65.
struct GraphSource {
    std::string graph_path;
    std::string family;
    int d = 0, k = 0, m = 0, h = 0, n = 0;
    std::uint64_t seed = 0;

    void add_options(CLI::App* cmd, bool allow_file = true) {
        if (allow_file) cmd->add_option("--graph", graph_path, "graph file (edge list or JSON)");
        cmd->add_option("--family", family,
                        "graph family: path|complete|star|hub-k-regular|m-ary-tree|glued-tree");
        cmd->add_option("--d", d, "vertex count (path, complete, star, hub-k-regular)");
        cmd->add_option("--k", k, "regular degree of the non-hub part (hub-k-regular)");
        cmd->add_option("--m", m, "children per node (m-ary-tree)");
        cmd->add_option("--h", h, "levels (m-ary-tree)");
        cmd->add_option("--n", n, "glue order (glued-tree)");
    }

    qws::Graph make_family_graph() const {
        try {
            if (family == "path") return qws::make_path(d);
            if (family == "complete") return qws::make_complete(d);
            if (family == "star") return qws::make_star(d);
            if (family == "hub-k-regular") return qws::make_hub_k_regular(d, k, seed);
            if (family == "m-ary-tree") return qws::make_m_ary_tree(m, h);
            if (family == "glued-tree") return qws::make_glued_tree(n);
        } catch (const std::exception& e) {
            throw InfeasibleError(e.what());
        }
        throw InfeasibleError("unknown family '" + family + "'");
    }

    qws::Graph resolve() const {
        if (!graph_path.empty() && !family.empty())
            throw InfeasibleError("give either --graph or --family, not both");
        if (!graph_path.empty()) return qws::parse_graph(read_file(graph_path));
        if (!family.empty()) return make_family_graph();
        throw InfeasibleError("one of --graph or --family is required");
    }
};

qws::WeightSequence load_weights(const std::string& selector) {
    if (selector.empty() || selector == "linear") return qws::WeightSequence::linear();
    std::istringstream in(read_file(selector));
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    if (!in.eof()) throw std::invalid_argument("weights file: malformed number");
    try {
        return qws::WeightSequence::custom(std::move(values));
    } catch (const std::exception& e) {
        throw InfeasibleError(e.what());
    }
}

qws::Direction parse_direction(const std::string& s) {
    if (s == "min" || s == "minimize") return qws::Direction::Minimize;
    if (s == "max" || s == "maximize") return qws::Direction::Maximize;
    throw InfeasibleError("direction must be min or max");
}

std::string report_csv(const qws::ComplexityReport& r, bool connected) {
    std::ostringstream out;
    out << "key,value\n";
    out << "seed," << r.seed_vertex << '\n';
    out << "d_K," << r.krylov_dim << '\n';
    out << "cbar," << fmt_double(r.cbar) << '\n';
    out << "degenerate," << (r.degenerate_spectrum ? "true" : "false") << '\n';
    out << "connected," << (connected ? "true" : "false") << '\n';
    for (std::size_t i = 0; i < r.kappa.size(); ++i)
        out << "kappa_" << i << ',' << fmt_double(r.kappa[i]) << '\n';
    return out.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Krylov spread complexity of continuous-time quantum walks on graphs"};
    app.set_help_flag("--help", "print help"); // keep --h free for the tree-level flag
    app.require_subcommand(1);
    app.fallthrough(); // --out may follow the subcommand

    std::string out_path;
    std::string format = "json";
    std::string weights_spec = "linear";
    int seed_vertex = 0;
    std::uint64_t rng_seed = 0;
    app.add_option("--out", out_path, "output path (default stdout)")->capture_default_str();

    // compute
    auto* compute = app.add_subcommand("compute", "kappa profile and long-time average");
    GraphSource compute_src;
    compute_src.add_options(compute);
    compute->add_option("--seed-vertex", seed_vertex, "Krylov seed vertex")->capture_default_str();
    compute->add_option("--weights", weights_spec, "linear or a file of increasing values")
        ->capture_default_str();
    compute->add_option("--format", format, "json|csv")->capture_default_str();

    // generate
    auto* generate = app.add_subcommand("generate", "emit a family graph");
    GraphSource generate_src;
    generate_src.add_options(generate, /*allow_file=*/false);
    std::string graph_format = "edgelist";
    generate->add_option("--seed", generate_src.seed, "relabeling seed (hub-k-regular)")
        ->capture_default_str();
    generate->add_option("--format", graph_format, "edgelist|json|dot")->capture_default_str();

    // limiting
    auto* limiting = app.add_subcommand("limiting", "limiting distribution of the walk");
    GraphSource limiting_src;
    limiting_src.add_options(limiting);
    limiting->add_option("--seed-vertex", seed_vertex, "start vertex")->capture_default_str();
    limiting->add_option("--format", format, "json|csv")->capture_default_str();

    // convergence
    auto* convergence = app.add_subcommand("convergence", "finite-time averages vs the long-time limit");
    GraphSource convergence_src;
    convergence_src.add_options(convergence);
    std::vector<double> t_list;
    double t_min = 0, t_max = 0;
    int t_points = 0;
    convergence->add_option("--seed-vertex", seed_vertex, "Krylov seed vertex")->capture_default_str();
    convergence->add_option("--weights", weights_spec, "linear or a file of increasing values")
        ->capture_default_str();
    convergence->add_option("--t-list", t_list, "explicit averaging horizons")->delimiter(',');
    convergence->add_option("--t-min", t_min, "log-spaced horizon range start");
    convergence->add_option("--t-max", t_max, "log-spaced horizon range end");
    convergence->add_option("--t-points", t_points, "number of log-spaced horizons");

    // optimize
    auto* optimize_cmd = app.add_subcommand("optimize", "stochastic greedy search for extremal cbar");
    qws::OptimizerConfig opt_cfg;
    std::string direction = "min";
    optimize_cmd->add_option("--d", opt_cfg.dimension, "vertex count")->required();
    optimize_cmd->add_option("--direction", direction, "min|max")->capture_default_str();
    optimize_cmd->add_option("--seed", rng_seed, "RNG seed")->capture_default_str();
    optimize_cmd->add_option("--restarts", opt_cfg.restarts, "independent restarts")->capture_default_str();
    optimize_cmd->add_option("--candidates", opt_cfg.candidate_count, "candidate vertices per move (<= 20)")
        ->capture_default_str();
    optimize_cmd->add_option("--stale-rounds", opt_cfg.max_stale_rounds,
                             "stop after this many non-improving rounds")
        ->capture_default_str();
    optimize_cmd->add_option("--threads", opt_cfg.threads, "0 = all cores")->capture_default_str();
    optimize_cmd->add_option("--weights", weights_spec, "linear or a file of increasing values")
        ->capture_default_str();
    optimize_cmd->add_option("--format", format, "json|csv")->capture_default_str();

    // brute-force
    auto* brute = app.add_subcommand("brute-force", "exact extremum over all connected graphs (D <= 7)");
    int brute_d = 0;
    brute->add_option("--d", brute_d, "vertex count (2..7)")->required();
    brute->add_option("--direction", direction, "min|max")->capture_default_str();
    brute->add_option("--weights", weights_spec, "linear or a file of increasing values")
        ->capture_default_str();
    brute->add_option("--format", format, "json|csv")->capture_default_str();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "optimize per dimension, CSV output");
    int d_min = 0, d_max = 0;
    std::string sweep_direction = "max";
    std::string reference_path;
    sweep->add_option("--d-min", d_min, "first dimension")->required();
    sweep->add_option("--d-max", d_max, "last dimension")->required();
    sweep->add_option("--direction", sweep_direction, "min|max")->capture_default_str();
    sweep->add_option("--reference", reference_path,
                      "also write closed-form reference curves (complete, path, empirical fit) "
                      "to this CSV");
    sweep->add_option("--seed", rng_seed, "RNG seed")->capture_default_str();
    sweep->add_option("--restarts", opt_cfg.restarts, "independent restarts")->capture_default_str();
    sweep->add_option("--candidates", opt_cfg.candidate_count, "candidate vertices per move (<= 20)")
        ->capture_default_str();
    sweep->add_option("--stale-rounds", opt_cfg.max_stale_rounds,
                      "stop after this many non-improving rounds")
        ->capture_default_str();
    sweep->add_option("--threads", opt_cfg.threads, "0 = all cores")->capture_default_str();
    sweep->add_option("--weights", weights_spec, "linear or a file of increasing values")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*compute) {
            qws::Graph g = compute_src.resolve();
            const auto w = load_weights(weights_spec);
            const auto report = qws::cbar(g, seed_vertex, w);
            const bool connected = g.is_connected();
            std::string text;
            if (format == "csv") {
                text = report_csv(report, connected);
            } else {
                nlohmann::json j = nlohmann::json::parse(qws::report_to_json(report));
                j["connected"] = connected;
                text = j.dump(2) + "\n";
            }
            write_output(out_path, text);
            return connected ? 0 : kExitDisconnected;
        }

        if (*generate) {
            qws::Graph g = generate_src.make_family_graph();
            qws::GraphFormat f = qws::GraphFormat::EdgeList;
            if (graph_format == "json") f = qws::GraphFormat::Json;
            else if (graph_format == "dot") f = qws::GraphFormat::Dot;
            else if (graph_format != "edgelist") throw InfeasibleError("unknown graph format");
            write_output(out_path, qws::serialize_graph(g, f));
            return 0;
        }

        if (*limiting) {
            qws::Graph g = limiting_src.resolve();
            const auto chi = qws::limiting_distribution(g, seed_vertex);
            std::string text;
            if (format == "csv") {
                std::ostringstream out;
                out << "vertex,chi\n";
                for (std::size_t i = 0; i < chi.size(); ++i)
                    out << i << ',' << fmt_double(chi[i]) << '\n';
                text = out.str();
            } else {
                nlohmann::json j;
                j["seed"] = seed_vertex;
                j["chi"] = chi;
                text = j.dump(2) + "\n";
            }
            write_output(out_path, text);
            return 0;
        }

        if (*convergence) {
            qws::Graph g = convergence_src.resolve();
            const auto w = load_weights(weights_spec);
            std::vector<double> horizons = t_list;
            if (t_points > 0) {
                if (!(t_min > 0) || !(t_max >= t_min))
                    throw InfeasibleError("need 0 < --t-min <= --t-max with --t-points");
                for (int i = 0; i < t_points; ++i) {
                    const double f = t_points == 1 ? 0.0 : static_cast<double>(i) / (t_points - 1);
                    horizons.push_back(t_min * std::pow(t_max / t_min, f));
                }
            }
            const double limit = qws::cbar(g, seed_vertex, w).cbar;
            std::ostringstream out;
            out << "T,cbar_T,cbar_infinity\n";
            for (double T : horizons)
                out << fmt_double(T) << ',' << fmt_double(qws::finite_time_average(g, seed_vertex, T, w))
                    << ',' << fmt_double(limit) << '\n';
            write_output(out_path, out.str());
            return 0;
        }

        if (*optimize_cmd || *brute) {
            const auto w = load_weights(weights_spec);
            qws::OptimizerResult result;
            qws::OptimizerConfig cfg = opt_cfg;
            cfg.direction = parse_direction(direction);
            cfg.weights = w;
            cfg.rng_seed = rng_seed;
            try {
                if (*brute) {
                    cfg.dimension = brute_d;
                    result = qws::brute_force(brute_d, cfg.direction, w);
                } else {
                    result = qws::optimize(cfg);
                }
            } catch (const std::invalid_argument& e) {
                throw InfeasibleError(e.what());
            }
            std::string text;
            if (format == "csv") {
                text = qws::sweep_to_csv({{result.best_graph.dimension(), result.best_cbar,
                                           result.best_graph}});
            } else {
                text = qws::result_to_json(result, cfg) + "\n";
            }
            write_output(out_path, text);
            return 0;
        }

        if (*sweep) {
            qws::OptimizerConfig cfg = opt_cfg;
            cfg.direction = parse_direction(sweep_direction);
            cfg.weights = load_weights(weights_spec);
            cfg.rng_seed = rng_seed;
            std::vector<qws::SweepRow> rows;
            try {
                rows = qws::sweep_max(d_min, d_max, cfg);
            } catch (const std::invalid_argument& e) {
                throw InfeasibleError(e.what());
            }
            if (!reference_path.empty()) {
                std::ostringstream ref;
                ref << "D,cbar_complete,cbar_path,max_fit\n";
                for (int d = d_min; d <= d_max; ++d)
                    ref << d << ','
                        << fmt_double(qws::cbar_closed_form(qws::GraphFamily::Complete,
                                                            {.dimension = d}).cbar)
                        << ','
                        << fmt_double(qws::cbar_closed_form(qws::GraphFamily::Path,
                                                            {.dimension = d}).cbar)
                        << ',' << fmt_double(qws::empirical_max_fit(d)) << '\n';
                write_output(reference_path, ref.str());
            }
            write_output(out_path, qws::sweep_to_csv(rows));
            return 0;
        }
    } catch (const InfeasibleError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    return 0;
}
