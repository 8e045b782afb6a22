#include "qws/optimizer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "qws/rng.hpp"
#include "qws/spectral.hpp"

namespace qws {

namespace {

// Scratch-backed cbar evaluation on a mutable bit adjacency; one instance
// per thread, no allocation inside the enumeration loops.
struct Evaluator {
    int n = 0;
    int words = 0;
    std::vector<std::uint64_t> adj;
    std::vector<double> basis, a, b, kappa, z, dws, ews;
    std::vector<std::uint64_t> visited, frontier, next;
    const WeightSequence* weights = nullptr;

    explicit Evaluator(int dimension, const WeightSequence& w)
        : n(dimension), words((dimension + 63) / 64), adj(static_cast<std::size_t>(n) * words, 0),
          basis(static_cast<std::size_t>(n) * (n + 1)), a(n), b(n), kappa(n),
          z(static_cast<std::size_t>(n) * n), dws(n), ews(n),
          visited(words), frontier(words), next(words), weights(&w) {}

    void load(const Graph& g) {
        std::copy(g.row(0), g.row(0) + static_cast<std::size_t>(n) * words, adj.begin());
    }

    void set_edge(int i, int j, bool on) {
        const std::uint64_t mi = std::uint64_t{1} << (j % 64);
        const std::uint64_t mj = std::uint64_t{1} << (i % 64);
        if (on) {
            adj[static_cast<std::size_t>(i) * words + j / 64] |= mi;
            adj[static_cast<std::size_t>(j) * words + i / 64] |= mj;
        } else {
            adj[static_cast<std::size_t>(i) * words + j / 64] &= ~mi;
            adj[static_cast<std::size_t>(j) * words + i / 64] &= ~mj;
        }
    }

    bool connected() {
        std::fill(visited.begin(), visited.end(), 0);
        std::fill(frontier.begin(), frontier.end(), 0);
        visited[0] = frontier[0] = 1;
        int seen = 1;
        while (true) {
            std::fill(next.begin(), next.end(), 0);
            for (int w = 0; w < words; ++w) {
                std::uint64_t bits = frontier[w];
                while (bits) {
                    const int v = w * 64 + std::countr_zero(bits);
                    bits &= bits - 1;
                    const std::uint64_t* r = adj.data() + static_cast<std::size_t>(v) * words;
                    for (int u = 0; u < words; ++u) next[u] |= r[u];
                }
            }
            int added = 0;
            for (int w = 0; w < words; ++w) {
                next[w] &= ~visited[w];
                visited[w] |= next[w];
                added += std::popcount(next[w]);
            }
            if (added == 0) break;
            seen += added;
            frontier = next;
        }
        return seen == n;
    }

    double eval() {
        int maxdeg = 0;
        for (int i = 0; i < n; ++i) {
            int d = 0;
            for (int w = 0; w < words; ++w)
                d += std::popcount(adj[static_cast<std::size_t>(i) * words + w]);
            maxdeg = std::max(maxdeg, d);
        }
        const int dk = detail::lanczos_bits(adj.data(), words, n, 0, maxdeg,
                                            basis.data(), a.data(), b.data());
        detail::kappa_from_tridiagonal(a.data(), b.data(), dk, kappa.data(),
                                       z.data(), dws.data(), ews.data());
        double total = 0.0;
        for (int i = 0; i < dk; ++i) total += (*weights)[i] * kappa[i];
        return total;
    }

    Graph to_graph() const {
        Graph g(n);
        for (int i = 0; i < n; ++i) {
            for (int w = 0; w < words; ++w) {
                std::uint64_t bits = adj[static_cast<std::size_t>(i) * words + w];
                while (bits) {
                    const int j = w * 64 + std::countr_zero(bits);
                    bits &= bits - 1;
                    if (j > i) g.add_edge(i, j);
                }
            }
        }
        return g;
    }
};

struct Best {
    double value = 0.0;
    std::uint32_t mask = 0;
    bool valid = false;
};

bool better(Direction dir, double v, std::uint32_t mask, const Best& cur) {
    if (!cur.valid) return true;
    if (dir == Direction::Minimize) {
        if (v < cur.value) return true;
        if (v > cur.value) return false;
    } else {
        if (v > cur.value) return true;
        if (v < cur.value) return false;
    }
    return mask < cur.mask;
}

bool strictly_better(Direction dir, double v, double ref) {
    return dir == Direction::Minimize ? v < ref : v > ref;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Enumerates masks [lo, hi) in Gray-code order: edge bit j follows
// assignment bit j of gray(i) = i ^ (i >> 1), so consecutive steps flip a
// single edge.
template <class SetBit>
Best enumerate_masks(Evaluator& ev, std::uint32_t lo, std::uint32_t hi, Direction dir,
                     SetBit&& set_bit, long* evaluated) {
    Best best;
    // the evaluator arrives with every assignment bit cleared, so only the
    // set bits of gray(lo) need applying
    std::uint32_t gray = lo ^ (lo >> 1);
    for (std::uint32_t j = 0; j < 32 && (std::uint32_t{1} << j) <= gray; ++j)
        set_bit(ev, j, (gray >> j) & 1u);
    for (std::uint32_t i = lo; i < hi; ++i) {
        if (ev.connected()) {
            const double v = ev.eval();
            ++*evaluated;
            if (better(dir, v, gray, best)) best = {v, gray, true};
        }
        if (i + 1 < hi) {
            const int flip = std::countr_zero(i + 1);
            gray ^= std::uint32_t{1} << flip;
            set_bit(ev, flip, (gray >> flip) & 1u);
        }
    }
    return best;
}

template <class MakeEval, class SetBit>
Best enumerate_all(int k, Direction dir, int threads, MakeEval&& make_eval, SetBit&& set_bit,
                   long* evaluated) {
    const std::uint64_t nmasks = std::uint64_t{1} << k;
    const int nthreads = static_cast<int>(std::min<std::uint64_t>(
        static_cast<std::uint64_t>(std::max(threads, 1)), std::max<std::uint64_t>(nmasks / 512, 1)));
    if (nthreads <= 1) {
        Evaluator ev = make_eval();
        return enumerate_masks(ev, 0, static_cast<std::uint32_t>(nmasks), dir, set_bit, evaluated);
    }
    std::vector<Best> part(nthreads);
    std::vector<long> counts(nthreads, 0);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (nmasks + nthreads - 1) / nthreads;
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
            const std::uint64_t lo = t * chunk;
            const std::uint64_t hi = std::min(nmasks, lo + chunk);
            if (lo >= hi) return;
            Evaluator ev = make_eval();
            part[t] = enumerate_masks(ev, static_cast<std::uint32_t>(lo),
                                      static_cast<std::uint32_t>(hi), dir, set_bit, &counts[t]);
        });
    }
    for (auto& th : pool) th.join();
    Best best;
    for (int t = 0; t < nthreads; ++t) {
        *evaluated += counts[t];
        if (part[t].valid && better(dir, part[t].value, part[t].mask, best))
            best = part[t];
    }
    return best;
}

struct MoveOutcome {
    Graph graph{1};
    double value = 0.0;
    bool found = false;
};

MoveOutcome local_move_impl(const Graph& g, int pivot, std::vector<int> candidates,
                            Direction dir, const WeightSequence& w, int threads,
                            long* evaluated) {
    const int n = g.dimension();
    if (pivot < 0 || pivot >= n) throw std::out_of_range("local_move: pivot out of range");
    if (candidates.size() > 20)
        throw std::invalid_argument("local_move: at most 20 candidates");
    std::sort(candidates.begin(), candidates.end());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const int c = candidates[i];
        if (c < 0 || c >= n) throw std::out_of_range("local_move: candidate out of range");
        if (c == pivot) throw std::invalid_argument("local_move: pivot must not be a candidate");
        if (i > 0 && c == candidates[i - 1])
            throw std::invalid_argument("local_move: candidates must be distinct");
    }
    if (candidates.empty()) return {g, 0.0, false};

    const int k = static_cast<int>(candidates.size());
    auto make_eval = [&] {
        Evaluator ev(n, w);
        ev.load(g);
        for (int c : candidates) ev.set_edge(pivot, c, false);
        return ev;
    };
    auto set_bit = [pivot, &candidates](Evaluator& ev, int j, bool on) {
        ev.set_edge(pivot, candidates[j], on);
    };
    const Best best = enumerate_all(k, dir, resolve_threads(threads), make_eval, set_bit, evaluated);
    if (!best.valid) return {g, 0.0, false};

    Graph out = g;
    for (int j = 0; j < k; ++j) out.set_edge(pivot, candidates[j], (best.mask >> j) & 1u);
    return {std::move(out), best.value, true};
}

std::string fmt_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

Graph local_move(const Graph& g, int pivot, std::vector<int> candidates, Direction direction,
                 const WeightSequence& w, int threads) {
    w.require(g.dimension());
    long evaluated = 0;
    MoveOutcome out = local_move_impl(g, pivot, std::move(candidates), direction, w, threads,
                                      &evaluated);
    return out.found ? std::move(out.graph) : g;
}

OptimizerResult optimize(const OptimizerConfig& config) {
    const int n = config.dimension;
    if (n < 2) throw std::invalid_argument("optimize: dimension must be >= 2");
    if (config.candidate_count < 1 || config.candidate_count > 20)
        throw std::invalid_argument("optimize: candidate_count must be in [1, 20]");
    if (config.max_stale_rounds < 1) throw std::invalid_argument("optimize: max_stale_rounds must be >= 1");
    if (config.restarts < 1) throw std::invalid_argument("optimize: restarts must be >= 1");
    config.weights.require(n);

    OptimizerResult result;
    result.best_graph = Graph(n);
    bool have_best = false;

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

    Evaluator ev(n, config.weights);
    const int cc = std::min(config.candidate_count, n - 1);

    for (int restart = 0; restart < config.restarts; ++restart) {
        auto eng = seeded_engine(config.rng_seed, restart);

        Graph current(n);
        do {
            for (const auto& [i, j] : pairs) current.set_edge(i, j, random_bit(eng));
        } while (!current.is_connected());

        ev.load(current);
        double current_value = ev.eval();
        std::vector<TraceEntry> trace{{0, current_value}};

        std::vector<int> others(n - 1);
        long round = 0;
        int stale = 0;
        while (stale < config.max_stale_rounds) {
            ++round;
            const int pivot = static_cast<int>(uniform_below(eng, n));
            int idx = 0;
            for (int v = 0; v < n; ++v)
                if (v != pivot) others[idx++] = v;
            for (int t = 0; t < cc; ++t) {
                const int j = t + static_cast<int>(uniform_below(eng, static_cast<std::uint64_t>(n - 1 - t)));
                std::swap(others[t], others[j]);
            }
            std::vector<int> candidates(others.begin(), others.begin() + cc);

            long assignments = 0;
            MoveOutcome move = local_move_impl(current, pivot, std::move(candidates),
                                               config.direction, config.weights, config.threads,
                                               &assignments);
            ++result.local_moves;
            if (!move.found) { // only reachable if the input graph were disconnected
                ++stale;
                continue;
            }
            if (strictly_better(config.direction, move.value, current_value)) {
                stale = 0;
                trace.push_back({round, move.value});
            } else {
                ++stale;
            }
            current = std::move(move.graph);
            current_value = move.value;
        }

        if (!have_best || strictly_better(config.direction, current_value, result.best_cbar)) {
            have_best = true;
            result.best_graph = current;
            result.best_cbar = current_value;
            result.cost_trace = std::move(trace);
            result.restart_index = restart;
        }
    }
    return result;
}

OptimizerResult brute_force(int dimension, Direction direction, const WeightSequence& w,
                            int threads) {
    if (dimension < 2 || dimension > 7)
        throw std::invalid_argument("brute_force: dimension must be in [2, 7]");
    w.require(dimension);

    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < dimension; ++i)
        for (int j = i + 1; j < dimension; ++j) pairs.emplace_back(i, j);
    const int k = static_cast<int>(pairs.size());

    auto make_eval = [&] { return Evaluator(dimension, w); };
    auto set_bit = [&pairs](Evaluator& ev, int j, bool on) {
        ev.set_edge(pairs[j].first, pairs[j].second, on);
    };
    long evaluated = 0;
    const Best best = enumerate_all(k, direction, resolve_threads(threads), make_eval, set_bit,
                                    &evaluated);
    // every enumeration includes at least the complete graph, which is connected
    OptimizerResult result;
    result.best_graph = Graph(dimension);
    for (int j = 0; j < k; ++j)
        if ((best.mask >> j) & 1u) result.best_graph.add_edge(pairs[j].first, pairs[j].second);
    result.best_cbar = best.value;
    result.cost_trace = {{0, best.value}};
    result.restart_index = 0;
    result.local_moves = evaluated;
    return result;
}

std::vector<SweepRow> sweep_max(int d_min, int d_max, const OptimizerConfig& config_template) {
    if (d_min < 2 || d_max < d_min) throw std::invalid_argument("sweep_max: bad dimension range");
    std::vector<SweepRow> rows;
    for (int d = d_min; d <= d_max; ++d) {
        OptimizerConfig cfg = config_template;
        cfg.dimension = d;
        OptimizerResult r = optimize(cfg);
        rows.push_back({d, r.best_cbar, std::move(r.best_graph)});
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "D,cbar,edges\n";
    for (const auto& row : rows) {
        out << row.dimension << ',' << fmt_double(row.cbar) << ',';
        const auto edges = row.best_graph.edges();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (i) out << ';';
            out << edges[i].first << '-' << edges[i].second;
        }
        out << '\n';
    }
    return out.str();
}

std::string result_to_json(const OptimizerResult& result, const OptimizerConfig& config) {
    nlohmann::json j;
    j["dimension"] = result.best_graph.dimension();
    j["direction"] = config.direction == Direction::Minimize ? "minimize" : "maximize";
    j["best_cbar"] = result.best_cbar;
    j["edges"] = nlohmann::json::array();
    for (const auto& [a, b] : result.best_graph.edges()) j["edges"].push_back({a, b});
    j["restart_index"] = result.restart_index;
    j["local_moves"] = result.local_moves;
    j["cost_trace"] = nlohmann::json::array();
    for (const auto& entry : result.cost_trace) j["cost_trace"].push_back({entry.round, entry.cbar});
    j["rng_seed"] = config.rng_seed;
    j["candidate_count"] = config.candidate_count;
    j["max_stale_rounds"] = config.max_stale_rounds;
    j["restarts"] = config.restarts;
    return j.dump(2);
}

} // namespace qws
