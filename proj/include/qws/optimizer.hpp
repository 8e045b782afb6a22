#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qws/graph.hpp"
#include "qws/krylov.hpp"

namespace qws {

enum class Direction { Minimize, Maximize };

struct OptimizerConfig {
    int dimension = 2;
    Direction direction = Direction::Minimize;
    int candidate_count = 20;    // vertices per local move, clamped to [1, 20]
    int max_stale_rounds = 200;  // stop a restart after this many rounds without improvement
    int restarts = 8;
    std::uint64_t rng_seed = 0;
    WeightSequence weights;
    int threads = 0;             // 0 = hardware concurrency
};

struct TraceEntry {
    long round = 0;
    double cbar = 0.0;
};

struct OptimizerResult {
    Graph best_graph{1};
    double best_cbar = 0.0;
    std::vector<TraceEntry> cost_trace; // accepted-improvement trace of the best restart
    int restart_index = 0;
    long local_moves = 0;               // local moves evaluated across all restarts
};

/// Enumerates all 2^|candidates| assignments of the edges {pivot, c_j},
/// keeps the connected ones, and returns the graph with extremal cbar
/// (seed vertex 0). Ties break toward the lexicographically smallest
/// assignment bitmask (bit j = edge to candidates[j], candidates sorted
/// ascending). Returns the input unchanged when no assignment is
/// connected or candidates is empty.
Graph local_move(const Graph& g, int pivot, std::vector<int> candidates,
                 Direction direction, const WeightSequence& w = {}, int threads = 0);

/// Stochastic greedy search: per restart, start from a uniformly random
/// connected graph and repeatedly apply local_move at a random pivot with
/// random candidates until max_stale_rounds rounds pass without
/// improvement. Fully deterministic given rng_seed (independent stream
/// per restart).
OptimizerResult optimize(const OptimizerConfig& config);

/// Exact extremum over all connected labeled graphs on D vertices
/// (2 <= D <= 7), seed vertex 0. Ties break toward the smallest
/// whole-graph bitmask, bits ordered over pairs (0,1),(0,2),...,(1,2),...
/// D = 7 enumerates 2^21 graphs and takes a few seconds.
OptimizerResult brute_force(int dimension, Direction direction,
                            const WeightSequence& w = {}, int threads = 0);

struct SweepRow {
    int dimension = 0;
    double cbar = 0.0;
    Graph best_graph{1};
};

/// optimize() per dimension in [d_min, d_max] with the template config
/// (dimension and rng stream vary per D).
std::vector<SweepRow> sweep_max(int d_min, int d_max, const OptimizerConfig& config_template);

/// CSV with header "D,cbar,edges"; edges rendered "i-j;i-j;...".
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

std::string result_to_json(const OptimizerResult& result, const OptimizerConfig& config);

} // namespace qws
