#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qws {

/// Undirected simple graph on D labeled vertices. The adjacency matrix
/// doubles as the quantum-walk Hamiltonian (coupling J = 1); vertex 0 is
/// the conventional seed for the Krylov construction and for connectivity
/// checks. Immutable sharing across threads is safe once construction is
/// finished.
class Graph {
public:
    explicit Graph(int dimension);

    int dimension() const noexcept { return dim_; }
    int words_per_row() const noexcept { return words_; }

    /// Raw bitset row for vertex i (words_per_row() 64-bit words).
    const std::uint64_t* row(int i) const { return bits_.data() + static_cast<std::size_t>(i) * words_; }

    bool has_edge(int i, int j) const;
    void set_edge(int i, int j, bool present);
    void add_edge(int i, int j) { set_edge(i, j, true); }

    int degree(int i) const;
    int max_degree() const;
    int edge_count() const;

    /// All edges as (i, j) with i < j, sorted lexicographically.
    std::vector<std::pair<int, int>> edges() const;

    /// Depth-first search from vertex 0 reaches every vertex.
    bool is_connected() const;

    /// Dense symmetric 0/1 adjacency matrix (the Hamiltonian).
    Eigen::MatrixXd adjacency_matrix() const;

    bool operator==(const Graph&) const = default;

private:
    void check_pair(int i, int j) const;

    int dim_ = 0;
    int words_ = 0;
    std::vector<std::uint64_t> bits_;
};

// Generators. The distinguished vertex (path end, hub, tree root, glued-tree
// entrance) is always vertex 0.

Graph make_path(int dimension);
Graph make_complete(int dimension);
Graph make_star(int dimension);

/// Hub vertex 0 connected to all others; the induced subgraph on {1..D-1} is
/// k-regular, realized as a circulant (offsets ±1..±k/2, plus the antipodal
/// offset for odd k). generator_seed != 0 relabels {1..D-1} by a seeded
/// random permutation, sampling an alternative realization of the same
/// isomorphism class. Requires 0 <= k <= D-2 and k*(D-1) even.
Graph make_hub_k_regular(int dimension, int k, std::uint64_t generator_seed = 0);

/// Complete m-ary tree with h levels (root = level 1 = vertex 0), vertices
/// numbered breadth-first; D = (m^h - 1)/(m - 1).
Graph make_m_ary_tree(int m, int h);

/// Two mirrored binary trees joined at a shared central column of 2^n
/// leaves (leaf i of the left tree is leaf i of the right tree). Column
/// sizes are 1,2,...,2^{n-1},2^n,2^{n-1},...,2,1, so D = 3*2^n - 2.
/// Vertex 0 is the entrance (left root); the exit (right root) is D-1.
Graph make_glued_tree(int n);

/// Exit vertex of make_glued_tree(n).
int glued_tree_exit(int n);

enum class GraphFormat { EdgeList, Json, Dot };

/// Edge list: first line "D", then one "i j" line per edge with i < j.
/// JSON: {"dimension": D, "edges": [[i,j],...]}, edges sorted on write.
/// DOT is write-only. All parse errors throw std::invalid_argument.
std::string serialize_graph(const Graph& g, GraphFormat format);
Graph parse_edge_list(std::string_view text);
Graph parse_graph_json(std::string_view text);

/// Detects the format (JSON iff the first non-space byte is '{').
Graph parse_graph(std::string_view text);

} // namespace qws
