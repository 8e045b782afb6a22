#include "qws/graph.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qws/rng.hpp"

namespace qws {

Graph::Graph(int dimension) : dim_(dimension) {
    if (dimension < 1) throw std::invalid_argument("Graph: dimension must be >= 1");
    words_ = (dimension + 63) / 64;
    bits_.assign(static_cast<std::size_t>(dim_) * words_, 0);
}

void Graph::check_pair(int i, int j) const {
    if (i < 0 || i >= dim_ || j < 0 || j >= dim_)
        throw std::out_of_range("Graph: vertex index out of range");
    if (i == j) throw std::invalid_argument("Graph: self-loops are not allowed");
}

bool Graph::has_edge(int i, int j) const {
    check_pair(i, j);
    return (row(i)[j / 64] >> (j % 64)) & 1u;
}

void Graph::set_edge(int i, int j, bool present) {
    check_pair(i, j);
    auto* bi = bits_.data() + static_cast<std::size_t>(i) * words_;
    auto* bj = bits_.data() + static_cast<std::size_t>(j) * words_;
    const std::uint64_t mi = std::uint64_t{1} << (j % 64);
    const std::uint64_t mj = std::uint64_t{1} << (i % 64);
    if (present) {
        bi[j / 64] |= mi;
        bj[i / 64] |= mj;
    } else {
        bi[j / 64] &= ~mi;
        bj[i / 64] &= ~mj;
    }
}

int Graph::degree(int i) const {
    if (i < 0 || i >= dim_) throw std::out_of_range("Graph: vertex index out of range");
    int d = 0;
    for (int w = 0; w < words_; ++w) d += std::popcount(row(i)[w]);
    return d;
}

int Graph::max_degree() const {
    int best = 0;
    for (int i = 0; i < dim_; ++i) best = std::max(best, degree(i));
    return best;
}

int Graph::edge_count() const {
    int total = 0;
    for (int i = 0; i < dim_; ++i) total += degree(i);
    return total / 2;
}

std::vector<std::pair<int, int>> Graph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < dim_; ++i) {
        for (int w = 0; w < words_; ++w) {
            std::uint64_t bits = row(i)[w];
            while (bits) {
                const int j = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                if (j > i) out.emplace_back(i, j);
            }
        }
    }
    return out;
}

bool Graph::is_connected() const {
    std::vector<std::uint64_t> visited(words_, 0), frontier(words_, 0), next(words_, 0);
    visited[0] = frontier[0] = 1;
    int seen = 1;
    while (true) {
        std::fill(next.begin(), next.end(), 0);
        for (int w = 0; w < words_; ++w) {
            std::uint64_t bits = frontier[w];
            while (bits) {
                const int v = w * 64 + std::countr_zero(bits);
                bits &= bits - 1;
                const auto* r = row(v);
                for (int u = 0; u < words_; ++u) next[u] |= r[u];
            }
        }
        int added = 0;
        for (int w = 0; w < words_; ++w) {
            next[w] &= ~visited[w];
            visited[w] |= next[w];
            added += std::popcount(next[w]);
        }
        if (added == 0) break;
        seen += added;
        frontier = next;
    }
    return seen == dim_;
}

Eigen::MatrixXd Graph::adjacency_matrix() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
    for (const auto& [i, j] : edges()) m(i, j) = m(j, i) = 1.0;
    return m;
}

Graph make_path(int dimension) {
    Graph g(dimension);
    for (int i = 0; i + 1 < dimension; ++i) g.add_edge(i, i + 1);
    return g;
}

Graph make_complete(int dimension) {
    Graph g(dimension);
    for (int i = 0; i < dimension; ++i)
        for (int j = i + 1; j < dimension; ++j) g.add_edge(i, j);
    return g;
}

Graph make_star(int dimension) {
    if (dimension < 2) throw std::invalid_argument("make_star: dimension must be >= 2");
    Graph g(dimension);
    for (int i = 1; i < dimension; ++i) g.add_edge(0, i);
    return g;
}

Graph make_hub_k_regular(int dimension, int k, std::uint64_t generator_seed) {
    const int n = dimension - 1; // ring size
    if (dimension < 2) throw std::invalid_argument("make_hub_k_regular: dimension must be >= 2");
    if (k < 0 || k > dimension - 2)
        throw std::invalid_argument("make_hub_k_regular: k must satisfy 0 <= k <= D-2");
    if (k % 2 != 0 && n % 2 != 0)
        throw std::invalid_argument("make_hub_k_regular: no k-regular graph exists (k and D-1 both odd)");

    // Ring position p <-> vertex label 1+perm[p].
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    if (generator_seed != 0) {
        auto eng = seeded_engine(generator_seed, 0);
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[uniform_below(eng, static_cast<std::uint64_t>(i) + 1)]);
    }

    Graph g(dimension);
    for (int i = 1; i < dimension; ++i) g.add_edge(0, i);
    for (int t = 1; t <= k / 2; ++t)
        for (int p = 0; p < n; ++p) g.set_edge(1 + perm[p], 1 + perm[(p + t) % n], true);
    if (k % 2 != 0)
        for (int p = 0; p < n / 2; ++p) g.set_edge(1 + perm[p], 1 + perm[p + n / 2], true);
    return g;
}

Graph make_m_ary_tree(int m, int h) {
    if (m < 2) throw std::invalid_argument("make_m_ary_tree: m must be >= 2");
    if (h < 1) throw std::invalid_argument("make_m_ary_tree: h must be >= 1");
    // Level l (1-based) starts at (m^{l-1} - 1)/(m - 1) in breadth-first order.
    std::int64_t d = 1, level_size = 1;
    for (int l = 1; l < h; ++l) {
        level_size *= m;
        d += level_size;
        if (d > (1 << 24)) throw std::invalid_argument("make_m_ary_tree: tree too large");
    }
    Graph g(static_cast<int>(d));
    std::int64_t offset = 0;
    level_size = 1;
    for (int l = 1; l < h; ++l) {
        const std::int64_t next_offset = offset + level_size;
        for (std::int64_t i = 0; i < level_size; ++i)
            for (int c = 0; c < m; ++c)
                g.add_edge(static_cast<int>(offset + i), static_cast<int>(next_offset + m * i + c));
        offset = next_offset;
        level_size *= m;
    }
    return g;
}

Graph make_glued_tree(int n) {
    if (n < 1) throw std::invalid_argument("make_glued_tree: n must be >= 1");
    if (n > 20) throw std::invalid_argument("make_glued_tree: n too large");
    const auto col_size = [n](int j) { return 1 << std::min(j, 2 * n - j); };
    std::vector<int> offset(2 * n + 1, 0);
    for (int j = 1; j <= 2 * n; ++j) offset[j] = offset[j - 1] + col_size(j - 1);
    Graph g(offset[2 * n] + 1);
    for (int j = 0; j < 2 * n; ++j) {
        for (int i = 0; i < col_size(j); ++i) {
            if (j < n) { // branching toward the central column
                g.add_edge(offset[j] + i, offset[j + 1] + 2 * i);
                g.add_edge(offset[j] + i, offset[j + 1] + 2 * i + 1);
            } else { // merging toward the exit root
                g.add_edge(offset[j] + i, offset[j + 1] + i / 2);
            }
        }
    }
    return g;
}

int glued_tree_exit(int n) {
    if (n < 1 || n > 20) throw std::invalid_argument("glued_tree_exit: n must be in [1, 20]");
    return 3 * (1 << n) - 3;
}

namespace {

[[noreturn]] void parse_fail(const std::string& what) {
    throw std::invalid_argument("graph parse error: " + what);
}

int parse_int_token(std::string_view tok, const char* what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        parse_fail(std::string("malformed ") + what + " '" + std::string(tok) + "'");
    return value;
}

void add_checked_edge(Graph& g, int i, int j) {
    if (i < 0 || j < 0 || i >= g.dimension() || j >= g.dimension())
        parse_fail("edge index out of range");
    if (i == j) parse_fail("self-loop");
    if (i > j) parse_fail("edge endpoints must satisfy i < j");
    if (g.has_edge(i, j)) parse_fail("duplicate edge");
    g.add_edge(i, j);
}

} // namespace

Graph parse_edge_list(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        pos = nl + 1;
    }
    std::size_t k = 0;
    while (k < lines.size() && lines[k].empty()) ++k;
    if (k == lines.size()) parse_fail("missing dimension line");
    const int dim = parse_int_token(lines[k], "dimension");
    if (dim < 1) parse_fail("dimension must be >= 1");
    Graph g(dim);
    for (++k; k < lines.size(); ++k) {
        const std::string_view line = lines[k];
        if (line.empty()) continue;
        const std::size_t sp = line.find(' ');
        if (sp == std::string_view::npos || sp == 0 || sp + 1 >= line.size())
            parse_fail("expected 'i j' on line '" + std::string(line) + "'");
        const std::string_view a = line.substr(0, sp);
        const std::string_view b = line.substr(sp + 1);
        if (b.find(' ') != std::string_view::npos)
            parse_fail("trailing content on line '" + std::string(line) + "'");
        add_checked_edge(g, parse_int_token(a, "vertex"), parse_int_token(b, "vertex"));
    }
    return g;
}

Graph parse_graph_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        parse_fail(std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dimension") || !j.contains("edges"))
        parse_fail("JSON graph needs 'dimension' and 'edges'");
    if (!j["dimension"].is_number_integer()) parse_fail("'dimension' must be an integer");
    const int dim = j["dimension"].get<int>();
    if (dim < 1) parse_fail("dimension must be >= 1");
    Graph g(dim);
    if (!j["edges"].is_array()) parse_fail("'edges' must be an array");
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
            parse_fail("each edge must be a pair of integers");
        add_checked_edge(g, e[0].get<int>(), e[1].get<int>());
    }
    return g;
}

Graph parse_graph(std::string_view text) {
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') return parse_graph_json(text);
    return parse_edge_list(text);
}

std::string serialize_graph(const Graph& g, GraphFormat format) {
    std::ostringstream out;
    switch (format) {
    case GraphFormat::EdgeList:
        out << g.dimension() << '\n';
        for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
        break;
    case GraphFormat::Json: {
        nlohmann::json j;
        j["dimension"] = g.dimension();
        j["edges"] = nlohmann::json::array();
        for (const auto& [a, b] : g.edges()) j["edges"].push_back({a, b});
        out << j.dump(2) << '\n';
        break;
    }
    case GraphFormat::Dot:
        out << "graph G {\n";
        for (int i = 0; i < g.dimension(); ++i) out << "  " << i << ";\n";
        for (const auto& [i, j] : g.edges()) out << "  " << i << " -- " << j << ";\n";
        out << "}\n";
        break;
    }
    return out.str();
}

} // namespace qws
