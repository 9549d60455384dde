#ifndef GOATREE_TREE_HPP
#define GOATREE_TREE_HPP

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace goatree {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotATreeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Subset of the vertices 0..n-1 of a fixed universe.
class VertexSet {
public:
    VertexSet() = default;
    explicit VertexSet(int universe) : in_(universe, false) {}

    static VertexSet of(int universe, std::initializer_list<int> vs) {
        VertexSet s(universe);
        for (int v : vs) s.insert(v);
        return s;
    }

    int universe() const { return static_cast<int>(in_.size()); }
    int size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool contains(int v) const { return in_[v]; }

    void insert(int v) {
        if (!in_[v]) { in_[v] = true; ++size_; }
    }

    void erase(int v) {
        if (in_[v]) { in_[v] = false; --size_; }
    }

    /// Members in ascending order.
    std::vector<int> members() const {
        std::vector<int> out;
        out.reserve(size_);
        for (int v = 0; v < universe(); ++v)
            if (in_[v]) out.push_back(v);
        return out;
    }

    bool is_subset_of(const VertexSet& other) const {
        for (int v = 0; v < universe(); ++v)
            if (in_[v] && !other.contains(v)) return false;
        return true;
    }

    bool operator==(const VertexSet&) const = default;

private:
    std::vector<bool> in_;
    int size_ = 0;
};

/// Immutable labeled tree on vertices 0..n-1.
///
/// Invariants: exactly n-1 edges, connected, no self-loops or parallel
/// edges; neighbor lists sorted ascending.
class Tree {
public:
    static Tree from_edges(int n, std::vector<std::pair<int, int>> edges) {
        if (n < 1) throw NotATreeError("tree needs at least one vertex");
        if (static_cast<int>(edges.size()) != n - 1)
            throw NotATreeError("a tree on " + std::to_string(n) + " vertices needs exactly " +
                                std::to_string(n - 1) + " edges, got " +
                                std::to_string(edges.size()));
        std::vector<std::vector<int>> adj(n);
        for (auto& [u, v] : edges) {
            if (u < 0 || v < 0 || u >= n || v >= n)
                throw NotATreeError("edge endpoint out of range");
            if (u == v) throw NotATreeError("self-loop at vertex " + std::to_string(u));
            if (u > v) std::swap(u, v);
            adj[u].push_back(v);
            adj[v].push_back(u);
        }
        for (auto& nb : adj) {
            std::sort(nb.begin(), nb.end());
            if (std::adjacent_find(nb.begin(), nb.end()) != nb.end())
                throw NotATreeError("parallel edge");
        }
        // Connectivity; with n-1 edges this also rules out cycles.
        std::vector<char> seen(n, 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        int reached = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    ++reached;
                    stack.push_back(w);
                }
        }
        if (reached != n) throw NotATreeError("graph is disconnected");
        std::sort(edges.begin(), edges.end());
        return Tree(n, std::move(edges), std::move(adj));
    }

    /// Parses the edge-list text format: one "u v" pair per line, '#'
    /// comments, optional leading "n <count>" header. Without a header,
    /// n is 1 + the largest vertex index.
    static Tree parse_edge_list(std::string_view text) {
        std::vector<std::pair<int, int>> edges;
        int declared_n = -1;
        bool first_data_line = true;
        int max_index = -1;
        std::istringstream in{std::string(text)};
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto pos = line.find('#');
            if (pos != std::string::npos) line.erase(pos);
            std::istringstream ls(line);
            std::string a, b, extra;
            if (!(ls >> a)) continue;  // blank
            if (first_data_line && a == "n") {
                first_data_line = false;
                if (!(ls >> declared_n) || declared_n < 1 || (ls >> extra))
                    throw ParseError("line " + std::to_string(lineno) + ": malformed header");
                continue;
            }
            first_data_line = false;
            if (!(ls >> b) || (ls >> extra))
                throw ParseError("line " + std::to_string(lineno) + ": expected \"u v\"");
            int u, v;
            try {
                size_t ua, ub;
                u = std::stoi(a, &ua);
                v = std::stoi(b, &ub);
                if (ua != a.size() || ub != b.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                throw ParseError("line " + std::to_string(lineno) + ": not an integer pair");
            }
            if (u < 0 || v < 0)
                throw ParseError("line " + std::to_string(lineno) + ": negative vertex");
            if (declared_n >= 0 && (u >= declared_n || v >= declared_n))
                throw ParseError("line " + std::to_string(lineno) + ": vertex index exceeds header n");
            max_index = std::max({max_index, u, v});
            edges.emplace_back(u, v);
        }
        int n = declared_n >= 0 ? declared_n : max_index + 1;
        if (n < 1) throw ParseError("empty input");
        return from_edges(n, std::move(edges));
    }

    int size() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }

    std::string to_edge_list() const {
        std::ostringstream out;
        out << "n " << n_ << '\n';
        for (auto [u, v] : edges_) out << u << ' ' << v << '\n';
        return out.str();
    }

    bool operator==(const Tree&) const = default;

private:
    Tree(int n, std::vector<std::pair<int, int>> edges, std::vector<std::vector<int>> adj)
        : n_(n), edges_(std::move(edges)), adj_(std::move(adj)) {}

    int n_ = 0;
    std::vector<std::pair<int, int>> edges_;
    std::vector<std::vector<int>> adj_;
};

/// Degree-1 vertices. The single vertex of K1 has degree 0 and is not
/// a leaf.
inline VertexSet leaves(const Tree& t) {
    VertexSet s(t.size());
    for (int v = 0; v < t.size(); ++v)
        if (t.degree(v) == 1) s.insert(v);
    return s;
}

/// Vertices adjacent to at least one leaf.
inline VertexSet supports(const Tree& t) {
    VertexSet s(t.size());
    for (int v = 0; v < t.size(); ++v) {
        if (t.degree(v) != 1) continue;
        if (t.size() >= 2) s.insert(t.neighbors(v).front());
    }
    return s;
}

/// Number of leaves attached at v, l_T(v).
inline int leaf_count_at(const Tree& t, int v) {
    int count = 0;
    for (int w : t.neighbors(v))
        if (t.degree(w) == 1) ++count;
    return count;
}

namespace detail {

inline std::vector<int> bfs_depths(const Tree& t, int src) {
    std::vector<int> depth(t.size(), -1);
    std::vector<int> queue{src};
    depth[src] = 0;
    for (size_t i = 0; i < queue.size(); ++i) {
        int v = queue[i];
        for (int w : t.neighbors(v))
            if (depth[w] < 0) {
                depth[w] = depth[v] + 1;
                queue.push_back(w);
            }
    }
    return depth;
}

}  // namespace detail

/// An endpoint of a longest path; ties broken by smallest index.
inline int max_eccentricity_vertex(const Tree& t) {
    int best = 0, best_ecc = -1;
    for (int v = 0; v < t.size(); ++v) {
        auto depth = detail::bfs_depths(t, v);
        int ecc = *std::max_element(depth.begin(), depth.end());
        if (ecc > best_ecc) {
            best_ecc = ecc;
            best = v;
        }
    }
    return best;
}

struct RootedTree {
    Tree tree;
    int root = 0;
    std::vector<int> parent;                  // -1 at the root
    std::vector<std::vector<int>> children;   // sorted ascending
    std::vector<int> depth;

    /// v plus all descendants, ascending.
    std::vector<int> subtree_vertices(int v) const {
        std::vector<int> out, stack{v};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            out.push_back(x);
            for (int c : children[x]) stack.push_back(c);
        }
        std::sort(out.begin(), out.end());
        return out;
    }
};

inline RootedTree root_at(const Tree& t, int r) {
    RootedTree rt{t, r,
                  std::vector<int>(t.size(), -1),
                  std::vector<std::vector<int>>(t.size()),
                  detail::bfs_depths(t, r)};
    for (int v = 0; v < t.size(); ++v) {
        if (v == r) continue;
        for (int w : t.neighbors(v))
            if (rt.depth[w] == rt.depth[v] - 1) {
                rt.parent[v] = w;
                rt.children[w].push_back(v);
                break;
            }
    }
    // neighbor lists are sorted, so children already ascend
    return rt;
}

/// The one or two middle vertices of a longest path, by leaf stripping.
inline std::vector<int> tree_centers(const Tree& t) {
    int n = t.size();
    if (n <= 2) {
        std::vector<int> all(n);
        std::iota(all.begin(), all.end(), 0);
        return all;
    }
    std::vector<int> deg(n);
    std::vector<int> frontier;
    for (int v = 0; v < n; ++v) {
        deg[v] = t.degree(v);
        if (deg[v] == 1) frontier.push_back(v);
    }
    int remaining = n;
    while (remaining > 2) {
        std::vector<int> next;
        remaining -= static_cast<int>(frontier.size());
        for (int v : frontier)
            for (int w : t.neighbors(v))
                if (--deg[w] == 1) next.push_back(w);
        frontier = std::move(next);
    }
    std::sort(frontier.begin(), frontier.end());
    return frontier;
}

namespace detail {

inline std::string rooted_code(const Tree& t, int v, int parent, const VertexSet* colors) {
    std::vector<std::string> kids;
    for (int w : t.neighbors(v))
        if (w != parent) kids.push_back(rooted_code(t, w, v, colors));
    std::sort(kids.begin(), kids.end());
    bool marked = colors != nullptr && colors->contains(v);
    std::string out(1, marked ? '{' : '(');
    for (auto& k : kids) out += k;
    out += marked ? '}' : ')';
    return out;
}

inline std::string canonical_code_impl(const Tree& t, const VertexSet* colors) {
    std::string best;
    for (int c : tree_centers(t)) {
        std::string code = rooted_code(t, c, -1, colors);
        if (best.empty() || code < best) best = std::move(code);
    }
    return best;
}

}  // namespace detail

/// AHU canonical form rooted at the center (smaller of the two bicenter
/// codes). Equal codes iff isomorphic.
inline std::string canonical_code(const Tree& t) {
    return detail::canonical_code_impl(t, nullptr);
}

/// Canonical form of the tree together with a distinguished vertex set;
/// equal codes iff there is an isomorphism mapping one set onto the other.
inline std::string canonical_code(const Tree& t, const VertexSet& colors) {
    return detail::canonical_code_impl(t, &colors);
}

}  // namespace goatree

#endif  // GOATREE_TREE_HPP
