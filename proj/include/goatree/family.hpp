#ifndef GOATREE_FAMILY_HPP
#define GOATREE_FAMILY_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "goatree/solver.hpp"
#include "goatree/tree.hpp"

namespace goatree {

enum class OpFailure {
    not_a_support,
    precondition_failed,
    not_adjacent_leaf,
    w_in_a,
    invalid_trace,
};

class OperationError : public std::runtime_error {
public:
    OperationError(OpFailure cause, const std::string& what)
        : std::runtime_error(what), cause_(cause) {}
    OpFailure cause() const { return cause_; }

private:
    OpFailure cause_;
};

struct O1Rec {
    int support;
};
struct O2Rec {
    int support;
};
struct O3Rec {
    int support_w;
    int leaf_v;
    int k;
};
struct O4Rec {
    int w;
    std::vector<int> star_sizes;  // each >= 2
};

using OpRecord = std::variant<O1Rec, O2Rec, O3Rec, O4Rec>;

/// Replayable certificate: base P3 plus an ordered list of operations.
struct ConstructionTrace {
    std::vector<OpRecord> ops;
};

/// A tree in family F together with its tracked distinguished set A(T)
/// and the trace that built it.
struct FTree {
    Tree tree;
    VertexSet a_set;
    ConstructionTrace trace;
};

inline FTree base_p3() {
    return FTree{Tree::from_edges(3, {{0, 1}, {1, 2}}), VertexSet::of(3, {1}), {}};
}

namespace detail {

inline void require_support(const Tree& t, int u, const char* op) {
    if (u < 0 || u >= t.size() || !supports(t).contains(u))
        throw OperationError(OpFailure::not_a_support,
                             std::string(op) + ": vertex " + std::to_string(u) +
                                 " is not a support vertex");
}

inline Tree grow(const Tree& t, int extra, const std::vector<std::pair<int, int>>& new_edges) {
    auto edges = t.edges();
    edges.insert(edges.end(), new_edges.begin(), new_edges.end());
    return Tree::from_edges(t.size() + extra, std::move(edges));
}

inline VertexSet widen(const VertexSet& a, int new_universe) {
    VertexSet out(new_universe);
    for (int v : a.members()) out.insert(v);
    return out;
}

// x (outside A) satisfies |N(x) ∩ A| <= |N[x] ∩ (V-A)| + 1: its own
// constraint would break if an adjacent A-vertex left the set, so x blocks
// that removal unless the replacement lands next to x.
inline bool blocks_removal(const Tree& t, const VertexSet& a, int x) {
    int open_in = 0, closed_out = a.contains(x) ? 0 : 1;
    for (int y : t.neighbors(x))
        (a.contains(y) ? open_in : closed_out)++;
    return open_in <= closed_out + 1;
}

}  // namespace detail

/// O1: attach a new leaf at a support vertex; A unchanged.
inline FTree apply_o1(const FTree& f, int u) {
    detail::require_support(f.tree, u, "O1");
    int n = f.tree.size();
    FTree out{detail::grow(f.tree, 1, {{u, n}}), detail::widen(f.a_set, n + 1), f.trace};
    out.trace.ops.push_back(O1Rec{u});
    return out;
}

/// O2's applicability condition at support vertex u. Attaching the new
/// center raises u's in-A neighborhood, and when deg(u) is even it also
/// lowers the requirement u places on its neighbors by one; with a single
/// leaf this can free u to trade places with that leaf. u is safe when its
/// degree is odd, it keeps two leaves, the trade would break u's own
/// constraint, or a non-leaf neighbor outside A blocks u's removal.
inline bool o2_condition_holds(const Tree& t, const VertexSet& a, int u) {
    int d = t.degree(u);
    if (d % 2 == 1 || leaf_count_at(t, u) >= 2) return true;
    int nbrs_in_a = 0;
    for (int x : t.neighbors(u))
        if (a.contains(x)) ++nbrs_in_a;
    // after the trade u is covered by its leaf, the new center, and its
    // old A-neighbors against a threshold of d/2 + 1
    if (nbrs_in_a + 2 < d / 2 + 1) return true;
    for (int x : t.neighbors(u))
        if (!a.contains(x) && t.degree(x) > 1 && detail::blocks_removal(t, a, x)) return true;
    return false;
}

/// O2: attach a P3 by its center at a support vertex; the new center
/// joins A. New vertices: center n, leaves n+1 and n+2.
inline FTree apply_o2(const FTree& f, int u) {
    detail::require_support(f.tree, u, "O2");
    if (!o2_condition_holds(f.tree, f.a_set, u))
        throw OperationError(OpFailure::precondition_failed,
                             "O2: support " + std::to_string(u) +
                                 " would no longer be in every minimum set");
    int n = f.tree.size();
    FTree out{detail::grow(f.tree, 3, {{u, n}, {n, n + 1}, {n, n + 2}}),
              detail::widen(f.a_set, n + 3), f.trace};
    out.a_set.insert(n);
    out.trace.ops.push_back(O2Rec{u});
    return out;
}

/// O3's applicability condition at support vertex w, required when two or
/// more P2 copies are attached (a single copy keeps the attachment leaf
/// depending on w and is always safe): either l(w) >= 3, or the strict
/// neighborhood inequality at w, or enough non-leaf neighbors outside A
/// block w's removal — one when l(w) = 2, two when l(w) = 1. Leaves of w
/// satisfy the blocking inequality trivially but cannot count: admitting
/// one would let w trade places with it in a second minimum set.
inline bool o3_condition_holds(const Tree& t, const VertexSet& a, int w) {
    if (leaf_count_at(t, w) >= 3) return true;
    int nbrs_in_a = 0, nbrs_out_a = 0;
    for (int x : t.neighbors(w))
        (a.contains(x) ? nbrs_in_a : nbrs_out_a)++;
    int closed_in_a = nbrs_in_a + (a.contains(w) ? 1 : 0);
    if (closed_in_a < nbrs_out_a) return true;
    int lw = leaf_count_at(t, w);
    int satisfying = 0;
    for (int x : t.neighbors(w))
        if (!a.contains(x) && t.degree(x) > 1 && detail::blocks_removal(t, a, x)) ++satisfying;
    if (lw == 2 && satisfying >= 1) return true;
    if (lw == 1 && satisfying >= 2) return true;
    return false;
}

/// O3: add k disjoint P2 copies, joining one endpoint of each to a leaf
/// adjacent to w; those endpoints join A. New vertices per copy:
/// attachment endpoint first, then its leaf.
inline FTree apply_o3(const FTree& f, int w, int leaf_v, int k) {
    detail::require_support(f.tree, w, "O3");
    if (k < 1)
        throw OperationError(OpFailure::precondition_failed, "O3: k must be >= 1");
    if (leaf_v < 0 || leaf_v >= f.tree.size() || f.tree.degree(leaf_v) != 1 ||
        f.tree.neighbors(leaf_v).front() != w)
        throw OperationError(OpFailure::not_adjacent_leaf,
                             "O3: vertex " + std::to_string(leaf_v) +
                                 " is not a leaf adjacent to " + std::to_string(w));
    if (k >= 2 && !o3_condition_holds(f.tree, f.a_set, w))
        throw OperationError(OpFailure::precondition_failed,
                             "O3: support " + std::to_string(w) +
                                 " satisfies neither applicability condition");
    int n = f.tree.size();
    std::vector<std::pair<int, int>> new_edges;
    for (int i = 0; i < k; ++i) {
        int endpoint = n + 2 * i, leaf = n + 2 * i + 1;
        new_edges.emplace_back(leaf_v, endpoint);
        new_edges.emplace_back(endpoint, leaf);
    }
    FTree out{detail::grow(f.tree, 2 * k, new_edges), detail::widen(f.a_set, n + 2 * k), f.trace};
    for (int i = 0; i < k; ++i) out.a_set.insert(n + 2 * i);
    out.trace.ops.push_back(O3Rec{w, leaf_v, k});
    return out;
}

/// O4: at a vertex w outside A with degree q >= 2 and at most one
/// neighbor outside A, attach p subdivided stars SS_{k_i} by their
/// centers, p bounded by q-1 (no outside neighbor) or q-3 (one). The new
/// star supports join A. New vertices per star: center, then supports,
/// then leaves.
inline FTree apply_o4(const FTree& f, int w, const std::vector<int>& star_sizes) {
    if (w < 0 || w >= f.tree.size())
        throw OperationError(OpFailure::precondition_failed, "O4: vertex out of range");
    if (f.a_set.contains(w))
        throw OperationError(OpFailure::w_in_a,
                             "O4: vertex " + std::to_string(w) + " is in A");
    int q = f.tree.degree(w);
    if (q < 2)
        throw OperationError(OpFailure::precondition_failed, "O4: deg(w) must be >= 2");
    int outside = 0;
    for (int x : f.tree.neighbors(w))
        if (!f.a_set.contains(x)) ++outside;
    if (outside > 1)
        throw OperationError(OpFailure::precondition_failed,
                             "O4: w has more than one neighbor outside A");
    int p = static_cast<int>(star_sizes.size());
    int bound = outside == 0 ? q - 1 : q - 3;
    if (p < 1 || p > bound)
        throw OperationError(OpFailure::precondition_failed,
                             "O4: p = " + std::to_string(p) + " violates bound " +
                                 std::to_string(bound));
    for (int ki : star_sizes)
        if (ki < 2)
            throw OperationError(OpFailure::precondition_failed, "O4: each k_i must be >= 2");
    int n = f.tree.size();
    std::vector<std::pair<int, int>> new_edges;
    std::vector<int> new_supports;
    int next = n;
    for (int ki : star_sizes) {
        int center = next;
        new_edges.emplace_back(w, center);
        for (int j = 0; j < ki; ++j) {
            int support = center + 1 + j;
            int leaf = center + 1 + ki + j;
            new_edges.emplace_back(center, support);
            new_edges.emplace_back(support, leaf);
            new_supports.push_back(support);
        }
        next += 1 + 2 * ki;
    }
    FTree out{detail::grow(f.tree, next - n, new_edges), detail::widen(f.a_set, next), f.trace};
    for (int s : new_supports) out.a_set.insert(s);
    out.trace.ops.push_back(O4Rec{w, star_sizes});
    return out;
}

/// Re-applies a trace from the base P3 with full precondition checks.
inline FTree replay(const ConstructionTrace& trace) {
    FTree f = base_p3();
    for (size_t i = 0; i < trace.ops.size(); ++i) {
        try {
            f = std::visit(
                [&](const auto& rec) -> FTree {
                    using R = std::decay_t<decltype(rec)>;
                    if constexpr (std::is_same_v<R, O1Rec>) return apply_o1(f, rec.support);
                    if constexpr (std::is_same_v<R, O2Rec>) return apply_o2(f, rec.support);
                    if constexpr (std::is_same_v<R, O3Rec>)
                        return apply_o3(f, rec.support_w, rec.leaf_v, rec.k);
                    if constexpr (std::is_same_v<R, O4Rec>)
                        return apply_o4(f, rec.w, rec.star_sizes);
                },
                trace.ops[i]);
        } catch (const OperationError& e) {
            throw OperationError(OpFailure::invalid_trace,
                                 "invalid trace at step " + std::to_string(i + 1) + ": " +
                                     e.what());
        }
    }
    return f;
}

// --- trace text form --------------------------------------------------

inline std::string to_text(const ConstructionTrace& trace) {
    std::ostringstream out;
    out << "BASE_P3\n";
    for (const auto& op : trace.ops) {
        std::visit(
            [&](const auto& rec) {
                using R = std::decay_t<decltype(rec)>;
                if constexpr (std::is_same_v<R, O1Rec>) out << "O1 " << rec.support << '\n';
                if constexpr (std::is_same_v<R, O2Rec>) out << "O2 " << rec.support << '\n';
                if constexpr (std::is_same_v<R, O3Rec>)
                    out << "O3 " << rec.support_w << ' ' << rec.leaf_v << ' ' << rec.k << '\n';
                if constexpr (std::is_same_v<R, O4Rec>) {
                    out << "O4 " << rec.w << ' ';
                    for (size_t i = 0; i < rec.star_sizes.size(); ++i)
                        out << (i ? "," : "") << rec.star_sizes[i];
                    out << '\n';
                }
            },
            op);
    }
    return out.str();
}

inline ConstructionTrace trace_from_text(std::string_view text) {
    ConstructionTrace trace;
    std::istringstream in{std::string(text)};
    std::string line;
    bool saw_base = false;
    int lineno = 0;
    auto fail = [&](const std::string& why) {
        throw ParseError("trace line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (!saw_base) {
            if (tag != "BASE_P3") fail("expected BASE_P3");
            saw_base = true;
            continue;
        }
        if (tag == "O1" || tag == "O2") {
            int u;
            if (!(ls >> u)) fail("expected vertex");
            if (tag == "O1")
                trace.ops.push_back(O1Rec{u});
            else
                trace.ops.push_back(O2Rec{u});
        } else if (tag == "O3") {
            int w, v, k;
            if (!(ls >> w >> v >> k)) fail("expected \"O3 w v k\"");
            trace.ops.push_back(O3Rec{w, v, k});
        } else if (tag == "O4") {
            int w;
            std::string sizes;
            if (!(ls >> w >> sizes)) fail("expected \"O4 w k1,k2,...\"");
            std::vector<int> ks;
            std::istringstream ss(sizes);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                try {
                    ks.push_back(std::stoi(tok));
                } catch (const std::exception&) {
                    fail("bad star size list");
                }
            }
            if (ks.empty()) fail("empty star size list");
            trace.ops.push_back(O4Rec{w, std::move(ks)});
        } else {
            fail("unknown record \"" + tag + "\"");
        }
    }
    if (!saw_base) throw ParseError("trace missing BASE_P3 line");
    return trace;
}

// --- random generation ------------------------------------------------

namespace detail {

/// splitmix64; kept explicit so traces are stable across standard
/// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    int below(int m) { return static_cast<int>(next() % static_cast<std::uint64_t>(m)); }
    int pick(const std::vector<int>& xs) { return xs[below(static_cast<int>(xs.size()))]; }

private:
    std::uint64_t state_;
};

}  // namespace detail

/// Builds an FTree by applying `steps` uniformly chosen applicable
/// operations (k <= 4, p <= 3, k_i <= 4). Deterministic for a fixed seed;
/// a draw that is not applicable is retried up to 50 times, then the
/// step is skipped.
inline FTree random_trace(std::uint64_t seed, int steps) {
    detail::Rng rng(seed);
    FTree f = base_p3();
    for (int step = 0; step < steps; ++step) {
        bool applied = false;
        for (int attempt = 0; attempt < 50 && !applied; ++attempt) {
            int op = rng.below(4);
            auto sup = supports(f.tree).members();
            try {
                switch (op) {
                    case 0:
                        f = apply_o1(f, rng.pick(sup));
                        applied = true;
                        break;
                    case 1: {
                        int u = rng.pick(sup);
                        if (!o2_condition_holds(f.tree, f.a_set, u)) break;
                        f = apply_o2(f, u);
                        applied = true;
                        break;
                    }
                    case 2: {
                        int w = rng.pick(sup);
                        int k_max = o3_condition_holds(f.tree, f.a_set, w) ? 4 : 1;
                        std::vector<int> leaf_nbrs;
                        for (int x : f.tree.neighbors(w))
                            if (f.tree.degree(x) == 1) leaf_nbrs.push_back(x);
                        f = apply_o3(f, w, rng.pick(leaf_nbrs), 1 + rng.below(k_max));
                        applied = true;
                        break;
                    }
                    case 3: {
                        std::vector<int> candidates;
                        for (int w = 0; w < f.tree.size(); ++w) {
                            if (f.a_set.contains(w) || f.tree.degree(w) < 2) continue;
                            int outside = 0;
                            for (int x : f.tree.neighbors(w))
                                if (!f.a_set.contains(x)) ++outside;
                            if (outside > 1) continue;
                            int bound = outside == 0 ? f.tree.degree(w) - 1
                                                    : f.tree.degree(w) - 3;
                            if (bound >= 1) candidates.push_back(w);
                        }
                        if (candidates.empty()) break;
                        int w = rng.pick(candidates);
                        int outside = 0;
                        for (int x : f.tree.neighbors(w))
                            if (!f.a_set.contains(x)) ++outside;
                        int bound = outside == 0 ? f.tree.degree(w) - 1 : f.tree.degree(w) - 3;
                        int p = 1 + rng.below(std::min(bound, 3));
                        std::vector<int> sizes;
                        for (int i = 0; i < p; ++i) sizes.push_back(2 + rng.below(3));
                        f = apply_o4(f, w, sizes);
                        applied = true;
                        break;
                    }
                }
            } catch (const OperationError&) {
                // inapplicable draw, retry
            }
        }
    }
    return f;
}

// --- recognition ------------------------------------------------------

enum class RejectReason { not_unique, is_p2, shape_assertion_failed };

struct RecognitionResult {
    enum class Kind { certificate, not_in_family, trivial_k1 } kind;
    // certificate payload
    ConstructionTrace trace;
    VertexSet a_set;  // in the input tree's labels; equals the unique minimum set
    // rejection payload
    RejectReason reason = RejectReason::not_unique;
    std::string detail;

    bool in_family() const { return kind != Kind::not_in_family; }
};

namespace detail {

struct Peel {
    OpRecord rec;              // parameters in ORIGINAL input labels
    std::vector<int> removed;  // original labels, in forward attach order
};

/// Deletes `doomed` (current labels) from cur, relabelling densely; also
/// rewrites orig (current label -> original label) for the survivors.
inline Tree remove_vertices(const Tree& cur, std::vector<int> doomed, std::vector<int>& orig) {
    std::sort(doomed.begin(), doomed.end());
    std::vector<int> relabel(cur.size(), -1);
    std::vector<int> new_orig;
    int next = 0;
    for (int v = 0; v < cur.size(); ++v) {
        if (std::binary_search(doomed.begin(), doomed.end(), v)) continue;
        relabel[v] = next++;
        new_orig.push_back(orig[v]);
    }
    std::vector<std::pair<int, int>> edges;
    for (auto [u, v] : cur.edges())
        if (relabel[u] >= 0 && relabel[v] >= 0)
            edges.emplace_back(relabel[u], relabel[v]);
    orig = std::move(new_orig);
    return Tree::from_edges(next, std::move(edges));
}

}  // namespace detail

/// Decides membership in family F by running the characterization's
/// peeling argument: repeatedly undo the last construction operation,
/// then rebuild forward from the base P3 to obtain a replayable trace.
inline RecognitionResult decompose(const Tree& input) {
    RecognitionResult res;
    if (input.size() == 1) {
        res.kind = RecognitionResult::Kind::trivial_k1;
        res.a_set = VertexSet::of(1, {0});
        return res;
    }
    auto reject = [&](RejectReason reason, std::string why) {
        res.kind = RecognitionResult::Kind::not_in_family;
        res.reason = reason;
        res.detail = std::move(why);
        return res;
    };
    if (input.size() == 2) return reject(RejectReason::is_p2, "P2 has two minimum GOA-sets");

    Tree cur = input;
    std::vector<int> orig(input.size());
    std::iota(orig.begin(), orig.end(), 0);
    std::vector<detail::Peel> peels;
    VertexSet input_witness;

    while (cur.size() > 3) {
        AllianceReport rep = analyze(cur);
        if (!rep.unique)
            return reject(RejectReason::not_unique, "minimum GOA-set is not unique");
        if (peels.empty()) input_witness = rep.witness;
        const VertexSet& d = rep.witness;

        auto to_orig = [&](const std::vector<int>& vs) {
            std::vector<int> out;
            out.reserve(vs.size());
            for (int v : vs) out.push_back(orig[v]);
            return out;
        };
        auto shape_fail = [&](const char* where) {
            return reject(RejectReason::shape_assertion_failed,
                          std::string("shape assertion failed: ") + where);
        };

        // A support with three or more leaves: undo an O1.
        int fat_support = -1;
        for (int s : supports(cur).members())
            if (leaf_count_at(cur, s) >= 3) {
                fat_support = s;
                break;
            }
        if (fat_support >= 0) {
            int leaf = -1;
            for (int x : cur.neighbors(fat_support))
                if (cur.degree(x) == 1) {
                    leaf = x;
                    break;
                }
            peels.push_back({O1Rec{orig[fat_support]}, {orig[leaf]}});
            cur = detail::remove_vertices(cur, {leaf}, orig);
            continue;
        }

        RootedTree rt = root_at(cur, max_eccentricity_vertex(cur));
        // Deepest support; prefer one with two leaves so its extra leaf is
        // undone (O1/O2) before a sibling's subtree is peeled around it.
        int u = -1;
        for (int v : supports(cur).members()) {
            if (u < 0 || rt.depth[v] > rt.depth[u]) {
                u = v;
            } else if (rt.depth[v] == rt.depth[u] && leaf_count_at(cur, u) < 2 &&
                       leaf_count_at(cur, v) == 2) {
                u = v;
            }
        }
        if (u < 0 || rt.parent[u] < 0) return shape_fail("deepest support has no parent");
        int v = rt.parent[u];

        if (d.contains(v)) {
            // Undo an O2: T_u must be u plus exactly two leaf children,
            // and v must stay a support afterwards.
            if (leaf_count_at(cur, u) != 2 || rt.children[u].size() != 2)
                return shape_fail("case 1 expects exactly two leaves below u");
            for (int c : rt.children[u])
                if (cur.degree(c) != 1) return shape_fail("case 1 child of u is not a leaf");
            if (leaf_count_at(cur, v) < 1) return shape_fail("case 1 expects v to be a support");
            std::vector<int> doomed{u, rt.children[u][0], rt.children[u][1]};
            peels.push_back({O2Rec{orig[v]}, to_orig(doomed)});
            cur = detail::remove_vertices(cur, doomed, orig);
            continue;
        }

        if (rt.parent[v] < 0) return shape_fail("v has no parent");
        int w = rt.parent[v];

        // A child of v carrying two leaves: undo an O1 there first.
        int two_leaf_child = -1;
        for (int c : rt.children[v])
            if (leaf_count_at(cur, c) == 2) {
                two_leaf_child = c;
                break;
            }
        if (two_leaf_child >= 0) {
            int leaf = -1;
            for (int x : cur.neighbors(two_leaf_child))
                if (cur.degree(x) == 1) {
                    leaf = x;
                    break;
                }
            peels.push_back({O1Rec{orig[two_leaf_child]}, {orig[leaf]}});
            cur = detail::remove_vertices(cur, {leaf}, orig);
            continue;
        }

        // Below v every child must now be a degree-2 support with a
        // single leaf: T_v - v is a disjoint union of P2 copies.
        for (int c : rt.children[v]) {
            if (cur.degree(c) != 2 || rt.children[c].size() != 1 ||
                cur.degree(rt.children[c][0]) != 1)
                return shape_fail("children of v do not form kP2");
        }
        if (rt.children[v].empty()) return shape_fail("v has no children");

        if (d.contains(w)) {
            // Undo an O3: strip all of T_v except v itself.
            int k = static_cast<int>(rt.children[v].size());
            std::vector<int> doomed;
            for (int c : rt.children[v]) {
                doomed.push_back(c);
                doomed.push_back(rt.children[c][0]);
            }
            if (cur.size() - 2 * k < 3)
                return shape_fail("O3 peel leaves fewer than three vertices");
            peels.push_back({O3Rec{orig[w], orig[v], k}, to_orig(doomed)});
            cur = detail::remove_vertices(cur, doomed, orig);
            continue;
        }

        // Undo an O4: every non-support child of w roots a subdivided star.
        std::vector<int> star_roots;
        VertexSet sup = supports(cur);
        for (int c : rt.children[w])
            if (!sup.contains(c)) star_roots.push_back(c);
        if (star_roots.empty()) return shape_fail("case 2.2 found no star roots");
        bool has_support_child = false;
        for (int c : rt.children[w])
            if (sup.contains(c)) has_support_child = true;
        if (!has_support_child) return shape_fail("case 2.2 expects a support child of w");
        std::vector<int> star_sizes;
        std::vector<int> doomed;
        for (int x : star_roots) {
            int ki = static_cast<int>(rt.children[x].size());
            if (ki < 2) return shape_fail("star at x has fewer than two rays");
            std::vector<int> ray_supports, ray_leaves;
            for (int c : rt.children[x]) {
                if (cur.degree(c) != 2 || rt.children[c].size() != 1 ||
                    cur.degree(rt.children[c][0]) != 1)
                    return shape_fail("subtree at x is not a subdivided star");
                ray_supports.push_back(c);
                ray_leaves.push_back(rt.children[c][0]);
            }
            star_sizes.push_back(ki);
            doomed.push_back(x);
            doomed.insert(doomed.end(), ray_supports.begin(), ray_supports.end());
            doomed.insert(doomed.end(), ray_leaves.begin(), ray_leaves.end());
        }
        if (cur.size() - static_cast<int>(doomed.size()) < 3)
            return shape_fail("O4 peel leaves fewer than three vertices");
        peels.push_back({O4Rec{orig[w], star_sizes}, to_orig(doomed)});
        cur = detail::remove_vertices(cur, doomed, orig);
    }

    // Any 3-vertex tree is a P3; decide the replay labelling of its
    // vertices (leaves ascending -> 0 and 2, center -> 1).
    int center = -1;
    for (int v = 0; v < 3; ++v)
        if (cur.degree(v) == 2) center = v;
    std::vector<int> leaves3;
    for (int v = 0; v < 3; ++v)
        if (v != center) leaves3.push_back(v);
    std::map<int, int> to_replay;
    to_replay[orig[leaves3[0]]] = 0;
    to_replay[orig[center]] = 1;
    to_replay[orig[leaves3[1]]] = 2;

    FTree f = base_p3();
    for (auto it = peels.rbegin(); it != peels.rend(); ++it) {
        int before = f.tree.size();
        try {
            f = std::visit(
                [&](const auto& rec) -> FTree {
                    using R = std::decay_t<decltype(rec)>;
                    if constexpr (std::is_same_v<R, O1Rec>)
                        return apply_o1(f, to_replay.at(rec.support));
                    if constexpr (std::is_same_v<R, O2Rec>)
                        return apply_o2(f, to_replay.at(rec.support));
                    if constexpr (std::is_same_v<R, O3Rec>)
                        return apply_o3(f, to_replay.at(rec.support_w), to_replay.at(rec.leaf_v),
                                        rec.k);
                    if constexpr (std::is_same_v<R, O4Rec>)
                        return apply_o4(f, to_replay.at(rec.w), rec.star_sizes);
                },
                it->rec);
        } catch (const OperationError& e) {
            return reject(RejectReason::shape_assertion_failed,
                          std::string("forward rebuild rejected a peeled operation: ") + e.what());
        }
        for (size_t i = 0; i < it->removed.size(); ++i)
            to_replay[it->removed[i]] = before + static_cast<int>(i);
    }

    if (peels.empty()) {
        // input itself is the P3
        input_witness = VertexSet(3);
        for (int v = 0; v < 3; ++v)
            if (input.degree(v) == 2) input_witness.insert(v);
    }
    res.kind = RecognitionResult::Kind::certificate;
    res.trace = f.trace;
    res.a_set = input_witness;
    return res;
}

}  // namespace goatree

#endif  // GOATREE_FAMILY_HPP
