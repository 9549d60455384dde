#ifndef GOATREE_SOLVER_HPP
#define GOATREE_SOLVER_HPP

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "goatree/tree.hpp"

namespace goatree {

class UniverseMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class TooLarge : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sentinel for "no feasible solution"; strictly greater than any vertex
/// count we handle, saturating under addition.
inline constexpr int kInfeasible = 1 << 28;

inline int sat_add(int a, int b) {
    return std::min(kInfeasible, a + b);
}

/// In-neighbors a vertex outside S must have: ceil((d(v)+1)/2).
inline int goa_threshold(const Tree& t, int v) {
    return t.degree(v) / 2 + 1;
}

/// True iff s is a global offensive alliance set: non-empty, dominating,
/// and every v outside s has |N[v] ∩ s| >= |N[v] - s|.
inline bool is_goa_set(const Tree& t, const VertexSet& s) {
    if (s.universe() != t.size())
        throw UniverseMismatch("vertex set universe does not match tree order");
    if (s.empty()) return false;
    for (int v = 0; v < t.size(); ++v) {
        if (s.contains(v)) continue;
        int inside = 0;
        for (int w : t.neighbors(v))
            if (s.contains(w)) ++inside;
        if (inside == 0) return false;  // undominated (also covers isolated v)
        if (inside < goa_threshold(t, v)) return false;
    }
    return true;
}

struct BruteForceResult {
    int gamma = 0;
    std::vector<VertexSet> min_sets;  // all of them, ascending by member list
};

/// Exhaustive oracle: exact gamma and every minimum GOA-set.
inline BruteForceResult min_goa_bruteforce(const Tree& t, int cap = 20) {
    int n = t.size();
    if (n > cap)
        throw TooLarge("brute force capped at n = " + std::to_string(cap));
    std::vector<std::uint32_t> nbr(n, 0);
    for (int v = 0; v < n; ++v)
        for (int w : t.neighbors(v)) nbr[v] |= std::uint32_t{1} << w;
    auto feasible = [&](std::uint32_t s) {
        for (int v = 0; v < n; ++v) {
            if (s >> v & 1) continue;
            int inside = std::popcount(nbr[v] & s);
            if (inside == 0 || inside < goa_threshold(t, v)) return false;
        }
        return true;
    };
    for (int k = 1; k <= n; ++k) {
        std::vector<std::uint32_t> hits;
        // Gosper's hack over all size-k subsets of 0..n-1.
        std::uint32_t s = (std::uint32_t{1} << k) - 1;
        std::uint32_t limit = std::uint32_t{1} << n;
        while (s < limit) {
            if (feasible(s)) hits.push_back(s);
            std::uint32_t c = s & -s;
            std::uint32_t r = s + c;
            s = (((r ^ s) >> 2) / c) | r;
        }
        if (!hits.empty()) {
            BruteForceResult out;
            out.gamma = k;
            for (std::uint32_t mask : hits) {
                VertexSet vs(n);
                for (int v = 0; v < n; ++v)
                    if (mask >> v & 1) vs.insert(v);
                out.min_sets.push_back(std::move(vs));
            }
            std::sort(out.min_sets.begin(), out.min_sets.end(),
                      [](const VertexSet& a, const VertexSet& b) {
                          return a.members() < b.members();
                      });
            return out;
        }
    }
    throw std::logic_error("unreachable: V itself is always a GOA-set");
}

enum class Force : std::uint8_t { none, in, out };

struct DpResult {
    bool feasible = false;
    int gamma = kInfeasible;
    VertexSet witness;
};

namespace detail {

/// Tree DP for minimum GOA size, optionally with per-vertex membership
/// forced. State per vertex: in/out of S crossed with the parent's state;
/// a vertex outside S needs at least threshold-many neighbors inside,
/// supplied by its children plus possibly the parent.
class GoaDp {
public:
    GoaDp(const Tree& t, std::vector<Force> force)
        : t_(t), rt_(root_at(t, 0)), force_(std::move(force)) {
        int n = t.size();
        in_.assign(n, 0);
        out_.assign(n, {0, 0});
        post_order();
        for (int v : order_) compute(v);
    }

    DpResult solve() {
        DpResult res;
        int root = rt_.root;
        int best_out = out_[root][0];
        int best_in = in_[root];
        if (best_out >= kInfeasible && best_in >= kInfeasible) return res;
        res.feasible = true;
        res.gamma = std::min(best_out, best_in);
        res.witness = VertexSet(t_.size());
        // ties prefer out
        extract(root, best_out > best_in, /*parent_in=*/false, res.witness);
        return res;
    }

private:
    void post_order() {
        order_.clear();
        std::vector<int> stack{rt_.root};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            order_.push_back(v);
            for (int c : rt_.children[v]) stack.push_back(c);
        }
        std::reverse(order_.begin(), order_.end());
    }

    // Minimum summed child cost with at least `need` children in S,
    // optionally recording the chosen in-children.
    int select_children(int v, int need, std::vector<int>* chosen) const {
        int total = 0, count_in = 0;
        struct Flip {
            int delta;
            int child;
        };
        std::vector<Flip> flips;
        std::vector<int> taken;
        for (int c : rt_.children[v]) {
            int cost_in = in_[c];
            int cost_out = out_[c][0];  // child's parent (v) is out here
            if (cost_out <= cost_in) {
                total = sat_add(total, cost_out);
                if (cost_in < kInfeasible) flips.push_back({cost_in - cost_out, c});
            } else {
                total = sat_add(total, cost_in);
                ++count_in;
                if (chosen) taken.push_back(c);
            }
        }
        if (total >= kInfeasible) return kInfeasible;
        if (count_in < need) {
            int more = need - count_in;
            if (static_cast<int>(flips.size()) < more) return kInfeasible;
            std::sort(flips.begin(), flips.end(), [](const Flip& a, const Flip& b) {
                return a.delta != b.delta ? a.delta < b.delta : a.child < b.child;
            });
            for (int i = 0; i < more; ++i) {
                total = sat_add(total, flips[i].delta);
                if (chosen) taken.push_back(flips[i].child);
            }
        }
        if (chosen) {
            std::sort(taken.begin(), taken.end());
            *chosen = std::move(taken);
        }
        return total;
    }

    void compute(int v) {
        int cost = 1;
        for (int c : rt_.children[v])
            cost = sat_add(cost, std::min(in_[c], out_[c][1]));
        in_[v] = force_[v] == Force::out ? kInfeasible : cost;
        for (int ps = 0; ps < 2; ++ps) {
            if (force_[v] == Force::in) {
                out_[v][ps] = kInfeasible;
                continue;
            }
            int need = std::max(0, goa_threshold(t_, v) - ps);
            out_[v][ps] = select_children(v, need, nullptr);
        }
    }

    void extract(int v, bool in_set, bool parent_in, VertexSet& witness) const {
        if (in_set) {
            witness.insert(v);
            for (int c : rt_.children[v])
                extract(c, out_[c][1] > in_[c], /*parent_in=*/true, witness);
        } else {
            int need = std::max(0, goa_threshold(t_, v) - (parent_in ? 1 : 0));
            std::vector<int> chosen;
            select_children(v, need, &chosen);
            for (int c : rt_.children[v]) {
                bool child_in = std::binary_search(chosen.begin(), chosen.end(), c);
                extract(c, child_in, /*parent_in=*/false, witness);
            }
        }
    }

    const Tree& t_;
    RootedTree rt_;
    std::vector<Force> force_;
    std::vector<int> order_;
    std::vector<int> in_;
    std::vector<std::array<int, 2>> out_;
};

}  // namespace detail

/// Exact gamma and one deterministic witness, with optional per-vertex
/// membership constraints.
inline DpResult min_goa_dp(const Tree& t, std::vector<Force> force) {
    if (static_cast<int>(force.size()) != t.size())
        throw UniverseMismatch("force vector length does not match tree order");
    return detail::GoaDp(t, std::move(force)).solve();
}

inline DpResult min_goa_dp(const Tree& t) {
    return min_goa_dp(t, std::vector<Force>(t.size(), Force::none));
}

/// Minimum GOA size with one vertex's membership fixed; infeasible only
/// when forcing an isolated vertex out.
inline int min_goa_dp_forced(const Tree& t, int v, Force state) {
    std::vector<Force> force(t.size(), Force::none);
    force[v] = state;
    return min_goa_dp(t, std::move(force)).gamma;
}

struct AllianceReport {
    int gamma = 0;
    VertexSet witness;
    bool unique = false;
    std::vector<int> forced_in_min;   // min GOA size with v in S
    std::vector<int> forced_out_min;  // min GOA size with v out; kInfeasible for isolated v
};

/// Full analysis: gamma, a witness, and uniqueness decided by 2n forced
/// re-solves. The minimum set is unique iff no vertex attains gamma both
/// ways; in that case it is exactly {v : forced_in_min[v] == gamma}.
inline AllianceReport analyze(const Tree& t) {
    AllianceReport rep;
    DpResult base = min_goa_dp(t);
    rep.gamma = base.gamma;
    rep.witness = base.witness;
    int n = t.size();
    rep.forced_in_min.resize(n);
    rep.forced_out_min.resize(n);
    rep.unique = true;
    for (int v = 0; v < n; ++v) {
        rep.forced_in_min[v] = min_goa_dp_forced(t, v, Force::in);
        rep.forced_out_min[v] = min_goa_dp_forced(t, v, Force::out);
        if (rep.forced_in_min[v] == rep.gamma && rep.forced_out_min[v] == rep.gamma)
            rep.unique = false;
    }
    if (rep.unique) {
        VertexSet s(n);
        for (int v = 0; v < n; ++v)
            if (rep.forced_in_min[v] == rep.gamma) s.insert(v);
        rep.witness = std::move(s);
    }
    return rep;
}

}  // namespace goatree

#endif  // GOATREE_SOLVER_HPP
