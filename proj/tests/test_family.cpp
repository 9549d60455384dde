#include <catch2/catch_amalgamated.hpp>

#include "goatree/enumerate.hpp"
#include "goatree/family.hpp"
#include "goatree/solver.hpp"

using namespace goatree;

TEST_CASE("base_p3") {
    FTree f = base_p3();
    CHECK(f.tree.size() == 3);
    CHECK(f.a_set.members() == std::vector<int>{1});
    CHECK(f.trace.ops.empty());
    auto rep = analyze(f.tree);
    CHECK(rep.gamma == 1);
    CHECK(rep.unique);
    CHECK(supports(f.tree).is_subset_of(f.a_set));
}

TEST_CASE("apply_o1") {
    FTree k13 = apply_o1(base_p3(), 1);
    CHECK(k13.tree.size() == 4);
    CHECK(k13.tree.degree(1) == 3);
    CHECK(k13.a_set.members() == std::vector<int>{1});

    FTree k14 = apply_o1(k13, 1);
    CHECK(k14.tree.degree(1) == 4);
    CHECK(k14.a_set.members() == std::vector<int>{1});

    CHECK_THROWS_AS(apply_o1(base_p3(), 0), OperationError);  // leaf, not support
}

TEST_CASE("apply_o2") {
    FTree spider = apply_o2(base_p3(), 1);
    CHECK(spider.tree.size() == 6);
    CHECK(spider.a_set.members() == std::vector<int>{1, 3});
    auto rep = analyze(spider.tree);
    CHECK(rep.gamma == 2);
    CHECK(rep.unique);
    CHECK(rep.witness == spider.a_set);

    CHECK_THROWS_AS(apply_o2(base_p3(), 2), OperationError);
}

TEST_CASE("apply_o3 builds P5 from P3") {
    FTree p5 = apply_o3(base_p3(), 1, 2, 1);
    CHECK(p5.tree.size() == 5);
    CHECK(p5.a_set.members() == std::vector<int>{1, 3});
    auto rep = analyze(p5.tree);
    CHECK(rep.unique);
    CHECK(rep.witness == p5.a_set);

    SECTION("leaf must be adjacent to w") {
        CHECK_THROWS_AS(apply_o3(base_p3(), 1, 1, 1), OperationError);
    }
    SECTION("precondition can fail for k >= 2") {
        // in the spider the support 3 has two leaves and no blocking
        // neighbor, so attaching two copies would let 3 trade places
        // with its remaining leaf
        FTree spider = apply_o2(base_p3(), 1);  // A = {1,3}
        REQUIRE_FALSE(o3_condition_holds(spider.tree, spider.a_set, 3));
        bool threw = false;
        try {
            apply_o3(spider, 3, 4, 2);
        } catch (const OperationError& e) {
            threw = true;
            CHECK(e.cause() == OpFailure::precondition_failed);
        }
        CHECK(threw);

        // a single copy at the same site is always safe
        FTree one = apply_o3(spider, 3, 4, 1);
        auto one_rep = analyze(one.tree);
        CHECK(one_rep.unique);
        CHECK(one_rep.witness == one.a_set);
    }
}

TEST_CASE("apply_o2 rejects a support it would unpin") {
    // after four P2 copies below vertex 0, support 1 is held in A only by
    // its leaf 2; an attached center would let 1 trade places with 2
    FTree t11 = apply_o3(base_p3(), 1, 0, 4);
    REQUIRE(analyze(t11.tree).unique);
    REQUIRE_FALSE(o2_condition_holds(t11.tree, t11.a_set, 1));
    bool threw = false;
    try {
        apply_o2(t11, 1);
    } catch (const OperationError& e) {
        threw = true;
        CHECK(e.cause() == OpFailure::precondition_failed);
    }
    CHECK(threw);
}

TEST_CASE("apply_o4 on P5") {
    FTree p5 = apply_o3(base_p3(), 1, 2, 1);  // A = {1,3}, w = 2 has q = 2
    FTree grown = apply_o4(p5, 2, {2});
    CHECK(grown.tree.size() == 10);
    CHECK(grown.a_set.members() == std::vector<int>{1, 3, 6, 7});
    CHECK(min_goa_bruteforce(grown.tree).gamma == 4);
    CHECK(min_goa_dp(grown.tree).gamma == 4);

    CHECK_THROWS_AS(apply_o4(p5, 2, {2, 2}), OperationError);  // p <= q-1 = 1
    CHECK_THROWS_AS(apply_o4(p5, 1, {2}), OperationError);     // w in A
    CHECK_THROWS_AS(apply_o4(p5, 2, {1}), OperationError);     // k_i >= 2
}

TEST_CASE("random_trace determinism and replay round trip") {
    CHECK(random_trace(123, 0).tree.size() == 3);
    for (std::uint64_t seed : {1ULL, 42ULL, 999ULL}) {
        FTree a = random_trace(seed, 10);
        FTree b = random_trace(seed, 10);
        CHECK(a.tree == b.tree);
        CHECK(a.a_set == b.a_set);

        FTree replayed = replay(a.trace);
        CHECK(replayed.tree == a.tree);
        CHECK(replayed.a_set == a.a_set);
    }
}

TEST_CASE("generated family members have A as the unique minimum set") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        FTree f = random_trace(seed, 8);
        CHECK(supports(f.tree).is_subset_of(f.a_set));
        for (int v : leaves(f.tree).members()) CHECK_FALSE(f.a_set.contains(v));
        auto rep = analyze(f.tree);
        CHECK(rep.unique);
        CHECK(rep.witness == f.a_set);
        CHECK(rep.gamma >= supports(f.tree).size());
    }
}

TEST_CASE("per-operation gamma deltas and A growth") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        FTree f = random_trace(seed, 6);
        int before = min_goa_dp(f.tree).gamma;
        VertexSet sup_before = supports(f.tree);

        FTree after_o1 = apply_o1(f, supports(f.tree).members().front());
        CHECK(min_goa_dp(after_o1.tree).gamma == before);
        CHECK(after_o1.a_set.members() == f.a_set.members());

        for (int u : supports(f.tree).members()) {
            if (!o2_condition_holds(f.tree, f.a_set, u)) continue;
            FTree after_o2 = apply_o2(f, u);
            CHECK(min_goa_dp(after_o2.tree).gamma == before + 1);
            CHECK(after_o2.a_set.size() == f.a_set.size() + 1);
            break;
        }

        for (int w : supports(f.tree).members()) {
            if (!o3_condition_holds(f.tree, f.a_set, w)) continue;
            int leaf = -1;
            for (int x : f.tree.neighbors(w))
                if (f.tree.degree(x) == 1) leaf = x;
            for (int k = 1; k <= 3; ++k) {
                FTree after = apply_o3(f, w, leaf, k);
                CHECK(min_goa_dp(after.tree).gamma == before + k);
                CHECK(after.a_set.size() == f.a_set.size() + k);
                // A gains exactly the new support vertices
                for (int v = f.tree.size(); v < after.tree.size(); ++v)
                    CHECK(after.a_set.contains(v) == supports(after.tree).contains(v));
            }
            break;
        }
    }
}

TEST_CASE("o4 delta equals the star size total") {
    int checked = 0;
    for (std::uint64_t seed = 0; seed < 80 && checked < 10; ++seed) {
        FTree f = random_trace(seed, 6);
        for (int w = 0; w < f.tree.size(); ++w) {
            if (f.a_set.contains(w) || f.tree.degree(w) < 2) continue;
            int outside = 0;
            for (int x : f.tree.neighbors(w))
                if (!f.a_set.contains(x)) ++outside;
            if (outside > 1) continue;
            int bound = outside == 0 ? f.tree.degree(w) - 1 : f.tree.degree(w) - 3;
            if (bound < 2) continue;
            FTree after = apply_o4(f, w, {2, 3});
            CHECK(min_goa_dp(after.tree).gamma == min_goa_dp(f.tree).gamma + 5);
            ++checked;
            break;
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("trace text round trip") {
    FTree f = random_trace(77, 12);
    ConstructionTrace parsed = trace_from_text(to_text(f.trace));
    FTree replayed = replay(parsed);
    CHECK(replayed.tree == f.tree);
    CHECK(replayed.a_set == f.a_set);

    CHECK_THROWS_AS(trace_from_text("O1 1\n"), ParseError);          // missing base
    CHECK_THROWS_AS(trace_from_text("BASE_P3\nO9 1\n"), ParseError);  // unknown record
}

TEST_CASE("replay validates preconditions") {
    ConstructionTrace bad;
    bad.ops.push_back(O1Rec{0});  // 0 is a leaf of the base P3
    bool threw = false;
    try {
        replay(bad);
    } catch (const OperationError& e) {
        threw = true;
        CHECK(e.cause() == OpFailure::invalid_trace);
    }
    CHECK(threw);
}

TEST_CASE("decompose small cases") {
    Tree p4 = Tree::parse_edge_list("0 1\n1 2\n2 3\n");
    auto rr = decompose(p4);
    CHECK_FALSE(rr.in_family());
    CHECK(rr.reason == RejectReason::not_unique);

    auto k1 = decompose(Tree::parse_edge_list("n 1\n"));
    CHECK(k1.kind == RecognitionResult::Kind::trivial_k1);

    auto p2 = decompose(Tree::parse_edge_list("0 1\n"));
    CHECK(p2.reason == RejectReason::is_p2);

    auto p3 = decompose(Tree::parse_edge_list("0 1\n1 2\n"));
    CHECK(p3.kind == RecognitionResult::Kind::certificate);
    CHECK(p3.trace.ops.empty());
    CHECK(p3.a_set.members() == std::vector<int>{1});
}

TEST_CASE("decompose K_{1,4} yields base plus two O1 steps") {
    Tree k14 = Tree::parse_edge_list("0 1\n0 2\n0 3\n0 4\n");
    auto rr = decompose(k14);
    REQUIRE(rr.kind == RecognitionResult::Kind::certificate);
    REQUIRE(rr.trace.ops.size() == 2);
    for (const auto& op : rr.trace.ops) CHECK(std::holds_alternative<O1Rec>(op));
    CHECK(rr.a_set.members() == std::vector<int>{0});
    FTree g = replay(rr.trace);
    CHECK(canonical_code(g.tree) == canonical_code(k14));
}

TEST_CASE("wounded spiders with one non-subdivided edge are rejected") {
    for (int r = 2; r <= 6; ++r) {
        // K_{1,r} with r-1 edges subdivided: center 0, rays 1..r,
        // subdividers r+1..2r-1 on rays 2..r
        std::vector<std::pair<int, int>> edges;
        edges.emplace_back(0, 1);  // the lone non-subdivided edge
        for (int i = 2; i <= r; ++i) {
            int mid = r + i - 1;
            edges.emplace_back(0, mid);
            edges.emplace_back(mid, i);
        }
        Tree t = Tree::from_edges(2 * r, std::move(edges));
        auto rr = decompose(t);
        CHECK_FALSE(rr.in_family());
        CHECK(rr.reason == RejectReason::not_unique);
        CHECK_FALSE(analyze(t).unique);
    }
}

TEST_CASE("decompose certificates replay to the same tree with the same set") {
    // two op counts so deep members with stacked attachments are covered
    for (int ops : {7, 10}) {
        for (std::uint64_t seed = 0; seed < 60; ++seed) {
            FTree f = random_trace(seed, ops);
            auto rr = decompose(f.tree);
            REQUIRE(rr.kind == RecognitionResult::Kind::certificate);
            FTree g = replay(rr.trace);
            CHECK(canonical_code(g.tree) == canonical_code(f.tree));
            CHECK(canonical_code(g.tree, g.a_set) == canonical_code(f.tree, f.a_set));
            CHECK(rr.a_set == f.a_set);
        }
    }
}
