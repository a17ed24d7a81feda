#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "cbm/graph.hpp"
#include "cbm/trees.hpp"

using namespace cbm;

namespace {

// Decode a Prufer sequence over {0..v-1} into tree edges.
std::vector<Edge> prufer_decode(const std::vector<int>& seq, int v) {
    std::vector<int> deg(v, 1);
    for (int x : seq) ++deg[x];
    std::vector<Edge> es;
    for (int x : seq) {
        int leaf = 0;
        while (deg[leaf] != 1) ++leaf;
        es.push_back(make_edge(leaf, x));
        --deg[leaf];
        --deg[x];
    }
    int u = -1;
    for (int i = 0; i < v; ++i)
        if (deg[i] == 1) {
            if (u < 0) u = i;
            else es.push_back(make_edge(u, i));
        }
    return es;
}

// Labeled-tree count per isomorphism class, keyed by canonical graph form.
std::map<std::string, long long> prufer_classes(int aleph) {
    int v = aleph + 1;
    std::map<std::string, long long> cls;
    if (v == 2) {
        cls[canonical_form(Graph(2, {{0, 1}}))] = 1;
        return cls;
    }
    std::vector<int> seq(v - 2, 0);
    while (true) {
        cls[canonical_form(Graph(v, prufer_decode(seq, v)))]++;
        int i = 0;
        while (i < v - 2 && ++seq[i] == v) seq[i++] = 0;
        if (i == v - 2) break;
    }
    return cls;
}

}  // namespace

TEST_CASE("tree counts match the Prufer oracle") {
    const int want[] = {1, 1, 2, 3, 6, 11, 23};
    for (int a = 1; a <= 7; ++a) {
        const auto& ts = enumerate_trees(a);
        auto cls = prufer_classes(a);
        CHECK(ts.size() == cls.size());
        CHECK(static_cast<int>(ts.size()) == want[a - 1]);
        double fact = std::tgamma(a + 2.0);
        for (const auto& t : ts) {
            auto it = cls.find(canonical_form(t.graph()));
            REQUIRE(it != cls.end());
            // labeled copies on a fixed vertex set = v!/aut
            CHECK(static_cast<double>(it->second) == doctest::Approx(fact / t.aut));
            CHECK(t.aut == automorphism_count(t.graph()));
        }
    }
}

TEST_CASE("small catalogs") {
    const auto& t1 = enumerate_trees(1);
    REQUIRE(t1.size() == 1);
    CHECK(t1[0].aut == 2);
    const auto& t3 = enumerate_trees(3);
    REQUIRE(t3.size() == 2);
    std::multiset<std::uint64_t> auts{t3[0].aut, t3[1].aut};
    CHECK(auts == std::multiset<std::uint64_t>{2, 6});
    CHECK(enumerate_trees(8).size() == 47);
    CHECK(enumerate_trees(10).size() == 235);
    CHECK_THROWS(enumerate_trees(0));
    CHECK_THROWS(enumerate_trees(15));
}

TEST_CASE("canonical labeling is stable") {
    for (int a = 1; a <= 8; ++a)
        for (const auto& t : enumerate_trees(a)) {
            auto c = canonicalize_tree(t.graph());
            CHECK(c.edges == t.edges);
            CHECK(c.code == t.code);
            CHECK(is_forest(t.graph()));
            CHECK(is_connected(t.graph()));
            CHECK(t.graph().num_edges() == a);
        }
}

TEST_CASE("otter estimate") {
    CHECK(otter_estimate(1) == 1.0);
    CHECK(otter_estimate(7) == doctest::Approx(std::pow(23.0, 1.0 / 7)).epsilon(1e-12));
    CHECK(otter_estimate(7) == doctest::Approx(1.565).epsilon(1e-3));
    CHECK(otter_estimate(2) == otter_estimate(1));
    for (int a = 3; a <= 14; ++a) CHECK(otter_estimate(a) > otter_estimate(a - 1));
    CHECK(otter_estimate(14) < 1.0 / 0.338);
}

TEST_CASE("a coefficients") {
    const auto& edge = enumerate_trees(1)[0];
    CHECK(a_coefficient(edge, 4, 1.0) == doctest::Approx(1.0 / 6).epsilon(1e-14));
    const TreeShape* p4 = nullptr;
    for (const auto& t : enumerate_trees(3))
        if (t.aut == 2) p4 = &t;
    REQUIRE(p4);
    CHECK(a_coefficient(*p4, 10, 0.5) == doctest::Approx(0.125 * 2 / (10.0 * 9 * 8 * 7)).epsilon(1e-12));
    CHECK(std::exp(log_a_coefficient(*p4, 10, 0.5)) == doctest::Approx(a_coefficient(*p4, 10, 0.5)).epsilon(1e-12));
    CHECK(labeled_copy_count(10, 4, 2) == doctest::Approx(10.0 * 9 * 8 * 7 / 2));
    CHECK_THROWS(a_coefficient(*p4, 4, 0.5));
}

TEST_CASE("default tree size") {
    CHECK(default_aleph(3000) >= 1);
    CHECK(default_aleph(1000000) >= default_aleph(1000));
}
