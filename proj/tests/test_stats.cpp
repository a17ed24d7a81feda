#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "cbm/stats.hpp"
#include "cbm/trees.hpp"

using namespace cbm;

namespace {

// Sum of psi over distinct labeled copies of the shape (edge sets), i.e.
// W without going through maps and automorphisms.
double copies_oracle(const TreeShape& h, const CenteredMatrix& x) {
    const int n = x.n(), v = h.aleph + 1;
    std::set<std::vector<Edge>> copies;
    std::vector<int> img(v);
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == v) {
            std::vector<Edge> es;
            for (const auto& [a, b] : h.edges) es.push_back(make_edge(img[a], img[b]));
            std::sort(es.begin(), es.end());
            copies.insert(es);
            return;
        }
        for (int w = 0; w < n; ++w) {
            if (used[w]) continue;
            used[w] = 1;
            img[i] = w;
            self(self, i + 1);
            used[w] = 0;
        }
    };
    rec(rec, 0);
    double total = 0;
    for (const auto& es : copies) total += psi(Graph::edge_induced(n, es), x);
    return total;
}

}  // namespace

TEST_CASE("psi") {
    CenteredMatrix x(Graph(4, {{0, 1}}), 2.5, -0.5);
    CHECK(psi(Graph::edge_induced(4, {}), x) == 1.0);
    CHECK(psi(Graph::edge_induced(4, {{0, 1}}), x) == 2.5);
    CHECK(psi(Graph::edge_induced(4, {{1, 2}, {2, 3}}), x) == 0.25);
    auto y = CenteredMatrix::from_density(Graph(10), 0.1);
    CHECK(y.edge_value() == doctest::Approx(0.9 / std::sqrt(0.09)));
    CHECK(y.nonedge_value() == doctest::Approx(-0.1 / std::sqrt(0.09)));
}

TEST_CASE("exact W on hand-checkable inputs") {
    const auto& edge = enumerate_trees(1)[0];
    auto empty3 = CenteredMatrix::from_density(Graph(3), 0.2);
    CHECK(w_exact(edge, empty3) == doctest::Approx(3 * empty3.nonedge_value()).epsilon(1e-14));
    std::vector<Edge> all;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j) all.push_back({i, j});
    auto full = CenteredMatrix::from_density(Graph(6, all), 0.2);
    CHECK(w_exact(edge, full) == doctest::Approx(15 * full.edge_value()).epsilon(1e-14));

    CenteredMatrix x(Graph(4, {{0, 1}, {1, 2}, {0, 3}}), 1.7, -0.3);
    const auto& p3 = enumerate_trees(2)[0];
    CHECK(w_exact(p3, x) == doctest::Approx(copies_oracle(p3, x)).epsilon(1e-13));
    for (int a = 1; a <= 4; ++a)
        for (const auto& h : enumerate_trees(a)) {
            CenteredMatrix z(Graph(7, {{0, 1}, {1, 2}, {2, 3}, {0, 4}, {4, 5}, {5, 6}, {2, 6}}), 1.3, -0.2);
            CHECK(w_exact(h, z) == doctest::Approx(copies_oracle(h, z)).epsilon(1e-12));
        }
}

TEST_CASE("color coding is unbiased") {
    Rng g(3);
    Graph base = sample_er(12, 0.3, g);
    auto x = CenteredMatrix::from_density(base, 0.25);
    for (int a = 1; a <= 2; ++a)
        for (const auto& h : enumerate_trees(a)) {
            Rng rng(40 + a);
            auto est = w_color_coding(h, x, 10000, rng);
            CHECK(std::abs(est.mean - w_exact(h, x)) <= 3 * est.se);
        }
    CenteredMatrix zero(base, 0.0, 0.0);
    Rng rng(1);
    CHECK(w_color_coding(enumerate_trees(3)[0], zero, 50, rng).mean == 0.0);
}

TEST_CASE("split and naive messages agree per coloring") {
    Rng g(5);
    Graph base = sample_er(15, 0.25, g);
    auto x = CenteredMatrix::from_density(base, 0.2);
    Rng rng(9);
    for (int a = 2; a <= 5; ++a)
        for (const auto& h : enumerate_trees(a)) {
            std::vector<int> colors(15);
            for (auto& c : colors) c = rng.uniform_int(0, a);
            double s = color_coding_once(h, x, colors, MessageForm::split);
            double n = color_coding_once(h, x, colors, MessageForm::naive);
            CHECK(s == doctest::Approx(n).epsilon(1e-10).scale(1.0));
        }
}

TEST_CASE("forest expansion equals the exact embedding sum") {
    for (int seed = 0; seed < 3; ++seed) {
        Rng g(100 + seed);
        Graph base = sample_er(10, 0.35, g);
        auto x = CenteredMatrix::from_density(base, 0.3);
        ForestCounter fc(base);
        for (int a = 1; a <= 6; ++a)
            for (const auto& h : enumerate_trees(a)) {
                double ref = w_exact(h, x);
                CHECK(w_expansion(h, x, fc) == doctest::Approx(ref).epsilon(1e-9).scale(1.0));
            }
    }
}

TEST_CASE("forest counts against brute force") {
    // Two disjoint edges in a 5-cycle: injective copies of the forest.
    Graph c5(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
    ForestCounter fc(c5);
    const auto& edge = enumerate_trees(1)[0];
    CHECK(fc.tree_count(edge.code) == doctest::Approx(10.0));  // ordered maps: 2 per edge
    // ordered pairs of vertex-disjoint oriented edges: each of the 5 edges has
    // 2 disjoint partners, 4 orientations
    CHECK(fc.count({edge.code, edge.code}) == doctest::Approx(5 * 2 * 4.0));
    const auto& p3 = enumerate_trees(2)[0];
    CHECK(fc.tree_count(p3.code) == doctest::Approx(10.0));
    // P3 on three consecutive vertices leaves exactly one disjoint edge
    std::vector<std::string> mixed{edge.code, p3.code};
    std::sort(mixed.begin(), mixed.end());
    CHECK(fc.count(mixed) == doctest::Approx(10 * 2.0));
}

TEST_CASE("tree statistic: fast paths match the double sum") {
    ModelParams p{8, 2.0, 2, 0.4, 0.8};
    for (int seed = 0; seed < 4; ++seed) {
        Rng rng(seed);
        auto cs = sample_correlated(p, rng);
        for (int a = 1; a <= 2; ++a) {
            double direct = f_tree_stat_direct(cs.a, cs.b, p, a);
            auto fast = f_tree_stat(cs.a, cs.b, p, a, TreeMethod::exact, 0, rng);
            auto brute = f_tree_stat(cs.a, cs.b, p, a, TreeMethod::brute_force, 0, rng);
            CHECK(fast.value == doctest::Approx(direct).epsilon(1e-10).scale(1.0));
            CHECK(brute.value == doctest::Approx(direct).epsilon(1e-10).scale(1.0));
        }
    }
    ModelParams q{11, 3.0, 2, 0.2, 0.9};
    Rng rng(77);
    auto cs = sample_correlated(q, rng);
    auto fast = f_tree_stat(cs.a, cs.b, q, 4, TreeMethod::exact, 0, rng);
    auto brute = f_tree_stat(cs.a, cs.b, q, 4, TreeMethod::brute_force, 0, rng);
    CHECK(fast.value == doctest::Approx(brute.value).epsilon(1e-9).scale(1.0));
    CHECK(fast.per_shape.size() == 3);
}

TEST_CASE("tree statistic under the null has mean zero") {
    ModelParams p{150, 1.5, 2, 0.0, 0.8};
    double sum = 0, sq = 0;
    const int draws = 400;
    for (int i = 0; i < draws; ++i) {
        Rng r = Rng::derive(55, i);
        auto [a, b] = sample_null(p, r);
        double f = f_tree_stat(a, b, p, 3, TreeMethod::exact, 0, r).value;
        sum += f;
        sq += f * f;
    }
    double mean = sum / draws, var = (sq - sum * sum / draws) / (draws - 1);
    CHECK(std::abs(mean) <= 3 * std::sqrt(var / draws));
}

TEST_CASE("default repetitions") {
    CHECK(default_reps(1) >= 1);
    for (int a = 2; a <= 8; ++a) CHECK(default_reps(a) >= default_reps(a - 1));
}

TEST_CASE("threshold rule") {
    ModelParams p{1000, 1.0, 2, 0.0, 0.8};
    CHECK_FALSE(threshold_test(0.0, p, 4, 0.5));
    double full = std::pow(0.8, 8) * 3;
    CHECK(threshold_test(full, p, 4, 0.5));
    CHECK(threshold_test(threshold_value(p, 4, 0.5), p, 4, 0.5));
    CHECK(threshold_value(p, 4, 0.5) == doctest::Approx(0.5 * full));
    CHECK_THROWS(threshold_value(p, 4, 1.5));
}

TEST_CASE("cycle count test") {
    ModelParams p{1000, 1.0, 2, 0.0, 1.0};
    CHECK(cycle_count_test(Graph(1000), 3, p) == doctest::Approx(-std::sqrt(1.0 / 6)).epsilon(1e-12));
    CHECK(cycle_count_test(Graph(1000), 3, p) == doctest::Approx(-0.408).epsilon(1e-3));

    ModelParams q{2000, 1.5, 2, 0.0, 1.0};
    double sum = 0, sq = 0;
    for (int i = 0; i < 2000; ++i) {
        Rng r = Rng::derive(60, i);
        double z = cycle_count_test(sample_er(2000, q.null_density(), r), 3, q);
        sum += z;
        sq += z * z;
    }
    double mean = sum / 2000, var = (sq - sum * sum / 2000) / 1999;
    CHECK(std::abs(mean) <= 3 * std::sqrt(var / 2000));

    ModelParams pl{2000, 1.5, 2, 0.9, 1.0};
    double c4 = 0, c4sq = 0;
    for (int i = 0; i < 2000; ++i) {
        Rng r = Rng::derive(61, i);
        double c = static_cast<double>(count_cycles(sample_sbm(pl, r).g, 4)[4]);
        c4 += c;
        c4sq += c * c;
    }
    double m4 = c4 / 2000, v4 = (c4sq - c4 * c4 / 2000) / 1999;
    CHECK(std::abs(m4 - (1 + std::pow(0.9, 4)) * std::pow(1.5, 4) / 8) <= 3 * std::sqrt(v4 / 2000));
}

TEST_CASE("method names") {
    CHECK(tree_method_from_string(to_string(TreeMethod::exact)) == TreeMethod::exact);
    CHECK(tree_method_from_string("cc") == TreeMethod::color_coding);
    CHECK_THROWS(tree_method_from_string("fast"));
}
