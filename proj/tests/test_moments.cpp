#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "cbm/moments.hpp"
#include "cbm/trees.hpp"

using namespace cbm;

namespace {

// E[Abar^r Bbar^t] from the generative description: G ~ Bern(q), J, K ~ Bern(s),
// A = G J, B = G K.
double moment_oracle(int r, int t, bool same, const ModelParams& p) {
    double w = same ? p.k - 1.0 : -1.0;
    double q = (1 + p.eps * w) * p.lambda / p.n;
    double c = p.lambda * p.s / p.n;
    double total = 0;
    for (int g = 0; g < 2; ++g)
        for (int j = 0; j < 2; ++j)
            for (int kk = 0; kk < 2; ++kk) {
                double pr = (g ? q : 1 - q) * (j ? p.s : 1 - p.s) * (kk ? p.s : 1 - p.s);
                total += pr * std::pow(g * j - c, r) * std::pow(g * kk - c, t);
            }
    return total;
}

// E over iid uniform interior labels of prod omega along a path with l edges.
double chain_oracle(int l, double eps, int k, bool equal_ends) {
    int interior = l - 1;
    long long count = 1;
    for (int i = 0; i < interior; ++i) count *= k;
    double sum = 0;
    for (long long code = 0; code < count; ++code) {
        std::vector<int> lab{0};
        long long c = code;
        for (int i = 0; i < interior; ++i) {
            lab.push_back(static_cast<int>(c % k));
            c /= k;
        }
        lab.push_back(equal_ends ? 0 : 1);
        double prod = 1;
        for (int i = 0; i < l; ++i) prod *= 1 + eps * (lab[i] == lab[i + 1] ? k - 1.0 : -1.0);
        sum += prod;
    }
    return sum / count;
}

double labels_oracle(const Graph& g, int k) {
    int n = g.universe();
    long long count = 1;
    for (int i = 0; i < n; ++i) count *= k;
    double sum = 0;
    std::vector<int> lab(n);
    for (long long code = 0; code < count; ++code) {
        long long c = code;
        for (int i = 0; i < n; ++i) {
            lab[i] = static_cast<int>(c % k);
            c /= k;
        }
        double prod = 1;
        for (const auto& [u, v] : g.edges()) prod *= lab[u] == lab[v] ? k - 1.0 : -1.0;
        sum += prod;
    }
    return sum / count;
}

std::vector<Graph> tree_patterns(int n, int max_edges) {
    std::vector<Graph> out;
    for (int a = 1; a <= max_edges; ++a)
        for (const auto& t : enumerate_trees(a)) {
            int v = a + 1;
            std::vector<int> img(v);
            std::set<std::vector<Edge>> seen;
            auto rec = [&](auto&& self, int i, std::vector<char>& used) -> void {
                if (i == v) {
                    std::vector<Edge> es;
                    for (const auto& [x, y] : t.edges) es.push_back(make_edge(img[x], img[y]));
                    std::sort(es.begin(), es.end());
                    if (seen.insert(es).second) out.push_back(Graph::edge_induced(n, es));
                    return;
                }
                for (int w = 0; w < n; ++w) {
                    if (used[w]) continue;
                    used[w] = 1;
                    img[i] = w;
                    self(self, i + 1, used);
                    used[w] = 0;
                }
            };
            std::vector<char> used(n, 0);
            rec(rec, 0, used);
        }
    return out;
}

}  // namespace

TEST_CASE("kernel values") {
    ModelParams p{50, 1.3, 2, 0.4, 0.7};
    CHECK(centered_moment(0, 0, true, p) == doctest::Approx(1.0).epsilon(1e-15));
    double first = 0.4 * 1.3 * 0.7 / 50;
    CHECK(centered_moment_closed(1, 0, true, p) == doctest::Approx(first).epsilon(1e-13));
    CHECK(centered_moment_closed(1, 0, false, p) == doctest::Approx(-first).epsilon(1e-13));
    double a = 0.4 * (1 - 2 * 1.3 / 50), b = 1 - 1.3 / 50;
    CHECK(centered_moment_closed(1, 1, false, p) == doctest::Approx((-a + b) * 1.3 * 0.49 / 50).epsilon(1e-13));
}

TEST_CASE("kernels match the generative oracle") {
    for (int n : {10, 100})
        for (double lam : {0.5, 1.0, 2.0, 3.0})
            for (double eps : {0.0, 0.3, 0.8})
                for (double s : {0.2, 0.6, 1.0})
                    for (int k : {2, 3}) {
                        ModelParams p{n, lam, k, eps, s};
                        if (p.p_in() > 1) continue;
                        for (int same = 0; same < 2; ++same)
                            for (int r = 0; r <= 2; ++r)
                                for (int t = 0; t <= 2; ++t) {
                                    double o = moment_oracle(r, t, same, p);
                                    CHECK(std::abs(centered_moment(r, t, same, p) - o) <= 1e-14);
                                    CHECK(std::abs(centered_moment_closed(r, t, same, p) - o) <= 1e-14);
                                }
                    }
    CHECK_THROWS(centered_moment(3, 0, true, ModelParams{}));
}

TEST_CASE("chain identity") {
    CHECK(chain_expectation(1, 0.3, 2, true) == doctest::Approx(1.3).epsilon(1e-15));
    CHECK(chain_expectation(3, 0.5, 3, false) == doctest::Approx(0.875).epsilon(1e-15));
    CHECK(chain_bruteforce(3, 0.5, 3, false) == doctest::Approx(0.875).epsilon(1e-15));
    for (int l = 1; l <= 6; ++l)
        for (int k : {2, 3, 4})
            for (double eps : {0.0, 0.3, 0.7, 0.99})
                for (bool eq : {false, true}) {
                    double o = chain_oracle(l, eps, k, eq);
                    CHECK(std::abs(chain_expectation(l, eps, k, eq) - o) <= 1e-12);
                    CHECK(std::abs(chain_bruteforce(l, eps, k, eq) - o) <= 1e-12);
                    if (eps == 0.0) CHECK(chain_expectation(l, eps, k, eq) == 1.0);
                }
}

TEST_CASE("orthonormality under the null") {
    ModelParams p{8, 1.5, 2, 0.0, 0.7};
    auto pats = tree_patterns(8, 3);
    REQUIRE(pats.size() == 28 + 168 + 840 + 280);
    Graph empty = Graph::edge_induced(8, {});
    CHECK(exact_phi_expectation_Q(empty, empty, empty, empty, p) == 1.0);
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::size_t> pick(0, pats.size() - 1);
    for (int rep = 0; rep < 20000; ++rep) {
        const Graph& s1 = pats[pick(rng)];
        const Graph& s2 = pats[pick(rng)];
        bool same = rep % 4 == 0;
        const Graph& t1 = same ? s1 : pats[pick(rng)];
        const Graph& t2 = same ? s2 : (rep % 4 == 1 ? s2 : pats[pick(rng)]);
        double want = (s1 == t1 && s2 == t2) ? 1.0 : 0.0;
        CHECK(std::abs(exact_phi_expectation_Q(s1, s2, t1, t2, p) - want) <= 1e-12);
    }
}

TEST_CASE("first moment: two exact paths agree") {
    ModelParams p{4, 1.0, 2, 0.0, 0.5};
    Graph e = Graph::edge_induced(4, {{0, 1}});
    auto v = exact_phi_expectation_P(e, e, p);
    CHECK(std::abs(v.brute - v.decomposed) <= 1e-10);

    std::mt19937_64 rng(4);
    for (int n : {6, 7}) {
        auto pats = tree_patterns(n, 3);
        std::uniform_int_distribution<std::size_t> pick(0, pats.size() - 1);
        for (int rep = 0; rep < 6; ++rep) {
            ModelParams q{n, 1.4, 2 + rep % 2, 0.6, 0.75};
            auto w = exact_phi_expectation_P(pats[pick(rng)], pats[pick(rng)], q);
            CHECK(std::abs(w.brute - w.decomposed) <= 1e-10);
        }
    }
    CHECK_THROWS(exact_phi_expectation_P(Graph::edge_induced(9, {{0, 1}}), Graph::edge_induced(9, {{0, 1}}),
                                         ModelParams{9, 1.0, 2, 0.0, 0.5}));
}

TEST_CASE("first moment of a tree at eps = 0") {
    // At s = 1 a single labeled edge maps onto another with probability 1/6.
    ModelParams p1{4, 1.0, 2, 0.0, 1.0};
    Graph e = Graph::edge_induced(4, {{0, 1}});
    Graph f = Graph::edge_induced(4, {{2, 3}});
    CHECK(exact_phi_expectation_P(e, f, p1).decomposed == doctest::Approx(1.0 / 6).epsilon(1e-12));

    // ratio to a_H is [(1 - lambda/n)/(1 - lambda s/n)]^aleph and increases to 1
    const auto& p3 = enumerate_trees(2)[0];
    double prev = 0;
    for (int n : {6, 7, 8}) {
        ModelParams p{n, 1.2, 2, 0.0, 0.6};
        Graph t = Graph::edge_induced(n, {{0, 1}, {1, 2}});
        Graph u = Graph::edge_induced(n, {{3, 4}, {4, 5}});
        auto v = exact_phi_expectation_P(t, u, p);
        double ratio = v.decomposed / a_coefficient(p3, n, p.s);
        double want = std::pow((1 - 1.2 / n) / (1 - 1.2 * 0.6 / n), 2);
        CHECK(ratio == doctest::Approx(want).epsilon(1e-10));
        CHECK(ratio > prev);
        CHECK(ratio < 1.0);
        prev = ratio;
    }
}

TEST_CASE("sampled first moment is consistent with the exact value") {
    ModelParams p{7, 1.5, 3, 0.5, 0.8};
    Graph s1 = Graph::edge_induced(7, {{0, 1}, {1, 2}});
    Graph s2 = Graph::edge_induced(7, {{2, 3}, {3, 4}});
    double exact = exact_phi_expectation_P(s1, s2, p).decomposed;
    Rng rng(6);
    auto est = phi_expectation_P_sampled(s1, s2, p, 20000, rng);
    CHECK(std::abs(est.mean - exact) <= 3 * est.se);
}

TEST_CASE("label products over forests vanish") {
    CHECK(tree_product_vanishes(Graph::edge_induced(2, {{0, 1}}), 2) == doctest::Approx(0.0));
    CHECK(std::abs(tree_product_vanishes(Graph::edge_induced(4, {{0, 1}, {1, 2}, {2, 3}}), 3)) <= 1e-14);
    Graph tri(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK_THROWS(tree_product_vanishes(tri, 2));
    CHECK_THROWS(tree_product_vanishes(Graph(3), 2));
    for (int k : {2, 3, 4}) CHECK(label_product_expectation(tri, k) == doctest::Approx(labels_oracle(tri, k)));
    CHECK(label_product_expectation(tri, 2) == doctest::Approx(1.0));
    Graph c4(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    CHECK(label_product_expectation(c4, 3) == doctest::Approx(labels_oracle(c4, 3)));
}

TEST_CASE("predicted moments") {
    CHECK(predicted_f_mean(ModelParams{100, 1.0, 2, 0.0, 1.0}, 3) == 2.0);
    CHECK(predicted_f_var_null(ModelParams{100, 1.0, 2, 0.0, 0.8}, 4) == doctest::Approx(0.50331648).epsilon(1e-14));
}
