#include <doctest.h>

#include <cmath>
#include <vector>

#include "cbm/models.hpp"

using namespace cbm;

namespace {

struct Acc {
    double n = 0, sum = 0, sq = 0;
    void add(double x) {
        n += 1;
        sum += x;
        sq += x * x;
    }
    double mean() const { return sum / n; }
    double var() const { return (sq - sum * sum / n) / (n - 1); }
    double se() const { return std::sqrt(var() / n); }
};

}  // namespace

TEST_CASE("stream seeds are deterministic and separated") {
    CHECK(stream_seed(7, 3, 1) == stream_seed(7, 3, 1));
    CHECK(stream_seed(7, 3, 1) != stream_seed(7, 3, 2));
    CHECK(stream_seed(7, 3, 1) != stream_seed(7, 4, 1));
    CHECK(stream_seed(7, 3, 1) != stream_seed(8, 3, 1));
    Rng a = Rng::derive(1, 2, 3), b = Rng::derive(1, 2, 3);
    CHECK(a.uniform() == b.uniform());
}

TEST_CASE("parameter validation") {
    CHECK_THROWS(ModelParams{1, 1.0, 2, 0.0, 1.0}.validate());
    CHECK_THROWS(ModelParams{100, 1.0, 1, 0.0, 1.0}.validate());
    CHECK_THROWS(ModelParams{100, 1.0, 2, 1.0, 1.0}.validate());
    CHECK_THROWS(ModelParams{100, 1.0, 2, 0.0, 0.0}.validate());
    CHECK_NOTHROW(ModelParams{100, 1.0, 2, 0.5, 0.5}.validate());
}

TEST_CASE("marginal edge probability is lambda/n for any eps") {
    for (int k : {2, 3, 5})
        for (double eps : {0.0, 0.3, 0.9}) {
            ModelParams p{100, 1.5, k, eps, 1.0};
            double m = p.p_in() / k + (k - 1.0) / k * p.p_out();
            CHECK(m == doctest::Approx(1.5 / 100).epsilon(1e-14));
        }
}

TEST_CASE("SBM edge density at eps = 0") {
    ModelParams p{500, 2.0, 2, 0.0, 1.0};
    Acc acc;
    for (int i = 0; i < 5000; ++i) {
        Rng r = Rng::derive(31, i);
        acc.add(sample_sbm(p, r).g.num_edges() / (500.0 * 499 / 2));
    }
    CHECK(std::abs(acc.mean() - 2.0 / 500) <= 3 * acc.se());
}

TEST_CASE("no inter-block edges as eps approaches 1") {
    ModelParams p{1000, 1.0, 2, 1.0 - 1e-12, 1.0};
    for (int i = 0; i < 20; ++i) {
        Rng r = Rng::derive(5, i);
        auto s = sample_sbm(p, r);
        for (const auto& [u, v] : s.g.edges()) CHECK(s.sigma[u] == s.sigma[v]);
    }
}

TEST_CASE("correlated pair at s = 1 is an exact relabeled copy") {
    ModelParams p{300, 2.0, 2, 0.4, 1.0};
    Rng r(8);
    auto cs = sample_correlated(p, r);
    CHECK(cs.a == cs.parent);
    CHECK(cs.b == apply_permutation(cs.parent, cs.pi));
}

TEST_CASE("correlated pair marginals and joint retention") {
    ModelParams p{400, 3.0, 2, 0.3, 0.6};
    Acc da, db;
    double both = 0, parent_edges = 0;
    for (int i = 0; i < 300; ++i) {
        Rng r = Rng::derive(12, i);
        auto cs = sample_correlated(p, r);
        double pairs = 400.0 * 399 / 2;
        da.add(cs.a.num_edges() / pairs);
        db.add(cs.b.num_edges() / pairs);
        for (const auto& [u, v] : cs.parent.edges()) {
            parent_edges += 1;
            both += cs.a.has_edge(u, v) && cs.b.has_edge(cs.pi(u), cs.pi(v));
        }
    }
    double d = p.null_density();
    CHECK(std::abs(da.mean() - d) <= 3 * da.se());
    CHECK(std::abs(db.mean() - d) <= 3 * db.se());
    double f = both / parent_edges;
    double se = std::sqrt(0.36 * 0.64 / parent_edges);
    CHECK(std::abs(f - 0.36) <= 3 * se);
}

TEST_CASE("null pair edge counts and independence") {
    ModelParams p{300, 2.0, 2, 0.0, 0.5};
    Acc ea, eb;
    const double pairs = 300.0 * 299 / 2;
    const double d = p.null_density();
    const int draws = 500;
    std::vector<double> xa, xb;
    for (int i = 0; i < draws; ++i) {
        Rng r = Rng::derive(14, i);
        auto [a, b] = sample_null(p, r);
        ea.add(a.num_edges());
        eb.add(b.num_edges());
        xa.push_back(a.num_edges());
        xb.push_back(b.num_edges());
    }
    CHECK(std::abs(ea.mean() - pairs * d) <= 3 * ea.se());
    CHECK(std::abs(eb.mean() - pairs * d) <= 3 * eb.se());
    // edge counts of the two graphs are uncorrelated across draws
    double c = 0;
    for (int i = 0; i < draws; ++i) c += (xa[i] - ea.mean()) * (xb[i] - eb.mean());
    double corr = c / (draws - 1) / std::sqrt(ea.var() * eb.var());
    CHECK(std::abs(corr) <= 3 / std::sqrt(double(draws)));
}

TEST_CASE("cycle intensity") {
    CHECK(cycle_intensity(3, ModelParams{100, 1.0, 2, 0.0, 1.0}) == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(cycle_intensity(3, ModelParams{100, 1.5, 2, 0.5, 1.0}) == 0.6328125);
    CHECK(cycle_intensity(5, ModelParams{100, 1.3, 4, 0.0, 1.0}) ==
          doctest::Approx(std::pow(1.3, 5) / 10).epsilon(1e-15));
    CHECK_THROWS(cycle_intensity(2, ModelParams{}));
}

TEST_CASE("truncation removes a uniform triangle edge") {
    Graph tri(3, {{0, 1}, {1, 2}, {0, 2}});
    DensityParams dp;
    std::vector<double> hits(3, 0);
    const int draws = 3000;
    for (int i = 0; i < draws; ++i) {
        Rng r = Rng::derive(20, i);
        auto t = truncate_graph(tri, 3, kDefaultVertexCap, dp, r);
        REQUIRE(t.removed.size() == 1);
        CHECK(t.g_prime.num_edges() == 2);
        const Edge& e = t.removed[0];
        hits[e == Edge{0, 1} ? 0 : e == Edge{1, 2} ? 1 : 2] += 1;
    }
    double se = std::sqrt(1.0 / 3 * 2.0 / 3 / draws);
    for (double h : hits) CHECK(std::abs(h / draws - 1.0 / 3) <= 3 * se);

    Graph tree(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}});
    Rng r(1);
    auto t = truncate_graph(tree, 5, kDefaultVertexCap, dp, r);
    CHECK(t.g_prime == tree);
    CHECK(t.removed.empty());
}

TEST_CASE("truncated SBM draws have no short cycles") {
    ModelParams p{1000, 2.0, 2, 0.5, 1.0};
    auto dp = density_params_for(p);
    for (int i = 0; i < 20; ++i) {
        Rng r = Rng::derive(21, i);
        auto t = sample_truncated(p, 6, kDefaultVertexCap, dp, r);
        CHECK(cycles_up_to(t.g_prime, 6).empty());
        CHECK(t.g_prime.num_edges() >= t.g.num_edges() - t.patterns);
    }
}

TEST_CASE("event E") {
    DensityParams dp;
    CHECK(event_E_holds(Graph(5), 5, kDefaultVertexCap, dp));
    CHECK_FALSE(event_E_holds(Graph(3, {{0, 1}, {1, 2}, {0, 2}}), 3, kDefaultVertexCap, dp));

    ModelParams p{2000, 1.0, 2, 0.5, 1.0};
    auto dpp = density_params_for(p);
    double want = 1.0;
    for (int j = 3; j <= 5; ++j) want *= std::exp(-cycle_intensity(j, p));
    Acc acc;
    for (int i = 0; i < 600; ++i) {
        Rng r = Rng::derive(22, i);
        acc.add(event_E_holds(sample_sbm(p, r).g, 5, kDefaultVertexCap, dpp) ? 1.0 : 0.0);
    }
    CHECK(std::abs(acc.mean() - want) <= 3 * acc.se());
}

TEST_CASE("density parameters follow the model") {
    auto dp = density_params_for(ModelParams{100, 0.5, 3, 0.2, 1.0});
    CHECK(dp.lambda_tilde == 1.0);
    CHECK(dp.k == 3);
    CHECK(dp.log_vertex_base() > 0);
    CHECK(dp.log_edge_base() < 0);
}
