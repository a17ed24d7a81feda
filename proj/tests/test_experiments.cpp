#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cbm/experiments.hpp"

using namespace cbm;

TEST_CASE("spearman") {
    CHECK(spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
    CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
    // d = (0, 0, 1, -1): 1 - 6*2/(4*15)
    CHECK(spearman({1, 2, 3, 4}, {1, 2, 4, 3}) == doctest::Approx(0.8));
    // ties take average ranks
    CHECK(spearman({1, 2, 3}, {5, 5, 7}) == doctest::Approx(std::sqrt(3.0) / 2));
    CHECK_THROWS(spearman({1}, {1}));
}

TEST_CASE("sweep configuration checks") {
    SweepConfig c;
    c.base = ModelParams{200, 1.0, 2, 0.2, 1.0};
    c.s_grid = {0.5, 0.4};
    CHECK_THROWS(c.validate());
    c.s_grid = {0.4, 0.5};
    c.trials = 1;
    CHECK_THROWS(c.validate());
    c.trials = 2;
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("reference lines") {
    auto r = reference_lines(ModelParams{3000, 1.2, 2, 0.3, 1.0});
    CHECK(r.sqrt_alpha == doctest::Approx(0.58137767).epsilon(1e-7));
    CHECK(r.ks_s == doctest::Approx(1.0 / (1.2 * 0.09)));
    CHECK(std::isinf(reference_lines(ModelParams{3000, 1.2, 2, 0.0, 1.0}).ks_s));
}

TEST_CASE("two trials run and report") {
    auto row = run_detection(ModelParams{200, 1.0, 2, 0.0, 0.5}, 3, 2, 4, TreeMethod::exact, 0, 0.5);
    CHECK(row.trials == 2);
    CHECK(row.values_P.size() == 2);
    CHECK(row.type_I >= 0.0);
    CHECK(row.type_I <= 1.0);
    CHECK(row.type_II >= 0.0);
    CHECK(row.type_II <= 1.0);
}

TEST_CASE("sweep output is reproducible") {
    SweepConfig c;
    c.base = ModelParams{300, 1.2, 2, 0.3, 1.0};
    c.s_grid = {0.5, 0.9};
    c.aleph = 4;
    c.trials = 10;
    c.seed = 99;
    auto r1 = sweep(c), r2 = sweep(c);
    std::ostringstream a, b;
    write_csv(a, r1);
    write_csv(b, r2);
    CHECK(a.str() == b.str());
    CHECK(to_json(r1).dump() == to_json(r2).dump());
    CHECK(a.str().find("s,mean_P,sd_P,mean_Q,sd_Q,z_separation,type_I,type_II") != std::string::npos);
    for (const auto& row : r1.per_s) {
        CHECK(row.type_I + row.type_II <= 1.0 + 2.0 / std::sqrt(10.0));
        if (!row.degenerate)
            CHECK(row.z_separation ==
                  doctest::Approx((row.mean_P - row.mean_Q) / std::max(row.sd_P, row.sd_Q)));
    }
    c.seed = 100;
    std::ostringstream d;
    write_csv(d, sweep(c));
    CHECK(d.str() != a.str());
}

TEST_CASE("full signal separates, deep hard phase does not") {
    ModelParams p{300, 2.0, 2, 0.0, 1.0};
    const int trials = 400;
    auto easy = run_detection(p, 3, trials, 7, TreeMethod::exact, 0, 0.5);
    double se = std::sqrt((easy.sd_P * easy.sd_P + easy.sd_Q * easy.sd_Q) / trials);
    CHECK(easy.mean_P - easy.mean_Q >= 3 * se);
    CHECK(easy.type_I + easy.type_II < 0.8);
    p.s = 0.2;
    auto hard = run_detection(p, 3, trials, 7, TreeMethod::exact, 0, 0.5);
    CHECK(std::abs(hard.z_separation) <= 0.5);
}

TEST_CASE("verification suite") {
    auto rep = run_verification_suite(1);
    for (const auto& c : rep.checks) {
        INFO(c.name << " observed " << c.observed << " " << c.detail);
        CHECK(c.pass);
    }
    auto other = run_verification_suite(2);
    REQUIRE(other.checks.size() == rep.checks.size());
    for (std::size_t i = 0; i < rep.checks.size(); ++i) CHECK(other.checks[i].pass == rep.checks[i].pass);

    VerifyOptions mutated;
    mutated.cycle_intensity_scale = 1.5;
    auto bad = run_verification_suite(1, mutated);
    bool poisson_failed = false;
    for (const auto& c : bad.checks)
        if (c.name == "models.poisson_cycle_mean") poisson_failed = !c.pass;
    CHECK(poisson_failed);
    CHECK_FALSE(bad.all_pass());
}
