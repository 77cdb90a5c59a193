#include <cmath>

#include <gtest/gtest.h>
#include <json.hpp>

#include "covertsim/theory.hpp"
#include "oracles.hpp"

using namespace covertsim;

namespace {

LrtConfig exp_cfg(std::int64_t n, std::int64_t M, double sigma_a2)
{
    LrtConfig c;
    c.variant = M == 1 ? LrtVariant::M1Exponential : LrtVariant::MBlockProduct;
    c.n = n;
    c.M = M;
    c.sigma_a2 = sigma_a2;
    return c;
}

double log_normal_pdf(double x, double mu, double var)
{
    return -0.5 * std::log(2 * M_PI * var) - (x - mu) * (x - mu) / (2 * var);
}

} // namespace

TEST(Grids, EndpointsAndSpacing)
{
    const auto g = geometric_grid(0.01, 100.0, 5);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_DOUBLE_EQ(g.front(), 0.01);
    EXPECT_DOUBLE_EQ(g.back(), 100.0);
    EXPECT_NEAR(g[2], 1.0, 1e-14);
    const auto l = linear_grid(-1.0, 1.0, 5);
    EXPECT_DOUBLE_EQ(l[1], -0.5);
    EXPECT_DOUBLE_EQ(l.back(), 1.0);
    EXPECT_THROW(geometric_grid(0.0, 1.0, 5), ConfigError);
    EXPECT_THROW(linear_grid(1.0, 1.0, 5), ConfigError);
}

TEST(LrOrder, ShiftedUniformsAndExponentials)
{
    const auto grid = linear_grid(-0.5, 4.0, 1000);
    EXPECT_TRUE(check_lr_order(uniform_log_density(0.0, 1.0), uniform_log_density(0.3, 1.0), grid).pass);
    // Disjoint supports: ratio jumps from 0 straight to +inf.
    EXPECT_TRUE(check_lr_order(uniform_log_density(0.0, 1.0), uniform_log_density(1.5, 1.0), grid).pass);
    EXPECT_TRUE(check_lr_order(shifted_exponential_log_density(0.0, 1.0),
                               shifted_exponential_log_density(0.4, 1.0), grid)
                    .pass);
    // Reversed order must fail.
    EXPECT_FALSE(check_lr_order(uniform_log_density(0.3, 1.0), uniform_log_density(0.0, 1.0), grid).pass);
}

TEST(LrOrder, GaussianVarianceChangeFails)
{
    // Unequal variances give a U-shaped log ratio: no likelihood-ratio order.
    const auto grid = linear_grid(-5.0, 5.0, 1000);
    const auto r = check_lr_order([](double x) { return log_normal_pdf(x, 0.0, 1.0); },
                                  [](double x) { return log_normal_pdf(x, 0.5, 2.0); }, grid);
    EXPECT_FALSE(r.pass);
    EXPECT_LT(r.worst_diff, 0.0);
    // Equal variances, shifted mean: order holds.
    EXPECT_TRUE(check_lr_order([](double x) { return log_normal_pdf(x, 0.0, 1.0); },
                               [](double x) { return log_normal_pdf(x, 0.5, 1.0); }, grid)
                    .pass);
}

TEST(LrOrder, GammaScaleFamily)
{
    // Gamma(n, s) is LR-ordered in the scale s.
    const auto grid = geometric_grid(0.1, 100.0, 1000);
    auto f0 = [](double z) { return numerics::log_gamma_density(z, 10.0, 1.0); };
    auto f1 = [](double z) { return numerics::log_gamma_density(z, 10.0, 1.3); };
    EXPECT_TRUE(check_lr_order(f0, f1, grid).pass);
}

TEST(Monotone, EveryVariantStrictlyIncreasing)
{
    const auto grid = linear_grid(0.5, 6.0, 200);
    LrtConfig awgn;
    awgn.n = 500;
    awgn.sigma_a2 = 0.025;
    for (const auto& cfg : {awgn, exp_cfg(400, 1, 0.0125), exp_cfg(400, 4, 0.003)}) {
        const auto rep = check_lrt_monotone(cfg, grid);
        EXPECT_TRUE(rep.pass) << to_string(cfg.variant);
        EXPECT_TRUE(rep.strict) << to_string(cfg.variant);
        EXPECT_EQ(rep.points, grid.size());
    }
}

TEST(Monotone, EachAxisOfTheProduct)
{
    const auto cfg = exp_cfg(300, 3, 0.01);
    const auto grid = geometric_grid(0.2, 20.0, 100);
    for (std::int64_t axis = 0; axis < 3; ++axis) {
        const auto rep = check_lrt_monotone(cfg, grid, axis, {1.5, 2.5, 0.9});
        EXPECT_TRUE(rep.pass && rep.strict) << axis;
        EXPECT_EQ(rep.axis, axis);
    }
    EXPECT_THROW(check_lrt_monotone(cfg, grid, 3), ConfigError);
    EXPECT_THROW(check_lrt_monotone(cfg, grid, 0, {1.0}), ConfigError);
}

TEST(Boundary, RootSolvesEquation)
{
    const auto cfg = exp_cfg(40, 2, 0.1);
    const std::vector<double> x{1.7, 2.3};
    const double lg = 0.05;
    const auto r = boundary_root(cfg, x, 1, lg);
    ASSERT_TRUE(r.has_value());
    std::vector<double> y = x;
    y[1] = *r;
    EXPECT_NEAR(log_lrt_normalized(cfg, y).value(), lg, 1e-9);
    // Above the supremum a/zeta summed over blocks there is no root.
    EXPECT_FALSE(boundary_root(cfg, x, 0, 0.5).has_value());
}

TEST(Boundary, SingleBlockMassMatchesClosedForm)
{
    // M = 1: the region is |x - r| < delta around the unique root r, so its
    // mass under x = sigma_w2 + Exp(zeta) is a difference of exponentials.
    auto cfg = exp_cfg(20, 1, 0.2);
    cfg.variant = LrtVariant::MBlockProduct;
    const double lg = 0.1;
    const double delta = 0.05;
    // Root from the trapezoid oracle by bisection on x.
    double lo = 1.0, hi = 10.0;
    for (int i = 0; i < 40; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double v = static_cast<double>(oracle::log_lr_exponential(mid * 20, 20, 1.0, 0.2, 1.0, 100000));
        (v < lg ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);
    const auto lib_root = boundary_root(cfg, {3.0}, 0, lg);
    ASSERT_TRUE(lib_root.has_value());
    EXPECT_NEAR(*lib_root, r, 1e-6);

    const double ref = std::exp(-(r - delta - 1.0)) - std::exp(-(r + delta - 1.0));
    const auto reg = estimate_boundary_mass(cfg, delta, lg, 20000, 5);
    const double sd = std::sqrt(ref * (1 - ref) / 20000.0);
    EXPECT_NEAR(reg.mass, ref, 4 * sd);
    EXPECT_EQ(reg.failures, 0);
    EXPECT_EQ(reg.spot_disagreements, 0);
    EXPECT_LE(reg.max_root_residual, 1e-9);
}

TEST(Boundary, MassBelowUnionBound)
{
    const auto cfg = exp_cfg(100, 2, 0.0125);
    const double delta = 0.025;
    const auto reg = estimate_boundary_mass(cfg, delta, 0.0, 3000, 11, 1, 50);
    EXPECT_DOUBLE_EQ(reg.bound, 2.0 * 2 * delta);
    EXPECT_TRUE(reg.valid());
    EXPECT_LE(reg.mass, reg.bound + reg.ci.half_width());
    EXPECT_TRUE(reg.ci.contains(reg.mass));
    EXPECT_EQ(reg.spot_checks, 50);
    EXPECT_EQ(reg.spot_disagreements, 0);
    EXPECT_EQ(reg.samples.size(), 3000u);
    const auto csv = reg.csv();
    EXPECT_EQ(csv.rfind("draw,x_1,x_2,in_region\n", 0), 0u);
    const auto j = nlohmann::json::parse(reg.json());
    EXPECT_EQ(j.at("M"), 2);
    EXPECT_EQ(j.at("hits").get<std::int64_t>(), reg.hits);
}

TEST(Boundary, DeterministicAcrossWorkers)
{
    const auto cfg = exp_cfg(60, 3, 0.01);
    const auto a = estimate_boundary_mass(cfg, 0.02, 0.0, 500, 3, 1, 10);
    const auto b = estimate_boundary_mass(cfg, 0.02, 0.0, 500, 3, 3, 10);
    EXPECT_EQ(a.csv(), b.csv());
    EXPECT_EQ(a.hits, b.hits);
}

TEST(Boundary, RejectsAwgnAndBadDelta)
{
    LrtConfig awgn;
    EXPECT_THROW(estimate_boundary_mass(awgn, 0.1, 0.0, 10, 1), ConfigError);
    EXPECT_THROW(estimate_boundary_mass(exp_cfg(10, 1, 0.1), 0.0, 0.0, 10, 1), ConfigError);
}

TEST(BoundaryDelta, Formula)
{
    EXPECT_DOUBLE_EQ(boundary_delta(0.1, 2, 1.0), 0.025);
    EXPECT_DOUBLE_EQ(boundary_delta(0.2, 4, 3.0), 0.075);
    EXPECT_THROW(boundary_delta(0.0, 2, 1.0), std::domain_error);
}

TEST(RocEquivalence, PowerAndLrtDecideIdentically)
{
    // Single-statistic variants only; the block product is not a function of total power.
    for (bool fading : {false, true}) {
        Scenario s;
        s.slots.n = 200;
        s.P_f = 0.05;
        if (fading) {
            s.jammer.kind = JammerStrategy::Kind::ConstantPower;
            s.channels = {ChannelKind::BlockFading, ChannelKind::BlockFading, ChannelKind::BlockFading,
                          ChannelKind::BlockFading};
        }
        const auto rep = check_roc_equivalence(s, Detector::optimal_for(s), {500, 3, 1});
        EXPECT_TRUE(rep.pass()) << fading;
        EXPECT_EQ(rep.samples, 1000);
        EXPECT_GT(rep.thresholds, 0);
    }
    EXPECT_THROW(check_roc_equivalence(Scenario{}, Detector::power(), {10, 1, 1}), ConfigError);
}
