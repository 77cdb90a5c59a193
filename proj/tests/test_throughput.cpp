#include <cmath>

#include <gtest/gtest.h>

#include "covertsim/throughput.hpp"

using namespace covertsim;

namespace {

Scenario all_fading(double P_f, double P_j)
{
    Scenario s;
    s.P_f = P_f;
    s.jammer = {JammerStrategy::Kind::ConstantPower, P_j};
    s.channels = {ChannelKind::BlockFading, ChannelKind::BlockFading, ChannelKind::BlockFading,
                  ChannelKind::BlockFading};
    s.geometry.d_ab = 1.5;
    s.geometry.d_jb = 2.0;
    s.noise.sigma_b2 = 0.8;
    return s;
}

/// P(SINR <= g) for SINR = X S / (Y I + N) with X, Y ~ Exp(1):
/// 1 - exp(-g N / S) / (1 + g I / S).
double sinr_cdf(double g, double S, double I, double N)
{
    return 1.0 - std::exp(-g * N / S) / (1.0 + g * I / S);
}

double outage_rate_oracle(double p, double S, double I, double N)
{
    double lo = 0.0, hi = 1e3;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (sinr_cdf(std::exp2(mid) - 1.0, S, I, N) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST(Sinr, DeterministicLinks)
{
    Scenario s;
    s.P_f = 0.5;
    s.jammer.power = 2.0;
    s.geometry.d_ab = 2.0;
    s.geometry.d_jb = 1.0;
    s.noise.sigma_b2 = 0.5;
    // Signal 0.5/4, interference 2 (full jammer power), noise 0.5.
    EXPECT_DOUBLE_EQ(bob_sinr(s, 1.0, 1.0), 0.125 / 2.5);
    const double R = outage_capacity(s, 0.1, 100, 1);
    EXPECT_NEAR(R, std::log2(1.0 + 0.05), 1e-15);
    EXPECT_THROW(bob_sinr(s, -1.0, 1.0), std::domain_error);
}

TEST(Sinr, UsesFirstBlockGains)
{
    const auto s = all_fading(0.3, 1.0);
    const auto samples = sample_sinr(s, 50, 4);
    const auto f = draw_fading(s, SlotKey{4, 6, 7, 0});
    EXPECT_EQ(samples[7].gain_ab, std::norm(f.h_ab[0]));
    EXPECT_DOUBLE_EQ(samples[7].gamma, bob_sinr(s, f));
}

TEST(OutageCapacity, MatchesClosedFormCdf)
{
    const auto s = all_fading(0.4, 1.2);
    const double S = 0.4 * path_gain(1.5, 2.0);
    const double I = 1.2 * path_gain(2.0, 2.0);
    const double N = 0.8;
    const auto samples = sample_sinr(s, 1000000, 21);
    for (double p : {0.05, 0.1, 0.3}) {
        const double ref = outage_rate_oracle(p, S, I, N);
        EXPECT_NEAR(outage_capacity(samples, p), ref, 0.02 * ref) << p;
    }
    // Empirical outage at the oracle rate.
    const double R = outage_rate_oracle(0.1, S, I, N);
    std::int64_t below = 0;
    for (const auto& x : samples)
        below += std::log2(1.0 + x.gamma) < R;
    EXPECT_NEAR(static_cast<double>(below) / 1e6, 0.1, 0.002);
}

TEST(OutageCapacity, OrderStatisticAndWorkers)
{
    std::vector<SinrSample> v;
    for (double g : {7.0, 1.0, 3.0, 0.0, 15.0})
        v.push_back({g, 1.0, 1.0});
    EXPECT_EQ(outage_capacity(v, 0.2), 0.0);  // ceil(1) -> smallest
    EXPECT_EQ(outage_capacity(v, 0.21), 1.0); // ceil(1.05) = 2
    EXPECT_EQ(outage_capacity(v, 0.99), 4.0);
    EXPECT_THROW(outage_capacity(v, 0.0), ConfigError);
    EXPECT_THROW(outage_capacity(v, 1.0), ConfigError);
    const auto s = all_fading(0.1, 1.0);
    EXPECT_EQ(outage_capacity(s, 0.1, 5000, 3, 1), outage_capacity(s, 0.1, 5000, 3, 3));
}

TEST(OutageCapacity, IncreasesWithAlicePower)
{
    double prev = -1.0;
    for (double P_f : {0.01, 0.05, 0.2}) {
        const double R = outage_capacity(all_fading(P_f, 1.0), 0.1, 20000, 8);
        EXPECT_GT(R, prev);
        prev = R;
    }
}

TEST(CovertBits, FloorOfProduct)
{
    EXPECT_EQ(covert_bits(1000, 0.0123), 12);
    EXPECT_EQ(covert_bits(10, 0.0), 0);
    EXPECT_THROW(covert_bits(0, 1.0), std::domain_error);
    EXPECT_THROW(covert_bits(10, -0.1), std::domain_error);
}

TEST(CapacityCsv, Layout)
{
    const auto csv = capacity_csv({{0.1, 1.0, 0.1, 0.5, 100, 50}});
    EXPECT_EQ(csv, "P_f,P_j,outage_prob,R,n,bits\n0.1,1,0.1,0.5,100,50\n");
}
