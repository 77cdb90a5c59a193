#include "covertsim/detectors.hpp"

#include <cmath>
#include <stdexcept>

namespace covertsim {

using numerics::kInf;
using numerics::log_power_exp_integral_relative;

std::string to_string(LrtVariant v)
{
    switch (v) {
    case LrtVariant::AwgnUniform:
        return "awgn_uniform";
    case LrtVariant::M1Exponential:
        return "m1_exponential";
    case LrtVariant::MBlockProduct:
        return "mblock_product";
    }
    return "unknown";
}

void LrtConfig::validate() const
{
    if (n < 1 || M < 1 || n % M != 0)
        throw ConfigError("LRT: n must be positive and divisible by M");
    if (!(sigma_w2 > 0.0) || !(zeta > 0.0) || !(sigma_a2 >= 0.0) || !std::isfinite(sigma_a2))
        throw ConfigError("LRT: requires sigma_w2 > 0, zeta > 0, sigma_a2 >= 0");
    if (std::isnan(log_gamma))
        throw ConfigError("LRT: log_gamma is NaN");
    if (variant == LrtVariant::M1Exponential && M != 1)
        throw ConfigError("LRT: the single-block variant requires M = 1");
    if (sigma_a2_per_block) {
        if (static_cast<std::int64_t>(sigma_a2_per_block->size()) != M)
            throw ConfigError("LRT: genie needs one Alice power per block");
        for (double s : *sigma_a2_per_block)
            if (!(s >= 0.0) || !std::isfinite(s))
                throw ConfigError("LRT: genie Alice power must be finite and >= 0");
    }
}

double LrtConfig::block_sigma_a2(std::size_t m) const
{
    return sigma_a2_per_block ? sigma_a2_per_block->at(m) : sigma_a2;
}

LrtConfig LrtConfig::from_scenario(const Scenario& scenario)
{
    scenario.validate();
    LrtConfig cfg;
    cfg.n = scenario.slots.n;
    cfg.M = scenario.slots.M;
    cfg.sigma_w2 = scenario.noise.sigma_w2;
    cfg.zeta = scenario.zeta();
    cfg.sigma_a2 = scenario.sigma_a2();
    cfg.log_gamma = scenario.log_gamma();
    const bool uniform = scenario.jammer.kind == JammerStrategy::Kind::UniformPerSlot;
    const bool jw_fading = scenario.channels.jw == ChannelKind::BlockFading;
    if (uniform && !jw_fading)
        cfg.variant = LrtVariant::AwgnUniform;
    else if (!uniform && jw_fading)
        cfg.variant = cfg.M == 1 ? LrtVariant::M1Exponential : LrtVariant::MBlockProduct;
    else
        throw ConfigError("no likelihood ratio test for jammer '" +
                          std::string(uniform ? "uniform" : "constant") + "' over a " +
                          to_string(scenario.channels.jw) + " jammer-Willie link");
    if (!(cfg.zeta > 0.0))
        throw ConfigError("LRT: jammer power at Willie must be positive");
    cfg.validate();
    return cfg;
}

LrtConfig LrtConfig::with_genie(const Observation& obs) const
{
    const auto& h = obs.latents.fading.h_aw;
    if (static_cast<std::int64_t>(h.size()) != M)
        throw ConfigError("genie LRT: observation has " + std::to_string(h.size()) + " Alice-Willie blocks, expected " +
                          std::to_string(M));
    LrtConfig out = *this;
    std::vector<double> per(h.size());
    for (std::size_t m = 0; m < h.size(); ++m)
        per[m] = sigma_a2 * std::norm(h[m]);
    out.sigma_a2_per_block = std::move(per);
    return out;
}

bool LogLr::exceeds(double log_threshold) const
{
    return offset > SignedLog::from_double(log_threshold - anchor);
}

double total_power(std::span<const cplx> samples)
{
    double z = 0.0;
    for (const cplx& s : samples)
        z += std::norm(s);
    return z;
}

double total_power(const Observation& obs)
{
    return total_power(obs.samples);
}

std::vector<double> block_powers(std::span<const cplx> samples, std::int64_t M)
{
    const auto n = static_cast<std::int64_t>(samples.size());
    if (M < 1 || n % M != 0)
        throw ConfigError("block_powers: M = " + std::to_string(M) + " does not divide n = " + std::to_string(n));
    const std::int64_t len = n / M;
    std::vector<double> Z(static_cast<std::size_t>(M));
    for (std::int64_t m = 0; m < M; ++m)
        Z[m] = total_power(samples.subspan(m * len, len));
    return Z;
}

std::vector<double> block_powers(const Observation& obs, std::int64_t M)
{
    return block_powers(obs.samples, M);
}

namespace {

void check_power(double z)
{
    if (!(z >= 0.0) || !std::isfinite(z))
        throw std::domain_error("LRT: observed power must be finite and >= 0");
}

// log(e^x - e^y) for x > y.
double log_sub_exp(double x, double y)
{
    if (y == -kInf)
        return x;
    return x + std::log(-std::expm1(y - x));
}

} // namespace

LogLr log_lrt_awgn(double z, const LrtConfig& cfg)
{
    if (cfg.variant != LrtVariant::AwgnUniform)
        throw ConfigError("log_lrt_awgn: configuration is for " + to_string(cfg.variant));
    check_power(z);
    const double a = cfg.block_sigma_a2(0);
    if (a == 0.0)
        return {};
    const double k = static_cast<double>(cfg.n);
    const double s0 = cfg.sigma_w2;
    const double zeta = cfg.zeta;
    const auto& q = cfg.quadrature;
    // All integrals are taken relative to the integrand at s0 + a so their
    // differences keep full precision.
    auto I = [&](double lo, double hi) { return log_power_exp_integral_relative(z, k, lo, hi, 0.0, s0 + a, q); };

    if (a >= zeta) {
        // Disjoint supports: plain difference of the two mixture integrals.
        return {0.0, SignedLog::from_double(I(s0 + a, s0 + a + zeta) - I(s0, s0 + zeta))};
    }
    // Numerator covers [s0+a, s0+a+zeta] = C + B, denominator [s0, s0+zeta] = A + C.
    const double lA = I(s0, s0 + a);
    const double lC = I(s0 + a, s0 + zeta);
    const double lB = I(s0 + zeta, s0 + zeta + a);
    const double la = lA - lC;
    const double lb = lB - lC;
    if (la > 0.0 || lb > 0.0)
        return {0.0, SignedLog::from_double(numerics::softplus(lb) - numerics::softplus(la))};
    if (la == lb)
        return {};
    // x = log1p(b) - log1p(a) = log1p(t), t = (b - a) / (1 + a), |t| <= 1.
    const int sign = lb > la ? 1 : -1;
    const double log_t = log_sub_exp(std::max(la, lb), std::min(la, lb)) - numerics::softplus(la);
    if (log_t < -20.0) {
        const double t = sign * std::exp(log_t);
        return {0.0, SignedLog::from_log(sign, log_t + std::log1p(-0.5 * t))};
    }
    return {0.0, SignedLog::from_double(std::log1p(sign * std::exp(log_t)))};
}

LogLr log_lrt_block_term(double Zm, std::int64_t m, const LrtConfig& cfg)
{
    check_power(Zm);
    const double a = cfg.block_sigma_a2(static_cast<std::size_t>(m));
    if (a == 0.0)
        return {};
    const double k = static_cast<double>(cfg.block_length());
    const double v0 = cfg.sigma_w2;
    const double rate = 1.0 / cfg.zeta;
    const auto& q = cfg.quadrature;
    // log Lambda_m = a/zeta - log1p(R), R = I[v0, v0+a] / I[v0+a, inf).
    const double l_low = log_power_exp_integral_relative(Zm, k, v0, v0 + a, rate, v0 + a, q);
    const double l_high = log_power_exp_integral_relative(Zm, k, v0 + a, kInf, rate, v0 + a, q);
    const double lR = l_low - l_high;
    return {a / cfg.zeta, SignedLog::from_log(-1, numerics::log_softplus(lR))};
}

LogLr log_lrt_m1(double z, const LrtConfig& cfg)
{
    if (cfg.variant != LrtVariant::M1Exponential)
        throw ConfigError("log_lrt_m1: configuration is for " + to_string(cfg.variant));
    return log_lrt_block_term(z, 0, cfg);
}

LogLr log_lrt_mblock(std::span<const double> Z, const LrtConfig& cfg)
{
    if (cfg.variant == LrtVariant::AwgnUniform)
        throw ConfigError("log_lrt_mblock: configuration is for " + to_string(cfg.variant));
    if (static_cast<std::int64_t>(Z.size()) != cfg.M)
        throw ConfigError("log_lrt_mblock: got " + std::to_string(Z.size()) + " block powers, expected " +
                          std::to_string(cfg.M));
    // Sum of per-block terms: anchors add, the negative offsets add in log space.
    double anchor = 0.0;
    double log_s = -kInf;
    for (std::size_t m = 0; m < Z.size(); ++m) {
        const LogLr t = log_lrt_block_term(Z[m], static_cast<std::int64_t>(m), cfg);
        anchor += t.anchor;
        if (t.offset.sign != 0)
            log_s = numerics::log_add_exp(log_s, t.offset.log_abs);
    }
    return {anchor, SignedLog::from_log(-1, log_s)};
}

Hypothesis decide(double statistic, double threshold)
{
    return statistic > threshold ? Hypothesis::H1 : Hypothesis::H0;
}

Hypothesis decide(const SignedLog& statistic, const SignedLog& threshold)
{
    return statistic > threshold ? Hypothesis::H1 : Hypothesis::H0;
}

Hypothesis decide(const LogLr& statistic, double log_gamma)
{
    return statistic.exceeds(log_gamma) ? Hypothesis::H1 : Hypothesis::H0;
}

Detector Detector::power()
{
    return Detector{};
}

Detector Detector::lrt(LrtConfig cfg, bool genie)
{
    cfg.validate();
    Detector d;
    d.kind_ = Kind::Lrt;
    d.genie_ = genie;
    if (!genie) {
        if (cfg.variant != LrtVariant::AwgnUniform) {
            for (std::int64_t m = 0; m < cfg.M; ++m)
                d.anchor_ += cfg.block_sigma_a2(static_cast<std::size_t>(m)) / cfg.zeta;
        }
    } else if (cfg.variant == LrtVariant::AwgnUniform) {
        throw ConfigError("genie LRT needs a fading jammer-Willie configuration");
    }
    d.cfg_ = std::move(cfg);
    return d;
}

Detector Detector::optimal_for(const Scenario& scenario, bool genie)
{
    return lrt(LrtConfig::from_scenario(scenario), genie);
}

std::string Detector::name() const
{
    if (kind_ == Kind::Power)
        return "power";
    return genie_ ? "lrt_genie" : "lrt";
}

SignedLog Detector::statistic(const Observation& obs) const
{
    if (kind_ == Kind::Power) {
        if (obs.samples.empty())
            throw ConfigError("power detector: empty observation");
        return SignedLog::from_double(total_power(obs) / static_cast<double>(obs.samples.size()));
    }
    const LrtConfig& cfg = *cfg_;
    if (static_cast<std::int64_t>(obs.samples.size()) != cfg.n)
        throw ConfigError("LRT: observation has " + std::to_string(obs.samples.size()) + " samples, configured for " +
                          std::to_string(cfg.n));
    if (genie_) {
        const LrtConfig g = cfg.with_genie(obs);
        const LogLr l = log_lrt_mblock(block_powers(obs, g.M), g);
        return SignedLog::from_double(l.value());
    }
    switch (cfg.variant) {
    case LrtVariant::AwgnUniform:
        return log_lrt_awgn(total_power(obs), cfg).offset;
    case LrtVariant::M1Exponential:
        return log_lrt_m1(total_power(obs), cfg).offset;
    case LrtVariant::MBlockProduct: {
        const auto Z = block_powers(obs, cfg.M);
        return log_lrt_mblock(Z, cfg).offset;
    }
    }
    throw std::logic_error("unreachable");
}

SignedLog Detector::key_for_threshold(double threshold) const
{
    return SignedLog::from_double(threshold - anchor_);
}

double Detector::threshold_from_key(const SignedLog& key) const
{
    return anchor_ + key.to_double();
}

std::optional<double> Detector::natural_threshold() const
{
    if (kind_ == Kind::Power)
        return std::nullopt;
    return cfg_->log_gamma;
}

void Detector::check_compatible(const Scenario& scenario) const
{
    if (kind_ == Kind::Power)
        return;
    if (cfg_->n != scenario.slots.n || cfg_->M != scenario.slots.M)
        throw ConfigError("detector configured for n = " + std::to_string(cfg_->n) + ", M = " +
                          std::to_string(cfg_->M) + " but scenario has n = " + std::to_string(scenario.slots.n) +
                          ", M = " + std::to_string(scenario.slots.M));
}

} // namespace covertsim
