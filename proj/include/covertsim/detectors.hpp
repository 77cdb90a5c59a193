#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covertsim/model.hpp"
#include "covertsim/numerics.hpp"
#include "covertsim/synth.hpp"

namespace covertsim {

using numerics::SignedLog;

enum class LrtVariant { AwgnUniform, M1Exponential, MBlockProduct };

std::string to_string(LrtVariant v);

/// Everything Willie knows when forming the likelihood ratio.
struct LrtConfig {
    LrtVariant variant = LrtVariant::AwgnUniform;
    std::int64_t n = 1;
    std::int64_t M = 1;
    double sigma_w2 = 1.0;
    double zeta = 1.0;
    double sigma_a2 = 0.0;
    double log_gamma = 0.0;
    /// Genie configuration: Willie knows |h_aw,m|^2 and uses sigma_a2 * |h_aw,m|^2 in block m.
    std::optional<std::vector<double>> sigma_a2_per_block;
    numerics::QuadratureSpec quadrature;

    void validate() const;
    std::int64_t block_length() const { return n / M; }
    double block_sigma_a2(std::size_t m) const;

    /// Picks the variant that is optimal for the scenario's jammer strategy and
    /// jammer-to-Willie channel. Throws ConfigError for combinations without one.
    static LrtConfig from_scenario(const Scenario& scenario);
    /// Copy with per-block Alice power taken from the observation's latents.
    LrtConfig with_genie(const Observation& obs) const;
};

/// log-likelihood ratio = anchor + offset. The anchor is a configuration
/// constant, so comparing offsets of two observations under one configuration
/// is exact even where the full value rounds to the same double.
struct LogLr {
    double anchor = 0.0;
    SignedLog offset;

    double value() const { return anchor + offset.to_double(); }
    /// Strict comparison with a threshold on the log-likelihood ratio.
    bool exceeds(double log_threshold) const;
};

/// z = sum |z_i|^2, accumulated left to right.
double total_power(const Observation& obs);
double total_power(std::span<const cplx> samples);
/// Per-block powers Z_m; throws ConfigError when M does not divide n.
std::vector<double> block_powers(const Observation& obs, std::int64_t M);
std::vector<double> block_powers(std::span<const cplx> samples, std::int64_t M);

LogLr log_lrt_awgn(double z, const LrtConfig& cfg);
LogLr log_lrt_m1(double z, const LrtConfig& cfg);
LogLr log_lrt_mblock(std::span<const double> Z, const LrtConfig& cfg);
/// One factor of the block product: block m with power Zm and shape n/M.
LogLr log_lrt_block_term(double Zm, std::int64_t m, const LrtConfig& cfg);

/// H1 iff statistic > threshold; ties go to H0.
Hypothesis decide(double statistic, double threshold);
Hypothesis decide(const SignedLog& statistic, const SignedLog& threshold);
Hypothesis decide(const LogLr& statistic, double log_gamma);

/// Scalar detector used by the Monte Carlo harness. Statistics are returned as
/// ordered keys; larger keys favour H1.
class Detector {
public:
    enum class Kind { Power, Lrt };

    /// Normalized power z/n.
    static Detector power();
    static Detector lrt(LrtConfig cfg, bool genie = false);
    /// LRT matching the scenario (see LrtConfig::from_scenario).
    static Detector optimal_for(const Scenario& scenario, bool genie = false);

    Kind kind() const { return kind_; }
    bool genie() const { return genie_; }
    const std::optional<LrtConfig>& config() const { return cfg_; }
    std::string name() const;

    SignedLog statistic(const Observation& obs) const;
    /// Key of a threshold expressed in natural units (z/n, or log-likelihood ratio).
    SignedLog key_for_threshold(double threshold) const;
    double threshold_from_key(const SignedLog& key) const;
    /// log gamma for the LRT; none for the power detector.
    std::optional<double> natural_threshold() const;
    /// Throws ConfigError when the detector was built for a different slot layout.
    void check_compatible(const Scenario& scenario) const;

private:
    Kind kind_ = Kind::Power;
    bool genie_ = false;
    std::optional<LrtConfig> cfg_;
    double anchor_ = 0.0;
};

} // namespace covertsim
