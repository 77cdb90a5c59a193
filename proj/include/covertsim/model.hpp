#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace covertsim {

/// Invalid scenario or argument supplied by the caller (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Quadrature or root-finding failure (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Hypothesis { H0, H1 };

enum class Link { AliceWillie, AliceBob, JammerWillie, JammerBob };

enum class ChannelKind { Awgn, BlockFading };

/// Node positions reduced to the four link distances and the path-loss exponent.
struct Geometry {
    double d_aw = 1.0;
    double d_ab = 1.0;
    double d_jw = 1.0;
    double d_jb = 1.0;
    double alpha = 2.0;

    void validate() const;
};

/// Slot layout: n symbols per slot, M fading blocks per slot, T slots, prior p.
struct SlotStructure {
    std::int64_t n = 1000;
    std::int64_t M = 1;
    std::int64_t T = 2;
    double p = 0.5;

    void validate() const;
    std::int64_t block_length() const { return n / M; }
};

struct ChannelSet {
    ChannelKind aw = ChannelKind::Awgn;
    ChannelKind ab = ChannelKind::Awgn;
    ChannelKind jw = ChannelKind::Awgn;
    ChannelKind jb = ChannelKind::Awgn;

    ChannelKind of(Link link) const;
    bool any_fading() const;
};

/// Jammer power law. UniformPerSlot draws P_t ~ U[0, power] independently per slot;
/// ConstantPower transmits at `power` in every slot.
struct JammerStrategy {
    enum class Kind { UniformPerSlot, ConstantPower };
    Kind kind = Kind::UniformPerSlot;
    double power = 1.0;
};

struct NoiseLevels {
    double sigma_w2 = 1.0;
    double sigma_b2 = 1.0;
};

/// Received power gain d^-alpha.
double path_gain(double d, double alpha);

/// Complete experiment description. All distances default to 1, alpha to 2,
/// noise variances and jammer power to 1, so zeta = 1.
class Scenario {
public:
    Geometry geometry;
    SlotStructure slots;
    ChannelSet channels;
    JammerStrategy jammer;
    NoiseLevels noise;
    double P_f = 0.0;

    void validate() const;

    /// Jammer power received at Willie per symbol at full power: P / d_jw^alpha.
    double zeta() const { return jammer.power * path_gain(geometry.d_jw, geometry.alpha); }
    /// Alice power received at Willie per symbol: P_f / d_aw^alpha.
    double sigma_a2() const { return P_f * path_gain(geometry.d_aw, geometry.alpha); }
    /// ln(P(H0)/P(H1)).
    double log_gamma() const;

    std::string to_json() const;
    static Scenario from_json(const std::string& text);
    static Scenario load(const std::string& path);
    void save(const std::string& path) const;
};

/// Construction parameters for Alice: concentration half-width delta, received
/// power budget sigma_a2 at Willie, transmit power P_f and (fading only) the
/// jam-power tail cutoff c.
struct CovertParams {
    double epsilon = 0.0;
    double delta = 0.0;
    double sigma_a2 = 0.0;
    double P_f = 0.0;
    std::optional<double> c;
};

/// AWGN recipe: delta = zeta*eps/8, sigma_a2 = zeta*eps/4.
CovertParams select_covert_params_awgn(double epsilon, double zeta, double d_aw, double alpha);

/// Single-block fading recipe: delta = zeta*eps/16, sigma_a2 = zeta*eps/8, and
/// c with P(Exp(mean zeta) > c) = eps/4.
CovertParams select_covert_params_fading(double epsilon, double zeta, double d_aw, double alpha);

/// Multi-block recipe. delta is chosen so the 2*delta boundary region has mass
/// bound 2M(2 delta)/zeta = eps/4, sigma_a2 = delta/2 keeps Alice strictly below
/// delta, and c makes P(max_m sigma_j,m^2 > c) = eps/4.
CovertParams select_covert_params_multiblock(double epsilon, std::int64_t M, double zeta, double d_aw,
                                             double alpha);

std::string to_string(ChannelKind kind);
std::string to_string(Link link);
std::string to_string(Hypothesis h);

} // namespace covertsim
