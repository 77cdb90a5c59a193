#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>

namespace covertsim::numerics {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Adaptive Gauss-Kronrod settings for the mixture integrals.
struct QuadratureSpec {
    double rel_tol = 1e-10;
    unsigned max_depth = 10;
    /// Breakpoints stop once the log-integrand has dropped this many nats below its peak.
    double tail_drop = 80.0;
};

/// A real number stored as sign * exp(log_abs). Ordering is exact even when
/// |x| is far below the smallest representable double, which happens to log
/// likelihood ratios of long observations.
struct SignedLog {
    int sign = 0;
    double log_abs = -kInf;

    static SignedLog from_double(double x);
    /// Normalizes log_abs = -inf to zero.
    static SignedLog from_log(int sign, double log_abs);
    static SignedLog zero() { return {}; }

    double to_double() const;
    SignedLog negated() const { return from_log(-sign, log_abs); }

    friend std::strong_ordering operator<=>(const SignedLog& a, const SignedLog& b);
    friend bool operator==(const SignedLog& a, const SignedLog& b) { return (a <=> b) == 0; }
};

/// log(e^a + e^b).
double log_add_exp(double a, double b);
/// log(1 + e^x).
double softplus(double x);
/// log(log(1 + e^x)).
double log_softplus(double x);

/// log of the Gamma(shape k, scale s) density at z.
double log_gamma_density(double z, double k, double s);

/// log of  int_lo^hi v^-k exp(-z/v - rate*v) dv  for 0 < lo < hi <= inf.
/// Evaluated piecewise around the integrand peak with the maximum subtracted
/// before exponentiation; the unbounded tail uses v = b + u/(rate(1-u)).
double log_power_exp_integral(double z, double k, double lo, double hi, double rate,
                              const QuadratureSpec& spec = {});

/// Same integral divided by the integrand value at `ref`, without forming
/// either factor. Ratios of integrals sharing `ref` keep full relative
/// precision even when the log-integrand is of order 10^7.
double log_power_exp_integral_relative(double z, double k, double lo, double hi, double rate, double ref,
                                       const QuadratureSpec& spec = {});

/// log of  int_v0^inf v^-k exp(-z/v) exp(-v/zeta) dv.
double log_integral_block(double z, double k, double v0, double zeta, const QuadratureSpec& spec = {});

/// Density of the slot power when theta ~ Uniform with density 1/zeta_width on
/// [theta_lo, theta_hi] and Z | theta ~ Gamma(n, sigma_w2 + theta).
double log_mixture_density_uniform(double z, double n, double sigma_w2, double theta_lo, double theta_hi,
                                   double zeta_width, const QuadratureSpec& spec = {});

/// Same with theta = shift + Exp(mean zeta).
double log_mixture_density_exponential(double z, double n, double sigma_w2, double shift, double zeta,
                                       const QuadratureSpec& spec = {});

/// Root of a nondecreasing f on [a, b]: returns x with f crossing `target`
/// resolved to an interval of width <= tol, or nullopt when target lies outside
/// [f(a), f(b)]. Throws std::logic_error if f(a) > f(b).
std::optional<double> bisect_monotone(const std::function<double(double)>& f, double target, double a,
                                      double b, double tol);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double half_width() const { return 0.5 * (hi - lo); }
    bool contains(double x) const { return lo <= x && x <= hi; }
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double confidence = 0.95);

} // namespace covertsim::numerics
