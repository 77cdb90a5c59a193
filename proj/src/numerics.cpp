#include "covertsim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "covertsim/model.hpp"

namespace covertsim::numerics {

SignedLog SignedLog::from_double(double x)
{
    if (x == 0.0 || std::isnan(x))
        return {};
    return {x > 0 ? 1 : -1, std::log(std::fabs(x))};
}

SignedLog SignedLog::from_log(int sign, double log_abs)
{
    if (sign == 0 || log_abs == -kInf)
        return {};
    return {sign > 0 ? 1 : -1, log_abs};
}

double SignedLog::to_double() const
{
    return sign == 0 ? 0.0 : sign * std::exp(log_abs);
}

std::strong_ordering operator<=>(const SignedLog& a, const SignedLog& b)
{
    if (a.sign != b.sign)
        return a.sign <=> b.sign;
    if (a.sign == 0 || a.log_abs == b.log_abs)
        return std::strong_ordering::equal;
    const bool less = a.sign > 0 ? a.log_abs < b.log_abs : a.log_abs > b.log_abs;
    return less ? std::strong_ordering::less : std::strong_ordering::greater;
}

double log_add_exp(double a, double b)
{
    if (a == -kInf)
        return b;
    if (b == -kInf)
        return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(-std::fabs(a - b)));
}

double softplus(double x)
{
    if (x > 40.0)
        return x + std::exp(-x);
    return std::log1p(std::exp(x));
}

double log_softplus(double x)
{
    if (x == -kInf)
        return -kInf;
    if (x < -30.0) // log(e^x - e^2x/2 + ...)
        return x + std::log1p(-0.5 * std::exp(x));
    return std::log(softplus(x));
}

double log_gamma_density(double z, double k, double s)
{
    if (!(z >= 0.0) || !(k > 0.0) || !(s > 0.0))
        throw std::domain_error("log_gamma_density: requires z >= 0, k > 0, s > 0");
    if (z == 0.0) {
        if (k == 1.0)
            return -std::log(s);
        return k < 1.0 ? kInf : -kInf;
    }
    return (k - 1.0) * std::log(z) - z / s - std::lgamma(k) - k * std::log(s);
}

namespace {

using GaussKronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

struct PowerExpIntegrand {
    double z, k, rate;
    double log_value(double v) const { return -k * std::log(v) - z / v - rate * v; }
    /// log_value(p + d) - log_value(p) without cancellation between the two terms.
    double log_ratio(double p, double d) const { return -k * std::log1p(d / p) + z * d / ((p + d) * p) - rate * d; }
    double slope(double v) const { return -k / v + z / (v * v) - rate; }
    double curvature(double v) const { return k / (v * v) - 2.0 * z / (v * v * v); }
};

double integrate_piece(const std::function<double(double)>& f, double a, double b, double scale,
                       const QuadratureSpec& spec)
{
    double error = 0.0;
    double l1 = 0.0;
    const double r = GaussKronrod::integrate(f, a, b, spec.max_depth, spec.rel_tol, &error, &l1);
    // Pieces far out in a tail may be resolved only relative to the whole integral (scale).
    if (!std::isfinite(r) || error > 1e3 * spec.rel_tol * std::max(l1, scale)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "quadrature did not converge on [" << a << ", " << b << "] (peak-width units): estimate " << r
            << ", error " << error << ", L1 " << l1;
        throw NumericalError(msg.str());
    }
    return r;
}

} // namespace

double log_power_exp_integral_relative(double z, double k, double lo, double hi, double rate, double ref,
                                       const QuadratureSpec& spec)
{
    if (!(ref > 0.0))
        throw std::domain_error("log_power_exp_integral_relative: reference point must be positive");
    if (!(z >= 0.0) || !(lo > 0.0) || !(hi >= lo) || !(rate >= 0.0))
        throw std::domain_error("log_power_exp_integral: requires z >= 0, 0 < lo <= hi, rate >= 0");
    if (hi == lo)
        return -kInf;
    if (std::isinf(hi) && rate == 0.0 && !(k > 1.0))
        throw std::domain_error("log_power_exp_integral: divergent improper integral");

    const PowerExpIntegrand g{z, k, rate};
    // Stationary point of the exponent: rate v^2 + k v - z = 0.
    const double stationary = 2.0 * z / (k + std::sqrt(k * k + 4.0 * rate * z));
    const double peak = std::clamp(stationary, lo, std::isinf(hi) ? std::max(lo, stationary) : hi);

    double width;
    if (stationary > lo && stationary < hi)
        width = 1.0 / std::sqrt(std::max(-g.curvature(peak), 1e-300));
    else
        width = 1.0 / (std::fabs(g.slope(peak)) + std::sqrt(std::fabs(g.curvature(peak))) + 1e-300);
    width = std::max(width, 1e-12 * peak);

    // Integrate over u = (v - peak) / width: nodes near a sharp peak are placed
    // exactly relative to it and every piece has length of order one.
    const double u_lo = (lo - peak) / width;
    const double u_hi = (hi - peak) / width; // +inf for an unbounded range
    auto log_f = [&](double u) { return g.log_ratio(peak, u * width); };
    std::vector<double> cuts{0.0};
    for (double step = 1.0;; step *= 4.0) {
        if (-step <= u_lo)
            break;
        cuts.push_back(-step);
        if (log_f(-step) < -spec.tail_drop)
            break;
    }
    for (double step = 1.0;; step *= 4.0) {
        if (step >= u_hi)
            break;
        cuts.push_back(step);
        if (log_f(step) < -spec.tail_drop)
            break;
    }
    cuts.push_back(u_lo);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto f = [&](double u) { return std::exp(log_f(u)); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += integrate_piece(f, cuts[i], cuts[i + 1], 1.0, spec);

    const double last = cuts.back();
    if (std::isinf(hi)) {
        const double scale = (rate > 0.0 ? 1.0 / rate : peak + last * width) / width;
        auto tail = [&](double t) {
            const double one_minus = 1.0 - t;
            const double u = last + scale * t / one_minus;
            return std::exp(log_f(u)) * scale / (one_minus * one_minus);
        };
        total += integrate_piece(tail, 0.0, 1.0, 1.0, spec);
    } else if (u_hi > last) {
        total += integrate_piece(f, last, u_hi, 1.0, spec);
    }
    if (!(total > 0.0))
        return -kInf;
    return g.log_ratio(ref, peak - ref) + std::log(total) + std::log(width);
}

double log_power_exp_integral(double z, double k, double lo, double hi, double rate, const QuadratureSpec& spec)
{
    if (!(lo > 0.0))
        throw std::domain_error("log_power_exp_integral: requires z >= 0, 0 < lo <= hi, rate >= 0");
    const double rel = log_power_exp_integral_relative(z, k, lo, hi, rate, lo, spec);
    return rel + PowerExpIntegrand{z, k, rate}.log_value(lo);
}

double log_integral_block(double z, double k, double v0, double zeta, const QuadratureSpec& spec)
{
    if (!(z >= 0.0) || !(k >= 1.0) || !(v0 > 0.0) || !(zeta > 0.0))
        throw std::domain_error("log_integral_block: requires z >= 0, k >= 1, v0 > 0, zeta > 0");
    return log_power_exp_integral(z, k, v0, kInf, 1.0 / zeta, spec);
}

namespace {

// log( z^(n-1) / Gamma(n) ), with z^0 = 1 at z = 0.
double log_gamma_prefactor(double z, double n)
{
    if (z == 0.0)
        return n == 1.0 ? 0.0 : -kInf;
    return (n - 1.0) * std::log(z) - std::lgamma(n);
}

} // namespace

double log_mixture_density_uniform(double z, double n, double sigma_w2, double theta_lo, double theta_hi,
                                   double zeta_width, const QuadratureSpec& spec)
{
    if (!(z >= 0.0) || !(n >= 1.0) || !(sigma_w2 > 0.0) || !(theta_lo >= 0.0) || !(theta_hi > theta_lo) ||
        !(zeta_width > 0.0))
        throw std::domain_error("log_mixture_density_uniform: invalid arguments");
    const double pre = log_gamma_prefactor(z, n);
    if (pre == -kInf)
        return -kInf;
    return pre - std::log(zeta_width) +
           log_power_exp_integral(z, n, sigma_w2 + theta_lo, sigma_w2 + theta_hi, 0.0, spec);
}

double log_mixture_density_exponential(double z, double n, double sigma_w2, double shift, double zeta,
                                       const QuadratureSpec& spec)
{
    if (!(z >= 0.0) || !(n >= 1.0) || !(sigma_w2 > 0.0) || !(shift >= 0.0) || !(zeta > 0.0))
        throw std::domain_error("log_mixture_density_exponential: invalid arguments");
    const double pre = log_gamma_prefactor(z, n);
    if (pre == -kInf)
        return -kInf;
    const double v0 = sigma_w2 + shift;
    return pre - std::log(zeta) + v0 / zeta + log_integral_block(z, n, v0, zeta, spec);
}

std::optional<double> bisect_monotone(const std::function<double(double)>& f, double target, double a, double b,
                                      double tol)
{
    if (!(b >= a))
        throw std::invalid_argument("bisect_monotone: empty bracket");
    double fa = f(a);
    double fb = f(b);
    if (fa > fb)
        throw std::logic_error("bisect_monotone: f(a) > f(b), function is not nondecreasing");
    if (target < fa || target > fb)
        return std::nullopt;
    if (fa == target)
        return a;
    if (fb == target)
        return b;
    for (int it = 0; it < 400 && b - a > tol; ++it) {
        const double mid = a + 0.5 * (b - a);
        if (mid <= a || mid >= b)
            break;
        const double fm = f(mid);
        if (fm == target)
            return mid;
        if (fm < target)
            a = mid;
        else
            b = mid;
    }
    return a + 0.5 * (b - a);
}

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double confidence)
{
    if (trials < 1 || successes < 0 || successes > trials)
        throw std::domain_error("wilson_interval: requires 0 <= successes <= trials, trials >= 1");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::domain_error("wilson_interval: confidence must lie in (0,1)");
    const double zq = boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * confidence);
    const double n = static_cast<double>(trials);
    const double x = static_cast<double>(successes);
    const double z2 = zq * zq;
    const double center = (x + 0.5 * z2) / (n + z2);
    const double half = zq / (n + z2) * std::sqrt(x * (n - x) / n + 0.25 * z2);
    Interval ci{std::max(0.0, center - half), std::min(1.0, center + half)};
    if (successes == 0)
        ci.lo = 0.0;
    if (successes == trials)
        ci.hi = 1.0;
    return ci;
}

} // namespace covertsim::numerics
