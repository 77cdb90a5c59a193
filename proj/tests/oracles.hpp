#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's quadrature; integrals are brute-force trapezoid sums in long
// double or Boost special functions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/distributions/beta.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace oracle {

using Real = long double;

/// log of the integral of exp(log_f) over [a, b] by the trapezoid rule on
/// `points` equally spaced nodes, with the maximum factored out.
inline Real log_trapezoid(const std::function<Real(Real)>& log_f, Real a, Real b, long points = 1000000)
{
    std::vector<Real> v(static_cast<std::size_t>(points));
    Real mx = -INFINITY;
    const Real h = (b - a) / static_cast<Real>(points - 1);
    for (long i = 0; i < points; ++i) {
        v[static_cast<std::size_t>(i)] = log_f(a + h * static_cast<Real>(i));
        mx = std::max(mx, v[static_cast<std::size_t>(i)]);
    }
    Real sum = 0;
    for (long i = 0; i < points; ++i) {
        const Real w = (i == 0 || i == points - 1) ? 0.5L : 1.0L;
        sum += w * std::exp(v[static_cast<std::size_t>(i)] - mx);
    }
    return mx + std::log(sum * h);
}

/// Same rule restricted to the part of [a, b] where log_f is within `drop`
/// nats of its maximum, located by a coarse scan. Keeps the step small
/// relative to the peak width when the integrand is sharply concentrated.
inline Real log_trapezoid_window(const std::function<Real(Real)>& log_f, Real a, Real b, long points = 1000000,
                                 Real drop = 80, long scan = 20000)
{
    const Real h = (b - a) / static_cast<Real>(scan);
    std::vector<Real> v(static_cast<std::size_t>(scan + 1));
    Real mx = -INFINITY;
    for (long i = 0; i <= scan; ++i) {
        v[static_cast<std::size_t>(i)] = log_f(a + h * static_cast<Real>(i));
        mx = std::max(mx, v[static_cast<std::size_t>(i)]);
    }
    long first = 0, last = scan;
    while (first < scan && v[static_cast<std::size_t>(first)] < mx - drop)
        ++first;
    while (last > 0 && v[static_cast<std::size_t>(last)] < mx - drop)
        --last;
    const Real lo = a + h * static_cast<Real>(std::max(first - 1, 0L));
    const Real hi = a + h * static_cast<Real>(std::min(last + 1, scan));
    return log_trapezoid(log_f, lo, hi, points);
}

/// log Gamma(shape k, scale s) density at z.
inline Real log_gamma_pdf(Real z, Real k, Real s)
{
    return (k - 1) * std::log(z) - z / s - std::lgamma(k) - k * std::log(s);
}

/// log LR of the uniform jam-power mixtures, integrated over theta.
inline Real log_lr_uniform(Real z, Real n, Real w2, Real a, Real zeta, long points = 1000000)
{
    auto f = [&](Real th) { return log_gamma_pdf(z, n, w2 + th); };
    return log_trapezoid_window(f, a, a + zeta, points) - log_trapezoid_window(f, 0, zeta, points);
}

/// log LR of the exponential jam-power mixtures (theta = shift + Exp(zeta)),
/// integrated over theta up to shift + span*zeta.
inline Real log_lr_exponential(Real z, Real k, Real w2, Real a, Real zeta, long points = 1000000, Real span = 200)
{
    auto f1 = [&](Real th) { return log_gamma_pdf(z, k, w2 + th) - (th - a) / zeta; };
    auto f0 = [&](Real th) { return log_gamma_pdf(z, k, w2 + th) - th / zeta; };
    return log_trapezoid_window(f1, a, a + span * zeta, points) - log_trapezoid_window(f0, 0, span * zeta, points);
}

/// Exponential integral E1(x), x > 0: power series below 1, continued fraction above.
inline Real expint_e1(Real x)
{
    if (x <= 1) {
        const Real euler = 0.577215664901532860606512090082402431L;
        Real sum = 0;
        Real term = 1;
        for (int k = 1; k < 200; ++k) {
            term *= -x / k;
            sum += term / k;
            if (std::fabs(term) < 1e-30L)
                break;
        }
        return -euler - std::log(x) - sum;
    }
    // Lentz evaluation of e^-x / (x + 1/(1 + 1/(x + 2/(1 + ...)))).
    Real b = x + 1;
    Real c = 1 / 1e-300L;
    Real d = 1 / b;
    Real h = d;
    for (int i = 1; i < 1000; ++i) {
        const Real an = -static_cast<Real>(i) * i;
        b += 2;
        d = 1 / (an * d + b);
        c = b + an / c;
        const Real del = c * d;
        h *= del;
        if (std::fabs(del - 1) < 1e-20L)
            break;
    }
    return h * std::exp(-x);
}

struct Bounds {
    double lo, hi;
};

/// Exact (Clopper-Pearson) binomial interval.
inline Bounds clopper_pearson(long x, long n, double confidence)
{
    const double alpha = 1.0 - confidence;
    Bounds b{0.0, 1.0};
    if (x > 0)
        b.lo = boost::math::quantile(boost::math::beta_distribution<double>(x, n - x + 1), alpha / 2);
    if (x < n)
        b.hi = boost::math::quantile(boost::math::beta_distribution<double>(x + 1, n - x), 1 - alpha / 2);
    return b;
}

/// CDF of the slot power when theta has density `theta_pdf` on [lo, hi]:
/// integral of P(Gamma(n, w2+theta) <= z) against the jam-power density.
inline double mixture_cdf(double z, double n, double w2, const std::function<double(double)>& theta_pdf, double lo,
                          double hi)
{
    auto g = [&](double th) { return boost::math::gamma_p(n, z / (w2 + th)) * theta_pdf(th); };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, lo, hi, 15, 1e-12);
}

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf)
{
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, (static_cast<double>(i) + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

} // namespace oracle
