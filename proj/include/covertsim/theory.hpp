#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "covertsim/detectors.hpp"
#include "covertsim/harness.hpp"
#include "covertsim/numerics.hpp"

namespace covertsim {

using LogDensityFn = std::function<double(double)>;

/// n points from lo to hi with constant ratio (lo, hi > 0).
std::vector<double> geometric_grid(double lo, double hi, std::size_t count);
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

struct OrderReport {
    bool pass = false;
    std::size_t points = 0;  // grid points where at least one density is positive
    double worst_diff = 0.0; // most negative successive log-ratio difference (0 if none)
    double worst_at = 0.0;
    double tol = 0.0;
};

/// Checks that log f1 - log f0 is nondecreasing on the grid. Where f0 = 0 < f1
/// the ratio is +inf, where f1 = 0 < f0 it is 0 (log -inf); points where both
/// vanish are skipped.
OrderReport check_lr_order(const LogDensityFn& log_f0, const LogDensityFn& log_f1, const std::vector<double>& grid,
                           double tol = 1e-9);

/// Uniform density 1/width on [lo, lo + width].
LogDensityFn uniform_log_density(double lo, double width);
/// shift + Exp(mean zeta).
LogDensityFn shifted_exponential_log_density(double shift, double zeta);

struct MonotonicityReport {
    std::string grid;
    std::int64_t axis = 0;
    std::size_t points = 0;
    double max_violation = 0.0; // most negative successive difference of log Lambda (0 if none)
    double worst_at = 0.0;
    double tol = 0.0;
    bool pass = false;   // every difference >= -tol * |log Lambda|
    bool strict = false; // exact offsets strictly increase at every step
};

/// log Lambda at normalized powers x (z/n, or Z_m/(n/M) per block).
LogLr log_lrt_normalized(const LrtConfig& cfg, const std::vector<double>& x);

/// Varies component `axis` of the normalized power over `grid` with the other
/// components fixed at `others` (ignored for M = 1 variants).
MonotonicityReport check_lrt_monotone(const LrtConfig& cfg, const std::vector<double>& grid, std::int64_t axis = 0,
                                      const std::vector<double>& others = {}, double tol = 1e-9);

/// Root in x_axis of log Lambda(x) = log_gamma with the other components of x
/// fixed; none when log_gamma is outside the attainable range on [0, cap].
std::optional<double> boundary_root(const LrtConfig& cfg, const std::vector<double>& x, std::int64_t axis,
                                    double log_gamma, double cap = 1e6);

struct BoundaryDraw {
    std::vector<double> x;
    bool in_region = false;
};

struct BoundaryRegion {
    std::int64_t M = 0;
    std::int64_t n = 0;
    double delta = 0.0;
    double log_gamma = 0.0;
    std::int64_t draws = 0;
    std::int64_t hits = 0;
    double mass = 0.0;
    Interval ci;
    double bound = 0.0; // 2 M delta / zeta
    std::int64_t failures = 0;
    std::int64_t spot_checks = 0;
    std::int64_t spot_disagreements = 0;
    /// Points of C(n) found on the diagonal through spot-checked draws, and the
    /// largest |log Lambda - log gamma| among them.
    std::vector<std::vector<double>> boundary_points;
    double max_root_residual = 0.0;
    std::vector<BoundaryDraw> samples;

    bool valid() const { return failures * 1000 <= draws; }
    /// boundary.csv: draw, x_1..x_M, in_region.
    std::string csv() const;
    std::string json() const;
};

/// Monte Carlo mass of the delta-neighbourhood of the decision boundary under
/// x_m = sigma_w2 + Exp(mean zeta), decided by the corner sign test.
BoundaryRegion estimate_boundary_mass(const LrtConfig& cfg, double delta, double log_gamma, std::int64_t samples,
                                      std::uint64_t seed, unsigned workers = 1, std::int64_t spot_checks = 100);

/// delta = epsilon * zeta / (2 M), so that the bound 2 M delta / zeta equals epsilon.
double boundary_delta(double epsilon, std::int64_t M, double zeta);

struct RocEquivalence {
    std::int64_t samples = 0;
    std::int64_t order_violations = 0; // pairs sorted by z whose LRT keys do not strictly increase
    std::int64_t thresholds = 0;
    std::int64_t table_mismatches = 0; // thresholds where the two sweeps disagree on (FA, MD)
    bool pass() const { return order_violations == 0 && table_mismatches == 0; }
};

/// Sweeps the LRT over every observed key and the power detector over every
/// observed z on the same samples and compares the decision counts.
RocEquivalence check_roc_equivalence(const Scenario& scenario, const Detector& lrt, const RunOptions& opts);

} // namespace covertsim
