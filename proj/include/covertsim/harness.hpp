#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covertsim/detectors.hpp"
#include "covertsim/model.hpp"
#include "covertsim/numerics.hpp"

namespace covertsim {

using numerics::Interval;

struct ErrorRates {
    double threshold = 0.0;
    std::int64_t trials_h0 = 0;
    std::int64_t trials_h1 = 0;
    std::int64_t false_alarms = 0;
    std::int64_t misses = 0;
    double p_fa = 0.0;
    double p_md = 0.0;
    double sum = 0.0;
    Interval ci_fa;
    Interval ci_md;

    /// Sum of the two Wilson bounds (conservative interval for p_fa + p_md).
    Interval ci_sum() const { return {ci_fa.lo + ci_md.lo, ci_fa.hi + ci_md.hi}; }
};

struct RunOptions {
    std::int64_t trials = 10000; // per hypothesis
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

/// Detector statistics of Willie's slot-0 observation, indexed by trial.
struct StatisticSet {
    std::vector<SignedLog> h0;
    std::vector<SignedLog> h1;
};

/// Independent sample sets under one seed: the search set is phase 0, the
/// held-out set phase 1.
StatisticSet collect_statistics(const Scenario& scenario, const Detector& detector, const RunOptions& opts,
                                std::uint64_t phase = 0);

/// Error counts when deciding H1 iff statistic > key.
ErrorRates rates_at_key(const StatisticSet& stats, const SignedLog& key, double threshold);

ErrorRates estimate_error_rates(const Scenario& scenario, const Detector& detector, double threshold,
                                const RunOptions& opts);

/// One ErrorRates per grid point, all computed on the same samples.
std::vector<ErrorRates> sweep_thresholds(const Scenario& scenario, const Detector& detector,
                                         const std::vector<double>& grid, const RunOptions& opts);

struct MinErrorResult {
    /// Exact empirical minimizer on the search set (optimistically biased).
    ErrorRates search;
    /// The same threshold re-estimated on an independent held-out set.
    ErrorRates held_out;
    /// The LRT decision at its own log gamma, on the held-out set.
    std::optional<ErrorRates> at_gamma;
};

/// Minimum of p_fa + p_md over every distinct statistic value of the search set.
MinErrorResult willie_min_error(const Scenario& scenario, const Detector& detector, const RunOptions& opts);

struct CurveRow {
    std::int64_t n = 0;
    MinErrorResult result;
};

struct CovertnessCurve {
    Scenario scenario;
    double epsilon = 0.0;
    std::string detector;
    std::vector<CurveRow> rows;

    /// curve.csv: n, threshold, min_sum, ci_lo, ci_hi, then search and at-gamma columns.
    std::string csv() const;
};

/// willie_min_error for each n with Alice's power held fixed at the template's P_f.
/// Uses the optimal LRT for the scenario when it has one, the power detector otherwise.
CovertnessCurve covertness_curve(const Scenario& scenario_template, double epsilon,
                                 const std::vector<std::int64_t>& n_list, const RunOptions& opts,
                                 bool genie = false);

/// roc.csv: threshold, p_fa, p_md, ci bounds.
std::string roc_csv(const std::vector<ErrorRates>& roc);

struct ConcentrationRow {
    std::int64_t n = 0;
    double frequency = 0.0; // fraction of H0 slots with |z/n - (sigma_w2 + jam power)| < delta
    Interval ci;
};

struct ConcentrationReport {
    std::vector<ConcentrationRow> rows;
    /// Smallest listed n from which every row reaches 1 - epsilon/2.
    std::optional<std::int64_t> n0;
};

ConcentrationReport concentration_study(const Scenario& scenario_template, double delta, double epsilon,
                                        const std::vector<std::int64_t>& n_list, const RunOptions& opts);

} // namespace covertsim
