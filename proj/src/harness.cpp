#include "covertsim/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "covertsim/parallel.hpp"
#include "covertsim/report.hpp"
#include "covertsim/synth.hpp"

namespace covertsim {

namespace {

void check_options(const RunOptions& opts)
{
    if (opts.trials < 1)
        throw ConfigError("trials must be >= 1");
}

std::uint64_t stream_set(std::uint64_t phase, Hypothesis h)
{
    return (phase << 1) | (h == Hypothesis::H1 ? 1u : 0u);
}

std::vector<SignedLog> statistics_for(const Scenario& scenario, const Detector& detector, const RunOptions& opts,
                                      std::uint64_t phase, Hypothesis h)
{
    std::vector<SignedLog> out(static_cast<std::size_t>(opts.trials));
    parallel_for(opts.trials, opts.workers, [&](std::int64_t t) {
        const SlotKey key{opts.seed, stream_set(phase, h), static_cast<std::uint64_t>(t), 0};
        out[static_cast<std::size_t>(t)] = detector.statistic(synthesize_willie_slot(scenario, h, key));
    });
    return out;
}

// Midpoint strictly between two distinct keys a < b; falls back to a, which
// yields the same decisions on the search set.
SignedLog key_between(const SignedLog& a, const SignedLog& b)
{
    SignedLog mid;
    if (a.sign == b.sign && a.sign != 0)
        mid = SignedLog::from_log(a.sign, 0.5 * (a.log_abs + b.log_abs));
    else if (a.sign < 0 && b.sign > 0)
        mid = SignedLog::zero();
    else if (a.sign == 0)
        mid = SignedLog::from_log(1, b.log_abs - std::log(2.0));
    else
        mid = SignedLog::from_log(-1, a.log_abs - std::log(2.0));
    if (std::isinf(a.log_abs) || std::isinf(b.log_abs) || !(a < mid && mid < b))
        return a;
    return mid;
}

} // namespace

StatisticSet collect_statistics(const Scenario& scenario, const Detector& detector, const RunOptions& opts,
                                std::uint64_t phase)
{
    check_options(opts);
    scenario.validate();
    detector.check_compatible(scenario);
    StatisticSet s;
    s.h0 = statistics_for(scenario, detector, opts, phase, Hypothesis::H0);
    s.h1 = statistics_for(scenario, detector, opts, phase, Hypothesis::H1);
    return s;
}

ErrorRates rates_at_key(const StatisticSet& stats, const SignedLog& key, double threshold)
{
    if (stats.h0.empty() || stats.h1.empty())
        throw ConfigError("rates_at_key: empty sample set");
    ErrorRates r;
    r.threshold = threshold;
    r.trials_h0 = static_cast<std::int64_t>(stats.h0.size());
    r.trials_h1 = static_cast<std::int64_t>(stats.h1.size());
    for (const auto& s : stats.h0)
        r.false_alarms += decide(s, key) == Hypothesis::H1;
    for (const auto& s : stats.h1)
        r.misses += decide(s, key) == Hypothesis::H0;
    r.p_fa = static_cast<double>(r.false_alarms) / static_cast<double>(r.trials_h0);
    r.p_md = static_cast<double>(r.misses) / static_cast<double>(r.trials_h1);
    r.sum = r.p_fa + r.p_md;
    r.ci_fa = numerics::wilson_interval(r.false_alarms, r.trials_h0);
    r.ci_md = numerics::wilson_interval(r.misses, r.trials_h1);
    return r;
}

ErrorRates estimate_error_rates(const Scenario& scenario, const Detector& detector, double threshold,
                                const RunOptions& opts)
{
    const StatisticSet stats = collect_statistics(scenario, detector, opts);
    return rates_at_key(stats, detector.key_for_threshold(threshold), threshold);
}

std::vector<ErrorRates> sweep_thresholds(const Scenario& scenario, const Detector& detector,
                                         const std::vector<double>& grid, const RunOptions& opts)
{
    if (grid.empty())
        throw ConfigError("threshold grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw ConfigError("threshold grid must be sorted");
    const StatisticSet stats = collect_statistics(scenario, detector, opts);
    std::vector<ErrorRates> out;
    out.reserve(grid.size());
    for (double t : grid)
        out.push_back(rates_at_key(stats, detector.key_for_threshold(t), t));
    return out;
}

MinErrorResult willie_min_error(const Scenario& scenario, const Detector& detector, const RunOptions& opts)
{
    const StatisticSet search = collect_statistics(scenario, detector, opts, 0);

    struct Labeled {
        SignedLog key;
        bool h1;
    };
    std::vector<Labeled> pooled;
    pooled.reserve(search.h0.size() + search.h1.size());
    for (const auto& s : search.h0)
        pooled.push_back({s, false});
    for (const auto& s : search.h1)
        pooled.push_back({s, true});
    std::sort(pooled.begin(), pooled.end(), [](const Labeled& a, const Labeled& b) { return a.key < b.key; });

    // Rule "H1 iff stat > v": start below every value (all H1), then move v up
    // through each distinct value.
    const auto n0 = static_cast<std::int64_t>(search.h0.size());
    const auto n1 = static_cast<std::int64_t>(search.h1.size());
    std::int64_t fa = n0;
    std::int64_t md = 0;
    double best_sum = 1.0;
    std::size_t best_end = 0; // number of pooled values at or below the chosen threshold
    for (std::size_t i = 0; i < pooled.size();) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j].key == pooled[i].key) {
            if (pooled[j].h1)
                ++md;
            else
                --fa;
            ++j;
        }
        const double sum = static_cast<double>(fa) / static_cast<double>(n0) +
                           static_cast<double>(md) / static_cast<double>(n1);
        if (sum < best_sum) {
            best_sum = sum;
            best_end = j;
        }
        i = j;
    }

    SignedLog key;
    if (best_end == 0)
        key = SignedLog::from_double(-std::numeric_limits<double>::infinity());
    else if (best_end == pooled.size())
        key = pooled.back().key;
    else
        key = key_between(pooled[best_end - 1].key, pooled[best_end].key);
    const double threshold = detector.threshold_from_key(key);

    MinErrorResult r;
    r.search = rates_at_key(search, key, threshold);
    const StatisticSet held = collect_statistics(scenario, detector, opts, 1);
    r.held_out = rates_at_key(held, key, threshold);
    if (const auto lg = detector.natural_threshold())
        r.at_gamma = rates_at_key(held, detector.key_for_threshold(*lg), *lg);
    return r;
}

std::string CovertnessCurve::csv() const
{
    CsvTable t({"n", "threshold", "min_sum", "ci_lo", "ci_hi", "p_fa", "p_md", "search_min_sum",
                "sum_at_gamma", "at_gamma_ci_lo", "at_gamma_ci_hi"});
    for (const auto& row : rows) {
        const auto& h = row.result.held_out;
        const Interval ci = h.ci_sum();
        std::vector<std::string> cells{std::to_string(row.n),        format_double(h.threshold),
                                       format_double(h.sum),         format_double(ci.lo),
                                       format_double(ci.hi),         format_double(h.p_fa),
                                       format_double(h.p_md),        format_double(row.result.search.sum)};
        if (row.result.at_gamma) {
            const Interval g = row.result.at_gamma->ci_sum();
            cells.push_back(format_double(row.result.at_gamma->sum));
            cells.push_back(format_double(g.lo));
            cells.push_back(format_double(g.hi));
        } else {
            cells.insert(cells.end(), {"", "", ""});
        }
        t.row(cells);
    }
    return t.str();
}

CovertnessCurve covertness_curve(const Scenario& scenario_template, double epsilon,
                                 const std::vector<std::int64_t>& n_list, const RunOptions& opts, bool genie)
{
    if (n_list.empty())
        throw ConfigError("n list is empty");
    if (!std::is_sorted(n_list.begin(), n_list.end()))
        throw ConfigError("n list must be sorted");
    scenario_template.validate();
    CovertnessCurve curve;
    curve.scenario = scenario_template;
    curve.epsilon = epsilon;
    for (std::int64_t n : n_list) {
        Scenario s = scenario_template;
        s.slots.n = n;
        s.validate();
        Detector d = Detector::power();
        try {
            d = Detector::optimal_for(s, genie);
        } catch (const ConfigError&) {
            if (genie)
                throw;
        }
        curve.detector = d.name();
        curve.rows.push_back({n, willie_min_error(s, d, opts)});
    }
    return curve;
}

std::string roc_csv(const std::vector<ErrorRates>& roc)
{
    CsvTable t({"threshold", "p_fa", "p_md", "fa_ci_lo", "fa_ci_hi", "md_ci_lo", "md_ci_hi"});
    for (const auto& r : roc)
        t.row({format_double(r.threshold), format_double(r.p_fa), format_double(r.p_md), format_double(r.ci_fa.lo),
               format_double(r.ci_fa.hi), format_double(r.ci_md.lo), format_double(r.ci_md.hi)});
    return t.str();
}

ConcentrationReport concentration_study(const Scenario& scenario_template, double delta, double epsilon,
                                        const std::vector<std::int64_t>& n_list, const RunOptions& opts)
{
    check_options(opts);
    if (!(delta > 0.0) || !(epsilon > 0.0 && epsilon < 1.0))
        throw ConfigError("concentration_study: requires delta > 0 and epsilon in (0,1)");
    ConcentrationReport rep;
    for (std::int64_t n : n_list) {
        Scenario s = scenario_template;
        s.slots.n = n;
        s.validate();
        std::vector<char> inside(static_cast<std::size_t>(opts.trials));
        parallel_for(opts.trials, opts.workers, [&](std::int64_t t) {
            const SlotKey key{opts.seed, stream_set(2, Hypothesis::H0), static_cast<std::uint64_t>(t), 0};
            const Observation obs = synthesize_willie_slot(s, Hypothesis::H0, key);
            double jam = 0.0;
            for (double p : obs.latents.jam_power_rx)
                jam += p;
            jam /= static_cast<double>(obs.latents.jam_power_rx.size());
            const double x = total_power(obs) / static_cast<double>(n);
            inside[static_cast<std::size_t>(t)] = std::fabs(x - (s.noise.sigma_w2 + jam)) < delta;
        });
        std::int64_t hits = 0;
        for (char c : inside)
            hits += c;
        ConcentrationRow row;
        row.n = n;
        row.frequency = static_cast<double>(hits) / static_cast<double>(opts.trials);
        row.ci = numerics::wilson_interval(hits, opts.trials);
        rep.rows.push_back(row);
    }
    for (std::size_t i = rep.rows.size(); i-- > 0;) {
        if (rep.rows[i].frequency < 1.0 - epsilon / 2.0)
            break;
        rep.n0 = rep.rows[i].n;
    }
    return rep;
}

} // namespace covertsim
