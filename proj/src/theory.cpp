#include "covertsim/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "covertsim/parallel.hpp"
#include "covertsim/report.hpp"
#include "covertsim/rng.hpp"
#include "covertsim/synth.hpp"

namespace covertsim {

using numerics::kInf;

std::vector<double> geometric_grid(double lo, double hi, std::size_t count)
{
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
        throw ConfigError("geometric_grid: requires 0 < lo < hi and at least 2 points");
    std::vector<double> g(count);
    const double step = std::log(hi / lo) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = lo * std::exp(step * static_cast<double>(i));
    g.back() = hi;
    return g;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count)
{
    if (!(hi > lo) || count < 2)
        throw ConfigError("linear_grid: requires lo < hi and at least 2 points");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return g;
}

OrderReport check_lr_order(const LogDensityFn& log_f0, const LogDensityFn& log_f1, const std::vector<double>& grid,
                           double tol)
{
    OrderReport rep;
    rep.tol = tol;
    bool violated = false;
    double prev = 0.0;
    for (double x : grid) {
        const double l0 = log_f0(x);
        const double l1 = log_f1(x);
        if (l0 == -kInf && l1 == -kInf)
            continue;
        const double r = l0 == -kInf ? kInf : (l1 == -kInf ? -kInf : l1 - l0);
        if (rep.points > 0) {
            // Equal infinities count as a flat step; otherwise the difference may be +-inf.
            const double diff = r == prev ? 0.0 : r - prev;
            const double allowed = -tol * std::max(1.0, std::isfinite(prev) ? std::fabs(prev) : 0.0);
            if (diff < rep.worst_diff) {
                rep.worst_diff = diff;
                rep.worst_at = x;
            }
            if (diff < allowed)
                violated = true;
        }
        ++rep.points;
        prev = r;
    }
    rep.pass = rep.points >= 2 && !violated;
    return rep;
}

LogDensityFn uniform_log_density(double lo, double width)
{
    if (!(width > 0.0))
        throw ConfigError("uniform density: width must be positive");
    return [lo, width](double x) { return x >= lo && x <= lo + width ? -std::log(width) : -kInf; };
}

LogDensityFn shifted_exponential_log_density(double shift, double zeta)
{
    if (!(zeta > 0.0))
        throw ConfigError("exponential density: mean must be positive");
    return [shift, zeta](double x) { return x >= shift ? -std::log(zeta) - (x - shift) / zeta : -kInf; };
}

LogLr log_lrt_normalized(const LrtConfig& cfg, const std::vector<double>& x)
{
    switch (cfg.variant) {
    case LrtVariant::AwgnUniform:
        if (x.size() != 1)
            throw ConfigError("log_lrt_normalized: single-statistic variant needs one component");
        return log_lrt_awgn(x[0] * static_cast<double>(cfg.n), cfg);
    case LrtVariant::M1Exponential:
        if (x.size() != 1)
            throw ConfigError("log_lrt_normalized: single-statistic variant needs one component");
        return log_lrt_m1(x[0] * static_cast<double>(cfg.n), cfg);
    case LrtVariant::MBlockProduct: {
        std::vector<double> Z(x.size());
        const auto len = static_cast<double>(cfg.block_length());
        for (std::size_t m = 0; m < x.size(); ++m)
            Z[m] = x[m] * len;
        return log_lrt_mblock(Z, cfg);
    }
    }
    throw std::logic_error("unreachable");
}

MonotonicityReport check_lrt_monotone(const LrtConfig& cfg, const std::vector<double>& grid, std::int64_t axis,
                                      const std::vector<double>& others, double tol)
{
    cfg.validate();
    if (grid.size() < 2)
        throw ConfigError("check_lrt_monotone: grid needs at least 2 points");
    std::vector<double> x;
    if (cfg.variant == LrtVariant::MBlockProduct) {
        if (axis < 0 || axis >= cfg.M)
            throw ConfigError("check_lrt_monotone: axis out of range");
        x = others.empty() ? std::vector<double>(static_cast<std::size_t>(cfg.M), cfg.sigma_w2 + cfg.zeta) : others;
        if (static_cast<std::int64_t>(x.size()) != cfg.M)
            throw ConfigError("check_lrt_monotone: need M fixed components");
    } else {
        axis = 0;
        x.assign(1, 0.0);
    }

    MonotonicityReport rep;
    rep.axis = axis;
    rep.points = grid.size();
    rep.tol = tol;
    std::ostringstream desc;
    desc << grid.size() << " points on [" << grid.front() << ", " << grid.back() << "]";
    rep.grid = desc.str();
    rep.pass = true;
    rep.strict = true;

    // With the other components fixed, strict increase of the product along
    // `axis` is strict increase of that axis's own factor; the factor is
    // compared directly because the summed offset cannot resolve changes far
    // below the other blocks' terms.
    const bool product = cfg.variant == LrtVariant::MBlockProduct;
    const double len = static_cast<double>(cfg.block_length());
    LogLr prev;
    SignedLog prev_factor;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        x[static_cast<std::size_t>(axis)] = grid[i];
        const LogLr cur = log_lrt_normalized(cfg, x);
        const SignedLog factor = product ? log_lrt_block_term(grid[i] * len, axis, cfg).offset : cur.offset;
        if (i > 0) {
            const double vp = prev.value();
            const double diff = cur.value() - vp;
            if (diff < rep.max_violation) {
                rep.max_violation = diff;
                rep.worst_at = grid[i];
            }
            if (diff < -tol * std::fabs(vp))
                rep.pass = false;
            if (!(factor > prev_factor))
                rep.strict = false;
        }
        prev = cur;
        prev_factor = factor;
    }
    return rep;
}

std::optional<double> boundary_root(const LrtConfig& cfg, const std::vector<double>& x, std::int64_t axis,
                                    double log_gamma, double cap)
{
    if (axis < 0 || axis >= static_cast<std::int64_t>(x.size()))
        throw ConfigError("boundary_root: axis out of range");
    std::vector<double> y = x;
    auto f = [&](double t) {
        y[static_cast<std::size_t>(axis)] = t;
        return log_lrt_normalized(cfg, y).value();
    };
    if (f(0.0) > log_gamma)
        return std::nullopt;
    double hi = std::max(2.0 * x[static_cast<std::size_t>(axis)], cfg.sigma_w2 + cfg.zeta);
    while (f(hi) < log_gamma) {
        hi *= 2.0;
        if (hi > cap)
            return std::nullopt;
    }
    return numerics::bisect_monotone(f, log_gamma, 0.0, hi, 1e-13 * hi);
}

std::string BoundaryRegion::csv() const
{
    std::vector<std::string> cols{"draw"};
    for (std::int64_t m = 1; m <= M; ++m)
        cols.push_back("x_" + std::to_string(m));
    cols.push_back("in_region");
    CsvTable t(cols);
    for (std::size_t d = 0; d < samples.size(); ++d) {
        std::vector<std::string> cells{std::to_string(d)};
        for (double v : samples[d].x)
            cells.push_back(format_double(v));
        cells.push_back(samples[d].in_region ? "1" : "0");
        t.row(cells);
    }
    return t.str();
}

std::string BoundaryRegion::json() const
{
    nlohmann::json j;
    j["M"] = M;
    j["n"] = n;
    j["delta"] = delta;
    j["log_gamma"] = log_gamma;
    j["draws"] = draws;
    j["hits"] = hits;
    j["mass"] = mass;
    j["ci"] = {ci.lo, ci.hi};
    j["bound"] = bound;
    j["failures"] = failures;
    j["valid"] = valid();
    j["spot_checks"] = spot_checks;
    j["spot_disagreements"] = spot_disagreements;
    j["boundary_points"] = boundary_points;
    j["max_root_residual"] = max_root_residual;
    return j.dump(2);
}

namespace {

struct DrawResult {
    BoundaryDraw draw;
    bool failed = false;
    bool checked = false;
    bool disagree = false;
    std::optional<std::vector<double>> boundary_point;
    double residual = 0.0;
};

std::vector<double> shifted(const std::vector<double>& x, double t)
{
    std::vector<double> y(x.size());
    for (std::size_t m = 0; m < x.size(); ++m)
        y[m] = std::max(0.0, x[m] + t);
    return y;
}

} // namespace

BoundaryRegion estimate_boundary_mass(const LrtConfig& cfg, double delta, double log_gamma, std::int64_t samples,
                                      std::uint64_t seed, unsigned workers, std::int64_t spot_checks)
{
    cfg.validate();
    if (cfg.variant == LrtVariant::AwgnUniform)
        throw ConfigError("estimate_boundary_mass: needs a fading configuration");
    if (!(delta > 0.0))
        throw ConfigError("estimate_boundary_mass: delta must be positive");
    if (samples < 1)
        throw ConfigError("estimate_boundary_mass: samples must be >= 1");

    const auto M = static_cast<std::size_t>(cfg.M);
    std::vector<DrawResult> results(static_cast<std::size_t>(samples));
    parallel_for(samples, workers, [&](std::int64_t d) {
        DrawResult& r = results[static_cast<std::size_t>(d)];
        Rng rng = make_stream(SlotKey{seed, 4, static_cast<std::uint64_t>(d), 0}, Stream::Auxiliary);
        r.draw.x.resize(M);
        for (auto& v : r.draw.x)
            v = cfg.sigma_w2 - cfg.zeta * std::log1p(-rng.uniform());
        try {
            const LogLr lo = log_lrt_normalized(cfg, shifted(r.draw.x, -delta));
            const LogLr hi = log_lrt_normalized(cfg, shifted(r.draw.x, delta));
            const SignedLog key = SignedLog::from_double(log_gamma - lo.anchor);
            r.draw.in_region = lo.offset < key && hi.offset > key;
            if (d < spot_checks) {
                r.checked = true;
                auto g = [&](double t) { return log_lrt_normalized(cfg, shifted(r.draw.x, t)).value(); };
                const auto t = numerics::bisect_monotone(g, log_gamma, -delta, delta, 1e-14);
                const bool diagonal_in = t && std::fabs(*t) < delta && g(-delta) != log_gamma;
                bool axis_in = false;
                for (std::size_t m = 0; m < M; ++m) {
                    const auto root = boundary_root(cfg, r.draw.x, static_cast<std::int64_t>(m), log_gamma);
                    if (root && std::fabs(*root - r.draw.x[m]) < delta)
                        axis_in = true;
                }
                r.disagree = diagonal_in != r.draw.in_region || (axis_in && !r.draw.in_region);
                if (t && diagonal_in) {
                    r.boundary_point = shifted(r.draw.x, *t);
                    r.residual = std::fabs(g(*t) - log_gamma);
                }
            }
        } catch (const NumericalError&) {
            r.failed = true;
            r.draw.in_region = false;
        } catch (const std::logic_error&) {
            r.failed = true;
            r.draw.in_region = false;
        }
    });

    BoundaryRegion reg;
    reg.M = cfg.M;
    reg.n = cfg.n;
    reg.delta = delta;
    reg.log_gamma = log_gamma;
    reg.draws = samples;
    reg.bound = 2.0 * static_cast<double>(cfg.M) * delta / cfg.zeta;
    reg.samples.reserve(results.size());
    for (auto& r : results) {
        reg.hits += r.draw.in_region;
        reg.failures += r.failed;
        reg.spot_checks += r.checked;
        reg.spot_disagreements += r.disagree;
        if (r.boundary_point) {
            reg.boundary_points.push_back(*r.boundary_point);
            reg.max_root_residual = std::max(reg.max_root_residual, r.residual);
        }
        reg.samples.push_back(std::move(r.draw));
    }
    reg.mass = static_cast<double>(reg.hits) / static_cast<double>(samples);
    reg.ci = numerics::wilson_interval(reg.hits, samples);
    return reg;
}

double boundary_delta(double epsilon, std::int64_t M, double zeta)
{
    if (!(epsilon > 0.0 && epsilon < 1.0) || M < 1 || !(zeta > 0.0))
        throw std::domain_error("boundary_delta: requires epsilon in (0,1), M >= 1, zeta > 0");
    return epsilon * zeta / (2.0 * static_cast<double>(M));
}

RocEquivalence check_roc_equivalence(const Scenario& scenario, const Detector& lrt, const RunOptions& opts)
{
    if (lrt.kind() != Detector::Kind::Lrt)
        throw ConfigError("check_roc_equivalence: needs an LRT detector");
    scenario.validate();
    lrt.check_compatible(scenario);
    if (opts.trials < 1)
        throw ConfigError("trials must be >= 1");

    struct Item {
        double z;
        SignedLog key;
        bool h1;
    };
    const auto N = static_cast<std::size_t>(opts.trials);
    std::vector<Item> items(2 * N);
    parallel_for(2 * opts.trials, opts.workers, [&](std::int64_t i) {
        const bool h1 = i >= opts.trials;
        const auto trial = static_cast<std::uint64_t>(h1 ? i - opts.trials : i);
        const Hypothesis h = h1 ? Hypothesis::H1 : Hypothesis::H0;
        const Observation obs = synthesize_willie_slot(scenario, h, SlotKey{opts.seed, h1 ? 1u : 0u, trial, 0});
        items[static_cast<std::size_t>(i)] = {total_power(obs), lrt.statistic(obs), h1};
    });

    RocEquivalence eq;
    eq.samples = static_cast<std::int64_t>(items.size());

    // Counts of (H0 above, H1 at or below) the threshold placed at each item,
    // under an ordering given by `less`.
    auto tables = [&](auto less, auto equal) {
        std::vector<std::size_t> idx(items.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return less(items[a], items[b]); });
        std::int64_t total_h0 = 0;
        for (const auto& it : items)
            total_h0 += !it.h1;
        std::vector<std::pair<std::int64_t, std::int64_t>> t(items.size());
        std::int64_t h0_below = 0, h1_below = 0;
        for (std::size_t i = 0; i < idx.size();) {
            std::size_t j = i;
            while (j < idx.size() && equal(items[idx[j]], items[idx[i]])) {
                (items[idx[j]].h1 ? h1_below : h0_below) += 1;
                ++j;
            }
            for (std::size_t k = i; k < j; ++k)
                t[idx[k]] = {total_h0 - h0_below, h1_below};
            i = j;
        }
        return std::make_pair(idx, t);
    };
    const auto [by_z, table_z] =
        tables([](const Item& a, const Item& b) { return a.z < b.z; }, [](const Item& a, const Item& b) { return a.z == b.z; });
    const auto [by_key, table_key] = tables([](const Item& a, const Item& b) { return a.key < b.key; },
                                            [](const Item& a, const Item& b) { return a.key == b.key; });
    (void)by_key;

    for (std::size_t i = 0; i + 1 < by_z.size(); ++i) {
        const Item& a = items[by_z[i]];
        const Item& b = items[by_z[i + 1]];
        const bool ok = a.z < b.z ? a.key < b.key : a.key == b.key;
        eq.order_violations += !ok;
    }
    eq.thresholds = static_cast<std::int64_t>(items.size());
    for (std::size_t i = 0; i < items.size(); ++i)
        eq.table_mismatches += table_z[i] != table_key[i];
    return eq;
}

} // namespace covertsim
