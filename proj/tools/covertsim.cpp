// Command-line front end: each subcommand writes its CSV/JSON outputs plus a
// manifest.json into --out. Exit codes: 0 success, 2 usage or configuration
// error, 3 numerical failure.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "covertsim/detectors.hpp"
#include "covertsim/harness.hpp"
#include "covertsim/model.hpp"
#include "covertsim/report.hpp"
#include "covertsim/theory.hpp"
#include "covertsim/throughput.hpp"

#ifndef COVERTSIM_VERSION
#define COVERTSIM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace covertsim;
using nlohmann::json;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    unsigned workers = 1;
};

void add_common(CLI::App* cmd, Common& c)
{
    cmd->add_option("config", c.config, "Scenario JSON file (defaults are used when omitted)");
    cmd->add_option("--seed", c.seed, "Master seed (falls back to $COVERTSIM_SEED, then 1)");
    cmd->add_option("--out", c.out, "Output directory")->capture_default_str();
    cmd->add_option("--workers", c.workers, "Worker threads; results do not depend on it")
        ->check(CLI::Range(1u, 1024u))
        ->capture_default_str();
}

Scenario load_scenario(const Common& c)
{
    if (c.config.empty())
        return Scenario{};
    if (!fs::exists(c.config))
        throw ConfigError("config file not found: " + c.config);
    return Scenario::load(c.config);
}

std::uint64_t resolve_seed(const Common& c)
{
    if (c.seed)
        return *c.seed;
    if (const char* env = std::getenv("COVERTSIM_SEED")) {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used);
            if (used == std::string(env).size())
                return v;
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("COVERTSIM_SEED is not an unsigned integer: ") + env);
    }
    return 1;
}

std::string utc_timestamp()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Writes outputs, then manifest.json listing them with their content hashes.
class Run {
public:
    Run(std::string command, const Common& c, const Scenario& s, std::uint64_t seed)
        : command_(std::move(command)), dir_(c.out), scenario_(s), seed_(seed)
    {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec)
            throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
        params_["workers"] = c.workers;
        params_["config"] = c.config;
    }

    json& params() { return params_; }

    void write(const std::string& name, const std::string& text)
    {
        write_text(dir_ / name, text);
        outputs_.push_back({{"file", name}, {"hash", git_blob_hash(text)}});
    }

    void finish()
    {
        json m;
        m["command"] = command_;
        m["scenario"] = json::parse(scenario_.to_json());
        m["config_hash"] = git_blob_hash(scenario_.to_json());
        m["seed"] = seed_;
        m["version"] = COVERTSIM_VERSION;
        m["timestamp"] = utc_timestamp();
        m["parameters"] = params_;
        m["outputs"] = outputs_;
        write_text(dir_ / "manifest.json", m.dump(2) + "\n");
    }

private:
    std::string command_;
    fs::path dir_;
    Scenario scenario_;
    std::uint64_t seed_;
    json params_ = json::object();
    json outputs_ = json::array();
};

/// Alice's parameters for the scenario's construction.
CovertParams recipe_for(const Scenario& s, double eps)
{
    const double zeta = s.zeta();
    const bool uniform = s.jammer.kind == JammerStrategy::Kind::UniformPerSlot;
    if (uniform)
        return select_covert_params_awgn(eps, zeta, s.geometry.d_aw, s.geometry.alpha);
    if (s.slots.M == 1)
        return select_covert_params_fading(eps, zeta, s.geometry.d_aw, s.geometry.alpha);
    return select_covert_params_multiblock(eps, s.slots.M, zeta, s.geometry.d_aw, s.geometry.alpha);
}

json params_json(const CovertParams& p)
{
    json j{{"epsilon", p.epsilon}, {"delta", p.delta}, {"sigma_a2", p.sigma_a2}, {"P_f", p.P_f}};
    if (p.c)
        j["c"] = *p.c;
    return j;
}

Detector make_detector(const std::string& kind, const Scenario& s, bool genie)
{
    if (kind == "power")
        return Detector::power();
    if (kind == "lrt")
        return Detector::optimal_for(s, genie);
    throw ConfigError("unknown detector '" + kind + "' (expected power|lrt)");
}

std::string pass_text(bool ok)
{
    return ok ? "PASS" : "FAIL";
}

// ---------------------------------------------------------------- commands

struct CovertnessArgs {
    Common c;
    double eps = 0.1;
    std::vector<std::int64_t> n_list{1000, 10000};
    std::int64_t trials = 10000;
    bool keep_power = false;
    bool genie = false;
};

int cmd_covertness(const CovertnessArgs& a)
{
    Scenario s = load_scenario(a.c);
    const std::uint64_t seed = resolve_seed(a.c);
    Run run("covertness", a.c, s, seed);
    if (!a.keep_power) {
        const CovertParams p = recipe_for(s, a.eps);
        s.P_f = p.P_f;
        run.params()["covert_params"] = params_json(p);
    }
    run.params()["eps"] = a.eps;
    run.params()["n_list"] = a.n_list;
    run.params()["trials"] = a.trials;
    run.params()["genie"] = a.genie;
    const CovertnessCurve curve = covertness_curve(s, a.eps, a.n_list, {a.trials, seed, a.c.workers}, a.genie);
    run.params()["detector"] = curve.detector;
    run.write("curve.csv", curve.csv());
    run.finish();
    for (const auto& row : curve.rows)
        std::cout << "n=" << row.n << " min_sum=" << format_double(row.result.held_out.sum)
                  << " (search " << format_double(row.result.search.sum) << ")\n";
    return 0;
}

struct RocArgs {
    Common c;
    std::string detector = "power";
    std::vector<double> grid;
    std::size_t points = 101;
    std::int64_t trials = 10000;
    bool genie = false;
};

int cmd_roc(const RocArgs& a)
{
    const Scenario s = load_scenario(a.c);
    const std::uint64_t seed = resolve_seed(a.c);
    Run run("roc", a.c, s, seed);
    const Detector d = make_detector(a.detector, s, a.genie);
    std::vector<double> grid = a.grid;
    if (grid.empty()) {
        // Natural units: z/n spans noise-only to jammer-plus-Alice power; log Lambda spans [-10, 10].
        if (d.kind() == Detector::Kind::Power)
            grid = linear_grid(0.0, 2.0 * (s.noise.sigma_w2 + s.zeta() + s.sigma_a2()), a.points);
        else
            grid = linear_grid(-10.0, 10.0, a.points);
    }
    std::sort(grid.begin(), grid.end());
    grid.insert(grid.begin(), -std::numeric_limits<double>::infinity());
    grid.push_back(std::numeric_limits<double>::infinity());
    run.params()["detector"] = d.name();
    run.params()["trials"] = a.trials;
    run.write("roc.csv", roc_csv(sweep_thresholds(s, d, grid, {a.trials, seed, a.c.workers})));
    run.finish();
    std::cout << "wrote " << grid.size() << " thresholds\n";
    return 0;
}

struct CheckArgs {
    Common c;
    std::size_t points = 1000;
    double x_lo = 0.1;
    double x_hi = 10.0;
    std::int64_t trials = 2000;
};

int cmd_check(const CheckArgs& a)
{
    const Scenario s = load_scenario(a.c);
    const std::uint64_t seed = resolve_seed(a.c);
    Run run("check", a.c, s, seed);
    const LrtConfig cfg = LrtConfig::from_scenario(s);
    const auto grid = geometric_grid(a.x_lo, a.x_hi, a.points);
    json report;
    bool all = true;

    // Likelihood-ratio order of the jam-power families and the resulting mixtures.
    const double zeta = cfg.zeta;
    const double sa = cfg.sigma_a2;
    const double n = static_cast<double>(cfg.n);
    const auto theta_grid = linear_grid(0.0, 2.0 * (zeta + sa) + 1.0, a.points);
    auto order = [&](const std::string& name, const OrderReport& r, bool expect) {
        report["lr_order"][name] = {{"pass", r.pass}, {"points", r.points}, {"worst_diff", r.worst_diff},
                                    {"worst_at", r.worst_at}, {"expected", expect}};
        all = all && r.pass == expect;
        std::cout << "lr_order " << name << ": " << pass_text(r.pass == expect) << '\n';
    };
    if (sa > 0.0) {
        order("theta_uniform", check_lr_order(uniform_log_density(0.0, zeta), uniform_log_density(sa, zeta), theta_grid),
              true);
        order("theta_exponential",
              check_lr_order(shifted_exponential_log_density(0.0, zeta), shifted_exponential_log_density(sa, zeta),
                             theta_grid),
              true);
        const double k = static_cast<double>(cfg.block_length());
        std::vector<double> zgrid(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            zgrid[i] = grid[i] * k;
        const double w2 = cfg.sigma_w2;
        order("mixture_uniform",
              check_lr_order([&](double z) { return numerics::log_mixture_density_uniform(z, k, w2, 0.0, zeta, zeta); },
                             [&](double z) { return numerics::log_mixture_density_uniform(z, k, w2, sa, sa + zeta, zeta); },
                             zgrid),
              true);
        order("mixture_exponential",
              check_lr_order([&](double z) { return numerics::log_mixture_density_exponential(z, k, w2, 0.0, zeta); },
                             [&](double z) { return numerics::log_mixture_density_exponential(z, k, w2, sa, zeta); },
                             zgrid),
              true);
    }
    order("gamma_scale",
          check_lr_order([&](double z) { return numerics::log_gamma_density(z, n, cfg.sigma_w2); },
                         [&](double z) { return numerics::log_gamma_density(z, n, cfg.sigma_w2 + zeta); },
                         linear_grid(0.0, 4.0 * n * (cfg.sigma_w2 + zeta), a.points)),
          true);
    auto gauss = [](double sd) {
        return [sd](double x) { return -0.5 * x * x / (sd * sd) - std::log(sd); };
    };
    order("gaussian_control", check_lr_order(gauss(1.0), gauss(2.0), linear_grid(-5.0, 5.0, a.points)), false);

    // Monotonicity of log Lambda along each axis.
    CsvTable mono({"axis", "x", "log_lr"});
    const std::int64_t axes = cfg.variant == LrtVariant::MBlockProduct ? cfg.M : 1;
    for (std::int64_t ax = 0; ax < axes; ++ax) {
        const MonotonicityReport r = check_lrt_monotone(cfg, grid, ax);
        report["monotonicity"].push_back({{"axis", ax},
                                          {"grid", r.grid},
                                          {"pass", r.pass},
                                          {"strict", r.strict},
                                          {"max_violation", r.max_violation},
                                          {"worst_at", r.worst_at},
                                          {"tol", r.tol}});
        all = all && r.pass && r.strict;
        std::cout << "monotonicity axis " << ax << ": " << pass_text(r.pass && r.strict) << '\n';
        std::vector<double> x(static_cast<std::size_t>(axes), cfg.sigma_w2 + cfg.zeta);
        for (double g : grid) {
            x[static_cast<std::size_t>(ax)] = g;
            mono.row({std::to_string(ax), format_double(g), format_double(log_lrt_normalized(cfg, x).value())});
        }
    }

    // Point-for-point equality of the LRT and power ROC on shared samples.
    if (cfg.variant != LrtVariant::MBlockProduct && sa > 0.0) {
        const RocEquivalence eq = check_roc_equivalence(s, Detector::lrt(cfg), {a.trials, seed, a.c.workers});
        report["roc_equivalence"] = {{"samples", eq.samples},
                                     {"order_violations", eq.order_violations},
                                     {"table_mismatches", eq.table_mismatches},
                                     {"pass", eq.pass()}};
        all = all && eq.pass();
        std::cout << "roc equivalence: " << pass_text(eq.pass()) << '\n';
    }
    report["pass"] = all;
    run.params()["points"] = a.points;
    run.params()["trials"] = a.trials;
    run.write("monotonicity.csv", mono.str());
    run.write("check.json", report.dump(2) + "\n");
    run.finish();
    std::cout << "overall: " << pass_text(all) << '\n';
    return 0;
}

struct BoundaryArgs {
    Common c;
    double eps = 0.1;
    std::optional<double> delta;
    std::int64_t samples = 10000;
    std::int64_t spot_checks = 100;
};

int cmd_boundary(const BoundaryArgs& a)
{
    const Scenario s = load_scenario(a.c);
    const std::uint64_t seed = resolve_seed(a.c);
    Run run("boundary", a.c, s, seed);
    LrtConfig cfg = LrtConfig::from_scenario(s);
    if (cfg.variant == LrtVariant::AwgnUniform)
        throw ConfigError("boundary: needs a constant-power jammer over a fading jammer-Willie link");
    if (cfg.variant == LrtVariant::M1Exponential)
        cfg.variant = LrtVariant::MBlockProduct;
    const double delta = a.delta.value_or(boundary_delta(a.eps, cfg.M, cfg.zeta));
    const BoundaryRegion reg =
        estimate_boundary_mass(cfg, delta, cfg.log_gamma, a.samples, seed, a.c.workers, a.spot_checks);
    run.params()["eps"] = a.eps;
    run.params()["delta"] = delta;
    run.params()["samples"] = a.samples;
    run.write("boundary.csv", reg.csv());
    run.write("boundary.json", reg.json() + "\n");
    run.finish();
    std::cout << "mass=" << format_double(reg.mass) << " ci=[" << format_double(reg.ci.lo) << ", "
              << format_double(reg.ci.hi) << "] bound=" << format_double(reg.bound) << " failures=" << reg.failures
              << '\n';
    if (!reg.valid())
        throw NumericalError("boundary: more than 0.1% of draws failed");
    return 0;
}

struct CapacityArgs {
    Common c;
    double outage = 0.05;
    std::int64_t samples = 100000;
    std::vector<std::int64_t> n_list{1000, 10000};
    std::vector<double> pf_list;
    std::optional<double> eps;
};

int cmd_capacity(const CapacityArgs& a)
{
    Scenario s = load_scenario(a.c);
    const std::uint64_t seed = resolve_seed(a.c);
    Run run("capacity", a.c, s, seed);
    std::vector<double> powers = a.pf_list;
    if (powers.empty()) {
        if (a.eps) {
            const CovertParams p = recipe_for(s, *a.eps);
            run.params()["covert_params"] = params_json(p);
            powers.push_back(p.P_f);
        } else {
            powers.push_back(s.P_f);
        }
    }
    std::vector<CapacityRow> rows;
    for (double pf : powers) {
        Scenario t = s;
        t.P_f = pf;
        t.validate();
        const double R = outage_capacity(t, a.outage, a.samples, seed, a.c.workers);
        for (std::int64_t n : a.n_list)
            rows.push_back({pf, t.jammer.power, a.outage, R, n, covert_bits(n, R)});
    }
    run.params()["outage"] = a.outage;
    run.params()["samples"] = a.samples;
    run.params()["n_list"] = a.n_list;
    run.write("capacity.csv", capacity_csv(rows));
    run.finish();
    for (const auto& r : rows)
        std::cout << "P_f=" << format_double(r.P_f) << " n=" << r.n << " R=" << format_double(r.R)
                  << " bits=" << r.bits << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"covertsim: jammer-aided covert communication simulator"};
    app.set_version_flag("--version", COVERTSIM_VERSION);
    app.require_subcommand(1);

    CovertnessArgs cov;
    auto* c1 = app.add_subcommand("covertness", "Willie's minimum error versus n (curve.csv)");
    add_common(c1, cov.c);
    c1->add_option("--eps", cov.eps, "Covertness target epsilon")->capture_default_str();
    c1->add_option("--n-list", cov.n_list, "Slot lengths")->delimiter(',')->capture_default_str();
    c1->add_option("--trials", cov.trials, "Trials per hypothesis")->capture_default_str();
    c1->add_flag("--keep-power", cov.keep_power, "Use P_f from the config instead of the construction recipe");
    c1->add_flag("--genie", cov.genie, "Willie knows the Alice-Willie fading gains");

    RocArgs roc;
    auto* c2 = app.add_subcommand("roc", "Threshold sweep on shared samples (roc.csv)");
    add_common(c2, roc.c);
    c2->add_option("--detector", roc.detector, "power|lrt")->capture_default_str();
    c2->add_option("--thresholds", roc.grid, "Explicit thresholds in natural units")->delimiter(',');
    c2->add_option("--points", roc.points, "Default grid size")->capture_default_str();
    c2->add_option("--trials", roc.trials, "Trials per hypothesis")->capture_default_str();
    c2->add_flag("--genie", roc.genie, "Genie LRT");

    CheckArgs chk;
    auto* c3 = app.add_subcommand("check", "Likelihood-ratio order, monotonicity and ROC equivalence");
    add_common(c3, chk.c);
    c3->add_option("--points", chk.points, "Grid points")->capture_default_str();
    c3->add_option("--x-lo", chk.x_lo, "Smallest normalized power")->capture_default_str();
    c3->add_option("--x-hi", chk.x_hi, "Largest normalized power")->capture_default_str();
    c3->add_option("--trials", chk.trials, "Trials per hypothesis for ROC equivalence")->capture_default_str();

    BoundaryArgs bnd;
    auto* c4 = app.add_subcommand("boundary", "Mass of the decision-boundary neighbourhood (boundary.csv)");
    add_common(c4, bnd.c);
    c4->add_option("--eps", bnd.eps, "Target used for the default delta")->capture_default_str();
    c4->add_option("--delta", bnd.delta, "Neighbourhood half-width (default eps*zeta/(2M))");
    c4->add_option("--samples", bnd.samples, "Monte Carlo draws")->capture_default_str();
    c4->add_option("--spot-checks", bnd.spot_checks, "Draws cross-checked by root search")->capture_default_str();

    CapacityArgs cap;
    auto* c5 = app.add_subcommand("capacity", "Bob's outage capacity and covert bits (capacity.csv)");
    add_common(c5, cap.c);
    c5->add_option("--outage", cap.outage, "Outage probability")->capture_default_str();
    c5->add_option("--samples", cap.samples, "Fading draws")->capture_default_str();
    c5->add_option("--n-list", cap.n_list, "Slot lengths for the bit count")->delimiter(',')->capture_default_str();
    c5->add_option("--pf-list", cap.pf_list, "Alice powers (default: config P_f)")->delimiter(',');
    c5->add_option("--eps", cap.eps, "Use the construction recipe's P_f for this epsilon");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*c1)
            return cmd_covertness(cov);
        if (*c2)
            return cmd_roc(roc);
        if (*c3)
            return cmd_check(chk);
        if (*c4)
            return cmd_boundary(bnd);
        if (*c5)
            return cmd_capacity(cap);
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}
