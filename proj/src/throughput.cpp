#include "covertsim/throughput.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "covertsim/parallel.hpp"
#include "covertsim/report.hpp"

namespace covertsim {

double bob_sinr(const Scenario& s, double gain_ab, double gain_jb)
{
    if (!(gain_ab >= 0.0) || !(gain_jb >= 0.0))
        throw std::domain_error("bob_sinr: fading gains must be nonnegative");
    const double signal = gain_ab * s.P_f * path_gain(s.geometry.d_ab, s.geometry.alpha);
    const double interference = gain_jb * s.jammer.power * path_gain(s.geometry.d_jb, s.geometry.alpha);
    return signal / (interference + s.noise.sigma_b2);
}

double bob_sinr(const Scenario& s, const FadingDraw& fades, std::size_t block)
{
    return bob_sinr(s, std::norm(fades.h_ab.at(block)), std::norm(fades.h_jb.at(block)));
}

std::vector<SinrSample> sample_sinr(const Scenario& scenario, std::int64_t samples, std::uint64_t seed,
                                    unsigned workers)
{
    scenario.validate();
    if (samples < 1)
        throw ConfigError("sample_sinr: samples must be >= 1");
    std::vector<SinrSample> out(static_cast<std::size_t>(samples));
    parallel_for(samples, workers, [&](std::int64_t i) {
        const FadingDraw f = draw_fading(scenario, SlotKey{seed, 6, static_cast<std::uint64_t>(i), 0});
        SinrSample& s = out[static_cast<std::size_t>(i)];
        s.gain_ab = std::norm(f.h_ab[0]);
        s.gain_jb = std::norm(f.h_jb[0]);
        s.gamma = bob_sinr(scenario, s.gain_ab, s.gain_jb);
    });
    return out;
}

double outage_capacity(const std::vector<SinrSample>& sinr, double outage_prob)
{
    if (!(outage_prob > 0.0 && outage_prob < 1.0))
        throw ConfigError("outage probability must lie in (0,1)");
    if (sinr.empty())
        throw ConfigError("outage_capacity: no samples");
    std::vector<double> rates(sinr.size());
    for (std::size_t i = 0; i < sinr.size(); ++i)
        rates[i] = std::log2(1.0 + sinr[i].gamma);
    const auto k = static_cast<std::size_t>(std::ceil(outage_prob * static_cast<double>(rates.size())));
    const std::size_t idx = std::clamp<std::size_t>(k, 1, rates.size()) - 1;
    std::nth_element(rates.begin(), rates.begin() + static_cast<std::ptrdiff_t>(idx), rates.end());
    return rates[idx];
}

double outage_capacity(const Scenario& scenario, double outage_prob, std::int64_t samples, std::uint64_t seed,
                       unsigned workers)
{
    if (!(outage_prob > 0.0 && outage_prob < 1.0))
        throw ConfigError("outage probability must lie in (0,1)");
    return outage_capacity(sample_sinr(scenario, samples, seed, workers), outage_prob);
}

std::int64_t covert_bits(std::int64_t n, double R)
{
    if (n < 1 || !(R >= 0.0) || !std::isfinite(R))
        throw std::domain_error("covert_bits: requires n >= 1 and finite R >= 0");
    return static_cast<std::int64_t>(std::floor(static_cast<double>(n) * R));
}

std::string capacity_csv(const std::vector<CapacityRow>& rows)
{
    CsvTable t({"P_f", "P_j", "outage_prob", "R", "n", "bits"});
    for (const auto& r : rows)
        t.row({format_double(r.P_f), format_double(r.P_j), format_double(r.outage_prob), format_double(r.R),
               std::to_string(r.n), std::to_string(r.bits)});
    return t.str();
}

} // namespace covertsim
