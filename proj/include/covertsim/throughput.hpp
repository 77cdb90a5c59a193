#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "covertsim/model.hpp"
#include "covertsim/synth.hpp"

namespace covertsim {

struct SinrSample {
    double gamma = 0.0;
    double gain_ab = 1.0; // |h_ab|^2
    double gain_jb = 1.0; // |h_jb|^2
};

/// Bob's SINR for given fading power gains. The jammer is taken at its full
/// power (the per-slot maximum for the uniform strategy).
double bob_sinr(const Scenario& scenario, double gain_ab, double gain_jb);
/// SINR in block `block` of a fading draw.
double bob_sinr(const Scenario& scenario, const FadingDraw& fades, std::size_t block = 0);

/// Independent first-block SINR draws; AWGN links contribute unit gains.
std::vector<SinrSample> sample_sinr(const Scenario& scenario, std::int64_t samples, std::uint64_t seed,
                                    unsigned workers = 1);

/// Order statistic ceil(outage_prob * samples) (1-based) of log2(1 + SINR).
double outage_capacity(const Scenario& scenario, double outage_prob, std::int64_t samples, std::uint64_t seed,
                       unsigned workers = 1);
double outage_capacity(const std::vector<SinrSample>& sinr, double outage_prob);

/// floor(n * R).
std::int64_t covert_bits(std::int64_t n, double R);

struct CapacityRow {
    double P_f = 0.0;
    double P_j = 0.0;
    double outage_prob = 0.0;
    double R = 0.0;
    std::int64_t n = 0;
    std::int64_t bits = 0;
};

/// capacity.csv: P_f, P_j, outage_prob, R, n, bits.
std::string capacity_csv(const std::vector<CapacityRow>& rows);

} // namespace covertsim
