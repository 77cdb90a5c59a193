#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "covertsim/model.hpp"
#include "covertsim/rng.hpp"

namespace covertsim {

using cplx = std::complex<double>;

enum class Receiver { Willie, Bob };

/// Per-block channel state of one slot. AWGN links are stored as unit gains so
/// every link has M coefficients.
struct FadingDraw {
    std::vector<cplx> h_aw, h_ab, h_jw, h_jb;
};

/// Hidden state that generated an observation. Kept for oracle checks and the
/// genie detector configuration; ordinary detectors never read it.
struct Latents {
    double jammer_power = 0.0; // P_t
    FadingDraw fading;
    std::vector<double> jam_power_rx;   // per block, at this receiver
    std::vector<double> alice_power_rx; // per block, at this receiver (0 when Alice silent)
};

struct Observation {
    Receiver receiver = Receiver::Willie;
    std::int64_t slot = 0;
    Hypothesis hypothesis = Hypothesis::H0;
    std::vector<cplx> samples;
    Latents latents;
};

struct JammerSlot {
    double P_t = 0.0;
    std::vector<cplx> samples;
};

std::vector<cplx> generate_codeword(std::int64_t n, double P_f, Rng& rng);
JammerSlot generate_jammer_slot(const JammerStrategy& strategy, std::int64_t n, Rng& rng);
std::vector<cplx> sample_fading(std::int64_t M, Rng& rng);

/// Draws the full channel state of a slot from its per-link substreams.
FadingDraw draw_fading(const Scenario& scenario, const SlotKey& key);

/// Willie's received samples in slot `key.slot`. Alice's term is present iff
/// hypothesis is H1 and the slot is 0.
Observation synthesize_willie_slot(const Scenario& scenario, Hypothesis hypothesis, const SlotKey& key);
Observation synthesize_bob_slot(const Scenario& scenario, Hypothesis hypothesis, const SlotKey& key);

/// CSV rows `trial,slot,i,re,im` (no header).
void write_observation_rows(std::ostream& out, std::uint64_t trial, const Observation& obs);
std::string observation_csv_header();
/// JSON sidecar describing the latents of one observation.
std::string latents_json(std::uint64_t trial, const Observation& obs);

} // namespace covertsim
