#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace covertsim {

/// Identifies one slot of one Monte Carlo trial. `stream_set` separates
/// independent sample sets drawn under the same seed (hypotheses, search vs
/// held-out halves).
struct SlotKey {
    std::uint64_t seed = 0;
    std::uint64_t stream_set = 0;
    std::uint64_t trial = 0;
    std::int64_t slot = 0;
};

/// Physical random sources inside a slot; each gets its own substream.
enum class Stream : std::uint64_t {
    Codeword = 1,
    JammerSignal,
    FadeAliceWillie,
    FadeAliceBob,
    FadeJammerWillie,
    FadeJammerBob,
    NoiseWillie,
    NoiseBob,
    Auxiliary,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based seed derivation: a pure function of (key, stream), so results
/// do not depend on the order or thread in which trials are generated.
std::uint64_t derive_seed(const SlotKey& key, Stream stream);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    /// Circularly-symmetric complex Gaussian with E|x|^2 = variance.
    std::complex<double> complex_normal(double variance);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_;
    boost::random::uniform_01<double> uniform_;
};

inline Rng make_stream(const SlotKey& key, Stream stream)
{
    return Rng(derive_seed(key, stream));
}

} // namespace covertsim
