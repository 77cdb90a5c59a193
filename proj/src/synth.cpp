#include "covertsim/synth.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "covertsim/report.hpp"

namespace covertsim {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(const SlotKey& key, Stream stream)
{
    std::uint64_t h = splitmix64(key.seed);
    h = splitmix64(h ^ key.stream_set);
    h = splitmix64(h ^ key.trial);
    h = splitmix64(h ^ static_cast<std::uint64_t>(key.slot));
    return splitmix64(h ^ static_cast<std::uint64_t>(stream));
}

std::complex<double> Rng::complex_normal(double variance)
{
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
}

std::vector<cplx> generate_codeword(std::int64_t n, double P_f, Rng& rng)
{
    if (n < 1)
        throw std::domain_error("generate_codeword: n must be positive");
    if (!(P_f >= 0.0))
        throw std::domain_error("generate_codeword: P_f must be nonnegative");
    std::vector<cplx> f(static_cast<std::size_t>(n));
    if (P_f == 0.0)
        return f;
    for (auto& x : f)
        x = rng.complex_normal(P_f);
    return f;
}

JammerSlot generate_jammer_slot(const JammerStrategy& strategy, std::int64_t n, Rng& rng)
{
    if (n < 1)
        throw std::domain_error("generate_jammer_slot: n must be positive");
    JammerSlot js;
    js.P_t = strategy.kind == JammerStrategy::Kind::UniformPerSlot ? strategy.power * rng.uniform()
                                                                   : strategy.power;
    js.samples.assign(static_cast<std::size_t>(n), cplx{});
    if (js.P_t > 0.0)
        for (auto& g : js.samples)
            g = rng.complex_normal(js.P_t);
    return js;
}

std::vector<cplx> sample_fading(std::int64_t M, Rng& rng)
{
    if (M < 1)
        throw std::domain_error("sample_fading: M must be positive");
    std::vector<cplx> h(static_cast<std::size_t>(M));
    for (auto& x : h)
        x = rng.complex_normal(1.0);
    return h;
}

namespace {

std::vector<cplx> link_gains(const Scenario& s, Link link, const SlotKey& key, Stream stream)
{
    if (s.channels.of(link) == ChannelKind::Awgn)
        return std::vector<cplx>(static_cast<std::size_t>(s.slots.M), cplx{1.0, 0.0});
    Rng rng = make_stream(key, stream);
    return sample_fading(s.slots.M, rng);
}

void check_slot(const Scenario& s, std::int64_t slot)
{
    if (slot < -s.slots.T / 2 || slot > s.slots.T / 2 - 1)
        throw ConfigError("slot index outside [-T/2, T/2-1]");
}

Observation synthesize(const Scenario& s, Hypothesis hyp, const SlotKey& key, Receiver rx)
{
    s.validate();
    check_slot(s, key.slot);

    const std::int64_t n = s.slots.n;
    const std::int64_t M = s.slots.M;
    const std::int64_t block = s.slots.block_length();
    const bool willie = rx == Receiver::Willie;

    Observation obs;
    obs.receiver = rx;
    obs.slot = key.slot;
    obs.hypothesis = hyp;
    obs.latents.fading = draw_fading(s, key);

    const auto& h_alice = willie ? obs.latents.fading.h_aw : obs.latents.fading.h_ab;
    const auto& h_jam = willie ? obs.latents.fading.h_jw : obs.latents.fading.h_jb;
    const double d_alice = willie ? s.geometry.d_aw : s.geometry.d_ab;
    const double d_jam = willie ? s.geometry.d_jw : s.geometry.d_jb;
    const double g_alice = std::sqrt(path_gain(d_alice, s.geometry.alpha));
    const double g_jam = std::sqrt(path_gain(d_jam, s.geometry.alpha));
    const double noise_var = willie ? s.noise.sigma_w2 : s.noise.sigma_b2;

    // Same substream at both receivers: they hear one physical jammer signal.
    Rng jam_rng = make_stream(key, Stream::JammerSignal);
    const JammerSlot jam = generate_jammer_slot(s.jammer, n, jam_rng);
    obs.latents.jammer_power = jam.P_t;

    const bool alice_on = hyp == Hypothesis::H1 && key.slot == 0;
    std::vector<cplx> f;
    if (alice_on) {
        Rng code_rng = make_stream(key, Stream::Codeword);
        f = generate_codeword(n, s.P_f, code_rng);
    }

    Rng noise_rng = make_stream(key, willie ? Stream::NoiseWillie : Stream::NoiseBob);
    obs.samples.resize(static_cast<std::size_t>(n));
    obs.latents.jam_power_rx.resize(static_cast<std::size_t>(M));
    obs.latents.alice_power_rx.assign(static_cast<std::size_t>(M), 0.0);
    for (std::int64_t m = 0; m < M; ++m) {
        const auto um = static_cast<std::size_t>(m);
        const cplx a = h_alice[um] * g_alice;
        const cplx j = h_jam[um] * g_jam;
        obs.latents.jam_power_rx[um] = std::norm(j) * jam.P_t;
        if (alice_on)
            obs.latents.alice_power_rx[um] = std::norm(a) * s.P_f;
        for (std::int64_t i = m * block; i < (m + 1) * block; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            cplx z = j * jam.samples[ui] + noise_rng.complex_normal(noise_var);
            if (alice_on)
                z += a * f[ui];
            obs.samples[ui] = z;
        }
    }
    return obs;
}

} // namespace

FadingDraw draw_fading(const Scenario& s, const SlotKey& key)
{
    FadingDraw d;
    d.h_aw = link_gains(s, Link::AliceWillie, key, Stream::FadeAliceWillie);
    d.h_ab = link_gains(s, Link::AliceBob, key, Stream::FadeAliceBob);
    d.h_jw = link_gains(s, Link::JammerWillie, key, Stream::FadeJammerWillie);
    d.h_jb = link_gains(s, Link::JammerBob, key, Stream::FadeJammerBob);
    return d;
}

Observation synthesize_willie_slot(const Scenario& scenario, Hypothesis hypothesis, const SlotKey& key)
{
    return synthesize(scenario, hypothesis, key, Receiver::Willie);
}

Observation synthesize_bob_slot(const Scenario& scenario, Hypothesis hypothesis, const SlotKey& key)
{
    return synthesize(scenario, hypothesis, key, Receiver::Bob);
}

std::string observation_csv_header()
{
    return "trial,slot,i,re,im";
}

void write_observation_rows(std::ostream& out, std::uint64_t trial, const Observation& obs)
{
    for (std::size_t i = 0; i < obs.samples.size(); ++i) {
        out << trial << ',' << obs.slot << ',' << (i + 1) << ',' << format_double(obs.samples[i].real()) << ','
            << format_double(obs.samples[i].imag()) << '\n';
    }
}

std::string latents_json(std::uint64_t trial, const Observation& obs)
{
    auto pack = [](const std::vector<cplx>& v) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& x : v)
            arr.push_back({x.real(), x.imag()});
        return arr;
    };
    nlohmann::json j;
    j["trial"] = trial;
    j["slot"] = obs.slot;
    j["receiver"] = obs.receiver == Receiver::Willie ? "willie" : "bob";
    j["hypothesis"] = to_string(obs.hypothesis);
    j["jammer_power"] = obs.latents.jammer_power;
    j["h_aw"] = pack(obs.latents.fading.h_aw);
    j["h_ab"] = pack(obs.latents.fading.h_ab);
    j["h_jw"] = pack(obs.latents.fading.h_jw);
    j["h_jb"] = pack(obs.latents.fading.h_jb);
    j["jam_power_rx"] = obs.latents.jam_power_rx;
    j["alice_power_rx"] = obs.latents.alice_power_rx;
    return j.dump(2);
}

} // namespace covertsim
