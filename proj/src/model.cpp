#include "covertsim/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace covertsim {

using nlohmann::json;

namespace {

void require(bool ok, const std::string& message)
{
    if (!ok)
        throw ConfigError(message);
}

void check_epsilon(double epsilon)
{
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("epsilon must lie in (0,1)");
}

ChannelKind parse_channel(const std::string& s)
{
    if (s == "awgn")
        return ChannelKind::Awgn;
    if (s == "fading")
        return ChannelKind::BlockFading;
    throw ConfigError("unknown channel kind '" + s + "' (expected awgn|fading)");
}

JammerStrategy::Kind parse_jammer(const std::string& s)
{
    if (s == "uniform")
        return JammerStrategy::Kind::UniformPerSlot;
    if (s == "constant")
        return JammerStrategy::Kind::ConstantPower;
    throw ConfigError("unknown jammer kind '" + s + "' (expected uniform|constant)");
}

template <typename T>
void read_field(const json& j, const char* key, T& out)
{
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

} // namespace

double path_gain(double d, double alpha)
{
    if (!(d > 0.0) || !std::isfinite(d))
        throw std::domain_error("path_gain: distance must be positive");
    if (!(alpha >= 2.0))
        throw std::domain_error("path_gain: path-loss exponent must be >= 2");
    return std::pow(d, -alpha);
}

void Geometry::validate() const
{
    require(d_aw > 0 && d_ab > 0 && d_jw > 0 && d_jb > 0, "all distances must be positive");
    require(alpha >= 2.0, "alpha must be >= 2");
}

void SlotStructure::validate() const
{
    require(n >= 1, "n must be positive");
    require(M >= 1, "M must be positive");
    require(n % M == 0, "M must divide n");
    require(T >= 2 && T % 2 == 0, "T must be a positive even integer >= 2");
    require(p > 0.0 && p < 1.0, "p must lie in (0,1)");
}

ChannelKind ChannelSet::of(Link link) const
{
    switch (link) {
    case Link::AliceWillie: return aw;
    case Link::AliceBob: return ab;
    case Link::JammerWillie: return jw;
    case Link::JammerBob: return jb;
    }
    return ChannelKind::Awgn;
}

bool ChannelSet::any_fading() const
{
    return aw == ChannelKind::BlockFading || ab == ChannelKind::BlockFading ||
           jw == ChannelKind::BlockFading || jb == ChannelKind::BlockFading;
}

void Scenario::validate() const
{
    geometry.validate();
    slots.validate();
    require(jammer.power >= 0.0 && std::isfinite(jammer.power), "jammer power must be nonnegative");
    require(noise.sigma_w2 > 0.0 && noise.sigma_b2 > 0.0, "noise variances must be positive");
    require(P_f >= 0.0 && std::isfinite(P_f), "P_f must be nonnegative");
}

double Scenario::log_gamma() const
{
    return std::log1p(-slots.p) - std::log(slots.p);
}

std::string Scenario::to_json() const
{
    auto kind = [](ChannelKind k) { return to_string(k); };
    json j;
    j["d_aw"] = geometry.d_aw;
    j["d_ab"] = geometry.d_ab;
    j["d_jw"] = geometry.d_jw;
    j["d_jb"] = geometry.d_jb;
    j["alpha"] = geometry.alpha;
    j["n"] = slots.n;
    j["M"] = slots.M;
    j["T"] = slots.T;
    j["p"] = slots.p;
    j["sigma_w2"] = noise.sigma_w2;
    j["sigma_b2"] = noise.sigma_b2;
    j["jammer"] = {{"kind", jammer.kind == JammerStrategy::Kind::UniformPerSlot ? "uniform" : "constant"},
                   {"power", jammer.power}};
    j["channels"] = {{"aw", kind(channels.aw)},
                     {"ab", kind(channels.ab)},
                     {"jw", kind(channels.jw)},
                     {"jb", kind(channels.jb)}};
    j["P_f"] = P_f;
    return j.dump(2);
}

Scenario Scenario::from_json(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed scenario JSON: ") + e.what());
    }
    require(j.is_object(), "scenario JSON must be an object");

    Scenario s;
    read_field(j, "d_aw", s.geometry.d_aw);
    read_field(j, "d_ab", s.geometry.d_ab);
    read_field(j, "d_jw", s.geometry.d_jw);
    read_field(j, "d_jb", s.geometry.d_jb);
    read_field(j, "alpha", s.geometry.alpha);
    read_field(j, "n", s.slots.n);
    read_field(j, "M", s.slots.M);
    read_field(j, "T", s.slots.T);
    read_field(j, "p", s.slots.p);
    read_field(j, "sigma_w2", s.noise.sigma_w2);
    read_field(j, "sigma_b2", s.noise.sigma_b2);
    read_field(j, "P_f", s.P_f);

    if (j.contains("jammer")) {
        const auto& jam = j.at("jammer");
        require(jam.is_object(), "'jammer' must be an object");
        std::string kind = "uniform";
        read_field(jam, "kind", kind);
        s.jammer.kind = parse_jammer(kind);
        read_field(jam, "power", s.jammer.power);
    }
    if (j.contains("channels")) {
        const auto& ch = j.at("channels");
        require(ch.is_object(), "'channels' must be an object");
        std::string v;
        if (ch.contains("aw")) { read_field(ch, "aw", v); s.channels.aw = parse_channel(v); }
        if (ch.contains("ab")) { read_field(ch, "ab", v); s.channels.ab = parse_channel(v); }
        if (ch.contains("jw")) { read_field(ch, "jw", v); s.channels.jw = parse_channel(v); }
        if (ch.contains("jb")) { read_field(ch, "jb", v); s.channels.jb = parse_channel(v); }
    }
    s.validate();
    return s;
}

Scenario Scenario::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return from_json(buffer.str());
}

void Scenario::save(const std::string& path) const
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write config file: " + path);
    out << to_json() << '\n';
}

CovertParams select_covert_params_awgn(double epsilon, double zeta, double d_aw, double alpha)
{
    check_epsilon(epsilon);
    if (!(zeta > 0.0))
        throw std::domain_error("zeta must be positive");
    CovertParams cp;
    cp.epsilon = epsilon;
    cp.delta = zeta * epsilon / 8.0;
    cp.sigma_a2 = zeta * epsilon / 4.0;
    cp.P_f = cp.sigma_a2 / path_gain(d_aw, alpha);
    return cp;
}

CovertParams select_covert_params_fading(double epsilon, double zeta, double d_aw, double alpha)
{
    check_epsilon(epsilon);
    if (!(zeta > 0.0))
        throw std::domain_error("zeta must be positive");
    CovertParams cp;
    cp.epsilon = epsilon;
    cp.delta = zeta * epsilon / 16.0;
    cp.sigma_a2 = zeta * epsilon / 8.0;
    cp.P_f = cp.sigma_a2 / path_gain(d_aw, alpha);
    // exp(-c/zeta) = eps/4
    cp.c = zeta * std::log(4.0 / epsilon);
    return cp;
}

CovertParams select_covert_params_multiblock(double epsilon, std::int64_t M, double zeta, double d_aw,
                                             double alpha)
{
    check_epsilon(epsilon);
    if (!(zeta > 0.0))
        throw std::domain_error("zeta must be positive");
    if (M < 1)
        throw std::domain_error("M must be positive");
    const double m = static_cast<double>(M);
    CovertParams cp;
    cp.epsilon = epsilon;
    cp.delta = epsilon * zeta / (16.0 * m);
    cp.sigma_a2 = cp.delta / 2.0;
    cp.P_f = cp.sigma_a2 / path_gain(d_aw, alpha);
    // 1 - (1 - exp(-c/zeta))^M = eps/4
    const double per_block = -std::expm1(std::log1p(-epsilon / 4.0) / m);
    cp.c = -zeta * std::log(per_block);
    return cp;
}

std::string to_string(ChannelKind kind)
{
    return kind == ChannelKind::Awgn ? "awgn" : "fading";
}

std::string to_string(Link link)
{
    switch (link) {
    case Link::AliceWillie: return "aw";
    case Link::AliceBob: return "ab";
    case Link::JammerWillie: return "jw";
    case Link::JammerBob: return "jb";
    }
    return "?";
}

std::string to_string(Hypothesis h)
{
    return h == Hypothesis::H0 ? "H0" : "H1";
}

} // namespace covertsim
