#include "kljn/link.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

namespace kljn {

namespace {

// Sub-stream tags under a period seed.
enum : std::uint64_t {
    kTagAliceChoice = 1,
    kTagBobChoice = 2,
    kTagAliceNoise = 3,
    kTagBobNoise = 4,
};

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::domain_error(std::string(what) + " must be positive");
    }
}

Choice coin(std::uint64_t seed) { return (mix64(seed) & 1U) ? Choice::H : Choice::L; }

}  // namespace

std::string_view to_string(BepState s) {
    switch (s) {
        case BepState::LL: return "LL";
        case BepState::LH: return "LH";
        case BepState::HL: return "HL";
        case BepState::HH: return "HH";
    }
    return "??";
}

char to_char(Choice c) { return c == Choice::L ? 'L' : 'H'; }

std::optional<std::uint8_t> bit_for(BepState s) {
    if (s == BepState::LH) return 0;
    if (s == BepState::HL) return 1;
    return std::nullopt;
}

void validate(const LinkConfig& c) {
    if (!(c.r_low > 0.0)) throw std::invalid_argument("r_low must be positive");
    if (!(c.r_low < c.r_high)) throw std::invalid_argument("r_low must be below r_high");
    if (!(c.length > 0.0)) throw std::invalid_argument("length must be positive");
    if (!(c.wave_velocity > 0.0)) throw std::invalid_argument("wave_velocity must be positive");
    if (c.samples_per_bep < 2) throw std::invalid_argument("samples_per_bep must be at least 2");
    if (c.parallel_wires < 1) throw std::invalid_argument("parallel_wires must be at least 1");
    if (!(c.guard_fraction >= 0.0 && c.guard_fraction < 0.5)) {
        throw std::invalid_argument("guard_fraction must lie in [0, 0.5)");
    }
    if (!(c.alarm_significance > 0.0 && c.alarm_significance < 1.0)) {
        throw std::invalid_argument("alarm_significance must lie in (0, 1)");
    }
}

double noise_bandwidth(double length, double wave_velocity) {
    require_positive(length, "length");
    require_positive(wave_velocity, "wave velocity");
    return wave_velocity / (20.0 * length);
}

double bep_duration(double length, double wave_velocity) {
    require_positive(length, "length");
    require_positive(wave_velocity, "wave velocity");
    return 2000.0 * length / wave_velocity;
}

double key_time(std::size_t key_bits, double length, double wave_velocity) {
    if (key_bits == 0) throw std::domain_error("key length must be at least 1 bit");
    require_positive(length, "length");
    require_positive(wave_velocity, "wave velocity");
    return 2000.0 * static_cast<double>(key_bits) * length / wave_velocity;
}

double bep_period(const LinkConfig& config) {
    return static_cast<double>(config.samples_per_bep) /
           noise_bandwidth(config.length, config.wave_velocity);
}

WireWaveforms wire_waveforms(const SampleStream& u_a, const SampleStream& u_b, double r_a,
                             double r_b) {
    if (u_a.size() != u_b.size()) {
        throw std::domain_error("generator streams differ in length");
    }
    require_positive(r_a, "r_a");
    require_positive(r_b, "r_b");
    const double sum = r_a + r_b;

    WireWaveforms w;
    w.u.dt = w.i.dt = u_a.dt;
    w.u.rng_seed = w.i.rng_seed = u_a.rng_seed ^ u_b.rng_seed;
    w.u.values.resize(u_a.size());
    w.i.values.resize(u_a.size());
    for (std::size_t k = 0; k < u_a.size(); ++k) {
        w.u.values[k] = (u_a.values[k] * r_b + u_b.values[k] * r_a) / sum;
        w.i.values[k] = (u_a.values[k] - u_b.values[k]) / sum;
    }
    return w;
}

ExpectedLevels expected_levels(const LinkConfig& config) {
    validate(config);
    const double a = config.scale.value();
    const double rl = config.r_low;
    const double rh = config.r_high;
    return ExpectedLevels{
        .u2_ll = a * rl / 2.0,
        .u2_mixed = a * rl * rh / (rl + rh),
        .u2_hh = a * rh / 2.0,
        .i2_ll = a / (2.0 * rl),
        .i2_mixed = a / (rl + rh),
        .i2_hh = a / (2.0 * rh),
    };
}

Decision decide_state(double measured_u2, Choice own, const LinkConfig& config, Party party) {
    return Link(config).decide(measured_u2, own, party);
}

BepDraws bep_draws(std::uint64_t seed) {
    return BepDraws{
        .alice = coin(derive_seed(seed, kTagAliceChoice)),
        .bob = coin(derive_seed(seed, kTagBobChoice)),
        .alice_noise_seed = derive_seed(seed, kTagAliceNoise),
        .bob_noise_seed = derive_seed(seed, kTagBobNoise),
    };
}

Link::Link(LinkConfig config) : config_(config), levels_(expected_levels(config_)) {
    threshold_low_ = std::sqrt(levels_.u2_ll * levels_.u2_mixed);
    threshold_high_ = std::sqrt(levels_.u2_mixed * levels_.u2_hh);

    const auto n = static_cast<double>(config_.samples_per_bep);
    const boost::math::chi_squared_distribution<double> chi2(n);
    const double tail = config_.alarm_significance / 2.0;
    ratio_min_ = boost::math::quantile(chi2, tail) / n;
    ratio_max_ = boost::math::quantile(boost::math::complement(chi2, tail)) / n;
}

Decision Link::decide(double measured_u2, Choice own, Party party) const {
    const double threshold = own == Choice::L ? threshold_low_ : threshold_high_;
    const bool confident =
        std::abs(measured_u2 - threshold) >= config_.guard_fraction * threshold;

    // The other party's resistor as inferred from the level.
    Choice other;
    if (own == Choice::L) {
        other = measured_u2 < threshold ? Choice::L : Choice::H;
    } else {
        other = measured_u2 > threshold ? Choice::H : Choice::L;
    }
    const BepState state = party == Party::Alice ? make_state(own, other) : make_state(other, own);
    return Decision{state, confident};
}

bool Link::level_consistent(double measured_u2, Choice own) const {
    const double lower = own == Choice::L ? levels_.u2_ll : levels_.u2_mixed;
    const double upper = own == Choice::L ? levels_.u2_mixed : levels_.u2_hh;
    auto fits = [&](double level) {
        const double r = measured_u2 / level;
        return r >= ratio_min_ && r <= ratio_max_;
    };
    return fits(lower) || fits(upper);
}

BepWaveforms Link::waveforms(Choice alice, Choice bob, const BepDraws& draws) const {
    const std::size_t n = config_.samples_per_bep;
    const double dt = 1.0 / noise_bandwidth(config_.length, config_.wave_velocity);
    const double r_a = config_.resistance(alice);
    const double r_b = config_.resistance(bob);

    BepWaveforms w;
    w.u_a = generate_noise(r_a, config_.scale, n, draws.alice_noise_seed, dt);
    w.u_b = generate_noise(r_b, config_.scale, n, draws.bob_noise_seed, dt);
    w.alice_end = wire_waveforms(w.u_a, w.u_b, r_a, r_b);
    w.bob_end = w.alice_end;
    return w;
}

PartyReading Link::read(const WireWaveforms& seen, Choice own, Party party) const {
    PartyReading r;
    r.measured_u2 = mean_square(seen.u);
    r.measured_i2 = mean_square(seen.i);
    r.measured_ui = mean_cross(seen.u, seen.i);
    r.mean_u = mean(seen.u.view());
    const Decision d = decide(r.measured_u2, own, party);
    r.decided_state = d.state;
    r.confident = d.confident;
    r.level_consistent = level_consistent(r.measured_u2, own);
    if (r.confident) {
        r.bit = bit_for(r.decided_state);
    }
    return r;
}

BepRecord Link::assess(Choice alice, Choice bob, const WireWaveforms& alice_end,
                       const WireWaveforms& bob_end) const {
    BepRecord rec;
    rec.alice_choice = alice;
    rec.bob_choice = bob;
    rec.alice = read(alice_end, alice, Party::Alice);
    rec.bob = read(bob_end, bob, Party::Bob);
    rec.alarm = !rec.alice.level_consistent || !rec.bob.level_consistent;
    if (!rec.alarm && rec.alice.bit && rec.bob.bit &&
        rec.alice.decided_state == rec.bob.decided_state) {
        rec.bit = rec.alice.bit;
    }
    return rec;
}

BepRecord Link::run_bep(std::uint64_t seed) const {
    const BepDraws draws = bep_draws(seed);
    return run_bep(draws.alice, draws.bob, seed);
}

BepRecord Link::run_bep(Choice alice, Choice bob, std::uint64_t seed) const {
    const BepWaveforms w = waveforms(alice, bob, bep_draws(seed));
    return assess(alice, bob, w.alice_end, w.bob_end);
}

BepRecord run_bep(const LinkConfig& config, std::uint64_t seed) {
    return Link(config).run_bep(seed);
}

std::uint64_t channel_bep_seed(std::uint64_t seed, std::size_t channel, std::size_t local_index) {
    return derive_seed(derive_seed(seed, channel), local_index);
}

KeyExchangeResult exchange_key(const LinkConfig& config, std::size_t key_length,
                               std::uint64_t seed) {
    if (key_length == 0) throw std::domain_error("key length must be at least 1 bit");
    const Link link(config);
    const std::size_t wires = config.parallel_wires;

    KeyExchangeResult result;
    result.ideal_time = key_time(key_length, config.length, config.wave_velocity);
    result.key_bits.reserve(key_length);
    result.bob_key_bits.reserve(key_length);

    while (result.key_bits.size() < key_length) {
        const std::size_t j = result.beps_used++;
        const BepRecord rec = link.run_bep(channel_bep_seed(seed, j % wires, j / wires));
        if (rec.alarm) {
            ++result.alarms;
            result.aborted = true;
            break;
        }
        if (!rec.kept()) {
            ++result.discarded;
            continue;
        }
        result.key_bits.push_back(*rec.alice.bit);
        result.bob_key_bits.push_back(*rec.bob.bit);
        if (rec.disagreement()) ++result.bit_errors;
    }

    const std::size_t slots = (result.beps_used + wires - 1) / wires;
    result.elapsed_time = static_cast<double>(slots) * bep_period(config);
    return result;
}

double measure_discard_factor(const LinkConfig& config, std::size_t beps, std::uint64_t seed) {
    if (beps == 0) throw std::domain_error("need at least one period");
    const Link link(config);
    std::size_t kept = 0;
    for (std::size_t j = 0; j < beps; ++j) {
        if (link.run_bep(derive_seed(seed, j)).kept()) ++kept;
    }
    if (kept == 0) throw std::runtime_error("no period was kept");
    return static_cast<double>(beps) / static_cast<double>(kept);
}

}  // namespace kljn
