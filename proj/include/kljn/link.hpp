#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "kljn/noise.hpp"

namespace kljn {

enum class Choice : std::uint8_t { L, H };
enum class Party : std::uint8_t { Alice, Bob };

/// Resistor state of a bit exchange period; first letter is Alice's resistor.
enum class BepState : std::uint8_t { LL, LH, HL, HH };

constexpr BepState make_state(Choice alice, Choice bob) {
    if (alice == Choice::L) return bob == Choice::L ? BepState::LL : BepState::LH;
    return bob == Choice::L ? BepState::HL : BepState::HH;
}
constexpr bool is_mixed(BepState s) { return s == BepState::LH || s == BepState::HL; }
constexpr Choice alice_of(BepState s) {
    return (s == BepState::LL || s == BepState::LH) ? Choice::L : Choice::H;
}
constexpr Choice bob_of(BepState s) {
    return (s == BepState::LL || s == BepState::HL) ? Choice::L : Choice::H;
}

std::string_view to_string(BepState s);
char to_char(Choice c);

/// Public bit convention: LH -> 0, HL -> 1. Non-mixed states carry no bit.
std::optional<std::uint8_t> bit_for(BepState s);

struct LinkConfig {
    double r_low = 1e3;            // Ohm
    double r_high = 1e4;           // Ohm
    NoiseScale scale{};
    double length = 1000.0;        // m
    double wave_velocity = 2e8;    // m/s
    std::size_t samples_per_bep = 100;
    std::size_t parallel_wires = 1;
    double guard_fraction = 0.05;  // relative half-width of the discard band
    // Two-sided tail probability below which a measured level counts as
    // inconsistent with a state (alarm).
    double alarm_significance = 1e-9;

    double resistance(Choice c) const { return c == Choice::L ? r_low : r_high; }
};

/// Throws std::invalid_argument naming the first violated constraint.
void validate(const LinkConfig& config);

/// 10% of the half-wave standing-wave frequency c / (2 L).
double noise_bandwidth(double length, double wave_velocity);
/// Bit exchange period for 100 independent samples: 2000 L / c.
double bep_duration(double length, double wave_velocity);
/// Ideal time for a K-bit key at one bit per period: 2000 K L / c.
double key_time(std::size_t key_bits, double length, double wave_velocity);
/// Simulated period for the configured sample count: samples_per_bep / B.
double bep_period(const LinkConfig& config);

struct WireWaveforms {
    SampleStream u;  // wire voltage
    SampleStream i;  // wire current, positive from Alice toward Bob
};

/// Quasi-static Kirchhoff solution of the two-resistor loop.
WireWaveforms wire_waveforms(const SampleStream& u_a, const SampleStream& u_b, double r_a,
                             double r_b);

struct ExpectedLevels {
    double u2_ll, u2_mixed, u2_hh;
    double i2_ll, i2_mixed, i2_hh;
};

ExpectedLevels expected_levels(const LinkConfig& config);

struct Decision {
    BepState state;
    bool confident;
};

/// Names the full state from the wire mean-square voltage and the party's own
/// resistor. Each party only weighs the two states its own choice allows: own L
/// is split at sqrt(u2_ll * u2_mixed), own H at sqrt(u2_mixed * u2_hh).
Decision decide_state(double measured_u2, Choice own, const LinkConfig& config,
                      Party party = Party::Alice);

/// What one party measures and concludes during a period.
struct PartyReading {
    double measured_u2 = 0.0;  // V^2
    double measured_i2 = 0.0;  // A^2
    double measured_ui = 0.0;  // V*A
    double mean_u = 0.0;       // V
    BepState decided_state = BepState::LL;
    bool confident = false;
    bool level_consistent = true;
    std::optional<std::uint8_t> bit;  // set when decided mixed and confident
};

struct BepRecord {
    Choice alice_choice = Choice::L;
    Choice bob_choice = Choice::L;
    PartyReading alice;
    PartyReading bob;
    std::optional<std::uint8_t> bit;  // only when both decided the same mixed state
    bool alarm = false;

    BepState true_state() const { return make_state(alice_choice, bob_choice); }
    /// Both parties publicly announce a usable period.
    bool kept() const { return !alarm && alice.bit.has_value() && bob.bit.has_value(); }
    bool disagreement() const { return kept() && *alice.bit != *bob.bit; }
};

/// Random draws of one period, all derived from the period seed.
struct BepDraws {
    Choice alice;
    Choice bob;
    std::uint64_t alice_noise_seed;
    std::uint64_t bob_noise_seed;
};

BepDraws bep_draws(std::uint64_t seed);

/// Per-party waveforms; identical at both ends on an unattacked ideal wire.
struct BepWaveforms {
    SampleStream u_a;  // Alice's generator
    SampleStream u_b;  // Bob's generator
    WireWaveforms alice_end;
    WireWaveforms bob_end;
};

/// A KLJN link with its derived thresholds cached.
class Link {
public:
    explicit Link(LinkConfig config);

    const LinkConfig& config() const { return config_; }
    const ExpectedLevels& levels() const { return levels_; }

    Decision decide(double measured_u2, Choice own, Party party) const;
    bool level_consistent(double measured_u2, Choice own) const;

    BepWaveforms waveforms(Choice alice, Choice bob, const BepDraws& draws) const;
    PartyReading read(const WireWaveforms& seen, Choice own, Party party) const;
    BepRecord assess(Choice alice, Choice bob, const WireWaveforms& alice_end,
                     const WireWaveforms& bob_end) const;

    BepRecord run_bep(std::uint64_t seed) const;
    /// Same period with the resistor choices forced.
    BepRecord run_bep(Choice alice, Choice bob, std::uint64_t seed) const;

private:
    LinkConfig config_;
    ExpectedLevels levels_;
    double threshold_low_;   // splits LL from mixed
    double threshold_high_;  // splits mixed from HH
    double ratio_min_;       // chi-square acceptance band of measured/expected
    double ratio_max_;
};

BepRecord run_bep(const LinkConfig& config, std::uint64_t seed);

struct KeyExchangeResult {
    std::vector<std::uint8_t> key_bits;      // Alice's key
    std::vector<std::uint8_t> bob_key_bits;  // Bob's key; differs where bit errors occurred
    std::size_t beps_used = 0;
    std::size_t discarded = 0;
    std::size_t alarms = 0;
    std::size_t bit_errors = 0;
    double elapsed_time = 0.0;  // s, ceil(beps_used / P) periods
    double ideal_time = 0.0;    // s, key_time(K, L, c)
    bool aborted = false;
};

/// Period seed for BEP number `local_index` on wire `channel`.
std::uint64_t channel_bep_seed(std::uint64_t seed, std::size_t channel, std::size_t local_index);

/// Runs periods round-robin over the parallel wires until `key_length` bits are
/// kept. Stops early on the first alarm.
KeyExchangeResult exchange_key(const LinkConfig& config, std::size_t key_length,
                               std::uint64_t seed);

/// Periods spent per kept bit, measured over `beps` seeded periods (about 2).
double measure_discard_factor(const LinkConfig& config, std::size_t beps, std::uint64_t seed);

}  // namespace kljn
