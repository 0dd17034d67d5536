#pragma once

#include <cstdint>
#include <string_view>
#include <variant>

#include "kljn/link.hpp"

namespace kljn {

enum class InjectWaveform : std::uint8_t { constant, gaussian };

struct PassiveListen {};

/// Eve cuts the wire and runs her own KLJN endpoint toward each party.
struct MitmSplit {};

/// Current injected at the wire midpoint; for the gaussian waveform the
/// amplitude is the standard deviation.
struct CurrentInject {
    double amplitude = 1e-3;  // A
    InjectWaveform waveform = InjectWaveform::constant;
};

using AttackKind = std::variant<PassiveListen, MitmSplit, CurrentInject>;

void validate(const AttackKind& attack);
std::string_view attack_name(const AttackKind& attack);

struct EveVerdict {
    std::uint8_t guessed_bit = 0;
    double confidence = 0.5;
};

/// Eve's best passive guess for a mixed period from the wire voltage and
/// current. Compares the Gaussian likelihoods of LH and HL; ties are broken by
/// a coin drawn from `coin_seed`.
EveVerdict eve_passive_guess(const SampleStream& u_wire, const SampleStream& i_wire,
                             const LinkConfig& config, std::uint64_t coin_seed);
EveVerdict eve_passive_guess(const SampleStream& u_wire, const SampleStream& i_wire,
                             const LinkConfig& config);

/// Waveforms each party sees under `attack` for the period seeded by `seed`.
/// Passive listening returns exactly the unattacked waveforms.
BepWaveforms apply_attack(const AttackKind& attack, const Link& link, Choice alice, Choice bob,
                          std::uint64_t seed);

struct DetectionConfig {
    double reveal_fraction = 0.1;      // share of samples compared in public
    double mismatch_tolerance = 1e-9;  // relative
    double mean_sigma = 5.0;           // standard errors allowed for the wire-voltage mean
};

void validate(const DetectionConfig& det);

/// One party's view of a period as used by the detection protocol.
struct PartyTranscript {
    Choice own = Choice::L;
    WireWaveforms seen;
    PartyReading reading;
};

struct IntrusionChecks {
    bool sample_mismatch = false;
    bool level_inconsistent = false;
    bool mean_offset = false;

    bool alarm() const { return sample_mismatch || level_inconsistent || mean_offset; }
};

/// Sample indices disclosed for the public comparison, evenly spread.
std::vector<std::size_t> revealed_indices(std::size_t n, double reveal_fraction);

IntrusionChecks detect_intrusion(const PartyTranscript& alice, const PartyTranscript& bob,
                                 const DetectionConfig& det);

/// Runs one attacked period end to end: waveforms, readings, detection.
struct AttackedBep {
    BepRecord record;
    IntrusionChecks checks;
    BepWaveforms waves;
};

AttackedBep run_attacked_bep(const AttackKind& attack, const Link& link, const DetectionConfig& det,
                             std::uint64_t seed);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for a binomial proportion at normal quantile z.
Interval wilson_interval(std::size_t successes, std::size_t trials, double z);

struct AttackStats {
    std::size_t trials = 0;
    std::size_t mixed = 0;        // periods in a mixed state
    std::size_t eve_correct = 0;  // Eve's correct guesses on mixed periods (passive only)
    std::size_t alarmed = 0;      // periods where detection fired
};

/// Monte Carlo over `trials` seeded periods with fair resistor choices.
AttackStats evaluate_attack(const AttackKind& attack, const LinkConfig& config,
                            const DetectionConfig& det, std::size_t trials, std::uint64_t seed);

/// Eve's passive score over `trials` periods forced into a mixed state with a
/// fair choice between LH and HL.
AttackStats eve_mixed_batch(const Link& link, std::size_t trials, std::uint64_t seed);

}  // namespace kljn
