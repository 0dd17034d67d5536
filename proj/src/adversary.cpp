#include "kljn/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace kljn {

namespace {

enum : std::uint64_t {
    kTagEveAliceSide = 101,
    kTagEveBobSide = 102,
    kTagEveAliceNoise = 103,
    kTagEveBobNoise = 104,
    kTagInjection = 105,
    kTagEveCoin = 106,
    kTagMixedBit = 107,
};

Choice coin(std::uint64_t seed) { return (mix64(seed) & 1U) ? Choice::H : Choice::L; }

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

// Log-likelihood of n zero-mean bivariate Gaussian (u, i) samples given their
// second moments, under covariance [[vu, c], [c, vi]].
double gaussian_loglik(double n, double suu, double sii, double sui, double vu, double vi,
                       double c) {
    const double det = vu * vi - c * c;
    const double quad = (vi * suu - 2.0 * c * sui + vu * sii) / det;
    return -0.5 * n * std::log(det) - 0.5 * n * quad;
}

// Covariance of (u_wire, i_wire) when Alice holds r_a and Bob r_b.
struct WireCovariance {
    double vu, vi, c;
};

WireCovariance wire_covariance(double a, double r_a, double r_b) {
    const double s2 = (r_a + r_b) * (r_a + r_b);
    const double va = a * r_a;
    const double vb = a * r_b;
    return {
        .vu = (r_b * r_b * va + r_a * r_a * vb) / s2,
        .vi = (va + vb) / s2,
        .c = (r_b * va - r_a * vb) / s2,
    };
}

}  // namespace

void validate(const AttackKind& attack) {
    if (const auto* inj = std::get_if<CurrentInject>(&attack)) {
        if (!(inj->amplitude > 0.0) || !std::isfinite(inj->amplitude)) {
            throw std::domain_error("injection amplitude must be positive");
        }
    }
}

std::string_view attack_name(const AttackKind& attack) {
    return std::visit(overloaded{
                          [](const PassiveListen&) { return std::string_view("passive"); },
                          [](const MitmSplit&) { return std::string_view("mitm"); },
                          [](const CurrentInject&) { return std::string_view("inject"); },
                      },
                      attack);
}

EveVerdict eve_passive_guess(const SampleStream& u_wire, const SampleStream& i_wire,
                             const LinkConfig& config, std::uint64_t coin_seed) {
    const auto n = static_cast<double>(u_wire.size());
    const double suu = mean_square(u_wire);
    const double sii = mean_square(i_wire);
    const double sui = mean_cross(u_wire, i_wire);

    const double a = config.scale.value();
    const WireCovariance lh = wire_covariance(a, config.r_low, config.r_high);
    const WireCovariance hl = wire_covariance(a, config.r_high, config.r_low);
    const double ll_lh = gaussian_loglik(n, suu, sii, sui, lh.vu, lh.vi, lh.c);
    const double ll_hl = gaussian_loglik(n, suu, sii, sui, hl.vu, hl.vi, hl.c);
    const double diff = ll_hl - ll_lh;

    // Rounding noise in the two evaluations is not evidence.
    const double resolution = 1e-9 * (std::abs(ll_lh) + std::abs(ll_hl) + 1.0);
    if (std::abs(diff) <= resolution) {
        return EveVerdict{static_cast<std::uint8_t>(mix64(coin_seed) & 1U), 0.5};
    }
    const double posterior = 1.0 / (1.0 + std::exp(-std::abs(diff)));
    return EveVerdict{static_cast<std::uint8_t>(diff > 0.0 ? 1 : 0), posterior};
}

EveVerdict eve_passive_guess(const SampleStream& u_wire, const SampleStream& i_wire,
                             const LinkConfig& config) {
    return eve_passive_guess(u_wire, i_wire, config, derive_seed(u_wire.rng_seed, kTagEveCoin));
}

BepWaveforms apply_attack(const AttackKind& attack, const Link& link, Choice alice, Choice bob,
                          std::uint64_t seed) {
    validate(attack);
    const BepDraws draws = bep_draws(seed);
    BepWaveforms w = link.waveforms(alice, bob, draws);
    const LinkConfig& cfg = link.config();
    const double r_a = cfg.resistance(alice);
    const double r_b = cfg.resistance(bob);

    std::visit(
        overloaded{
            [](const PassiveListen&) {},
            [&](const MitmSplit&) {
                const Choice eve_a = coin(derive_seed(seed, kTagEveAliceSide));
                const Choice eve_b = coin(derive_seed(seed, kTagEveBobSide));
                const double r_ea = cfg.resistance(eve_a);
                const double r_eb = cfg.resistance(eve_b);
                const std::size_t n = cfg.samples_per_bep;
                const SampleStream u_ea = generate_noise(
                    r_ea, cfg.scale, n, derive_seed(seed, kTagEveAliceNoise), w.u_a.dt);
                const SampleStream u_eb = generate_noise(
                    r_eb, cfg.scale, n, derive_seed(seed, kTagEveBobNoise), w.u_a.dt);
                w.alice_end = wire_waveforms(w.u_a, u_ea, r_a, r_ea);
                w.bob_end = wire_waveforms(u_eb, w.u_b, r_eb, r_b);
            },
            [&](const CurrentInject& inj) {
                const double sum = r_a + r_b;
                const double parallel = r_a * r_b / sum;
                CounterRng rng(derive_seed(seed, kTagInjection));
                std::normal_distribution<double> gauss(0.0, inj.amplitude);
                for (std::size_t k = 0; k < w.alice_end.u.size(); ++k) {
                    const double injected =
                        inj.waveform == InjectWaveform::constant ? inj.amplitude : gauss(rng);
                    const double u = w.alice_end.u.values[k] + injected * parallel;
                    const double i = w.alice_end.i.values[k];
                    w.alice_end.u.values[k] = u;
                    w.bob_end.u.values[k] = u;
                    // Injected current splits by the divider: part flows back
                    // into Alice, the rest on into Bob.
                    w.alice_end.i.values[k] = i - injected * r_b / sum;
                    w.bob_end.i.values[k] = i + injected * r_a / sum;
                }
            },
        },
        attack);
    return w;
}

void validate(const DetectionConfig& det) {
    if (!(det.reveal_fraction > 0.0 && det.reveal_fraction <= 1.0)) {
        throw std::invalid_argument("reveal_fraction must lie in (0, 1]");
    }
    if (!(det.mismatch_tolerance >= 0.0)) {
        throw std::invalid_argument("mismatch_tolerance must be non-negative");
    }
    if (!(det.mean_sigma > 0.0)) {
        throw std::invalid_argument("mean_sigma must be positive");
    }
}

std::vector<std::size_t> revealed_indices(std::size_t n, double reveal_fraction) {
    const auto k = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::ceil(reveal_fraction * static_cast<double>(n))));
    std::vector<std::size_t> idx;
    idx.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        idx.push_back(j * n / k);
    }
    return idx;
}

IntrusionChecks detect_intrusion(const PartyTranscript& alice, const PartyTranscript& bob,
                                 const DetectionConfig& det) {
    validate(det);
    IntrusionChecks checks;

    const std::size_t n = alice.seen.u.size();
    if (bob.seen.u.size() != n) {
        checks.sample_mismatch = true;
    } else {
        auto differs = [&](double x, double y) {
            const double scale = std::max(std::abs(x), std::abs(y));
            return std::abs(x - y) > det.mismatch_tolerance * scale;
        };
        for (std::size_t k : revealed_indices(n, det.reveal_fraction)) {
            if (differs(alice.seen.u.values[k], bob.seen.u.values[k]) ||
                differs(alice.seen.i.values[k], bob.seen.i.values[k])) {
                checks.sample_mismatch = true;
                break;
            }
        }
    }

    checks.level_inconsistent =
        !alice.reading.level_consistent || !bob.reading.level_consistent;

    auto offset = [&](const WireWaveforms& seen) {
        const std::size_t m = seen.u.size();
        if (m < 2) return false;
        const double mu = mean(seen.u.view());
        double ss = 0.0;
        for (double v : seen.u.values) ss += (v - mu) * (v - mu);
        const double se = std::sqrt(ss / static_cast<double>(m - 1) / static_cast<double>(m));
        return std::abs(mu) > det.mean_sigma * se;
    };
    checks.mean_offset = offset(alice.seen) || offset(bob.seen);
    return checks;
}

AttackedBep run_attacked_bep(const AttackKind& attack, const Link& link, const DetectionConfig& det,
                             std::uint64_t seed) {
    const BepDraws draws = bep_draws(seed);
    AttackedBep out;
    out.waves = apply_attack(attack, link, draws.alice, draws.bob, seed);
    out.record = link.assess(draws.alice, draws.bob, out.waves.alice_end, out.waves.bob_end);
    const PartyTranscript a{draws.alice, out.waves.alice_end, out.record.alice};
    const PartyTranscript b{draws.bob, out.waves.bob_end, out.record.bob};
    out.checks = detect_intrusion(a, b, det);
    return out;
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
    if (trials == 0) throw std::domain_error("wilson_interval needs at least one trial");
    const auto n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    return Interval{std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

AttackStats evaluate_attack(const AttackKind& attack, const LinkConfig& config,
                            const DetectionConfig& det, std::size_t trials, std::uint64_t seed) {
    validate(attack);
    const Link link(config);
    const bool passive = std::holds_alternative<PassiveListen>(attack);

    AttackStats stats;
    stats.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t s = derive_seed(seed, t);
        const AttackedBep bep = run_attacked_bep(attack, link, det, s);
        if (bep.checks.alarm()) ++stats.alarmed;
        const auto truth = bit_for(bep.record.true_state());
        if (truth) {
            ++stats.mixed;
            if (passive) {
                const EveVerdict v = eve_passive_guess(bep.waves.alice_end.u,
                                                       bep.waves.alice_end.i, config,
                                                       derive_seed(s, kTagEveCoin));
                if (v.guessed_bit == *truth) ++stats.eve_correct;
            }
        }
    }
    return stats;
}

AttackStats eve_mixed_batch(const Link& link, std::size_t trials, std::uint64_t seed) {
    AttackStats stats;
    stats.trials = trials;
    stats.mixed = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        const std::uint64_t s = derive_seed(seed, t);
        const bool lh = (mix64(derive_seed(s, kTagMixedBit)) & 1U) == 0;
        const Choice alice = lh ? Choice::L : Choice::H;
        const Choice bob = lh ? Choice::H : Choice::L;
        const BepWaveforms w = link.waveforms(alice, bob, bep_draws(s));
        const EveVerdict v = eve_passive_guess(w.alice_end.u, w.alice_end.i, link.config(),
                                               derive_seed(s, kTagEveCoin));
        if (v.guessed_bit == (lh ? 0 : 1)) ++stats.eve_correct;
    }
    return stats;
}

}  // namespace kljn
