#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace kljn {

/// Noise intensity in V^2/Ohm. Stands for the product 4 k T_eff B, so that a
/// resistor R produces a mean-square noise voltage of a * R.
class NoiseScale {
public:
    static constexpr double kDefault = 1e-6;

    constexpr NoiseScale() = default;
    explicit NoiseScale(double a);

    constexpr double value() const { return a_; }

    friend constexpr bool operator==(NoiseScale, NoiseScale) = default;

private:
    double a_ = kDefault;
};

/// Counter-addressable generator: the i-th output depends only on (seed, i).
/// Satisfies UniformRandomBitGenerator so it plugs into <random> distributions.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t counter = 0)
        : seed_(seed), counter_(counter) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()();

    constexpr std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t seed_;
    std::uint64_t counter_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Child seed for a sub-stream identified by `tag` under `base`. Used for the
/// whole derivation tree: run seed -> channel -> BEP index -> party.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag);

struct SampleStream {
    std::vector<double> values;
    double dt = 1.0;
    std::uint64_t rng_seed = 0;

    std::size_t size() const { return values.size(); }
    bool empty() const { return values.empty(); }
    std::span<const double> view() const { return values; }
};

/// Mean-square Johnson noise voltage of resistor `resistance` (Ohm): a * R.
double johnson_variance(double resistance, NoiseScale scale);

/// n i.i.d. zero-mean Gaussian samples with variance johnson_variance(R, scale).
SampleStream generate_noise(double resistance, NoiseScale scale, std::size_t n,
                            std::uint64_t seed, double dt = 1.0);

double mean_square(std::span<const double> values);
inline double mean_square(const SampleStream& s) { return mean_square(s.view()); }

double mean_cross(std::span<const double> u, std::span<const double> i);
inline double mean_cross(const SampleStream& u, const SampleStream& i) {
    return mean_cross(u.view(), i.view());
}

double mean(std::span<const double> values);

}  // namespace kljn
