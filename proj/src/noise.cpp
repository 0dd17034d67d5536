#include "kljn/noise.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace kljn {

NoiseScale::NoiseScale(double a) : a_(a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw std::domain_error("noise scale must be positive and finite");
    }
}

std::uint64_t mix64(std::uint64_t x) {
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::result_type CounterRng::operator()() {
    // Weyl sequence step keyed by the seed, then finalized.
    const std::uint64_t state = seed_ + (counter_ + 1) * 0x9e3779b97f4a7c15ULL;
    ++counter_;
    return mix64(state);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    return mix64(mix64(base) ^ (tag * 0xd1b54a32d192ed03ULL + 0x2545f4914f6cdd1dULL));
}

double johnson_variance(double resistance, NoiseScale scale) {
    if (!(resistance > 0.0)) {
        throw std::domain_error("resistance must be positive");
    }
    return scale.value() * resistance;
}

SampleStream generate_noise(double resistance, NoiseScale scale, std::size_t n,
                            std::uint64_t seed, double dt) {
    if (n == 0) {
        throw std::domain_error("sample count must be at least 1");
    }
    if (!(dt > 0.0)) {
        throw std::domain_error("sample interval must be positive");
    }
    const double sigma = std::sqrt(johnson_variance(resistance, scale));

    SampleStream stream;
    stream.dt = dt;
    stream.rng_seed = seed;
    stream.values.resize(n);

    CounterRng rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (auto& v : stream.values) {
        v = gauss(rng);
    }
    return stream;
}

double mean_square(std::span<const double> values) {
    if (values.empty()) {
        throw std::domain_error("mean_square of empty stream");
    }
    double acc = 0.0;
    for (double v : values) {
        acc += v * v;
    }
    return acc / static_cast<double>(values.size());
}

double mean_cross(std::span<const double> u, std::span<const double> i) {
    if (u.empty() || u.size() != i.size()) {
        throw std::domain_error("mean_cross needs equal-length, non-empty streams");
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        acc += u[k] * i[k];
    }
    return acc / static_cast<double>(u.size());
}

double mean(std::span<const double> values) {
    if (values.empty()) {
        throw std::domain_error("mean of empty stream");
    }
    double acc = 0.0;
    for (double v : values) {
        acc += v;
    }
    return acc / static_cast<double>(values.size());
}

}  // namespace kljn
