#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kljn/adversary.hpp"
#include "kljn/link.hpp"
#include "kljn/security.hpp"

namespace kljn::cli {

enum ExitCode : int {
    kOk = 0,
    kAlarm = 1,
    kUsage = 2,
    kSpecError = 3,
};

struct LinkOptions {
    double r_low = 1e3;
    double r_high = 1e4;
    double length = 1000.0;
    double wave_velocity = 2e8;
    double noise_scale = NoiseScale::kDefault;
    std::size_t samples = 100;
    std::size_t wires = 1;
    double guard = 0.05;

    LinkConfig to_config() const;  // throws std::invalid_argument / std::domain_error
};

struct SimulateLinkOptions {
    LinkOptions link;
    std::size_t key_bits = 256;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

struct EavesdropOptions {
    LinkOptions link;
    std::string attack = "passive";  // passive | mitm | inject
    std::size_t trials = 10000;
    double amplitude = 1e-3;
    std::string waveform = "constant";  // constant | gaussian
    double reveal_fraction = 0.1;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

struct PlanOptions {
    std::string spec_path;
    std::string mode;  // mesh | star | line
    std::string center;
    std::vector<std::string> order;
    std::size_t key_bits = 256;
    std::size_t discard_beps = 20000;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

struct ReachOptions {
    std::string spec_path;
    TrustParams trust;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
};

int simulate_link(const SimulateLinkOptions& opt, std::ostream& out, std::ostream& err);
int eavesdrop(const EavesdropOptions& opt, std::ostream& out, std::ostream& err);
int plan(const PlanOptions& opt, std::ostream& out, std::ostream& err);
int reach(const ReachOptions& opt, std::ostream& out, std::ostream& err);

/// Full command line entry point: `kljn-cli <command> [flags]`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kljn::cli
