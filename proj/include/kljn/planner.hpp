#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "kljn/network.hpp"

namespace kljn {

struct Hardware {
    std::size_t kljn_units = 0;  // M
    std::size_t wires = 0;       // W

    friend bool operator==(const Hardware&, const Hardware&) = default;
};

/// Every station wired to every other: M = N(N-1), W = N(N-1)/2.
Hardware full_mesh_hardware(std::size_t n);

/// One station pair served in a round.
struct Pairing {
    std::string a;
    std::string b;
    double length = 0.0;             // m, loop length of the KLJN exchange
    std::size_t parallel_wires = 1;
    std::size_t key_bits = 0;        // bits moved over the loop for this pair
    double time = 0.0;               // s, ideal key_time / parallel wires
    std::vector<std::string> path;   // station path; two entries when direct
};

struct Round {
    std::vector<Pairing> pairs;
    std::vector<std::string> idle;  // stations sitting out (star bye)
    double duration = 0.0;          // s
};

enum class PlanMode { full_mesh, star, line };

std::string_view to_string(PlanMode mode);

struct DistributionPlan {
    PlanMode mode = PlanMode::full_mesh;
    std::string center;               // star only
    std::vector<std::string> order;   // line only
    std::vector<Round> rounds;
    Hardware hardware;
    double total_time = 0.0;          // s, sum of round durations
    std::size_t per_pair_key_bits = 0;
};

/// All pairs at once over dedicated wires; needs a wire link for every pair.
DistributionPlan plan_full_mesh(const NetworkSpec& spec, std::size_t key_bits);

/// Round-robin pairing through a passive switching exchange at `center`.
DistributionPlan plan_star(const NetworkSpec& spec, const std::string& center,
                           std::size_t key_bits);

/// Chain along `order`; far pairs get keys relayed hop by hop.
DistributionPlan plan_line(const NetworkSpec& spec, const std::vector<std::string>& order,
                           std::size_t key_bits);

/// Circle-method round-robin over `n` participants (indices). Even n gives n-1
/// rounds of n/2 pairs; odd n gives n rounds with one participant idle.
std::vector<std::vector<std::pair<std::size_t, std::size_t>>> round_robin(std::size_t n);

struct PlanRow {
    std::size_t round = 0;
    std::string pairs;        // "A-B;C-D"
    std::string idle;
    double ideal_time = 0.0;  // s
    double effective_time = 0.0;
};

struct PlanSummary {
    std::vector<PlanRow> rows;
    Hardware hardware;
    double ideal_total = 0.0;
    double effective_total = 0.0;
    double discard_factor = 1.0;
};

/// Report rows for a plan. Effective times scale the ideal ones by
/// `discard_factor`, the measured periods spent per kept bit.
PlanSummary plan_time_summary(const DistributionPlan& plan, double discard_factor);

}  // namespace kljn
