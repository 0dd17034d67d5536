#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kljn/network.hpp"

namespace kljn {

/// Ordered: none < conditional < unconditional.
enum class SecurityClass { none = 0, conditional = 1, unconditional = 2 };

std::string_view to_string(SecurityClass c);

/// Index of a link in NetworkSpec::links.
using EdgeId = std::size_t;

/// Links able to carry an information-theoretically secure key: wires between
/// two KLJN stations, and QKD satellites between two QKD ground stations.
std::vector<EdgeId> unconditional_edges(const NetworkSpec& spec);

struct TrustParams {
    double kappa = 2.0;  // half-saturation count
    double beta = 0.5;   // weight of a secure satellite edge relative to a KLJN wire
};

struct TrustEntry {
    std::size_t kljn_edges = 0;
    std::size_t secure_wireless_edges = 0;
    double score = 0.0;
};

struct SecurityReport {
    // Keyed by (lower id, higher id); use SecurityReport::get for lookups.
    std::map<std::pair<std::string, std::string>, SecurityClass> pair_classes;
    std::vector<std::vector<std::string>> components;  // size >= 2, over unconditional edges
    std::map<std::string, TrustEntry> trust;

    SecurityClass get(const std::string& a, const std::string& b) const;
};

/// Pair classes and unconditional components. Trust entries are filled too.
SecurityReport classify_pairs(const NetworkSpec& spec, const TrustParams& params = {});

/// Path of unconditional edges joining a and b (station ids, both ends
/// included), or empty when none exists.
std::vector<std::string> unconditional_path(const NetworkSpec& spec, const std::string& a,
                                            const std::string& b);

/// C / (C + kappa) with C = kljn wires + beta * secure satellite edges.
double trust_score(const NetworkSpec& spec, const std::string& station,
                   const TrustParams& params = {});

double trust_value(double kljn_edges, double secure_wireless_edges, const TrustParams& params);

}  // namespace kljn
