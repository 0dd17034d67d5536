#include "kljn/security.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace kljn {

namespace {

using Adjacency = std::vector<std::vector<std::size_t>>;

Adjacency build_adjacency(const NetworkSpec& spec, const std::vector<EdgeId>& edges) {
    Adjacency adj(spec.stations.size());
    for (EdgeId e : edges) {
        const auto a = *spec.station_index(spec.links[e].a);
        const auto b = *spec.station_index(spec.links[e].b);
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

std::vector<EdgeId> all_edges(const NetworkSpec& spec) {
    std::vector<EdgeId> edges(spec.links.size());
    for (EdgeId e = 0; e < edges.size(); ++e) edges[e] = e;
    return edges;
}

// Component label per station; isolated stations get their own label.
std::vector<std::size_t> label_components(const Adjacency& adj) {
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(adj.size(), unset);
    std::size_t next = 0;
    for (std::size_t start = 0; start < adj.size(); ++start) {
        if (label[start] != unset) continue;
        std::vector<std::size_t> stack{start};
        label[start] = next;
        while (!stack.empty()) {
            const std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w : adj[v]) {
                if (label[w] == unset) {
                    label[w] = next;
                    stack.push_back(w);
                }
            }
        }
        ++next;
    }
    return label;
}

std::pair<std::string, std::string> key(const std::string& a, const std::string& b) {
    return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

std::string_view to_string(SecurityClass c) {
    switch (c) {
        case SecurityClass::none: return "none";
        case SecurityClass::conditional: return "conditional";
        case SecurityClass::unconditional: return "unconditional";
    }
    return "?";
}

std::vector<EdgeId> unconditional_edges(const NetworkSpec& spec) {
    std::vector<EdgeId> edges;
    for (EdgeId e = 0; e < spec.links.size(); ++e) {
        const NetworkLink& l = spec.links[e];
        const Station* a = spec.find_station(l.a);
        const Station* b = spec.find_station(l.b);
        if (!a || !b) continue;
        const bool kljn_wire = l.kind == LinkKind::wire && a->has_kljn && b->has_kljn;
        const bool qkd_sat =
            l.kind == LinkKind::satellite && l.qkd_equipped && a->has_qkd && b->has_qkd;
        if (kljn_wire || qkd_sat) edges.push_back(e);
    }
    return edges;
}

SecurityClass SecurityReport::get(const std::string& a, const std::string& b) const {
    const auto it = pair_classes.find(key(a, b));
    if (it == pair_classes.end()) {
        throw std::out_of_range(fmt::format("no pair {}-{} in report", a, b));
    }
    return it->second;
}

double trust_value(double kljn_edges, double secure_wireless_edges, const TrustParams& params) {
    if (!(params.kappa > 0.0) || !(params.beta >= 0.0)) {
        throw std::domain_error("trust needs kappa > 0 and beta >= 0");
    }
    const double c = kljn_edges + params.beta * secure_wireless_edges;
    return c / (c + params.kappa);
}

SecurityReport classify_pairs(const NetworkSpec& spec, const TrustParams& params) {
    const std::vector<EdgeId> secure = unconditional_edges(spec);
    const auto secure_label = label_components(build_adjacency(spec, secure));
    const auto any_label = label_components(build_adjacency(spec, all_edges(spec)));
    const std::size_t n = spec.stations.size();

    SecurityReport report;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            SecurityClass c = SecurityClass::none;
            if (secure_label[i] == secure_label[j]) {
                c = SecurityClass::unconditional;
            } else if (any_label[i] == any_label[j]) {
                c = SecurityClass::conditional;
            }
            report.pair_classes.emplace(key(spec.stations[i].id, spec.stations[j].id), c);
        }
    }

    std::map<std::size_t, std::vector<std::string>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[secure_label[i]].push_back(spec.stations[i].id);
    for (auto& [label, members] : groups) {
        if (members.size() >= 2) report.components.push_back(std::move(members));
    }

    for (const auto& s : spec.stations) report.trust[s.id] = TrustEntry{};
    for (EdgeId e : secure) {
        const NetworkLink& l = spec.links[e];
        for (const auto* id : {&l.a, &l.b}) {
            TrustEntry& t = report.trust[*id];
            if (l.kind == LinkKind::wire) {
                ++t.kljn_edges;
            } else {
                ++t.secure_wireless_edges;
            }
        }
    }
    for (auto& [id, t] : report.trust) {
        t.score = trust_value(static_cast<double>(t.kljn_edges),
                              static_cast<double>(t.secure_wireless_edges), params);
    }
    return report;
}

std::vector<std::string> unconditional_path(const NetworkSpec& spec, const std::string& a,
                                            const std::string& b) {
    const auto src = spec.station_index(a);
    const auto dst = spec.station_index(b);
    if (!src || !dst) return {};
    const Adjacency adj = build_adjacency(spec, unconditional_edges(spec));

    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(adj.size(), unset);
    std::vector<std::size_t> queue{*src};
    parent[*src] = *src;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::size_t v = queue[head];
        if (v == *dst) break;
        for (std::size_t w : adj[v]) {
            if (parent[w] == unset) {
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    if (parent[*dst] == unset) return {};

    std::vector<std::string> path;
    for (std::size_t v = *dst;; v = parent[v]) {
        path.push_back(spec.stations[v].id);
        if (v == *src) break;
    }
    std::reverse(path.begin(), path.end());
    return path;
}

double trust_score(const NetworkSpec& spec, const std::string& station, const TrustParams& params) {
    if (!spec.find_station(station)) {
        throw std::domain_error(fmt::format("unknown station '{}'", station));
    }
    std::size_t wires = 0;
    std::size_t satellites = 0;
    for (EdgeId e : unconditional_edges(spec)) {
        const NetworkLink& l = spec.links[e];
        if (l.a != station && l.b != station) continue;
        if (l.kind == LinkKind::wire) {
            ++wires;
        } else {
            ++satellites;
        }
    }
    return trust_value(static_cast<double>(wires), static_cast<double>(satellites), params);
}

}  // namespace kljn
