#include "kljn/planner.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

namespace kljn {

namespace {

double pair_time(const NetworkSpec& spec, std::size_t bits, double length, std::size_t wires) {
    return key_time(bits, length, spec.kljn_defaults.wave_velocity) / static_cast<double>(wires);
}

const NetworkLink& require_wire(const NetworkSpec& spec, const std::string& a,
                                const std::string& b, std::string_view mode) {
    const NetworkLink* link = spec.find_link(a, b, LinkKind::wire);
    if (!link) {
        throw SpecError(ErrorCode::E_PLAN,
                        fmt::format("{} plan needs a wire link {}-{}; add "
                                    "'link a={} b={} kind=wire length=<m>'",
                                    mode, a, b, a, b));
    }
    return *link;
}

void require_key_bits(std::size_t key_bits) {
    if (key_bits == 0) throw SpecError(ErrorCode::E_PLAN, "key length must be at least 1 bit");
}

void finish(DistributionPlan& plan) {
    plan.total_time = 0.0;
    for (const auto& r : plan.rounds) plan.total_time += r.duration;
}

}  // namespace

std::string_view to_string(PlanMode mode) {
    switch (mode) {
        case PlanMode::full_mesh: return "mesh";
        case PlanMode::star: return "star";
        case PlanMode::line: return "line";
    }
    return "?";
}

Hardware full_mesh_hardware(std::size_t n) {
    if (n < 2) throw std::domain_error("a network needs at least two stations");
    return Hardware{n * (n - 1), n * (n - 1) / 2};
}

std::vector<std::vector<std::pair<std::size_t, std::size_t>>> round_robin(std::size_t n) {
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> rounds;
    if (n < 2) return rounds;

    const bool odd = n % 2 == 1;
    const std::size_t m = odd ? n + 1 : n;  // slot m-1 is the bye when odd
    std::vector<std::size_t> ring(m);
    for (std::size_t k = 0; k < m; ++k) ring[k] = k;

    for (std::size_t r = 0; r + 1 < m; ++r) {
        auto& pairs = rounds.emplace_back();
        for (std::size_t k = 0; k < m / 2; ++k) {
            std::size_t x = ring[k];
            std::size_t y = ring[m - 1 - k];
            if (odd && (x == n || y == n)) continue;
            if (x > y) std::swap(x, y);
            pairs.emplace_back(x, y);
        }
        // Hold slot 0, rotate the rest one step.
        std::rotate(ring.begin() + 1, ring.end() - 1, ring.end());
    }
    return rounds;
}

DistributionPlan plan_full_mesh(const NetworkSpec& spec, std::size_t key_bits) {
    require_key_bits(key_bits);
    const std::size_t n = spec.stations.size();
    if (n < 2) throw SpecError(ErrorCode::E_PLAN, "mesh plan needs at least two stations");

    DistributionPlan plan;
    plan.mode = PlanMode::full_mesh;
    plan.per_pair_key_bits = key_bits;
    plan.hardware = full_mesh_hardware(n);

    Round round;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto& a = spec.stations[i].id;
            const auto& b = spec.stations[j].id;
            const NetworkLink& link = require_wire(spec, a, b, "mesh");
            Pairing p{a, b, link.length, link.parallel_wires, key_bits,
                      pair_time(spec, key_bits, link.length, link.parallel_wires), {a, b}};
            round.duration = std::max(round.duration, p.time);
            round.pairs.push_back(std::move(p));
        }
    }
    plan.rounds.push_back(std::move(round));
    finish(plan);
    return plan;
}

DistributionPlan plan_star(const NetworkSpec& spec, const std::string& center,
                           std::size_t key_bits) {
    require_key_bits(key_bits);
    if (!spec.find_station(center)) {
        throw SpecError(ErrorCode::E_PLAN, fmt::format("star center '{}' is not a station", center));
    }

    std::vector<const Station*> members;
    std::vector<const NetworkLink*> spokes;
    for (const auto& s : spec.stations) {
        if (s.id == center) continue;
        members.push_back(&s);
        spokes.push_back(&require_wire(spec, s.id, center, "star"));
    }
    const std::size_t n = members.size();
    if (n < 2) {
        throw SpecError(ErrorCode::E_PLAN, "star plan needs at least two stations besides the center");
    }

    DistributionPlan plan;
    plan.mode = PlanMode::star;
    plan.center = center;
    plan.per_pair_key_bits = key_bits;
    plan.hardware = Hardware{n, n};

    for (const auto& schedule : round_robin(n)) {
        Round round;
        std::vector<bool> busy(n, false);
        for (const auto& [x, y] : schedule) {
            busy[x] = busy[y] = true;
            // The exchange switches both spokes into one series loop.
            const double length = spokes[x]->length + spokes[y]->length;
            const std::size_t wires = std::min(spokes[x]->parallel_wires, spokes[y]->parallel_wires);
            Pairing p{members[x]->id, members[y]->id, length, wires, key_bits,
                      pair_time(spec, key_bits, length, wires),
                      {members[x]->id, center, members[y]->id}};
            round.duration = std::max(round.duration, p.time);
            round.pairs.push_back(std::move(p));
        }
        for (std::size_t k = 0; k < n; ++k) {
            if (!busy[k]) round.idle.push_back(members[k]->id);
        }
        plan.rounds.push_back(std::move(round));
    }
    finish(plan);
    return plan;
}

DistributionPlan plan_line(const NetworkSpec& spec, const std::vector<std::string>& order,
                           std::size_t key_bits) {
    require_key_bits(key_bits);
    const std::size_t n = order.size();
    if (n < 2) throw SpecError(ErrorCode::E_PLAN, "line plan needs at least two stations in order");
    std::set<std::string_view> seen;
    for (const auto& id : order) {
        if (!spec.find_station(id)) {
            throw SpecError(ErrorCode::E_PLAN, fmt::format("line order names unknown station '{}'", id));
        }
        if (!seen.insert(id).second) {
            throw SpecError(ErrorCode::E_PLAN, fmt::format("line order repeats station '{}'", id));
        }
    }

    std::vector<const NetworkLink*> hops;
    for (std::size_t h = 0; h + 1 < n; ++h) {
        const NetworkLink* link = spec.find_link(order[h], order[h + 1], LinkKind::wire);
        if (!link) {
            throw SpecError(ErrorCode::E_PLAN,
                            fmt::format("line chain broken between '{}' and '{}'; add a wire link",
                                        order[h], order[h + 1]));
        }
        hops.push_back(link);
    }

    // Hop h carries one key for every pair (i, j) with i <= h < j.
    std::vector<double> hop_time(n - 1);
    for (std::size_t h = 0; h + 1 < n; ++h) {
        const std::size_t pairs_over = (h + 1) * (n - 1 - h);
        hop_time[h] = pair_time(spec, pairs_over * key_bits, hops[h]->length, hops[h]->parallel_wires);
    }

    DistributionPlan plan;
    plan.mode = PlanMode::line;
    plan.order = order;
    plan.per_pair_key_bits = key_bits;
    plan.hardware = Hardware{2 * (n - 1), n - 1};

    Round round;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            Pairing p;
            p.a = order[i];
            p.b = order[j];
            p.parallel_wires = hops[i]->parallel_wires;
            p.key_bits = key_bits;
            for (std::size_t h = i; h < j; ++h) {
                p.length += hops[h]->length;
                p.time = std::max(p.time, hop_time[h]);
                p.parallel_wires = std::min(p.parallel_wires, hops[h]->parallel_wires);
            }
            p.path.assign(order.begin() + static_cast<std::ptrdiff_t>(i),
                          order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
            round.duration = std::max(round.duration, p.time);
            round.pairs.push_back(std::move(p));
        }
    }
    plan.rounds.push_back(std::move(round));
    finish(plan);
    return plan;
}

PlanSummary plan_time_summary(const DistributionPlan& plan, double discard_factor) {
    if (plan.rounds.empty()) throw std::invalid_argument("plan has no rounds");
    if (!(discard_factor >= 1.0)) throw std::invalid_argument("discard factor must be at least 1");

    PlanSummary summary;
    summary.hardware = plan.hardware;
    summary.discard_factor = discard_factor;
    for (std::size_t r = 0; r < plan.rounds.size(); ++r) {
        const Round& round = plan.rounds[r];
        PlanRow row;
        row.round = r + 1;
        for (const auto& p : round.pairs) {
            if (!row.pairs.empty()) row.pairs += ';';
            row.pairs += p.a + '-' + p.b;
        }
        for (const auto& id : round.idle) {
            if (!row.idle.empty()) row.idle += ';';
            row.idle += id;
        }
        row.ideal_time = round.duration;
        row.effective_time = round.duration * discard_factor;
        summary.ideal_total += row.ideal_time;
        summary.effective_total += row.effective_time;
        summary.rows.push_back(std::move(row));
    }
    return summary;
}

}  // namespace kljn
