#include "kljn/network.hpp"

#include <set>

#include <fmt/format.h>

namespace kljn {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::E_SYNTAX: return "E_SYNTAX";
        case ErrorCode::E_UNKNOWN_RECORD: return "E_UNKNOWN_RECORD";
        case ErrorCode::E_UNKNOWN_FIELD: return "E_UNKNOWN_FIELD";
        case ErrorCode::E_MISSING_FIELD: return "E_MISSING_FIELD";
        case ErrorCode::E_BAD_VALUE: return "E_BAD_VALUE";
        case ErrorCode::E_DUPLICATE_STATION: return "E_DUPLICATE_STATION";
        case ErrorCode::E_UNKNOWN_STATION: return "E_UNKNOWN_STATION";
        case ErrorCode::E_SELF_LINK: return "E_SELF_LINK";
        case ErrorCode::E_BAD_LENGTH: return "E_BAD_LENGTH";
        case ErrorCode::E_BAD_WIRES: return "E_BAD_WIRES";
        case ErrorCode::E_CROSS_ISLAND: return "E_CROSS_ISLAND";
        case ErrorCode::E_BAD_DEFAULTS: return "E_BAD_DEFAULTS";
        case ErrorCode::E_IO: return "E_IO";
        case ErrorCode::E_PLAN: return "E_PLAN";
    }
    return "E_UNKNOWN";
}

SpecError::SpecError(ErrorCode code, std::string message, std::size_t line)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}: {}", line, to_string(code), message)
                                  : fmt::format("{}: {}", to_string(code), message)),
      code_(code),
      line_(line),
      detail_(std::move(message)) {}

std::string_view to_string(LinkKind kind) {
    switch (kind) {
        case LinkKind::wire: return "wire";
        case LinkKind::wireless: return "wireless";
        case LinkKind::satellite: return "satellite";
    }
    return "?";
}

std::optional<LinkKind> parse_link_kind(std::string_view text) {
    if (text == "wire") return LinkKind::wire;
    if (text == "wireless") return LinkKind::wireless;
    if (text == "satellite") return LinkKind::satellite;
    return std::nullopt;
}

const Station* NetworkSpec::find_station(std::string_view id) const {
    for (const auto& s : stations) {
        if (s.id == id) return &s;
    }
    return nullptr;
}

std::optional<std::size_t> NetworkSpec::station_index(std::string_view id) const {
    for (std::size_t k = 0; k < stations.size(); ++k) {
        if (stations[k].id == id) return k;
    }
    return std::nullopt;
}

const NetworkLink* NetworkSpec::find_link(std::string_view a, std::string_view b,
                                          LinkKind kind) const {
    for (const auto& l : links) {
        if (l.kind != kind) continue;
        if ((l.a == a && l.b == b) || (l.a == b && l.b == a)) return &l;
    }
    return nullptr;
}

bool operator==(const LinkConfig& x, const LinkConfig& y) {
    return x.r_low == y.r_low && x.r_high == y.r_high && x.scale == y.scale &&
           x.length == y.length && x.wave_velocity == y.wave_velocity &&
           x.samples_per_bep == y.samples_per_bep && x.parallel_wires == y.parallel_wires &&
           x.guard_fraction == y.guard_fraction && x.alarm_significance == y.alarm_significance;
}

bool operator==(const NetworkSpec& x, const NetworkSpec& y) {
    return x.stations == y.stations && x.links == y.links && x.kljn_defaults == y.kljn_defaults;
}

void validate(const NetworkSpec& spec) {
    try {
        validate(spec.kljn_defaults);
    } catch (const std::invalid_argument& e) {
        throw SpecError(ErrorCode::E_BAD_DEFAULTS, e.what());
    }

    std::set<std::string_view> ids;
    for (const auto& s : spec.stations) {
        if (s.id.empty()) throw SpecError(ErrorCode::E_MISSING_FIELD, "station without id");
        if (!ids.insert(s.id).second) {
            throw SpecError(ErrorCode::E_DUPLICATE_STATION, fmt::format("station '{}' declared twice", s.id));
        }
    }

    for (const auto& l : spec.links) {
        const Station* a = spec.find_station(l.a);
        const Station* b = spec.find_station(l.b);
        if (!a || !b) {
            throw SpecError(ErrorCode::E_UNKNOWN_STATION,
                            fmt::format("link references undeclared station '{}'", a ? l.b : l.a));
        }
        if (l.a == l.b) {
            throw SpecError(ErrorCode::E_SELF_LINK, fmt::format("link joins '{}' to itself", l.a));
        }
        if (!(l.length > 0.0)) {
            throw SpecError(ErrorCode::E_BAD_LENGTH,
                            fmt::format("link {}-{} needs a positive length", l.a, l.b));
        }
        if (l.kind == LinkKind::wire && l.parallel_wires < 1) {
            throw SpecError(ErrorCode::E_BAD_WIRES,
                            fmt::format("wire link {}-{} needs at least one wire", l.a, l.b));
        }
        if (l.kind != LinkKind::satellite && a->island != b->island) {
            throw SpecError(ErrorCode::E_CROSS_ISLAND,
                            fmt::format("{} link {}-{} crosses islands '{}' and '{}'",
                                        to_string(l.kind), l.a, l.b, a->island, b->island));
        }
    }
}

}  // namespace kljn
