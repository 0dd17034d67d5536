#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "kljn/link.hpp"

namespace kljn {

enum class ErrorCode {
    E_SYNTAX,
    E_UNKNOWN_RECORD,
    E_UNKNOWN_FIELD,
    E_MISSING_FIELD,
    E_BAD_VALUE,
    E_DUPLICATE_STATION,
    E_UNKNOWN_STATION,
    E_SELF_LINK,
    E_BAD_LENGTH,
    E_BAD_WIRES,
    E_CROSS_ISLAND,
    E_BAD_DEFAULTS,
    E_IO,
    E_PLAN,
};

std::string_view to_string(ErrorCode code);

/// Invalid network specification or unmet planning prerequisite. `line` is the
/// 1-based source line when the error comes from a parsed file, 0 otherwise.
class SpecError : public std::runtime_error {
public:
    SpecError(ErrorCode code, std::string message, std::size_t line = 0);

    ErrorCode code() const { return code_; }
    std::size_t line() const { return line_; }
    const std::string& detail() const { return detail_; }

private:
    ErrorCode code_;
    std::size_t line_;
    std::string detail_;
};

struct Station {
    std::string id;
    std::string island;
    bool has_kljn = false;
    bool has_qkd = false;
    std::size_t kljn_unit_budget = 0;

    friend bool operator==(const Station&, const Station&) = default;
};

enum class LinkKind { wire, wireless, satellite };

std::string_view to_string(LinkKind kind);
std::optional<LinkKind> parse_link_kind(std::string_view text);

struct NetworkLink {
    std::string a;
    std::string b;
    LinkKind kind = LinkKind::wire;
    double length = 0.0;             // m
    std::size_t parallel_wires = 1;  // wire links only
    bool qkd_equipped = false;       // satellite links only

    friend bool operator==(const NetworkLink&, const NetworkLink&) = default;
};

struct NetworkSpec {
    std::vector<Station> stations;
    std::vector<NetworkLink> links;
    LinkConfig kljn_defaults{};

    const Station* find_station(std::string_view id) const;
    std::optional<std::size_t> station_index(std::string_view id) const;
    /// First link of `kind` joining a and b in either direction.
    const NetworkLink* find_link(std::string_view a, std::string_view b, LinkKind kind) const;
};

bool operator==(const LinkConfig& x, const LinkConfig& y);
bool operator==(const NetworkSpec& x, const NetworkSpec& y);

/// Checks the NetworkSpec invariants; the first violation is thrown as SpecError.
void validate(const NetworkSpec& spec);

}  // namespace kljn
