#include "kljn/netfile.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace kljn {

namespace {

using Fields = std::map<std::string, std::string, std::less<>>;

struct Record {
    std::size_t line = 0;
    std::string kind;
    Fields fields;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::optional<Record> tokenize(std::string_view text, std::size_t line) {
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
        text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) return std::nullopt;

    Record rec;
    rec.line = line;
    std::istringstream words{std::string(text)};
    words >> rec.kind;
    std::string token;
    while (words >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == token.size()) {
            throw SpecError(ErrorCode::E_SYNTAX,
                            fmt::format("expected key=value, got '{}'", token), line);
        }
        auto key = token.substr(0, eq);
        if (rec.fields.contains(key)) {
            throw SpecError(ErrorCode::E_SYNTAX, fmt::format("field '{}' repeated", key), line);
        }
        rec.fields.emplace(std::move(key), token.substr(eq + 1));
    }
    return rec;
}

class FieldReader {
public:
    FieldReader(const Record& rec, std::initializer_list<std::string_view> allowed) : rec_(rec) {
        for (const auto& [key, value] : rec.fields) {
            bool ok = false;
            for (auto a : allowed) ok = ok || a == key;
            if (!ok) {
                throw SpecError(ErrorCode::E_UNKNOWN_FIELD,
                                fmt::format("unknown field '{}' in {} record", key, rec.kind),
                                rec.line);
            }
        }
    }

    bool has(std::string_view key) const { return rec_.fields.find(key) != rec_.fields.end(); }

    const std::string& text(std::string_view key) const {
        const auto it = rec_.fields.find(key);
        if (it == rec_.fields.end()) {
            throw SpecError(ErrorCode::E_MISSING_FIELD,
                            fmt::format("{} record needs '{}'", rec_.kind, key), rec_.line);
        }
        return it->second;
    }

    double number(std::string_view key) const {
        const std::string& s = text(key);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw bad(key, s);
        }
        return v;
    }

    std::size_t count(std::string_view key) const {
        const std::string& s = text(key);
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw bad(key, s);
        }
        return v;
    }

    bool flag(std::string_view key) const {
        const std::string& s = text(key);
        if (s == "yes" || s == "true" || s == "1") return true;
        if (s == "no" || s == "false" || s == "0") return false;
        throw bad(key, s);
    }

    SpecError bad(std::string_view key, std::string_view value) const {
        return SpecError(ErrorCode::E_BAD_VALUE,
                         fmt::format("bad value '{}' for '{}'", value, key), rec_.line);
    }

    std::size_t line() const { return rec_.line; }

private:
    const Record& rec_;
};

LinkConfig read_defaults(const Record& rec) {
    const FieldReader f(rec, {"r_low", "r_high", "noise_scale", "wave_velocity", "length",
                              "samples_per_bep", "parallel_wires", "guard_fraction",
                              "alarm_significance"});
    LinkConfig c;
    if (f.has("r_low")) c.r_low = f.number("r_low");
    if (f.has("r_high")) c.r_high = f.number("r_high");
    if (f.has("noise_scale")) {
        try {
            c.scale = NoiseScale(f.number("noise_scale"));
        } catch (const std::domain_error& e) {
            throw SpecError(ErrorCode::E_BAD_DEFAULTS, e.what(), rec.line);
        }
    }
    if (f.has("wave_velocity")) c.wave_velocity = f.number("wave_velocity");
    if (f.has("length")) c.length = f.number("length");
    if (f.has("samples_per_bep")) c.samples_per_bep = f.count("samples_per_bep");
    if (f.has("parallel_wires")) c.parallel_wires = f.count("parallel_wires");
    if (f.has("guard_fraction")) c.guard_fraction = f.number("guard_fraction");
    if (f.has("alarm_significance")) c.alarm_significance = f.number("alarm_significance");
    try {
        validate(c);
    } catch (const std::invalid_argument& e) {
        throw SpecError(ErrorCode::E_BAD_DEFAULTS, e.what(), rec.line);
    }
    return c;
}

Station read_station(const Record& rec) {
    const FieldReader f(rec, {"id", "island", "kljn", "qkd", "budget"});
    Station s;
    s.id = f.text("id");
    s.island = f.text("island");
    if (f.has("kljn")) s.has_kljn = f.flag("kljn");
    if (f.has("qkd")) s.has_qkd = f.flag("qkd");
    if (f.has("budget")) s.kljn_unit_budget = f.count("budget");
    return s;
}

NetworkLink read_link(const Record& rec) {
    const FieldReader f(rec, {"a", "b", "kind", "length", "wires", "qkd"});
    NetworkLink l;
    l.a = f.text("a");
    l.b = f.text("b");
    const auto kind = parse_link_kind(f.text("kind"));
    if (!kind) throw f.bad("kind", f.text("kind"));
    l.kind = *kind;
    l.length = f.number("length");
    if (!(l.length > 0.0)) {
        throw SpecError(ErrorCode::E_BAD_LENGTH,
                        fmt::format("link {}-{} needs a positive length", l.a, l.b), rec.line);
    }
    if (f.has("wires")) {
        if (l.kind != LinkKind::wire) {
            throw SpecError(ErrorCode::E_BAD_VALUE, "'wires' applies to wire links only",
                            rec.line);
        }
        l.parallel_wires = f.count("wires");
        if (l.parallel_wires < 1) {
            throw SpecError(ErrorCode::E_BAD_WIRES, "wire link needs at least one wire",
                            rec.line);
        }
    }
    if (f.has("qkd")) {
        if (l.kind != LinkKind::satellite) {
            throw SpecError(ErrorCode::E_BAD_VALUE, "'qkd' applies to satellite links only",
                            rec.line);
        }
        l.qkd_equipped = f.flag("qkd");
    }
    return l;
}

}  // namespace

NetworkSpec parse_network_spec(std::istream& in) {
    NetworkSpec spec;
    std::vector<std::size_t> station_lines;
    std::vector<std::size_t> link_lines;
    bool seen_defaults = false;

    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto rec = tokenize(raw, line);
        if (!rec) continue;
        if (rec->kind == "defaults") {
            if (seen_defaults) {
                throw SpecError(ErrorCode::E_SYNTAX, "defaults given twice", line);
            }
            seen_defaults = true;
            spec.kljn_defaults = read_defaults(*rec);
        } else if (rec->kind == "station") {
            spec.stations.push_back(read_station(*rec));
            station_lines.push_back(line);
        } else if (rec->kind == "link") {
            spec.links.push_back(read_link(*rec));
            link_lines.push_back(line);
        } else {
            throw SpecError(ErrorCode::E_UNKNOWN_RECORD,
                            fmt::format("unknown record type '{}'", rec->kind), line);
        }
    }

    // Re-run the model validation one record at a time so errors carry the
    // offending line.
    NetworkSpec partial;
    partial.kljn_defaults = spec.kljn_defaults;
    try {
        for (std::size_t k = 0; k < spec.stations.size(); ++k) {
            line = station_lines[k];
            partial.stations.push_back(spec.stations[k]);
            validate(partial);
        }
        partial.stations = spec.stations;
        for (std::size_t k = 0; k < spec.links.size(); ++k) {
            line = link_lines[k];
            partial.links.push_back(spec.links[k]);
            validate(partial);
        }
    } catch (const SpecError& e) {
        throw SpecError(e.code(), e.detail(), line);
    }
    return spec;
}

NetworkSpec parse_network_spec_string(const std::string& text) {
    std::istringstream in(text);
    return parse_network_spec(in);
}

NetworkSpec load_network_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw SpecError(ErrorCode::E_IO, fmt::format("cannot open '{}'", path.string()));
    }
    return parse_network_spec(in);
}

std::string serialize_network_spec(const NetworkSpec& spec) {
    const LinkConfig& c = spec.kljn_defaults;
    std::string out = fmt::format(
        "defaults r_low={} r_high={} noise_scale={} wave_velocity={} length={} "
        "samples_per_bep={} parallel_wires={} guard_fraction={} alarm_significance={}\n",
        c.r_low, c.r_high, c.scale.value(), c.wave_velocity, c.length, c.samples_per_bep,
        c.parallel_wires, c.guard_fraction, c.alarm_significance);
    for (const auto& s : spec.stations) {
        out += fmt::format("station id={} island={} kljn={} qkd={} budget={}\n", s.id, s.island,
                           s.has_kljn ? "yes" : "no", s.has_qkd ? "yes" : "no",
                           s.kljn_unit_budget);
    }
    for (const auto& l : spec.links) {
        out += fmt::format("link a={} b={} kind={} length={}", l.a, l.b, to_string(l.kind),
                           l.length);
        if (l.kind == LinkKind::wire) out += fmt::format(" wires={}", l.parallel_wires);
        if (l.kind == LinkKind::satellite) out += fmt::format(" qkd={}", l.qkd_equipped ? "yes" : "no");
        out += '\n';
    }
    return out;
}

}  // namespace kljn
