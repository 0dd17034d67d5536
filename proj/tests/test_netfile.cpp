#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "kljn/netfile.hpp"

using namespace kljn;

namespace {

const std::string kData = KLJN_DATA_DIR;

// Runs the parser and reports the code and line of the failure.
std::pair<ErrorCode, std::size_t> failure(const std::string& text) {
    try {
        parse_network_spec_string(text);
    } catch (const SpecError& e) {
        return {e.code(), e.line()};
    }
    FAIL("parse unexpectedly succeeded:\n" << text);
    return {};
}

const char* kTwoStations =
    "station id=A island=x kljn=yes\n"
    "station id=B island=x kljn=yes\n";

NetworkSpec random_spec(std::mt19937_64& gen) {
    std::uniform_int_distribution<int> n_stations(2, 9);
    std::uniform_int_distribution<int> n_islands(1, 3);
    std::bernoulli_distribution coin(0.5);
    std::uniform_real_distribution<double> log_len(0.0, 7.5);

    NetworkSpec spec;
    if (coin(gen)) {
        spec.kljn_defaults.r_low = std::uniform_real_distribution<double>(10.0, 900.0)(gen);
        spec.kljn_defaults.samples_per_bep = std::uniform_int_distribution<std::size_t>(2, 1000)(gen);
        spec.kljn_defaults.guard_fraction = 0.1 / 3.0;
        spec.kljn_defaults.scale = NoiseScale(1.0 / 7.0);
    }
    const int islands = n_islands(gen);
    const int n = n_stations(gen);
    for (int k = 0; k < n; ++k) {
        Station s;
        s.id = "st" + std::to_string(k);
        s.island = "isl" + std::to_string(std::uniform_int_distribution<int>(0, islands - 1)(gen));
        s.has_kljn = coin(gen);
        s.has_qkd = coin(gen);
        s.kljn_unit_budget = std::uniform_int_distribution<std::size_t>(0, 20)(gen);
        spec.stations.push_back(s);
    }
    const int links = std::uniform_int_distribution<int>(0, 2 * n)(gen);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int k = 0; k < links; ++k) {
        const int a = pick(gen);
        const int b = pick(gen);
        if (a == b) continue;
        NetworkLink l;
        l.a = spec.stations[a].id;
        l.b = spec.stations[b].id;
        l.length = std::pow(10.0, log_len(gen));
        const bool same_island = spec.stations[a].island == spec.stations[b].island;
        const int kind = std::uniform_int_distribution<int>(same_island ? 0 : 2, 2)(gen);
        l.kind = static_cast<LinkKind>(kind);
        if (l.kind == LinkKind::wire) l.parallel_wires = std::uniform_int_distribution<std::size_t>(1, 600)(gen);
        if (l.kind == LinkKind::satellite) l.qkd_equipped = coin(gen);
        spec.links.push_back(l);
    }
    return spec;
}

}  // namespace

TEST_CASE("bundled fixtures parse") {
    const NetworkSpec fig3 = load_network_spec(kData + "/fig3.net");
    CHECK(fig3.stations.size() == 8);
    std::set<std::string> islands;
    for (const auto& s : fig3.stations) islands.insert(s.island);
    CHECK(islands == std::set<std::string>{"north", "south"});
    CHECK(fig3.links.size() == 8);
    const NetworkLink* sat = fig3.find_link("S1", "N1", LinkKind::satellite);
    REQUIRE(sat != nullptr);
    CHECK_FALSE(sat->qkd_equipped);
    CHECK(fig3.find_link("N1", "N2", LinkKind::wire)->length == 1000.0);

    const NetworkSpec fig4 = load_network_spec(kData + "/fig4.net");
    CHECK(fig4.find_link("N1", "S1", LinkKind::satellite)->qkd_equipped);
    CHECK(fig4.find_station("N1")->has_qkd);

    for (const char* name : {"fig2.net", "mesh10.net", "mesh_uniform_4.net", "mesh_uniform_8.net",
                             "mesh_uniform_12.net", "star4.net", "line3.net", "empty_links.net"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load_network_spec(kData + "/" + name));
    }
    CHECK(load_network_spec(kData + "/mesh10.net").links.size() == 45);
    CHECK(load_network_spec(kData + "/empty_links.net").links.empty());
}

TEST_CASE("defaults and optional fields") {
    const NetworkSpec spec = parse_network_spec_string(
        "# comment line\n"
        "\n"
        "defaults r_low=500 r_high=5000 samples_per_bep=400   # trailing comment\n"
        "station id=A island=x\n"
        "station id=B island=x kljn=yes budget=3\n"
        "link a=A b=B kind=wire length=250 wires=4\n");
    CHECK(spec.kljn_defaults.r_low == 500.0);
    CHECK(spec.kljn_defaults.samples_per_bep == 400);
    CHECK(spec.kljn_defaults.wave_velocity == 2e8);
    CHECK_FALSE(spec.stations[0].has_kljn);
    CHECK(spec.stations[1].kljn_unit_budget == 3);
    CHECK(spec.links[0].parallel_wires == 4);
}

TEST_CASE("links may precede their stations") {
    const NetworkSpec spec = parse_network_spec_string(
        "link a=A b=B kind=wire length=10\n"
        "station id=A island=x\n"
        "station id=B island=x\n");
    CHECK(spec.links.size() == 1);
}

TEST_CASE("each failure has its own code and line") {
    const std::string s = kTwoStations;
    using P = std::pair<ErrorCode, std::size_t>;

    CHECK(failure(s + "link a=A b=Z kind=wire length=10\n") == P{ErrorCode::E_UNKNOWN_STATION, 3});
    CHECK(failure(s + "link a=A b=B kind=wire length=0\n") == P{ErrorCode::E_BAD_LENGTH, 3});
    CHECK(failure(s + "link a=A b=B kind=wire length=-4\n") == P{ErrorCode::E_BAD_LENGTH, 3});
    CHECK(failure(s + "link a=A b=A kind=wire length=10\n") == P{ErrorCode::E_SELF_LINK, 3});
    CHECK(failure(s + "link a=A b=B kind=wire length=10 wires=0\n") == P{ErrorCode::E_BAD_WIRES, 3});
    CHECK(failure(s + "link a=A b=B kind=rope length=10\n") == P{ErrorCode::E_BAD_VALUE, 3});
    CHECK(failure(s + "link a=A b=B kind=wire length=ten\n") == P{ErrorCode::E_BAD_VALUE, 3});
    CHECK(failure(s + "link a=A b=B kind=wireless length=10 wires=2\n") == P{ErrorCode::E_BAD_VALUE, 3});
    CHECK(failure(s + "link a=A b=B kind=wire length=10 qkd=yes\n") == P{ErrorCode::E_BAD_VALUE, 3});
    CHECK(failure(s + "link a=A b=B kind=wire\n") == P{ErrorCode::E_MISSING_FIELD, 3});
    CHECK(failure(s + "link a=A b=B kind=wire length=10 colour=red\n") == P{ErrorCode::E_UNKNOWN_FIELD, 3});
    CHECK(failure(s + "link a=A b=B kind=wire length=10 length=20\n") == P{ErrorCode::E_SYNTAX, 3});
    CHECK(failure(s + "link a=A b=B kind=wire lengthy\n") == P{ErrorCode::E_SYNTAX, 3});
    CHECK(failure(s + "router id=R\n") == P{ErrorCode::E_UNKNOWN_RECORD, 3});
    CHECK(failure(s + "station id=A island=y\n") == P{ErrorCode::E_DUPLICATE_STATION, 3});
    CHECK(failure("station id=A island=x kljn=maybe\n") == P{ErrorCode::E_BAD_VALUE, 1});
    CHECK(failure("station island=x\n") == P{ErrorCode::E_MISSING_FIELD, 1});
    CHECK(failure("defaults r_low=100 r_high=100\n") == P{ErrorCode::E_BAD_DEFAULTS, 1});
    CHECK(failure("defaults r_low=100\ndefaults r_low=200\n") == P{ErrorCode::E_SYNTAX, 2});

    CHECK(failure("station id=A island=x\n"
                  "station id=B island=y\n"
                  "\n"
                  "link a=A b=B kind=wire length=10\n") == P{ErrorCode::E_CROSS_ISLAND, 4});
    // satellites may cross
    CHECK_NOTHROW(parse_network_spec_string("station id=A island=x\n"
                                            "station id=B island=y\n"
                                            "link a=A b=B kind=satellite length=3.6e7\n"));
}

TEST_CASE("messages carry the line and the code") {
    try {
        parse_network_spec_string(std::string(kTwoStations) + "link a=A b=Q kind=wire length=1\n");
        FAIL("expected an error");
    } catch (const SpecError& e) {
        const std::string what = e.what();
        CHECK(what.find("line 3") != std::string::npos);
        CHECK(what.find("E_UNKNOWN_STATION") != std::string::npos);
        CHECK(what.find("Q") != std::string::npos);
    }
    CHECK_THROWS_AS(load_network_spec(kData + "/does_not_exist.net"), SpecError);
}

TEST_CASE("validate on hand-built specs") {
    NetworkSpec spec = parse_network_spec_string(kTwoStations);
    CHECK_NOTHROW(validate(spec));
    spec.links.push_back({"A", "B", LinkKind::wire, 5.0, 0, false});
    CHECK_THROWS_AS(validate(spec), SpecError);
    spec.links.back().parallel_wires = 1;
    CHECK_NOTHROW(validate(spec));
    spec.stations[1].island = "other";
    CHECK_THROWS_AS(validate(spec), SpecError);
}

TEST_CASE("round trip: parse(serialize(spec)) == spec") {
    std::mt19937_64 gen(1234);
    for (int trial = 0; trial < 300; ++trial) {
        const NetworkSpec spec = random_spec(gen);
        REQUIRE_NOTHROW(validate(spec));
        const std::string text = serialize_network_spec(spec);
        NetworkSpec back;
        REQUIRE_NOTHROW(back = parse_network_spec_string(text));
        CAPTURE(text);
        REQUIRE(back == spec);
        CHECK(serialize_network_spec(back) == text);
    }
    for (const char* name : {"fig3.net", "fig4.net", "mesh10.net", "star4.net"}) {
        const NetworkSpec spec = load_network_spec(kData + "/" + name);
        CHECK(parse_network_spec_string(serialize_network_spec(spec)) == spec);
    }
}
