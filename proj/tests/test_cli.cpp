#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "kljn/commands.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kData = KLJN_DATA_DIR;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome cli(std::vector<std::string> args) {
    args.insert(args.begin(), "kljn-cli");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = kljn::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("kljn_cli_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Manifest lines plus rows keyed by header name.
struct Table {
    std::map<std::string, std::string> manifest;
    std::vector<std::map<std::string, std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

Table read_table(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    Table t;
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            t.manifest[line.substr(2, eq - 2)] = line.substr(eq + 1);
        } else if (header.empty()) {
            header = split(line);
        } else {
            const auto cells = split(line);
            REQUIRE(cells.size() == header.size());
            std::map<std::string, std::string> row;
            for (std::size_t k = 0; k < header.size(); ++k) row[header[k]] = cells[k];
            t.rows.push_back(row);
        }
    }
    return t;
}

}  // namespace

TEST_CASE("simulate-link") {
    const fs::path dir = scratch("sim");
    SUBCASE("default geometry reports the ideal load time") {
        const Outcome o = cli({"simulate-link", "--key-bits", "256", "--length", "1000", "--seed", "5",
                               "--out-dir", dir.string()});
        CHECK(o.code == 0);
        CHECK(o.out.find("ideal_time = 2.56 s") != std::string::npos);
        const Table t = read_table(dir / "simulate_link.csv");
        REQUIRE(t.rows.size() == 1);
        CHECK(t.rows[0].at("ideal_time_s") == "2.56");
        CHECK(t.rows[0].at("key").size() == 256);
        CHECK(t.rows[0].at("aborted") == "no");
        CHECK(std::stod(t.rows[0].at("effective_time_s")) > 2.56);
        CHECK(t.manifest.at("command") == "simulate-link");
        CHECK(t.manifest.at("seed") == "5");
    }
    SUBCASE("one bit") {
        CHECK(cli({"simulate-link", "--key-bits", "1", "--out-dir", dir.string()}).code == 0);
    }
    SUBCASE("degenerate resistors are rejected") {
        const Outcome o = cli({"simulate-link", "--rl", "1000", "--rh", "1000", "--out-dir", dir.string()});
        CHECK(o.code == 2);
        CHECK_FALSE(o.err.empty());
        CHECK_FALSE(fs::exists(dir / "simulate_link.csv"));
    }
    SUBCASE("usage errors") {
        CHECK(cli({"simulate-link", "--key-bits", "zero"}).code == 2);
        CHECK(cli({"simulate-link", "--bogus"}).code == 2);
        CHECK(cli({}).code == 2);
        CHECK(cli({"teleport"}).code == 2);
    }
}

TEST_CASE("eavesdrop") {
    const fs::path dir = scratch("eve");
    SUBCASE("passive listening is a coin flip") {
        const Outcome o = cli({"eavesdrop", "--attack", "passive", "--trials", "10000", "--seed", "3",
                               "--out-dir", dir.string()});
        CHECK(o.code == 0);
        const auto row = read_table(dir / "eavesdrop.csv").rows.at(0);
        CHECK(std::stod(row.at("eve_ci99_lo")) <= 0.5);
        CHECK(std::stod(row.at("eve_ci99_hi")) >= 0.5);
        CHECK(row.at("alarmed") == "0");
        CHECK(row.at("false_alarm_rate") == "0");
    }
    SUBCASE("mitm is caught") {
        const Outcome o = cli({"eavesdrop", "--attack", "mitm", "--trials", "2000", "--out-dir", dir.string()});
        CHECK(o.code == 0);
        const auto row = read_table(dir / "eavesdrop.csv").rows.at(0);
        CHECK(std::stod(row.at("detection_rate")) > 0.99);
        CHECK(row.at("eve_accuracy").empty());
    }
    SUBCASE("bad attack arguments") {
        CHECK(cli({"eavesdrop", "--attack", "inject", "--amplitude", "0", "--out-dir", dir.string()}).code == 2);
        CHECK(cli({"eavesdrop", "--attack", "bribe", "--out-dir", dir.string()}).code == 2);
        CHECK(cli({"eavesdrop", "--out-dir", dir.string()}).code == 2);
        CHECK(cli({"eavesdrop", "--attack", "inject", "--waveform", "square", "--out-dir", dir.string()}).code == 2);
    }
}

TEST_CASE("plan") {
    const fs::path dir = scratch("plan");
    SUBCASE("ten-station mesh hardware") {
        const Outcome o = cli({"plan", kData + "/mesh10.net", "--mode", "mesh", "--discard-beps", "2000",
                               "--out-dir", dir.string()});
        REQUIRE(o.code == 0);
        CHECK(o.out.find("M = 90") != std::string::npos);
        CHECK(o.out.find("W = 45") != std::string::npos);
        const auto row = read_table(dir / "plan_summary.csv").rows.at(0);
        CHECK(row.at("kljn_units") == "90");
        CHECK(row.at("wires") == "45");
        CHECK(read_table(dir / "plan_pairs.csv").rows.size() == 45);
    }
    SUBCASE("uniform meshes share one total") {
        std::vector<std::string> totals;
        for (int n : {4, 8, 12}) {
            const Outcome o = cli({"plan", kData + "/mesh_uniform_" + std::to_string(n) + ".net", "--mode",
                                   "mesh", "--discard-beps", "2000", "--out-dir", dir.string()});
            REQUIRE(o.code == 0);
            totals.push_back(read_table(dir / "plan_summary.csv").rows.at(0).at("ideal_total_s"));
        }
        CHECK(totals[0] == "2.56");
        CHECK(totals[1] == totals[0]);
        CHECK(totals[2] == totals[0]);
    }
    SUBCASE("star and line") {
        CHECK(cli({"plan", kData + "/star4.net", "--mode", "star", "--center", "X", "--discard-beps", "2000",
                   "--out-dir", dir.string()}).code == 0);
        CHECK(read_table(dir / "plan_rounds.csv").rows.size() == 3);
        CHECK(cli({"plan", kData + "/line3.net", "--mode", "line", "--order", "L1,L2,L3", "--discard-beps",
                   "2000", "--out-dir", dir.string()}).code == 0);
        CHECK(read_table(dir / "plan_summary.csv").rows.at(0).at("ideal_total_s") == "5.12");
    }
    SUBCASE("missing mode arguments are usage errors") {
        CHECK(cli({"plan", kData + "/star4.net", "--mode", "star", "--out-dir", dir.string()}).code == 2);
        CHECK(cli({"plan", kData + "/line3.net", "--mode", "line", "--out-dir", dir.string()}).code == 2);
        CHECK(cli({"plan", kData + "/line3.net", "--mode", "ring", "--out-dir", dir.string()}).code == 2);
    }
    SUBCASE("unmet prerequisites are spec errors with a hint") {
        const Outcome o = cli({"plan", kData + "/star4.net", "--mode", "mesh", "--out-dir", dir.string()});
        CHECK(o.code == 3);
        CHECK(o.err.find("E_PLAN") != std::string::npos);
        CHECK(cli({"plan", kData + "/star4.net", "--mode", "star", "--center", "P1", "--out-dir",
                   dir.string()}).code == 3);
        CHECK(cli({"plan", kData + "/nowhere.net", "--mode", "mesh", "--out-dir", dir.string()}).code == 3);
    }
    SUBCASE("malformed file") {
        const fs::path bad = scratch("badnet");
        fs::create_directories(bad);
        std::ofstream(bad / "bad.net") << "station id=A island=x\nlink a=A b=Z kind=wire length=5\n";
        const Outcome o = cli({"plan", (bad / "bad.net").string(), "--mode", "mesh", "--out-dir", dir.string()});
        CHECK(o.code == 3);
        CHECK(o.err.find("line 2") != std::string::npos);
        CHECK(o.err.find("E_UNKNOWN_STATION") != std::string::npos);
    }
}

TEST_CASE("reach") {
    const fs::path dir = scratch("reach");
    SUBCASE("plain satellites keep the islands apart") {
        const Outcome o = cli({"reach", kData + "/fig3.net", "--out-dir", dir.string()});
        CHECK(o.code == 0);
        CHECK(o.out.find("cross-island unconditional pairs: 0") != std::string::npos);
    }
    SUBCASE("QKD satellite joins them") {
        const Outcome o = cli({"reach", kData + "/fig4.net", "--out-dir", dir.string()});
        CHECK(o.code == 0);
        std::size_t cross = 0;
        for (const auto& row : read_table(dir / "reach_pairs.csv").rows) {
            if (row.at("class") == "unconditional" && row.at("island_a") != row.at("island_b")) ++cross;
        }
        CHECK(cross == 9);
        CHECK(read_table(dir / "reach_components.csv").rows.size() == 6);
        CHECK(read_table(dir / "reach_trust.csv").manifest.at("kappa") == "2");
    }
    SUBCASE("no links") {
        CHECK(cli({"reach", kData + "/empty_links.net", "--out-dir", dir.string()}).code == 0);
        for (const auto& row : read_table(dir / "reach_pairs.csv").rows) CHECK(row.at("class") == "none");
    }
    SUBCASE("bad trust parameters") {
        CHECK(cli({"reach", kData + "/fig4.net", "--kappa", "0", "--out-dir", dir.string()}).code == 2);
    }
}

TEST_CASE("same manifest, same bytes") {
    const std::vector<std::vector<std::string>> runs = {
        {"simulate-link", "--key-bits", "64", "--seed", "11"},
        {"eavesdrop", "--attack", "inject", "--waveform", "gaussian", "--trials", "300", "--seed", "11"},
        {"plan", kData + "/star4.net", "--mode", "star", "--center", "X", "--discard-beps", "1000", "--seed", "11"},
        {"reach", kData + "/fig3.net", "--seed", "11"},
    };
    for (const auto& base : runs) {
        CAPTURE(base[0]);
        const fs::path a = scratch("repro_a"), b = scratch("repro_b");
        auto args_a = base, args_b = base;
        args_a.insert(args_a.end(), {"--out-dir", a.string()});
        args_b.insert(args_b.end(), {"--out-dir", b.string()});
        const Outcome oa = cli(args_a);
        const Outcome ob = cli(args_b);
        REQUIRE(oa.code == ob.code);
        CHECK(oa.out == ob.out);
        std::size_t files = 0;
        for (const auto& entry : fs::directory_iterator(a)) {
            ++files;
            const std::string text = slurp(entry.path());
            CHECK(text == slurp(b / entry.path().filename()));
            // every table embeds the manifest
            CHECK(text.rfind("# command=" + base[0] + "\n", 0) == 0);
            CHECK(text.find("# seed=11\n") != std::string::npos);
        }
        CHECK(files >= 1);
    }
}
