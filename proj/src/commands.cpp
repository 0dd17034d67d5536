#include "kljn/commands.hpp"

#include <filesystem>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "kljn/netfile.hpp"
#include "kljn/planner.hpp"
#include "kljn/report.hpp"

namespace kljn::cli {

namespace {

// Seed derivation under the manifest seed, one tag per consumer.
enum : std::uint64_t {
    kSeedAttackRun = 1,
    kSeedBaselineRun = 2,
    kSeedDiscardFactor = 3,
};

constexpr double kCiZ = 2.5758293035489004;  // two-sided 99%

std::filesystem::path prepare_out_dir(const std::string& dir) {
    std::filesystem::path p(dir.empty() ? "." : dir);
    std::filesystem::create_directories(p);
    return p;
}

RunManifest make_manifest(std::string command, std::string input, std::uint64_t seed,
                          std::string out_dir) {
    RunManifest m;
    m.command = std::move(command);
    m.input = std::move(input);
    m.seed = seed;
    m.out_dir = std::move(out_dir);
    return m;
}

void add_link_params(RunManifest& m, const LinkOptions& o) {
    m.add("rl", num(o.r_low));
    m.add("rh", num(o.r_high));
    m.add("length", num(o.length));
    m.add("velocity", num(o.wave_velocity));
    m.add("noise_scale", num(o.noise_scale));
    m.add("samples", std::to_string(o.samples));
    m.add("wires", std::to_string(o.wires));
    m.add("guard", num(o.guard));
}

std::string bits_string(const std::vector<std::uint8_t>& bits) {
    std::string s;
    s.reserve(bits.size());
    for (auto b : bits) s += b ? '1' : '0';
    return s;
}

void add_link_flags(CLI::App& cmd, LinkOptions& o) {
    cmd.add_option("--rl", o.r_low, "Low resistance (Ohm)");
    cmd.add_option("--rh", o.r_high, "High resistance (Ohm)");
    cmd.add_option("--length", o.length, "Wire length (m)");
    cmd.add_option("--velocity", o.wave_velocity, "Wave velocity in the cable (m/s)");
    cmd.add_option("--noise-scale", o.noise_scale, "Noise intensity a (V^2/Ohm)");
    cmd.add_option("--samples", o.samples, "Independent samples per bit exchange period");
    cmd.add_option("--wires", o.wires, "Parallel wires");
    cmd.add_option("--guard", o.guard, "Relative guard band around decision thresholds");
}

}  // namespace

LinkConfig LinkOptions::to_config() const {
    LinkConfig c;
    c.r_low = r_low;
    c.r_high = r_high;
    c.length = length;
    c.wave_velocity = wave_velocity;
    c.scale = NoiseScale(noise_scale);
    c.samples_per_bep = samples;
    c.parallel_wires = wires;
    c.guard_fraction = guard;
    validate(c);
    return c;
}

int simulate_link(const SimulateLinkOptions& opt, std::ostream& out, std::ostream& err) {
    LinkConfig config;
    try {
        config = opt.link.to_config();
        if (opt.key_bits == 0) throw std::invalid_argument("key-bits must be at least 1");
    } catch (const std::exception& e) {
        fmt::print(err, "simulate-link: invalid configuration: {}\n", e.what());
        return kUsage;
    }

    RunManifest m = make_manifest("simulate-link", "", opt.seed, opt.out_dir);
    add_link_params(m, opt.link);
    m.add("key_bits", std::to_string(opt.key_bits));

    const KeyExchangeResult r = exchange_key(config, opt.key_bits, opt.seed);
    const double discard_rate =
        static_cast<double>(r.discarded) / static_cast<double>(r.beps_used);

    CsvTable table({"key_bits", "beps_used", "discarded", "discard_rate", "alarms", "bit_errors",
                    "bep_period_s", "ideal_time_s", "effective_time_s", "aborted", "key",
                    "bob_key"});
    table.add_row({std::to_string(opt.key_bits), std::to_string(r.beps_used),
                   std::to_string(r.discarded), num(discard_rate), std::to_string(r.alarms),
                   std::to_string(r.bit_errors), num(bep_period(config)), num(r.ideal_time),
                   num(r.elapsed_time), r.aborted ? "yes" : "no", bits_string(r.key_bits),
                   bits_string(r.bob_key_bits)});
    table.write(prepare_out_dir(opt.out_dir) / "simulate_link.csv", m);

    fmt::print(out, "simulate-link seed={}\n", opt.seed);
    fmt::print(out, "  key bits:        {} of {}\n", r.key_bits.size(), opt.key_bits);
    fmt::print(out, "  periods used:    {} ({} discarded, rate {:.4f})\n", r.beps_used,
               r.discarded, discard_rate);
    fmt::print(out, "  bit errors:      {}\n", r.bit_errors);
    fmt::print(out, "  alarms:          {}\n", r.alarms);
    fmt::print(out, "  ideal_time = {} s (one bit per period)\n", num(r.ideal_time));
    fmt::print(out, "  effective_time = {} s ({} wire(s))\n", num(r.elapsed_time),
               config.parallel_wires);
    if (r.aborted) {
        fmt::print(err, "simulate-link: exchange aborted on intrusion alarm\n");
        return kAlarm;
    }
    return kOk;
}

int eavesdrop(const EavesdropOptions& opt, std::ostream& out, std::ostream& err) {
    LinkConfig config;
    AttackKind attack;
    DetectionConfig det;
    try {
        config = opt.link.to_config();
        if (opt.attack == "passive") {
            attack = PassiveListen{};
        } else if (opt.attack == "mitm") {
            attack = MitmSplit{};
        } else if (opt.attack == "inject") {
            InjectWaveform wf;
            if (opt.waveform == "constant") {
                wf = InjectWaveform::constant;
            } else if (opt.waveform == "gaussian") {
                wf = InjectWaveform::gaussian;
            } else {
                throw std::invalid_argument("waveform must be constant or gaussian");
            }
            attack = CurrentInject{opt.amplitude, wf};
        } else {
            throw std::invalid_argument(
                fmt::format("unknown attack '{}' (passive, mitm, inject)", opt.attack));
        }
        validate(attack);
        det.reveal_fraction = opt.reveal_fraction;
        validate(det);
        if (opt.trials == 0) throw std::invalid_argument("trials must be at least 1");
    } catch (const std::exception& e) {
        fmt::print(err, "eavesdrop: {}\n", e.what());
        return kUsage;
    }

    RunManifest m = make_manifest("eavesdrop", "", opt.seed, opt.out_dir);
    add_link_params(m, opt.link);
    m.add("attack", opt.attack);
    m.add("trials", std::to_string(opt.trials));
    if (opt.attack == "inject") {
        m.add("amplitude", num(opt.amplitude));
        m.add("waveform", opt.waveform);
    }
    m.add("reveal_fraction", num(opt.reveal_fraction));

    const AttackStats attacked =
        evaluate_attack(attack, config, det, opt.trials, derive_seed(opt.seed, kSeedAttackRun));
    const AttackStats baseline = evaluate_attack(PassiveListen{}, config, det, opt.trials,
                                                 derive_seed(opt.seed, kSeedBaselineRun));

    const auto trials = static_cast<double>(opt.trials);
    const double detection_rate = static_cast<double>(attacked.alarmed) / trials;
    const double false_alarm_rate = static_cast<double>(baseline.alarmed) / trials;
    const bool passive = std::holds_alternative<PassiveListen>(attack);

    std::string accuracy = "", lo = "", hi = "";
    if (passive && attacked.mixed > 0) {
        const Interval ci = wilson_interval(attacked.eve_correct, attacked.mixed, kCiZ);
        accuracy = num(static_cast<double>(attacked.eve_correct) /
                       static_cast<double>(attacked.mixed));
        lo = num(ci.lo);
        hi = num(ci.hi);
    }

    CsvTable table({"attack", "trials", "mixed", "eve_correct", "eve_accuracy", "eve_ci99_lo",
                    "eve_ci99_hi", "alarmed", "detection_rate", "baseline_alarmed",
                    "false_alarm_rate"});
    table.add_row({opt.attack, std::to_string(opt.trials), std::to_string(attacked.mixed),
                   passive ? std::to_string(attacked.eve_correct) : "", accuracy, lo, hi,
                   std::to_string(attacked.alarmed), num(detection_rate),
                   std::to_string(baseline.alarmed), num(false_alarm_rate)});
    table.write(prepare_out_dir(opt.out_dir) / "eavesdrop.csv", m);

    fmt::print(out, "eavesdrop attack={} trials={} seed={}\n", opt.attack, opt.trials, opt.seed);
    if (passive) {
        fmt::print(out, "  eve accuracy:     {} over {} mixed periods (99% CI [{}, {}])\n",
                   accuracy, attacked.mixed, lo, hi);
    }
    fmt::print(out, "  detection rate:   {}\n", num(detection_rate));
    fmt::print(out, "  false-alarm rate: {}\n", num(false_alarm_rate));
    return kOk;
}

int plan(const PlanOptions& opt, std::ostream& out, std::ostream& err) {
    if (opt.mode != "mesh" && opt.mode != "star" && opt.mode != "line") {
        fmt::print(err, "plan: --mode must be mesh, star or line\n");
        return kUsage;
    }
    if (opt.mode == "star" && opt.center.empty()) {
        fmt::print(err, "plan: --mode star needs --center <station id>\n");
        return kUsage;
    }
    if (opt.mode == "line" && opt.order.empty()) {
        fmt::print(err, "plan: --mode line needs --order <id,id,...>\n");
        return kUsage;
    }
    if (opt.key_bits == 0 || opt.discard_beps == 0) {
        fmt::print(err, "plan: --key-bits and --discard-beps must be positive\n");
        return kUsage;
    }

    NetworkSpec spec;
    DistributionPlan result;
    try {
        spec = load_network_spec(opt.spec_path);
        if (opt.mode == "mesh") {
            result = plan_full_mesh(spec, opt.key_bits);
        } else if (opt.mode == "star") {
            result = plan_star(spec, opt.center, opt.key_bits);
        } else {
            result = plan_line(spec, opt.order, opt.key_bits);
        }
    } catch (const SpecError& e) {
        fmt::print(err, "plan: {}\n", e.what());
        return kSpecError;
    }

    const double factor = measure_discard_factor(spec.kljn_defaults, opt.discard_beps,
                                                 derive_seed(opt.seed, kSeedDiscardFactor));
    const PlanSummary summary = plan_time_summary(result, factor);

    RunManifest m = make_manifest("plan", opt.spec_path, opt.seed, opt.out_dir);
    m.add("mode", opt.mode);
    if (!opt.center.empty()) m.add("center", opt.center);
    if (!opt.order.empty()) {
        std::string joined;
        for (const auto& id : opt.order) joined += (joined.empty() ? "" : ";") + id;
        m.add("order", joined);
    }
    m.add("key_bits", std::to_string(opt.key_bits));
    m.add("discard_beps", std::to_string(opt.discard_beps));

    const auto dir = prepare_out_dir(opt.out_dir);

    CsvTable rounds({"round", "pairs", "idle", "ideal_time_s", "effective_time_s"});
    for (const auto& r : summary.rows) {
        rounds.add_row({std::to_string(r.round), r.pairs, r.idle, num(r.ideal_time),
                        num(r.effective_time)});
    }
    rounds.write(dir / "plan_rounds.csv", m);

    CsvTable pairs({"round", "a", "b", "length_m", "wires", "key_bits", "time_s", "path"});
    for (std::size_t k = 0; k < result.rounds.size(); ++k) {
        for (const auto& p : result.rounds[k].pairs) {
            std::string path;
            for (const auto& id : p.path) path += (path.empty() ? "" : ";") + id;
            pairs.add_row({std::to_string(k + 1), p.a, p.b, num(p.length),
                           std::to_string(p.parallel_wires), std::to_string(p.key_bits),
                           num(p.time), path});
        }
    }
    pairs.write(dir / "plan_pairs.csv", m);

    const std::size_t n_pairs = [&] {
        std::size_t c = 0;
        for (const auto& r : result.rounds) c += r.pairs.size();
        return c;
    }();
    CsvTable totals({"mode", "stations", "pairs", "rounds", "kljn_units", "wires", "key_bits",
                     "ideal_total_s", "effective_total_s", "discard_factor"});
    totals.add_row({opt.mode, std::to_string(spec.stations.size()), std::to_string(n_pairs),
                    std::to_string(result.rounds.size()),
                    std::to_string(summary.hardware.kljn_units),
                    std::to_string(summary.hardware.wires), std::to_string(opt.key_bits),
                    num(summary.ideal_total), num(summary.effective_total), num(factor)});
    totals.write(dir / "plan_summary.csv", m);

    fmt::print(out, "plan mode={} spec={} seed={}\n", opt.mode, opt.spec_path, opt.seed);
    fmt::print(out, "  M = {} KLJN units, W = {} wires\n", summary.hardware.kljn_units,
               summary.hardware.wires);
    for (const auto& r : summary.rows) {
        fmt::print(out, "  round {}: {} -> {} s ideal, {} s effective\n", r.round, r.pairs,
                   num(r.ideal_time), num(r.effective_time));
    }
    fmt::print(out, "  total_time = {} s ideal, {} s effective (x{:.4f} measured discard factor)\n",
               num(summary.ideal_total), num(summary.effective_total), factor);
    if (result.mode == PlanMode::star && result.rounds.size() % 2 == 1 &&
        spec.stations.size() % 2 == 0) {
        fmt::print(out, "  note: odd station count around the exchange needs N rounds (one idle per round)\n");
    }
    return kOk;
}

int reach(const ReachOptions& opt, std::ostream& out, std::ostream& err) {
    if (!(opt.trust.kappa > 0.0) || !(opt.trust.beta >= 0.0)) {
        fmt::print(err, "reach: --kappa must be positive and --beta non-negative\n");
        return kUsage;
    }
    NetworkSpec spec;
    try {
        spec = load_network_spec(opt.spec_path);
    } catch (const SpecError& e) {
        fmt::print(err, "reach: {}\n", e.what());
        return kSpecError;
    }
    const SecurityReport report = classify_pairs(spec, opt.trust);

    RunManifest m = make_manifest("reach", opt.spec_path, opt.seed, opt.out_dir);
    m.add("kappa", num(opt.trust.kappa));
    m.add("beta", num(opt.trust.beta));
    const auto dir = prepare_out_dir(opt.out_dir);

    CsvTable pairs({"a", "b", "island_a", "island_b", "class"});
    std::size_t cross_unconditional = 0;
    for (const auto& [key, cls] : report.pair_classes) {
        const Station* a = spec.find_station(key.first);
        const Station* b = spec.find_station(key.second);
        pairs.add_row({key.first, key.second, a->island, b->island, std::string(to_string(cls))});
        if (cls == SecurityClass::unconditional && a->island != b->island) ++cross_unconditional;
    }
    pairs.write(dir / "reach_pairs.csv", m);

    CsvTable comps({"component", "station"});
    for (std::size_t c = 0; c < report.components.size(); ++c) {
        for (const auto& id : report.components[c]) comps.add_row({std::to_string(c + 1), id});
    }
    comps.write(dir / "reach_components.csv", m);

    CsvTable trust({"station", "kljn_edges", "secure_wireless_edges", "trust"});
    for (const auto& s : spec.stations) {
        const TrustEntry& t = report.trust.at(s.id);
        trust.add_row({s.id, std::to_string(t.kljn_edges), std::to_string(t.secure_wireless_edges),
                       num(t.score)});
    }
    trust.write(dir / "reach_trust.csv", m);

    fmt::print(out, "reach spec={} seed={}\n", opt.spec_path, opt.seed);
    auto symbol = [](SecurityClass c) {
        switch (c) {
            case SecurityClass::unconditional: return 'U';
            case SecurityClass::conditional: return 'c';
            case SecurityClass::none: return '.';
        }
        return '?';
    };
    std::size_t width = 0;
    for (const auto& s : spec.stations) width = std::max(width, s.id.size());
    // Columns are numbered like the rows; U unconditional, c conditional, . none.
    fmt::print(out, "  {:<{}}    ", "", width);
    for (std::size_t k = 0; k < spec.stations.size(); ++k) fmt::print(out, "{:>3}", k + 1);
    fmt::print(out, "\n");
    for (std::size_t r = 0; r < spec.stations.size(); ++r) {
        const auto& row = spec.stations[r];
        fmt::print(out, "  {:<{}} {:>3}", row.id, width, r + 1);
        for (const auto& col : spec.stations) {
            fmt::print(out, "{:>3}", row.id == col.id ? '-' : symbol(report.get(row.id, col.id)));
        }
        fmt::print(out, "\n");
    }
    for (std::size_t c = 0; c < report.components.size(); ++c) {
        fmt::print(out, "  component {}: {}\n", c + 1, fmt::join(report.components[c], " "));
    }
    fmt::print(out, "  cross-island unconditional pairs: {}\n", cross_unconditional);
    return kOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"KLJN key-exchange link simulator and network planner", "kljn-cli"};
    app.require_subcommand(1);

    SimulateLinkOptions sim;
    auto* sim_cmd = app.add_subcommand("simulate-link", "Exchange one key over a simulated link");
    add_link_flags(*sim_cmd, sim.link);
    sim_cmd->add_option("--key-bits", sim.key_bits, "Key length in bits");
    sim_cmd->add_option("--seed", sim.seed, "Run seed");
    sim_cmd->add_option("--out-dir", sim.out_dir, "Directory for report tables");

    EavesdropOptions eve;
    auto* eve_cmd = app.add_subcommand("eavesdrop", "Evaluate an eavesdropping attack");
    add_link_flags(*eve_cmd, eve.link);
    eve_cmd->add_option("--attack", eve.attack, "passive, mitm or inject")->required();
    eve_cmd->add_option("--trials", eve.trials, "Bit exchange periods to simulate");
    eve_cmd->add_option("--amplitude", eve.amplitude, "Injected current (A)");
    eve_cmd->add_option("--waveform", eve.waveform, "Injected waveform: constant or gaussian");
    eve_cmd->add_option("--reveal-fraction", eve.reveal_fraction,
                        "Share of samples compared in public");
    eve_cmd->add_option("--seed", eve.seed, "Run seed");
    eve_cmd->add_option("--out-dir", eve.out_dir, "Directory for report tables");

    PlanOptions pl;
    auto* plan_cmd = app.add_subcommand("plan", "Plan key distribution over a network");
    plan_cmd->add_option("spec", pl.spec_path, "Network file (.net)")->required();
    plan_cmd->add_option("--mode", pl.mode, "mesh, star or line")->required();
    plan_cmd->add_option("--center", pl.center, "Exchange station (star)");
    plan_cmd->add_option("--order", pl.order, "Comma-separated chain order (line)")->delimiter(',');
    plan_cmd->add_option("--key-bits", pl.key_bits, "Key length per pair");
    plan_cmd->add_option("--discard-beps", pl.discard_beps,
                         "Periods simulated to measure the discard factor");
    plan_cmd->add_option("--seed", pl.seed, "Run seed");
    plan_cmd->add_option("--out-dir", pl.out_dir, "Directory for report tables");

    ReachOptions re;
    auto* reach_cmd = app.add_subcommand("reach", "Classify pairwise security of a network");
    reach_cmd->add_option("spec", re.spec_path, "Network file (.net)")->required();
    reach_cmd->add_option("--kappa", re.trust.kappa, "Trust half-saturation count");
    reach_cmd->add_option("--beta", re.trust.beta, "Trust weight of secure satellite edges");
    reach_cmd->add_option("--seed", re.seed, "Run seed");
    reach_cmd->add_option("--out-dir", re.out_dir, "Directory for report tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*sim_cmd) return simulate_link(sim, out, err);
        if (*eve_cmd) return eavesdrop(eve, out, err);
        if (*plan_cmd) return plan(pl, out, err);
        if (*reach_cmd) return reach(re, out, err);
    } catch (const std::filesystem::filesystem_error& e) {
        fmt::print(err, "kljn-cli: {}\n", e.what());
        return kUsage;
    }
    return kUsage;
}

}  // namespace kljn::cli
