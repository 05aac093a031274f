// Command-line harness: capacity evaluation, retrieval simulation, download
// cost sweeps, the privacy audit, and the two-world ambiguity witness.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bpir/audit.hpp"
#include "bpir/experiment.hpp"

using namespace bpir;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 2;      // contract breach, failed audit or witness
constexpr int kExitInconclusive = 3; // audit without enough samples

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw Error("cannot open output file " + out_path);
    out << text << '\n';
}

std::vector<int> parse_id_list(const std::string& csv) {
    std::vector<int> ids;
    std::stringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (item.empty()) continue;
        ids.push_back(std::stoi(item) - 1); // 1-based on the wire
    }
    return ids;
}

Exec parse_exec(const std::string& name) {
    if (name == "serial") return Exec::Serial;
    if (name == "parallel") return Exec::Parallel;
    throw InvalidParams("--exec must be serial or parallel");
}

struct CommonFlags {
    SystemParams params;
    std::uint64_t seed = 1;
    std::string format = "json";
    std::string out;
    std::string exec = "parallel";
    long long alpha_override = 0;
    std::string byzantine;
};

// Rewrites argv so that `--config file` expands to the file's `key=value`
// lines as leading options; explicitly given flags come later and win.
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::string path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw Error("--config needs a file path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return rest;
    if (rest.empty()) throw Error("--config must follow a subcommand");

    std::ifstream in(path);
    if (!in) throw Error("cannot open config file " + path);
    std::vector<std::string> expanded{rest.front()}; // the subcommand
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        expanded.push_back("--" + key + "=" + value);
    }
    expanded.insert(expanded.end(), rest.begin() + 1, rest.end());
    return expanded;
}

void add_param_options(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--n", flags.params.num_databases, "number of databases");
    cmd->add_option("--k", flags.params.num_messages, "number of messages");
    cmd->add_option("--b", flags.params.num_byzantine, "number of byzantine databases");
    cmd->add_option("--blocks", flags.params.blocks, "blocks per message (l)");
    cmd->add_option("--field", flags.params.field_modulus, "prime field modulus");
    cmd->add_option("--theta", flags.params.desired_index, "desired message index (1-based)");
    cmd->add_option("--seed", flags.seed, "master seed");
    cmd->add_option("--alpha-override", flags.alpha_override,
                    "retransmission code rows per database");
    cmd->add_option("--format", flags.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", flags.out, "write output to this file");
    cmd->add_option("--exec", flags.exec, "execution policy: serial or parallel")
        ->check(CLI::IsMember({"serial", "parallel"}));
}

int cmd_capacity(const std::string& formula_name, const CommonFlags& flags) {
    const CapacityFormula formula = capacity_formula_from_name(formula_name);
    const Rational value = capacity(formula, flags.params.num_databases,
                                    flags.params.num_messages, flags.params.num_byzantine);
    if (flags.format == "csv") {
        std::string row = "formula,n,k,b,value,value_decimal\n";
        row += capacity_formula_name(formula) + ',' +
               std::to_string(flags.params.num_databases) + ',' +
               std::to_string(flags.params.num_messages) + ',' +
               std::to_string(flags.params.num_byzantine) + ',' + value.str() + ',' +
               std::to_string(value.to_double());
        emit(row, flags.out);
    } else {
        const json doc{{"formula", capacity_formula_name(formula)},
                       {"n", flags.params.num_databases},
                       {"k", flags.params.num_messages},
                       {"b", flags.params.num_byzantine},
                       {"value_num", value.num},
                       {"value_den", value.den},
                       {"value", value.str()},
                       {"value_decimal", value.to_double()}};
        emit(doc.dump(2), flags.out);
    }
    return kExitOk;
}

int cmd_simulate(const CommonFlags& flags, const std::string& strategy,
                 const std::string& transcript_path) {
    SystemParams params = flags.params;
    if (flags.alpha_override > 0) params.alpha_override = flags.alpha_override;

    SimulationOptions options;
    options.exec = parse_exec(flags.exec);
    options.keep_transcript = !transcript_path.empty();
    if (!flags.byzantine.empty()) options.byzantine = parse_id_list(flags.byzantine);

    const RunReport report = run_simulation(params, strategy, flags.seed, options);
    if (flags.format == "csv") {
        emit(run_report_csv_header() + "\n" + run_report_to_csv(report), flags.out);
    } else {
        emit(run_report_to_json(report), flags.out);
    }
    if (!transcript_path.empty()) {
        emit(transcript_to_json(*report.outcome.transcript, report.outcome.ledger,
                                report.outcome.caught),
             transcript_path);
    }
    return report.decode_ok ? kExitOk : kExitFailure;
}

int cmd_sweep(const CommonFlags& flags, int k_from, int k_to, const std::string& grid_path) {
    std::vector<SweepPoint> grid;
    if (!grid_path.empty()) {
        std::ifstream in(grid_path);
        if (!in) throw Error("cannot open grid file " + grid_path);
        json doc;
        in >> doc;
        for (const auto& point : doc.at("points")) {
            const int n = point.at("n").get<int>();
            const int b = point.at("b").get<int>();
            if (point.contains("k")) {
                grid.push_back(SweepPoint{n, b, point.at("k").get<int>()});
            } else {
                for (int k = point.at("k_from").get<int>();
                     k <= point.at("k_to").get<int>(); ++k) {
                    grid.push_back(SweepPoint{n, b, k});
                }
            }
        }
    } else {
        for (int k = k_from; k <= k_to; ++k) {
            grid.push_back(SweepPoint{flags.params.num_databases,
                                      flags.params.num_byzantine, k});
        }
    }

    const std::vector<SweepRow> rows = sweep(grid);
    auto cost_str = [](const std::optional<Rational>& cost) {
        return cost ? cost->str() : std::string("inf");
    };
    auto cost_decimal = [](const std::optional<Rational>& cost) {
        return cost ? std::to_string(cost->to_double()) : std::string("inf");
    };
    if (flags.format == "csv") {
        std::string text =
            "n,b,k,single_capacity,multi_capacity,single_cost,multi_cost,"
            "single_cost_decimal,multi_cost_decimal";
        for (const auto& row : rows) {
            text += '\n';
            text += std::to_string(row.n) + ',' + std::to_string(row.b) + ',' +
                    std::to_string(row.k) + ',' + row.single_round_capacity.str() + ',' +
                    row.multi_round_capacity.str() + ',' + cost_str(row.single_round_cost) +
                    ',' + cost_str(row.multi_round_cost) + ',' +
                    cost_decimal(row.single_round_cost) + ',' +
                    cost_decimal(row.multi_round_cost);
        }
        emit(text, flags.out);
    } else {
        json out = json::array();
        for (const auto& row : rows) {
            json item{{"n", row.n},
                      {"b", row.b},
                      {"k", row.k},
                      {"single_capacity", row.single_round_capacity.str()},
                      {"multi_capacity", row.multi_round_capacity.str()}};
            item["single_cost"] =
                row.single_round_cost ? json(row.single_round_cost->str()) : json();
            item["multi_cost"] =
                row.multi_round_cost ? json(row.multi_round_cost->str()) : json();
            item["single_cost_decimal"] =
                row.single_round_cost ? json(row.single_round_cost->to_double()) : json();
            item["multi_cost_decimal"] =
                row.multi_round_cost ? json(row.multi_round_cost->to_double()) : json();
            out.push_back(std::move(item));
        }
        emit(out.dump(2), flags.out);
    }
    return kExitOk;
}

int cmd_audit(const CommonFlags& flags, long long samples, double threshold,
              bool negative_control, bool roundm, const std::string& roundm_strategy,
              long long roundm_sessions) {
    PrivacyAuditOptions options;
    options.samples = samples;
    options.threshold = threshold;
    options.negative_control = negative_control;
    options.exec = parse_exec(flags.exec);
    const PrivacyAuditReport report = privacy_audit(flags.params, flags.seed, options);

    json doc{{"samples", report.samples},
             {"threshold", report.threshold},
             {"negative_control", report.negative_control},
             {"max_tv", report.max_tv},
             {"max_tv_per_db", report.max_tv_per_db},
             {"pass", report.pass},
             {"inconclusive", report.inconclusive}};

    bool pass = report.pass;
    if (roundm) {
        const RoundmAuditReport rm = roundm_privacy_audit(
            flags.params, roundm_strategy, roundm_sessions, flags.seed + 1, threshold,
            options.exec);
        doc["roundm"] = {{"sessions", rm.sessions},
                         {"threshold", rm.threshold},
                         {"max_tv", rm.max_tv},
                         {"pass", rm.pass}};
        pass = pass && rm.pass;
    }
    emit(doc.dump(2), flags.out);
    if (report.inconclusive) return kExitInconclusive;
    return pass ? kExitOk : kExitFailure;
}

int cmd_witness(const CommonFlags& flags) {
    const WitnessReport report = ambiguity_witness(
        flags.params.num_databases, flags.params.num_byzantine,
        flags.params.num_messages, flags.params.field_modulus, flags.seed);
    const json doc{{"n", report.num_databases},
                   {"b", report.num_byzantine},
                   {"k", report.num_messages},
                   {"field", report.field_modulus},
                   {"world_a", json::parse(report.world_a_transcript)},
                   {"world_b", json::parse(report.world_b_transcript)},
                   {"identical", report.identical}};
    emit(doc.dump(2), flags.out);
    return report.identical ? kExitOk : kExitFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-round byzantine private information retrieval simulator"};
    app.require_subcommand(1);
    app.footer("Every subcommand also accepts --config <file> holding key=value lines\n"
               "with the same keys as the long flags; explicit flags override the file.");
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    CommonFlags flags; // capacity, simulate and sweep defaults
    flags.params.num_databases = 6;
    flags.params.num_messages = 2;
    flags.params.num_byzantine = 2;
    flags.params.blocks = 100;

    CommonFlags audit_flags; // the audit's documented tiny parameters
    audit_flags.params.num_databases = 3;
    audit_flags.params.num_messages = 2;
    audit_flags.params.num_byzantine = 1;
    audit_flags.params.blocks = 1;
    audit_flags.params.field_modulus = 5;

    CommonFlags witness_flags; // a byzantine-majority example
    witness_flags.params.num_databases = 2;
    witness_flags.params.num_messages = 1;
    witness_flags.params.num_byzantine = 1;
    witness_flags.params.field_modulus = 5;

    std::string formula = "byz-multi";
    auto* cap = app.add_subcommand("capacity", "evaluate a closed-form capacity");
    add_param_options(cap, flags);
    cap->add_option("--formula", formula, "classic | robust | byz-single | byz-multi");

    std::string strategy = "no_attack";
    std::string transcript_path;
    auto* sim = app.add_subcommand("simulate", "run one retrieval session");
    add_param_options(sim, flags);
    sim->add_option("--strategy", strategy, "adversary, e.g. worst_case or corrupt_fraction:0.3");
    sim->add_option("--byz", flags.byzantine, "byzantine databases, 1-based csv (default: seeded)");
    sim->add_option("--transcript", transcript_path, "also dump the full transcript JSON here");

    int k_from = 1, k_to = 10;
    std::string grid_path;
    auto* sw = app.add_subcommand("sweep", "emit download-cost comparison rows");
    add_param_options(sw, flags);
    sw->add_option("--k-from", k_from, "first message count");
    sw->add_option("--k-to", k_to, "last message count");
    sw->add_option("--grid", grid_path, "JSON grid file: {\"points\":[{n,b,k|k_from,k_to}...]}");

    long long samples = 100000;
    double threshold = 0.02;
    bool negative_control = false;
    bool roundm = false;
    std::string roundm_strategy = "corrupt_fraction:0.5";
    long long roundm_sessions = 400;
    auto* audit = app.add_subcommand("audit-privacy", "statistical query-privacy audit");
    add_param_options(audit, audit_flags);
    audit->add_option("--samples", samples, "sessions sampled per message index");
    audit->add_option("--threshold", threshold, "total-variation pass threshold");
    audit->add_flag("--negative-control", negative_control,
                    "disable the private mixing (must fail)");
    audit->add_flag("--roundm", roundm, "also audit round >= 2 query distributions");
    audit->add_option("--roundm-strategy", roundm_strategy, "adversary for the round-m audit");
    audit->add_option("--roundm-sessions", roundm_sessions, "sessions for the round-m audit");

    auto* wit = app.add_subcommand("witness", "two-world indistinguishability check (2B+1 > N)");
    add_param_options(wit, witness_flags);

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (cap->parsed()) return cmd_capacity(formula, flags);
        if (sim->parsed()) return cmd_simulate(flags, strategy, transcript_path);
        if (sw->parsed()) return cmd_sweep(flags, k_from, k_to, grid_path);
        if (audit->parsed()) {
            return cmd_audit(audit_flags, samples, threshold, negative_control, roundm,
                             roundm_strategy, roundm_sessions);
        }
        if (wit->parsed()) return cmd_witness(witness_flags);
    } catch (const InternalInconsistency& e) {
        std::cerr << "contract breach: " << e.what() << '\n';
        return kExitFailure;
    } catch (const DecodingFailure& e) {
        std::cerr << "contract breach: " << e.what() << '\n';
        return kExitFailure;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
