// factcheck: label a claim triple TRUE/FALSE/UNDECIDED against a knowledge
// graph using weighted Horn rules, KG evidence and an optional external
// oracle, and print the rules and facts that justify the verdict.
//
// Exit codes: 0 decided, 3 undecided, 1 usage error, 2 data error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "factcheck/eval.hpp"
#include "factcheck/pipeline.hpp"
#include "factcheck/report.hpp"

namespace {

constexpr int kExitDecided = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitUndecided = 3;

struct CliConfig {
    std::string kg_path;
    std::string rules_path;
    std::string mode = "map";
    std::string provider = "none";
    std::string format = "text";
    std::uint64_t seed = 1;
    std::size_t search_bound = 24;
    std::size_t jobs = 1;
    double http_timeout = 5.0;
    bool probability = false;
    bool normalize_spaces = false;
    std::string dump_program;
};

factcheck::Mode parse_mode(const std::string& mode) {
    if (mode == "pure-asp") return factcheck::Mode::PureAsp;
    if (mode == "map") return factcheck::Mode::Map;
    if (mode == "map+web") return factcheck::Mode::MapWeb;
    throw CLI::ValidationError("--mode", "must be one of pure-asp, map, map+web");
}

factcheck::ConfigEcho config_echo(const CliConfig& config) {
    return {
        {"kg", config.kg_path},
        {"rules", config.rules_path},
        {"mode", config.mode},
        {"provider", config.provider},
        {"seed", std::to_string(config.seed)},
        {"search_bound", std::to_string(config.search_bound)},
        {"format", config.format},
    };
}

struct LoadedEngine {
    factcheck::TripleStore store;
    factcheck::RuleSet rules;
    std::unique_ptr<factcheck::EvidenceProvider> backend;
    std::unique_ptr<factcheck::CachingProvider> provider;
};

// Loads KG and rules, wires the provider; prints diagnostics to stderr.
// Throws factcheck::Error (exit 2) on unusable inputs.
LoadedEngine load_engine(const CliConfig& config) {
    LoadedEngine engine;

    factcheck::LoadReport report;
    factcheck::LoadOptions load_options;
    load_options.spaces_to_underscores = config.normalize_spaces;
    engine.store = factcheck::load_triples_file(config.kg_path, report, load_options);
    for (const auto& bad : report.bad)
        std::cerr << config.kg_path << ":" << bad.line << ": skipped: " << bad.reason << "\n";
    if (!report.bad.empty())
        std::cerr << config.kg_path << ": " << report.bad.size() << " malformed record(s) skipped\n";

    auto parsed = factcheck::parse_rules_file(config.rules_path);
    if (!parsed.clean()) {
        for (const auto& d : parsed.diagnostics)
            std::cerr << config.rules_path << ":" << d.line << ":" << d.column << ": " << d.kind
                      << ": " << d.message << "\n";
        throw factcheck::Error("rule file has " + std::to_string(parsed.diagnostics.size()) +
                               " rejected line(s)");
    }
    engine.rules = std::move(parsed.ruleset);
    std::vector<std::string> notes;
    engine.rules.complete_constraints(engine.store, &notes);
    for (const auto& note : notes) std::cerr << "note: " << note << "\n";

    if (config.provider != "none") {
        if (config.provider.rfind("file:", 0) == 0) {
            engine.backend = std::make_unique<factcheck::FileStubProvider>(
                factcheck::FileStubProvider::load_file(config.provider.substr(5)));
        } else if (config.provider.rfind("http:", 0) == 0 ||
                   config.provider.rfind("https:", 0) == 0) {
            engine.backend =
                std::make_unique<factcheck::HttpProvider>(config.provider, config.http_timeout);
        } else {
            throw factcheck::Error("unknown provider '" + config.provider +
                                   "' (use none, file:<path> or http://...)");
        }
        engine.provider = std::make_unique<factcheck::CachingProvider>(*engine.backend);
    }
    return engine;
}

factcheck::CheckContext make_context(const LoadedEngine& engine, const CliConfig& config) {
    factcheck::CheckContext context;
    context.store = &engine.store;
    context.rules = &engine.rules;
    context.provider = engine.provider.get();
    context.inference.search_bound = config.search_bound;
    context.compute_probability = config.probability;
    return context;
}

int cmd_check(const CliConfig& config, const std::string& claim_text) {
    factcheck::Mode mode = parse_mode(config.mode);
    if (mode == factcheck::Mode::MapWeb && config.provider == "none") {
        std::cerr << "error: --mode map+web requires --provider\n";
        return kExitUsage;
    }

    factcheck::Claim claim;
    try {
        claim = factcheck::parse_claim(claim_text);
    } catch (const factcheck::ParseError& e) {
        std::cerr << "error: cannot parse claim '" << claim_text << "': " << e.what() << "\n";
        return kExitUsage;
    }

    LoadedEngine engine;
    try {
        engine = load_engine(config);
    } catch (const factcheck::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }

    if (!engine.rules.knows_predicate(claim.triple.predicate)) {
        std::cerr << "error: unknown predicate '" << claim.triple.predicate
                  << "': no rule concludes it\n";
        return kExitUsage;
    }

    factcheck::CheckOutcome outcome;
    try {
        outcome = factcheck::check_claim(make_context(engine, config), claim, mode);
    } catch (const factcheck::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }

    if (!config.dump_program.empty()) {
        std::ofstream dump(config.dump_program);
        if (!dump) {
            std::cerr << "error: cannot write " << config.dump_program << "\n";
            return kExitData;
        }
        factcheck::serialize_ground_program(outcome.program, dump);
    }

    if (config.format == "json")
        std::cout << factcheck::verdict_to_json(outcome.verdict, claim, config_echo(config)).dump(2)
                  << "\n";
    else
        factcheck::render_verdict_text(outcome.verdict, claim, std::cout);

    return outcome.verdict.label == factcheck::Label::Undecided ? kExitUndecided : kExitDecided;
}

int cmd_eval(const CliConfig& config, const std::string& dataset_path, const std::string& out_path) {
    factcheck::Mode mode = parse_mode(config.mode);
    if (mode == factcheck::Mode::MapWeb && config.provider == "none") {
        std::cerr << "error: --mode map+web requires --provider\n";
        return kExitUsage;
    }

    LoadedEngine engine;
    std::vector<factcheck::LabeledClaim> claims;
    try {
        engine = load_engine(config);
        std::ifstream in(dataset_path);
        if (!in) throw factcheck::Error("cannot open " + dataset_path);
        factcheck::LoadReport report;
        claims = factcheck::load_dataset_tsv(in, report);
        for (const auto& bad : report.bad)
            std::cerr << dataset_path << ":" << bad.line << ": skipped: " << bad.reason << "\n";
    } catch (const factcheck::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }

    factcheck::EvalResult result =
        factcheck::evaluate(claims, mode, make_context(engine, config), config.jobs);

    factcheck::Json json = factcheck::eval_result_to_json(result, mode, config_echo(config));
    if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot write " << out_path << "\n";
            return kExitData;
        }
        out << json.dump(2) << "\n";
    }
    if (config.format == "json")
        std::cout << json.dump(2) << "\n";
    else
        factcheck::render_eval_table(result, mode, std::cout);
    return kExitDecided;
}

int cmd_gen_dataset(const CliConfig& config, const std::string& predicate, std::size_t n_true,
                    std::size_t n_false, const std::string& out_path) {
    LoadedEngine engine;
    try {
        engine = load_engine(config);
    } catch (const factcheck::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }

    factcheck::Dataset dataset;
    try {
        dataset = factcheck::build_dataset(predicate, engine.store, n_true, n_false, config.seed);
    } catch (const factcheck::InsufficientCandidatesError& e) {
        std::cerr << "error: " << e.what() << " (achievable: " << e.available() << ")\n";
        return kExitData;
    } catch (const factcheck::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "error: cannot write " << out_path << "\n";
        return kExitData;
    }
    factcheck::save_dataset_tsv(dataset.claims, out);

    std::string store_path = out_path + ".kg.tsv";
    std::ofstream store_out(store_path);
    if (!store_out) {
        std::cerr << "error: cannot write " << store_path << "\n";
        return kExitData;
    }
    factcheck::serialize_tsv(engine.store, store_out);
    std::cerr << "wrote " << dataset.claims.size() << " claims to " << out_path
              << " and the reduced graph to " << store_path << "\n";
    return kExitDecided;
}

int cmd_rules(const CliConfig& config) {
    try {
        auto parsed = factcheck::parse_rules_file(config.rules_path);
        if (!parsed.clean()) {
            for (const auto& d : parsed.diagnostics)
                std::cerr << config.rules_path << ":" << d.line << ":" << d.column << ": " << d.kind
                          << ": " << d.message << "\n";
            return kExitData;
        }
        std::cout << factcheck::ruleset_to_json(parsed.ruleset).dump(2) << "\n";
        return kExitDecided;
    } catch (const factcheck::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rule-based fact checking against a knowledge graph"};
    app.require_subcommand(1);

    CliConfig config;
    auto add_common = [&](CLI::App* cmd, bool needs_kg) {
        cmd->add_option("--rules", config.rules_path, "rule file")
            ->envname("FC_RULES")
            ->required();
        auto* kg = cmd->add_option("--kg", config.kg_path, "knowledge graph (.tsv or .nt)")
                       ->envname("FC_KG");
        if (needs_kg) kg->required();
        cmd->add_option("--mode", config.mode, "pure-asp | map | map+web")->envname("FC_MODE");
        cmd->add_option("--provider", config.provider, "none | file:<path> | http://host:port/path")
            ->envname("FC_PROVIDER");
        cmd->add_option("--seed", config.seed, "RNG seed")->envname("FC_SEED");
        cmd->add_option("--search-bound", config.search_bound,
                        "max decision atoms for exact inference")
            ->envname("FC_SEARCH_BOUND")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--format", config.format, "text | json")->envname("FC_FORMAT");
        cmd->add_option("--http-timeout", config.http_timeout, "provider timeout in seconds")
            ->envname("FC_HTTP_TIMEOUT");
        cmd->add_flag("--probability", config.probability,
                      "compute the normalized claim probability (exact enumeration)");
        cmd->add_flag("--normalize-underscores", config.normalize_spaces,
                      "turn spaces into underscores while loading the KG");
    };

    std::string claim_text;
    auto* check = app.add_subcommand("check", "check one claim p(subject,object)");
    add_common(check, true);
    check->add_option("claim", claim_text, "claim, e.g. \"author(Cold_Copper_Tears,Glen_Cook)\"")
        ->required();
    check->add_option("--dump-program", config.dump_program,
                      "write the claim-specific ground program to this file");

    std::string dataset_path, report_path;
    auto* eval = app.add_subcommand("eval", "evaluate a labeled claim dataset");
    add_common(eval, true);
    eval->add_option("dataset", dataset_path, "TSV: subject predicate object gold-label")
        ->required();
    eval->add_option("--report", report_path, "write the JSON report here");
    eval->add_option("--jobs", config.jobs, "worker threads for the batch")
        ->check(CLI::PositiveNumber);

    std::string predicate, out_path;
    std::size_t n_true = 0, n_false = 0;
    auto* gen = app.add_subcommand("gen-dataset", "sample a labeled dataset from the KG");
    add_common(gen, true);
    gen->add_option("predicate", predicate, "target predicate")->required();
    gen->add_option("--n-true", n_true, "gold-true claims (removed from the graph)")->required();
    gen->add_option("--n-false", n_false, "gold-false claims")->required();
    gen->add_option("--out", out_path, "dataset output path")->required();

    auto* rules = app.add_subcommand("rules", "parse a rule file and print it as JSON");
    add_common(rules, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (config.format != "text" && config.format != "json") {
        std::cerr << "error: --format must be text or json\n";
        return kExitUsage;
    }

    try {
        if (check->parsed()) return cmd_check(config, claim_text);
        if (eval->parsed()) return cmd_eval(config, dataset_path, report_path);
        if (gen->parsed()) return cmd_gen_dataset(config, predicate, n_true, n_false, out_path);
        if (rules->parsed()) return cmd_rules(config);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
