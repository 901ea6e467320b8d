// Command-line front end: validate models, evaluate causal formulas,
// decide and enumerate actual causes, extract active processes, export
// the causal network, and replay the built-in regression corpus.
//
// Exit codes: 0 success (verdicts are conveyed in the output, never via
// the exit code), 1 usage error, 2 validation/input failure, 3 resource
// guard abort. `regress` exits 1 when any row mismatches.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "causelab/compile.hpp"
#include "causelab/corpus.hpp"
#include "causelab/dot.hpp"
#include "causelab/engine.hpp"
#include "causelab/formula.hpp"
#include "causelab/oracle.hpp"
#include "causelab/parse.hpp"
#include "causelab/verdict_io.hpp"

namespace {

using nlohmann::ordered_json;

struct ModelSource {
    causelab::CausalModel model;
    std::optional<causelab::Context> default_context;
    std::optional<causelab::RankingFunction> default_ranking;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw causelab::input_error("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// `@name` loads a corpus entry (bringing its canonical context and
/// ranking along as defaults); anything else is a model file path.
ModelSource load_model(const std::string& spec) {
    ModelSource src;
    if (!spec.empty() && spec[0] == '@') {
        const auto& entry = causelab::corpus::load_example(spec.substr(1));
        src.model = entry.model;
        src.default_context = entry.context;
        src.default_ranking = entry.ranking;
        return src;
    }
    const std::string text = read_file(spec);
    try {
        src.model = causelab::parse_model(text);
    } catch (const causelab::parse_error& e) {
        throw causelab::model_error("model file '" + spec + "': " + e.what());
    }
    return src;
}

causelab::Context resolve_context(const std::string& context_arg, const ModelSource& src) {
    if (!context_arg.empty()) return causelab::parse_context(context_arg);
    if (src.default_context) return *src.default_context;
    if (src.model.signature.exogenous.empty()) return causelab::Context{};
    throw causelab::input_error("a context is required (pass -c \"VAR=val,...\")");
}

void require_valid(const causelab::CausalModel& m) {
    causelab::ValidationReport rep = causelab::validate_model(m);
    if (!rep.ok())
        throw causelab::model_error("model '" + m.name + "' is invalid: " + rep.summary());
}

std::string candidate_text(const causelab::CauseCandidate& cand) {
    std::string s;
    for (const auto& [k, v] : cand.conjuncts) {
        if (!s.empty()) s += " & ";
        s += k + "=" + v;
    }
    return s;
}

ordered_json finding_json(const causelab::Finding& f) {
    return ordered_json{{"kind", causelab::to_string(f.kind)},
                        {"variable", f.variable},
                        {"message", f.message}};
}

int cmd_validate(const std::string& model_arg, bool json) {
    ModelSource src = load_model(model_arg);
    causelab::ValidationReport rep = causelab::validate_model(src.model);
    if (json) {
        ordered_json j;
        j["model"] = src.model.name;
        j["ok"] = rep.ok();
        j["findings"] = ordered_json::array();
        for (const auto& f : rep.findings) j["findings"].push_back(finding_json(f));
        j["warnings"] = ordered_json::array();
        for (const auto& f : rep.warnings) j["warnings"].push_back(finding_json(f));
        std::cout << j.dump(2) << "\n";
    } else {
        for (const auto& f : rep.findings)
            std::cout << "finding  " << causelab::to_string(f.kind) << "  [" << f.variable
                      << "]: " << f.message << "\n";
        for (const auto& f : rep.warnings)
            std::cout << "warning  " << causelab::to_string(f.kind) << "  [" << f.variable
                      << "]: " << f.message << "\n";
        std::cout << "model '" << src.model.name << "': "
                  << (rep.ok() ? "ok" : std::to_string(rep.findings.size()) + " finding(s)")
                  << ", " << rep.warnings.size() << " warning(s)\n";
    }
    return rep.ok() ? 0 : 2;
}

int cmd_eval(const std::string& model_arg, const std::string& context_arg,
             const std::string& formula_arg, bool json) {
    ModelSource src = load_model(model_arg);
    require_valid(src.model);
    causelab::Context ctx = resolve_context(context_arg, src);
    causelab::CausalFormulaPtr psi = causelab::parse_causal_formula(formula_arg);
    const bool holds = causelab::satisfies(src.model, ctx, psi);
    if (json) {
        ordered_json j;
        j["formula"] = causelab::to_string(*psi);
        j["holds"] = holds;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << (holds ? "true" : "false") << "\n";
    }
    return 0;
}

int cmd_cause(const std::string& model_arg, const std::string& context_arg,
              const std::string& cand_arg, const std::string& phi_arg,
              const std::string& rank_arg, const std::string& ranking_path,
              const causelab::CauseOptions& opt, bool json) {
    ModelSource src = load_model(model_arg);
    require_valid(src.model);
    causelab::Context ctx = resolve_context(context_arg, src);
    causelab::CauseCandidate cand{causelab::parse_assignments(cand_arg, '&')};
    causelab::EventFormulaPtr phi = causelab::parse_event_formula(phi_arg);

    causelab::Verdict v;
    if (!rank_arg.empty()) {
        causelab::Rank k = causelab::parse_rank(rank_arg);
        causelab::RankingFunction rf;
        if (!ranking_path.empty()) {
            try {
                rf = causelab::parse_ranking(read_file(ranking_path));
            } catch (const causelab::parse_error& e) {
                throw causelab::input_error("ranking file '" + ranking_path + "': " + e.what());
            }
        } else if (src.default_ranking) {
            rf = *src.default_ranking;
        }
        v = causelab::is_cause_at_rank(src.model, ctx, rf, k, cand, phi, opt);
    } else {
        v = causelab::is_actual_cause(src.model, ctx, cand, phi, opt);
    }

    if (json) {
        std::cout << causelab::verdict_to_json(v).dump(2) << "\n";
    } else {
        std::cout << "query: cause " << candidate_text(cand) << " of "
                  << causelab::to_string(*phi) << "\n";
        std::cout << causelab::render_verdict_text(v);
    }
    return 0;
}

int cmd_enumerate(const std::string& model_arg, const std::string& context_arg,
                  const std::string& phi_arg, causelab::CauseOptions opt, bool verify_singleton,
                  bool json) {
    ModelSource src = load_model(model_arg);
    require_valid(src.model);
    causelab::Context ctx = resolve_context(context_arg, src);
    causelab::EventFormulaPtr phi = causelab::parse_event_formula(phi_arg);
    if (verify_singleton) opt.max_conjuncts = src.model.signature.endogenous.size();

    auto causes = causelab::enumerate_causes(src.model, ctx, phi, opt);
    if (json) {
        ordered_json arr = ordered_json::array();
        for (const auto& [cand, witness] : causes) {
            ordered_json j;
            j["candidate"] = causelab::detail::assignment_json(cand.conjuncts);
            j["witness"] = causelab::witness_to_json(witness);
            arr.push_back(std::move(j));
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        for (const auto& [cand, witness] : causes)
            std::cout << candidate_text(cand) << "  [W = " << causelab::detail::braces(witness.w_set)
                      << ", w' = " << causelab::detail::braces(witness.w_prime) << "]\n";
        std::cout << causes.size() << " cause(s) of " << causelab::to_string(*phi) << "\n";
    }
    return 0;
}

int cmd_process(const std::string& model_arg, const std::string& context_arg,
                const std::string& cand_arg, const std::string& phi_arg,
                const causelab::CauseOptions& opt, bool json) {
    ModelSource src = load_model(model_arg);
    require_valid(src.model);
    causelab::Context ctx = resolve_context(context_arg, src);
    causelab::CauseCandidate cand{causelab::parse_assignments(cand_arg, '&')};
    causelab::EventFormulaPtr phi = causelab::parse_event_formula(phi_arg);

    auto processes = causelab::active_processes(src.model, ctx, cand, phi, opt);
    if (json) {
        ordered_json arr = ordered_json::array();
        for (const auto& z : processes) arr.push_back(z);
        std::cout << arr.dump(2) << "\n";
    } else {
        for (const auto& z : processes) std::cout << causelab::detail::braces(z) << "\n";
        std::cout << processes.size() << " active process(es)\n";
    }
    return 0;
}

int cmd_examples(bool json) {
    if (json) {
        ordered_json arr = ordered_json::array();
        for (const auto& name : causelab::corpus::example_names()) {
            const auto& e = causelab::corpus::load_example(name);
            ordered_json j;
            j["name"] = e.name;
            j["variables"] = e.model.signature.exogenous.size() +
                             e.model.signature.endogenous.size();
            j["context"] = e.context_text;
            j["ranking"] = e.ranking.has_value();
            j["queries"] = e.expected.size();
            arr.push_back(std::move(j));
        }
        std::cout << arr.dump(2) << "\n";
    } else {
        for (const auto& name : causelab::corpus::example_names()) {
            const auto& e = causelab::corpus::load_example(name);
            std::cout << e.name << "  (" << e.model.signature.endogenous.size()
                      << " endogenous, context " << e.context_text << ", " << e.expected.size()
                      << (e.expected.size() == 1 ? " query" : " queries")
                      << (e.ranking ? ", ranked" : "") << ")\n";
        }
    }
    return 0;
}

int cmd_regress(const causelab::CauseOptions& opt, bool json) {
    std::size_t matched = 0;
    ordered_json rows = ordered_json::array();
    std::ostringstream text;
    const auto table = causelab::corpus::verdict_table();
    for (const auto& row : table) {
        const auto& e = causelab::corpus::load_example(row.example);
        auto q = causelab::corpus::parse_query(row.query);
        const bool actual = causelab::corpus::run_query(e, q, opt);
        const bool match = actual == row.expected;
        if (match) ++matched;
        if (json) {
            ordered_json j;
            j["example"] = row.example;
            j["query"] = row.query;
            j["expected"] = row.expected;
            j["actual"] = actual;
            j["match"] = match;
            j["locus"] = row.locus;
            rows.push_back(std::move(j));
        } else {
            text << (match ? "ok   " : "FAIL ") << row.example << "  " << row.query
                 << "  expected=" << (row.expected ? "true" : "false") << "\n";
        }
    }
    if (json) {
        ordered_json j;
        j["rows"] = std::move(rows);
        j["total"] = table.size();
        j["matched"] = matched;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text.str() << matched << "/" << table.size() << " rows match\n";
    }
    return matched == table.size() ? 0 : 1;
}

int cmd_export_dot(const std::string& model_arg, const std::string& out_path) {
    ModelSource src = load_model(model_arg);
    const std::string dot = causelab::export_dot(src.model);
    if (out_path.empty()) {
        std::cout << dot;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw causelab::input_error("cannot write file '" + out_path + "'");
        out << dot;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite structural causal models: counterfactual evaluation and actual-cause queries"};
    app.require_subcommand(1);

    std::string model_arg, context_arg, cand_arg, phi_arg, formula_arg;
    std::string rank_arg, ranking_path, out_path;
    bool json = false, forbid_trivial = false, witness_all = false, verify_singleton = false;
    std::uint64_t guard = causelab::CauseOptions{}.guard;
    std::size_t max_size = 1;

    auto add_model = [&](CLI::App* cmd, bool required = true) {
        auto* o = cmd->add_option("-m,--model", model_arg, "model file path or @corpus-name");
        if (required) o->required();
    };
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_flag("--json", json, "machine-readable output");
    };

    auto* validate = app.add_subcommand("validate", "check every model invariant");
    add_model(validate);
    add_common(validate);

    auto* eval = app.add_subcommand("eval", "evaluate a causal formula in a context");
    add_model(eval);
    eval->add_option("-c,--context", context_arg, "context assignment \"VAR=val,...\"");
    eval->add_option("-f,--formula", formula_arg, "causal formula, e.g. \"[ML2<-0](FB=1)\"")
        ->required();
    add_common(eval);

    auto* cause = app.add_subcommand("cause", "decide whether a conjunction is an actual cause");
    add_model(cause);
    cause->add_option("-c,--context", context_arg, "context assignment \"VAR=val,...\"");
    cause->add_option("-x,--cause", cand_arg, "candidate conjunction \"VAR=val&...\"")->required();
    cause->add_option("-p,--phi", phi_arg, "outcome event formula")->required();
    cause->add_option("--rank", rank_arg, "rank bound (natural number or 'inf')");
    cause->add_option("--ranking", ranking_path, "ranking file (world TAB rank per line)");
    cause->add_flag("--forbid-trivial", forbid_trivial, "reject trivial self-causation");
    cause->add_flag("--witness-all", witness_all, "collect every witness");
    cause->add_option("--guard", guard, "witness search space ceiling");
    add_common(cause);

    auto* enumerate = app.add_subcommand("enumerate", "list all actual causes of an outcome");
    add_model(enumerate);
    enumerate->add_option("-c,--context", context_arg, "context assignment");
    enumerate->add_option("-p,--phi", phi_arg, "outcome event formula")->required();
    enumerate->add_option("--max-size", max_size, "largest conjunction size to try");
    enumerate->add_flag("--verify-singleton", verify_singleton,
                        "sweep every conjunction size up to |V|");
    enumerate->add_flag("--forbid-trivial", forbid_trivial, "reject trivial self-causation");
    enumerate->add_option("--guard", guard, "witness search space ceiling");
    add_common(enumerate);

    auto* process = app.add_subcommand("process", "minimal active causal processes of a cause");
    add_model(process);
    process->add_option("-c,--context", context_arg, "context assignment");
    process->add_option("-x,--cause", cand_arg, "candidate conjunction")->required();
    process->add_option("-p,--phi", phi_arg, "outcome event formula")->required();
    process->add_option("--guard", guard, "witness search space ceiling");
    add_common(process);

    auto* examples = app.add_subcommand("examples", "list the built-in scenario corpus");
    add_common(examples);

    auto* regress = app.add_subcommand("regress", "replay every corpus verdict");
    regress->add_option("--guard", guard, "witness search space ceiling");
    add_common(regress);

    auto* export_dot = app.add_subcommand("export-dot", "write the causal network in DOT");
    add_model(export_dot);
    export_dot->add_option("-o,--output", out_path, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return 1;
    }

    causelab::CauseOptions opt;
    opt.forbid_trivial = forbid_trivial;
    opt.witness_all = witness_all;
    opt.guard = guard;
    opt.max_conjuncts = max_size;

    try {
        if (validate->parsed()) return cmd_validate(model_arg, json);
        if (eval->parsed()) return cmd_eval(model_arg, context_arg, formula_arg, json);
        if (cause->parsed())
            return cmd_cause(model_arg, context_arg, cand_arg, phi_arg, rank_arg, ranking_path,
                             opt, json);
        if (enumerate->parsed())
            return cmd_enumerate(model_arg, context_arg, phi_arg, opt, verify_singleton, json);
        if (process->parsed())
            return cmd_process(model_arg, context_arg, cand_arg, phi_arg, opt, json);
        if (examples->parsed()) return cmd_examples(json);
        if (regress->parsed()) return cmd_regress(opt, json);
        if (export_dot->parsed()) return cmd_export_dot(model_arg, out_path);
    } catch (const causelab::guard_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const causelab::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const causelab::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
