// flbot - command line front end for the FL-bottom unification engine.
//
// Subcommands:
//   check  <subsumption>         decide one ground subsumption line
//   unify  <goalfile>            decide unifiability, optionally emit a witness
//   verify <goalfile> <subst>    check a substitution against a goal
//   oracle <goalfile>            bounded brute-force search
//
// Exit codes: 0 positive verdict, 1 negative verdict, 2 input or usage
// error, 3 resource cap hit.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "flbot/engine.hpp"
#include "flbot/oracle.hpp"

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitError = 2;
constexpr int kExitResource = 3;

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw flbot::InputError("cannot read file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void writeFile(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw flbot::InputError("cannot write file: " + path);
    out << content;
}

std::string jsonEscape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

void printJson(bool result, const flbot::Goal* goal,
               const flbot::Substitution* witness,
               const std::string& diagnostics) {
    std::cout << "{\"schema\": 1, \"result\": " << (result ? "true" : "false");
    if (witness && goal) {
        std::cout << ", \"witness\": {";
        bool first = true;
        for (flbot::Sym v : goal->declaredVariables) {
            if (!first) std::cout << ", ";
            first = false;
            std::cout << "\"" << goal->alphabet.variableName(v) << "\": \""
                      << jsonEscape(render(witness->image(v), goal->alphabet))
                      << "\"";
        }
        std::cout << "}";
    }
    if (!diagnostics.empty()) {
        std::cout << ", \"diagnostics\": " << diagnostics;
    }
    std::cout << "}\n";
}

int runCheck(const std::string& input, bool json) {
    // The argument is the subsumption text, or a file holding it.
    std::string text = input;
    if (std::ifstream probe(input); probe.good()) text = readFile(input);
    std::string line = text;
    if (auto nl = line.find('\n'); nl != std::string::npos) {
        line = line.substr(0, nl);
    }
    bool equivalence = false;
    auto pos = line.find("<=");
    if (pos == std::string::npos) {
        pos = line.find("==");
        equivalence = true;
    }
    if (pos == std::string::npos) {
        throw flbot::InputError("expected 'C <= D' or 'C == D'");
    }
    flbot::Alphabet alphabet;
    auto lhs = flbot::normalize(
        flbot::parse_concept(line.substr(0, pos), alphabet));
    auto rhs = flbot::normalize(
        flbot::parse_concept(line.substr(pos + 2), alphabet));
    bool result = flbot::subsumes(lhs, rhs) &&
                  (!equivalence || flbot::subsumes(rhs, lhs));
    if (json) {
        printJson(result, nullptr, nullptr, "");
    } else {
        std::cout << (result ? "yes" : "no") << "\n";
    }
    return result ? kExitYes : kExitNo;
}

int runUnify(const std::string& goalPath, const std::string& emitPath,
             const std::string& dumpPrefix, const std::string& tracePath,
             std::uint64_t maxBranches, bool serial, bool json) {
    flbot::Goal goal = flbot::parse_goal(readFile(goalPath));
    flbot::EngineOptions opts;
    opts.mode = serial ? flbot::ExecMode::Serial : flbot::ExecMode::Parallel;
    opts.maxBranches = maxBranches;
    flbot::UnifyOutcome outcome = flbot::decide_unification(goal, opts);

    if (!dumpPrefix.empty() && outcome.lastStore) {
        const auto& mr = *outcome.lastStore;
        writeFile(dumpPrefix + ".json",
                  storeToJson(mr.store, mr.ctx.alphabet) + "\n");
        writeFile(dumpPrefix + ".dot", storeToDot(mr.store, mr.ctx.alphabet));
    }
    if (!tracePath.empty() && outcome.unifiable) {
        std::string lines;
        for (const auto& ev : outcome.evidence) {
            lines += traceToJsonLines(ev.trace, ev.ng.alphabet);
        }
        writeFile(tracePath, lines);
    }
    if (outcome.unifiable && !emitPath.empty()) {
        writeFile(emitPath, render_substitution(outcome.witness, goal));
    }
    if (outcome.defect) {
        std::cerr << "warning: witness construction defect: " << *outcome.defect
                  << "\n";
    }
    std::ostringstream diag;
    diag << "{\"branches\": " << outcome.branchesTried
         << ", \"subgoals\": " << outcome.evidence.size() << "}";
    if (json) {
        printJson(outcome.unifiable, &goal,
                  outcome.unifiable ? &outcome.witness : nullptr, diag.str());
    } else {
        std::cout << (outcome.unifiable ? "UNIFIABLE" : "NOT UNIFIABLE")
                  << "\n";
        if (outcome.unifiable && emitPath.empty()) {
            std::cout << render_substitution(outcome.witness, goal);
        }
    }
    return outcome.unifiable ? kExitYes : kExitNo;
}

int runVerify(const std::string& goalPath, const std::string& substPath,
              const std::string& registryPath, bool json) {
    flbot::Goal goal = flbot::parse_goal(readFile(goalPath));
    flbot::Alphabet alphabet = goal.alphabet;
    flbot::Registry registry;
    if (!registryPath.empty()) {
        registry = flbot::parse_registry(readFile(registryPath), alphabet);
    }
    flbot::Substitution sigma =
        flbot::parse_substitution(readFile(substPath), alphabet);
    bool result = flbot::verify_unifier(goal, sigma);
    if (result && !registryPath.empty()) {
        result = flbot::check_decreasing_rule(sigma, registry);
    }
    if (json) {
        printJson(result, nullptr, nullptr, "");
    } else {
        std::cout << (result ? "accepted" : "rejected") << "\n";
    }
    return result ? kExitYes : kExitNo;
}

int runOracle(const std::string& goalPath, int depth, int width, bool serial,
              bool json) {
    flbot::Goal goal = flbot::parse_goal(readFile(goalPath));
    flbot::OracleBounds bounds{depth, width};
    flbot::OracleResult result = flbot::brute_force_unifiable(
        goal, bounds,
        serial ? flbot::ExecMode::Serial : flbot::ExecMode::Parallel);
    std::ostringstream diag;
    diag << "{\"assignments\": " << result.assignments << "}";
    if (json) {
        printJson(result.found, &goal, result.found ? &result.witness : nullptr,
                  diag.str());
    } else if (result.found) {
        std::cout << "WITNESS\n" << render_substitution(result.witness, goal);
    } else {
        std::cout << "NONE WITHIN BOUNDS\n";
    }
    return result.found ? kExitYes : kExitNo;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Unification in the description logic FL-bottom"};
    app.require_subcommand(1);

    std::string input, emitPath, dumpPrefix, tracePath, substPath, registryPath;
    std::uint64_t maxBranches = 1000000;
    bool serial = false, json = false;
    int depth = 2, width = 2;

    auto* check = app.add_subcommand("check", "decide one ground subsumption");
    check->add_option("subsumption", input,
                      "subsumption text 'C <= D' or a file holding it")
        ->required();
    check->add_flag("--json", json, "JSON output");

    auto* unify = app.add_subcommand("unify", "decide unifiability of a goal");
    unify->add_option("goal", input, "goal file")->required();
    unify->add_option("--emit", emitPath, "write a witness substitution here");
    unify->add_option("--dump-shortcuts", dumpPrefix,
                      "write <prefix>.json and <prefix>.dot store dumps");
    unify->add_option("--trace-construction", tracePath,
                      "write construction steps as JSON lines");
    unify->add_option("--max-branches", maxBranches, "guess search cap");
    unify->add_flag("--serial", serial, "serial reference kernels");
    unify->add_flag("--json", json, "JSON output");

    auto* verify = app.add_subcommand("verify", "check a substitution");
    verify->add_option("goal", input, "goal file")->required();
    verify->add_option("substitution", substPath, "substitution file")
        ->required();
    verify->add_option("--registry", registryPath,
                       "decomposition registry sidecar; also checks the "
                       "decreasing rule");
    verify->add_flag("--json", json, "JSON output");

    auto* oracle = app.add_subcommand("oracle", "bounded brute-force search");
    oracle->add_option("goal", input, "goal file")->required();
    oracle->add_option("--depth", depth, "maximum particle depth");
    oracle->add_option("--width", width, "maximum particles per image");
    oracle->add_flag("--serial", serial, "serial reference kernel");
    oracle->add_flag("--json", json, "JSON output");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return runCheck(input, json);
        if (unify->parsed()) {
            return runUnify(input, emitPath, dumpPrefix, tracePath, maxBranches,
                            serial, json);
        }
        if (verify->parsed()) {
            return runVerify(input, substPath, registryPath, json);
        }
        if (oracle->parsed()) return runOracle(input, depth, width, serial, json);
    } catch (const flbot::ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const flbot::ParseError& e) {
        std::cerr << "parse error at " << e.line << ":" << e.col << ": "
                  << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
