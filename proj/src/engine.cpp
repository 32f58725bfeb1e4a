#include "flbot/engine.hpp"

namespace flbot {

namespace {

// All-top substitution; the empty map already means top everywhere.
Substitution allTop() { return {}; }

struct BranchSearch {
    const Goal& subgoal;
    const EngineOptions& opts;
    std::uint64_t* branches;
    std::optional<MainResult>* lastStore;

    // Runs the guess search; true with evidence on the first branch that
    // yields a witness, false when every branch fails.
    bool run(SubgoalEvidence& out) {
        bool hasConstant = !subgoal.occurringConstants().empty();
        Branch branch(hasConstant);
        for (;;) {
            if (++*branches > opts.maxBranches) {
                throw ResourceLimitError("branch cap exceeded");
            }
            NormResult nr = normalize_goal(subgoal, branch);
            if (attempt(nr, out)) return true;
            if (!branch.advance()) return false;
        }
    }

    bool attempt(const NormResult& nr, SubgoalEvidence& out) {
        if (nr.status == NormStatus::Failure) return false;
        if (nr.status == NormStatus::Success) {
            out.fullWitness = build_trivial_unifier(nr.ng);
            out.ng = nr.ng;
            return true;
        }
        // A normalized goal without start subsumptions is solved by the
        // all-top substitution.
        if (nr.ng.startEmpty()) {
            out.fullWitness = allTop();
            out.ng = nr.ng;
            return true;
        }
        MainResult md = main_decision(nr.ng, opts.mode, opts.storeLimits);
        *lastStore = md;
        if (!md.success) return false;
        out.ng = nr.ng;
        out.usedShortcutStage = true;
        out.storeSize = md.store.items.size();
        ConstructionResult cr = construct_unifier(nr.ng, md);
        out.fullWitness = std::move(cr.sigma);
        out.trace = std::move(cr.trace);
        out.witnessDepth = cr.maxDepth;
        return true;
    }
};

}  // namespace

UnifyOutcome decide_unification(const Goal& goal, const EngineOptions& opts) {
    UnifyOutcome outcome;
    std::vector<Substitution> parts;
    for (const Goal& subgoal : split_by_constant(goal)) {
        SubgoalEvidence evidence;
        BranchSearch search{subgoal, opts, &outcome.branchesTried,
                            &outcome.lastStore};
        bool ok = false;
        try {
            ok = search.run(evidence);
        } catch (const EngineDefect& e) {
            // Construction failed its own checks; the decision stands.
            outcome.defect = e.what();
            ok = true;
        }
        if (!ok) return outcome;  // some subgoal has no unifiable branch
        parts.push_back(evidence.fullWitness);
        outcome.evidence.push_back(std::move(evidence));
    }
    outcome.unifiable = true;
    Substitution merged = merge_substitutions(parts);
    // The public witness speaks only about the goal's own variables.
    for (Sym v : goal.declaredVariables) {
        auto it = merged.images.find(v);
        if (it != merged.images.end() && !it->second.empty()) {
            outcome.witness.images[v] = it->second;
        }
    }
    if (!outcome.defect && !verify_unifier(goal, outcome.witness)) {
        outcome.defect = "merged witness failed verification";
    }
    return outcome;
}

std::uint64_t for_each_branch(
    const Goal& subgoal,
    const std::function<void(const NormResult&, const Branch&)>& fn,
    std::uint64_t maxBranches) {
    bool hasConstant = !subgoal.occurringConstants().empty();
    Branch branch(hasConstant);
    std::uint64_t count = 0;
    for (;;) {
        if (++count > maxBranches) {
            throw ResourceLimitError("branch cap exceeded");
        }
        NormResult nr = normalize_goal(subgoal, branch);
        fn(nr, branch);
        if (!branch.advance()) return count;
    }
}

}  // namespace flbot
