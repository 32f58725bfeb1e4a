// engine.hpp - the decision driver.
//
// Splits the goal by constant, searches guess branches per subgoal, and
// combines stage 1 (normalization), stage 2 (shortcuts) and witness
// construction into one verdict with a merged witness on success.

#ifndef FLBOT_ENGINE_HPP
#define FLBOT_ENGINE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flbot/unifier.hpp"

namespace flbot {

struct EngineOptions {
    ExecMode mode = ExecMode::Parallel;
    std::uint64_t maxBranches = 1000000;
    StoreLimits storeLimits;
};

// Evidence kept per subgoal for inspection and property tests.
struct SubgoalEvidence {
    Substitution fullWitness;  // includes decomposition variables
    NormalizedGoal ng;         // the succeeding branch
    bool usedShortcutStage = false;
    std::vector<ConstructionStep> trace;
    std::size_t storeSize = 0;       // stored shortcuts (for depth bound)
    std::size_t witnessDepth = 0;
};

struct UnifyOutcome {
    bool unifiable = false;
    Substitution witness;  // restricted to the goal's declared variables
    std::vector<SubgoalEvidence> evidence;
    std::uint64_t branchesTried = 0;
    // Set when witness construction failed its own checks; the verdict
    // stands, the witness may be missing pieces.
    std::optional<std::string> defect;
    // Last computed store of the last subgoal that reached stage 2,
    // for the --dump-shortcuts debug interface.
    std::optional<MainResult> lastStore;
};

UnifyOutcome decide_unification(const Goal& goal, const EngineOptions& opts = {});

// Exhaustive branch walk (testing hook): calls fn once per completed
// branch of the subgoal and returns the branch count.
std::uint64_t for_each_branch(
    const Goal& subgoal,
    const std::function<void(const NormResult&, const Branch&)>& fn,
    std::uint64_t maxBranches = 1000000);

}  // namespace flbot

#endif  // FLBOT_ENGINE_HPP
