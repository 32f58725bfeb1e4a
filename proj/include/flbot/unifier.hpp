// unifier.hpp - witness extraction.
//
// Two constructions: the closure over the decomposition registry when no
// flat subsumptions remain, and the staged particle creation over the
// shortcut graph otherwise.  Both return ground reduced substitutions
// that satisfy the normalized goal and the decreasing rule; construction
// verifies this before returning and treats a violation as an engine
// defect (the decision verdict is unaffected).

#ifndef FLBOT_UNIFIER_HPP
#define FLBOT_UNIFIER_HPP

#include <string>
#include <vector>

#include "flbot/shortcuts.hpp"

namespace flbot {

// Decreasing rule: for every registered X^r and every particle all r.P
// in sigma(X), P lies in sigma(X^r) (membership up to reduction).
bool check_decreasing_rule(const Substitution& sigma,
                           const Registry& registry);

// Closure construction for an empty set of flat subsumptions: bottom and
// constant guesses seed the images, then every image absorbs the
// role-prefixed image of its decomposition variables until stable.
Substitution build_trivial_unifier(const NormalizedGoal& ng);

struct ConstructionStep {
    int step;
    Shortcut shortcut;
    Particle particle;
};

struct ConstructionResult {
    Substitution sigma;  // over all non-top variables of the branch
    std::vector<ConstructionStep> trace;
    std::size_t maxDepth = 0;
};

// Builds a witness from a successful main decision: bottom is created in
// the initial bottom shortcut and the constant in the chosen initial
// shortcut for A; active particles are deactivated along surviving
// resolve edges (lowest stage first) and prefix obligations are
// discharged through dependency edges, creating bottom prefixes on
// demand.  Throws EngineDefect when the result fails its own checks.
ConstructionResult construct_unifier(const NormalizedGoal& ng,
                                     const MainResult& decision);

std::string traceToJsonLines(const std::vector<ConstructionStep>& trace,
                             const Alphabet& alphabet);

}  // namespace flbot

#endif  // FLBOT_UNIFIER_HPP
