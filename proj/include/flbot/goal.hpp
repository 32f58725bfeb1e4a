// goal.hpp - unification goals and ground substitutions.
//
// A goal is a list of possible subsumptions E <=? F where E is a particle
// set (may mention variables) and F is a single particle.  Equivalence
// lines are sugar for two subsumptions; a conjunction on the right of a
// subsumption expands into one entry per particle.

#ifndef FLBOT_GOAL_HPP
#define FLBOT_GOAL_HPP

#include <map>
#include <string>
#include <vector>

#include "flbot/concepts.hpp"

namespace flbot {

struct GoalSubsumption {
    ParticleSet lhs;
    Particle rhs;

    friend bool operator==(const GoalSubsumption&, const GoalSubsumption&) =
        default;
};

struct Goal {
    Alphabet alphabet;
    std::vector<GoalSubsumption> subsumptions;
    std::vector<Sym> declaredVariables;  // order of the vars: line

    // Role / constant ids occurring in the subsumptions, sorted.
    std::vector<Sym> occurringRoles() const;
    std::vector<Sym> occurringConstants() const;
    std::vector<Sym> occurringVariables() const;  // declaration order
};

// Ground substitution; unmapped variables denote top (the empty set).
struct Substitution {
    std::map<Sym, ParticleSet> images;

    const ParticleSet& image(Sym var) const;
    friend bool operator==(const Substitution&, const Substitution&) = default;
};

// Goal file format (line oriented, '#' starts a comment):
//   vars: X, Y          (required, list may be empty)
//   roles: r, s         (optional)
//   <concept> <= <concept>
//   <concept> == <concept>
Goal parse_goal(const std::string& text);

// One subgoal per occurring constant: all other constants are replaced
// by top and both sides re-reduced; subsumptions whose right side
// vanishes are dropped.  Goals with at most one constant come back as a
// single-element list.
std::vector<Goal> split_by_constant(const Goal& goal);

// Replaces every variable-headed particle all v.X by the v-prefixed
// image of X and reduces.  The substitution must be ground.
ParticleSet apply_substitution(const Substitution& sigma,
                               const ParticleSet& s);

// True when every goal subsumption holds under sigma.
bool verify_unifier(const Goal& goal, const Substitution& sigma);

// Per-variable union of images, reduced.
Substitution merge_substitutions(const std::vector<Substitution>& parts);

// Substitution file: lines "X := <concept>"; unlisted variables mean top.
// Images must be ground and each X a declared variable.  The alphabet is
// extended by roles and constants that appear only in images.
Substitution parse_substitution(const std::string& text, Alphabet& alphabet);
std::string render_substitution(const Substitution& sigma, const Goal& goal);

std::string render(const GoalSubsumption& gs, const Alphabet& alphabet);

}  // namespace flbot

#endif  // FLBOT_GOAL_HPP
