// normalizer.hpp - stage 1 of the decision procedure.
//
// A branch fixes, for every variable it meets, one of the guesses top,
// bottom, or neither (optionally with the flag "image contains the
// constant").  Under a branch the goal is rewritten by an implicit
// solver and a flattening loop until only pure-variable subsumptions
// remain.  Fresh decomposition variables X^r stand for the r-tails of
// the image of X; each one carries an increasing subsumption
// X <=? all r.X^r, and the decreasing side condition (all r.P in the
// image of X forces P into the image of X^r) is enforced later by the
// unifier builder.

#ifndef FLBOT_NORMALIZER_HPP
#define FLBOT_NORMALIZER_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flbot/goal.hpp"

namespace flbot {

enum class GuessKind : std::uint8_t { Top, Bot, Other };

struct Guess {
    GuessKind kind = GuessKind::Other;
    bool aFlag = false;  // only meaningful for Other

    friend bool operator==(const Guess&, const Guess&) = default;
};

// Decomposition-variable registry: one child per (parent, role).
class Registry {
public:
    struct Entry {
        Sym parent;
        Sym role;
        Sym child;
    };

    void add(Sym parent, Sym role, Sym child);
    std::optional<Sym> child(Sym parent, Sym role) const;
    // Entry whose child is v, when v is a decomposition variable.
    std::optional<Entry> ofChild(Sym v) const;
    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<Entry> entries_;
    std::map<std::pair<Sym, Sym>, Sym> byParentRole_;
    std::map<Sym, std::size_t> byChild_;
};

// Flat subsumption X1 and ... and Xn <=? Y, all variables.
struct FlatSubsumption {
    std::vector<Sym> lhs;  // sorted variable ids
    Sym rhs;

    friend bool operator==(const FlatSubsumption&, const FlatSubsumption&) =
        default;
};

struct NormalizedGoal {
    Alphabet alphabet;  // includes decomposition variables of this branch
    std::map<Sym, Guess> guess;
    Registry registry;
    std::vector<FlatSubsumption> flat;
    std::vector<Sym> roles;        // roles occurring in the subgoal, sorted
    Sym constant = kNoSym;         // the subgoal's single constant, if any

    // Start subsumptions are induced by the guesses.
    std::vector<Sym> botVariables() const;  // X <= bot
    std::vector<Sym> aVariables() const;    // X <= A
    bool startEmpty() const;

    std::string toJson() const;  // debug dump
};

// One branch of the guess search.  Guesses are recorded on a trail keyed
// by variable display name; re-running normalization against the same
// trail reproduces the branch, and advance() steps to the next branch in
// depth-first order.
class Branch {
public:
    explicit Branch(bool goalHasConstant) : hasConstant_(goalHasConstant) {}

    // Returns the recorded guess, extending the trail with the first
    // choice when the variable is new.
    Guess guessFor(const std::string& name);

    // Moves to the lexicographically next branch; false when exhausted.
    bool advance();

    void resetCursor() { used_ = 0; }
    std::map<std::string, Guess> assignment() const;
    std::size_t depth() const { return trail_.size(); }

    // Forces a fixed assignment (for tests replaying a known branch).
    void pin(const std::string& name, Guess g);

private:
    int choiceCount() const { return hasConstant_ ? 4 : 3; }
    static Guess decode(int choice, bool hasConstant);

    bool hasConstant_;
    std::vector<std::pair<std::string, int>> trail_;
    std::size_t used_ = 0;
};

// ── working state (exposed for unit tests) ──────────────────────────────

struct WorkingSubsumption {
    ParticleSet lhs;
    Particle rhs;
    bool solved = false;
};

enum class SolverOutcome { Open, AllSolved, Failure };

enum class NormStatus { Normalized, Success, Failure };

struct NormResult {
    NormStatus status = NormStatus::Failure;
    NormalizedGoal ng;  // valid for Normalized and Success (flat empty)
};

class Normalizer {
public:
    Normalizer(const Goal& subgoal, Branch& branch);

    NormResult run();

    // Stepwise interface for tests.
    SolverOutcome runImplicitSolver();
    bool flattenFirstNonFlat();  // false when no unsolved non-flat remains
    const std::vector<WorkingSubsumption>& working() const { return subs_; }
    NormalizedGoal snapshot() const;

private:
    Guess guessOf(Sym var) const;
    Guess ensureGuessed(Sym var, const std::string& display);
    Particle substituteHead(Particle p) const;
    // P^{-r}: decomposition of a bare variable, tail of a matching
    // restriction, top otherwise.  Creates registry entries on demand.
    Particle projectMinusRole(const Particle& p, Sym role);
    Particle projectConstant(const Particle& p) const;  // P^A
    bool isNonFlat(const WorkingSubsumption& s) const;

    const Goal& goal_;
    Branch& branch_;
    Alphabet alphabet_;
    Registry registry_;
    std::map<Sym, Guess> guess_;
    std::vector<Sym> roles_;
    Sym constant_ = kNoSym;
    std::vector<WorkingSubsumption> subs_;
    long steps_ = 0;
    long stepBound_ = 0;
};

NormResult normalize_goal(const Goal& subgoal, Branch& branch);

// Registry sidecar format: lines "child := parent . role".
Registry parse_registry(const std::string& text, Alphabet& alphabet);

}  // namespace flbot

#endif  // FLBOT_NORMALIZER_HPP
