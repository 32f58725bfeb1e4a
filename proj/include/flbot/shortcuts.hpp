// shortcuts.hpp - stage 2: the shortcut calculus.
//
// A shortcut (S, P) distributes one particle over the flat subsumptions:
// the particle goes to every variable of the main part S, and suitable
// bottom prefixes of it to the variables of the prefix part P.  The
// engine computes the set of all admissible shortcuts bottom-up (height
// 0 first, then pairs resolvable by already computed ones), prunes it to
// the valid ones, and decides unifiability by membership of the initial
// shortcuts.
//
// Candidate enumeration scans 3^n variable assignments per pass; that
// inner loop has an OpenMP kernel and a serial reference implementation
// selected by ExecMode (results are identical by construction).

#ifndef FLBOT_SHORTCUTS_HPP
#define FLBOT_SHORTCUTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flbot/normalizer.hpp"

namespace flbot {

enum class ExecMode : std::uint8_t { Serial, Parallel };

struct Shortcut {
    std::vector<Sym> main;    // sorted, nonempty
    std::vector<Sym> prefix;  // sorted, disjoint from main

    friend bool operator==(const Shortcut&, const Shortcut&) = default;
};

bool shortcutLess(const Shortcut& a, const Shortcut& b);
std::string render(const Shortcut& s, const Alphabet& alphabet);

struct ResolveEdge {
    Sym role;
    int target;  // store index, strictly smaller stage
};

struct StoredShortcut {
    Shortcut sc;
    int stage = 0;
    bool heightZero = false;
    std::vector<Sym> neededRoles;      // roles of decomposition vars in main
    std::vector<ResolveEdge> resolve;  // recorded at admission time
    std::vector<int> depend;           // all supports in the store
};

struct ShortcutStore {
    std::vector<StoredShortcut> items;
    std::vector<char> alive;  // pruning mask, parallel to items

    int find(const Shortcut& sc) const;  // -1 when absent
    bool aliveAt(int idx) const { return idx >= 0 && alive[idx] != 0; }
    std::size_t aliveCount() const;
    std::vector<int> survivors() const;
};

// Context extracted from a normalized goal (or built directly in tests).
struct ShortcutContext {
    std::vector<Sym> universe;  // candidate variables, sorted; tops excluded
    std::vector<Sym> botVars;   // sorted
    std::vector<Sym> aVars;     // sorted
    std::vector<FlatSubsumption> flat;
    Registry registry;
    Alphabet alphabet;

    static ShortcutContext fromNormalizedGoal(const NormalizedGoal& ng);
    bool isDecomposition(Sym v) const { return registry.ofChild(v).has_value(); }
};

// (S, P) satisfies X1 and ... and Xn <=? Y when Y in S implies some Xi
// in S union P, and Y in P implies some Ximain in P.
bool satisfies_flat(const Shortcut& s, const FlatSubsumption& f);

// Definition of a shortcut: disjointness, nonempty main, the bottom
// condition (a main part touching bottom variables must consist of them
// and have an empty prefix part), and all flat subsumptions.
bool is_shortcut(const Shortcut& s, const ShortcutContext& ctx);

// Restricted resolving relation s1 ->r s2.
bool resolves(const Shortcut& s1, const Shortcut& s2, Sym role,
              const ShortcutContext& ctx);

// s1 depends on s2 when prefix(s1) = main(s2) union prefix(s2).
bool depends_on(const Shortcut& s1, const Shortcut& s2);

// Height 0: no decomposition variables in the main part.
bool height_zero(const Shortcut& s, const ShortcutContext& ctx);

struct StoreLimits {
    std::size_t maxUniverse = 16;       // 3^n candidate assignments
    std::size_t maxStored = 2000000;
};

// Fixpoint enumeration of all shortcuts: stage 0 holds the height-0
// ones; stage k+1 adds pairs for which every needed role has an
// already-computed resolver.  Resolve edges are recorded towards the
// strictly earlier stages; dependency edges between all stored pairs.
ShortcutStore all_shortcuts(const ShortcutContext& ctx,
                            ExecMode mode = ExecMode::Serial,
                            const StoreLimits& limits = {});

// Removes shortcuts with a nonempty prefix part and no surviving
// support (single sweep; the caller iterates).
ShortcutStore check_existence(ShortcutStore store);

// Removes shortcuts that lack a surviving resolve edge for some needed
// role, or cannot reach a height-0 shortcut along surviving edges.
ShortcutStore check_validity(ShortcutStore store);

struct MainResult {
    bool success = false;
    ShortcutStore store;
    ShortcutContext ctx;
    std::optional<Shortcut> chosenA;  // surviving initial shortcut for A
    int fixpointPasses = 0;
};

// Algorithm "Main": case split on the initial shortcuts, with the
// existence/validity fixpoint in the two cases that need it.
MainResult main_decision(const NormalizedGoal& ng,
                         ExecMode mode = ExecMode::Serial,
                         const StoreLimits& limits = {});
MainResult main_decision_ctx(const ShortcutContext& ctx, ExecMode mode,
                             const StoreLimits& limits = {});

// Store dumps: JSON {"shortcuts": [...], "resolve": [[i,"r",j]], ...}
// and DOT with solid role-labelled resolve edges and dotted dependency
// edges.  Only surviving shortcuts are emitted, in canonical order.
std::string storeToJson(const ShortcutStore& store, const Alphabet& alphabet);
std::string storeToDot(const ShortcutStore& store, const Alphabet& alphabet);

}  // namespace flbot

#endif  // FLBOT_SHORTCUTS_HPP
