// concepts.hpp - FL-bottom concepts in particle normal form.
//
// A concept is kept as a reduced set of particles.  A particle "all v.A"
// is a role string v (sequence of role ids) plus a head, which is a
// constant, a variable, top or bottom.  The empty set of particles is top.
//
// Subsumption between ground reduced sets is decided syntactically:
// every particle of the right side must be present on the left, or be a
// constant-or-bottom particle sitting under some bottom particle of the
// left side whose role string is a prefix of its path.

#ifndef FLBOT_CONCEPTS_HPP
#define FLBOT_CONCEPTS_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace flbot {

using Sym = std::int32_t;
inline constexpr Sym kNoSym = -1;

// ── errors ──────────────────────────────────────────────────────────────

// Malformed concrete syntax; carries a 1-based line/column position.
struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(std::string msg, int line_, int col_)
        : std::runtime_error(std::move(msg)), line(line_), col(col_) {}
};

// Identifier category clashes and other bad input.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configured search/enumeration cap exceeded.
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Internal invariant broken; must never fire on any input.
struct EngineDefect : std::logic_error {
    using std::logic_error::logic_error;
};

// ── alphabet ────────────────────────────────────────────────────────────

// Names used by a goal, partitioned into roles, constants and variables.
// Each category has its own id space.  An identifier belongs to exactly
// one category; reusing it in another one is an input error.
class Alphabet {
public:
    enum class Kind : std::uint8_t { Role, Constant, Variable };

    Sym intern(const std::string& name, Kind kind);
    std::optional<std::pair<Kind, Sym>> find(const std::string& name) const;

    // Registers an internal variable (decomposition variables use display
    // names outside the identifier grammar, e.g. "X^{rs}").
    Sym addInternalVariable(const std::string& display);

    const std::string& roleName(Sym id) const { return roles_.at(id); }
    const std::string& constantName(Sym id) const { return constants_.at(id); }
    const std::string& variableName(Sym id) const { return variables_.at(id); }

    Sym roleCount() const { return static_cast<Sym>(roles_.size()); }
    Sym constantCount() const { return static_cast<Sym>(constants_.size()); }
    Sym variableCount() const { return static_cast<Sym>(variables_.size()); }

private:
    std::vector<std::string> roles_, constants_, variables_;
    std::unordered_map<std::string, std::pair<Kind, Sym>> byName_;
};

// ── particles ───────────────────────────────────────────────────────────

enum class HeadKind : std::uint8_t { Bot, Top, Constant, Variable };

struct Head {
    HeadKind kind = HeadKind::Top;
    Sym name = kNoSym;  // constant or variable id, unused for Top/Bot

    friend bool operator==(const Head&, const Head&) = default;
};

inline Head botHead() { return {HeadKind::Bot, kNoSym}; }
inline Head topHead() { return {HeadKind::Top, kNoSym}; }
inline Head constantHead(Sym c) { return {HeadKind::Constant, c}; }
inline Head variableHead(Sym v) { return {HeadKind::Variable, v}; }

struct Particle {
    std::vector<Sym> path;  // role string
    Head head;

    bool bare() const { return path.empty(); }
    friend bool operator==(const Particle&, const Particle&) = default;
};

// Canonical order: path (lexicographic), then head kind, then head name.
bool particleLess(const Particle& a, const Particle& b);

// A concept in normal form: canonically sorted vector of particles.
// Empty vector denotes top.  Reduced unless stated otherwise.
using ParticleSet = std::vector<Particle>;

Particle makeParticle(std::vector<Sym> path, Head head);
ParticleSet makeSet(std::vector<Particle> particles);  // sort + dedup only

bool contains(const ParticleSet& s, const Particle& p);
bool isGround(const ParticleSet& s);

// Definition of particle prefix: only bottom particles are prefixes.
//   all v.bot  <  all v'.bot   when v is a proper prefix of v'
//   all v.bot  <= all v'.A     when v is a prefix of v' and A a constant
bool is_prefix(const Particle& p, const Particle& q);

// Deletes top particles, collapses to {bot} when the bare bottom particle
// is present, and drops every particle that has a prefix in the set.
// Idempotent and equivalence-preserving.
ParticleSet reduce(ParticleSet s);

// Syntactic subsumption test for ground sets; tolerates non-reduced
// input (top-headed right particles count as trivially entailed).
// Throws EngineDefect when either side contains a variable head.
bool subsumes(const ParticleSet& c, const ParticleSet& d);

// ── concept syntax ──────────────────────────────────────────────────────

// concept := atom { "and" atom }
// atom    := "top" | "bot" | IDENT | "all" IDENT "." atom | "(" concept ")"
struct ConceptAst {
    enum class Kind : std::uint8_t { Name, Conj, Forall, Top, Bot };
    Kind kind = Kind::Top;
    Alphabet::Kind nameKind = Alphabet::Kind::Constant;  // for Name
    Sym name = kNoSym;                                   // for Name
    Sym role = kNoSym;                                   // for Forall
    std::vector<ConceptAst> children;                    // Conj, Forall
};

// Parses one concept.  New identifiers are interned: names after "all"
// as roles, other identifiers as constants unless already declared as
// variables.  Category clashes raise InputError; syntax errors carry the
// offending position (lineBase shifts reported line numbers).
ConceptAst parse_concept(const std::string& text, Alphabet& alphabet,
                         int lineBase = 1);

// Particle normal form of an AST (reduced).
ParticleSet normalize(const ConceptAst& ast);

// Concrete syntax in canonical order; the empty set renders as "top".
std::string render(const Particle& p, const Alphabet& alphabet);
std::string render(const ParticleSet& s, const Alphabet& alphabet);

}  // namespace flbot

#endif  // FLBOT_CONCEPTS_HPP
