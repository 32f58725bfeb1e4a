#include "flbot/normalizer.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace flbot {

// ── registry ────────────────────────────────────────────────────────────

void Registry::add(Sym parent, Sym role, Sym child) {
    if (byParentRole_.count({parent, role})) {
        throw EngineDefect("duplicate decomposition variable");
    }
    byParentRole_[{parent, role}] = child;
    byChild_[child] = entries_.size();
    entries_.push_back(Entry{parent, role, child});
}

std::optional<Sym> Registry::child(Sym parent, Sym role) const {
    auto it = byParentRole_.find({parent, role});
    if (it == byParentRole_.end()) return std::nullopt;
    return it->second;
}

std::optional<Registry::Entry> Registry::ofChild(Sym v) const {
    auto it = byChild_.find(v);
    if (it == byChild_.end()) return std::nullopt;
    return entries_[it->second];
}

// ── normalized goal ─────────────────────────────────────────────────────

std::vector<Sym> NormalizedGoal::botVariables() const {
    std::vector<Sym> out;
    for (const auto& [v, g] : guess) {
        if (g.kind == GuessKind::Bot) out.push_back(v);
    }
    return out;
}

std::vector<Sym> NormalizedGoal::aVariables() const {
    std::vector<Sym> out;
    for (const auto& [v, g] : guess) {
        if (g.kind == GuessKind::Other && g.aFlag) out.push_back(v);
    }
    return out;
}

bool NormalizedGoal::startEmpty() const {
    return botVariables().empty() && aVariables().empty();
}

std::string NormalizedGoal::toJson() const {
    std::ostringstream os;
    auto var = [this](Sym v) { return "\"" + alphabet.variableName(v) + "\""; };
    os << "{\"start\": [";
    bool first = true;
    for (Sym v : botVariables()) {
        if (!first) os << ", ";
        first = false;
        os << "{\"lhs\": " << var(v) << ", \"rhs\": \"bot\"}";
    }
    for (Sym v : aVariables()) {
        if (!first) os << ", ";
        first = false;
        os << "{\"lhs\": " << var(v) << ", \"rhs\": \""
           << alphabet.constantName(constant) << "\"}";
    }
    os << "], \"increasing\": [";
    first = true;
    for (const auto& e : registry.entries()) {
        if (!first) os << ", ";
        first = false;
        os << "{\"lhs\": " << var(e.parent) << ", \"role\": \""
           << alphabet.roleName(e.role) << "\", \"rhs\": " << var(e.child)
           << "}";
    }
    os << "], \"flat\": [";
    first = true;
    for (const auto& f : flat) {
        if (!first) os << ", ";
        first = false;
        os << "{\"lhs\": [";
        for (std::size_t i = 0; i < f.lhs.size(); ++i) {
            if (i) os << ", ";
            os << var(f.lhs[i]);
        }
        os << "], \"rhs\": " << var(f.rhs) << "}";
    }
    os << "], \"guess\": {";
    first = true;
    for (const auto& [v, g] : guess) {
        if (!first) os << ", ";
        first = false;
        os << var(v) << ": \"";
        switch (g.kind) {
            case GuessKind::Top: os << "top"; break;
            case GuessKind::Bot: os << "bot"; break;
            case GuessKind::Other: os << (g.aFlag ? "other+A" : "other"); break;
        }
        os << "\"";
    }
    os << "}}";
    return os.str();
}

// ── branch ──────────────────────────────────────────────────────────────

Guess Branch::decode(int choice, bool hasConstant) {
    // Cheap verdicts first: top, then plain other, then other with the
    // constant flag, then bottom.
    if (choice == 0) return {GuessKind::Top, false};
    if (choice == 1) return {GuessKind::Other, false};
    if (hasConstant) {
        if (choice == 2) return {GuessKind::Other, true};
        return {GuessKind::Bot, false};
    }
    return {GuessKind::Bot, false};
}

Guess Branch::guessFor(const std::string& name) {
    if (used_ < trail_.size()) {
        if (trail_[used_].first != name) {
            // A replay diverged from the recorded trail; the entries past
            // this point belong to a different branch shape.
            trail_.resize(used_);
        }
    }
    if (used_ == trail_.size()) {
        trail_.emplace_back(name, 0);
    }
    return decode(trail_[used_++].second, hasConstant_);
}

bool Branch::advance() {
    while (!trail_.empty()) {
        if (trail_.back().second + 1 < choiceCount()) {
            ++trail_.back().second;
            used_ = 0;
            return true;
        }
        trail_.pop_back();
    }
    return false;
}

std::map<std::string, Guess> Branch::assignment() const {
    std::map<std::string, Guess> out;
    for (const auto& [name, choice] : trail_) {
        out[name] = decode(choice, hasConstant_);
    }
    return out;
}

void Branch::pin(const std::string& name, Guess g) {
    int choice = 0;
    for (; choice < choiceCount(); ++choice) {
        if (decode(choice, hasConstant_) == g) break;
    }
    if (choice == choiceCount()) {
        throw EngineDefect("pinned guess not representable");
    }
    trail_.emplace_back(name, choice);
}

// ── normalizer ──────────────────────────────────────────────────────────

namespace {

bool isBareBot(const Particle& p) {
    return p.bare() && p.head.kind == HeadKind::Bot;
}

bool isBareVariable(const Particle& p) {
    return p.bare() && p.head.kind == HeadKind::Variable;
}

bool isBareConstant(const Particle& p) {
    return p.bare() && p.head.kind == HeadKind::Constant;
}

}  // namespace

Normalizer::Normalizer(const Goal& subgoal, Branch& branch)
    : goal_(subgoal), branch_(branch), alphabet_(subgoal.alphabet) {
    std::vector<Sym> constants = subgoal.occurringConstants();
    if (constants.size() > 1) {
        throw EngineDefect("normalizer requires a constant-split goal");
    }
    if (!constants.empty()) constant_ = constants.front();
    roles_ = subgoal.occurringRoles();

    branch_.resetCursor();
    for (Sym v : subgoal.occurringVariables()) {
        ensureGuessed(v, alphabet_.variableName(v));
    }
    for (const auto& gs : subgoal.subsumptions) {
        WorkingSubsumption w;
        for (const auto& p : gs.lhs) w.lhs.push_back(substituteHead(p));
        w.lhs = makeSet(std::move(w.lhs));
        w.rhs = substituteHead(gs.rhs);
        subs_.push_back(std::move(w));
    }
    // Generous bound on rewrite steps; exceeding it signals an engine bug.
    long sz = 0;
    std::size_t maxDepth = 0;
    for (const auto& s : subs_) {
        sz += static_cast<long>(s.rhs.path.size()) + 1;
        maxDepth = std::max(maxDepth, s.rhs.path.size());
        for (const auto& p : s.lhs) {
            sz += static_cast<long>(p.path.size()) + 1;
            maxDepth = std::max(maxDepth, p.path.size());
        }
    }
    long fan = 1;
    for (std::size_t i = 0; i + 1 <= maxDepth + 1 && fan < 1000000; ++i) {
        fan *= static_cast<long>(roles_.size()) + 1;
    }
    stepBound_ = 10000 + 256 * sz * fan;
}

Guess Normalizer::guessOf(Sym var) const {
    auto it = guess_.find(var);
    if (it == guess_.end()) throw EngineDefect("unguessed variable");
    return it->second;
}

Guess Normalizer::ensureGuessed(Sym var, const std::string& display) {
    auto it = guess_.find(var);
    if (it != guess_.end()) return it->second;
    Guess g = branch_.guessFor(display);
    guess_.emplace(var, g);
    return g;
}

Particle Normalizer::substituteHead(Particle p) const {
    if (p.head.kind != HeadKind::Variable) return p;
    switch (guessOf(p.head.name).kind) {
        case GuessKind::Top: p.head = topHead(); break;
        case GuessKind::Bot: p.head = botHead(); break;
        case GuessKind::Other: break;
    }
    return p;
}

Particle Normalizer::projectMinusRole(const Particle& p, Sym role) {
    if (isBareVariable(p)) {
        Sym parent = p.head.name;
        auto existing = registry_.child(parent, role);
        Sym child;
        if (existing) {
            child = *existing;
        } else {
            // Display: X^r, and X^{rs} for nested decompositions.
            const std::string& base = alphabet_.variableName(parent);
            std::string display;
            std::string roleName = alphabet_.roleName(role);
            if (auto e = registry_.ofChild(parent)) {
                std::string stripped = base;
                stripped.erase(std::remove(stripped.begin(), stripped.end(), '{'),
                               stripped.end());
                stripped.erase(std::remove(stripped.begin(), stripped.end(), '}'),
                               stripped.end());
                auto caret = stripped.find('^');
                display = stripped.substr(0, caret) + "^{" +
                          stripped.substr(caret + 1) + roleName + "}";
            } else {
                display = base + "^" + roleName;
            }
            child = alphabet_.addInternalVariable(display);
            registry_.add(parent, role, child);
            ensureGuessed(child, display);
        }
        return substituteHead(Particle{{}, variableHead(child)});
    }
    if (!p.path.empty() && p.path.front() == role) {
        return Particle{{p.path.begin() + 1, p.path.end()}, p.head};
    }
    return Particle{{}, topHead()};
}

Particle Normalizer::projectConstant(const Particle& p) const {
    if (isBareConstant(p) || isBareVariable(p)) return p;
    return Particle{{}, topHead()};
}

bool Normalizer::isNonFlat(const WorkingSubsumption& s) const {
    if (!s.rhs.path.empty()) return true;
    for (const auto& p : s.lhs) {
        if (!p.path.empty()) return true;
        if (isBareConstant(p)) return true;
    }
    return false;
}

SolverOutcome Normalizer::runImplicitSolver() {
    bool changed = true;
    while (changed) {
        changed = false;
        if (++steps_ > stepBound_) {
            throw EngineDefect("normalization step bound exceeded");
        }
        for (auto& s : subs_) {
            if (s.solved) continue;
            // 1. bare bottom on the left solves the subsumption
            bool botLeft = std::any_of(s.lhs.begin(), s.lhs.end(), isBareBot);
            if (botLeft) {
                s.solved = true;
                changed = true;
                continue;
            }
            // 2. bare bottom on the right without one on the left fails
            if (isBareBot(s.rhs)) return SolverOutcome::Failure;
            // 3. top particle on the right solves
            if (s.rhs.head.kind == HeadKind::Top) {
                s.solved = true;
                changed = true;
                continue;
            }
            // 4. top on the left of a variable that is not top fails
            if (s.lhs.empty() && isBareVariable(s.rhs)) {
                return SolverOutcome::Failure;
            }
            // 5. delete top particles on the left
            auto isTop = [](const Particle& p) {
                return p.head.kind == HeadKind::Top;
            };
            if (std::any_of(s.lhs.begin(), s.lhs.end(), isTop)) {
                s.lhs.erase(std::remove_if(s.lhs.begin(), s.lhs.end(), isTop),
                            s.lhs.end());
                changed = true;
                continue;
            }
            // 6. identical particle on both sides solves
            if (contains(s.lhs, s.rhs)) {
                s.solved = true;
                changed = true;
                continue;
            }
            bool aFlagged = std::any_of(
                s.lhs.begin(), s.lhs.end(), [this](const Particle& p) {
                    return isBareVariable(p) && guessOf(p.head.name).aFlag;
                });
            bool bareConstLeft =
                std::any_of(s.lhs.begin(), s.lhs.end(), isBareConstant);
            if (isBareConstant(s.rhs)) {
                // 7. constant right, flagged variable left: solved
                if (aFlagged) {
                    s.solved = true;
                    changed = true;
                    continue;
                }
                // 8. constant right without support: failure
                // (rule 6 already covered the constant sitting on the left)
                return SolverOutcome::Failure;
            }
            if (isBareVariable(s.rhs)) {
                bool rhsAFlag = guessOf(s.rhs.head.name).aFlag;
                // 9. drop a left constant facing an unflagged variable
                if (!rhsAFlag && bareConstLeft) {
                    s.lhs.erase(std::remove_if(s.lhs.begin(), s.lhs.end(),
                                               isBareConstant),
                                s.lhs.end());
                    changed = true;
                    continue;
                }
                // 10. flagged variable right with no constant support fails
                if (rhsAFlag && !bareConstLeft && !aFlagged) {
                    return SolverOutcome::Failure;
                }
            }
        }
    }
    // 11. nothing unsolved left
    bool open = std::any_of(subs_.begin(), subs_.end(),
                            [](const WorkingSubsumption& s) {
                                return !s.solved;
                            });
    return open ? SolverOutcome::Open : SolverOutcome::AllSolved;
}

bool Normalizer::flattenFirstNonFlat() {
    auto it = std::find_if(subs_.begin(), subs_.end(),
                           [this](const WorkingSubsumption& s) {
                               return !s.solved && isNonFlat(s);
                           });
    if (it == subs_.end()) return false;
    ++steps_;
    if (steps_ > stepBound_) {
        throw EngineDefect("normalization step bound exceeded");
    }
    WorkingSubsumption s = std::move(*it);
    std::size_t pos = static_cast<std::size_t>(it - subs_.begin());
    subs_.erase(subs_.begin() + pos);

    std::vector<WorkingSubsumption> replacement;
    auto project = [this, &s](Sym role) {
        WorkingSubsumption w;
        for (const auto& p : s.lhs) w.lhs.push_back(projectMinusRole(p, role));
        w.lhs = makeSet(std::move(w.lhs));
        w.rhs = projectMinusRole(s.rhs, role);
        return w;
    };
    if (!s.rhs.path.empty()) {
        replacement.push_back(project(s.rhs.path.front()));
    } else if (isBareVariable(s.rhs)) {
        for (Sym role : roles_) replacement.push_back(project(role));
        if (guessOf(s.rhs.head.name).aFlag) {
            WorkingSubsumption w;
            for (const auto& p : s.lhs) w.lhs.push_back(projectConstant(p));
            w.lhs = makeSet(std::move(w.lhs));
            w.rhs = Particle{{}, constantHead(constant_)};
            replacement.push_back(std::move(w));
        }
    } else {
        // Solver rules decide every other bare right side before a
        // non-flat subsumption can be selected.
        throw EngineDefect("flattening selected an undecidable subsumption");
    }
    subs_.insert(subs_.begin() + pos,
                 std::make_move_iterator(replacement.begin()),
                 std::make_move_iterator(replacement.end()));
    return true;
}

NormalizedGoal Normalizer::snapshot() const {
    NormalizedGoal ng;
    ng.alphabet = alphabet_;
    ng.guess = guess_;
    ng.registry = registry_;
    ng.roles = roles_;
    ng.constant = constant_;
    for (const auto& s : subs_) {
        if (s.solved) continue;
        FlatSubsumption f;
        for (const auto& p : s.lhs) {
            if (!isBareVariable(p)) {
                throw EngineDefect("non-variable particle in flat subsumption");
            }
            f.lhs.push_back(p.head.name);
        }
        std::sort(f.lhs.begin(), f.lhs.end());
        f.lhs.erase(std::unique(f.lhs.begin(), f.lhs.end()), f.lhs.end());
        if (!isBareVariable(s.rhs)) {
            throw EngineDefect("non-variable right side in flat subsumption");
        }
        f.rhs = s.rhs.head.name;
        ng.flat.push_back(std::move(f));
    }
    return ng;
}

NormResult Normalizer::run() {
    for (;;) {
        SolverOutcome out = runImplicitSolver();
        if (out == SolverOutcome::Failure) {
            return {NormStatus::Failure, {}};
        }
        if (out == SolverOutcome::AllSolved) {
            return {NormStatus::Success, snapshot()};
        }
        if (!flattenFirstNonFlat()) {
            return {NormStatus::Normalized, snapshot()};
        }
    }
}

NormResult normalize_goal(const Goal& subgoal, Branch& branch) {
    return Normalizer(subgoal, branch).run();
}

// ── registry sidecar ────────────────────────────────────────────────────

Registry parse_registry(const std::string& text, Alphabet& alphabet) {
    Registry registry;
    std::istringstream is(text);
    std::string raw;
    int lineNo = 0;
    while (std::getline(is, raw)) {
        ++lineNo;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        std::istringstream ls(raw);
        std::string child, assign, parent, dot, role;
        if (!(ls >> child)) continue;
        if (!(ls >> assign >> parent >> dot >> role) || assign != ":=" ||
            dot != ".") {
            throw ParseError("expected 'child := parent . role'", lineNo, 1);
        }
        auto parentSym = alphabet.find(parent);
        if (!parentSym || parentSym->first != Alphabet::Kind::Variable) {
            throw InputError("registry parent '" + parent +
                             "' is not a variable");
        }
        Sym roleSym = alphabet.intern(role, Alphabet::Kind::Role);
        Sym childSym = alphabet.intern(child, Alphabet::Kind::Variable);
        registry.add(parentSym->second, roleSym, childSym);
    }
    return registry;
}

}  // namespace flbot
