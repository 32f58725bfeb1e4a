#include "flbot/unifier.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace flbot {

namespace {

Particle prepend(Sym role, const Particle& p) {
    std::vector<Sym> path;
    path.reserve(p.path.size() + 1);
    path.push_back(role);
    path.insert(path.end(), p.path.begin(), p.path.end());
    return Particle{std::move(path), p.head};
}

ParticleSet prependSet(Sym role, const ParticleSet& s) {
    std::vector<Particle> out;
    out.reserve(s.size());
    for (const auto& p : s) out.push_back(prepend(role, p));
    return reduce(makeSet(std::move(out)));
}

bool pathLeq(const std::vector<Sym>& u, const std::vector<Sym>& v) {
    return u.size() <= v.size() && std::equal(u.begin(), u.end(), v.begin());
}

}  // namespace

bool check_decreasing_rule(const Substitution& sigma,
                           const Registry& registry) {
    for (const auto& e : registry.entries()) {
        const ParticleSet& childImage = sigma.image(e.child);
        for (const auto& p : sigma.image(e.parent)) {
            if (p.path.empty() || p.path.front() != e.role) continue;
            Particle tail{{p.path.begin() + 1, p.path.end()}, p.head};
            if (contains(childImage, tail)) continue;
            // membership up to reduction: mutually subsuming particles
            bool equivalent = std::any_of(
                childImage.begin(), childImage.end(),
                [&tail](const Particle& q) {
                    return subsumes({q}, {tail}) && subsumes({tail}, {q});
                });
            if (!equivalent) return false;
        }
    }
    return true;
}

Substitution build_trivial_unifier(const NormalizedGoal& ng) {
    Substitution sigma;
    for (const auto& [v, g] : ng.guess) {
        if (g.kind == GuessKind::Bot) {
            sigma.images[v] = {Particle{{}, botHead()}};
        } else if (g.kind == GuessKind::Other && g.aFlag) {
            sigma.images[v] = {Particle{{}, constantHead(ng.constant)}};
        }
    }
    // Absorb role-prefixed decomposition images until stable.
    bool changed = true;
    std::size_t rounds = 0;
    while (changed) {
        changed = false;
        if (++rounds > ng.registry.size() + 1) {
            throw EngineDefect("trivial construction did not stabilize");
        }
        for (const auto& e : ng.registry.entries()) {
            auto it = sigma.images.find(e.child);
            if (it == sigma.images.end() || it->second.empty()) continue;
            ParticleSet wrapped = prependSet(e.role, it->second);
            ParticleSet& parent = sigma.images[e.parent];
            ParticleSet merged = parent;
            merged.insert(merged.end(), wrapped.begin(), wrapped.end());
            merged = reduce(makeSet(std::move(merged)));
            if (merged != parent) {
                parent = std::move(merged);
                changed = true;
            }
        }
    }
    return sigma;
}

// ── graph construction ──────────────────────────────────────────────────

namespace {

class Builder {
public:
    Builder(const NormalizedGoal& ng, const MainResult& decision)
        : ng_(ng), store_(decision.store), ctx_(decision.ctx) {}

    ConstructionResult build(const std::optional<Shortcut>& chosenA) {
        if (!ctx_.botVars.empty()) {
            int botIdx = store_.find(Shortcut{ctx_.botVars, {}});
            if (botIdx < 0 || !store_.alive[botIdx]) {
                throw EngineDefect("initial bottom shortcut missing");
            }
            if (!create(Particle{{}, botHead()}, botIdx)) {
                throw EngineDefect("cannot create bottom in the initial shortcut");
            }
        }
        if (!ctx_.aVars.empty()) {
            if (!chosenA) throw EngineDefect("initial constant shortcut missing");
            int aIdx = store_.find(*chosenA);
            if (aIdx < 0 || !store_.alive[aIdx]) {
                throw EngineDefect("chosen constant shortcut not stored");
            }
            if (!create(Particle{{}, constantHead(ng_.constant)}, aIdx)) {
                throw EngineDefect("cannot create the constant in its shortcut");
            }
        }
        ConstructionResult out;
        for (auto& [v, parts] : gamma_) {
            ParticleSet image = reduce(makeSet(std::move(parts)));
            for (const auto& p : image) {
                out.maxDepth = std::max(out.maxDepth, p.path.size());
            }
            if (!image.empty()) out.sigma.images[v] = std::move(image);
        }
        out.trace = std::move(trace_);
        return out;
    }

private:
    bool created(int idx, const Particle& p) const {
        auto it = createdIn_.find(idx);
        return it != createdIn_.end() && it->second.count(p) > 0;
    }

    // Single creation primitive: discharge the prefix obligation, record
    // the particle, and deactivate it along resolve edges for every role
    // that has a decomposition variable in the main part.  The record is
    // made before discharging so that creation cascades reaching the same
    // pair settle instead of recursing; a failed discharge retracts it.
    bool create(const Particle& p, int idx) {
        if (created(idx, p)) return true;
        if (++creations_ > kCreationCap) {
            throw EngineDefect("construction creation cap exceeded");
        }
        const StoredShortcut& item = store_.items[idx];
        createdIn_[idx].insert(p);
        if (!item.sc.prefix.empty() && !discharge(p, idx)) {
            createdIn_[idx].erase(p);
            return false;
        }
        trace_.push_back(
            ConstructionStep{static_cast<int>(trace_.size()), item.sc, p});
        for (Sym v : item.sc.main) gamma_[v].push_back(p);
        for (Sym role : item.neededRoles) {
            if (!deactivate(p, idx, role)) {
                throw EngineDefect("active particle cannot be deactivated");
            }
        }
        return true;
    }

    bool deactivate(const Particle& p, int idx, Sym role) {
        std::vector<int> targets;
        for (const auto& e : store_.items[idx].resolve) {
            if (e.role == role && store_.alive[e.target]) {
                targets.push_back(e.target);
            }
        }
        std::sort(targets.begin(), targets.end(), [this](int a, int b) {
            if (store_.items[a].stage != store_.items[b].stage) {
                return store_.items[a].stage < store_.items[b].stage;
            }
            return shortcutLess(store_.items[a].sc, store_.items[b].sc);
        });
        Particle wrapped = prepend(role, p);
        for (int t : targets) {
            if (create(wrapped, t)) return true;
        }
        return false;
    }

    // Ensure some prefix of p exists among the particles created in a
    // support of shortcut idx, creating the longest admissible bottom
    // prefix on demand.
    bool discharge(const Particle& p, int idx) {
        std::vector<int> supports;
        for (int t : store_.items[idx].depend) {
            if (store_.alive[t]) supports.push_back(t);
        }
        std::sort(supports.begin(), supports.end(), [this](int a, int b) {
            return shortcutLess(store_.items[a].sc, store_.items[b].sc);
        });
        for (int t : supports) {
            auto it = createdIn_.find(t);
            if (it == createdIn_.end()) continue;
            for (const auto& q : it->second) {
                if (is_prefix(q, p)) return true;
            }
        }
        std::size_t longest = p.path.size();
        if (p.head.kind != HeadKind::Constant) {
            if (longest == 0) return false;  // bottom has no proper prefix
            --longest;
        }
        for (int t : supports) {
            for (std::size_t len = longest + 1; len-- > 0;) {
                std::vector<Sym> w(p.path.begin(),
                                   p.path.begin() + static_cast<long>(len));
                if (ensureBot(w, t)) return true;
            }
        }
        return false;
    }

    // Ensure a bottom particle with path at most w (prefix order) is
    // created in shortcut idx.
    bool ensureBot(const std::vector<Sym>& w, int idx) {
        auto it = createdIn_.find(idx);
        if (it != createdIn_.end()) {
            for (const auto& q : it->second) {
                if (q.head.kind == HeadKind::Bot && pathLeq(q.path, w)) {
                    return true;
                }
            }
        }
        const Shortcut& sc = store_.items[idx].sc;
        if (w.empty()) {
            // The bare bottom particle may only live in bottom variables.
            std::vector<Sym> diff;
            std::set_difference(sc.main.begin(), sc.main.end(),
                                ctx_.botVars.begin(), ctx_.botVars.end(),
                                std::back_inserter(diff));
            if (!diff.empty()) return false;
            return create(Particle{{}, botHead()}, idx);
        }
        Sym head = w.front();
        std::vector<Sym> tail(w.begin() + 1, w.end());
        // Routed creation: a resolver holding the tail keeps the
        // decreasing rule intact for every main member with a registered
        // head-role decomposition.
        for (std::size_t t = 0; t < store_.items.size(); ++t) {
            if (!store_.alive[t]) continue;
            bool pointsHere = std::any_of(
                store_.items[t].resolve.begin(), store_.items[t].resolve.end(),
                [&](const ResolveEdge& e) {
                    return e.role == head && e.target == static_cast<int>(idx);
                });
            if (!pointsHere) continue;
            if (ensureBot(tail, static_cast<int>(t))) {
                return create(Particle{w, botHead()}, idx);
            }
        }
        // Guarded direct creation: harmless when no main member has a
        // head-role decomposition variable registered.
        bool guarded = std::none_of(sc.main.begin(), sc.main.end(),
                                    [&](Sym v) {
                                        return ctx_.registry.child(v, head)
                                            .has_value();
                                    });
        if (guarded) return create(Particle{w, botHead()}, idx);
        return false;
    }

    struct ParticleLess {
        bool operator()(const Particle& a, const Particle& b) const {
            return particleLess(a, b);
        }
    };

    static constexpr long kCreationCap = 200000;

    const NormalizedGoal& ng_;
    const ShortcutStore& store_;
    const ShortcutContext& ctx_;
    std::map<Sym, std::vector<Particle>> gamma_;
    std::map<int, std::set<Particle, ParticleLess>> createdIn_;
    std::vector<ConstructionStep> trace_;
    long creations_ = 0;
};

}  // namespace

ConstructionResult construct_unifier(const NormalizedGoal& ng,
                                     const MainResult& decision) {
    if (!decision.success) {
        throw EngineDefect("construct_unifier on a failed decision");
    }
    Builder builder(ng, decision);
    ConstructionResult result = builder.build(decision.chosenA);

    // Hard contract: the witness satisfies the normalized goal and the
    // decreasing rule.
    const Substitution& sigma = result.sigma;
    for (Sym v : ng.botVariables()) {
        if (!subsumes(sigma.image(v), {Particle{{}, botHead()}})) {
            throw EngineDefect("witness misses a start bottom subsumption");
        }
    }
    for (Sym v : ng.aVariables()) {
        if (!subsumes(sigma.image(v), {Particle{{}, constantHead(ng.constant)}})) {
            throw EngineDefect("witness misses a start constant subsumption");
        }
    }
    for (const auto& f : ng.flat) {
        std::vector<Particle> lhs;
        for (Sym v : f.lhs) {
            const auto& img = sigma.image(v);
            lhs.insert(lhs.end(), img.begin(), img.end());
        }
        if (!subsumes(reduce(makeSet(std::move(lhs))), sigma.image(f.rhs))) {
            throw EngineDefect("witness misses a flat subsumption");
        }
    }
    for (const auto& e : ng.registry.entries()) {
        ParticleSet wrapped = prependSet(e.role, sigma.image(e.child));
        if (!subsumes(sigma.image(e.parent), wrapped)) {
            throw EngineDefect("witness misses an increasing subsumption");
        }
    }
    if (!check_decreasing_rule(sigma, ng.registry)) {
        throw EngineDefect("witness violates the decreasing rule");
    }
    return result;
}

std::string traceToJsonLines(const std::vector<ConstructionStep>& trace,
                             const Alphabet& alphabet) {
    std::ostringstream os;
    for (const auto& st : trace) {
        os << "{\"step\": " << st.step << ", \"shortcut\": {\"main\": [";
        for (std::size_t i = 0; i < st.shortcut.main.size(); ++i) {
            if (i) os << ", ";
            os << "\"" << alphabet.variableName(st.shortcut.main[i]) << "\"";
        }
        os << "], \"prefix\": [";
        for (std::size_t i = 0; i < st.shortcut.prefix.size(); ++i) {
            if (i) os << ", ";
            os << "\"" << alphabet.variableName(st.shortcut.prefix[i]) << "\"";
        }
        os << "]}, \"particle\": \"" << render(st.particle, alphabet)
           << "\"}\n";
    }
    return os.str();
}

}  // namespace flbot
