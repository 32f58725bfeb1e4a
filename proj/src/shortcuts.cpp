#include "flbot/shortcuts.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flbot {

namespace {

bool sortedContains(const std::vector<Sym>& v, Sym x) {
    return std::binary_search(v.begin(), v.end(), x);
}

bool sortedSubset(const std::vector<Sym>& a, const std::vector<Sym>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::vector<Sym> sortedUnion(const std::vector<Sym>& a,
                             const std::vector<Sym>& b) {
    std::vector<Sym> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                   std::back_inserter(out));
    return out;
}

}  // namespace

bool shortcutLess(const Shortcut& a, const Shortcut& b) {
    if (a.main != b.main) {
        return std::lexicographical_compare(a.main.begin(), a.main.end(),
                                            b.main.begin(), b.main.end());
    }
    return std::lexicographical_compare(a.prefix.begin(), a.prefix.end(),
                                        b.prefix.begin(), b.prefix.end());
}

std::string render(const Shortcut& s, const Alphabet& alphabet) {
    std::ostringstream os;
    auto list = [&](const std::vector<Sym>& vs) {
        os << "{";
        for (std::size_t i = 0; i < vs.size(); ++i) {
            if (i) os << ",";
            os << alphabet.variableName(vs[i]);
        }
        os << "}";
    };
    os << "(";
    list(s.main);
    os << ", ";
    list(s.prefix);
    os << ")";
    return os.str();
}

int ShortcutStore::find(const Shortcut& sc) const {
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (items[i].sc == sc) return static_cast<int>(i);
    }
    return -1;
}

std::size_t ShortcutStore::aliveCount() const {
    return static_cast<std::size_t>(
        std::count(alive.begin(), alive.end(), char(1)));
}

std::vector<int> ShortcutStore::survivors() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (alive[i]) out.push_back(static_cast<int>(i));
    }
    return out;
}

ShortcutContext ShortcutContext::fromNormalizedGoal(const NormalizedGoal& ng) {
    ShortcutContext ctx;
    ctx.alphabet = ng.alphabet;
    ctx.registry = ng.registry;
    ctx.flat = ng.flat;
    for (const auto& [v, g] : ng.guess) {
        if (g.kind == GuessKind::Top) continue;  // top images take no particles
        ctx.universe.push_back(v);
        if (g.kind == GuessKind::Bot) ctx.botVars.push_back(v);
        if (g.kind == GuessKind::Other && g.aFlag) ctx.aVars.push_back(v);
    }
    std::sort(ctx.universe.begin(), ctx.universe.end());
    std::sort(ctx.botVars.begin(), ctx.botVars.end());
    std::sort(ctx.aVars.begin(), ctx.aVars.end());
    return ctx;
}

bool satisfies_flat(const Shortcut& s, const FlatSubsumption& f) {
    if (sortedContains(s.main, f.rhs)) {
        bool ok = std::any_of(f.lhs.begin(), f.lhs.end(), [&s](Sym y) {
            return sortedContains(s.main, y) || sortedContains(s.prefix, y);
        });
        if (!ok) return false;
    }
    if (sortedContains(s.prefix, f.rhs)) {
        bool ok = std::any_of(f.lhs.begin(), f.lhs.end(), [&s](Sym y) {
            return sortedContains(s.prefix, y);
        });
        if (!ok) return false;
    }
    return true;
}

bool is_shortcut(const Shortcut& s, const ShortcutContext& ctx) {
    if (s.main.empty()) return false;
    std::vector<Sym> overlap;
    std::set_intersection(s.main.begin(), s.main.end(), s.prefix.begin(),
                          s.prefix.end(), std::back_inserter(overlap));
    if (!overlap.empty()) return false;
    bool touchesBot = std::any_of(s.main.begin(), s.main.end(), [&ctx](Sym v) {
        return sortedContains(ctx.botVars, v);
    });
    if (touchesBot) {
        if (!sortedSubset(s.main, ctx.botVars)) return false;
        if (!s.prefix.empty()) return false;
    }
    return std::all_of(ctx.flat.begin(), ctx.flat.end(),
                       [&s](const FlatSubsumption& f) {
                           return satisfies_flat(s, f);
                       });
}

bool resolves(const Shortcut& s1, const Shortcut& s2, Sym role,
              const ShortcutContext& ctx) {
    // (a) some role-decomposition variable in main(s1), and the parents of
    // all of them in main(s2)
    bool hasRoleDecomp = false;
    for (Sym v : s1.main) {
        auto e = ctx.registry.ofChild(v);
        if (!e || e->role != role) continue;
        hasRoleDecomp = true;
        if (!sortedContains(s2.main, e->parent)) return false;
    }
    if (!hasRoleDecomp) return false;
    // (b) parents of role-decompositions in prefix(s1) lie in prefix(s2)
    for (Sym v : s1.prefix) {
        auto e = ctx.registry.ofChild(v);
        if (!e || e->role != role) continue;
        if (!sortedContains(s2.prefix, e->parent)) return false;
    }
    // (c) main(s2) members with a registered role-decomposition have it in
    // main(s1)
    for (Sym v : s2.main) {
        auto child = ctx.registry.child(v, role);
        if (child && !sortedContains(s1.main, *child)) return false;
    }
    // (d) likewise for the prefix parts
    for (Sym v : s2.prefix) {
        auto child = ctx.registry.child(v, role);
        if (child && !sortedContains(s1.prefix, *child)) return false;
    }
    // Main parts made of bottom variables additionally require a
    // bottom-variable prefix part on the resolver.
    if (sortedSubset(s1.main, ctx.botVars)) {
        if (!sortedSubset(s2.prefix, ctx.botVars)) return false;
    }
    return true;
}

bool depends_on(const Shortcut& s1, const Shortcut& s2) {
    return s1.prefix == sortedUnion(s2.main, s2.prefix);
}

bool height_zero(const Shortcut& s, const ShortcutContext& ctx) {
    return std::none_of(s.main.begin(), s.main.end(), [&ctx](Sym v) {
        return ctx.isDecomposition(v);
    });
}

// ── candidate enumeration ───────────────────────────────────────────────

namespace {

// Candidate index -> (S, P): one base-3 digit per universe variable,
// 0 = absent, 1 = main, 2 = prefix.
Shortcut decodeCandidate(std::uint64_t index, const std::vector<Sym>& universe) {
    Shortcut s;
    for (Sym v : universe) {
        switch (index % 3) {
            case 1: s.main.push_back(v); break;
            case 2: s.prefix.push_back(v); break;
            default: break;
        }
        index /= 3;
    }
    return s;
}

std::vector<Sym> neededRolesOf(const Shortcut& s, const ShortcutContext& ctx) {
    std::vector<Sym> roles;
    for (Sym v : s.main) {
        if (auto e = ctx.registry.ofChild(v)) roles.push_back(e->role);
    }
    std::sort(roles.begin(), roles.end());
    roles.erase(std::unique(roles.begin(), roles.end()), roles.end());
    return roles;
}

std::vector<std::uint64_t> filterCandidatesSerial(std::uint64_t total,
                                                  const ShortcutContext& ctx) {
    std::vector<std::uint64_t> accepted;
    for (std::uint64_t i = 0; i < total; ++i) {
        if (is_shortcut(decodeCandidate(i, ctx.universe), ctx)) {
            accepted.push_back(i);
        }
    }
    return accepted;
}

std::vector<std::uint64_t> filterCandidatesParallel(std::uint64_t total,
                                                    const ShortcutContext& ctx) {
#ifdef _OPENMP
    std::vector<std::vector<std::uint64_t>> perThread(
        static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
    {
        auto& local = perThread[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(total); ++i) {
            if (is_shortcut(
                    decodeCandidate(static_cast<std::uint64_t>(i), ctx.universe),
                    ctx)) {
                local.push_back(static_cast<std::uint64_t>(i));
            }
        }
    }
    std::vector<std::uint64_t> accepted;
    for (auto& local : perThread) {
        accepted.insert(accepted.end(), local.begin(), local.end());
    }
    std::sort(accepted.begin(), accepted.end());
    return accepted;
#else
    return filterCandidatesSerial(total, ctx);
#endif
}

}  // namespace

ShortcutStore all_shortcuts(const ShortcutContext& ctx, ExecMode mode,
                            const StoreLimits& limits) {
    ShortcutStore store;
    std::size_t n = ctx.universe.size();
    if (n > limits.maxUniverse) {
        throw ResourceLimitError("shortcut universe too large (" +
                                 std::to_string(n) + " variables)");
    }
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= 3;

    std::vector<std::uint64_t> accepted =
        mode == ExecMode::Parallel ? filterCandidatesParallel(total, ctx)
                                   : filterCandidatesSerial(total, ctx);
    if (accepted.size() > limits.maxStored) {
        throw ResourceLimitError("shortcut candidate set too large");
    }

    struct Pending {
        Shortcut sc;
        std::vector<Sym> needed;
    };
    std::vector<Pending> pool;
    for (std::uint64_t idx : accepted) {
        Shortcut sc = decodeCandidate(idx, ctx.universe);
        std::vector<Sym> needed = neededRolesOf(sc, ctx);
        if (needed.empty()) {
            StoredShortcut item;
            item.sc = std::move(sc);
            item.stage = 0;
            item.heightZero = true;
            store.items.push_back(std::move(item));
        } else {
            pool.push_back(Pending{std::move(sc), std::move(needed)});
        }
    }
    if (store.items.empty()) {
        // No shortcut of height 0: the computed set stays empty and the
        // main algorithm will fail on the membership checks.
        store.items.clear();
        store.alive.clear();
        return store;
    }

    // Fixpoint: admit a pending pair once every needed role has a
    // resolver among the shortcuts of the previous stages.
    for (int stage = 1; !pool.empty(); ++stage) {
        std::size_t committed = store.items.size();
        std::vector<char> admit(pool.size(), 0);
        auto tryAdmit = [&](std::size_t p) {
            const Pending& cand = pool[p];
            for (Sym role : cand.needed) {
                bool found = false;
                for (std::size_t j = 0; j < committed && !found; ++j) {
                    found = resolves(cand.sc, store.items[j].sc, role, ctx);
                }
                if (!found) return;
            }
            admit[p] = 1;
        };
        if (mode == ExecMode::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
            for (std::int64_t p = 0; p < static_cast<std::int64_t>(pool.size());
                 ++p) {
                tryAdmit(static_cast<std::size_t>(p));
            }
#else
            for (std::size_t p = 0; p < pool.size(); ++p) tryAdmit(p);
#endif
        } else {
            for (std::size_t p = 0; p < pool.size(); ++p) tryAdmit(p);
        }
        bool any = false;
        std::vector<Pending> rest;
        for (std::size_t p = 0; p < pool.size(); ++p) {
            if (!admit[p]) {
                rest.push_back(std::move(pool[p]));
                continue;
            }
            any = true;
            StoredShortcut item;
            item.sc = std::move(pool[p].sc);
            item.stage = stage;
            item.heightZero = false;
            item.neededRoles = std::move(pool[p].needed);
            for (Sym role : item.neededRoles) {
                for (std::size_t j = 0; j < committed; ++j) {
                    if (resolves(item.sc, store.items[j].sc, role, ctx)) {
                        item.resolve.push_back(
                            ResolveEdge{role, static_cast<int>(j)});
                    }
                }
            }
            store.items.push_back(std::move(item));
            if (store.items.size() > limits.maxStored) {
                throw ResourceLimitError("shortcut store too large");
            }
        }
        pool = std::move(rest);
        if (!any) break;
    }

    // Dependency edges between all stored pairs, grouped by the union of
    // main and prefix part.
    std::map<std::vector<Sym>, std::vector<int>> byUnion;
    for (std::size_t i = 0; i < store.items.size(); ++i) {
        byUnion[sortedUnion(store.items[i].sc.main, store.items[i].sc.prefix)]
            .push_back(static_cast<int>(i));
    }
    for (auto& item : store.items) {
        if (item.sc.prefix.empty()) continue;
        auto it = byUnion.find(item.sc.prefix);
        if (it != byUnion.end()) item.depend = it->second;
    }
    store.alive.assign(store.items.size(), 1);
    return store;
}

ShortcutStore check_existence(ShortcutStore store) {
    std::vector<char> keep = store.alive;
    for (std::size_t i = 0; i < store.items.size(); ++i) {
        if (!store.alive[i]) continue;
        const auto& item = store.items[i];
        if (item.sc.prefix.empty()) continue;
        bool supported = std::any_of(
            item.depend.begin(), item.depend.end(),
            [&store](int j) { return store.alive[j] != 0; });
        if (!supported) keep[i] = 0;
    }
    store.alive = std::move(keep);
    return store;
}

ShortcutStore check_validity(ShortcutStore store) {
    // (i) every needed role keeps a surviving edge
    std::vector<char> keep = store.alive;
    for (std::size_t i = 0; i < store.items.size(); ++i) {
        if (!store.alive[i]) continue;
        const auto& item = store.items[i];
        for (Sym role : item.neededRoles) {
            bool ok = std::any_of(item.resolve.begin(), item.resolve.end(),
                                  [&store, role](const ResolveEdge& e) {
                                      return e.role == role &&
                                             store.alive[e.target] != 0;
                                  });
            if (!ok) {
                keep[i] = 0;
                break;
            }
        }
    }
    // (ii) a height-0 shortcut is reachable along surviving edges.
    // Plain fixpoint; hand-built stores may carry cyclic edges.
    std::vector<char> reaches(store.items.size(), 0);
    for (std::size_t i = 0; i < store.items.size(); ++i) {
        if (store.alive[i] && keep[i] && store.items[i].heightZero) {
            reaches[i] = 1;
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < store.items.size(); ++i) {
            if (reaches[i] || !store.alive[i] || !keep[i]) continue;
            bool hit = std::any_of(
                store.items[i].resolve.begin(), store.items[i].resolve.end(),
                [&](const ResolveEdge& e) {
                    return store.alive[e.target] && keep[e.target] &&
                           reaches[e.target];
                });
            if (hit) {
                reaches[i] = 1;
                changed = true;
            }
        }
    }
    for (std::size_t i = 0; i < store.items.size(); ++i) {
        if (store.alive[i] && keep[i] && !reaches[i]) keep[i] = 0;
    }
    store.alive = std::move(keep);
    return store;
}

// ── main algorithm ──────────────────────────────────────────────────────

namespace {

// Any surviving shortcut with main part exactly aVars and prefix part
// made of bottom variables serves as the initial shortcut for A.
std::optional<Shortcut> findInitialA(const ShortcutStore& store,
                                     const ShortcutContext& ctx) {
    std::optional<Shortcut> best;
    for (std::size_t i = 0; i < store.items.size(); ++i) {
        if (!store.alive[i]) continue;
        const Shortcut& sc = store.items[i].sc;
        if (sc.main != ctx.aVars) continue;
        if (!sortedSubset(sc.prefix, ctx.botVars)) continue;
        if (!best || shortcutLess(sc, *best)) best = sc;
    }
    return best;
}

}  // namespace

MainResult main_decision_ctx(const ShortcutContext& ctx, ExecMode mode,
                             const StoreLimits& limits) {
    MainResult result;
    result.ctx = ctx;
    result.store = all_shortcuts(ctx, mode, limits);

    Shortcut iniBot{ctx.botVars, {}};
    if (ctx.botVars.empty()) {
        // FL0 case: membership of the initial shortcut for the constant.
        auto chosen = findInitialA(result.store, ctx);
        if (chosen && chosen->prefix.empty()) {
            result.success = true;
            result.chosenA = chosen;
        }
        return result;
    }

    int botIdx = result.store.find(iniBot);
    if (botIdx < 0 || !result.store.alive[botIdx]) return result;
    if (!ctx.aVars.empty()) {
        if (!findInitialA(result.store, ctx)) return result;
    }

    std::size_t before = result.store.aliveCount();
    for (;;) {
        ++result.fixpointPasses;
        result.store = check_existence(std::move(result.store));
        result.store = check_validity(std::move(result.store));
        std::size_t after = result.store.aliveCount();
        if (after == before) break;
        before = after;
        if (result.fixpointPasses >
            static_cast<int>(result.store.items.size()) + 1) {
            throw EngineDefect("existence/validity fixpoint did not settle");
        }
    }

    if (!result.store.aliveAt(botIdx)) return result;
    if (!ctx.aVars.empty()) {
        auto chosen = findInitialA(result.store, ctx);
        if (!chosen) return result;
        result.chosenA = chosen;
    }
    result.success = true;
    return result;
}

MainResult main_decision(const NormalizedGoal& ng, ExecMode mode,
                         const StoreLimits& limits) {
    return main_decision_ctx(ShortcutContext::fromNormalizedGoal(ng), mode,
                             limits);
}

// ── dumps ───────────────────────────────────────────────────────────────

namespace {

struct DumpView {
    std::vector<int> order;          // surviving indices, canonical order
    std::vector<int> position;       // store index -> dump index or -1
};

DumpView makeView(const ShortcutStore& store) {
    DumpView view;
    view.order = store.survivors();
    std::sort(view.order.begin(), view.order.end(), [&store](int a, int b) {
        return shortcutLess(store.items[a].sc, store.items[b].sc);
    });
    view.position.assign(store.items.size(), -1);
    for (std::size_t i = 0; i < view.order.size(); ++i) {
        view.position[view.order[i]] = static_cast<int>(i);
    }
    return view;
}

void appendNameList(std::ostringstream& os, const std::vector<Sym>& vs,
                    const Alphabet& alphabet) {
    os << "[";
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (i) os << ", ";
        os << "\"" << alphabet.variableName(vs[i]) << "\"";
    }
    os << "]";
}

}  // namespace

std::string storeToJson(const ShortcutStore& store, const Alphabet& alphabet) {
    DumpView view = makeView(store);
    std::ostringstream os;
    os << "{\"shortcuts\": [";
    for (std::size_t i = 0; i < view.order.size(); ++i) {
        const auto& item = store.items[view.order[i]];
        if (i) os << ", ";
        os << "{\"main\": ";
        appendNameList(os, item.sc.main, alphabet);
        os << ", \"prefix\": ";
        appendNameList(os, item.sc.prefix, alphabet);
        os << ", \"stage\": " << item.stage << "}";
    }
    os << "], \"resolve\": [";
    bool first = true;
    for (int idx : view.order) {
        for (const auto& e : store.items[idx].resolve) {
            if (view.position[e.target] < 0) continue;
            if (!first) os << ", ";
            first = false;
            os << "[" << view.position[idx] << ", \"" << alphabet.roleName(e.role)
               << "\", " << view.position[e.target] << "]";
        }
    }
    os << "], \"depend\": [";
    first = true;
    for (int idx : view.order) {
        for (int t : store.items[idx].depend) {
            if (view.position[t] < 0) continue;
            if (!first) os << ", ";
            first = false;
            os << "[" << view.position[idx] << ", " << view.position[t] << "]";
        }
    }
    os << "]}";
    return os.str();
}

std::string storeToDot(const ShortcutStore& store, const Alphabet& alphabet) {
    DumpView view = makeView(store);
    std::ostringstream os;
    os << "digraph shortcuts {\n  node [shape=box];\n";
    for (std::size_t i = 0; i < view.order.size(); ++i) {
        const auto& item = store.items[view.order[i]];
        os << "  s" << i << " [label=\"" << render(item.sc, alphabet)
           << " #" << item.stage << "\"];\n";
    }
    for (int idx : view.order) {
        for (const auto& e : store.items[idx].resolve) {
            if (view.position[e.target] < 0) continue;
            os << "  s" << view.position[idx] << " -> s" << view.position[e.target]
               << " [label=\"" << alphabet.roleName(e.role) << "\"];\n";
        }
    }
    for (int idx : view.order) {
        for (int t : store.items[idx].depend) {
            if (view.position[t] < 0) continue;
            os << "  s" << view.position[idx] << " -> s" << view.position[t]
               << " [style=dotted];\n";
        }
    }
    os << "}\n";
    return os.str();
}

}  // namespace flbot
