#include "flbot/oracle.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flbot {

namespace {

void pathsUpTo(const std::vector<Sym>& roles, int maxDepth,
               std::vector<Sym>& cur, std::vector<std::vector<Sym>>& out) {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) == maxDepth) return;
    for (Sym r : roles) {
        cur.push_back(r);
        pathsUpTo(roles, maxDepth, cur, out);
        cur.pop_back();
    }
}

bool reducedSet(const std::vector<Particle>& ps) {
    for (const auto& p : ps) {
        if (p.bare() && p.head.kind == HeadKind::Bot && ps.size() > 1) {
            return false;
        }
        for (const auto& q : ps) {
            if (is_prefix(p, q)) return false;
        }
    }
    return true;
}

}  // namespace

std::vector<ParticleSet> enumerate_images(const std::vector<Sym>& roles,
                                          const std::vector<Sym>& constants,
                                          const OracleBounds& bounds) {
    std::vector<std::vector<Sym>> paths;
    std::vector<Sym> cur;
    pathsUpTo(roles, bounds.maxDepth, cur, paths);

    std::vector<Particle> universe;
    for (const auto& path : paths) {
        universe.push_back(Particle{path, botHead()});
        for (Sym c : constants) universe.push_back(Particle{path, constantHead(c)});
    }
    std::sort(universe.begin(), universe.end(), particleLess);

    // Subsets kept only when already reduced, so each reduced set appears
    // exactly once.  A non-reduced set has no reduced superset, which
    // prunes the recursion.
    std::vector<ParticleSet> images;
    images.push_back({});  // top
    std::vector<Particle> current;
    auto rec = [&](auto&& self, std::size_t start) -> void {
        if (static_cast<int>(current.size()) >= bounds.maxWidth) return;
        for (std::size_t i = start; i < universe.size(); ++i) {
            current.push_back(universe[i]);
            if (reducedSet(current)) {
                images.push_back(makeSet(current));
                self(self, i + 1);
            }
            current.pop_back();
        }
    };
    rec(rec, 0);
    return images;
}

OracleResult brute_force_unifiable(const Goal& goal, const OracleBounds& bounds,
                                   ExecMode mode, std::uint64_t cap) {
    std::vector<Sym> vars = goal.occurringVariables();
    std::vector<ParticleSet> images = enumerate_images(
        goal.occurringRoles(), goal.occurringConstants(), bounds);

    OracleResult result;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        if (total > cap / images.size() + 1) {
            throw ResourceLimitError("oracle assignment space exceeds cap");
        }
        total *= images.size();
    }
    if (total > cap) {
        throw ResourceLimitError("oracle assignment space exceeds cap");
    }
    result.assignments = total;

    auto substitutionAt = [&](std::uint64_t index) {
        Substitution sigma;
        for (Sym v : vars) {
            sigma.images[v] = images[index % images.size()];
            index /= images.size();
        }
        return sigma;
    };

    if (mode == ExecMode::Serial) {
        for (std::uint64_t i = 0; i < total; ++i) {
            Substitution sigma = substitutionAt(i);
            if (verify_unifier(goal, sigma)) {
                result.found = true;
                result.witness = std::move(sigma);
                return result;
            }
        }
        return result;
    }

#ifdef _OPENMP
    const std::uint64_t chunk = 4096;
    for (std::uint64_t base = 0; base < total; base += chunk) {
        std::uint64_t end = std::min(total, base + chunk);
        std::uint64_t hit = UINT64_MAX;
#pragma omp parallel for schedule(static) reduction(min : hit)
        for (std::int64_t i = static_cast<std::int64_t>(base);
             i < static_cast<std::int64_t>(end); ++i) {
            if (verify_unifier(goal,
                               substitutionAt(static_cast<std::uint64_t>(i)))) {
                hit = std::min(hit, static_cast<std::uint64_t>(i));
            }
        }
        if (hit != UINT64_MAX) {
            result.found = true;
            result.witness = substitutionAt(hit);
            return result;
        }
    }
    return result;
#else
    for (std::uint64_t i = 0; i < total; ++i) {
        Substitution sigma = substitutionAt(i);
        if (verify_unifier(goal, sigma)) {
            result.found = true;
            result.witness = std::move(sigma);
            return result;
        }
    }
    return result;
#endif
}

}  // namespace flbot
