#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "flbot/goal.hpp"
#include "flbot/goal_gen.hpp"
#include "flbot/oracle.hpp"
#include "test_support.hpp"

using namespace flbot;
using flbot::test::conceptOf;
using flbot::test::loadGoal;
using flbot::test::subst;

namespace {

GoalSubsumption sub(const Goal& g, const std::string& lhs,
                    const std::string& rhs) {
    ParticleSet r = conceptOf(g, rhs);
    REQUIRE(r.size() == 1);
    return GoalSubsumption{conceptOf(g, lhs), r[0]};
}

bool sameSubsumptions(const std::vector<GoalSubsumption>& a,
                      std::vector<GoalSubsumption> b) {
    if (a.size() != b.size()) return false;
    for (const auto& gs : a) {
        auto it = std::find(b.begin(), b.end(), gs);
        if (it == b.end()) return false;
        b.erase(it);
    }
    return true;
}

}  // namespace

TEST_CASE("goal parsing expands right-hand conjunctions") {
    Goal g = parse_goal("vars: X\nX <= all r.X and A\n");
    CHECK(sameSubsumptions(g.subsumptions,
                           {sub(g, "X", "all r.X"), sub(g, "X", "A")}));

    Goal eq = parse_goal("vars:\nA == A\n");
    CHECK(eq.subsumptions.size() == 2);

    Goal top = parse_goal("vars: X\nX <= top\n");
    CHECK(top.subsumptions.empty());
}

TEST_CASE("goal parsing rejects bad input") {
    CHECK_THROWS_AS(parse_goal("X <= A\n"), ParseError);        // no vars:
    CHECK_THROWS_AS(parse_goal("vars: X\nX A\n"), ParseError);  // no relation
    CHECK_THROWS_AS(parse_goal("vars: X\nX <= all ,.A\n"), ParseError);
}

TEST_CASE("constant split of the two-constant goal") {
    Goal g = loadGoal("example1.goal");
    std::vector<Goal> parts = split_by_constant(g);
    REQUIRE(parts.size() == 2);
    // constants in name order: A first
    CHECK(sameSubsumptions(
        parts[0].subsumptions,
        {sub(parts[0], "X", "all r.X"), sub(parts[0], "X", "A")}));
    CHECK(sameSubsumptions(parts[1].subsumptions,
                           {sub(parts[1], "all r.B and X", "all r.X")}));
}

TEST_CASE("split is the identity for at most one constant") {
    Goal one = parse_goal("vars: X\nX <= A\n");
    CHECK(split_by_constant(one).size() == 1);
    Goal none = parse_goal("vars: X\nX <= all r.X\n");
    REQUIRE(split_by_constant(none).size() == 1);
    CHECK(split_by_constant(none)[0].subsumptions == none.subsumptions);
}

TEST_CASE("substitution application") {
    Goal g = parse_goal("vars: X\nX <= A\n");
    CHECK(apply_substitution(subst(g, {{"X", "bot"}}),
                             conceptOf(g, "all r.X")) ==
          conceptOf(g, "all r.bot"));
    CHECK(apply_substitution(subst(g, {{"X", "top"}}),
                             conceptOf(g, "all r.X and A")) ==
          conceptOf(g, "A"));
    Goal h = parse_goal("vars: X\nall s.X <= A\n");
    CHECK(apply_substitution(subst(h, {{"X", "A and all r.bot"}}),
                             conceptOf(h, "all s.X")) ==
          conceptOf(h, "all s.A and all s.all r.bot"));
}

TEST_CASE("unifier verification") {
    Goal gA = parse_goal("vars: X\nX <= all r.X and A\n");
    CHECK(verify_unifier(gA, subst(gA, {{"X", "bot"}})));
    CHECK_FALSE(verify_unifier(gA, subst(gA, {})));

    Goal cross = loadGoal("cross.goal");
    CHECK(verify_unifier(
        cross, subst(cross, {{"X", "all r.A and all r.all r.bot"},
                             {"Y", "all r.all r.bot"}})));
}

TEST_CASE("substitution merge takes reduced unions") {
    Goal g = parse_goal("vars: X\nX <= A\n");
    Substitution bot = subst(g, {{"X", "bot"}});
    Substitution b = subst(g, {{"X", "B"}});
    CHECK(merge_substitutions({bot, b}) == bot);
    CHECK(merge_substitutions({b}) == b);

    Goal two = parse_goal("vars: X, Y\nX and Y <= A\n");
    Substitution left = subst(two, {{"X", "A"}});
    Substitution right = subst(two, {{"Y", "B"}});
    Substitution merged = merge_substitutions({left, right});
    CHECK(merged.image(two.declaredVariables[0]) == conceptOf(two, "A"));
    CHECK(merged.image(two.declaredVariables[1]) == conceptOf(two, "B"));
}

TEST_CASE("application distributes over reduced union") {
    Alphabet a = small_alphabet(2, 1);
    std::mt19937_64 rng(23);
    for (int i = 0; i < 100; ++i) {
        // random ground sets plus a variable-headed particle each
        auto randomLhs = [&](int var) {
            std::vector<Particle> ps = random_particle_set(rng, a, 2, 2);
            Particle v;
            int depth = static_cast<int>(rng() % 2);
            for (int j = 0; j < depth; ++j) {
                v.path.push_back(static_cast<Sym>(rng() % 2));
            }
            v.head = variableHead(static_cast<Sym>(var));
            ps.push_back(v);
            return makeSet(std::move(ps));
        };
        ParticleSet c = randomLhs(0), d = randomLhs(1);
        Substitution sigma;
        sigma.images[0] = random_particle_set(rng, a, 2, 2);
        sigma.images[1] = random_particle_set(rng, a, 2, 2);

        ParticleSet unionCd = reduce(makeSet([&] {
            std::vector<Particle> u = c;
            u.insert(u.end(), d.begin(), d.end());
            return u;
        }()));
        ParticleSet lhs = apply_substitution(sigma, unionCd);
        ParticleSet rhs = reduce(makeSet([&] {
            std::vector<Particle> u = apply_substitution(sigma, c);
            ParticleSet dd = apply_substitution(sigma, d);
            u.insert(u.end(), dd.begin(), dd.end());
            return u;
        }()));
        CHECK(subsumes(lhs, rhs));
        CHECK(subsumes(rhs, lhs));
    }
}

TEST_CASE("split then merge preserves solutions on random goals") {
    int merged = 0;
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        GenParams params;
        params.maxConstants = 2;
        Goal g = random_goal(seed, params);
        std::vector<Goal> parts = split_by_constant(g);
        if (parts.size() < 2) continue;
        std::vector<Substitution> sigmas;
        bool all = true;
        for (const Goal& part : parts) {
            OracleResult r = brute_force_unifiable(part, OracleBounds{1, 1});
            if (!r.found) {
                all = false;
                break;
            }
            sigmas.push_back(r.witness);
        }
        if (!all) continue;
        ++merged;
        CHECK(verify_unifier(g, merge_substitutions(sigmas)));
    }
    CHECK(merged > 3);  // the seed range does exercise the merge path
}

TEST_CASE("substitution files") {
    Goal g = parse_goal("vars: X, Y\nroles: r\nX and Y <= A\n");
    Alphabet a1 = g.alphabet;
    Substitution s = parse_substitution("X := A and all r.bot\n", a1);
    CHECK(s.image(g.declaredVariables[0]) == conceptOf(g, "A and all r.bot"));
    CHECK(s.image(g.declaredVariables[1]).empty());  // unlisted means top

    Alphabet a2 = g.alphabet;
    CHECK_THROWS_AS(parse_substitution("Z := A\n", a2), InputError);
    Alphabet a3 = g.alphabet;
    CHECK_THROWS_AS(parse_substitution("X := Y\n", a3), InputError);  // not ground

    std::string rendered = render_substitution(s, g);
    Alphabet a4 = g.alphabet;
    Substitution back = parse_substitution(rendered, a4);
    CHECK(back.image(g.declaredVariables[0]) ==
          s.image(g.declaredVariables[0]));
}
