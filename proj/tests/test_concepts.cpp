#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "flbot/concepts.hpp"
#include "flbot/goal_gen.hpp"
#include "test_support.hpp"

using namespace flbot;

namespace {

ParticleSet parseSet(Alphabet& a, const std::string& text) {
    return normalize(parse_concept(text, a));
}

}  // namespace

TEST_CASE("parser follows the grammar") {
    Alphabet a;
    ConceptAst ast = parse_concept("all r.(A and B)", a);
    CHECK(ast.kind == ConceptAst::Kind::Forall);
    REQUIRE(ast.children.size() == 1);
    CHECK(ast.children[0].kind == ConceptAst::Kind::Conj);
    CHECK(ast.children[0].children.size() == 2);

    CHECK(parse_concept("top", a).kind == ConceptAst::Kind::Top);

    CHECK_THROWS_AS(parse_concept("all . A", a), ParseError);
    CHECK_THROWS_AS(parse_concept("A and", a), ParseError);
    try {
        parse_concept("all . A", a);
    } catch (const ParseError& e) {
        CHECK(e.col == 5);
    }
}

TEST_CASE("identifier categories are exclusive") {
    Alphabet a;
    parse_concept("all r.A", a);
    CHECK_THROWS_AS(parse_concept("r", a), InputError);       // role as name
    CHECK_THROWS_AS(parse_concept("all A.top", a), InputError);  // name as role
}

TEST_CASE("normalization distributes restrictions over conjunction") {
    Alphabet a;
    ParticleSet s = parseSet(a, "all r.(A and B)");
    CHECK(s == parseSet(a, "all r.A and all r.B"));
    CHECK(s.size() == 2);

    CHECK(parseSet(a, "top").empty());
    CHECK(parseSet(a, "all r.top").empty());

    ParticleSet single = parseSet(a, "A");
    REQUIRE(single.size() == 1);
    CHECK(single[0].bare());
}

TEST_CASE("reduce deletes dominated particles") {
    Alphabet a;
    CHECK(parseSet(a, "all r.bot and all r.A and all r.all s.B") ==
          parseSet(a, "all r.bot"));
    CHECK(parseSet(a, "bot and all r.A") == parseSet(a, "bot"));
    ParticleSet untouched = parseSet(a, "A and all s.B");
    CHECK(untouched.size() == 2);
    CHECK(reduce(untouched) == untouched);
}

TEST_CASE("particle prefixes") {
    Alphabet a;
    auto one = [&a](const std::string& text) {
        ParticleSet s = parseSet(a, text);
        REQUIRE(s.size() == 1);
        return s[0];
    };
    CHECK(is_prefix(one("bot"), one("A")));
    CHECK(is_prefix(one("all r.bot"), one("all r.all s.bot")));
    CHECK_FALSE(is_prefix(one("all r.A"), one("all r.all s.A")));
    CHECK_FALSE(is_prefix(one("all r.bot"), one("all r.bot")));
    // bottom prefixes a constant at the same depth
    CHECK(is_prefix(one("all r.bot"), one("all r.A")));
}

TEST_CASE("subsumption characterization") {
    Alphabet a;
    CHECK_FALSE(subsumes(parseSet(a, "all r.bot"), parseSet(a, "bot")));
    CHECK(subsumes(parseSet(a, "all r.bot"), parseSet(a, "all r.all s.A")));
    CHECK_FALSE(subsumes(parseSet(a, "top"), parseSet(a, "A")));
    CHECK(subsumes(parseSet(a, "A and B"), parseSet(a, "A")));
}

TEST_CASE("subsumption rejects variable heads") {
    Goal g = parse_goal("vars: X\nX <= X\n");
    CHECK_THROWS_AS(subsumes(g.subsumptions[0].lhs, g.subsumptions[0].lhs),
                    EngineDefect);
}

TEST_CASE("rendering round-trips through the parser") {
    Alphabet a = small_alphabet(2, 2);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        ParticleSet s = random_particle_set(rng, a, 3, 3);
        Alphabet b = a;
        CHECK(normalize(parse_concept(render(s, a), b)) == s);
    }
}

TEST_CASE("subsumption laws on random reduced sets") {
    Alphabet a = small_alphabet(2, 1);
    std::mt19937_64 rng(11);
    ParticleSet bottom{Particle{{}, botHead()}};
    for (int i = 0; i < 300; ++i) {
        ParticleSet c = random_particle_set(rng, a, 2, 3);
        ParticleSet d = random_particle_set(rng, a, 2, 3);
        ParticleSet e = random_particle_set(rng, a, 2, 3);
        CAPTURE(render(c, a));
        CAPTURE(render(d, a));

        CHECK(subsumes(c, c));
        if (subsumes(c, d) && subsumes(d, e)) CHECK(subsumes(c, e));

        // conjunction is the meet
        ParticleSet meet = reduce(makeSet([&] {
            std::vector<Particle> u = c;
            u.insert(u.end(), d.begin(), d.end());
            return u;
        }()));
        CHECK(subsumes(meet, c));
        CHECK(subsumes(meet, d));

        CHECK(subsumes(bottom, c));  // {bot} below everything
        CHECK(subsumes(c, {}));      // top above everything
    }
}

TEST_CASE("reduce is idempotent and equivalence preserving") {
    Alphabet a = small_alphabet(2, 1);
    std::mt19937_64 rng(13);
    for (int i = 0; i < 300; ++i) {
        // raw sets, including top particles and dominated members
        std::vector<Particle> raw;
        int n = static_cast<int>(rng() % 5);
        for (int k = 0; k < n; ++k) {
            Particle p;
            int depth = static_cast<int>(rng() % 3);
            for (int j = 0; j < depth; ++j) {
                p.path.push_back(static_cast<Sym>(rng() % 2));
            }
            switch (rng() % 3) {
                case 0: p.head = botHead(); break;
                case 1: p.head = topHead(); break;
                default: p.head = constantHead(0); break;
            }
            raw.push_back(std::move(p));
        }
        ParticleSet s = makeSet(raw);
        ParticleSet r = reduce(s);
        CHECK(reduce(r) == r);
        CHECK(subsumes(r, s));
        CHECK(subsumes(s, r));
    }
}

TEST_CASE("prefix relation is transitive and irreflexive on bottoms") {
    Alphabet a = small_alphabet(2, 0);
    std::mt19937_64 rng(17);
    auto randomBot = [&rng] {
        Particle p;
        int depth = static_cast<int>(rng() % 4);
        for (int j = 0; j < depth; ++j) {
            p.path.push_back(static_cast<Sym>(rng() % 2));
        }
        p.head = botHead();
        return p;
    };
    for (int i = 0; i < 300; ++i) {
        Particle p = randomBot(), q = randomBot(), r = randomBot();
        CHECK_FALSE(is_prefix(p, p));
        if (is_prefix(p, q) && is_prefix(q, r)) CHECK(is_prefix(p, r));
    }
}
