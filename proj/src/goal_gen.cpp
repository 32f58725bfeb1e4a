#include "flbot/goal_gen.hpp"

#include <sstream>

namespace flbot {

namespace {

int pick(std::mt19937_64& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Renders a random concept tree into concrete syntax.
std::string randomConcept(std::mt19937_64& rng, int vars, int roles,
                          int constants, int depth, int maxConjuncts) {
    std::ostringstream os;
    int conjuncts = pick(rng, 1, maxConjuncts);
    for (int i = 0; i < conjuncts; ++i) {
        if (i) os << " and ";
        int d = depth > 0 ? pick(rng, 0, depth) : 0;
        for (int k = 0; k < d; ++k) {
            os << "all r" << pick(rng, 0, roles - 1) << ".";
        }
        int kind = pick(rng, 0, 9);
        if (kind < 5 && vars > 0) {
            os << "X" << pick(rng, 0, vars - 1);
        } else if (kind < 7 && constants > 0) {
            os << "A" << pick(rng, 0, constants - 1);
        } else if (kind < 8) {
            os << "bot";
        } else if (vars > 0) {
            os << "X" << pick(rng, 0, vars - 1);
        } else {
            os << "top";
        }
    }
    return os.str();
}

}  // namespace

Goal random_goal(std::uint64_t seed, const GenParams& params) {
    std::mt19937_64 rng(seed);
    int vars = pick(rng, 1, params.maxVariables);
    int roles = pick(rng, 1, params.maxRoles);
    int constants = pick(rng, 0, params.maxConstants);
    int lines = pick(rng, 1, params.maxLines);

    std::ostringstream os;
    os << "vars: ";
    for (int i = 0; i < vars; ++i) {
        if (i) os << ", ";
        os << "X" << i;
    }
    os << "\nroles: ";
    for (int i = 0; i < roles; ++i) {
        if (i) os << ", ";
        os << "r" << i;
    }
    os << "\n";
    for (int i = 0; i < lines; ++i) {
        std::string lhs = randomConcept(rng, vars, roles, constants,
                                        params.maxDepth, params.maxConjuncts);
        // Right sides stay shallow so goals keep a healthy mix of
        // unifiable and non-unifiable instances.
        std::string rhs = randomConcept(rng, vars, roles, constants,
                                        params.maxDepth, 2);
        os << lhs << " <= " << rhs << "\n";
    }
    return parse_goal(os.str());
}

Alphabet small_alphabet(int roles, int constants) {
    Alphabet a;
    for (int i = 0; i < roles; ++i) a.intern("r" + std::to_string(i),
                                             Alphabet::Kind::Role);
    for (int i = 0; i < constants; ++i) a.intern("A" + std::to_string(i),
                                                 Alphabet::Kind::Constant);
    return a;
}

ParticleSet random_particle_set(std::mt19937_64& rng, const Alphabet& alphabet,
                                int maxDepth, int maxWidth) {
    std::vector<Particle> ps;
    int width = pick(rng, 0, maxWidth);
    for (int i = 0; i < width; ++i) {
        Particle p;
        int d = pick(rng, 0, maxDepth);
        for (int k = 0; k < d; ++k) {
            p.path.push_back(pick(rng, 0, alphabet.roleCount() - 1));
        }
        int kind = pick(rng, 0, 5);
        if (kind == 0) {
            p.head = botHead();
        } else if (alphabet.constantCount() > 0) {
            p.head = constantHead(pick(rng, 0, alphabet.constantCount() - 1));
        } else {
            p.head = botHead();
        }
        ps.push_back(std::move(p));
    }
    return reduce(makeSet(std::move(ps)));
}

}  // namespace flbot
