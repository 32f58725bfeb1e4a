// goal_gen.hpp - deterministic random goal generation for the test
// harnesses and the benchmark tool.

#ifndef FLBOT_GOAL_GEN_HPP
#define FLBOT_GOAL_GEN_HPP

#include <cstdint>
#include <random>

#include "flbot/goal.hpp"

namespace flbot {

struct GenParams {
    int maxVariables = 3;
    int maxRoles = 2;
    int maxConstants = 1;
    int maxLines = 3;
    int maxDepth = 2;      // depth of generated concept trees
    int maxConjuncts = 3;
};

// Random goal within the bounds; the same seed always yields the same
// goal.  Concepts are drawn over the declared variables, roles and
// constants with a bias towards variables on both sides.
Goal random_goal(std::uint64_t seed, const GenParams& params = {});

// Random ground reduced particle set (for subsumption property tests).
ParticleSet random_particle_set(std::mt19937_64& rng, const Alphabet& alphabet,
                                int maxDepth, int maxWidth);

// Alphabet with the given counts of roles/constants (r0..., A0..., no
// variables), for particle-set generation.
Alphabet small_alphabet(int roles, int constants);

}  // namespace flbot

#endif  // FLBOT_GOAL_GEN_HPP
