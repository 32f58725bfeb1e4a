// Shared helpers for the unit tests.

#ifndef FLBOT_TEST_SUPPORT_HPP
#define FLBOT_TEST_SUPPORT_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "flbot/goal.hpp"

namespace flbot::test {

inline std::string readData(const std::string& name) {
    std::ifstream in(std::string(FLBOT_TEST_DATA) + "/" + name);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline Goal loadGoal(const std::string& name) {
    return parse_goal(readData(name));
}

// Concept parsed against a goal's alphabet (shared ids).
inline ParticleSet conceptOf(const Goal& goal, const std::string& text) {
    Alphabet a = goal.alphabet;
    return normalize(parse_concept(text, a));
}

inline Substitution subst(const Goal& goal,
                          std::initializer_list<std::pair<std::string, std::string>>
                              entries) {
    std::ostringstream os;
    for (const auto& [var, img] : entries) os << var << " := " << img << "\n";
    Alphabet a = goal.alphabet;
    return parse_substitution(os.str(), a);
}

}  // namespace flbot::test

#endif
