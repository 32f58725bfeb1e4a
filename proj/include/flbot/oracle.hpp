// oracle.hpp - bounded brute-force unifiability oracle.
//
// Enumerates every reduced ground image up to a depth and width bound
// and tries all assignments to the goal variables, verifying each
// candidate directly against the goal.  A miss is a bounded verdict, not
// a refutation.  Assignment trials have a chunked OpenMP kernel with
// first-hit-in-canonical-order semantics matching the serial reference.

#ifndef FLBOT_ORACLE_HPP
#define FLBOT_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "flbot/goal.hpp"
#include "flbot/shortcuts.hpp"

namespace flbot {

struct OracleBounds {
    int maxDepth = 1;  // maximum particle role depth
    int maxWidth = 1;  // maximum particles per image
};

// Every reduced ParticleSet over the alphabet with at most maxWidth
// particles of depth at most maxDepth, including top (empty) and {bot},
// each exactly once, in canonical order.
std::vector<ParticleSet> enumerate_images(const std::vector<Sym>& roles,
                                          const std::vector<Sym>& constants,
                                          const OracleBounds& bounds);

struct OracleResult {
    bool found = false;
    Substitution witness;             // valid when found
    std::uint64_t assignments = 0;    // trials attempted or planned
};

// First assignment (canonical order) whose substitution verifies the
// goal; NONE within bounds otherwise.  Throws ResourceLimitError when
// the assignment space exceeds the cap.
OracleResult brute_force_unifiable(const Goal& goal, const OracleBounds& bounds,
                                   ExecMode mode = ExecMode::Serial,
                                   std::uint64_t cap = 50000000);

}  // namespace flbot

#endif  // FLBOT_ORACLE_HPP
