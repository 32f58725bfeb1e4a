// bench_kernels - compares the serial reference kernels with the OpenMP
// ones on the two enumeration hot spots: shortcut candidate filtering
// and oracle assignment search.

#include <chrono>
#include <cstring>
#include <iomanip>
#include <iostream>

#include "flbot/engine.hpp"
#include "flbot/goal_gen.hpp"
#include "flbot/oracle.hpp"

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

// Synthetic normalized goal with a variable chain X0 <= X1 <= ... and a
// decomposition variable per chain member, sized to stress enumeration.
flbot::NormalizedGoal chainGoal(int n) {
    flbot::NormalizedGoal ng;
    std::vector<flbot::Sym> vars, decs;
    flbot::Sym role = ng.alphabet.intern("r", flbot::Alphabet::Kind::Role);
    ng.roles = {role};
    for (int i = 0; i < n; ++i) {
        vars.push_back(ng.alphabet.intern("X" + std::to_string(i),
                                          flbot::Alphabet::Kind::Variable));
    }
    for (int i = 0; i < n; ++i) {
        decs.push_back(
            ng.alphabet.addInternalVariable("X" + std::to_string(i) + "^r"));
        ng.registry.add(vars[i], role, decs[i]);
    }
    for (int i = 0; i < n; ++i) {
        ng.guess[vars[i]] = {flbot::GuessKind::Other, false};
        ng.guess[decs[i]] = {flbot::GuessKind::Other, false};
        if (i + 1 < n) {
            ng.flat.push_back(flbot::FlatSubsumption{{vars[i]}, vars[i + 1]});
        }
        ng.flat.push_back(flbot::FlatSubsumption{{decs[i]}, vars[i]});
    }
    ng.guess[decs[0]] = {flbot::GuessKind::Bot, false};
    return ng;
}

template <typename F>
double timeIt(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    return seconds(t0, std::chrono::steady_clock::now());
}

}  // namespace

int main(int argc, char** argv) {
    int chain = 6;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--chain") && i + 1 < argc) {
            chain = std::atoi(argv[++i]);
        }
    }

    std::cout << std::fixed << std::setprecision(3);
    std::cout << "kernel                         serial      openmp    speedup\n";

    {
        flbot::NormalizedGoal ng = chainGoal(chain);
        flbot::StoreLimits limits;
        limits.maxUniverse = 24;
        flbot::MainResult serialR, parallelR;
        double ts = timeIt([&] {
            serialR = flbot::main_decision(ng, flbot::ExecMode::Serial, limits);
        });
        double tp = timeIt([&] {
            parallelR =
                flbot::main_decision(ng, flbot::ExecMode::Parallel, limits);
        });
        bool same = serialR.success == parallelR.success &&
                    serialR.store.items.size() == parallelR.store.items.size();
        std::cout << "shortcut enumeration (n=" << 2 * chain << ")   " << std::setw(7)
                  << ts << "s   " << std::setw(7) << tp << "s   " << std::setw(6)
                  << (tp > 0 ? ts / tp : 0.0) << (same ? "" : "  MISMATCH")
                  << "\n";
    }

    {
        flbot::Goal goal = flbot::random_goal(12345);
        flbot::OracleBounds bounds{2, 2};
        flbot::OracleResult serialR, parallelR;
        double ts = timeIt([&] {
            serialR = flbot::brute_force_unifiable(goal, bounds,
                                                   flbot::ExecMode::Serial);
        });
        double tp = timeIt([&] {
            parallelR = flbot::brute_force_unifiable(goal, bounds,
                                                     flbot::ExecMode::Parallel);
        });
        bool same = serialR.found == parallelR.found &&
                    (!serialR.found || serialR.witness == parallelR.witness);
        std::cout << "oracle search                " << std::setw(7) << ts
                  << "s   " << std::setw(7) << tp << "s   " << std::setw(6)
                  << (tp > 0 ? ts / tp : 0.0) << (same ? "" : "  MISMATCH")
                  << "\n";
    }
    return 0;
}
