#include "flbot/goal.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace flbot {

namespace {

std::vector<std::string> splitLines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    lines.push_back(cur);
    return lines;
}

std::string stripComment(const std::string& line) {
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> splitCommaList(const std::string& s, int line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
        std::string name = trim(cur);
        if (name.empty()) {
            if (trim(s).empty()) break;  // an empty list is allowed
            throw ParseError("empty name in list", line, 1);
        }
        out.push_back(name);
    }
    return out;
}

}  // namespace

std::vector<Sym> Goal::occurringRoles() const {
    std::set<Sym> acc;
    for (const auto& gs : subsumptions) {
        for (const auto& p : gs.lhs) acc.insert(p.path.begin(), p.path.end());
        acc.insert(gs.rhs.path.begin(), gs.rhs.path.end());
    }
    return {acc.begin(), acc.end()};
}

std::vector<Sym> Goal::occurringConstants() const {
    std::set<Sym> acc;
    auto scan = [&acc](const Particle& p) {
        if (p.head.kind == HeadKind::Constant) acc.insert(p.head.name);
    };
    for (const auto& gs : subsumptions) {
        for (const auto& p : gs.lhs) scan(p);
        scan(gs.rhs);
    }
    return {acc.begin(), acc.end()};
}

std::vector<Sym> Goal::occurringVariables() const {
    std::set<Sym> acc;
    auto scan = [&acc](const Particle& p) {
        if (p.head.kind == HeadKind::Variable) acc.insert(p.head.name);
    };
    for (const auto& gs : subsumptions) {
        for (const auto& p : gs.lhs) scan(p);
        scan(gs.rhs);
    }
    std::vector<Sym> out;
    for (Sym v : declaredVariables) {
        if (acc.count(v)) out.push_back(v);
    }
    return out;
}

const ParticleSet& Substitution::image(Sym var) const {
    static const ParticleSet kTop;
    auto it = images.find(var);
    return it == images.end() ? kTop : it->second;
}

Goal parse_goal(const std::string& text) {
    Goal goal;
    bool sawVars = false;
    auto lines = splitLines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        int lineNo = static_cast<int>(i) + 1;
        std::string line = trim(stripComment(lines[i]));
        if (line.empty()) continue;
        if (line.rfind("vars:", 0) == 0) {
            if (sawVars) throw ParseError("duplicate vars: line", lineNo, 1);
            sawVars = true;
            for (const auto& name : splitCommaList(line.substr(5), lineNo)) {
                goal.declaredVariables.push_back(
                    goal.alphabet.intern(name, Alphabet::Kind::Variable));
            }
            continue;
        }
        if (line.rfind("roles:", 0) == 0) {
            for (const auto& name : splitCommaList(line.substr(6), lineNo)) {
                goal.alphabet.intern(name, Alphabet::Kind::Role);
            }
            continue;
        }
        if (!sawVars) {
            throw ParseError("goal line before vars: declaration", lineNo, 1);
        }
        bool equivalence = false;
        auto pos = line.find("<=");
        if (pos == std::string::npos) {
            pos = line.find("==");
            equivalence = true;
        }
        if (pos == std::string::npos) {
            throw ParseError("expected '<=' or '==' in goal line", lineNo, 1);
        }
        std::string lhsText = line.substr(0, pos);
        std::string rhsText = line.substr(pos + 2);
        ConceptAst lhsAst = parse_concept(lhsText, goal.alphabet, lineNo);
        ConceptAst rhsAst = parse_concept(rhsText, goal.alphabet, lineNo);
        ParticleSet lhs = normalize(lhsAst);
        ParticleSet rhs = normalize(rhsAst);
        for (const auto& p : rhs) {
            goal.subsumptions.push_back(GoalSubsumption{lhs, p});
        }
        if (equivalence) {
            for (const auto& p : lhs) {
                goal.subsumptions.push_back(GoalSubsumption{rhs, p});
            }
        }
    }
    if (!sawVars) throw ParseError("missing vars: declaration", 1, 1);
    return goal;
}

namespace {

// Replaces all constants except `keep` by top, in place.
Particle eraseOtherConstants(Particle p, Sym keep) {
    if (p.head.kind == HeadKind::Constant && p.head.name != keep) {
        p.head = topHead();
    }
    return p;
}

}  // namespace

std::vector<Goal> split_by_constant(const Goal& goal) {
    std::vector<Sym> constants = goal.occurringConstants();
    if (constants.size() <= 1) return {goal};
    std::sort(constants.begin(), constants.end(), [&goal](Sym a, Sym b) {
        return goal.alphabet.constantName(a) < goal.alphabet.constantName(b);
    });
    std::vector<Goal> out;
    for (Sym keep : constants) {
        Goal sub;
        sub.alphabet = goal.alphabet;
        sub.declaredVariables = goal.declaredVariables;
        for (const auto& gs : goal.subsumptions) {
            Particle rhs = eraseOtherConstants(gs.rhs, keep);
            if (rhs.head.kind == HeadKind::Top) continue;
            ParticleSet lhs;
            lhs.reserve(gs.lhs.size());
            for (const auto& p : gs.lhs) {
                lhs.push_back(eraseOtherConstants(p, keep));
            }
            sub.subsumptions.push_back(
                GoalSubsumption{reduce(std::move(lhs)), rhs});
        }
        out.push_back(std::move(sub));
    }
    return out;
}

ParticleSet apply_substitution(const Substitution& sigma,
                               const ParticleSet& s) {
    std::vector<Particle> out;
    out.reserve(s.size());
    for (const auto& p : s) {
        if (p.head.kind != HeadKind::Variable) {
            out.push_back(p);
            continue;
        }
        for (const auto& q : sigma.image(p.head.name)) {
            std::vector<Sym> path = p.path;
            path.insert(path.end(), q.path.begin(), q.path.end());
            out.push_back(Particle{std::move(path), q.head});
        }
    }
    return reduce(makeSet(std::move(out)));
}

bool verify_unifier(const Goal& goal, const Substitution& sigma) {
    for (const auto& gs : goal.subsumptions) {
        ParticleSet lhs = apply_substitution(sigma, gs.lhs);
        ParticleSet rhs = apply_substitution(sigma, {gs.rhs});
        if (!subsumes(lhs, rhs)) return false;
    }
    return true;
}

Substitution merge_substitutions(const std::vector<Substitution>& parts) {
    Substitution merged;
    for (const auto& part : parts) {
        for (const auto& [var, image] : part.images) {
            auto& acc = merged.images[var];
            acc.insert(acc.end(), image.begin(), image.end());
        }
    }
    for (auto& [var, image] : merged.images) {
        image = reduce(makeSet(std::move(image)));
    }
    return merged;
}

Substitution parse_substitution(const std::string& text, Alphabet& alphabet) {
    Substitution sigma;
    auto lines = splitLines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        int lineNo = static_cast<int>(i) + 1;
        std::string line = trim(stripComment(lines[i]));
        if (line.empty()) continue;
        auto pos = line.find(":=");
        if (pos == std::string::npos) {
            throw ParseError("expected 'X := <concept>'", lineNo, 1);
        }
        std::string name = trim(line.substr(0, pos));
        auto found = alphabet.find(name);
        if (!found || found->first != Alphabet::Kind::Variable) {
            throw InputError("substitution for undeclared variable '" + name +
                             "'");
        }
        ConceptAst ast = parse_concept(line.substr(pos + 2), alphabet, lineNo);
        ParticleSet image = normalize(ast);
        if (!isGround(image)) {
            throw InputError("substitution image for '" + name +
                             "' contains variables");
        }
        sigma.images[found->second] = std::move(image);
    }
    return sigma;
}

std::string render_substitution(const Substitution& sigma, const Goal& goal) {
    std::ostringstream os;
    for (Sym v : goal.declaredVariables) {
        os << goal.alphabet.variableName(v) << " := "
           << render(sigma.image(v), goal.alphabet) << "\n";
    }
    return os.str();
}

std::string render(const GoalSubsumption& gs, const Alphabet& alphabet) {
    return render(gs.lhs, alphabet) + " <= " + render(gs.rhs, alphabet);
}

}  // namespace flbot
