#include "flbot/concepts.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace flbot {

// ── alphabet ────────────────────────────────────────────────────────────

namespace {

const char* kindWord(Alphabet::Kind k) {
    switch (k) {
        case Alphabet::Kind::Role: return "role";
        case Alphabet::Kind::Constant: return "constant";
        case Alphabet::Kind::Variable: return "variable";
    }
    return "?";
}

}  // namespace

Sym Alphabet::intern(const std::string& name, Kind kind) {
    auto it = byName_.find(name);
    if (it != byName_.end()) {
        if (it->second.first != kind) {
            throw InputError("identifier '" + name + "' already declared as " +
                             kindWord(it->second.first) + ", used as " +
                             kindWord(kind));
        }
        return it->second.second;
    }
    std::vector<std::string>* table = nullptr;
    switch (kind) {
        case Kind::Role: table = &roles_; break;
        case Kind::Constant: table = &constants_; break;
        case Kind::Variable: table = &variables_; break;
    }
    Sym id = static_cast<Sym>(table->size());
    table->push_back(name);
    byName_.emplace(name, std::make_pair(kind, id));
    return id;
}

std::optional<std::pair<Alphabet::Kind, Sym>> Alphabet::find(
    const std::string& name) const {
    auto it = byName_.find(name);
    if (it == byName_.end()) return std::nullopt;
    return it->second;
}

Sym Alphabet::addInternalVariable(const std::string& display) {
    if (byName_.count(display)) {
        throw EngineDefect("internal variable name collision: " + display);
    }
    Sym id = static_cast<Sym>(variables_.size());
    variables_.push_back(display);
    byName_.emplace(display, std::make_pair(Kind::Variable, id));
    return id;
}

// ── particles ───────────────────────────────────────────────────────────

bool particleLess(const Particle& a, const Particle& b) {
    if (a.path != b.path) {
        return std::lexicographical_compare(a.path.begin(), a.path.end(),
                                            b.path.begin(), b.path.end());
    }
    if (a.head.kind != b.head.kind) return a.head.kind < b.head.kind;
    return a.head.name < b.head.name;
}

Particle makeParticle(std::vector<Sym> path, Head head) {
    return Particle{std::move(path), head};
}

ParticleSet makeSet(std::vector<Particle> particles) {
    std::sort(particles.begin(), particles.end(), particleLess);
    particles.erase(std::unique(particles.begin(), particles.end()),
                    particles.end());
    return particles;
}

bool contains(const ParticleSet& s, const Particle& p) {
    return std::binary_search(s.begin(), s.end(), p, particleLess);
}

bool isGround(const ParticleSet& s) {
    return std::none_of(s.begin(), s.end(), [](const Particle& p) {
        return p.head.kind == HeadKind::Variable;
    });
}

namespace {

bool pathPrefixLeq(const std::vector<Sym>& u, const std::vector<Sym>& v) {
    if (u.size() > v.size()) return false;
    return std::equal(u.begin(), u.end(), v.begin());
}

}  // namespace

bool is_prefix(const Particle& p, const Particle& q) {
    if (p.head.kind != HeadKind::Bot) return false;
    if (q.head.kind == HeadKind::Bot) {
        return p.path.size() < q.path.size() && pathPrefixLeq(p.path, q.path);
    }
    if (q.head.kind == HeadKind::Constant) {
        return pathPrefixLeq(p.path, q.path);
    }
    return false;
}

ParticleSet reduce(ParticleSet s) {
    ParticleSet kept;
    kept.reserve(s.size());
    for (auto& p : s) {
        if (p.head.kind == HeadKind::Top) continue;
        if (p.bare() && p.head.kind == HeadKind::Bot) {
            return {Particle{{}, botHead()}};
        }
        kept.push_back(std::move(p));
    }
    ParticleSet out;
    out.reserve(kept.size());
    for (const auto& q : kept) {
        bool dominated = std::any_of(
            kept.begin(), kept.end(),
            [&q](const Particle& p) { return is_prefix(p, q); });
        if (!dominated) out.push_back(q);
    }
    return makeSet(std::move(out));
}

bool subsumes(const ParticleSet& c, const ParticleSet& d) {
    if (!isGround(c) || !isGround(d)) {
        throw EngineDefect("subsumes requires ground particle sets");
    }
    for (const auto& q : d) {
        if (q.head.kind == HeadKind::Top) continue;
        if (contains(c, q)) continue;
        bool supported = std::any_of(
            c.begin(), c.end(), [&q](const Particle& p) {
                return p.head.kind == HeadKind::Bot &&
                       pathPrefixLeq(p.path, q.path);
            });
        if (!supported) return false;
    }
    return true;
}

// ── parser ──────────────────────────────────────────────────────────────

namespace {

struct Token {
    enum class Type { Ident, KwTop, KwBot, KwAnd, KwAll, Dot, LParen, RParen, End };
    Type type;
    std::string text;
    int line, col;
};

class Lexer {
public:
    Lexer(const std::string& text, int lineBase)
        : text_(text), line_(lineBase) {}

    Token next() {
        skipSpace();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) return {Token::Type::End, "", line, col};
        char c = text_[pos_];
        if (c == '.') { advance(); return {Token::Type::Dot, ".", line, col}; }
        if (c == '(') { advance(); return {Token::Type::LParen, "(", line, col}; }
        if (c == ')') { advance(); return {Token::Type::RParen, ")", line, col}; }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string word;
            while (pos_ < text_.size()) {
                char d = text_[pos_];
                if (std::isalnum(static_cast<unsigned char>(d)) || d == '_') {
                    word.push_back(d);
                    advance();
                } else {
                    break;
                }
            }
            if (word == "top") return {Token::Type::KwTop, word, line, col};
            if (word == "bot") return {Token::Type::KwBot, word, line, col};
            if (word == "and") return {Token::Type::KwAnd, word, line, col};
            if (word == "all") return {Token::Type::KwAll, word, line, col};
            return {Token::Type::Ident, word, line, col};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line,
                         col);
    }

private:
    void skipSpace() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            advance();
        }
    }
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_;
    int col_ = 1;
};

class ConceptParser {
public:
    ConceptParser(const std::string& text, Alphabet& alphabet, int lineBase)
        : lexer_(text, lineBase), alphabet_(alphabet) {
        tok_ = lexer_.next();
    }

    ConceptAst parseTop() {
        ConceptAst c = parseConcept();
        expect(Token::Type::End, "end of concept");
        return c;
    }

private:
    ConceptAst parseConcept() {
        std::vector<ConceptAst> parts;
        parts.push_back(parseAtom());
        while (tok_.type == Token::Type::KwAnd) {
            consume();
            parts.push_back(parseAtom());
        }
        if (parts.size() == 1) return std::move(parts.front());
        ConceptAst conj;
        conj.kind = ConceptAst::Kind::Conj;
        conj.children = std::move(parts);
        return conj;
    }

    ConceptAst parseAtom() {
        switch (tok_.type) {
            case Token::Type::KwTop: {
                consume();
                ConceptAst c;
                c.kind = ConceptAst::Kind::Top;
                return c;
            }
            case Token::Type::KwBot: {
                consume();
                ConceptAst c;
                c.kind = ConceptAst::Kind::Bot;
                return c;
            }
            case Token::Type::Ident: {
                std::string name = tok_.text;
                consume();
                ConceptAst c;
                c.kind = ConceptAst::Kind::Name;
                auto found = alphabet_.find(name);
                if (found && found->first == Alphabet::Kind::Variable) {
                    c.nameKind = Alphabet::Kind::Variable;
                    c.name = found->second;
                } else {
                    c.nameKind = Alphabet::Kind::Constant;
                    c.name = alphabet_.intern(name, Alphabet::Kind::Constant);
                }
                return c;
            }
            case Token::Type::KwAll: {
                consume();
                if (tok_.type != Token::Type::Ident) {
                    throw ParseError("expected role name after 'all'",
                                     tok_.line, tok_.col);
                }
                Sym role = alphabet_.intern(tok_.text, Alphabet::Kind::Role);
                consume();
                expect(Token::Type::Dot, "'.'");
                ConceptAst c;
                c.kind = ConceptAst::Kind::Forall;
                c.role = role;
                c.children.push_back(parseAtom());
                return c;
            }
            case Token::Type::LParen: {
                consume();
                ConceptAst c = parseConcept();
                expect(Token::Type::RParen, "')'");
                return c;
            }
            default:
                throw ParseError("expected a concept", tok_.line, tok_.col);
        }
    }

    void consume() { tok_ = lexer_.next(); }

    void expect(Token::Type type, const std::string& what) {
        if (tok_.type != type) {
            throw ParseError("expected " + what, tok_.line, tok_.col);
        }
        consume();
    }

    Lexer lexer_;
    Alphabet& alphabet_;
    Token tok_;
};

void collectParticles(const ConceptAst& ast, std::vector<Sym>& path,
                      std::vector<Particle>& out) {
    switch (ast.kind) {
        case ConceptAst::Kind::Top:
            out.push_back(Particle{path, topHead()});
            break;
        case ConceptAst::Kind::Bot:
            out.push_back(Particle{path, botHead()});
            break;
        case ConceptAst::Kind::Name:
            out.push_back(Particle{
                path, ast.nameKind == Alphabet::Kind::Variable
                          ? variableHead(ast.name)
                          : constantHead(ast.name)});
            break;
        case ConceptAst::Kind::Conj:
            for (const auto& ch : ast.children) collectParticles(ch, path, out);
            break;
        case ConceptAst::Kind::Forall:
            path.push_back(ast.role);
            collectParticles(ast.children.front(), path, out);
            path.pop_back();
            break;
    }
}

}  // namespace

ConceptAst parse_concept(const std::string& text, Alphabet& alphabet,
                         int lineBase) {
    return ConceptParser(text, alphabet, lineBase).parseTop();
}

ParticleSet normalize(const ConceptAst& ast) {
    std::vector<Particle> raw;
    std::vector<Sym> path;
    collectParticles(ast, path, raw);
    return reduce(makeSet(std::move(raw)));
}

std::string render(const Particle& p, const Alphabet& alphabet) {
    std::ostringstream os;
    for (Sym r : p.path) os << "all " << alphabet.roleName(r) << ".";
    switch (p.head.kind) {
        case HeadKind::Bot: os << "bot"; break;
        case HeadKind::Top: os << "top"; break;
        case HeadKind::Constant: os << alphabet.constantName(p.head.name); break;
        case HeadKind::Variable: os << alphabet.variableName(p.head.name); break;
    }
    return os.str();
}

std::string render(const ParticleSet& s, const Alphabet& alphabet) {
    if (s.empty()) return "top";
    std::ostringstream os;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << " and ";
        os << render(s[i], alphabet);
    }
    return os.str();
}

}  // namespace flbot
