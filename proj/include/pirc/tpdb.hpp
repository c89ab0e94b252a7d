#pragma once

#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pirc/trs.hpp"

namespace pirc {

class ParseError : public Error {
public:
    int line;
    int col;
    ParseError(int l, int c, const std::string& msg)
        : Error(std::to_string(l) + ":" + std::to_string(c) + ": " + msg), line(l), col(c) {}
};

struct ParsedSystem {
    bool relative = false;
    Trs trs;          // when !relative
    RelativeTrs rel;  // when relative

    const Trs& signature_system() const { return relative ? rel_combined_ : trs; }
    void finish() {
        if (relative) rel_combined_ = rel.combined();
    }

private:
    Trs rel_combined_;
};

namespace tpdb_detail {

// TPDB old format, s-expression style:
//   (VAR x y) (SIG (f 2)) (STRATEGY INNERMOST) (RULES l -> r  l ->= r)
// `->=` marks free rules of a relative system. Identifiers match
// [A-Za-z0-9_#-]+; `-` followed by `>` always starts an arrow token.
// (COMMENT ...) sections are skipped with balanced parentheses.

struct Token {
    enum class Kind { LParen, RParen, Comma, Arrow, RelArrow, Ident, End };
    Kind kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    static bool ident_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '#' || c == '-';
    }

    Token next() {
        skip_ws();
        int l = line_, c = col_;
        if (pos_ >= text_.size()) return {Token::Kind::End, "", l, c};
        char ch = text_[pos_];
        if (ch == '(') {
            advance();
            return {Token::Kind::LParen, "(", l, c};
        }
        if (ch == ')') {
            advance();
            return {Token::Kind::RParen, ")", l, c};
        }
        if (ch == ',') {
            advance();
            return {Token::Kind::Comma, ",", l, c};
        }
        if (ch == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            advance();
            advance();
            if (pos_ < text_.size() && text_[pos_] == '=') {
                advance();
                return {Token::Kind::RelArrow, "->=", l, c};
            }
            return {Token::Kind::Arrow, "->", l, c};
        }
        if (ident_char(ch)) {
            std::string s;
            while (pos_ < text_.size() && ident_char(text_[pos_])) {
                if (text_[pos_] == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') break;
                s += text_[pos_];
                advance();
            }
            return {Token::Kind::Ident, s, l, c};
        }
        throw ParseError(l, c, std::string("unexpected character '") + ch + "'");
    }

    // Raw skip to the closing paren of the current section (for COMMENT).
    void skip_balanced() {
        int depth = 1;
        while (pos_ < text_.size()) {
            char ch = text_[pos_];
            advance();
            if (ch == '(') ++depth;
            if (ch == ')' && --depth == 0) return;
        }
        throw ParseError(line_, col_, "unterminated section");
    }

    int line() const { return line_; }
    int col() const { return col_; }

private:
    void skip_ws() {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            advance();
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
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    explicit Parser(const std::string& text) : lex_(text) { tok_ = lex_.next(); }

    ParsedSystem parse_system() {
        std::vector<std::pair<Rule, bool>> rules;  // rule, is_free
        while (tok_.kind != Token::Kind::End) {
            expect(Token::Kind::LParen, "'('");
            Token kw = expect(Token::Kind::Ident, "section keyword");
            if (kw.text == "VAR") {
                while (tok_.kind == Token::Kind::Ident) {
                    vars_.insert(tok_.text);
                    tok_ = lex_.next();
                }
                expect(Token::Kind::RParen, "')'");
            } else if (kw.text == "SIG") {
                while (tok_.kind == Token::Kind::LParen) {
                    tok_ = lex_.next();
                    Token name = expect(Token::Kind::Ident, "symbol name");
                    Token arity = expect(Token::Kind::Ident, "arity");
                    int a = 0;
                    try {
                        a = std::stoi(arity.text);
                    } catch (...) {
                        throw ParseError(arity.line, arity.col, "arity must be a number");
                    }
                    declared_.push_back(Symbol::plain(name.text, a));
                    record_arity(name.text, a, name.line, name.col);
                    expect(Token::Kind::RParen, "')'");
                }
                expect(Token::Kind::RParen, "')'");
            } else if (kw.text == "STRATEGY") {
                Token s = expect(Token::Kind::Ident, "strategy name");
                if (s.text != "INNERMOST")
                    throw ParseError(s.line, s.col, "unsupported strategy " + s.text);
                expect(Token::Kind::RParen, "')'");
            } else if (kw.text == "COMMENT") {
                lex_.skip_balanced();
                tok_ = lex_.next();
            } else if (kw.text == "RULES") {
                while (tok_.kind != Token::Kind::RParen) {
                    Term lhs = parse_term();
                    bool free_rule;
                    if (tok_.kind == Token::Kind::Arrow) {
                        free_rule = false;
                    } else if (tok_.kind == Token::Kind::RelArrow) {
                        free_rule = true;
                    } else {
                        throw ParseError(tok_.line, tok_.col, "expected -> or ->=");
                    }
                    tok_ = lex_.next();
                    Term rhs = parse_term();
                    int l = tok_.line, c = tok_.col;
                    try {
                        rules.emplace_back(Rule(lhs, rhs), free_rule);
                    } catch (const Error& e) {
                        throw ParseError(l, c, e.what());
                    }
                }
                tok_ = lex_.next();
            } else {
                throw ParseError(kw.line, kw.col, "unknown section " + kw.text);
            }
        }
        ParsedSystem out;
        std::vector<Rule> counted, free_rules;
        for (auto& [r, is_free] : rules) (is_free ? free_rules : counted).push_back(r);
        try {
            if (free_rules.empty()) {
                out.relative = false;
                out.trs = Trs(counted, declared_);
            } else {
                out.relative = true;
                out.rel.counted = Trs(counted, declared_);
                out.rel.free = Trs(free_rules, declared_);
            }
        } catch (const Error& e) {
            throw ParseError(lex_.line(), lex_.col(), e.what());
        }
        out.finish();
        return out;
    }

    Term parse_term() {
        Token head = expect(Token::Kind::Ident, "term");
        if (tok_.kind != Token::Kind::LParen) {
            if (vars_.count(head.text)) return Term::var(head.text);
            record_arity(head.text, 0, head.line, head.col);
            return Term::app(Symbol::plain(head.text, 0));
        }
        if (vars_.count(head.text))
            throw ParseError(head.line, head.col,
                             "variable " + head.text + " used as a function symbol");
        tok_ = lex_.next();
        std::vector<Term> args;
        if (tok_.kind != Token::Kind::RParen) {
            args.push_back(parse_term());
            while (tok_.kind == Token::Kind::Comma) {
                tok_ = lex_.next();
                args.push_back(parse_term());
            }
        }
        expect(Token::Kind::RParen, "')'");
        int arity = static_cast<int>(args.size());
        record_arity(head.text, arity, head.line, head.col);
        return Term::app(Symbol::plain(head.text, arity), std::move(args));
    }

private:
    Token expect(Token::Kind k, const std::string& what) {
        if (tok_.kind != k)
            throw ParseError(tok_.line, tok_.col,
                             "expected " + what + ", got '" + tok_.text + "'");
        Token t = tok_;
        tok_ = lex_.next();
        return t;
    }

    void record_arity(const std::string& name, int arity, int line, int col) {
        auto it = arities_.find(name);
        if (it == arities_.end()) {
            arities_.emplace(name, arity);
            return;
        }
        if (it->second != arity)
            throw ParseError(line, col, "symbol " + name + " used with arities " +
                                            std::to_string(it->second) + " and " +
                                            std::to_string(arity));
    }

    Lexer lex_;
    Token tok_{Token::Kind::End, "", 0, 0};
    std::set<std::string> vars_;
    std::map<std::string, int> arities_;
    std::vector<Symbol> declared_;
};

}  // namespace tpdb_detail

inline ParsedSystem parse_system(const std::string& text) {
    return tpdb_detail::Parser(text).parse_system();
}

/// A start term over an already-parsed system: symbols must exist in
/// the signature with matching arity; bare identifiers must be declared
/// variables or known nullary symbols.
inline Term parse_term_over(const std::string& text, const Trs& R,
                            const std::set<std::string>& vars = {}) {
    struct Walker {
        const Trs& R;
        const std::set<std::string>& vars;
        Term walk(const Term& t) {
            if (t.is_variable()) return t;
            const Symbol& s = t.symbol();
            if (s.arity == 0 && vars.count(s.name)) return Term::var(s.name);
            auto known = R.find_symbol(s.display());
            if (!known)
                throw Error("unknown symbol " + s.display() +
                            " (declare it in the input file or as VAR)");
            std::vector<Term> args;
            for (const Term& a : t.args()) args.push_back(walk(a));
            return Term::app(*known, std::move(args));
        }
    };
    tpdb_detail::Parser p(text);
    Term raw = p.parse_term();
    return Walker{R, vars}.walk(raw);
}

namespace tpdb_detail {
inline void write_term(const Term& t, std::string& out) {
    if (t.is_variable()) {
        out += t.var_name();
        return;
    }
    out += t.symbol().display();
    if (!t.args().empty()) {
        out += "(";
        for (std::size_t i = 0; i < t.args().size(); ++i) {
            if (i) out += ",";
            write_term(t.args()[i], out);
        }
        out += ")";
    }
}

inline void write_rules(const Trs& R, const char* arrow, std::string& out) {
    for (const Rule& r : R.rules()) {
        out += "  ";
        write_term(r.lhs, out);
        out += " ";
        out += arrow;
        out += " ";
        write_term(r.rhs, out);
        out += "\n";
    }
}

inline std::set<std::string> rule_variables(const Trs& R) {
    std::set<std::string> vars;
    for (const Rule& r : R.rules())
        for (const auto& v : variables_of(r.lhs)) vars.insert(v);
    return vars;
}

inline std::set<std::string> unused_symbols(const Trs& R) {
    std::set<std::string> used;
    std::function<void(const Term&)> mark = [&](const Term& t) {
        if (t.is_variable()) return;
        used.insert(t.symbol().display());
        for (const Term& a : t.args()) mark(a);
    };
    for (const Rule& r : R.rules()) {
        mark(r.lhs);
        mark(r.rhs);
    }
    std::set<std::string> out;
    for (const Symbol& s : R.signature())
        if (!used.count(s.display())) out.insert(s.display());
    return out;
}

inline std::string serialize_parts(const Trs& whole, const Trs& counted,
                                   const Trs* free_part) {
    std::string out;
    std::set<std::string> vars = rule_variables(counted);
    if (free_part)
        for (const auto& v : rule_variables(*free_part)) vars.insert(v);
    if (!vars.empty()) {
        out += "(VAR";
        for (const auto& v : vars) out += " " + v;
        out += ")\n";
    }
    std::set<std::string> extras = unused_symbols(whole);
    if (!extras.empty()) {
        out += "(SIG";
        for (const Symbol& s : whole.signature())
            if (extras.count(s.display()))
                out += " (" + s.display() + " " + std::to_string(s.arity) + ")";
        out += ")\n";
    }
    out += "(RULES\n";
    write_rules(counted, "->", out);
    if (free_part) write_rules(*free_part, "->=", out);
    out += ")\n";
    return out;
}
}  // namespace tpdb_detail

inline std::string serialize(const Trs& R) {
    return tpdb_detail::serialize_parts(R, R, nullptr);
}

inline std::string serialize(const RelativeTrs& rel) {
    return tpdb_detail::serialize_parts(rel.combined(), rel.counted, &rel.free);
}

/// Rule multisets equal up to variable renaming, ignoring order.
inline bool alpha_equivalent_systems(const Trs& a, const Trs& b) {
    if (a.rules().size() != b.rules().size()) return false;
    std::vector<bool> used(b.rules().size(), false);
    for (const Rule& ra : a.rules()) {
        bool found = false;
        for (std::size_t j = 0; j < b.rules().size(); ++j) {
            if (used[j]) continue;
            if (alpha_equivalent(ra, b.rules()[j])) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

}  // namespace pirc
