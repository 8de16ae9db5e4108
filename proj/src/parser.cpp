#include <setris/parser.hpp>

#include <cctype>
#include <limits>
#include <map>
#include <optional>

namespace setris {

ParseError::ParseError(const std::string& msg, int line, int col)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg), line(line), col(col) {}

namespace {

enum class Tok : std::uint8_t { Name, Int, Str, Sym, End };

struct Token {
    Tok kind;
    std::string text;
    std::int64_t ival = 0;
    int line = 1, col = 1;
};

std::vector<Token> lex(const std::string& s) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto adv = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < s.size()) {
        char ch = s[i];
        if (std::isspace(static_cast<unsigned char>(ch))) {
            adv(1);
            continue;
        }
        if (ch == '#') {
            while (i < s.size() && s[i] != '\n') adv(1);
            continue;
        }
        Token t{Tok::Sym, "", 0, line, col};
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\'')) ++j;
            t.kind = Tok::Name;
            t.text = s.substr(i, j - i);
            adv(j - i);
        } else if (std::isdigit(static_cast<unsigned char>(ch))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            t.kind = Tok::Int;
            t.text = s.substr(i, j - i);
            try {
                t.ival = std::stoll(t.text);
            } catch (const std::out_of_range&) {
                throw ParseError("integer literal out of range", line, col);
            }
            adv(j - i);
        } else if (ch == '"') {
            std::size_t j = i + 1;
            std::string v;
            while (j < s.size() && s[j] != '"') {
                if (s[j] == '\\' && j + 1 < s.size()) ++j;
                v += s[j++];
            }
            if (j >= s.size()) throw ParseError("unterminated string", line, col);
            t.kind = Tok::Str;
            t.text = v;
            adv(j + 1 - i);
        } else {
            static const char* two[] = {"<=", ">=", "!=", "=<"};
            std::string sym(1, ch);
            for (const char* w : two)
                if (s.compare(i, 2, w) == 0) sym = w;
            if (sym == "=<") sym = "<=";
            if (std::string("{}[](),/|@;=<>+-*&:!").find(ch) == std::string::npos)
                throw ParseError(std::string("unexpected character '") + ch + "'", line, col);
            t.text = sym;
            adv(sym.size() == 2 ? 2 : 1);
        }
        out.push_back(std::move(t));
    }
    out.push_back(Token{Tok::End, "<end>", 0, line, col});
    return out;
}

const std::map<std::string, AtomKind>& relations() {
    static const std::map<std::string, AtomKind> m{
        {"=", AtomKind::Eq},       {"neq", AtomKind::Neq},         {"!=", AtomKind::Neq},
        {"in", AtomKind::In},      {"nin", AtomKind::Nin},         {"subset", AtomKind::Subset},
        {"nsubset", AtomKind::Nsubset}, {"<", AtomKind::Lt},       {"<=", AtomKind::Le},
        {">", AtomKind::Gt},       {">=", AtomKind::Ge},
    };
    return m;
}

const std::map<std::string, AtomKind>& predicates() {
    static const std::map<std::string, AtomKind> m{
        {"un", AtomKind::Un},         {"disj", AtomKind::Disj},       {"inters", AtomKind::Inters},
        {"diff", AtomKind::Diff},     {"nun", AtomKind::Nun},         {"ndisj", AtomKind::Ndisj},
        {"ninters", AtomKind::Ninters}, {"ndiff", AtomKind::Ndiff},   {"size", AtomKind::Size},
        {"label", AtomKind::Label},
    };
    return m;
}

bool is_keyword(const std::string& w) {
    static const char* kw[] = {"in", "nin", "neq", "subset", "nsubset", "or", "and", "mod", "true", "false", "ris"};
    for (const char* k : kw)
        if (w == k) return true;
    return false;
}

class Impl {
public:
    Impl(Solver& s, const std::string& text, bool strict) : s_(s), toks_(lex(text)), strict_(strict) {}

    Formula whole_formula() {
        Formula f = formula();
        expect_end();
        return f;
    }
    Term whole_term() {
        Term t = term();
        expect_end();
        return t;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool is(const char* text, std::size_t k = 0) const {
        const Token& t = peek(k);
        return (t.kind == Tok::Sym || t.kind == Tok::Name) && t.text == text;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw ParseError(msg + " near '" + t.text + "'", t.line, t.col);
    }
    void expect(const char* text) {
        if (!is(text)) fail(std::string("expected '") + text + "'");
        ++pos_;
    }
    void expect_end() {
        if (peek().kind != Tok::End) fail("unexpected input");
    }

    Formula formula() {
        Formula f = conjunction();
        while (is("or")) {
            ++pos_;
            f = disj(f, conjunction());
        }
        return f;
    }

    Formula conjunction() {
        Formula f = atom_f();
        while (is("&") || is("and")) {
            ++pos_;
            f = conj(f, atom_f());
        }
        return f;
    }

    Formula atom_f() {
        if (is("true")) return ++pos_, truec();
        if (is("false")) return ++pos_, falsec();
        if (is("(")) {
            // A parenthesized formula, or a term such as a pair starting an atom.
            std::size_t save = pos_;
            try {
                ++pos_;
                Formula f = formula();
                expect(")");
                return f;
            } catch (const ParseError&) {
                pos_ = save;
            }
        }
        if (peek().kind == Tok::Name && is("(", 1)) {
            auto it = predicates().find(peek().text);
            if (it != predicates().end()) return predicate(it->second);
        }
        Term a = term();
        const Token& r = peek();
        auto it = relations().find(r.text);
        if (r.kind == Tok::Str || r.kind == Tok::Int || it == relations().end()) fail("expected a relation");
        ++pos_;
        Term b = term();
        return atom(it->second, {a, b});
    }

    Formula predicate(AtomKind k) {
        std::string name = peek().text;
        pos_ += 2;
        std::vector<Term> args{term()};
        while (is(",")) {
            ++pos_;
            args.push_back(term());
        }
        expect(")");
        if (k == AtomKind::Label) {
            if (args.size() != 1) fail("label takes one argument");
            args.push_back(mk_int(std::numeric_limits<std::int64_t>::min()));
        }
        if (args.size() != arity(k))
            fail(name + " expects " + std::to_string(arity(k)) + " arguments, got " + std::to_string(args.size()));
        return atom(k, std::move(args));
    }

    Term term() {
        Term t = product();
        while (is("+") || is("-")) {
            ExprOp op = is("+") ? ExprOp::Add : ExprOp::Sub;
            ++pos_;
            t = mk_expr(op, t, product());
        }
        return t;
    }

    Term product() {
        Term t = unary();
        while (is("*") || is("mod")) {
            ExprOp op = is("*") ? ExprOp::Mul : ExprOp::Mod;
            ++pos_;
            t = mk_expr(op, t, unary());
        }
        return t;
    }

    std::int64_t int_literal() {
        bool neg = false;
        if (is("-")) {
            neg = true;
            ++pos_;
        }
        if (peek().kind != Tok::Int) fail("expected an integer");
        std::int64_t v = peek().ival;
        ++pos_;
        return neg ? -v : v;
    }

    Term unary() {
        if (is("-")) {
            if (peek(1).kind == Tok::Int) return mk_int(int_literal());
            ++pos_;
            return mk_expr(ExprOp::Sub, mk_int(0), unary());
        }
        return primary();
    }

    Term primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::Int:
                ++pos_;
                return mk_int(t.ival);
            case Tok::Str:
                ++pos_;
                return mk_str(t.text);
            case Tok::Name:
                if (t.text == "ris" && is("(", 1)) return ris();
                if (is_keyword(t.text)) fail("unexpected keyword");
                ++pos_;
                return lookup(t.text);
            case Tok::End:
                fail("unexpected end of input");
            case Tok::Sym:
                break;
        }
        if (is("(")) {
            ++pos_;
            std::vector<Term> items{term()};
            while (is(",")) {
                ++pos_;
                items.push_back(term());
            }
            expect(")");
            return items.size() == 1 ? items[0] : mk_tuple(items);
        }
        if (is("{")) {
            ++pos_;
            if (is("}")) return ++pos_, mk_empty();
            std::vector<Term> elems{term()};
            while (is(",")) {
                ++pos_;
                elems.push_back(term());
            }
            Term rest = mk_empty();
            if (is("/")) {
                ++pos_;
                rest = term();
                if (!is_set_typed(rest)) fail("set tail must be a set or a variable");
            }
            expect("}");
            return mk_set(elems, rest);
        }
        if (is("[")) {
            ++pos_;
            std::int64_t lo = int_literal();
            expect(",");
            std::int64_t hi = int_literal();
            expect("]");
            return mk_interval(lo, hi);
        }
        fail("expected a term");
    }

    // Names after the top-level ';' of the ris(...) starting at pos_.
    std::vector<std::string> dummy_names() const {
        std::vector<std::string> names;
        int depth = 0;
        for (std::size_t k = pos_ + 1; k < toks_.size(); ++k) {
            const Token& t = toks_[k];
            if (t.kind == Tok::End) break;
            if (t.kind == Tok::Sym && (t.text == "(" || t.text == "{" || t.text == "[")) ++depth;
            if (t.kind == Tok::Sym && (t.text == ")" || t.text == "}" || t.text == "]")) {
                if (--depth == 0) break;
            }
            if (depth == 1 && t.kind == Tok::Sym && t.text == ";") {
                for (std::size_t j = k + 1; j < toks_.size() && toks_[j].kind == Tok::Name; j += 2) {
                    names.push_back(toks_[j].text);
                    if (!(toks_[j + 1].kind == Tok::Sym && toks_[j + 1].text == ",")) break;
                }
                break;
            }
        }
        return names;
    }

    Term binder() {
        const Token& t = peek();
        if (t.kind == Tok::Name && !is_keyword(t.text)) {
            ++pos_;
            auto it = binding_.find(t.text);
            if (it != binding_.end()) return it->second;
            Term v = s_.pool().fresh(t.text);
            binding_[t.text] = v;
            return v;
        }
        if (t.kind == Tok::Int || is("-")) return mk_int(int_literal());
        if (t.kind == Tok::Str) return ++pos_, mk_str(t.text);
        if (is("(")) {
            ++pos_;
            std::vector<Term> items{binder()};
            while (is(",")) {
                ++pos_;
                items.push_back(binder());
            }
            expect(")");
            return items.size() == 1 ? items[0] : mk_tuple(items);
        }
        fail("expected a control term");
    }

    Term ris() {
        const Token& start = peek();
        std::vector<std::string> dnames = dummy_names();
        pos_ += 2;
        binding_.clear();
        Term control = binder();
        std::map<std::string, Term> locals = binding_;
        expect("in");
        Term domain = term();
        std::vector<Term> dummies;
        for (auto& n : dnames) {
            if (locals.count(n)) throw ParseError("dummy '" + n + "' is also a control variable", start.line, start.col);
            Term v = s_.pool().fresh(n);
            locals[n] = v;
            dummies.push_back(v);
        }
        scopes_.push_back(std::move(locals));
        Formula filter = truec();
        std::optional<Term> pattern;
        if (is("|")) {
            ++pos_;
            filter = formula();
        }
        if (is("@")) {
            ++pos_;
            pattern = term();
        }
        if (is(";")) {
            ++pos_;
            for (std::size_t i = 0; i < dnames.size(); ++i) {
                if (i) expect(",");
                ++pos_;
            }
        }
        expect(")");
        scopes_.pop_back();
        if (!dummies.empty() && !pattern) pattern = control;
        try {
            return mk_ris(control, domain, filter, pattern.value_or(nullptr), dummies, strict_);
        } catch (const MalformedRis& e) {
            throw MalformedRis(std::to_string(start.line) + ":" + std::to_string(start.col) + ": " + e.what());
        }
    }

    Term lookup(const std::string& name) {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto f = it->find(name);
            if (f != it->end()) return f->second;
        }
        return s_.var(name);
    }

    Solver& s_;
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<std::map<std::string, Term>> scopes_;
    std::map<std::string, Term> binding_;
    bool strict_;
};

}  // namespace

Formula Parser::formula(const std::string& text) { return Impl(s_, text, strict_).whole_formula(); }
Term Parser::term(const std::string& text) { return Impl(s_, text, strict_).whole_term(); }

std::vector<std::string> split_statements(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    bool in_str = false, comment = false;
    auto flush = [&] {
        auto b = cur.find_first_not_of(" \t\r\n");
        if (b != std::string::npos) out.push_back(cur.substr(b, cur.find_last_not_of(" \t\r\n") - b + 1));
        cur.clear();
    };
    for (char ch : text) {
        if (comment) {
            if (ch == '\n') comment = false;
            cur += ch == '\n' ? ch : ' ';
            continue;
        }
        if (in_str) {
            cur += ch;
            if (ch == '"') in_str = false;
            continue;
        }
        if (ch == '#') {
            comment = true;
            continue;
        }
        if (ch == '"') in_str = true;
        if (ch == '(' || ch == '{' || ch == '[') ++depth;
        if (ch == ')' || ch == '}' || ch == ']') --depth;
        if (ch == ';' && depth <= 0) {
            flush();
            continue;
        }
        cur += ch;
    }
    flush();
    return out;
}

}  // namespace setris
