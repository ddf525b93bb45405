#include "kt/syntax.hpp"

#include <cctype>
#include <optional>

namespace kt {

ParseError::ParseError(std::size_t p, const std::string& msg)
    : std::runtime_error("parse error at " + std::to_string(p) + ": " + msg), pos(p) {}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'';
}

bool reserved(const std::string& s) {
    return s == "bot" || s == "forall" || s == "exists" || s == "Tr" || s == "S";
}

std::optional<FnSym> named_symbol(const std::string& s) {
    static const FnSym all[] = {FnSym::DotImp, FnSym::DotOr,  FnSym::DotAnd, FnSym::DotAll,
                                FnSym::DotEx,  FnSym::Num,    FnSym::Subst,  FnSym::DotEq,
                                FnSym::DotTr,  FnSym::DotNeg, FnSym::Succ};
    for (FnSym f : all)
        if (fn_name(f) == s) return f;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    FormulaPtr whole_formula() {
        auto f = formula();
        finish();
        return f;
    }

    TermPtr whole_term() {
        auto t = term();
        finish();
        return t;
    }

private:
    std::string_view s_;
    std::size_t p_ = 0;

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(p_, msg); }

    void skip() {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
    }

    bool peek(std::string_view tok) {
        skip();
        return s_.substr(p_, tok.size()) == tok;
    }

    bool accept(std::string_view tok) {
        if (!peek(tok)) return false;
        p_ += tok.size();
        return true;
    }

    void expect(std::string_view tok) {
        if (!accept(tok)) fail("expected '" + std::string(tok) + "'");
    }

    void finish() {
        skip();
        if (p_ != s_.size()) fail("unexpected trailing input");
    }

    std::optional<std::string> peek_ident() {
        skip();
        if (p_ >= s_.size() || !ident_start(s_[p_])) return std::nullopt;
        std::size_t q = p_;
        while (q < s_.size() && ident_char(s_[q])) ++q;
        return std::string(s_.substr(p_, q - p_));
    }

    bool accept_keyword(const std::string& kw) {
        auto id = peek_ident();
        if (!id || *id != kw) return false;
        p_ += kw.size();
        return true;
    }

    std::string ident() {
        auto id = peek_ident();
        if (!id) fail("expected identifier");
        if (reserved(*id)) fail("reserved word '" + *id + "' used as a variable");
        p_ += id->size();
        return *id;
    }

    // Runs `alt`; on failure rewinds and returns nullopt, remembering the
    // furthest error so it can be reported if every alternative fails.
    template <class F>
    auto attempt(F alt, std::optional<ParseError>& err) -> std::optional<decltype(alt())> {
        const std::size_t save = p_;
        try {
            return alt();
        } catch (const ParseError& e) {
            if (!err || e.pos >= err->pos) err = e;
            p_ = save;
            return std::nullopt;
        }
    }

    FormulaPtr formula() {
        auto lhs = disjunction();
        if (accept("->")) return imp(lhs, formula());
        return lhs;
    }

    FormulaPtr disjunction() {
        auto f = conjunction();
        while (accept("\\/")) f = disj(f, conjunction());
        return f;
    }

    FormulaPtr conjunction() {
        auto f = unary();
        while (accept("/\\")) f = conj(f, unary());
        return f;
    }

    FormulaPtr unary() {
        if (accept("~")) return neg(unary());
        if (accept_keyword("forall")) {
            auto v = ident();
            expect(".");
            return forall(v, formula());
        }
        if (accept_keyword("exists")) {
            auto v = ident();
            expect(".");
            return exists(v, formula());
        }
        return atom();
    }

    FormulaPtr equation() {
        auto s = term();
        expect("=");
        return eq(s, term());
    }

    FormulaPtr atom() {
        if (accept_keyword("bot")) return bot();
        if (peek_ident() == std::optional<std::string>("Tr")) {
            p_ += 2;
            expect("(");
            auto t = term();
            expect(")");
            return tr(t);
        }
        if (peek("(")) {
            std::optional<ParseError> err;
            auto grouped = attempt(
                [&] {
                    expect("(");
                    auto f = formula();
                    expect(")");
                    return f;
                },
                err);
            if (grouped) return *grouped;
            auto e = attempt([&] { return equation(); }, err);
            if (e) return *e;
            throw *err;
        }
        return equation();
    }

    TermPtr term() {
        auto t = product();
        while (accept("+")) t = app(FnSym::Add, {t, product()});
        return t;
    }

    TermPtr product() {
        auto t = primary();
        while (accept("*")) t = app(FnSym::Mul, {t, primary()});
        return t;
    }

    TermPtr quotation() {
        // `#"` already consumed: a formula or a term, closed by `"`.
        std::optional<ParseError> err;
        auto f = attempt(
            [&] {
                auto g = formula();
                expect("\"");
                return g;
            },
            err);
        if (f) return numeral(code_any(*f));
        auto t = attempt(
            [&] {
                auto u = term();
                expect("\"");
                return u;
            },
            err);
        if (t) return numeral(code_any(*t));
        throw *err;
    }

    TermPtr primary() {
        skip();
        if (p_ >= s_.size()) fail("unexpected end of input");
        const char c = s_[p_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t q = p_;
            while (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) ++q;
            Nat n(std::string(s_.substr(p_, q - p_)));
            p_ = q;
            return numeral(n);
        }
        if (accept("#\"")) return quotation();
        if (accept("(")) {
            auto t = term();
            expect(")");
            return t;
        }
        auto id = peek_ident();
        if (!id) fail("expected a term");
        if (auto sym = named_symbol(*id)) {
            const std::size_t save = p_;
            p_ += id->size();
            if (accept("(")) {
                std::vector<TermPtr> args;
                args.push_back(term());
                while (accept(",")) args.push_back(term());
                expect(")");
                if (static_cast<int>(args.size()) != arity(*sym))
                    fail("wrong number of arguments to " + *id);
                return app(*sym, std::move(args));
            }
            p_ = save;
        }
        return var(ident());
    }
};

// ---------------------------------------------------------------------------
// Printing

void print_term(const TermPtr& t, int prec, std::string& out);

void print_numeral(const Nat& n, std::string& out) {
    if (n >= kCodeBase) {
        if (auto f = try_decode_formula(n)) {
            out += "#\"" + to_string(f) + "\"";
            return;
        }
        if (auto t = try_decode_term(n)) {
            out += "#\"" + to_string(t) + "\"";
            return;
        }
    }
    out += n.str();
}

void print_term(const TermPtr& t, int prec, std::string& out) {
    switch (t->kind) {
        case Term::Kind::Var: out += t->name; return;
        case Term::Kind::Numeral: print_numeral(t->value, out); return;
        case Term::Kind::App: break;
    }
    if (t->sym == FnSym::Add || t->sym == FnSym::Mul) {
        const int level = t->sym == FnSym::Add ? 0 : 1;
        const bool paren = prec > level;
        if (paren) out += '(';
        print_term(t->args[0], level, out);
        out += t->sym == FnSym::Add ? "+" : "*";
        print_term(t->args[1], level + 1, out);
        if (paren) out += ')';
        return;
    }
    out += fn_name(t->sym);
    out += '(';
    for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (i) out += ", ";
        print_term(t->args[i], 0, out);
    }
    out += ')';
}

// Levels: -> 0, \/ 1, /\ 2, ~ 3, atoms 4. A quantifier extends to the right
// and so needs parentheses unless nothing follows it.
void print_formula(const FormulaPtr& f, int prec, bool open_right, std::string& out) {
    auto group = [&](int level, auto body) {
        const bool paren = prec > level;
        if (paren) out += '(';
        body(paren ? true : open_right);
        if (paren) out += ')';
    };
    FormulaPtr inner;
    switch (f->kind) {
        case FKind::Bottom: out += "bot"; return;
        case FKind::Eq:
            print_term(f->lhs, 0, out);
            out += '=';
            print_term(f->rhs, 0, out);
            return;
        case FKind::Tr:
            out += "Tr(";
            print_term(f->lhs, 0, out);
            out += ')';
            return;
        case FKind::Imp:
            if (is_neg(f, &inner)) {
                group(3, [&](bool r) {
                    out += '~';
                    print_formula(inner, 3, r, out);
                });
                return;
            }
            group(0, [&](bool r) {
                print_formula(f->a, 1, false, out);
                out += " -> ";
                print_formula(f->b, 0, r, out);
            });
            return;
        case FKind::Or:
            group(1, [&](bool r) {
                print_formula(f->a, 1, false, out);
                out += " \\/ ";
                print_formula(f->b, 2, r, out);
            });
            return;
        case FKind::And:
            group(2, [&](bool r) {
                print_formula(f->a, 2, false, out);
                out += " /\\ ";
                print_formula(f->b, 3, r, out);
            });
            return;
        case FKind::Forall: case FKind::Exists: {
            const bool paren = !open_right;
            if (paren) out += '(';
            out += f->kind == FKind::Forall ? "forall " : "exists ";
            out += f->var;
            out += ". ";
            print_formula(f->a, 0, true, out);
            if (paren) out += ')';
            return;
        }
    }
}

}  // namespace

FormulaPtr parse(std::string_view text) { return Parser(text).whole_formula(); }
TermPtr parse_term(std::string_view text) { return Parser(text).whole_term(); }

std::string to_string(const FormulaPtr& f) {
    std::string out;
    print_formula(f, 0, true, out);
    return out;
}

std::string to_string(const TermPtr& t) {
    std::string out;
    print_term(t, 0, out);
    return out;
}

}  // namespace kt
