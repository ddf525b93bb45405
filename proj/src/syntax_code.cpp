#include "kt/syntax.hpp"

#include <cctype>

namespace kt {

namespace {
constexpr unsigned kTagTermVar = 8, kTagTermNum = 9, kTagTermApp = 10;

Nat name_nat(const std::string& s) {
    Nat n = 1;
    for (unsigned char c : s) n = n * 256 + c;
    return n;
}

bool nat_name(Nat n, std::string& out) {
    if (n < 1) return false;
    std::string rev;
    while (n > 1) {
        unsigned c = static_cast<unsigned>(n % 256);
        rev.push_back(static_cast<char>(c));
        n /= 256;
        if (rev.size() > 64) return false;
    }
    if (n != 1 || rev.empty()) return false;
    out.assign(rev.rbegin(), rev.rend());
    if (!std::isalpha(static_cast<unsigned char>(out[0]))) return false;
    for (char c : out)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '\'') return false;
    return true;
}

Nat tagged(unsigned tag, const Nat& payload) { return kCodeBase + pair(Nat(tag), payload); }

Nat list_code(const std::vector<TermPtr>& args, std::size_t i) {
    if (i == args.size()) return 0;
    return 1 + pair(code_any(args[i]), list_code(args, i + 1));
}
}  // namespace

Nat pair(const Nat& x, const Nat& y) {
    Nat s = x + y;
    return s * (s + 1) / 2 + y;
}

std::pair<Nat, Nat> unpair(const Nat& z) {
    const Nat disc = 8 * z + 1;
    Nat w = (boost::multiprecision::sqrt(disc) - 1) / 2;
    Nat t = w * (w + 1) / 2;
    Nat y = z - t;
    return {w - y, y};
}

Nat code_any(const TermPtr& t) {
    switch (t->kind) {
        case Term::Kind::Var: return tagged(kTagTermVar, name_nat(t->name));
        case Term::Kind::Numeral: return tagged(kTagTermNum, t->value);
        case Term::Kind::App:
            return tagged(kTagTermApp, pair(Nat(static_cast<unsigned>(t->sym)), list_code(t->args, 0)));
    }
    return 0;
}

Nat code_any(const FormulaPtr& f) {
    const unsigned tag = static_cast<unsigned>(f->kind);
    switch (f->kind) {
        case FKind::Bottom: return tagged(tag, 0);
        case FKind::Eq: return tagged(tag, pair(code_any(f->lhs), code_any(f->rhs)));
        case FKind::Tr: return tagged(tag, code_any(f->lhs));
        case FKind::And: case FKind::Or: case FKind::Imp:
            return tagged(tag, pair(code_any(f->a), code_any(f->b)));
        case FKind::Forall: case FKind::Exists:
            return tagged(tag, pair(code_any(var(f->var)), code_any(f->a)));
    }
    return 0;
}

Nat code(const FormulaPtr& f) {
    if (!is_sentence(f)) throw CodingError("cannot code an open formula: " + to_string(f));
    return code_any(f);
}

TermPtr try_decode_term(const Nat& c) {
    if (c < kCodeBase) return nullptr;
    auto [tag, payload] = unpair(c - kCodeBase);
    if (tag == kTagTermVar) {
        std::string name;
        if (!nat_name(payload, name)) return nullptr;
        return var(name);
    }
    if (tag == kTagTermNum) return numeral(payload);
    if (tag != kTagTermApp) return nullptr;
    auto [sym, list] = unpair(payload);
    if (sym > static_cast<unsigned>(FnSym::DotNeg)) return nullptr;
    std::vector<TermPtr> args;
    while (list != 0) {
        auto [head, tail] = unpair(list - 1);
        auto a = try_decode_term(head);
        if (!a) return nullptr;
        args.push_back(a);
        list = tail;
        if (args.size() > 3) return nullptr;
    }
    auto s = static_cast<FnSym>(static_cast<unsigned>(sym));
    if (static_cast<int>(args.size()) != arity(s)) return nullptr;
    return app(s, std::move(args));
}

FormulaPtr try_decode_formula(const Nat& c) {
    if (c < kCodeBase) return nullptr;
    auto [tag, payload] = unpair(c - kCodeBase);
    if (tag > 7) return nullptr;
    const auto kind = static_cast<FKind>(static_cast<unsigned>(tag));
    switch (kind) {
        case FKind::Bottom:
            return payload == 0 ? bot() : nullptr;
        case FKind::Eq: {
            auto [x, y] = unpair(payload);
            auto s = try_decode_term(x), t = try_decode_term(y);
            return (s && t) ? eq(s, t) : nullptr;
        }
        case FKind::Tr: {
            auto t = try_decode_term(payload);
            return t ? tr(t) : nullptr;
        }
        case FKind::And: case FKind::Or: case FKind::Imp: {
            auto [x, y] = unpair(payload);
            auto a = try_decode_formula(x), b = try_decode_formula(y);
            if (!a || !b) return nullptr;
            if (kind == FKind::And) return conj(a, b);
            if (kind == FKind::Or) return disj(a, b);
            return imp(a, b);
        }
        case FKind::Forall: case FKind::Exists: {
            auto [x, y] = unpair(payload);
            auto v = try_decode_term(x);
            auto body = try_decode_formula(y);
            if (!v || v->kind != Term::Kind::Var || !body) return nullptr;
            return kind == FKind::Forall ? forall(v->name, body) : exists(v->name, body);
        }
    }
    return nullptr;
}

FormulaPtr decode(const Nat& c) {
    auto f = try_decode_formula(c);
    if (!f) throw CodingError("not a formula code: " + c.str());
    if (!is_sentence(f)) throw CodingError("code of an open formula: " + c.str());
    return f;
}

bool is_sentence_code(const Nat& c) {
    auto f = try_decode_formula(c);
    return f && is_sentence(f);
}

TermPtr quote(const FormulaPtr& f) { return numeral(code_any(f)); }

namespace {
void check_width(const Nat& v, const EvalLimits& lim) {
    if (v > 0 && boost::multiprecision::msb(v) >= lim.max_bits)
        throw EvalError(EvalError::Kind::Overflow,
                        "value exceeds " + std::to_string(lim.max_bits) + " bits");
}

Nat eval_rec(const TermPtr& t, const EvalLimits& lim) {
    switch (t->kind) {
        case Term::Kind::Var:
            throw EvalError(EvalError::Kind::OpenTerm, "open term: variable " + t->name);
        case Term::Kind::Numeral:
            return t->value;
        case Term::Kind::App: break;
    }
    std::vector<Nat> v;
    for (const auto& a : t->args) v.push_back(eval_rec(a, lim));
    Nat r;
    switch (t->sym) {
        case FnSym::Succ: r = v[0] + 1; break;
        case FnSym::Add: r = v[0] + v[1]; break;
        case FnSym::Mul: r = v[0] * v[1]; break;
        case FnSym::DotImp: r = tagged(static_cast<unsigned>(FKind::Imp), pair(v[0], v[1])); break;
        case FnSym::DotOr: r = tagged(static_cast<unsigned>(FKind::Or), pair(v[0], v[1])); break;
        case FnSym::DotAnd: r = tagged(static_cast<unsigned>(FKind::And), pair(v[0], v[1])); break;
        case FnSym::DotAll: r = tagged(static_cast<unsigned>(FKind::Forall), pair(v[0], v[1])); break;
        case FnSym::DotEx: r = tagged(static_cast<unsigned>(FKind::Exists), pair(v[0], v[1])); break;
        case FnSym::Num: r = tagged(kTagTermNum, v[0]); break;
        case FnSym::DotEq: r = tagged(static_cast<unsigned>(FKind::Eq), pair(v[0], v[1])); break;
        case FnSym::DotTr:
            r = tagged(static_cast<unsigned>(FKind::Tr), tagged(kTagTermNum, v[0]));
            break;
        case FnSym::DotNeg:
            r = tagged(static_cast<unsigned>(FKind::Imp), pair(v[0], code_any(bot())));
            break;
        case FnSym::Subst: {
            auto x = v[0];
            auto vv = try_decode_term(v[1]);
            auto s = try_decode_term(v[2]);
            if (!vv || vv->kind != Term::Kind::Var || !s)
                throw EvalError(EvalError::Kind::Domain, "subst: bad variable or term code");
            if (auto f = try_decode_formula(x)) {
                r = code_any(substitute(f, vv->name, s));
            } else if (auto tt = try_decode_term(x)) {
                r = code_any(substitute(tt, vv->name, s));
            } else {
                throw EvalError(EvalError::Kind::Domain, "subst: first argument is not a code");
            }
            break;
        }
    }
    check_width(r, lim);
    return r;
}
}  // namespace

Nat eval_term(const TermPtr& t, const EvalLimits& lim) { return eval_rec(t, lim); }

}  // namespace kt
