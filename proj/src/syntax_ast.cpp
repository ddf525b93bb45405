#include "kt/syntax.hpp"

namespace kt {

int arity(FnSym s) {
    switch (s) {
        case FnSym::Succ: case FnSym::Num: case FnSym::DotTr: case FnSym::DotNeg:
            return 1;
        case FnSym::Subst:
            return 3;
        default:
            return 2;
    }
}

std::string_view fn_name(FnSym s) {
    switch (s) {
        case FnSym::Succ: return "S";
        case FnSym::Add: return "+";
        case FnSym::Mul: return "*";
        case FnSym::DotImp: return "imp";
        case FnSym::DotOr: return "or";
        case FnSym::DotAnd: return "and";
        case FnSym::DotAll: return "all";
        case FnSym::DotEx: return "ex";
        case FnSym::Num: return "num";
        case FnSym::Subst: return "subst";
        case FnSym::DotEq: return "eq";
        case FnSym::DotTr: return "tr";
        case FnSym::DotNeg: return "neg";
    }
    return "?";
}

TermPtr var(std::string name) {
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Var;
    t->name = std::move(name);
    return t;
}

TermPtr numeral(Nat n) {
    if (n < 0) throw std::invalid_argument("negative numeral");
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::Numeral;
    t->value = std::move(n);
    return t;
}

TermPtr app(FnSym sym, std::vector<TermPtr> args) {
    if (static_cast<int>(args.size()) != arity(sym))
        throw std::invalid_argument("arity mismatch for " + std::string(fn_name(sym)));
    auto t = std::make_shared<Term>();
    t->kind = Term::Kind::App;
    t->sym = sym;
    t->args = std::move(args);
    return t;
}

namespace {
FormulaPtr make(FKind k, FormulaPtr a = nullptr, FormulaPtr b = nullptr) {
    auto f = std::make_shared<Formula>();
    f->kind = k;
    f->a = std::move(a);
    f->b = std::move(b);
    return f;
}
}  // namespace

FormulaPtr bot() {
    static const FormulaPtr b = make(FKind::Bottom);
    return b;
}

FormulaPtr eq(TermPtr s, TermPtr t) {
    auto f = std::make_shared<Formula>();
    f->kind = FKind::Eq;
    f->lhs = std::move(s);
    f->rhs = std::move(t);
    return f;
}

FormulaPtr tr(TermPtr t) {
    auto f = std::make_shared<Formula>();
    f->kind = FKind::Tr;
    f->lhs = std::move(t);
    return f;
}

FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return make(FKind::And, std::move(a), std::move(b)); }
FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return make(FKind::Or, std::move(a), std::move(b)); }
FormulaPtr imp(FormulaPtr a, FormulaPtr b) { return make(FKind::Imp, std::move(a), std::move(b)); }
FormulaPtr neg(FormulaPtr a) { return imp(std::move(a), bot()); }
FormulaPtr iff(FormulaPtr a, FormulaPtr b) { return conj(imp(a, b), imp(b, a)); }

FormulaPtr forall(std::string v, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = FKind::Forall;
    f->var = std::move(v);
    f->a = std::move(body);
    return f;
}

FormulaPtr exists(std::string v, FormulaPtr body) {
    auto f = std::make_shared<Formula>();
    f->kind = FKind::Exists;
    f->var = std::move(v);
    f->a = std::move(body);
    return f;
}

bool is_neg(const FormulaPtr& f, FormulaPtr* inner) {
    if (f->kind != FKind::Imp || f->b->kind != FKind::Bottom) return false;
    if (inner) *inner = f->a;
    return true;
}

bool equal(const TermPtr& s, const TermPtr& t) {
    if (s == t) return true;
    if (s->kind != t->kind) return false;
    switch (s->kind) {
        case Term::Kind::Var: return s->name == t->name;
        case Term::Kind::Numeral: return s->value == t->value;
        case Term::Kind::App:
            if (s->sym != t->sym) return false;
            for (std::size_t i = 0; i < s->args.size(); ++i)
                if (!equal(s->args[i], t->args[i])) return false;
            return true;
    }
    return false;
}

bool equal(const FormulaPtr& f, const FormulaPtr& g) {
    if (f == g) return true;
    if (f->kind != g->kind) return false;
    switch (f->kind) {
        case FKind::Bottom: return true;
        case FKind::Eq: return equal(f->lhs, g->lhs) && equal(f->rhs, g->rhs);
        case FKind::Tr: return equal(f->lhs, g->lhs);
        case FKind::And: case FKind::Or: case FKind::Imp:
            return equal(f->a, g->a) && equal(f->b, g->b);
        case FKind::Forall: case FKind::Exists:
            return f->var == g->var && equal(f->a, g->a);
    }
    return false;
}

namespace {
void collect(const TermPtr& t, std::set<std::string>& out) {
    switch (t->kind) {
        case Term::Kind::Var: out.insert(t->name); break;
        case Term::Kind::Numeral: break;
        case Term::Kind::App:
            for (const auto& a : t->args) collect(a, out);
            break;
    }
}

void collect(const FormulaPtr& f, std::set<std::string>& out) {
    switch (f->kind) {
        case FKind::Bottom: break;
        case FKind::Eq: collect(f->lhs, out); collect(f->rhs, out); break;
        case FKind::Tr: collect(f->lhs, out); break;
        case FKind::And: case FKind::Or: case FKind::Imp:
            collect(f->a, out); collect(f->b, out); break;
        case FKind::Forall: case FKind::Exists: {
            std::set<std::string> inner;
            collect(f->a, inner);
            inner.erase(f->var);
            out.insert(inner.begin(), inner.end());
            break;
        }
    }
}
}  // namespace

std::set<std::string> free_vars(const TermPtr& t) {
    std::set<std::string> s;
    collect(t, s);
    return s;
}

std::set<std::string> free_vars(const FormulaPtr& f) {
    std::set<std::string> s;
    collect(f, s);
    return s;
}

bool is_sentence(const FormulaPtr& f) { return free_vars(f).empty(); }
bool is_closed(const TermPtr& t) { return free_vars(t).empty(); }

namespace {
std::size_t count(const TermPtr& t) {
    std::size_t n = 1;
    for (const auto& a : t->args) n += count(a);
    return n;
}
}  // namespace

std::size_t node_count(const FormulaPtr& f) {
    switch (f->kind) {
        case FKind::Bottom: return 1;
        case FKind::Eq: return 1 + count(f->lhs) + count(f->rhs);
        case FKind::Tr: return 1 + count(f->lhs);
        case FKind::And: case FKind::Or: case FKind::Imp:
            return 1 + node_count(f->a) + node_count(f->b);
        case FKind::Forall: case FKind::Exists: return 1 + node_count(f->a);
    }
    return 1;
}

TermPtr substitute(const TermPtr& t, const std::string& v, const TermPtr& s) {
    switch (t->kind) {
        case Term::Kind::Var: return t->name == v ? s : t;
        case Term::Kind::Numeral: return t;
        case Term::Kind::App: {
            std::vector<TermPtr> args;
            bool changed = false;
            for (const auto& a : t->args) {
                args.push_back(substitute(a, v, s));
                changed = changed || args.back() != a;
            }
            return changed ? app(t->sym, std::move(args)) : t;
        }
    }
    return t;
}

namespace {
std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    for (int i = 1;; ++i) {
        std::string cand = base + std::to_string(i);
        if (!avoid.count(cand)) return cand;
    }
}

FormulaPtr subst_rec(const FormulaPtr& f, const std::string& v, const TermPtr& s,
                     const std::set<std::string>& fv_s) {
    switch (f->kind) {
        case FKind::Bottom: return f;
        case FKind::Eq: {
            auto l = substitute(f->lhs, v, s), r = substitute(f->rhs, v, s);
            return (l == f->lhs && r == f->rhs) ? f : eq(l, r);
        }
        case FKind::Tr: {
            auto l = substitute(f->lhs, v, s);
            return l == f->lhs ? f : tr(l);
        }
        case FKind::And: case FKind::Or: case FKind::Imp: {
            auto a = subst_rec(f->a, v, s, fv_s), b = subst_rec(f->b, v, s, fv_s);
            if (a == f->a && b == f->b) return f;
            auto g = std::make_shared<Formula>(*f);
            g->a = a;
            g->b = b;
            return g;
        }
        case FKind::Forall: case FKind::Exists: {
            if (f->var == v) return f;
            auto body_fv = free_vars(f->a);
            if (!body_fv.count(v)) return f;
            std::string bound = f->var;
            FormulaPtr body = f->a;
            if (fv_s.count(bound)) {
                std::set<std::string> avoid = fv_s;
                avoid.insert(body_fv.begin(), body_fv.end());
                avoid.insert(v);
                std::string fresh = fresh_name(bound, avoid);
                body = subst_rec(body, bound, var(fresh), {fresh});
                bound = fresh;
            }
            auto g = std::make_shared<Formula>(*f);
            g->var = bound;
            g->a = subst_rec(body, v, s, fv_s);
            return g;
        }
    }
    return f;
}
}  // namespace

FormulaPtr substitute(const FormulaPtr& f, const std::string& v, const TermPtr& s) {
    return subst_rec(f, v, s, free_vars(s));
}

}  // namespace kt
