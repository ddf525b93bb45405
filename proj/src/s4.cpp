#include "kt/s4.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace kt::modal {

// ---------------------------------------------------------------------------
// Formulas

namespace {

MFormulaPtr node(MKind k, MFormulaPtr a = nullptr, MFormulaPtr b = nullptr) {
    auto f = std::make_shared<MFormula>();
    f->kind = k;
    f->a = std::move(a);
    f->b = std::move(b);
    return f;
}

MFormulaPtr quant(MKind k, std::string v, MFormulaPtr a) {
    auto f = std::make_shared<MFormula>();
    f->kind = k;
    f->var = std::move(v);
    f->a = std::move(a);
    return f;
}

}  // namespace

MFormulaPtr m_bot() { return node(MKind::Bot); }
MFormulaPtr m_atom(std::string pred, std::vector<MTerm> args) {
    auto f = std::make_shared<MFormula>();
    f->kind = MKind::Atom;
    f->pred = std::move(pred);
    f->args = std::move(args);
    return f;
}
MFormulaPtr m_and(MFormulaPtr a, MFormulaPtr b) { return node(MKind::And, std::move(a), std::move(b)); }
MFormulaPtr m_or(MFormulaPtr a, MFormulaPtr b) { return node(MKind::Or, std::move(a), std::move(b)); }
MFormulaPtr m_imp(MFormulaPtr a, MFormulaPtr b) { return node(MKind::Imp, std::move(a), std::move(b)); }
MFormulaPtr m_neg(MFormulaPtr a) { return m_imp(std::move(a), m_bot()); }
MFormulaPtr m_forall(std::string v, MFormulaPtr a) { return quant(MKind::Forall, std::move(v), std::move(a)); }
MFormulaPtr m_exists(std::string v, MFormulaPtr a) { return quant(MKind::Exists, std::move(v), std::move(a)); }
MFormulaPtr m_box(MFormulaPtr a) { return node(MKind::Box, std::move(a)); }

bool has_box(const MFormulaPtr& f) {
    if (!f) return false;
    return f->kind == MKind::Box || has_box(f->a) || has_box(f->b);
}

std::size_t size(const MFormulaPtr& f) { return f ? 1 + size(f->a) + size(f->b) : 0; }

std::size_t connectives(const MFormulaPtr& f) {
    if (!f || f->kind == MKind::Atom || f->kind == MKind::Bot) return 0;
    return 1 + connectives(f->a) + connectives(f->b);
}

bool equal(const MFormulaPtr& f, const MFormulaPtr& g) {
    if (!f || !g) return f == g;
    return f->kind == g->kind && f->pred == g->pred && f->args == g->args && f->var == g->var &&
           equal(f->a, g->a) && equal(f->b, g->b);
}

MFormulaPtr substitute(const MFormulaPtr& f, const std::string& v, const MTerm& t) {
    if (!f) return f;
    switch (f->kind) {
        case MKind::Bot: return f;
        case MKind::Atom: {
            auto args = f->args;
            bool changed = false;
            for (auto& a : args)
                if (a.kind == MTerm::Kind::Var && a.name == v) {
                    a = t;
                    changed = true;
                }
            return changed ? m_atom(f->pred, std::move(args)) : f;
        }
        case MKind::Forall:
        case MKind::Exists:
            if (f->var == v) return f;
            return quant(f->kind, f->var, substitute(f->a, v, t));
        default: return node(f->kind, substitute(f->a, v, t), substitute(f->b, v, t));
    }
}

std::set<std::string> free_vars(const MFormulaPtr& f) {
    std::set<std::string> out;
    if (!f) return out;
    if (f->kind == MKind::Atom) {
        for (const auto& a : f->args)
            if (a.kind == MTerm::Kind::Var) out.insert(a.name);
        return out;
    }
    out = free_vars(f->a);
    for (auto& v : free_vars(f->b)) out.insert(v);
    if (f->kind == MKind::Forall || f->kind == MKind::Exists) out.erase(f->var);
    return out;
}

// ---------------------------------------------------------------------------
// Text

namespace {

class ModalParser {
public:
    explicit ModalParser(std::string_view s) : s_(s) {}

    MFormulaPtr whole() {
        auto f = formula();
        skip();
        if (p_ != s_.size()) fail("unexpected trailing input");
        return f;
    }

private:
    std::string_view s_;
    std::size_t p_ = 0;
    std::vector<std::string> bound_;

    [[noreturn]] void fail(const std::string& m) const {
        throw MParseError("modal parse error at " + std::to_string(p_) + ": " + m);
    }
    void skip() {
        while (p_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[p_]))) ++p_;
    }
    bool accept(std::string_view t) {
        skip();
        if (s_.substr(p_, t.size()) != t) return false;
        p_ += t.size();
        return true;
    }
    void expect(std::string_view t) {
        if (!accept(t)) fail("expected '" + std::string(t) + "'");
    }
    std::string ident() {
        skip();
        std::size_t q = p_;
        if (q >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[q]))) fail("expected identifier");
        while (q < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[q])) || s_[q] == '_')) ++q;
        std::string id(s_.substr(p_, q - p_));
        p_ = q;
        return id;
    }
    bool keyword(const std::string& kw) {
        skip();
        const std::size_t save = p_;
        if (p_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[p_])) && ident() == kw) return true;
        p_ = save;
        return false;
    }

    MFormulaPtr formula() {
        auto lhs = disjunction();
        if (accept("->")) return m_imp(lhs, formula());
        return lhs;
    }
    MFormulaPtr disjunction() {
        auto f = conjunction();
        while (accept("\\/")) f = m_or(f, conjunction());
        return f;
    }
    MFormulaPtr conjunction() {
        auto f = unary();
        while (accept("/\\")) f = m_and(f, unary());
        return f;
    }
    MFormulaPtr unary() {
        if (accept("~")) return m_neg(unary());
        if (accept("[]")) return m_box(unary());
        for (MKind k : {MKind::Forall, MKind::Exists}) {
            if (!keyword(k == MKind::Forall ? "forall" : "exists")) continue;
            auto v = ident();
            expect(".");
            bound_.push_back(v);
            auto body = formula();
            bound_.pop_back();
            return quant(k, v, body);
        }
        if (accept("(")) {
            auto f = formula();
            expect(")");
            return f;
        }
        if (keyword("bot")) return m_bot();
        auto p = ident();
        std::vector<MTerm> args;
        if (accept("(")) {
            do args.push_back(term());
            while (accept(","));
            expect(")");
        }
        return m_atom(p, std::move(args));
    }
    MTerm term() {
        if (accept("#")) {
            skip();
            std::size_t q = p_;
            while (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) ++q;
            if (q == p_) fail("expected element number");
            MTerm t{MTerm::Kind::Elem, "", std::stoi(std::string(s_.substr(p_, q - p_)))};
            p_ = q;
            return t;
        }
        auto id = ident();
        const bool bound = std::find(bound_.begin(), bound_.end(), id) != bound_.end();
        return MTerm{bound ? MTerm::Kind::Var : MTerm::Kind::Const, id, -1};
    }
};

std::string term_string(const MTerm& t) {
    return t.kind == MTerm::Kind::Elem ? "#" + std::to_string(t.elem) : t.name;
}

// Precedence: 0 imp, 1 or, 2 and, 3 unary.
std::string show(const MFormulaPtr& f, int ctx) {
    auto wrap = [&](int prec, std::string s) { return prec < ctx ? "(" + s + ")" : s; };
    switch (f->kind) {
        case MKind::Bot: return "bot";
        case MKind::Atom: {
            std::string s = f->pred;
            if (!f->args.empty()) {
                s += "(";
                for (std::size_t i = 0; i < f->args.size(); ++i) s += (i ? ", " : "") + term_string(f->args[i]);
                s += ")";
            }
            return s;
        }
        case MKind::And: return wrap(2, show(f->a, 2) + " /\\ " + show(f->b, 3));
        case MKind::Or: return wrap(1, show(f->a, 1) + " \\/ " + show(f->b, 2));
        case MKind::Imp:
            if (f->b->kind == MKind::Bot) return "~" + show(f->a, 3);
            return wrap(0, show(f->a, 1) + " -> " + show(f->b, 0));
        case MKind::Box: return "[]" + show(f->a, 3);
        case MKind::Forall: return wrap(0, "forall " + f->var + ". " + show(f->a, 0));
        case MKind::Exists: return wrap(0, "exists " + f->var + ". " + show(f->a, 0));
    }
    return "?";
}

void collect(const MFormulaPtr& f, Signature& s) {
    if (!f) return;
    if (f->kind == MKind::Atom) {
        auto [it, fresh] = s.preds.emplace(f->pred, static_cast<int>(f->args.size()));
        if (!fresh && it->second != static_cast<int>(f->args.size()))
            throw MParseError("predicate " + f->pred + " used with two arities");
        for (const auto& a : f->args)
            if (a.kind == MTerm::Kind::Const) s.constants.insert(a.name);
    }
    collect(f->a, s);
    collect(f->b, s);
}

}  // namespace

MFormulaPtr parse_modal(std::string_view text) { return ModalParser(text).whole(); }
std::string to_string(const MFormulaPtr& f) { return show(f, 0); }

Signature signature_of(const MFormulaPtr& f) {
    Signature s;
    collect(f, s);
    return s;
}

Signature signature_of(const std::vector<MFormulaPtr>& fs) {
    Signature s;
    for (const auto& f : fs) collect(f, s);
    return s;
}

MFormulaPtr translate_g(const MFormulaPtr& f) {
    switch (f->kind) {
        case MKind::Bot: return f;
        case MKind::Atom: return m_box(f);
        case MKind::And: return m_and(translate_g(f->a), translate_g(f->b));
        case MKind::Or: return m_or(translate_g(f->a), translate_g(f->b));
        case MKind::Imp: return m_box(m_imp(translate_g(f->a), translate_g(f->b)));
        case MKind::Forall: return m_box(m_forall(f->var, translate_g(f->a)));
        case MKind::Exists: return m_exists(f->var, translate_g(f->a));
        case MKind::Box: break;
    }
    throw std::invalid_argument("translate_g: input contains a box");
}

// ---------------------------------------------------------------------------
// Models

bool Model::holds(const std::string& pred, int w, const Tuple& t) const {
    auto it = val.find(pred);
    return it != val.end() && it->second[w].count(t) > 0;
}

namespace {

std::vector<std::string> common_checks(const Model& M) {
    std::vector<std::string> out;
    if (M.k < 1 || M.k > 32) return {"world count out of range"};
    if (static_cast<int>(M.up.size()) != M.k || static_cast<int>(M.dom.size()) != M.k)
        return {"order or domain table has the wrong size"};
    for (int u = 0; u < M.k; ++u) {
        if (!M.le(u, u)) out.push_back("order is not reflexive at " + std::to_string(u));
        for (int v = 0; v < M.k; ++v)
            if (M.le(u, v)) {
                if (M.up[v] & ~M.up[u]) out.push_back("order is not transitive through " + std::to_string(v));
                if (M.dom[u] & ~M.dom[v])
                    out.push_back("domain shrinks from " + std::to_string(u) + " to " + std::to_string(v));
            }
        if (M.dom[u] == 0) out.push_back("empty domain at " + std::to_string(u));
    }
    for (const auto& [p, ext] : M.val) {
        if (static_cast<int>(ext.size()) != M.k) {
            out.push_back("extension of " + p + " has the wrong size");
            continue;
        }
        for (int w = 0; w < M.k; ++w)
            for (const auto& t : ext[w])
                for (int d : t)
                    if (d < 0 || d >= 32 || !((M.dom[w] >> d) & 1u))
                        out.push_back(p + " holds of an element outside D(" + std::to_string(w) + ")");
    }
    for (const auto& [c, d] : M.constants)
        for (int w = 0; w < M.k; ++w)
            if (d < 0 || d >= 32 || !((M.dom[w] >> d) & 1u))
                out.push_back("constant " + c + " outside D(" + std::to_string(w) + ")");
    return out;
}

}  // namespace

std::vector<std::string> validate(const S4Model& M) { return common_checks(M); }

std::vector<std::string> validate(const GModel& M) {
    auto out = common_checks(M);
    if (!out.empty()) return out;
    for (const auto& [p, ext] : M.val)
        for (int u = 0; u < M.k; ++u)
            for (int v = 0; v < M.k; ++v)
                if (M.le(u, v))
                    for (const auto& t : ext[u])
                        if (!ext[v].count(t)) out.push_back(p + " is not hereditary from " + std::to_string(u));
    return out;
}

Model load_model(std::string_view text) {
    Model M;
    std::map<std::string, int> ids;
    std::vector<std::pair<int, int>> le;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    auto world = [&](const std::string& id) {
        auto it = ids.find(id);
        if (it == ids.end()) throw ModelError("line " + std::to_string(lineno) + ": unknown world " + id);
        return it->second;
    };
    std::vector<std::tuple<int, std::string, Tuple>> vals;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto c = line.find('%'); c != std::string::npos) line.resize(c);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "world") {
            std::string id;
            if (!(ls >> id) || ids.count(id)) throw ModelError("line " + std::to_string(lineno) + ": bad world");
            ids[id] = M.k++;
            M.dom.push_back(0);
        } else if (kw == "le") {
            std::string a, b;
            if (!(ls >> a >> b)) throw ModelError("line " + std::to_string(lineno) + ": le needs two worlds");
            le.emplace_back(world(a), world(b));
        } else if (kw == "dom") {
            std::string a;
            ls >> a;
            const int w = world(a);
            int d;
            while (ls >> d) {
                if (d < 0 || d >= 32) throw ModelError("line " + std::to_string(lineno) + ": element out of range");
                M.dom[w] |= 1u << d;
            }
        } else if (kw == "val") {
            std::string a, p;
            if (!(ls >> a >> p)) throw ModelError("line " + std::to_string(lineno) + ": val needs a world and a predicate");
            Tuple t;
            int d;
            while (ls >> d) t.push_back(d);
            vals.emplace_back(world(a), p, t);
        } else if (kw == "const") {
            std::string c;
            int d;
            if (!(ls >> c >> d)) throw ModelError("line " + std::to_string(lineno) + ": const needs a name and an element");
            M.constants[c] = d;
        } else {
            throw ModelError("line " + std::to_string(lineno) + ": unknown keyword " + kw);
        }
    }
    M.up.assign(M.k, 0);
    for (int w = 0; w < M.k; ++w) M.up[w] |= 1u << w;
    for (auto [a, b] : le) M.up[a] |= 1u << b;
    for (int r = 0; r < M.k; ++r)
        for (int u = 0; u < M.k; ++u)
            for (int v = 0; v < M.k; ++v)
                if (M.le(u, v)) M.up[u] |= M.up[v];
    for (auto& [w, p, t] : vals) {
        auto& ext = M.val[p];
        ext.resize(M.k);
        ext[w].insert(t);
    }
    return M;
}

std::string dump_model(const Model& M) {
    std::ostringstream o;
    for (int w = 0; w < M.k; ++w) o << "world w" << w << "\n";
    for (int u = 0; u < M.k; ++u)
        for (int v = 0; v < M.k; ++v)
            if (u != v && M.le(u, v)) o << "le w" << u << " w" << v << "\n";
    for (int w = 0; w < M.k; ++w) {
        o << "dom w" << w;
        for (int d = 0; d < 32; ++d)
            if ((M.dom[w] >> d) & 1u) o << " " << d;
        o << "\n";
    }
    for (const auto& [p, ext] : M.val)
        for (int w = 0; w < M.k; ++w)
            for (const auto& t : ext[w]) {
                o << "val w" << w << " " << p;
                for (int d : t) o << " " << d;
                o << "\n";
            }
    for (const auto& [c, d] : M.constants) o << "const " << c << " " << d << "\n";
    return o.str();
}

// ---------------------------------------------------------------------------
// Forcing, world by world

namespace {

int value_of(const Model& M, int w, const MTerm& t, bool strict) {
    switch (t.kind) {
        case MTerm::Kind::Var: throw ModelError("free variable " + t.name);
        case MTerm::Kind::Elem: return t.elem;
        case MTerm::Kind::Const: {
            auto it = M.constants.find(t.name);
            if (it == M.constants.end()) throw ModelError("unknown constant " + t.name);
            if (strict && !((M.dom[w] >> it->second) & 1u))
                throw ModelError("constant " + t.name + " denotes an element outside D(" + std::to_string(w) + ")");
            return it->second;
        }
    }
    return -1;
}

bool atom_at(const Model& M, int w, const MFormulaPtr& f) {
    Tuple t;
    for (const auto& a : f->args) t.push_back(value_of(M, w, a, true));
    return M.holds(f->pred, w, t);
}

MTerm elem(int d) { return MTerm{MTerm::Kind::Elem, "", d}; }

bool s4_rec(const Model& N, int w, const MFormulaPtr& A) {
    switch (A->kind) {
        case MKind::Bot: return false;
        case MKind::Atom: return atom_at(N, w, A);
        case MKind::And: return s4_rec(N, w, A->a) && s4_rec(N, w, A->b);
        case MKind::Or: return s4_rec(N, w, A->a) || s4_rec(N, w, A->b);
        case MKind::Imp: return !s4_rec(N, w, A->a) || s4_rec(N, w, A->b);
        case MKind::Box:
            for (int v = 0; v < N.k; ++v)
                if (N.le(w, v) && !s4_rec(N, v, A->a)) return false;
            return true;
        case MKind::Forall:
        case MKind::Exists: {
            const bool all = A->kind == MKind::Forall;
            for (int d = 0; d < 32; ++d)
                if ((N.dom[w] >> d) & 1u) {
                    const bool v = s4_rec(N, w, substitute(A->a, A->var, elem(d)));
                    if (all && !v) return false;
                    if (!all && v) return true;
                }
            return all;
        }
    }
    return false;
}

bool g_rec(const Model& M, int w, const MFormulaPtr& f, ExistsReading r) {
    auto every_above = [&](auto pred) {
        for (int v = 0; v < M.k; ++v)
            if (M.le(w, v) && !pred(v)) return false;
        return true;
    };
    switch (f->kind) {
        case MKind::Bot: return false;
        case MKind::Atom: {
            Tuple t;
            for (const auto& a : f->args) t.push_back(value_of(M, w, a, a.kind == MTerm::Kind::Const));
            return M.holds(f->pred, w, t);
        }
        case MKind::And: return g_rec(M, w, f->a, r) && g_rec(M, w, f->b, r);
        case MKind::Or:
            return every_above([&](int v) { return g_rec(M, v, f->a, r); }) ||
                   every_above([&](int v) { return g_rec(M, v, f->b, r); });
        case MKind::Imp:
            return every_above([&](int v) { return !g_rec(M, v, f->a, r) || g_rec(M, v, f->b, r); });
        case MKind::Forall:
            return every_above([&](int v) {
                for (int d = 0; d < 32; ++d)
                    if (((M.dom[v] >> d) & 1u) && !g_rec(M, v, substitute(f->a, f->var, elem(d)), r)) return false;
                return true;
            });
        case MKind::Exists:
            return every_above([&](int v) {
                const int at = r == ExistsReading::Letter ? w : v;
                for (int d = 0; d < 32; ++d)
                    if (((M.dom[v] >> d) & 1u) && g_rec(M, at, substitute(f->a, f->var, elem(d)), r)) return true;
                return false;
            });
        case MKind::Box: break;
    }
    throw std::invalid_argument("G-forcing is undefined on boxed formulas");
}

void require_sentence(const MFormulaPtr& f, int w, int k) {
    if (!free_vars(f).empty()) throw ModelError("formula has free variables: " + to_string(f));
    if (w < 0 || w >= k) throw ModelError("world out of range");
}

}  // namespace

bool s4_forces(const S4Model& N, int w, const MFormulaPtr& A) {
    require_sentence(A, w, N.k);
    return s4_rec(N, w, A);
}

bool forces_g_appendix(const GModel& M, int w, const MFormulaPtr& phi, ExistsReading reading) {
    require_sentence(phi, w, M.k);
    return g_rec(M, w, phi, reading);
}

// ---------------------------------------------------------------------------
// Forcing, all worlds at once

namespace {

struct MaskEval {
    const Model& M;
    std::uint32_t all;
    std::uint32_t elems = 0;  // union of domains

    explicit MaskEval(const Model& m) : M(m), all(m.k >= 32 ? ~0u : (1u << m.k) - 1) {
        for (auto d : m.dom) elems |= d;
    }

    std::uint32_t box(std::uint32_t s) const {
        std::uint32_t r = 0;
        for (int w = 0; w < M.k; ++w)
            if ((M.up[w] & ~s & all) == 0) r |= 1u << w;
        return r;
    }

    std::uint32_t atom(const MFormulaPtr& f) const {
        Tuple t;
        for (const auto& a : f->args) {
            if (a.kind == MTerm::Kind::Var) throw ModelError("free variable " + a.name);
            if (a.kind == MTerm::Kind::Elem) {
                t.push_back(a.elem);
            } else {
                auto it = M.constants.find(a.name);
                if (it == M.constants.end()) throw ModelError("unknown constant " + a.name);
                t.push_back(it->second);
            }
        }
        std::uint32_t r = 0;
        auto it = M.val.find(f->pred);
        if (it == M.val.end()) return 0;
        for (int w = 0; w < M.k; ++w)
            if (it->second[w].count(t)) r |= 1u << w;
        return r;
    }

    template <class F>
    std::vector<std::uint32_t> per_element(const MFormulaPtr& f, F eval) const {
        std::vector<std::uint32_t> m(32, 0);
        for (int d = 0; d < 32; ++d)
            if ((elems >> d) & 1u) m[d] = eval(substitute(f->a, f->var, elem(d)));
        return m;
    }

    std::uint32_t s4(const MFormulaPtr& f) const {
        switch (f->kind) {
            case MKind::Bot: return 0;
            case MKind::Atom: return atom(f);
            case MKind::And: return s4(f->a) & s4(f->b);
            case MKind::Or: return s4(f->a) | s4(f->b);
            case MKind::Imp: return (~s4(f->a) | s4(f->b)) & all;
            case MKind::Box: return box(s4(f->a));
            case MKind::Forall:
            case MKind::Exists: {
                const auto m = per_element(f, [&](const MFormulaPtr& g) { return s4(g); });
                std::uint32_t r = 0;
                for (int w = 0; w < M.k; ++w) {
                    bool any = false, every = true;
                    for (int d = 0; d < 32; ++d)
                        if ((M.dom[w] >> d) & 1u) {
                            const bool v = (m[d] >> w) & 1u;
                            any = any || v;
                            every = every && v;
                        }
                    if (f->kind == MKind::Forall ? every : any) r |= 1u << w;
                }
                return r;
            }
        }
        return 0;
    }

    std::uint32_t g(const MFormulaPtr& f, ExistsReading rd) const {
        switch (f->kind) {
            case MKind::Bot: return 0;
            case MKind::Atom: return atom(f);
            case MKind::And: return g(f->a, rd) & g(f->b, rd);
            case MKind::Or: return box(g(f->a, rd)) | box(g(f->b, rd));
            case MKind::Imp: return box((~g(f->a, rd) | g(f->b, rd)) & all);
            case MKind::Forall: {
                const auto m = per_element(f, [&](const MFormulaPtr& h) { return g(h, rd); });
                std::uint32_t ok = 0;  // worlds v where every d in D(v) holds at v
                for (int v = 0; v < M.k; ++v) {
                    bool every = true;
                    for (int d = 0; d < 32; ++d)
                        if (((M.dom[v] >> d) & 1u) && !((m[d] >> v) & 1u)) every = false;
                    if (every) ok |= 1u << v;
                }
                return box(ok);
            }
            case MKind::Exists: {
                const auto m = per_element(f, [&](const MFormulaPtr& h) { return g(h, rd); });
                std::uint32_t r = 0;
                for (int w = 0; w < M.k; ++w) {
                    bool every = true;
                    for (int v = 0; v < M.k && every; ++v) {
                        if (!M.le(w, v)) continue;
                        const int at = rd == ExistsReading::Letter ? w : v;
                        bool some = false;
                        for (int d = 0; d < 32; ++d)
                            if (((M.dom[v] >> d) & 1u) && ((m[d] >> at) & 1u)) some = true;
                        every = some;
                    }
                    if (every) r |= 1u << w;
                }
                return r;
            }
            case MKind::Box: break;
        }
        throw std::invalid_argument("G-forcing is undefined on boxed formulas");
    }
};

}  // namespace

std::uint32_t s4_mask(const Model& N, const MFormulaPtr& A) { return MaskEval(N).s4(A); }

std::uint32_t g_mask(const Model& M, const MFormulaPtr& phi, ExistsReading reading) {
    return MaskEval(M).g(phi, reading);
}

S4Model to_s4_model(const GModel& M) {
    S4Model N;
    static_cast<Model&>(N) = M;
    return N;
}

GModel to_g_model(const S4Model& N) {
    GModel M;
    static_cast<Model&>(M) = N;
    for (auto& [p, ext] : M.val)
        for (int v = 0; v < N.k; ++v) {
            std::set<Tuple> boxed;
            for (const auto& t : N.val.at(p)[v]) {
                bool everywhere = true;
                for (int u = 0; u < N.k && everywhere; ++u)
                    if (N.le(v, u) && !N.val.at(p)[u].count(t)) everywhere = false;
                if (everywhere) boxed.insert(t);
            }
            ext[v] = std::move(boxed);
        }
    return M;
}

// ---------------------------------------------------------------------------
// Enumeration

std::vector<std::vector<std::uint32_t>> preorders(int k) {
    std::vector<std::vector<std::uint32_t>> out;
    std::vector<std::pair<int, int>> pairs;
    for (int u = 0; u < k; ++u)
        for (int v = 0; v < k; ++v)
            if (u != v) pairs.emplace_back(u, v);
    for (std::uint32_t bits = 0; bits < (1u << pairs.size()); ++bits) {
        std::vector<std::uint32_t> up(k);
        for (int w = 0; w < k; ++w) up[w] = 1u << w;
        for (std::size_t i = 0; i < pairs.size(); ++i)
            if ((bits >> i) & 1u) up[pairs[i].first] |= 1u << pairs[i].second;
        bool transitive = true;
        for (int u = 0; u < k && transitive; ++u)
            for (int v = 0; v < k; ++v)
                if (((up[u] >> v) & 1u) && (up[v] & ~up[u])) transitive = false;
        if (transitive) out.push_back(std::move(up));
    }
    return out;
}

namespace {

std::vector<Tuple> tuples(int arity, int D) {
    std::vector<Tuple> out{Tuple{}};
    for (int i = 0; i < arity; ++i) {
        std::vector<Tuple> next;
        for (const auto& t : out)
            for (int d = 0; d < D; ++d) {
                auto u = t;
                u.push_back(d);
                next.push_back(std::move(u));
            }
        out = std::move(next);
    }
    return out;
}

// Expanding domain assignments; element 0 everywhere when `zero`.
void domains(const std::vector<std::uint32_t>& up, int D, bool zero,
             const std::function<void(const std::vector<std::uint32_t>&)>& f) {
    const int k = static_cast<int>(up.size());
    std::vector<std::uint32_t> dom(k, 1);
    const std::uint32_t top = (1u << D) - 1;
    std::function<void(int)> rec = [&](int w) {
        if (w == k) {
            for (int u = 0; u < k; ++u)
                for (int v = 0; v < k; ++v)
                    if (((up[u] >> v) & 1u) && (dom[u] & ~dom[v])) return;
            f(dom);
            return;
        }
        for (std::uint32_t s = 1; s <= top; ++s) {
            if (zero && !(s & 1u)) continue;
            dom[w] = s;
            rec(w + 1);
        }
    };
    rec(0);
}

template <class M>
void enumerate(const Signature& sig, const ModelBounds& b, bool hereditary, const std::function<bool(const M&)>& f) {
    bool first_order = !sig.constants.empty();
    for (const auto& [p, n] : sig.preds) first_order = first_order || n > 0;
    // Domains only matter through predicate arguments and constants.
    const int D = first_order ? b.max_domain : 1;
    for (int k = 1; k <= b.max_worlds; ++k)
        for (const auto& up : preorders(k)) {
            bool stop = false;
            domains(up, D, !sig.constants.empty(), [&](const std::vector<std::uint32_t>& dom) {
                if (stop) return;
                // One slot per (predicate, tuple): its admissible world sets.
                struct Slot {
                    std::string pred;
                    Tuple t;
                    std::vector<std::uint32_t> choices;
                };
                std::vector<Slot> slots;
                for (const auto& [p, n] : sig.preds)
                    for (const auto& t : tuples(n, D)) {
                        std::uint32_t live = 0;  // worlds whose domain holds the tuple
                        for (int w = 0; w < k; ++w) {
                            bool in = true;
                            for (int d : t) in = in && ((dom[w] >> d) & 1u);
                            if (in) live |= 1u << w;
                        }
                        Slot s{p, t, {}};
                        for (std::uint32_t c = live;; c = (c - 1) & live) {
                            bool ok = true;
                            if (hereditary)
                                for (int w = 0; w < k && ok; ++w)
                                    if (((c >> w) & 1u) && (up[w] & ~c)) ok = false;
                            if (ok) s.choices.push_back(c);
                            if (c == 0) break;
                        }
                        std::reverse(s.choices.begin(), s.choices.end());
                        slots.push_back(std::move(s));
                    }
                std::vector<std::size_t> pos(slots.size(), 0);
                M m;
                m.k = k;
                m.up = up;
                m.dom = dom;
                for (const auto& c : sig.constants) m.constants[c] = 0;
                while (true) {
                    m.val.clear();
                    for (const auto& [p, n] : sig.preds) m.val[p].assign(k, {});
                    for (std::size_t i = 0; i < slots.size(); ++i) {
                        const auto c = slots[i].choices[pos[i]];
                        for (int w = 0; w < k; ++w)
                            if ((c >> w) & 1u) m.val[slots[i].pred][w].insert(slots[i].t);
                    }
                    if (!f(m)) {
                        stop = true;
                        return;
                    }
                    std::size_t d = 0;
                    while (d < slots.size() && ++pos[d] == slots[d].choices.size()) pos[d++] = 0;
                    if (d == slots.size()) break;
                }
            });
            if (stop) return;
        }
}

}  // namespace

void for_each_g_model(const Signature& sig, const ModelBounds& b, const std::function<bool(const GModel&)>& f) {
    enumerate<GModel>(sig, b, true, f);
}

void for_each_s4_model(const Signature& sig, const ModelBounds& b, const std::function<bool(const S4Model&)>& f) {
    enumerate<S4Model>(sig, b, false, f);
}

IpcVerdict ipc_valid_bounded(const MFormulaPtr& phi, const ModelBounds& b) {
    if (has_box(phi)) throw std::invalid_argument("ipc_valid_bounded: formula contains a box");
    IpcVerdict r;
    r.valid_at_bounds = true;
    for_each_g_model(signature_of(phi), b, [&](const GModel& M) {
        ++r.models;
        const std::uint32_t all = (1u << M.k) - 1;
        const std::uint32_t m = g_mask(M, phi);
        if (m == all) return true;
        int w = 0;
        while ((m >> w) & 1u) ++w;
        r.valid_at_bounds = false;
        r.countermodel = Countermodel{M, w};
        return false;
    });
    return r;
}

bool s4_valid_bounded(const MFormulaPtr& A, const ModelBounds& b) {
    bool valid = true;
    for_each_s4_model(signature_of(A), b, [&](const S4Model& N) {
        valid = s4_mask(N, A) == (1u << N.k) - 1;
        return valid;
    });
    return valid;
}

bool g_entails_bounded(const std::vector<MFormulaPtr>& gamma, const MFormulaPtr& phi, const ModelBounds& b) {
    auto all = gamma;
    all.push_back(phi);
    bool ok = true;
    for_each_g_model(signature_of(all), b, [&](const GModel& M) {
        const std::uint32_t full = (1u << M.k) - 1;
        for (const auto& g : gamma)
            if (g_mask(M, g) != full) return true;
        ok = g_mask(M, phi) == full;
        return ok;
    });
    return ok;
}

}  // namespace kt::modal
