#include "kt/cli.hpp"

#include "kt/csv.hpp"
#include "kt/ff.hpp"
#include "kt/s4.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace kt::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Report

Report::Report(json config) {
    config["type"] = "config";
    records_.push_back(std::move(config));
}

void Report::add(json record) { records_.push_back(std::move(record)); }

std::string Report::text() const {
    std::ostringstream o;
    for (const auto& r : records_) {
        o << r.at("type").get<std::string>();
        for (const auto& [k, v] : r.items())
            if (k != "type") o << " " << k << "=" << v.dump();
        o << "\n";
    }
    return o.str();
}

std::string Report::jsonl() const {
    std::string s;
    for (const auto& r : records_) s += r.dump() + "\n";
    return s;
}

int default_workers() {
    const char* v = std::getenv("KT_WORKERS");
    if (!v) return 0;
    try {
        const int n = std::stoi(v);
        return n > 0 ? n : 0;
    } catch (const std::exception&) {
        return 0;
    }
}

namespace {

// ---------------------------------------------------------------------------
// Options and input

struct Options {
    int workers = 0;
    int max_worlds = 3;
    unsigned numeral_bound = 4;
    std::string universe_file;
    std::vector<std::string> sentences;
    std::string out;
    std::string format = "text";

    std::string mode = "standard";
    std::string scheme = "svi";
    std::string theory;
    std::string structure;
    std::string model;
    std::string kind = "g";
    std::string world = "w0";
    std::string formula;
    std::vector<std::string> set;
    std::vector<std::string> seed;
    std::string source, target;
    bool global = false;
    bool all = false;
    bool list = false;
    bool modal = false;
    int max_domain = 2;
    int limit = 10;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Universe load_universe_opts(const Options& o) {
    std::vector<FormulaPtr> members;
    if (!o.universe_file.empty()) members = load_universe(read_file(o.universe_file)).members();
    for (const auto& s : o.sentences) {
        auto f = parse(s);
        if (!is_sentence(f)) throw InputError("not a sentence: " + s);
        bool dup = false;
        for (const auto& m : members) dup = dup || equal(m, f);
        if (!dup) members.push_back(f);
    }
    if (members.size() > static_cast<std::size_t>(kMaxUniverse)) throw InputError("universe too large");
    return Universe(members);
}

ClassSpec class_spec(const Options& o, const Universe& U) {
    if (o.max_worlds < 1 || o.max_worlds > kMaxClassWorlds)
        throw InputError("--max-worlds must be in 1.." + std::to_string(kMaxClassWorlds));
    return ClassSpec{o.max_worlds, U, o.numeral_bound};
}

Mask mask_of(const Universe& U, const std::vector<std::string>& sentences) {
    Mask X = 0;
    for (const auto& s : sentences) {
        const int i = U.index_of(parse(s));
        if (i < 0) throw InputError("not in the universe: " + s);
        X |= Mask(1) << i;
    }
    return X;
}

json set_json(const Universe& U, Mask X) {
    json a = json::array();
    for (std::size_t i = 0; i < U.size(); ++i)
        if ((X >> i) & 1u) a.push_back(to_string(U.member(i)));
    return a;
}

KripkeStructure structure_opt(const Options& o) {
    if (o.structure.empty()) return load_structure("world w0\n");
    return load_structure(read_file(o.structure));
}

int world_of(const KripkeStructure& M, const std::string& id) {
    const int w = M.world_index(id);
    if (w < 0) throw InputError("unknown world " + id);
    return w;
}

json config_json(const std::string& command, const Options& o, const Universe* U) {
    json c;
    c["command"] = command;
    json inputs = json::array();
    for (const auto* p : {&o.universe_file, &o.structure, &o.model, &o.source, &o.target})
        if (!p->empty()) inputs.push_back(*p);
    c["inputs"] = inputs;
    c["max_worlds"] = o.max_worlds;
    c["numeral_bound"] = o.numeral_bound;
    c["output"] = o.out;
    if (U) {
        json u = json::array();
        for (const auto& f : U->members()) u.push_back(to_string(f));
        c["universe"] = u;
    }
    if (command == "force") {
        c["mode"] = o.mode;
        c["world"] = o.world;
        c["formula"] = o.formula;
        if (o.mode == "scheme") c["scheme"] = o.scheme;
        if (o.global) c["global"] = true;
    }
    if (command == "jump" || command == "lfp") c["scheme"] = o.scheme;
    if (command == "jump") c["set"] = o.set;
    if (command == "lfp") c["seeds"] = o.seed;
    if (command == "audit") c["theory"] = o.theory;
    if (command == "transform") {
        c["kind"] = o.kind;
        if (!o.formula.empty()) c["formula"] = o.formula;
    }
    if (o.modal) {
        c["modal"] = true;
        c["max_domain"] = o.max_domain;
        if (!o.formula.empty()) c["formula"] = o.formula;
    }
    return c;
}

std::string world_name(int w) { return "w" + std::to_string(w); }

json check_json(const CheckReport& r) {
    json f = json::array();
    for (const auto& x : r.failures) f.push_back(x.check + ": " + x.detail);
    return {{"type", "check"}, {"name", r.name}, {"instances", r.instances}, {"exact", r.exact},
            {"ok", r.ok()}, {"failures", f}};
}

// ---------------------------------------------------------------------------
// Commands

int cmd_validate(const Options& o, Report& rep) {
    bool ok = true;
    if (!o.structure.empty()) {
        const auto M = load_structure(read_file(o.structure));
        for (const auto& d : validate(M)) {
            ok = false;
            rep.add({{"type", "diagnostic"}, {"axiom", d.axiom}, {"detail", d.detail}});
        }
        rep.add({{"type", "structure"}, {"worlds", M.size()}, {"valid", validate(M).empty()}});
    }
    if (!o.model.empty()) {
        const auto base = modal::load_model(read_file(o.model));
        std::vector<std::string> problems;
        if (o.kind == "s4") {
            modal::S4Model N;
            static_cast<modal::Model&>(N) = base;
            problems = modal::validate(N);
        } else {
            modal::GModel M;
            static_cast<modal::Model&>(M) = base;
            problems = modal::validate(M);
        }
        for (const auto& p : problems) rep.add({{"type", "diagnostic"}, {"detail", p}});
        ok = ok && problems.empty();
        rep.add({{"type", "model"}, {"kind", o.kind}, {"worlds", base.k}, {"valid", problems.empty()}});
    }
    if (!o.universe_file.empty() || !o.sentences.empty()) {
        const Universe U = load_universe_opts(o);
        rep.add({{"type", "universe"}, {"size", U.size()}, {"negation_closed", U.negation_closed()}});
    }
    return ok ? kOk : kPropertyFailure;
}

json extension_json(const StructureClass& cls, const Extension& e) {
    json m = json::array();
    for (int v : e.map.map) m.push_back(world_name(v));
    return {{"target", e.target}, {"image", world_name(e.image)}, {"map", m},
            {"structure", dump_structure(cls.structure(e.target))}};
}

int cmd_force(const Options& o, Report& rep) {
    const auto M = structure_opt(o);
    if (!validate(M).empty()) throw InputError("structure is not persistent; run validate");
    const int w = world_of(M, o.world);
    const auto phi = parse(o.formula);
    if (o.mode == "standard" || o.mode == "global") {
        const auto v = o.mode == "standard" ? forces(M, w, phi) : forces_global(M, w, phi);
        rep.add({{"type", "verdict"}, {"holds", v.holds}, {"exact", v.exact}});
        return kOk;
    }
    const Universe U = load_universe_opts(o);
    const StructureClass cls(class_spec(o, U));
    if (o.mode == "csv") {
        const auto v = csv_forces(cls, M, w, phi);
        for (std::size_t i = 0; i < v.trace.size(); ++i) {
            const auto& s = v.trace[i];
            rep.add({{"type", "step"}, {"index", i}, {"clause", std::string(clause_name(s.clause))},
                     {"formula", s.formula}, {"world", M.worlds[s.world]}, {"holds", s.holds},
                     {"exact", s.exact}, {"groups", s.groups}});
        }
        rep.add({{"type", "verdict"}, {"holds", v.holds}, {"exact", v.exact},
                 {"clause", std::string(clause_name(v.clause))}, {"replays", replay(v)}});
        return kOk;
    }
    const auto s = parse_scheme(o.scheme);
    if (!s) throw InputError("unknown scheme " + o.scheme);
    const auto v = scheme_forces(*s, cls, M, w, phi, o.global);
    json r{{"type", "verdict"}, {"holds", v.holds}, {"exact", v.exact}};
    if (v.counter) r["counter"] = extension_json(cls, *v.counter);
    rep.add(r);
    return kOk;
}

// Jump tables and witnesses for the scheme names accepted by jump and lfp.
struct JumpSource {
    std::unique_ptr<Analyzer> A;
    std::unique_ptr<CsvAnalysis> C;
    std::string op;

    JumpSource(const Options& o, const Universe& U) {
        A = std::make_unique<Analyzer>(class_spec(o, U), std::vector<FormulaPtr>{}, KernelOptions{o.workers});
        op = o.scheme;
        if (op == "csv") C = std::make_unique<CsvAnalysis>(*A);
        else if (op != "svi-prime" && op != "svi2" && !parse_scheme(op))
            throw InputError("unknown scheme " + op);
    }
    const std::vector<Mask>& table() {
        if (op == "csv") return C->jump_table();
        if (op == "svi2") return A->jump_global_table();
        if (op == "svi-prime") return A->jump_prime_table();
        return A->jump_table(*parse_scheme(op));
    }
    JumpReport report(Mask X) {
        if (op == "csv") return jump_csv(*C, X);
        if (op == "svi2") return jump_svi2(*A, X);
        if (op == "svi-prime") return jump_prime(*A, X);
        return jump(*A, *parse_scheme(op), X);
    }
};

int cmd_jump(const Options& o, Report& rep) {
    const Universe U = load_universe_opts(o);
    JumpSource src(o, U);
    const Mask X = mask_of(U, o.set);
    const auto r = src.report(X);
    const auto& cls = src.A->cls();
    for (std::size_t i = 0; i < U.size(); ++i) {
        if (!r.witness[i]) continue;
        const auto& jw = *r.witness[i];
        json wj{{"type", "witness"}, {"sentence", to_string(U.member(i))}, {"member", jw.member},
                {"world", world_name(jw.world)}, {"structure", dump_structure(cls.structure(jw.member))}};
        if (jw.extension) wj["extension"] = extension_json(cls, *jw.extension);
        rep.add(wj);
    }
    bool exact = true;
    for (bool e : r.exact) exact = exact && e;
    rep.add({{"type", "jump"}, {"op", r.op}, {"input", set_json(U, X)}, {"output", set_json(U, r.output)},
             {"exact", exact}});
    return kOk;
}

int cmd_lfp(const Options& o, Report& rep) {
    const Universe U = load_universe_opts(o);
    JumpSource src(o, U);
    const auto& J = src.table();
    const auto r = lfp(J, mask_of(U, o.seed));
    for (std::size_t k = 0; k < r.trace.size(); ++k)
        rep.add({{"type", "trace"}, {"step", k}, {"set", set_json(U, r.trace[k])}});
    bool exact = true;
    for (std::size_t i = 0; i < U.size(); ++i) exact = exact && !src.A->table().inexact(int(i));
    rep.add({{"type", "fixed_point"}, {"set", set_json(U, r.fixed)}, {"exact", exact}});
    if (o.all)
        for (Mask X : fixed_points(J))
            rep.add({{"type", "fixed_point_any"}, {"set", set_json(U, X)}, {"consistent", consistent(U, X)}});
    return kOk;
}

int cmd_embed(const Options& o, Report& rep) {
    if (o.source.empty() || o.target.empty()) throw InputError("embed needs --source and --target");
    const auto M = load_structure(read_file(o.source));
    const auto N = load_structure(read_file(o.target));
    const auto maps = enumerate_ei(M, N);
    for (const auto& m : maps) {
        json a = json::array();
        for (int w = 0; w < M.size(); ++w) a.push_back(M.worlds[w] + "->" + N.worlds[m.map[w]]);
        rep.add({{"type", "ei"}, {"map", a}});
    }
    rep.add({{"type", "embed"}, {"count", maps.size()}});
    return kOk;
}

int audit_theory(const Options& o, Report& rep, Theory t) {
    const Universe U = load_universe_opts(o);
    std::vector<KripkeStructure> structures;
    if (!o.structure.empty()) {
        structures.push_back(load_structure(read_file(o.structure)));
    } else {
        Analyzer A(class_spec(o, U), {}, KernelOptions{o.workers});
        std::vector<Mask> cons;
        for (Mask X : fixed_points(A.jump_table(scheme_of(t))))
            if (consistent(U, X)) cons.push_back(X);
        structures = fixed_point_structures(U, cons, o.numeral_bound);
    }
    bool ok = true;
    for (std::size_t s = 0; s < structures.size(); ++s) {
        const auto r = audit_axioms(t, structures[s], U);
        json counts = json::object();
        for (const auto& [ax, n] : r.counts) counts[ax] = n;
        json fails = json::array();
        for (const auto& f : r.failures) fails.push_back({{"axiom", f.axiom}, {"sentence", f.sentence}, {"world", f.world}});
        rep.add({{"type", "audit"}, {"structure", s}, {"theory", std::string(theory_name(t))}, {"counts", counts},
                 {"failures", fails}, {"exact", r.exact}, {"worlds", structures[s].worlds},
                 {"model", dump_structure(structures[s])}});
        ok = ok && r.ok();
    }
    std::size_t faults = 0, detected = 0, benign = 0;
    for (const auto& m : mutation_sweep(t, structures, U)) {
        if (!m.fault) {
            ++benign;
            continue;
        }
        ++faults;
        if (m.detected) ++detected;
        else
            rep.add({{"type", "undetected"}, {"structure", m.structure}, {"world", world_name(m.world)},
                     {"injected", to_string(U.member(m.injected))}});
    }
    rep.add({{"type", "mutation"}, {"faults", faults}, {"detected", detected}, {"benign", benign}});
    ok = ok && faults == detected;
    rep.add({{"type", "summary"}, {"ok", ok}, {"structures", structures.size()}});
    return ok ? kOk : kPropertyFailure;
}

int audit_csv(const Options& o, Report& rep) {
    const Universe U = load_universe_opts(o);
    Analyzer A(class_spec(o, U), {}, KernelOptions{o.workers});
    CsvAnalysis C(A);
    bool ok = true;
    std::size_t diffs = 0;
    for (std::size_t X = 0; X < C.jump_table().size(); ++X)
        if (C.jump_table()[X] != C.svi2_table()[X]) ++diffs;
    rep.add({{"type", "check"}, {"name", "J_csv equals J_svi2"}, {"instances", C.jump_table().size()},
             {"ok", diffs == 0}, {"failures", diffs}});
    ok = diffs == 0;
    const auto fixed = lfp(C.jump_table()).fixed;
    const auto d = diagnose_fixed_point_csv(U, fixed, o.numeral_bound);
    rep.add({{"type", "fixed_point"}, {"set", set_json(U, fixed)}});
    for (const auto& c : d.checks) {
        rep.add(check_json(c));
        ok = ok && c.ok();
    }
    rep.add({{"type", "summary"}, {"ok", ok}, {"exact", d.exact()}});
    return ok ? kOk : kPropertyFailure;
}

int audit_ff(const Options& o, Report& rep) {
    const Universe U = load_universe_opts(o);
    Analyzer A(class_spec(o, U), {}, KernelOptions{o.workers});
    bool ok = true;
    auto add = [&](const CheckReport& c, json extra) {
        json r = check_json(c);
        r.update(extra);
        rep.add(r);
        ok = ok && c.ok();
    };
    add(check_oneworld_correspondence(A), json::object());
    const auto& posets = A.cls().posets();
    for (std::size_t p = 0; p < posets.size(); ++p) {
        const FixedFrame F(frame_of(posets[p]), U, o.numeral_bound);
        const auto fps = F.fixed_points();
        for (std::size_t f = 0; f < fps.size(); ++f) {
            json where{{"frame", p}, {"fixed_point", f}};
            add(ff_transparency(F, fps[f]), where);
            add(check_svi_M_equals_ff(A, F, fps[f]), where);
            add(check_intersection_theorem(A, fps[f]), where);
            const auto audit = audit_axioms(Theory::ISV, to_structure(U, fps[f], o.numeral_bound), U);
            rep.add({{"type", "audit"}, {"theory", "ISV"}, {"frame", p}, {"fixed_point", f},
                     {"failures", audit.failures.size()}});
            ok = ok && audit.ok();
        }
    }
    rep.add({{"type", "summary"}, {"ok", ok}});
    return ok ? kOk : kPropertyFailure;
}

int cmd_audit(const Options& o, Report& rep) {
    if (o.theory == "CSV") return audit_csv(o, rep);
    if (o.theory == "FF") return audit_ff(o, rep);
    const auto t = parse_theory(o.theory);
    if (!t) throw InputError("unknown theory " + o.theory);
    return audit_theory(o, rep, *t);
}

int cmd_transform(const Options& o, Report& rep) {
    if (o.kind == "g") {
        if (o.formula.empty()) throw InputError("transform g needs --formula");
        const auto f = modal::parse_modal(o.formula);
        if (modal::has_box(f)) throw InputError("formula contains a box");
        rep.add({{"type", "translation"}, {"input", modal::to_string(f)},
                 {"output", modal::to_string(modal::translate_g(f))}});
        return kOk;
    }
    if (o.model.empty()) throw InputError("transform " + o.kind + " needs --model");
    const auto base = modal::load_model(read_file(o.model));
    if (o.kind == "s4") {
        modal::GModel M;
        static_cast<modal::Model&>(M) = base;
        if (!modal::validate(M).empty()) throw InputError("input is not a G model; run validate --kind g");
        rep.add({{"type", "model"}, {"kind", "s4"}, {"text", modal::dump_model(modal::to_s4_model(M))}});
        return kOk;
    }
    if (o.kind == "g-model") {
        modal::S4Model N;
        static_cast<modal::Model&>(N) = base;
        if (!modal::validate(N).empty()) throw InputError("input is not an S4 model; run validate --kind s4");
        rep.add({{"type", "model"}, {"kind", "g"}, {"text", modal::dump_model(modal::to_g_model(N))}});
        return kOk;
    }
    throw InputError("unknown transform " + o.kind);
}

int discrepancy_modal(const Options& o, Report& rep) {
    if (o.formula.empty()) throw InputError("--modal needs --formula");
    const auto f = modal::parse_modal(o.formula);
    std::size_t models = 0, found = 0;
    modal::for_each_g_model(modal::signature_of(f), {o.max_worlds, o.max_domain}, [&](const modal::GModel& M) {
        ++models;
        const auto a = modal::g_mask(M, f, modal::ExistsReading::Letter);
        const auto b = modal::g_mask(M, f, modal::ExistsReading::AtSuccessor);
        if (a != b && found++ < static_cast<std::size_t>(o.limit))
            rep.add({{"type", "discrepancy"}, {"letter", a}, {"at_successor", b}, {"model", modal::dump_model(M)}});
        return true;
    });
    rep.add({{"type", "summary"}, {"models", models}, {"discrepancies", found}});
    return found ? kPropertyFailure : kOk;
}

int cmd_search_discrepancy(const Options& o, Report& rep) {
    if (o.modal) return discrepancy_modal(o, rep);
    const Universe U = load_universe_opts(o);
    Analyzer A(class_spec(o, U), {}, KernelOptions{o.workers});
    const auto& plain = A.forcing(false);
    const auto& global = A.forcing(true);
    const auto& cls = A.cls();
    std::size_t checked = 0, found = 0;
    for (std::size_t i = 0; i < cls.size(); ++i)
        for (int w = 0; w < cls.worlds(i); ++w) {
            const auto diff = plain.row(i, w) ^ global.row(i, w);
            checked += diff.size();
            for (auto n = diff.find_first(); n != NodeSet::npos; n = diff.find_next(n)) {
                if (found++ >= static_cast<std::size_t>(o.limit)) continue;
                const auto phi = A.table().node(int(n)).formula;
                rep.add({{"type", "discrepancy"}, {"member", i}, {"world", world_name(w)},
                         {"sentence", to_string(phi)}, {"standard", bool(plain.row(i, w)[n])},
                         {"global", bool(global.row(i, w)[n])}, {"structure", dump_structure(cls.structure(i))}});
            }
        }
    rep.add({{"type", "summary"}, {"members", cls.size()}, {"checked", checked}, {"discrepancies", found}});
    return found ? kPropertyFailure : kOk;
}

int cmd_enumerate(const Options& o, Report& rep) {
    if (o.modal) {
        if (o.formula.empty()) throw InputError("--modal needs --formula");
        const auto sig = modal::signature_of(modal::parse_modal(o.formula));
        std::size_t g = 0, s = 0;
        modal::for_each_g_model(sig, {o.max_worlds, o.max_domain}, [&](const modal::GModel&) { return ++g, true; });
        modal::for_each_s4_model(sig, {o.max_worlds, o.max_domain}, [&](const modal::S4Model&) { return ++s, true; });
        rep.add({{"type", "models"}, {"g", g}, {"s4", s}});
        return kOk;
    }
    const Universe U = load_universe_opts(o);
    const StructureClass cls(class_spec(o, U));
    std::vector<std::size_t> per(cls.posets().size(), 0);
    std::size_t pointed = 0;
    for (std::size_t i = 0; i < cls.size(); ++i) {
        ++per[cls.member(i).poset];
        pointed += cls.worlds(i);
        if (o.list) rep.add({{"type", "member"}, {"index", i}, {"structure", dump_structure(cls.structure(i))}});
    }
    for (std::size_t p = 0; p < per.size(); ++p)
        rep.add({{"type", "poset"}, {"index", p}, {"worlds", cls.posets()[p].k}, {"members", per[p]}});
    rep.add({{"type", "class"}, {"members", cls.size()}, {"pointed", pointed}, {"posets", per.size()}});
    return kOk;
}

void add_class_options(CLI::App* c, Options& o) {
    c->add_option("--max-worlds", o.max_worlds, "largest structure in the class");
    c->add_option("--numeral-bound", o.numeral_bound, "quantifier cutoff N");
    c->add_option("--universe-file", o.universe_file, "universe description");
    c->add_option("--sentence", o.sentences, "extra universe member (repeatable)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    o.workers = default_workers();
    CLI::App app{"Kripke truth workbench", "ktruth"};
    app.require_subcommand(1);
    app.add_option("--workers", o.workers, "worker threads (default KT_WORKERS, else all)");
    app.add_option("--out", o.out, "write the report to FILE and FILE.jsonl");
    app.add_option("--format", o.format, "stdout format")->check(CLI::IsMember({"text", "jsonl"}));

    auto* validate_c = app.add_subcommand("validate", "check a structure, model or universe file");
    validate_c->add_option("--structure", o.structure);
    validate_c->add_option("--model", o.model);
    validate_c->add_option("--kind", o.kind)->check(CLI::IsMember({"g", "s4"}));
    add_class_options(validate_c, o);

    auto* force_c = app.add_subcommand("force", "evaluate one sentence at one world");
    force_c->add_option("--mode", o.mode)->check(CLI::IsMember({"standard", "global", "csv", "scheme"}));
    force_c->add_option("--scheme", o.scheme);
    force_c->add_flag("--global", o.global, "scheme mode over G-forcing");
    force_c->add_option("--structure", o.structure);
    force_c->add_option("--world", o.world);
    force_c->add_option("--formula", o.formula)->required();
    add_class_options(force_c, o);

    auto* jump_c = app.add_subcommand("jump", "apply a jump to a set of universe sentences");
    jump_c->add_option("--scheme", o.scheme, "svi|vbi|vci|mci|svi-prime|svi2|csv");
    jump_c->add_option("--set", o.set, "member of the input set (repeatable)");
    add_class_options(jump_c, o);

    auto* lfp_c = app.add_subcommand("lfp", "least fixed point above a seed");
    lfp_c->add_option("--scheme", o.scheme, "svi|vbi|vci|mci|svi-prime|svi2|csv");
    lfp_c->add_option("--seed", o.seed, "member of the seed (repeatable)");
    lfp_c->add_flag("--all", o.all, "also list every fixed point");
    add_class_options(lfp_c, o);

    auto* embed_c = app.add_subcommand("embed", "list EI maps between two structures");
    embed_c->add_option("--source", o.source);
    embed_c->add_option("--target", o.target);

    auto* audit_c = app.add_subcommand("audit", "axiom audits and fixed-point checks");
    audit_c->add_option("--theory", o.theory)->required()->check(
        CLI::IsMember({"ISV", "IVB", "IVF", "IMC", "CSV", "FF"}));
    audit_c->add_option("--structure", o.structure, "audit this structure instead of the fixed points");
    add_class_options(audit_c, o);

    auto* transform_c = app.add_subcommand("transform", "g-translation and model transformations");
    transform_c->add_option("kind", o.kind, "g|s4|g-model")->required()->check(CLI::IsMember({"g", "s4", "g-model"}));
    transform_c->add_option("--formula", o.formula);
    transform_c->add_option("--model", o.model);

    auto* disc_c = app.add_subcommand("search-discrepancy", "standard vs global forcing, or the two existential readings");
    disc_c->add_flag("--modal", o.modal);
    disc_c->add_option("--formula", o.formula);
    disc_c->add_option("--max-domain", o.max_domain);
    disc_c->add_option("--limit", o.limit, "witnesses to print");
    add_class_options(disc_c, o);

    auto* enum_c = app.add_subcommand("enumerate", "class statistics");
    enum_c->add_flag("--list", o.list);
    enum_c->add_flag("--modal", o.modal);
    enum_c->add_option("--formula", o.formula);
    enum_c->add_option("--max-domain", o.max_domain);
    add_class_options(enum_c, o);

    std::vector<std::string> argv_s{"kt"};
    argv_s.insert(argv_s.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : argv_s) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    try {
        const bool uses_universe = !o.universe_file.empty() || !o.sentences.empty();
        std::optional<Universe> U;
        if (uses_universe) U = load_universe_opts(o);
        Report rep(config_json(name, o, U ? &*U : nullptr));
        int code = kOk;
        if (name == "validate") code = cmd_validate(o, rep);
        else if (name == "force") code = cmd_force(o, rep);
        else if (name == "jump") code = cmd_jump(o, rep);
        else if (name == "lfp") code = cmd_lfp(o, rep);
        else if (name == "embed") code = cmd_embed(o, rep);
        else if (name == "audit") code = cmd_audit(o, rep);
        else if (name == "transform") code = cmd_transform(o, rep);
        else if (name == "search-discrepancy") code = cmd_search_discrepancy(o, rep);
        else if (name == "enumerate") code = cmd_enumerate(o, rep);
        rep.add({{"type", "exit"}, {"code", code}});
        if (!o.out.empty()) {
            std::ofstream t(o.out, std::ios::binary), j(o.out + ".jsonl", std::ios::binary);
            if (!t || !j) throw InputError("cannot write " + o.out);
            t << rep.text();
            j << rep.jsonl();
        } else {
            out << (o.format == "jsonl" ? rep.jsonl() : rep.text());
        }
        return code;
    } catch (const std::exception& e) {
        // Library errors here stem from malformed or inconsistent input.
        err << name << ": " << e.what() << "\n";
        return kInputError;
    }
}

}  // namespace kt::cli
