// Acceptance run: one PASS/FAIL line per criterion. Every check is exact;
// the bounds below are the only tunables.
#include "kt/cli.hpp"
#include "kt/csv.hpp"
#include "kt/ff.hpp"
#include "kt/s4.hpp"
#include "corpus.hpp"

#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace kt;

namespace {

constexpr int kMaxWorlds = 3;
constexpr unsigned kNumeralBound = 4;
constexpr int kModalWorlds = 3;
constexpr int kModalDomain = 2;
constexpr int kWorkerCounts[] = {1, 2, 4};

// Criteria allowed to fail: the literal vbi admissibility does not validate
// the negation-transfer axiom (see the IVB8 case in the unit tests).
const std::set<int> kKnownUnattainable = {6};

struct Outcome {
    bool pass = true;
    std::string detail;
    // Set when the only failures are the known, pinned ones.
    bool only_known = false;
};

Universe U(std::initializer_list<const char*> members) {
    std::vector<FormulaPtr> fs;
    for (const char* m : members) fs.push_back(parse(m));
    return Universe(fs);
}

ClassSpec spec(const Universe& u, int m = kMaxWorlds) { return ClassSpec{m, u, kNumeralBound}; }

bool subset(Mask a, Mask b) { return (a & ~b) == 0; }

const Universe& negation_universe() {
    static const Universe u = U({"S(0)=0", "~S(0)=0", "Tr(#\"S(0)=0\")", "~Tr(#\"S(0)=0\")"});
    return u;
}

const Universe& excluded_middle_universe() {
    static const Universe u = U({"Tr(#\"0=0\")", "~Tr(#\"0=0\")", "Tr(#\"0=0\") \\/ ~Tr(#\"0=0\")",
                                 "~(Tr(#\"0=0\") \\/ ~Tr(#\"0=0\"))"});
    return u;
}

const Universe& transparency_universe() {
    static const Universe u = U({"0=0", "~0=0", "Tr(#\"0=0\")", "~Tr(#\"0=0\")"});
    return u;
}

// Five members, not negation-closed, so not used for the mci theory.
const Universe& audit_universe() {
    static const Universe u = U({"0=0", "S(0)=0", "Tr(#\"0=0\")", "Tr(#\"S(0)=0\")",
                                 "Tr(#\"0=0\") /\\ Tr(#\"S(0)=0\")"});
    return u;
}

// ---------------------------------------------------------------------------

Outcome forcing_kernel() {
    const auto u = U({"0=0", "S(0)=0", "Tr(#\"0=0\")", "Tr(#\"S(0)=0\")", "Tr(#\"Tr(#\"0=0\")\")"});
    auto cls = enumerate_structures(spec(u));
    std::vector<FormulaPtr> sentences = u.members();
    for (const auto& m : u.members()) sentences.push_back(tr(quote(m)));
    sentences.push_back(parse("bot"));
    std::vector<FormulaPtr> taut;
    for (const auto& t : corpus::lines("ipc_tautologies_lt.txt")) taut.push_back(parse(t));
    const auto lem = parse("Tr(#\"0=0\") \\/ ~Tr(#\"0=0\")");

    std::size_t violations = 0, checks = 0;
    std::string counter;
    for (std::size_t i = 0; i < cls.size(); ++i) {
        const auto M = cls.structure(i);
        for (const auto& phi : sentences) {
            std::vector<bool> val(M.size());
            for (int w = 0; w < M.size(); ++w) {
                val[w] = forces(M, w, phi).holds;
                if (phi->kind == FKind::Bottom && val[w]) ++violations;
                if (forces(truncate(M, w), 0, phi).holds != val[w]) ++violations;
                ++checks;
            }
            for (int a = 0; a < M.size(); ++a)
                for (int b = 0; b < M.size(); ++b)
                    if (M.le(a, b) && val[a] && !val[b]) ++violations;
        }
        for (int w = 0; w < M.size(); ++w) {
            for (const auto& t : taut)
                if (!forces(M, w, t).holds) ++violations;
            if (counter.empty() && !forces(M, w, lem).holds) counter = "member " + std::to_string(i) + " world w" + std::to_string(w);
        }
    }
    Outcome o;
    o.pass = violations == 0 && taut.size() == 20 && !counter.empty();
    o.detail = std::to_string(cls.size()) + " structures, " + std::to_string(checks) + " sentence/world checks, " +
               std::to_string(taut.size()) + " tautologies, " + std::to_string(violations) +
               " violations; excluded-middle countermodel: " + (counter.empty() ? "none" : counter);
    return o;
}

Outcome two_chain_example() {
    const auto u = U({"0=0", "~0=0", "Tr(#\"0=0\") \\/ ~Tr(#\"0=0\")", "Tr(#\"0=0\")"});
    Analyzer A(spec(u));
    const int lem = u.index_of(parse("Tr(#\"0=0\") \\/ ~Tr(#\"0=0\")"));
    const Mask both = 0b11;
    std::size_t sets = 0, good = 0;
    for (Mask X = 0; X < (Mask(1) << u.size()); ++X) {
        if (X & both) continue;
        ++sets;
        const auto r = jump(A, Scheme::SVI, X);
        if ((r.output >> lem) & 1u) continue;
        if (!r.witness[lem] || !r.witness[lem]->extension) continue;
        const auto& ext = *r.witness[lem]->extension;
        const auto N = A.cls().structure(ext.target);
        const bool chain = N.size() == 2 && N.le(0, 1) && ext.image == 0 &&
                           !N.interp[0].count(code(parse("0=0"))) && N.interp[1].count(code(parse("0=0")));
        if (chain && !forces(N, 0, u.member(lem)).holds) ++good;
    }
    return {sets > 0 && good == sets,
            std::to_string(good) + "/" + std::to_string(sets) + " sets omitting 0=0 and ~0=0 exclude the disjunction with a 2-chain witness"};
}

struct JumpTables {
    std::vector<std::pair<std::string, std::vector<Mask>>> tables;  // svi, svi', vbi, vci, mci, csv
};

JumpTables six_jumps(const Universe& u) {
    Analyzer A(spec(u));
    CsvAnalysis C(A);
    JumpTables t;
    t.tables.emplace_back("svi", A.jump_table(Scheme::SVI));
    t.tables.emplace_back("svi'", A.jump_prime_table());
    t.tables.emplace_back("vbi", A.jump_table(Scheme::VBI));
    t.tables.emplace_back("vci", A.jump_table(Scheme::VCI));
    t.tables.emplace_back("mci", A.jump_table(Scheme::MCI));
    t.tables.emplace_back("csv", C.jump_table());
    return t;
}

Outcome monotonicity() {
    std::size_t pairs = 0, bad = 0;
    for (const auto* u : {&negation_universe(), &excluded_middle_universe()}) {
        const auto t = six_jumps(*u);
        for (const auto& [name, J] : t.tables)
            for (Mask X = 0; X < J.size(); ++X)
                for (Mask Y = 0; Y < J.size(); ++Y)
                    if (subset(X, Y)) {
                        ++pairs;
                        if (!subset(J[X], J[Y])) ++bad;
                    }
    }
    return {bad == 0, std::to_string(pairs) + " (jump, X<=Y) pairs over two 4-member universes, " +
                          std::to_string(bad) + " violations"};
}

Outcome scheme_chain() {
    std::size_t sets = 0, bad = 0;
    for (const auto* u : {&negation_universe(), &excluded_middle_universe()}) {
        Analyzer A(spec(*u));
        const auto &s = A.jump_table(Scheme::SVI), &b = A.jump_table(Scheme::VBI),
                   &c = A.jump_table(Scheme::VCI), &m = A.jump_table(Scheme::MCI);
        for (Mask X = 0; X < s.size(); ++X) {
            ++sets;
            if (!subset(s[X], b[X]) || !subset(b[X], c[X]) || !subset(c[X], m[X])) ++bad;
        }
    }
    return {bad == 0, std::to_string(sets) + " sets, " + std::to_string(bad) + " chain violations"};
}

Outcome lfp_properties() {
    std::size_t checked = 0, failed = 0;
    std::vector<std::string> notes;
    auto tally = [&](const CheckReport& r) {
        checked += r.instances;
        failed += r.failures.size();
        if (!r.ok()) notes.push_back(r.name);
    };
    {
        Analyzer A(spec(transparency_universe()));
        for (auto s : {Scheme::SVI, Scheme::VBI, Scheme::VCI, Scheme::MCI})
            tally(check_transparency(A.universe(), lfp(A.jump_table(s)).fixed));
    }
    const auto t = quote(parse("0=0"));
    const auto cons = consistency_sentence(t), comp = completeness_sentence(t);
    std::size_t cons_inst = 0, comp_inst = 0;
    {
        Analyzer A(spec(Universe({parse("0=0"), parse("~0=0"), cons, neg(cons)})));
        const auto r = check_internal_consistency(A.universe(), lfp(A.jump_table(Scheme::VCI)).fixed);
        cons_inst = r.instances;
        tally(r);
    }
    {
        Analyzer A(spec(Universe({parse("0=0"), parse("~0=0"), comp, neg(comp)})));
        const auto r = check_internal_completeness(A.universe(), lfp(A.jump_table(Scheme::MCI)).fixed);
        comp_inst = r.instances;
        tally(r);
    }
    std::string d = std::to_string(checked) + " instances, " + std::to_string(failed) + " failures";
    for (const auto& n : notes) d += "; failed: " + n;
    return {failed == 0 && cons_inst > 0 && comp_inst > 0, d};
}

Outcome audits() {
    Outcome o;
    std::ostringstream d;
    bool other_failure = false, ivb_failure = false;
    for (auto th : {Theory::ISV, Theory::IVB, Theory::IVF, Theory::IMC}) {
        std::size_t failures = 0, faults = 0, detected = 0, structures_n = 0, instances = 0;
        std::set<std::string> axioms;
        std::vector<const Universe*> universes = {&negation_universe(), &transparency_universe()};
        if (th != Theory::IMC) universes.push_back(&audit_universe());
        for (const auto* u : universes) {
            Analyzer A(spec(*u));
            std::vector<Mask> cons;
            for (Mask F : fixed_points(A.jump_table(scheme_of(th))))
                if (consistent(*u, F)) cons.push_back(F);
            const auto structures = fixed_point_structures(*u, cons, kNumeralBound);
            structures_n += structures.size();
            for (const auto& M : structures) {
                const auto r = audit_axioms(th, M, *u);
                for (const auto& [ax, n] : r.counts) instances += n;
                failures += r.failures.size();
                for (const auto& f : r.failures) axioms.insert(f.axiom);
            }
            for (const auto& m : mutation_sweep(th, structures, *u))
                if (m.fault) {
                    ++faults;
                    detected += m.detected;
                }
        }
        const bool ok = failures == 0 && faults == detected && faults > 0;
        if (th != Theory::ISV) d << "; ";
        d << theory_name(th) << ": " << structures_n << " structures, " << instances << " instances, " << failures
          << " failures";
        for (const auto& a : axioms) d << " [" << a << "]";
        d << ", mutations " << detected << "/" << faults;
        if (!ok) {
            const bool known = th == Theory::IVB && faults == detected && axioms == std::set<std::string>{"IVB8"};
            (known ? ivb_failure : other_failure) = true;
        }
    }
    o.pass = !other_failure && !ivb_failure;
    o.only_known = ivb_failure && !other_failure;
    o.detail = d.str();
    return o;
}

Outcome csv_suite() {
    std::size_t diffs = 0, sets = 0;
    bool diag_ok = true, exact = true;
    std::vector<std::string> failed;
    for (const auto* u : {&transparency_universe(), &excluded_middle_universe()}) {
        Analyzer A(spec(*u));
        CsvAnalysis C(A);
        for (Mask X = 0; X < C.jump_table().size(); ++X, ++sets)
            if (C.jump_table()[X] != C.svi2_table()[X]) ++diffs;
        const auto d = diagnose_fixed_point_csv(*u, lfp(C.jump_table()).fixed, kNumeralBound);
        diag_ok = diag_ok && d.ok();
        exact = exact && d.exact();
        for (const auto& c : d.checks)
            if (!c.ok()) failed.push_back(c.name);
    }
    const auto l1 = check_lemma1(spec(transparency_universe(), kMaxWorlds - 1));
    std::string d = std::to_string(diffs) + "/" + std::to_string(sets) + " sets where J_csv != J_svi2; lfp diagnostics " +
                    (diag_ok ? "ok" : "failing") + (exact ? "" : " (bounded-approximate: numeral cutoff engaged)") +
                    "; lemma1 " + std::to_string(l1.instances) + " instances, " +
                    std::to_string(l1.failures.size()) + " failures";
    for (const auto& f : failed) d += "; failed: " + f;
    return {diffs == 0 && diag_ok && l1.ok(), d};
}

Outcome fixed_frame_suite() {
    const auto& u = transparency_universe();
    Analyzer A(spec(u));
    std::size_t fps_n = 0, bad = 0;
    const auto one = check_oneworld_correspondence(A);
    for (const auto& p : A.cls().posets()) {
        FixedFrame F(frame_of(p), u, kNumeralBound);
        for (const auto& fp : F.fixed_points()) {
            ++fps_n;
            if (!check_svi_M_equals_ff(A, F, fp).ok()) ++bad;
            if (!check_intersection_theorem(A, fp).ok()) ++bad;
        }
    }
    return {bad == 0 && one.ok() && fps_n > 0,
            std::to_string(fps_n) + " ff fixed points over " + std::to_string(A.cls().posets().size()) +
                " frames, " + std::to_string(bad) + " failures; one-world correspondence " +
                std::to_string(one.instances) + " sets, " + std::to_string(one.failures.size()) + " failures"};
}

Outcome appendix_suite() {
    using namespace kt::modal;
    const ModelBounds b{kModalWorlds, kModalDomain};
    std::size_t formulas = 0, models = 0, bad = 0, label_bad = 0;
    for (const auto& e : corpus::ipc_corpus()) {
        ++formulas;
        const auto phi = parse_modal(e.formula);
        const auto A = translate_g(phi);
        const auto sig = signature_of(phi);
        for_each_g_model(sig, b, [&](const GModel& M) {
            ++models;
            if (g_mask(M, phi) != s4_mask(to_s4_model(M), A)) ++bad;
            return true;
        });
        for_each_s4_model(sig, b, [&](const S4Model& N) {
            ++models;
            if (g_mask(to_g_model(N), phi) != s4_mask(N, A)) ++bad;
            return true;
        });
        const bool ipc = ipc_valid_bounded(phi, b).valid_at_bounds;
        const bool s4 = s4_valid_bounded(A, b);
        if (ipc != s4 || ipc != e.valid) ++label_bad;
    }
    return {formulas == 60 && bad == 0 && label_bad == 0,
            std::to_string(formulas) + " formulas, " + std::to_string(models) + " models, " + std::to_string(bad) +
                " lemma violations, " + std::to_string(label_bad) + " validity disagreements"};
}

Outcome determinism() {
    const std::vector<std::string> neg = {"--sentence", "S(0)=0", "--sentence", "~S(0)=0", "--sentence",
                                          "Tr(#\"S(0)=0\")", "--sentence", "~Tr(#\"S(0)=0\")"};
    auto cmd = [&](std::vector<std::string> head, bool universe = true) {
        if (universe) head.insert(head.end(), neg.begin(), neg.end());
        return head;
    };
    const std::vector<std::vector<std::string>> commands = {
        cmd({"jump", "--scheme", "svi"}),        cmd({"jump", "--scheme", "csv"}),
        cmd({"lfp", "--scheme", "vci", "--all"}), cmd({"audit", "--theory", "ISV"}),
        cmd({"audit", "--theory", "IVB"}),       cmd({"audit", "--theory", "CSV"}),
        cmd({"audit", "--theory", "FF", "--max-worlds", "2"}),
        cmd({"search-discrepancy"}),             cmd({"enumerate", "--list"}),
    };
    std::size_t runs = 0, diffs = 0;
    for (const auto& c : commands)
        for (const char* fmt : {"jsonl", "text"}) {
            std::string first;
            for (int workers : kWorkerCounts) {
                std::vector<std::string> args = {"--workers", std::to_string(workers), "--format", fmt};
                args.insert(args.end(), c.begin(), c.end());
                std::ostringstream out, err;
                const int code = kt::cli::run(args, out, err);
                const std::string got = std::to_string(code) + "\n" + out.str();
                ++runs;
                if (workers == kWorkerCounts[0]) first = got;
                else if (got != first) ++diffs;
            }
        }
    return {diffs == 0, std::to_string(runs) + " runs of " + std::to_string(commands.size()) +
                            " commands in two formats, " + std::to_string(diffs) + " differing reports"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"forcing kernel", forcing_kernel},
        {"2-chain example", two_chain_example},
        {"jump monotonicity", monotonicity},
        {"scheme chain", scheme_chain},
        {"lfp transparency, consistency, completeness", lfp_properties},
        {"axiom audits and mutation coverage", audits},
        {"csv suite", csv_suite},
        {"fixed-frame suite", fixed_frame_suite},
        {"g-translation suite", appendix_suite},
        {"determinism across worker counts", determinism},
    };
    bool ok = true;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const int n = static_cast<int>(k + 1);
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what(), false};
        }
        std::string tag;
        if (!o.pass) {
            const bool pinned = kKnownUnattainable.count(n) && o.only_known;
            tag = pinned ? " [known, pinned]" : "";
            ok = ok && pinned;
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << n << " " << criteria[k].first << tag << ": " << o.detail
                  << std::endl;
    }
    return ok ? 0 : 1;
}
