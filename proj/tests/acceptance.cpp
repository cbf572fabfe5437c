// Acceptance run: one PASS/FAIL line per criterion. Every matrix comparison is exact over
// GF(p); counts and time limits are pinned below.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <set>
#include <sstream>

#include "ldtt/corpus.hpp"
#include "ldtt/equality.hpp"
#include "ldtt/fam.hpp"
#include "ldtt/gpd.hpp"
#include "ldtt/suites.hpp"
#include "linearity_gen.hpp"
#include "rule_cases.hpp"
#include "support.hpp"

namespace ldtt {
namespace {

constexpr double kSuiteSeconds = 60.0;
constexpr int kLinearTerms = 600;     // at least 500
constexpr int kCounitInstances = 5;
constexpr int kRedexInstances = 200;
constexpr int kFamMaxDim = 3;
constexpr int kKanInstances = 20;
constexpr int kMaxObjects = 3;
constexpr int kMaxMorphisms = 8;
constexpr int kUaInstances = 10;
constexpr int kUaCap = 2;
constexpr int kDischarges = 3;
constexpr int kReductionTerms = 300;

struct Verdict {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

Verdict rule_coverage() {
    Verdict v;
    std::set<std::string> pos, neg;
    int bad = 0;
    for (const auto& c : rule_cases()) {
        const auto p = testing::probe(c.source);
        bool ok;
        if (c.positive) {
            ok = !p.front_error && p.accepted &&
                 (p.used(c.rule) || std::count(p.redexes.begin(), p.redexes.end(), c.rule));
        } else {
            ok = !p.accepted && (!c.error || p.error == c.error);
        }
        if (!ok) ++bad;
        if (ok) (c.positive ? pos : neg).insert(c.rule);
    }
    std::size_t covered = 0;
    for (const auto& r : calculus_rules()) covered += pos.count(r) && neg.count(r);
    v.detail << covered << "/" << calculus_rules().size() << " rules with passing positive and negative cases, "
             << rule_cases().size() - static_cast<std::size_t>(bad) << "/" << rule_cases().size() << " cases";
    v.require(bad == 0, std::to_string(bad) + " cases misbehave");
    v.require(covered == calculus_rules().size(), "coverage");
    return v;
}

Verdict linearity() {
    Verdict v;
    LinGen gen(17);
    int agree = 0, accepted = 0, invariant = 0;
    for (int i = 0; i < kLinearTerms; ++i) {
        const LinCase c = gen.next();
        const bool got = check_source(c.source()).ok();
        agree += got == c.expected;
        if (!got) continue;
        ++accepted;
        invariant += check_source(c.source(gen.permuted(c.zone))).ok();
    }
    v.detail << agree << "/" << kLinearTerms << " terms match the occurrence oracle, " << invariant << "/" << accepted
             << " accepted judgments survive a zone permutation";
    v.require(agree == kLinearTerms, "oracle agreement");
    v.require(invariant == accepted, "exchange");
    return v;
}

Verdict corpus_theorems() {
    Verdict v;
    const auto eqs = [](const SourceReport& r) {
        std::vector<bool> out;
        for (const auto& d : r.decls)
            if (d.kind == DeclKind::EqCheck) out.push_back(d.report.accepted);
        return out;
    };
    const auto all = [](const std::vector<bool>& b) { return !b.empty() && std::all_of(b.begin(), b.end(), [](bool x) { return x; }); };
    enum class Flags { Any, None, NatAndUniqueness };
    const auto report = [&](const std::string& name, Flags need) {
        const SourceReport r = run_corpus_file(name);
        const auto e = eqs(r);
        const bool flags_ok = need == Flags::Any || (need == Flags::None ? r.flags == EqFlags{} : r.flags.nat_l && r.flags.eta_sub);
        const bool ok = r.ok() && all(e) && flags_ok;
        v.detail << (v.detail.tellp() > 0 ? ", " : "") << name << " " << std::count(e.begin(), e.end(), true) << "/"
                 << e.size();
        v.require(ok, name);
        return e.size();
    };
    report("fmap", Flags::Any);
    v.require(report("counit", Flags::Any) >= kCounitInstances, "counit instances");
    report("m_sqcap", Flags::None);
    report("m_with", Flags::None);
    report("l_subset", Flags::NatAndUniqueness);
    report("lm_tensor", Flags::NatAndUniqueness);
    v.detail << " equations judged equal";
    return v;
}

Verdict fam_soundness() {
    Verdict v;
    int corpus = 0, corpus_ok = 0;
    for (const auto& f : corpus_files()) {
        const SourceReport r = run_corpus_file(f.name);
        const fam::Model model(r.sig, 2, r.flags);
        for (const auto& d : r.decls) {
            if (d.kind != DeclKind::EqCheck || !d.report.accepted) continue;
            const auto& j = d.report.judgment;
            ++corpus;
            bool ok = true;
            for (int variant = 0; variant < 2; ++variant) {
                ok = ok && model.check_soundness(j.ctx, j.subjects[0], j.subjects[1], j.subjects[2],
                                                 fam::auto_basis(model, j.ctx, 2, 2, variant));
            }
            corpus_ok += ok;
        }
    }
    gpd::Rng rng(4);
    int redex_ok = 0;
    for (int i = 0; i < kRedexInstances; ++i) redex_ok += suites::redex_soundness(suites::random_redex(rng, kFamMaxDim), 2).empty();

    Session s;
    const auto r = s.load("check (A : L) ( ; u : A (+) A) case u of inl a. inr a | inr b. inl b : A (+) A;");
    const auto& j = r.decls.at(0).report.judgment;
    const fam::Model model(r.sig, 2);
    const bool control_unsound = !model.check_soundness(j.ctx, j.subjects[0], lvar(j.ctx.lin[0].slot), j.subjects[1],
                                                        {{"A", {fam::BasisValue::Kind::Vec, {2}}}});
    v.detail << corpus_ok << "/" << corpus << " corpus equations, " << redex_ok << "/" << kRedexInstances
             << " computation-rule instances (p=2, dims<=" << kFamMaxDim << ", |Γ|<=4), swapped-injection control "
             << (control_unsound ? "unsound" : "SOUND");
    v.require(corpus_ok == corpus && corpus > 0, "corpus");
    v.require(redex_ok == kRedexInstances, "redexes");
    v.require(control_unsound, "negative control");
    return v;
}

Verdict adjunction() {
    Verdict v;
    int instances = 0, equal = 0;
    for (int k = 1; k <= 2; ++k) {
        const int combos = k == 1 ? 9 : 81;
        for (int c = 0; c < combos; ++c) {
            fam::AdjInstance inst;
            int code = c;
            for (int g = 0; g < k; ++g) {
                inst.set_sizes.push_back(code % 3);
                inst.dims.push_back(code / 3 % 3);
                code /= 9;
            }
            const auto n = fam::enumerate_adjunction(inst, 2);
            ++instances;
            equal += n.bijective && n.lin_homs == n.cart_homs;
        }
    }
    gpd::Rng rng(6);
    int natural = 0;
    for (int s = 0; s < 3; ++s) {
        std::vector<gf::Mat> m, g;
        std::vector<std::vector<int>> h;
        for (std::size_t pt = 0; pt < 2; ++pt) {
            const auto rand = [&](std::size_t r, std::size_t c) {
                return gf::decode_matrix(std::uniform_int_distribution<std::uint64_t>(0, gf::count_matrices(r, c, 2) - 1)(rng), r, c, 2);
            };
            m.push_back(rand(pt + 1, 2));
            g.push_back(rand(2, pt + 1));
            h.push_back({static_cast<int>(rng() % 2), static_cast<int>(rng() % 2)});
        }
        natural += fam::adjunction_natural(m, h, g, 2);
    }
    v.detail << equal << "/" << instances << " hom-set pairs equinumerous and bijective (p=2, dims<=2, |Γ|<=2), "
             << natural << "/3 naturality squares";
    v.require(equal == instances, "enumeration");
    v.require(natural == 3, "naturality");
    return v;
}

Verdict diagram_model() {
    using namespace gpd;
    Verdict v;
    Rng rng(8);
    int kan = 0, in_bounds = 0;
    for (int i = 0; i < kKanInstances; ++i) {
        const GpdPtr base = random_groupoid(rng, kMaxObjects, kMaxMorphisms);
        const GpdPtr delta = random_groupoid(rng, kMaxObjects, kMaxMorphisms);
        in_bounds += base->objects() <= kMaxObjects && base->size() <= static_cast<std::size_t>(kMaxMorphisms);
        const PullbackSquare sq = pullback_square(random_gpd_diagram(rng, base), random_functor(rng, delta, base));
        const Functor& pi = sq.top.proj;
        const VectDiagram f = random_vect(rng, sq.top.gpd, 2, 2);
        const VectDiagram g = random_vect(rng, base, 2, 2);
        const VectDiagram xi = random_vect(rng, base, 2, 2);
        kan += check_triangles(pi, f, g).ok() && check_beck_chevalley(sq, f) && check_frobenius(pi, xi, f);
    }
    int id_rule = 0, id_total = 0;
    for (int i = 0; i < kKanInstances; ++i) {
        const auto in = suites::random_id_instance(rng, 2, 2);
        for (const auto& M : in.sections) {
            ++id_total;
            const Section r = refl_section(in.m, M);
            id_rule += c_hat(in.m, in.xi, in.c_diag, in.c, M, M, r).comps == c_at(in.m, in.xi, in.c_diag, in.c, M).comps;
        }
    }
    const SignExample sign = bz2_sign_example(3);
    const bool distinguishes = sign.c_refl == sign.c_m && !(sign.c_loop == sign.c_refl);
    v.detail << kan << "/" << kKanInstances << " instances pass triangles, Beck-Chevalley and Frobenius (<=" << kMaxObjects
             << " objects, <=" << kMaxMorphisms << " morphisms), Id rule " << id_rule << "/" << id_total
             << " sections, BZ/2 sign example " << (distinguishes ? "distinguishes loop from refl" : "does not distinguish");
    v.require(kan == kKanInstances && in_bounds == kKanInstances, "Kan");
    v.require(id_rule == id_total && id_total >= kKanInstances, "Id computation rule");
    v.require(distinguishes, "sign example");
    return v;
}

Verdict univalence() {
    using namespace gpd;
    Verdict v;
    Rng rng(10);
    int round = 0;
    std::size_t isos = 0;
    for (int i = 0; i < kUaInstances; ++i) {
        const GpdPtr g = random_groupoid(rng);
        const VectDiagram a = random_vect(rng, g, 2, kUaCap);
        const VectDiagram b = i % 3 == 2 ? random_vect(rng, g, 2, kUaCap) : random_iso(rng, a).first;
        const UaReport r = ua_roundtrip(ua_setting(g, 2, kUaCap), a, b);
        isos += r.isos;
        round += r.roundtrip && r.isos == r.sections;
    }
    int discharged = 0;
    for (int i = 0; i < kDischarges; ++i) {
        const GpdPtr g = random_groupoid(rng);
        const VectDiagram a = random_vect(rng, g, 2, kUaCap);
        const auto [b, f] = random_iso(rng, a);
        NatTrans inv{b, a, {}};
        for (const auto& c : f.comps) inv.comps.push_back(*gf::inverse(c));
        const auto paths = [](const VectDiagram& x, const NatTrans& k) {
            return all_sections(id_over(arrow_category(m_endo(x)), sigma(x, k.comps), sigma(x, identity(x).comps)));
        };
        const auto ps = paths(a, vcompose(inv, f)), qs = paths(b, vcompose(f, inv));
        if (ps.size() != 1 || qs.size() != 1) continue;
        discharged += ua_discharge(a, b, f, inv, inv, ps[0], qs[0]).comps == f.comps;
    }
    v.detail << round << "/" << kUaInstances << " (Γ, A, B) round trips at p=2, dims<=" << kUaCap << " (" << isos
             << " isos enumerated), " << discharged << "/" << kDischarges << " premise discharges";
    v.require(round == kUaInstances, "round trip");
    v.require(discharged == kDischarges, "discharge");
    return v;
}

Verdict normalization() {
    Verdict v;
    int terms = 0, idempotent = 0;
    for (const auto& f : corpus_files()) {
        const SourceReport r = run_corpus_file(f.name);
        std::vector<Expr> exprs;
        for (const auto& d : r.decls)
            for (const auto& e : d.report.judgment.subjects) exprs.push_back(e);
        for (const auto& e : exprs) {
            const Expr once = normalize(r.sig, e, r.flags);
            ++terms;
            idempotent += alpha_eq(normalize(r.sig, once, r.flags), once);
        }
    }
    LinGen gen(3);
    int checked = 0, preserved = 0, rechecked = 0;
    while (checked < kReductionTerms) {
        const LinCase c = gen.next();
        if (!c.expected) continue;
        const SourceReport r = check_source(c.source());
        if (!r.ok()) continue;
        ++checked;
        const Judgment& j = r.decls[0].report.judgment;
        Checker ck(r.sig, r.flags);
        bool ok = true;
        Expr e = j.subjects[0];
        while (auto next = reduce_step(r.sig, e, r.flags)) {
            e = *next;
            const CheckReport again = ck.check_term(j.ctx, e, j.subjects[1]);
            if (again.error == ErrorKind::CannotInfer) continue;
            ++rechecked;
            ok = ok && again.accepted;
        }
        preserved += ok;
    }
    Signature sig;
    sig.add({"loop", atom(Head::UnivU), constant("loop"), false});
    bool budget = false;
    try {
        normalize(sig, constant("loop"), {}, 1000);
    } catch (const Error& e) {
        budget = e.kind() == ErrorKind::NonTermination;
    }
    v.detail << idempotent << "/" << terms << " corpus terms idempotent, " << preserved << "/" << kReductionTerms
             << " generated terms keep their type (" << rechecked << " reducts rechecked), looping unfolding "
             << (budget ? "stops at the step budget" : "NOT stopped");
    v.require(idempotent == terms, "idempotence");
    v.require(preserved == kReductionTerms, "subject reduction");
    v.require(budget, "budget");
    return v;
}

}  // namespace
}  // namespace ldtt

int main() {
    using namespace ldtt;
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    struct Line {
        const char* name;
        Verdict v;
    };
    std::vector<Line> lines;
    const auto run = [&](const char* name, Verdict (*f)()) {
        try {
            lines.push_back({name, f()});
        } catch (const std::exception& e) {
            Verdict v;
            v.require(false, std::string("exception: ") + e.what());
            lines.push_back({name, std::move(v)});
        }
    };
    run("rule coverage", rule_coverage);
    run("linearity discipline", linearity);
    run("corpus theorems", corpus_theorems);
    run("semantic soundness (families)", fam_soundness);
    run("adjunction enumeration", adjunction);
    run("diagram model", diagram_model);
    run("linear univalence", univalence);
    run("normalization health", normalization);
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    lines[0].v.require(seconds < kSuiteSeconds, "time limit");
    lines[0].v.detail << ", acceptance run " << static_cast<int>(seconds * 10) / 10.0 << " s (limit " << kSuiteSeconds << " s)";

    int failed = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const bool pass = lines[i].v.pass;
        failed += !pass;
        std::printf("%s %zu %s: %s\n", pass ? "PASS" : "FAIL", i + 1, lines[i].name, lines[i].v.detail.str().c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(lines.size()) - failed, lines.size());
    return failed == 0 ? 0 : 1;
}
