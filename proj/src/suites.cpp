#include "ldtt/suites.hpp"

#include <algorithm>

#include "ldtt/corpus.hpp"
#include "ldtt/error.hpp"
#include "ldtt/fam.hpp"

namespace ldtt::suites {

using gf::Mat;

bool Report::ok() const {
    return std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.pass; });
}

namespace {

std::size_t uz(int i) { return static_cast<std::size_t>(i); }

Entry tally(std::string name, const std::vector<std::string>& failures, std::size_t checked) {
    Entry e{std::move(name), failures.empty(), std::to_string(checked - std::min(checked, failures.size())) + "/" +
                                                   std::to_string(checked) + " passed",
            failures};
    return e;
}

Mat random_mat(gpd::Rng& rng, int rows, int cols, int p) {
    const auto P = static_cast<gf::Residue>(p);
    const auto n = gf::count_matrices(uz(rows), uz(cols), P);
    return gf::decode_matrix(std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng), uz(rows), uz(cols), P);
}

}  // namespace

IdInstance random_id_instance(gpd::Rng& rng, int p, int max_dim) {
    using namespace gpd;
    const GpdPtr base = random_groupoid(rng, 2, 4);
    IdInstance in{arrow_category(random_gpd_diagram(rng, base)), {}, {}, {}, {}};
    in.xi = random_vect(rng, in.m.gaai.gpd, p, max_dim);
    in.c_diag = random_vect(rng, in.m.gaai.gpd, p, max_dim);
    in.c = random_nat(rng, precompose(in.m.refl, in.xi), precompose(in.m.refl, in.c_diag)).comps;
    in.sections = all_sections(in.m.a);
    return in;
}

Report fam_suite(const Options& opt) {
    Report rep{"fam", {}};
    for (const auto& file : corpus_files()) {
        const SourceReport r = run_corpus_file(file.name, opt.flags, opt.budget);
        const fam::Model model(r.sig, opt.prime, r.flags);
        for (const auto& d : r.decls) {
            if (d.kind != DeclKind::EqCheck || !d.report.accepted) continue;
            const auto& j = d.report.judgment;
            Entry e{"soundness " + file.name + "/" + d.name, true, "2 bases", {}};
            for (int variant = 0; variant < 2; ++variant) {
                std::string why;
                try {
                    const auto basis = fam::auto_basis(model, j.ctx, 2, opt.cap, variant);
                    if (!model.check_soundness(j.ctx, j.subjects[0], j.subjects[1], j.subjects[2], basis, &why)) {
                        e.failures.push_back("basis variant " + std::to_string(variant) + ": " + why);
                    }
                } catch (const Error& err) {
                    e.failures.push_back("basis variant " + std::to_string(variant) + ": " + err.what());
                }
            }
            e.pass = e.failures.empty();
            rep.entries.push_back(std::move(e));
        }
    }

    {
        // case u of inl a. inr a | inr b. inl b against u, over A ⊕ A.
        const auto prelude = run_corpus_file("prelude", opt.flags, opt.budget);
        const fam::Model model(prelude.sig, opt.prime, prelude.flags);
        Ctx ctx;
        ctx.cart.push_back({"A", atom(Head::UnivL)});
        ctx.lin.push_back({0, "u", plus(el(cvar(0)), el(cvar(0)))});
        const Expr swapped = pluscase(lvar(0), 1, inr(lvar(1)), 2, inl(lvar(2)));
        const fam::Basis basis{{"A", {fam::BasisValue::Kind::Vec, {std::max(1, opt.cap)}}}};
        std::string why;
        const bool sound = model.check_soundness(ctx, swapped, lvar(0), ctx.lin[0].type, basis, &why);
        rep.entries.push_back({"negative control (swapped injections)", !sound, sound ? "judged sound" : "unsound: " + why, {}});
    }

    {
        gpd::Rng rng(opt.seed);
        std::vector<std::string> failures;
        const int n = 10 * opt.instances;
        for (int i = 0; i < n; ++i) {
            const RedexInstance in = random_redex(rng, std::min(opt.cap, 3));
            std::string why;
            try {
                why = redex_soundness(in, opt.prime, opt.budget);
            } catch (const Error& err) {
                why = err.what();
            }
            if (!why.empty()) failures.push_back(in.rule + " instance " + std::to_string(i) + ": " + why);
        }
        rep.entries.push_back(tally("computation rules", failures, static_cast<std::size_t>(n)));
    }

    {
        std::vector<std::string> failures;
        std::size_t n = 0;
        for (int k = 1; k <= 2; ++k) {
            const int combos = k == 1 ? 9 : 81;
            for (int c = 0; c < combos; ++c) {
                fam::AdjInstance inst;
                int code = c;
                for (int g = 0; g < k; ++g) {
                    inst.set_sizes.push_back(code % 3);
                    code /= 3;
                    inst.dims.push_back(code % 3);
                    code /= 3;
                }
                const auto count = fam::enumerate_adjunction(inst, opt.prime);
                ++n;
                if (!count.bijective || count.lin_homs != count.cart_homs) {
                    failures.push_back("sizes/dims instance " + std::to_string(n) + ": " + std::to_string(count.lin_homs) +
                                       " vs " + std::to_string(count.cart_homs));
                }
            }
        }
        rep.entries.push_back(tally("adjunction hom-set enumeration", failures, n));
    }

    {
        gpd::Rng rng(opt.seed);
        std::vector<std::string> failures;
        for (int s = 0; s < 3; ++s) {
            const int k = 2;
            std::vector<Mat> m, g;
            std::vector<std::vector<int>> h;
            for (int pt = 0; pt < k; ++pt) {
                const int a = 1 + s % 2, a2 = 2, d = 1 + pt, d2 = 2;
                m.push_back(random_mat(rng, d, a, opt.prime));
                g.push_back(random_mat(rng, d2, d, opt.prime));
                std::vector<int> hp;
                for (int i = 0; i < a2; ++i) hp.push_back(std::uniform_int_distribution<int>(0, a - 1)(rng));
                h.push_back(hp);
            }
            if (!fam::adjunction_natural(m, h, g, opt.prime)) failures.push_back("square " + std::to_string(s));
        }
        rep.entries.push_back(tally("adjunction naturality squares", failures, 3));
    }
    return rep;
}

Report gpd_suite(const Options& opt) {
    using namespace gpd;
    Report rep{"gpd", {}};
    Rng rng(opt.seed);
    std::vector<std::string> audit, tri, bc, fr, split;
    const auto n = static_cast<std::size_t>(opt.instances);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string tag = "instance " + std::to_string(i);
        try {
            const GpdPtr A = random_groupoid(rng);
            const GpdPtr B = random_groupoid(rng);
            const Functor p = random_functor(rng, A, B);
            const VectDiagram F = random_vect(rng, A, opt.prime, opt.cap);
            const VectDiagram G = random_vect(rng, B, opt.prime, opt.cap);
            const auto t = check_triangles(p, F, G);
            if (!t.lan_left) tri.push_back(tag + ": Lan left triangle");
            if (!t.lan_right) tri.push_back(tag + ": Lan right triangle");
            if (!t.ran_left) tri.push_back(tag + ": Ran left triangle");
            if (!t.ran_right) tri.push_back(tag + ": Ran right triangle");

            const GpdDiagram D = random_gpd_diagram(rng, B);
            const GpdPtr Delta = random_groupoid(rng);
            const Functor f = random_functor(rng, Delta, B);
            const PullbackSquare sq = pullback_square(D, f);
            for (const auto& g : {A, B, Delta, sq.top.gpd, sq.pulled.gpd}) g->audit();
            std::string why;
            if (!check_beck_chevalley(sq, random_vect(rng, sq.top.gpd, opt.prime, opt.cap), &why)) bc.push_back(tag + ": " + why);
            if (!check_frobenius(p, random_vect(rng, B, opt.prime, opt.cap), F, &why)) fr.push_back(tag + ": " + why);

            const Functor q = random_functor(rng, Delta, A);
            if (!(precompose(compose(p, q), G) == precompose(q, precompose(p, G))) ||
                !(precompose(identity(B), G) == G)) {
                split.push_back(tag);
            }
        } catch (const Error& e) {
            audit.push_back(tag + ": " + e.what());
        }
    }
    rep.entries.push_back(tally("construction audit", audit, n));
    rep.entries.push_back(tally("Kan triangle identities", tri, n));
    rep.entries.push_back(tally("Beck-Chevalley", bc, n));
    rep.entries.push_back(tally("Frobenius", fr, n));
    rep.entries.push_back(tally("split reindexing", split, n));

    {
        std::vector<std::string> fails;
        const GpdPtr two = codiscrete(2);
        if (lan(to_terminal(two), constant(two, opt.prime, 1)).ext.dims[0] != 1) fails.push_back("coinvariants of a connected groupoid");
        const GpdPtr z2 = cyclic(2);
        VectDiagram sign = constant(z2, 3, 1);
        sign.mats[1] = Mat(1, 1, 3, {2});
        if (ran(to_terminal(z2), sign).ext.dims[0] != 0) fails.push_back("sign invariants over GF(3)");
        if (lan(to_terminal(z2), sign).ext.dims[0] != 0) fails.push_back("sign coinvariants over GF(3)");
        const VectDiagram F = random_vect(rng, two, opt.prime, opt.cap);
        if (!(lan(identity(two), F).ext.dims == F.dims) || !(ran(identity(two), F).ext.dims == F.dims)) {
            fails.push_back("extension along the identity");
        }
        rep.entries.push_back(tally("Kan extension examples", fails, 4));
    }

    {
        std::vector<std::string> fails;
        std::size_t used = 0;
        for (std::size_t i = 0; used < n && i < 4 * n; ++i) {
            const std::string tag = "instance " + std::to_string(i);
            try {
                const IdInstance in = random_id_instance(rng, opt.prime, opt.cap);
                if (in.sections.empty()) continue;
                ++used;
                std::uniform_int_distribution<std::size_t> pick(0, in.sections.size() - 1);
                const Section& M = in.sections[pick(rng)];
                const Section refl = refl_section(in.m, M);
                const auto lhs = c_hat(in.m, in.xi, in.c_diag, in.c, M, M, refl);
                if (lhs.comps != c_at(in.m, in.xi, in.c_diag, in.c, M).comps) fails.push_back(tag + ": refl rule");
                const Section& N = in.sections[pick(rng)];
                const auto paths = all_sections(id_over(in.m, M, N));
                for (const auto& P : paths) {
                    if (!phi_natural(in.m, M, N, P)) fails.push_back(tag + ": φ not natural");
                    if (!is_natural(c_hat(in.m, in.xi, in.c_diag, in.c, M, N, P))) fails.push_back(tag + ": ĉ not natural");
                }
            } catch (const Error& e) {
                fails.push_back(tag + ": " + e.what());
            }
        }
        rep.entries.push_back(tally("Id computation rule", fails, used));
    }

    {
        const SignExample s = bz2_sign_example(3);
        const bool pass = s.c_refl == s.c_m && !(s.c_loop == s.c_refl);
        rep.entries.push_back({"BZ/2 sign example", pass,
                               "refl " + std::to_string(s.c_refl(0, 0)) + ", loop " + std::to_string(s.c_loop(0, 0)) +
                                   ", c∘M " + std::to_string(s.c_m(0, 0)),
                               {}});
    }
    return rep;
}

Report univalence_suite(const Options& opt) {
    using namespace gpd;
    Report rep{"univalence", {}};
    Rng rng(opt.seed);
    {
        std::vector<std::string> fails;
        const auto n = static_cast<std::size_t>(std::max(10, opt.instances));
        std::size_t isos = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string tag = "instance " + std::to_string(i);
            try {
                const GpdPtr g = random_groupoid(rng);
                const UaSetting s = ua_setting(g, opt.prime, opt.cap);
                const VectDiagram a = random_vect(rng, g, opt.prime, opt.cap);
                const VectDiagram b = i % 3 == 2 ? random_vect(rng, g, opt.prime, opt.cap) : random_iso(rng, a).first;
                const UaReport r = ua_roundtrip(s, a, b);
                isos += r.isos;
                if (!r.roundtrip) fails.push_back(tag + ": " + std::to_string(r.isos) + " isos, " + std::to_string(r.sections) + " sections");
            } catch (const Error& e) {
                fails.push_back(tag + ": " + e.what());
            }
        }
        auto e = tally("ua round trip", fails, n);
        e.detail += ", " + std::to_string(isos) + " natural isos enumerated";
        rep.entries.push_back(std::move(e));
    }
    {
        const GpdPtr z2 = cyclic(2);
        const UaSetting s = ua_setting(z2, 3, 1);
        const VectDiagram triv = constant(z2, 3, 1);
        VectDiagram sign = triv;
        sign.mats[1] = Mat(1, 1, 3, {2});
        const UaReport r = ua_roundtrip(s, triv, sign);
        rep.entries.push_back({"trivial vs sign over GF(3)", r.isos == 0 && r.sections == 0 && r.roundtrip,
                               std::to_string(r.isos) + " isos, " + std::to_string(r.sections) + " sections", {}});
    }
    {
        std::vector<std::string> fails;
        for (int i = 0; i < 3; ++i) {
            const std::string tag = "instance " + std::to_string(i);
            try {
                const GpdPtr g = random_groupoid(rng);
                const VectDiagram a = random_vect(rng, g, opt.prime, opt.cap);
                const auto [b, f] = random_iso(rng, a);
                NatTrans inv{b, a, {}};
                for (const auto& c : f.comps) inv.comps.push_back(*gf::inverse(c));
                const auto endo_path = [&](const VectDiagram& x, const NatTrans& k) {
                    const IdModel ids = arrow_category(m_endo(x));
                    return all_sections(id_over(ids, sigma(x, k.comps), sigma(x, identity(x).comps)));
                };
                const auto ps = endo_path(a, vcompose(inv, f));
                const auto qs = endo_path(b, vcompose(f, inv));
                if (ps.size() != 1 || qs.size() != 1) {
                    fails.push_back(tag + ": identity premises not unique");
                    continue;
                }
                const NatTrans iso = ua_discharge(a, b, f, inv, inv, ps[0], qs[0]);
                if (iso.comps != f.comps || !is_natural(iso)) fails.push_back(tag + ": wrong isomorphism");
            } catch (const Error& e) {
                fails.push_back(tag + ": " + e.what());
            }
        }
        rep.entries.push_back(tally("L-ua-I premise discharge", fails, 3));
    }
    return rep;
}

}  // namespace ldtt::suites
