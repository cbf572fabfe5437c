#include <gtest/gtest.h>

#include "ldtt/corpus.hpp"
#include "ldtt/fam.hpp"
#include "ldtt/suites.hpp"

namespace ldtt {
namespace {

using gf::Mat;

struct Interpreted {
    SourceReport report;
    fam::LinMorFam mor;
};

// Interprets the subject of a single check declaration read after the prelude.
Interpreted interpret(const std::string& decl, const fam::Basis& basis, int p = 2) {
    Session s;
    s.load(corpus_file("prelude")->text, "prelude.ldtt");
    Interpreted out{s.load(decl, "t.ldtt"), {}};
    const auto& d = out.report.decls.at(0);
    EXPECT_TRUE(d.report.accepted) << d.report.reason;
    const fam::Model model(out.report.sig, p, out.report.flags);
    const auto& j = d.report.judgment;
    out.mor = model.interp_lin_term(model.interp_ctx(j.ctx, basis), j.subjects[0], j.subjects[1]);
    return out;
}

fam::Basis vecs(int a, int b) {
    return {{"A", {fam::BasisValue::Kind::Vec, {a}}}, {"B", {fam::BasisValue::Kind::Vec, {b}}}};
}

// e_a ⊗ e_b ↦ e_b ⊗ e_a, left-major.
Mat commutation(std::size_t da, std::size_t db) {
    Mat m(da * db, da * db, 2);
    for (std::size_t a = 0; a < da; ++a)
        for (std::size_t b = 0; b < db; ++b) m.set(b * da + a, a * db + b, 1);
    return m;
}

TEST(Fam, SwapIsTheCommutationPermutation) {
    for (int a = 0; a <= 3; ++a) {
        for (int b = 0; b <= 3; ++b) {
            const auto r = interpret("check (A B : L) ( ; u : A * B) swap [A] [B] @ u : B * A;", vecs(a, b));
            ASSERT_EQ(r.mor.mats.size(), 1u);
            EXPECT_EQ(r.mor.mats[0], commutation(static_cast<std::size_t>(a), static_cast<std::size_t>(b))) << a << "," << b;
        }
    }
}

TEST(Fam, AdditiveStructure) {
    const auto diag = interpret("check (A : L) ( ; u : A) diag [A] @ u : A & A;", vecs(3, 0));
    EXPECT_EQ(diag.mor.mats.at(0), gf::vstack(gf::idmat(3, 2), gf::idmat(3, 2)));
    const auto top = interpret("check (A : L) ( ; u : A) discard [A] @ u : Top;", vecs(3, 0));
    EXPECT_EQ(top.mor.mats.at(0).rows(), 0u);
    EXPECT_EQ(top.mor.mats.at(0).cols(), 3u);
    const auto mirror = interpret("check (A B : L) ( ; u : A (+) B) mirror [A] [B] @ u : B (+) A;", vecs(2, 1));
    Mat expect(3, 3, 2);
    expect.set(0, 2, 1);
    expect.set(1, 0, 1);
    expect.set(2, 1, 1);
    EXPECT_EQ(mirror.mor.mats.at(0), expect);
    const auto unit = interpret("check (A : L) ( ; u : Unit * A) unitl [A] @ u : A;", vecs(2, 0));
    EXPECT_EQ(unit.mor.mats.at(0), gf::idmat(2, 2));
}

TEST(Fam, CapIsAProductOverTheIndex) {
    fam::Basis basis = vecs(2, 0);
    basis["X"] = {fam::BasisValue::Kind::Set, {3}};
    const auto r = interpret("check (A : L) (X : U) ( ; u : A) cfun (x : X). u : cap (x : X). A;", basis);
    const Mat id = gf::idmat(2, 2);
    EXPECT_EQ(r.mor.mats.at(0), gf::vstack(gf::vstack(id, id), id));
}

TEST(Fam, CorpusEquationsAreSound) {
    std::size_t checked = 0;
    for (const auto& f : corpus_files()) {
        const SourceReport r = run_corpus_file(f.name);
        const fam::Model model(r.sig, 2, r.flags);
        for (const auto& d : r.decls) {
            if (d.kind != DeclKind::EqCheck || !d.report.accepted) continue;
            const auto& j = d.report.judgment;
            for (int variant = 0; variant < 2; ++variant) {
                std::string why;
                const auto basis = fam::auto_basis(model, j.ctx, 2, 2, variant);
                EXPECT_TRUE(model.check_soundness(j.ctx, j.subjects[0], j.subjects[1], j.subjects[2], basis, &why))
                    << f.name << "/" << d.name << ": " << why;
                ++checked;
            }
        }
    }
    EXPECT_GE(checked, 40u);
}

TEST(Fam, RandomComputationRulesAreSound) {
    gpd::Rng rng(2024);
    std::map<std::string, int> per_rule;
    for (int i = 0; i < 200; ++i) {
        const auto in = suites::random_redex(rng, 3);
        ++per_rule[in.rule];
        EXPECT_EQ(suites::redex_soundness(in, 2), "") << in.source;
    }
    EXPECT_GE(per_rule.size(), 12u);
}

TEST(Fam, SwappedInjectionsAreUnsound) {
    Session s;
    const auto r = s.load("check (A : L) ( ; u : A (+) A) case u of inl a. inr a | inr b. inl b : A (+) A;");
    ASSERT_TRUE(r.decls.at(0).report.accepted);
    const auto& j = r.decls[0].report.judgment;
    const fam::Model model(r.sig, 2);
    for (int d = 1; d <= 3; ++d) {
        const fam::Basis basis{{"A", {fam::BasisValue::Kind::Vec, {d}}}};
        EXPECT_FALSE(model.check_soundness(j.ctx, j.subjects[0], lvar(j.ctx.lin[0].slot), j.subjects[1], basis));
    }
    // the honest twin
    const fam::Basis basis{{"A", {fam::BasisValue::Kind::Vec, {2}}}};
    EXPECT_TRUE(model.check_soundness(j.ctx, j.subjects[0], j.subjects[0], j.subjects[1], basis));
}

std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
}

// |Hom(F(A), B)| = p^(|A| dim B) = |Hom(A, M B)| = (p^dim B)^|A|, pointwise and multiplied over Γ.
TEST(Fam, AdjunctionHomSetsMatchClosedForm) {
    for (std::size_t k = 1; k <= 2; ++k) {
        for (std::size_t code = 0; code < ipow(9, k); ++code) {
            fam::AdjInstance inst;
            std::size_t c = code, lin = 1, cart = 1;
            for (std::size_t g = 0; g < k; ++g) {
                const int a = static_cast<int>(c % 3), d = static_cast<int>(c / 3 % 3);
                c /= 9;
                inst.set_sizes.push_back(a);
                inst.dims.push_back(d);
                lin *= ipow(2, static_cast<std::size_t>(a * d));
                cart *= ipow(ipow(2, static_cast<std::size_t>(d)), static_cast<std::size_t>(a));
            }
            const auto got = fam::enumerate_adjunction(inst, 2);
            EXPECT_EQ(got.lin_homs, lin);
            EXPECT_EQ(got.cart_homs, cart);
            EXPECT_TRUE(got.bijective);
        }
    }
}

TEST(Fam, TransposeRoundTripsAndIsNatural) {
    gpd::Rng rng(5);
    const auto rand_mat = [&](std::size_t r, std::size_t c) {
        return gf::decode_matrix(std::uniform_int_distribution<std::uint64_t>(0, gf::count_matrices(r, c, 2) - 1)(rng), r, c, 2);
    };
    for (int square = 0; square < 3; ++square) {
        std::vector<Mat> m, g;
        std::vector<std::vector<int>> h;
        for (std::size_t pt = 0; pt < 2; ++pt) {
            m.push_back(rand_mat(pt + 1, 2));
            g.push_back(rand_mat(2, pt + 1));
            h.push_back({static_cast<int>(rng() % 2), static_cast<int>(rng() % 2), static_cast<int>(rng() % 2)});
        }
        EXPECT_EQ(fam::transpose_cart(fam::transpose_lin(m), {1, 2}, 2), m);
        EXPECT_TRUE(fam::adjunction_natural(m, h, g, 2));
    }
}

}  // namespace
}  // namespace ldtt
