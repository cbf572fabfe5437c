#include <gtest/gtest.h>

#include "ldtt/corpus.hpp"
#include "support.hpp"

namespace ldtt {
namespace {

struct Outcome {
    std::vector<bool> equations;  // acceptance of each checkeq, in file order
    bool defs_ok = true;
    EqFlags flags;
};

Outcome run(const std::string& name, EqFlags base = {}) {
    const SourceReport r = run_corpus_file(name, base);
    EXPECT_FALSE(r.front_error.has_value()) << name;
    Outcome o;
    o.flags = r.flags;
    for (const auto& d : r.decls) {
        if (d.kind == DeclKind::EqCheck) o.equations.push_back(d.report.accepted);
        if (d.kind == DeclKind::Def) o.defs_ok = o.defs_ok && d.report.accepted;
    }
    return o;
}

bool all(const std::vector<bool>& v) { return !v.empty() && std::all_of(v.begin(), v.end(), [](bool b) { return b; }); }

TEST(Corpus, PreludeChecks) { EXPECT_TRUE(run_corpus_file("prelude").ok()); }

TEST(Corpus, FunctorLaws) {
    const Outcome o = run("fmap");
    EXPECT_TRUE(o.defs_ok);
    EXPECT_EQ(o.equations.size(), 4u);
    EXPECT_TRUE(all(o.equations));
}

TEST(Corpus, CounitUniquenessOnFiveOrMoreInstances) {
    const Outcome o = run("counit");
    EXPECT_TRUE(o.defs_ok);
    EXPECT_GE(o.equations.size(), 5u);
    EXPECT_TRUE(all(o.equations));
}

TEST(Corpus, MOfCapWithoutFlags) {
    const Outcome o = run("m_sqcap");
    EXPECT_EQ(o.flags, EqFlags{});
    EXPECT_TRUE(o.defs_ok);
    EXPECT_TRUE(all(o.equations));
}

// The round trip through Σ ends at (pr1 p, pr2 p) against p, which is Σ-η.
TEST(Corpus, MOfWithNeedsSigmaEta) {
    const Outcome plain = run("m_with");
    EXPECT_EQ(plain.flags, EqFlags{});
    EXPECT_TRUE(plain.defs_ok);
    ASSERT_EQ(plain.equations.size(), 2u);
    EXPECT_TRUE(plain.equations[0]);
    EXPECT_FALSE(plain.equations[1]);
    EXPECT_TRUE(all(run("m_with", EqFlags{false, true, false, false}).equations));
}

TEST(Corpus, LOfSigmaWithNaturalityAndUniqueness) {
    const Outcome o = run("l_subset");
    EXPECT_TRUE(o.flags.nat_l && o.flags.eta_sub);
    EXPECT_TRUE(o.defs_ok);
    EXPECT_TRUE(all(o.equations));
}

TEST(Corpus, BangOfWithIsTensor) {
    const Outcome o = run("lm_tensor");
    EXPECT_TRUE(o.flags.nat_l && o.flags.eta_sub);
    EXPECT_TRUE(o.defs_ok);
    EXPECT_TRUE(all(o.equations));
}

TEST(Corpus, IsoEquationsNeedTheirFlags) {
    const std::string src =
        "def lmt_to (A B : L) : Lt (Mt (A & B)) -o Lt (Mt A) * Lt (Mt B) :="
        "  lfun (u : Lt (Mt (A & B))). let m be u in lift (sig (fst (unsig m))) ** lift (sig (snd (unsig m)));"
        "def lmt_from (A B : L) : Lt (Mt A) * Lt (Mt B) -o Lt (Mt (A & B)) :="
        "  lfun (w : Lt (Mt A) * Lt (Mt B)). let a ** b be w in let x be a in let y be b in lift (sig <unsig x, unsig y>);"
        "checkeq (A B : L) ( ; w : Lt (Mt A) * Lt (Mt B))"
        "  lmt_to [A] [B] @ (lmt_from [A] [B] @ w) == w : Lt (Mt A) * Lt (Mt B);";
    EXPECT_FALSE(testing::probe(src).accepted);
    EXPECT_TRUE(testing::probe(src, EqFlags{true, false, true, false}).accepted);
}

// Sources that differ only in the equation: the positive twin guards against vacuous rejection.
TEST(Corpus, WrongComposites) {
    const std::string fmapl =
        "def fmapL (A B : U) : Lt (A -> B) -o Lt A -o Lt B :="
        "  lfun (u : Lt (A -> B)). lfun (v : Lt A). let f be u in let a be v in lift (f a);";
    const std::string eps = "def eps (B : L) ( ; b1 : Lt (Mt B)) : B := let m be b1 in unsig m;";
    const EqFlags nat{true, false, false, false};
    const auto accepted = [&](const std::string& s) {
        const auto p = testing::probe(s, nat);
        EXPECT_FALSE(p.front_error) << p.reason;
        return p.accepted;
    };
    EXPECT_TRUE(accepted(fmapl + "checkeq (A : U) (f : A -> A) ( ; v : Lt A)"
                                 "  fmapL [A] [A] @ lift f @ v == fmapL [A] [A] @ lift f @ v : Lt A;"));
    EXPECT_FALSE(accepted(fmapl + "checkeq (A : U) (f g : A -> A) ( ; v : Lt A)"
                                  "  fmapL [A] [A] @ lift f @ v == fmapL [A] [A] @ lift g @ v : Lt A;"));
    EXPECT_TRUE(accepted(eps + "checkeq (A : U) ( ; y : Lt A)"
                               "  eps [Lt A (+) Lt A] @ (let x be y in lift (sig (inl (lift x)))) == inl y : Lt A (+) Lt A;"));
    EXPECT_FALSE(accepted(eps + "checkeq (A : U) ( ; y : Lt A)"
                                "  eps [Lt A (+) Lt A] @ (let x be y in lift (sig (inl (lift x)))) == inr y : Lt A (+) Lt A;"));
}

}  // namespace
}  // namespace ldtt
