#include <gtest/gtest.h>

#include "ldtt/corpus.hpp"
#include "ldtt/equality.hpp"
#include "ldtt/kernel.hpp"
#include "linearity_gen.hpp"
#include "support.hpp"

namespace ldtt {
namespace {

// Every term and type mentioned by a corpus file, with the signature and flags it was checked under.
struct CorpusTerms {
    SourceReport report;
    std::vector<std::pair<Ctx, Expr>> exprs;
};

std::vector<CorpusTerms> corpus_terms() {
    std::vector<CorpusTerms> out;
    for (const auto& f : corpus_files()) {
        CorpusTerms t{run_corpus_file(f.name), {}};
        for (const auto& d : t.report.decls) {
            for (const auto& s : d.report.judgment.subjects) t.exprs.emplace_back(d.report.judgment.ctx, s);
        }
        for (const auto& e : t.report.sig.entries()) {
            t.exprs.emplace_back(Ctx{}, e.type);
            if (e.value) t.exprs.emplace_back(Ctx{}, e.value);
        }
        out.push_back(std::move(t));
    }
    return out;
}

TEST(Normalize, IdempotentOnCorpus) {
    std::size_t n = 0;
    for (const auto& t : corpus_terms()) {
        for (const auto& [ctx, e] : t.exprs) {
            const Expr once = normalize(t.report.sig, e, t.report.flags);
            EXPECT_TRUE(alpha_eq(normalize(t.report.sig, once, t.report.flags), once)) << pretty(once, ctx);
            ++n;
        }
    }
    EXPECT_GT(n, 100u);
}

TEST(Normalize, TraceReplaysToNormalForm) {
    for (const auto& t : corpus_terms()) {
        for (const auto& [ctx, e] : t.exprs) {
            const Reduced r = reduce(t.report.sig, ctx, e, t.report.flags);
            EXPECT_TRUE(alpha_eq(replay(t.report.sig, e, r.trace, t.report.flags), r.term));
        }
    }
}

TEST(Normalize, LocalConfluenceOnCorpus) {
    std::size_t forks = 0;
    for (const auto& t : corpus_terms()) {
        for (const auto& [ctx, e] : t.exprs) {
            const auto reducts = one_step_reducts(t.report.sig, e, t.report.flags);
            if (reducts.size() < 2) continue;
            ++forks;
            const Expr nf = normalize(t.report.sig, reducts[0], t.report.flags);
            for (const auto& r : reducts) EXPECT_TRUE(alpha_eq(normalize(t.report.sig, r, t.report.flags), nf));
        }
    }
    EXPECT_GT(forks, 0u);
}

TEST(Normalize, SubjectReductionOnGeneratedTerms) {
    LinGen gen(3);
    // β can strip the annotation that put an intro form in synthesis position; such reducts are
    // well typed but not inferable, so they are counted apart rather than rechecked.
    int terms = 0, steps = 0, unannotated = 0;
    while (terms < 300) {
        const LinCase c = gen.next();
        if (!c.expected) continue;
        const SourceReport r = check_source(c.source());
        ASSERT_TRUE(r.decls.at(0).report.accepted) << c.source();
        const Judgment& j = r.decls[0].report.judgment;
        Checker checker(r.sig, r.flags);
        Expr e = j.subjects[0];
        while (auto next = reduce_step(r.sig, e, r.flags)) {
            e = *next;
            ++steps;
            const CheckReport again = checker.check_term(j.ctx, e, j.subjects[1]);
            if (again.error == ErrorKind::CannotInfer) {
                ++unannotated;
                continue;
            }
            ASSERT_TRUE(again.accepted) << c.source() << "\nreduct: " << pretty(e, j.ctx) << "\n" << again.reason;
        }
        ++terms;
    }
    EXPECT_GT(steps - unannotated, 300);
}

TEST(Normalize, BudgetStopsLoopingUnfolding) {
    Signature sig;
    sig.add({"loop", atom(Head::UnivU), constant("loop"), false});
    sig.add({"ping", atom(Head::UnivU), constant("pong"), false});
    sig.add({"pong", atom(Head::UnivU), constant("ping"), false});
    for (const char* name : {"loop", "ping"}) {
        try {
            normalize(sig, constant(name), {}, 1000);
            FAIL() << name << " normalized";
        } catch (const Error& e) {
            EXPECT_EQ(e.kind(), ErrorKind::NonTermination);
        }
    }
}

TEST(Equal, WorkedExamples) {
    const auto eq = [](const std::string& decl, EqFlags f = {}) { return testing::probe(decl, f).accepted; };
    EXPECT_TRUE(eq("checkeq (B : L) (t : Mt B) sig (unsig t) == t : Mt B;"));
    EXPECT_TRUE(eq("checkeq (B : L) (m : Mt B) unsig (sig (unsig m)) == unsig m : B;"));
    const std::string surj = "checkeq (A B : U) (p : Sigma (x : A). B) (pr1 p, pr2 p) == p : Sigma (x : A). B;";
    EXPECT_FALSE(eq(surj));
    EXPECT_TRUE(eq(surj, EqFlags{false, true, false, false}));
    EXPECT_TRUE(eq("checkeq (A : U) (a : A) a == a : A;"));
    EXPECT_FALSE(eq("checkeq (A : U) (a b : A) a == b : A;"));
}

TEST(Equal, FlagMonotonicityOnCorpus) {
    const EqFlags all{true, true, true, true};
    for (const auto& t : corpus_terms()) {
        for (const auto& d : t.report.decls) {
            if (d.kind != DeclKind::EqCheck || !d.report.accepted) continue;
            const auto& j = d.report.judgment;
            EXPECT_TRUE(equal(t.report.sig, j.ctx, j.subjects[2], j.subjects[0], j.subjects[1], all)) << d.name;
        }
    }
}

}  // namespace
}  // namespace ldtt
