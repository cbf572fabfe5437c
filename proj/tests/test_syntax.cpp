#include <gtest/gtest.h>

#include <functional>

#include "ldtt/corpus.hpp"
#include "ldtt/subst.hpp"
#include "ldtt/syntax.hpp"

namespace ldtt {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Usage;
}

bool same_decl(const ResolvedDecl& a, const ResolvedDecl& b) {
    const auto same = [](const Expr& x, const Expr& y) { return (!x && !y) || (x && y && alpha_eq(x, y)); };
    if (a.kind != b.kind || a.name != b.name || a.ctx.cart.size() != b.ctx.cart.size() || a.ctx.lin.size() != b.ctx.lin.size())
        return false;
    for (std::size_t i = 0; i < a.ctx.cart.size(); ++i)
        if (!alpha_eq(a.ctx.cart[i].type, b.ctx.cart[i].type)) return false;
    for (std::size_t i = 0; i < a.ctx.lin.size(); ++i)
        if (!alpha_eq(a.ctx.lin[i].type, b.ctx.lin[i].type)) return false;
    return same(a.type, b.type) && same(a.body, b.body) && same(a.rhs, b.rhs);
}

TEST(Syntax, PrettyParseRoundTripOnCorpus) {
    std::size_t n = 0;
    for (const auto& f : corpus_files()) {
        Resolver first, second;
        if (f.name != "prelude") {
            first.resolve(parse(corpus_file("prelude")->text));
            second.resolve(parse(corpus_file("prelude")->text));
        }
        for (const auto& d : first.resolve(parse(f.text, f.name))) {
            const std::string text = pretty_decl(d);
            const auto back = second.resolve(parse(text));
            ASSERT_EQ(back.size(), 1u) << text;
            EXPECT_TRUE(same_decl(d, back[0])) << text;
            ++n;
        }
    }
    EXPECT_GE(n, 50u);
}

TEST(Syntax, LexerSpansAndKeywords) {
    const auto toks = lex("let a ** b be t in\n  b ** a");
    ASSERT_EQ(toks.size(), 11u);
    EXPECT_EQ(toks[0].kind, Tok::Keyword);
    EXPECT_EQ(toks[2].kind, Tok::StarStar);
    EXPECT_EQ(toks[7].span.line, 2);
    EXPECT_EQ(toks[7].span.col, 3);
    EXPECT_EQ(toks.back().kind, Tok::End);
    EXPECT_TRUE(is_keyword("cfun"));
    EXPECT_FALSE(is_keyword("cfunx"));
    EXPECT_EQ(kind_of([] { lex("a $ b"); }), ErrorKind::LexError);
}

TEST(Syntax, ParseErrorsNameExpectedTokens) {
    try {
        parse("check (A : U) fun (x : A) x : A;");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ParseError);
        EXPECT_NE(std::string(e.what()).find("."), std::string::npos);
    }
    EXPECT_EQ(kind_of([] { Resolver().resolve(parse("check (A : U) y : A;")); }), ErrorKind::UnboundName);
}

TEST(Syntax, LinearNamesStayOutOfTypes) {
    EXPECT_EQ(kind_of([] { Resolver().resolve(parse("check (A : L) ( ; u : A) u : Lt u;")); }),
              ErrorKind::LinearVarInType);
    EXPECT_EQ(kind_of([] { Resolver().resolve(parse("check (A : L) ( ; u : A  u : A) u : A;")); }),
              ErrorKind::DuplicateLinearName);
}

// Hand-computed de Bruijn substitutions.
TEST(Subst, CartesianIndices) {
    // (#0 #1)[k/#0] = k #0
    EXPECT_TRUE(alpha_eq(subst(app(cvar(0), cvar(1)), constant("k"), 0), app(constant("k"), cvar(0))));
    // (fun (_ : #1). #0 #1)[k/#0] = fun (_ : #0). #0 k
    EXPECT_TRUE(alpha_eq(subst(lam(cvar(1), app(cvar(0), cvar(1))), constant("k"), 0),
                         lam(cvar(0), app(cvar(0), constant("k")))));
    // under a binder the substituted term is shifted: (fun (_ : U). #1)[#0/#0] = fun (_ : U). #1
    EXPECT_TRUE(alpha_eq(subst(lam(atom(Head::UnivU), cvar(1)), cvar(0), 0), lam(atom(Head::UnivU), cvar(1))));
    // #2 is above x = #1 and drops to #1; #0 is below and stays
    EXPECT_TRUE(alpha_eq(subst(pair_c(cvar(2), cvar(0)), constant("k"), 1), pair_c(cvar(1), cvar(0))));
    EXPECT_TRUE(alpha_eq(instantiate(app(cvar(1), cvar(0)), std::vector<Expr>{constant("a"), constant("b")}),
                         app(constant("a"), constant("b"))));
    EXPECT_EQ(kind_of([] { subst(cvar(0), lvar(1), 0); }), ErrorKind::SortMismatch);
}

TEST(Subst, LinearSlotsAvoidCapture) {
    EXPECT_TRUE(alpha_eq(subst_lin(tenpair(lvar(1), lvar(2)), 1, lvar(3)), tenpair(lvar(3), lvar(2))));
    // let 3 ** 4 be 5 in 3 ** 1, with 1 := 3: the binder 3 must be renamed
    const Expr body = tenlet(lvar(5), 3, 4, tenpair(lvar(3), lvar(1)));
    const Expr got = subst_lin(body, 1, lvar(3));
    EXPECT_TRUE(alpha_eq(got, tenlet(lvar(5), 6, 7, tenpair(lvar(6), lvar(3)))));
    EXPECT_FALSE(alpha_eq(got, tenlet(lvar(5), 6, 7, tenpair(lvar(3), lvar(3)))));
    EXPECT_EQ(free_slots(got), (std::set<SlotId>{3, 5}));
}

TEST(Subst, AlphaEquivalenceIgnoresHintsAndBoundSlots) {
    EXPECT_TRUE(alpha_eq(lam(atom(Head::UnivU), cvar(0), "x"), lam(atom(Head::UnivU), cvar(0), "y")));
    EXPECT_TRUE(alpha_eq(linlam(atom(Head::UnitI), 1, lvar(1)), linlam(atom(Head::UnitI), 9, lvar(9))));
    EXPECT_FALSE(alpha_eq(linlam(atom(Head::UnitI), 1, lvar(2)), linlam(atom(Head::UnitI), 9, lvar(9))));
}

}  // namespace
}  // namespace ldtt
