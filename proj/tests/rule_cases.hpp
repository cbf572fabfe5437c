#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ldtt/error.hpp"

namespace ldtt {

struct RuleCaseData {
    std::string rule;
    bool positive = true;
    std::string source;  // the last declaration is the one judged
    std::optional<ErrorKind> error;
};

inline void PrintTo(const RuleCaseData& c, std::ostream* os) { *os << c.rule << (c.positive ? " positive" : " negative"); }

// Every typing and computation rule of the calculus: structural, cartesian, the ILL formers,
// the auxiliary Σ/Id eliminations, ⊓/⊏ and the modalities.
inline const std::vector<std::string>& calculus_rules() {
    static const std::vector<std::string> rules{
        "var",  "const", "lin-var", "U-F",  "L-F-univ", "El-F", "El-code", "Π-F",  "Π-I",  "Π-E",  "Π-C",
        "Σ-F",  "Σ-I",   "Σ-pr1",   "Σ-pr2", "Σ-E1",    "Σ-E2", "Σ-C",     "Id-F", "Id-I", "=-E1", "=-E2",
        "Id-C", "⊓-F",   "⊓-I",     "⊓-E",  "⊓-C",      "⊏-F",  "⊏-I",     "⊏-E",  "⊏-C",  "⊗-F",  "⊗-I",
        "⊗-E",  "⊗-C",   "⊸-F",     "⊸-I",  "⊸-E",      "⊸-C",  "&-F",     "&-I",  "&-E1", "&-E2", "&-C",
        "⊕-F",  "⊕-I1",  "⊕-I2",    "⊕-E",  "⊕-C",      "I-F",  "I-I",     "I-E",  "I-C",  "0-F",  "0-E",
        "⊤-F",  "⊤-I",   "L-F",     "L-I",  "L-E",      "L-C",  "L-U",     "M-F",  "M-I",  "M-E",  "M-C1",
        "M-C2", "ua-I",
    };
    return rules;
}

inline const std::vector<RuleCaseData>& rule_cases() {
    using E = ErrorKind;
    static const std::vector<RuleCaseData> cases{
        // structural
        {"var", true, "check (A : U) (a : A) a : A;", {}},
        {"var", false, "check (A : U) y : A;", E::UnboundName},
        {"const", true, "check (A : U) (a : A) id A a : A;", {}},
        {"const", false, "check (A : U) (a : A) nosuch a : A;", E::UnboundName},
        {"lin-var", true, "check (A : L) ( ; u : A) u : A;", {}},
        {"lin-var", false, "check (A : L) ( ; u : A) u ** u : A * A;", E::LinearViolation},
        {"U-F", true, "check (A : U) fun (x : U). x : Pi (x : U). U;", {}},
        {"U-F", false, "check (F : U -> U) F U : U;", {}},
        {"L-F-univ", true, "check (A : L) A : L;", {}},
        {"L-F-univ", false, "check (A : L) (B : L -> L) B L : L;", E::TypeMismatch},
        {"El-F", true, "check (A : U) (a : El A) a : El A;", {}},
        {"El-F", false, "check (A : U) (a : A) fun (x : a). x : Pi (x : a). a;", {}},
        {"El-code", true, "check (A : U) El A : U;", {}},
        {"El-code", false, "check (A : L) El A : U;", E::TypeMismatch},

        // Π and Σ
        {"Π-F", true, "check (A : U) fun (x : A). x : Pi (x : A). A;", {}},
        {"Π-F", false, "check (A : L) fun (x : A). x : Pi (x : A). A;", {}},
        {"Π-I", true, "check (A B : U) (b : B) fun (x : A). b : Pi (x : A). B;", {}},
        {"Π-I", false, "check (A B : U) (b : B) fun (x : A). x : Pi (x : A). B;", E::TypeMismatch},
        {"Π-E", true, "check (A B : U) (f : A -> B) (a : A) f a : B;", {}},
        {"Π-E", false, "check (A B : U) (f : A -> B) (b : B) f b : B;", E::TypeMismatch},
        {"Π-C", true, "checkeq (A : U) (a : A) (fun (x : A). x) a == a : A;", {}},
        {"Π-C", false, "checkeq (A : U) (a b : A) (fun (x : A). x) a == b : A;", {}},
        {"Σ-F", true, "check (A : U) (B : A -> U) (a : A) (b : B a) (a, b) : Sigma (x : A). B x;", {}},
        {"Σ-F", false, "check (A : U) (B : L) (a : A) (a, a) : Sigma (x : A). B;", {}},
        {"Σ-I", true, "check (A B : U) (a : A) (b : B) (a, b) : Sigma (x : A). B;", {}},
        {"Σ-I", false, "check (A B : U) (a : A) (a, a) : Sigma (x : A). B;", E::TypeMismatch},
        {"Σ-pr1", true, "check (A B : U) (p : Sigma (x : A). B) pr1 p : A;", {}},
        {"Σ-pr1", false, "check (A : U) (a : A) pr1 a : A;", E::TypeMismatch},
        {"Σ-pr2", true, "check (A : U) (B : A -> U) (p : Sigma (x : A). B x) pr2 p : B (pr1 p);", {}},
        {"Σ-pr2", false, "check (A B : U) (p : Sigma (x : A). B) pr2 p : A;", E::TypeMismatch},
        {"Σ-E1", true, "check (A : U) (B : A -> U) (p : Sigma (x : A). B x) split1 p (t. A) (x y. x) : A;", {}},
        {"Σ-E1", false, "check (A B : U) (p : Sigma (x : A). B) split1 p (t. A) (x y. y) : A;", E::TypeMismatch},
        {"Σ-E2", true,
         "check (A : U) (B : A -> U) (C : L) (p : Sigma (x : A). B x) ( ; u : C) split2 p (t. C) (x y. u) : C;", {}},
        {"Σ-E2", false, "check (A B : U) (C : L) (p : Sigma (x : A). B) ( ; u : C) split2 p (t. C) (x y. u ** u) : C;",
         {}},
        {"Σ-C", true, "checkeq (A B : U) (a : A) (b : B) split1 (a, b) (t. A) (x y. x) == a : A;", {}},
        {"Σ-C", false, "checkeq (A B : U) (a c : A) (b : B) split1 (a, b) (t. A) (x y. x) == c : A;", {}},

        // identity types
        {"Id-F", true, "check (A : U) (a : A) refl a : Id A a a;", {}},
        {"Id-F", false, "check (A B : U) (a : A) (b : B) refl a : Id A a b;", E::TypeMismatch},
        {"Id-I", true, "check (A : U) (a : A) refl a : Id A a a;", {}},
        {"Id-I", false, "check (A : U) (a b : A) refl a : Id A a b;", E::TypeMismatch},
        {"=-E1", true, "check (A : U) (m n : A) (p : Id A m n) J1 (x y q. Id A y x) (z. refl z) m n p : Id A n m;", {}},
        {"=-E1", false, "check (A : U) (m n : A) (p : Id A m n) J1 (x y q. Id A y x) (z. refl z) m n p : Id A m n;",
         E::TypeMismatch},
        {"=-E2", true,
         "check (A : U) (C : L) (m n : A) (p : Id A m n) ( ; u : C) J2 (x y q. C) (z. u) m n p using (u : C) : C;", {}},
        {"=-E2", false, "check (A : U) (C : L) (m n : A) (p : Id A m n) ( ; u : C) J2 (x y q. C) (z. u ** u) m n p : C;",
         {}},
        {"Id-C", true, "checkeq (A : U) (a : A) J1 (x y q. Id A y x) (z. refl z) a a (refl a) == refl a : Id A a a;", {}},
        {"Id-C", false, "checkeq (A : U) (m n : A) (p : Id A m n) J1 (x y q. A) (z. z) m n p == m : A;", {}},

        // ⊓ and ⊏
        {"⊓-F", true, "check (A : U) (B : L) ( ; u : B) cfun (x : A). u : cap (x : A). B;", {}},
        {"⊓-F", false, "check (A : U) (B : L) ( ; u : B) cfun (x : B). u : cap (x : B). B;", {}},
        {"⊓-I", true, "check (A : U) (B : L) ( ; u : B) cfun (x : A). u : cap (x : A). B;", {}},
        {"⊓-I", false, "check (A : U) (B : L) ( ; u : B  v : B) cfun (x : A). u : cap (x : A). B;", E::LinearViolation},
        {"⊓-E", true, "check (A : U) (B : L) (a : A) ( ; f : cap (x : A). B) f [a] : B;", {}},
        {"⊓-E", false, "check (A : U) (B : L) (b : B) ( ; f : cap (x : A). B) f [b] : B;", {}},
        {"⊓-C", true, "checkeq (A : U) (B : L) (a : A) ( ; u : B) (cfun (x : A). u) [a] == u : B;", {}},
        {"⊓-C", false,
         "checkeq (A : U) (B : L) (a b : A) ( ; f : cap (x : A). B) (cfun (x : A). f [x]) [a] == f [b] : B;", {}},
        {"⊏-F", true, "check (A : U) (B : L) (a : A) ( ; u : B) {a, u} : sub (x : A). B;", {}},
        {"⊏-F", false, "check (A : U) (B : L) (a : A) ( ; u : B) {a, u} : sub (x : B). B;", {}},
        {"⊏-I", true, "check (A : U) (B : A -> L) (a : A) ( ; u : B a) {a, u} : sub (x : A). B x;", {}},
        {"⊏-I", false, "check (A : U) (B : L) (a : A) ( ; u : B  v : B) {a, u} : sub (x : A). B;", E::LinearViolation},
        {"⊏-E", true, "check (A : U) (B : L) ( ; t : sub (x : A). B) let x, y be t in y : B;", {}},
        {"⊏-E", false, "check (A : U) (B : L) ( ; t : sub (x : A). B) let x, y be t in x : B;", {}},
        {"⊏-C", true,
         "def mk (A : U) (B : L) (a : A) ( ; u : B) : sub (x : A). B := {a, u};\n"
         "checkeq (A : U) (B : L) (a : A) ( ; u : B) let x, y be mk [A] [B] [a] @ u in y == u : B;",
         {}},
        {"⊏-C", false,
         "checkeq (A : U) (B : L) ( ; t : sub (x : A). B) let x, y be t in {x, y} == t : sub (x : A). B;", {}},

        // multiplicatives and additives
        {"⊗-F", true, "check (A B : L) ( ; u : A  v : B) u ** v : A * B;", {}},
        {"⊗-F", false, "check (A : L) (B : U) ( ; u : A) u : A * B;", {}},
        {"⊗-I", true, "check (A B : L) ( ; u : A  v : B) u ** v : A * B;", {}},
        {"⊗-I", false, "check (A B : L) ( ; u : A) u ** u : A * A;", E::LinearViolation},
        {"⊗-E", true, "check (A B : L) ( ; u : A * B) let a ** b be u in b ** a : B * A;", {}},
        {"⊗-E", false, "check (A B : L) ( ; u : A * B) let a ** b be u in a : A;", E::LinearViolation},
        {"⊗-C", true, "checkeq (A B : L) ( ; u : A  v : B) let a ** b be u ** v in b ** a == v ** u : B * A;", {}},
        {"⊗-C", false, "checkeq (A : L) ( ; u : A  v : A) let a ** b be u ** v in b ** a == u ** v : A * A;", {}},
        {"⊸-F", true, "check (A B : L) ( ; f : A -o B) f : A -o B;", {}},
        {"⊸-F", false, "check (A : L) (B : U) ( ; u : A) u : A -o B;", {}},
        {"⊸-I", true, "check (A : L) lfun (x : A). x : A -o A;", {}},
        {"⊸-I", false, "check (A B : L) ( ; v : B) lfun (x : A). v : A -o B;", E::LinearViolation},
        {"⊸-E", true, "check (A B : L) ( ; f : A -o B  u : A) f @ u : B;", {}},
        {"⊸-E", false, "check (A B : L) ( ; f : A -o B  u : B) f @ u : B;", E::TypeMismatch},
        {"⊸-C", true, "checkeq (A : L) ( ; u : A) (lfun (x : A). x) @ u == u : A;", {}},
        {"⊸-C", false,
         "checkeq (A : L) ( ; w : A * A) (lfun (x : A * A). let a ** b be x in b ** a) @ w == w : A * A;", {}},
        {"&-F", true, "check (A B : L) ( ; u : A & B) u : A & B;", {}},
        {"&-F", false, "check (A : L) (B : U) ( ; u : A) u : A & B;", {}},
        {"&-I", true, "check (A : L) ( ; u : A) <u, u> : A & A;", {}},
        {"&-I", false, "check (A B : L) ( ; u : A  v : B) <u, v> : A & B;", E::ZoneMismatch},
        {"&-E1", true, "check (A B : L) ( ; u : A & B) fst u : A;", {}},
        {"&-E1", false, "check (A B : L) ( ; u : A) fst u : A;", E::TypeMismatch},
        {"&-E2", true, "check (A B : L) ( ; u : A & B) snd u : B;", {}},
        {"&-E2", false, "check (A B : L) ( ; u : A & B) snd u : A;", E::TypeMismatch},
        {"&-C", true, "checkeq (A B : L) ( ; u : A) fst <u, u> == u : A;", {}},
        {"&-C", false, "checkeq (A : L) ( ; u : A & A) fst <snd u, fst u> == fst u : A;", {}},
        {"⊕-F", true, "check (A B : L) ( ; u : A) inl u : A (+) B;", {}},
        {"⊕-F", false, "check (A : L) (B : U) ( ; u : A) inl u : A (+) B;", {}},
        {"⊕-I1", true, "check (A B : L) ( ; u : A) inl u : A (+) B;", {}},
        {"⊕-I1", false, "check (A B : L) ( ; u : B) inl u : A (+) B;", E::TypeMismatch},
        {"⊕-I2", true, "check (A B : L) ( ; u : B) inr u : A (+) B;", {}},
        {"⊕-I2", false, "check (A B : L) ( ; u : B) inr u : B (+) A;", E::TypeMismatch},
        {"⊕-E", true, "check (A B : L) ( ; u : A (+) B) case u of inl a. inr a | inr b. inl b : B (+) A;", {}},
        {"⊕-E", false, "check (A B : L) ( ; u : A (+) B) case u of inl a. a | inr b. b : A;", E::TypeMismatch},
        {"⊕-C", true,
         "def il (A B : L) ( ; u : A) : A (+) B := inl u;\n"
         "checkeq (A B : L) ( ; u : A) case il [A] [B] @ u of inl a. inr a | inr b. inl b == inr u : B (+) A;",
         {}},
        {"⊕-C", false,
         "def il (A B : L) ( ; u : A) : A (+) B := inl u;\n"
         "checkeq (A : L) ( ; u : A) case il [A] [A] @ u of inl a. inr a | inr b. inl b == il [A] [A] @ u : A (+) A;",
         {}},

        // units
        {"I-F", true, "check unit : Unit;", {}},
        {"I-F", false, "check (A : U) (a : A) unit : A;", {}},
        {"I-I", true, "check unit : Unit;", {}},
        {"I-I", false, "check (A : L) ( ; u : A) unit : Unit;", E::LinearViolation},
        {"I-E", true, "check (A : L) ( ; i : Unit  u : A) let unit be i in u : A;", {}},
        {"I-E", false, "check (A : L) ( ; i : A  u : A) let unit be i in u : A;", E::TypeMismatch},
        {"I-C", true, "checkeq (A : L) ( ; u : A) let unit be unit in u == u : A;", {}},
        {"I-C", false, "checkeq ( ; i : Unit) let unit be i in unit == i : Unit;", {}},
        {"0-F", true, "check (A : L) ( ; z : Zero) absurd z : A;", {}},
        {"0-F", false, "check (A : U) (a : A) absurd a : A;", {}},
        {"0-E", true, "check (A : L) ( ; z : Zero  u : A) absurd z : A;", {}},
        {"0-E", false, "check (A : L) ( ; z : Unit) absurd z : A;", E::TypeMismatch},
        {"⊤-F", true, "check (A : L) ( ; u : A) top : Top;", {}},
        {"⊤-F", false, "check (A : U) (a : A) top : A;", {}},
        {"⊤-I", true, "check (A B : L) ( ; u : A  v : B) top : Top;", {}},
        {"⊤-I", false, "check (A : L) ( ; u : A) top : A;", E::TypeMismatch},

        // modalities
        {"L-F", true, "check (A : U) (a : A) lift a : Lt A;", {}},
        {"L-F", false, "check (A : L) (a : A) lift a : Lt A;", E::TypeMismatch},
        {"L-I", true, "check (A : U) (a : A) lift a : Lt A;", {}},
        {"L-I", false, "check (A B : U) (b : B) lift b : Lt A;", E::TypeMismatch},
        {"L-E", true, "check (A : U) (B : L) ( ; y : Lt A  b : B) let x be y in b : B;", {}},
        {"L-E", false, "check (A : U) (B : L) ( ; y : Lt A  b : B) let x be y in y : Lt A;", E::LinearViolation},
        {"L-C", true,
         "checkeq (A : U) (B : L) (a : A) (f : A -> Mt B) let x be lift a in unsig (f x) == unsig (f a) : B;", {}},
        {"L-C", false,
         "checkeq (A : U) (B : L) (a b : A) (f : A -> Mt B) let x be lift a in unsig (f x) == unsig (f b) : B;", {}},
        {"L-U", true, "checkeq (A : U) ( ; y : Lt A) let x be y in lift x == y : Lt A;", {}},
        {"L-U", false, "checkeq (A : U) (h : A -> A) ( ; y : Lt A) let x be y in lift (h x) == y : Lt A;", {}},
        {"M-F", true, "check (B : L) (m : Mt B) m : Mt B;", {}},
        {"M-F", false, "check (A : U) (m : Mt A) m : Mt A;", {}},
        {"M-I", true, "check (B : L) sig top : Mt Top;", {}},
        {"M-I", false, "check (B : L) ( ; u : B) sig u : Mt B;", E::ModeError},
        {"M-E", true, "check (B : L) (m : Mt B) unsig m : B;", {}},
        {"M-E", false, "check (A : U) (B : L) (a : A) unsig a : B;", {}},
        {"M-C1", true, "checkeq (B : L) (b : Mt B) unsig (sig (unsig b)) == unsig b : B;", {}},
        {"M-C1", false, "checkeq (B : L) (b c : Mt B) unsig (sig (unsig b)) == unsig c : B;", {}},
        {"M-C2", true, "checkeq (B : L) (m : Mt B) sig (unsig m) == m : Mt B;", {}},
        {"M-C2", false, "checkeq (B : L) (m n : Mt B) sig (unsig m) == n : Mt B;", {}},

        // linear univalence, behind its flag
        {"ua-I", true,
         "pragma ua;\n"
         "check (A B : L) (f : Mt (A -o B)) (g : Mt (B -o A))\n"
         "  (p : Id (Mt (A -o A)) (sig (lfun (u : A). unsig g @ (unsig f @ u))) (sig (lfun (u : A). u)))\n"
         "  (q : Id (Mt (B -o B)) (sig (lfun (u : B). unsig f @ (unsig g @ u))) (sig (lfun (u : B). u)))\n"
         "  ua A B (unsig f) (unsig g) (unsig g) p q : Id L A B;",
         {}},
        {"ua-I", false,
         "pragma ua;\n"
         "check (A B : L) (f : Mt (A -o B)) (g : Mt (B -o A))\n"
         "  (p : Id (Mt (A -o A)) (sig (lfun (u : A). u)) (sig (lfun (u : A). u)))\n"
         "  (q : Id (Mt (B -o B)) (sig (lfun (u : B). unsig f @ (unsig g @ u))) (sig (lfun (u : B). u)))\n"
         "  ua A B (unsig f) (unsig g) (unsig g) p q : Id L A B;",
         E::TypeMismatch},
    };
    return cases;
}

}  // namespace ldtt
