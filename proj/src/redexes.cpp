#include <algorithm>

#include "ldtt/corpus.hpp"
#include "ldtt/driver.hpp"
#include "ldtt/suites.hpp"

namespace ldtt::suites {

namespace {

constexpr const char* kGammaC = "(A B : L) (X : U) (c : X)";
constexpr const char* kGammaM = "(A B : L) (X : U) (m : Mt A)";

class Builder {
public:
    explicit Builder(gpd::Rng& rng) : rng_(rng) {}

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    std::string fresh(const char* stem) { return stem + std::to_string(fresh_++); }

    // (lfun (w : T). w) @ (e): puts an intro form in synthesis position.
    std::string annot(const std::string& e, const std::string& type) {
        const auto w = fresh("w");
        return "(lfun (" + w + " : " + type + "). " + w + ") @ (" + e + ")";
    }

    // A parenthesized term of type T consuming exactly the slot `var`.
    std::string use(const std::string& var, const std::string& type) { return "(" + use_bare(var, type) + ")"; }

private:
    gpd::Rng& rng_;
    int fresh_ = 0;

    std::string use_bare(const std::string& var, const std::string& type) {
        switch (pick(0, 4)) {
            case 0: return annot(var, type);
            case 1: return "fst (" + annot("<" + var + ", " + var + ">", type + " & " + type) + ")";
            case 2: return "let unit be unit in " + var;
            case 3: return "lid [" + type + "] @ " + var;
            default: return var;
        }
    }
};

}  // namespace

RedexInstance random_redex(gpd::Rng& rng, int max_dim) {
    Builder b(rng);
    const std::string lin = "( ; u : A  v : B)";
    const std::string U = b.use("u", "A"), V = b.use("v", "B");
    RedexInstance in;
    std::string gamma = kGammaC, zone = lin, term, type = "A * B";
    switch (b.pick(0, 14)) {
        case 0:
            in.rule = "⊸-C";
            term = "(lfun (w : A). w ** " + V + ") @ (" + U + ")";
            break;
        case 1:
            in.rule = "⊗-C";
            term = "let a ** b be " + b.annot(U + " ** " + V, "A * B") + " in b ** a";
            type = "B * A";
            break;
        case 2:
            in.rule = "&-C";
            term = "fst (" + b.annot("<" + U + ", " + b.use("u", "A") + ">", "A & A") + ") ** " + V;
            break;
        case 3:
            in.rule = "&-C";
            term = "snd (" + b.annot("<" + U + ", " + b.use("u", "A") + ">", "A & A") + ") ** " + V;
            break;
        case 4:
        case 5: {
            in.rule = "⊕-C";
            const std::string inj = b.pick(0, 1) ? "inl" : "inr";
            term = "(case " + b.annot(inj + " (" + U + ")", "A (+) A") + " of inl a. a | inr a. a) ** " + V;
            break;
        }
        case 6:
            in.rule = "I-C";
            term = "let unit be unit in " + U + " ** " + V;
            break;
        case 7:
            in.rule = "⊓-C";
            term = "(" + b.annot("cfun (x : X). " + U, "cap (x : X). A") + ") [c] ** " + V;
            break;
        case 8:
            in.rule = "⊏-C";
            term = "let x, y be " + b.annot("{c, " + U + "}", "sub (x : X). A") + " in y ** " + V;
            break;
        case 9:
            in.rule = "L-C";
            term = "let x be lift c in " + U + " ** " + V;
            break;
        case 10:
            in.rule = "M-C1";
            gamma = kGammaM;
            zone = "( ; v : B)";
            term = "unsig (sig (unsig m)) ** " + V;
            break;
        case 11:
            in.rule = "M-C2";
            gamma = kGammaM;
            zone = "";
            term = "sig (unsig m)";
            type = "Mt A";
            break;
        case 12:
            in.rule = "Π-C";
            zone = "";
            term = "(fun (y : X). y) c";
            type = "X";
            break;
        case 13:
            in.rule = "Σ-C";
            zone = "";
            term = std::string(b.pick(0, 1) ? "pr1" : "pr2") + " ((fun (q : Sigma (x : X). X). q) (c, c))";
            type = "X";
            break;
        default:
            in.rule = "Id-C";
            zone = "";
            term = "J1 (x y q. X) (z. z) c c (refl c)";
            type = "X";
            break;
    }
    in.source = "check " + gamma + " " + zone + " " + term + " : " + type + ";";
    const auto dim = [&] { return b.pick(0, max_dim); };
    in.basis = {{"A", {fam::BasisValue::Kind::Vec, {dim()}}},
                {"B", {fam::BasisValue::Kind::Vec, {dim()}}},
                {"X", {fam::BasisValue::Kind::Set, {b.pick(1, std::max(1, max_dim))}}}};
    return in;
}

std::string redex_soundness(const RedexInstance& in, int p, std::size_t budget) {
    Session s({}, budget);
    if (!s.load(corpus_file("prelude")->text, "prelude.ldtt").ok()) return "prelude rejected";
    const SourceReport r = s.load(in.source, "redex.ldtt");
    if (r.front_error) return r.front_error->what();
    if (r.decls.size() != 1 || !r.decls[0].report.accepted) return "kernel rejects: " + r.decls.at(0).report.reason;
    const Judgment& j = r.decls[0].report.judgment;
    const Expr& term = j.subjects[0];
    const Expr& type = j.subjects[1];
    const Reduced red = reduce(r.sig, j.ctx, term, r.flags, budget);
    const auto& steps = red.trace.steps;
    if (std::none_of(steps.begin(), steps.end(), [&](const auto& st) { return st.rule == in.rule; }))
        return in.rule + " did not fire";
    const fam::Model model(r.sig, p, r.flags);
    std::string why;
    const auto step = reduce_step(r.sig, term, r.flags);
    if (step && !model.check_soundness(j.ctx, term, *step, type, in.basis, &why)) return "one step: " + why;
    if (!model.check_soundness(j.ctx, term, red.term, type, in.basis, &why)) return "normal form: " + why;
    return {};
}

}  // namespace ldtt::suites
