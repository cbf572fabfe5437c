#include "ldtt/equality.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include "ldtt/subst.hpp"

namespace ldtt {

namespace {

using Rewrite = std::pair<const char*, Expr>;

// Child positions that thread the linear zone when the parent is linear.
bool linear_position(Head h, std::size_t i) {
    switch (h) {
        case Head::SqLam:
        case Head::SqPair:
        case Head::LinLam:
        case Head::SigElim2:
        case Head::IdElim2:
            return i == 1;
        case Head::SqApp:
        case Head::WithFst:
        case Head::WithSnd:
        case Head::Inl:
        case Head::Inr:
        case Head::ZeroElim:
            return i == 0;
        case Head::SqLet:
        case Head::TenPair:
        case Head::TenLet:
        case Head::UnitLet:
        case Head::LinApp:
        case Head::WithPair:
        case Head::LLet:
            return i <= 1;
        case Head::PlusCase:
            return i <= 2;
        default:
            return false;
    }
}

// Scrutinee-like positions a let may be hoisted out of.
bool frame_position(Head h, std::size_t i) {
    switch (h) {
        case Head::LinApp:
            return i <= 1;
        case Head::SqApp:
        case Head::WithFst:
        case Head::WithSnd:
        case Head::TenLet:
        case Head::UnitLet:
        case Head::SqLet:
        case Head::LLet:
        case Head::PlusCase:
        case Head::ZeroElim:
            return i == 0;
        default:
            return false;
    }
}

SlotId fresh_after(const Expr& e) { return max_slot(e) + 1; }

// ---- L-U -------------------------------------------------------------------------

bool lintro_in_linear_position(const Expr& e, int depth) {
    for (std::size_t i = 0; i < e.arity(); ++i) {
        if (!linear_position(e.head(), i)) continue;
        const Expr& k = e.kid(i);
        const int d = depth + e->cart_binders(i);
        if (k.head() == Head::LIntro && k.kid(0).head() == Head::CartVar && k.kid(0)->index == d) return true;
        if (lintro_in_linear_position(k, d)) return true;
    }
    return false;
}

bool lu_applicable(const Expr& body) {
    if (count_free_cart(body, 0) != 1) return false;
    if (body.head() == Head::LIntro && body.kid(0).head() == Head::CartVar && body.kid(0)->index == 0) return true;
    return lintro_in_linear_position(body, 0);
}

Expr lu_replace(const Expr& e, int depth, const Expr& a) {
    if (e.head() == Head::LIntro && e.kid(0).head() == Head::CartVar && e.kid(0)->index == depth) {
        return shift(a, 0, depth + 1);
    }
    if (e.arity() == 0) return e;
    std::vector<Expr> kids;
    bool changed = false;
    for (std::size_t i = 0; i < e.arity(); ++i) {
        kids.push_back(lu_replace(e.kid(i), depth + e->cart_binders(i), a));
        changed = changed || kids.back().get() != e.kid(i).get();
    }
    return changed ? with_kids(e, std::move(kids)) : e;
}

// ---- helpers for η ---------------------------------------------------------------

bool is_var(const Expr& e, int index) { return e.head() == Head::CartVar && e->index == index; }
bool is_slot(const Expr& e, SlotId s) { return e.head() == Head::LinVar && e->index == s; }

// Transport along ua: J2 with motive (El x ⊸ El y) and body (λu.u).
bool is_ua_transport(const Expr& e) {
    if (e.head() != Head::IdElim2 || e.kid(4).head() != Head::Ua) return false;
    const Expr& motive = e.kid(0);
    if (motive.head() != Head::Lolli) return false;
    const Expr& l = motive.kid(0);
    const Expr& r = motive.kid(1);
    if (l.head() != Head::El || !is_var(l.kid(0), 2) || r.head() != Head::El || !is_var(r.kid(0), 1)) return false;
    const Expr& body = e.kid(1);
    return body.head() == Head::LinLam && is_slot(body.kid(1), body->lin_binders[1][0]);
}

class Rules {
public:
    Rules(const Signature& sig, const EqFlags& flags) : sig_(sig), flags_(flags) {}

    // Commuting conversions: a let in a frame position moves outward.
    void hoists(const Expr& e, SlotId& fresh, std::vector<Rewrite>& out) const {
        for (std::size_t i = 0; i < e.arity(); ++i) {
            if (!frame_position(e.head(), i)) continue;
            const Head kh = e.kid(i).head();
            if (kh == Head::LLet && flags_.nat_l) {
                out.emplace_back("Nat_L", hoist_child(e, i, fresh));
            } else if ((kh == Head::SqLet || kh == Head::TenLet) && flags_.eta_sub) {
                out.emplace_back(kh == Head::SqLet ? "eta-⊏" : "eta-⊗", hoist_child(e, i, fresh));
            }
        }
    }

    // Computation rules, then η contractions, at the root of e.
    void contractions(const Expr& e, SlotId& fresh, std::vector<Rewrite>& out) const {
        switch (e.head()) {
            case Head::Const:
                if (const SigEntry* d = sig_.find(e->name)) out.emplace_back("δ", d->value);
                break;
            case Head::App:
                if (e.kid(0).head() == Head::Lam) out.emplace_back("Π-C", instantiate(e.kid(0).kid(1), e.kid(1)));
                break;
            case Head::SqApp:
                if (e.kid(0).head() == Head::SqLam) out.emplace_back("⊓-C", instantiate(e.kid(0).kid(1), e.kid(1)));
                break;
            case Head::LinApp:
                if (e.kid(0).head() == Head::LinLam) {
                    const Expr& f = e.kid(0);
                    out.emplace_back("⊸-C", subst_lin(f.kid(1), f->lin_binders[1][0], e.kid(1)));
                }
                break;
            case Head::Pr1:
            case Head::Pr2:
                if (e.kid(0).head() == Head::PairC) {
                    out.emplace_back("Σ-C", e.kid(0).kid(e.head() == Head::Pr1 ? 0 : 1));
                }
                break;
            case Head::SigElim1:
            case Head::SigElim2:
                if (e.kid(2).head() == Head::PairC) {
                    out.emplace_back("Σ-C", instantiate(e.kid(1), {e.kid(2).kid(0), e.kid(2).kid(1)}));
                }
                break;
            case Head::IdElim1:
            case Head::IdElim2:
                if (e.kid(4).head() == Head::Refl) out.emplace_back("Id-C", instantiate(e.kid(1), e.kid(2)));
                if (flags_.ua && is_ua_transport(e)) out.emplace_back("ua-C1", e.kid(4).kid(2));
                break;
            case Head::El:
                if (is_type_head(e.kid(0).head()) && e.kid(0).head() != Head::El) out.emplace_back("El-C", e.kid(0));
                break;
            case Head::WithFst:
            case Head::WithSnd:
                if (e.kid(0).head() == Head::WithPair) {
                    out.emplace_back("&-C", e.kid(0).kid(e.head() == Head::WithFst ? 0 : 1));
                }
                break;
            case Head::PlusCase: {
                const Head sh = e.kid(0).head();
                if (sh == Head::Inl || sh == Head::Inr) {
                    const std::size_t br = sh == Head::Inl ? 1 : 2;
                    out.emplace_back("⊕-C", subst_lin(e.kid(br), e->lin_binders[br][0], e.kid(0).kid(0)));
                }
                break;
            }
            case Head::TenLet:
                if (e.kid(0).head() == Head::TenPair) {
                    const SlotId u = fresh++;
                    const SlotId v = fresh++;
                    Expr body = rename_free_slots(e.kid(1), {{e->lin_binders[1][0], u}, {e->lin_binders[1][1], v}});
                    body = subst_lin(body, u, e.kid(0).kid(0));
                    out.emplace_back("⊗-C", subst_lin(body, v, e.kid(0).kid(1)));
                }
                if (flags_.eta_sub) {
                    const Expr& b = e.kid(1);
                    if (b.head() == Head::TenPair && is_slot(b.kid(0), e->lin_binders[1][0]) &&
                        is_slot(b.kid(1), e->lin_binders[1][1])) {
                        out.emplace_back("eta-⊗", e.kid(0));
                    }
                }
                break;
            case Head::UnitLet:
                if (e.kid(0).head() == Head::UnitIntro) out.emplace_back("I-C", e.kid(1));
                break;
            case Head::SqLet:
                if (e.kid(0).head() == Head::SqPair) {
                    const Expr& pr = e.kid(0);
                    out.emplace_back("⊏-C", subst_lin(instantiate(e.kid(1), pr.kid(0)), e->lin_binders[1][0], pr.kid(1)));
                }
                if (flags_.eta_sub) {
                    const Expr& b = e.kid(1);
                    if (b.head() == Head::SqPair && is_var(b.kid(0), 0) && is_slot(b.kid(1), e->lin_binders[1][0])) {
                        out.emplace_back("eta-⊏", e.kid(0));
                    }
                }
                break;
            case Head::LLet:
                if (e.kid(0).head() == Head::LIntro) {
                    out.emplace_back("L-C", instantiate(e.kid(1), e.kid(0).kid(0)));
                }
                if (lu_applicable(e.kid(1))) {
                    SlotId next = std::max(fresh, fresh_after(e));
                    const Expr body = freshen_bound(e.kid(1), &next);
                    fresh = next;
                    out.emplace_back("L-U", shift(lu_replace(body, 0, e.kid(0)), 0, -1));
                }
                break;
            case Head::MElim:
                if (e.kid(0).head() == Head::MIntro) out.emplace_back("M-C1", e.kid(0).kid(0));
                break;
            case Head::MIntro:
                if (e.kid(0).head() == Head::MElim) out.emplace_back("M-C2", e.kid(0).kid(0));
                break;
            case Head::Lam:
                if (e.kid(1).head() == Head::App && is_var(e.kid(1).kid(1), 0) && !has_free_cart(e.kid(1).kid(0), 0)) {
                    out.emplace_back("eta-Π", shift(e.kid(1).kid(0), 0, -1));
                }
                break;
            case Head::SqLam:
                if (e.kid(1).head() == Head::SqApp && is_var(e.kid(1).kid(1), 0) &&
                    !has_free_cart(e.kid(1).kid(0), 0)) {
                    out.emplace_back("eta-⊓", shift(e.kid(1).kid(0), 0, -1));
                }
                break;
            case Head::LinLam: {
                const Expr& b = e.kid(1);
                const SlotId u = e->lin_binders[1][0];
                if (b.head() == Head::LinApp && is_slot(b.kid(1), u) && linear_occurrences(b.kid(0), u) == 0 &&
                    !free_slots(b.kid(0)).count(u)) {
                    out.emplace_back("eta-⊸", b.kid(0));
                }
                break;
            }
            case Head::WithPair:
                if (e.kid(0).head() == Head::WithFst && e.kid(1).head() == Head::WithSnd &&
                    alpha_eq(e.kid(0).kid(0), e.kid(1).kid(0))) {
                    out.emplace_back("eta-&", e.kid(0).kid(0));
                }
                break;
            case Head::PairC:
                if (flags_.eta_sigma && e.kid(0).head() == Head::Pr1 && e.kid(1).head() == Head::Pr2 &&
                    alpha_eq(e.kid(0).kid(0), e.kid(1).kid(0))) {
                    out.emplace_back("eta-Σ", e.kid(0).kid(0));
                }
                break;
            default:
                break;
        }
    }

private:
    const Signature& sig_;
    const EqFlags& flags_;

    static Expr hoist_child(const Expr& frame, std::size_t i, SlotId& fresh) {
        const Expr& let = frame.kid(i);
        const int k = let->cart_binders(1);
        std::map<SlotId, SlotId> ren;
        std::vector<SlotId> binders;
        for (SlotId s : let->lin_binders[1]) {
            ren[s] = fresh;
            binders.push_back(fresh++);
        }
        std::vector<Expr> kids;
        for (std::size_t j = 0; j < frame.arity(); ++j) {
            if (j == i) {
                kids.push_back(rename_free_slots(let.kid(1), ren));
            } else {
                kids.push_back(shift(frame.kid(j), frame->cart_binders(j), k));
            }
        }
        Expr new_frame = with_kids(frame, std::move(kids));
        return with_binders(let, {let.kid(0), new_frame}, {{}, binders});
    }
};

Expr replace_at(const Expr& e, const std::vector<int>& path, std::size_t at, const Expr& repl) {
    if (at == path.size()) return repl;
    std::vector<Expr> kids(e->kids.begin(), e->kids.end());
    const auto i = static_cast<std::size_t>(path[at]);
    kids[i] = replace_at(e.kid(i), path, at + 1, repl);
    return with_kids(e, std::move(kids));
}

const Expr& node_at(const Expr& e, const std::vector<int>& path) {
    const Expr* cur = &e;
    for (int i : path) cur = &cur->kid(static_cast<std::size_t>(i));
    return *cur;
}

using Finder = std::function<void(const Expr&, std::vector<Rewrite>&)>;

bool find_first(const Expr& e, std::vector<int>& path, const Finder& f, Rewrite* out) {
    std::vector<Rewrite> found;
    f(e, found);
    if (!found.empty()) {
        *out = found.front();
        return true;
    }
    for (std::size_t i = 0; i < e.arity(); ++i) {
        path.push_back(static_cast<int>(i));
        if (find_first(e.kid(i), path, f, out)) return true;
        path.pop_back();
    }
    return false;
}

void find_all(const Expr& e, std::vector<int>& path, const Finder& f,
              std::vector<std::pair<std::vector<int>, Rewrite>>& out) {
    std::vector<Rewrite> found;
    f(e, found);
    for (auto& r : found) out.emplace_back(path, r);
    for (std::size_t i = 0; i < e.arity(); ++i) {
        path.push_back(static_cast<int>(i));
        find_all(e.kid(i), path, f, out);
        path.pop_back();
    }
}

}  // namespace

std::optional<Expr> reduce_step(const Signature& sig, const Expr& e, const EqFlags& flags, RedexStep* step) {
    Rules rules(sig, flags);
    SlotId fresh = fresh_after(e);
    std::vector<int> path;
    Rewrite found;
    bool ok = find_first(e, path, [&](const Expr& n, std::vector<Rewrite>& out) { rules.hoists(n, fresh, out); },
                         &found);
    if (!ok) {
        path.clear();
        ok = find_first(e, path,
                        [&](const Expr& n, std::vector<Rewrite>& out) { rules.contractions(n, fresh, out); }, &found);
    }
    if (!ok) return std::nullopt;
    if (step) *step = RedexStep{found.first, path};
    return replace_at(e, path, 0, found.second);
}

Reduced reduce(const Signature& sig, const Ctx& /*ctx*/, const Expr& e, const EqFlags& flags, std::size_t budget) {
    Reduced r{e, {}};
    RedexStep step;
    while (auto next = reduce_step(sig, r.term, flags, &step)) {
        if (r.trace.steps.size() >= budget) {
            throw Error(ErrorKind::NonTermination,
                        "step budget of " + std::to_string(budget) + " exceeded (last rule " + step.rule + ")");
        }
        r.trace.steps.push_back(step);
        r.term = *next;
    }
    return r;
}

Expr normalize(const Signature& sig, const Expr& e, const EqFlags& flags, std::size_t budget) {
    return reduce(sig, Ctx{}, e, flags, budget).term;
}

Expr replay(const Signature& sig, const Expr& e, const RedexTrace& trace, const EqFlags& flags) {
    Rules rules(sig, flags);
    Expr cur = e;
    for (const auto& st : trace.steps) {
        SlotId fresh = fresh_after(cur);
        const Expr& node = node_at(cur, st.path);
        std::vector<Rewrite> found;
        rules.hoists(node, fresh, found);
        rules.contractions(node, fresh, found);
        auto it = std::find_if(found.begin(), found.end(), [&](const Rewrite& r) { return st.rule == r.first; });
        if (it == found.end()) throw Error(ErrorKind::InvalidStructure, "trace step " + st.rule + " does not apply");
        cur = replace_at(cur, st.path, 0, it->second);
    }
    return cur;
}

std::vector<Expr> one_step_reducts(const Signature& sig, const Expr& e, const EqFlags& flags) {
    Rules rules(sig, flags);
    SlotId fresh = fresh_after(e);
    std::vector<std::pair<std::vector<int>, Rewrite>> all;
    std::vector<int> path;
    find_all(e, path,
             [&](const Expr& n, std::vector<Rewrite>& out) {
                 rules.hoists(n, fresh, out);
                 rules.contractions(n, fresh, out);
             },
             all);
    std::vector<Expr> out;
    for (auto& [p, rw] : all) out.push_back(replace_at(e, p, 0, rw.second));
    return out;
}

// ---- equality --------------------------------------------------------------------------

namespace {

SlotId fresh_slot(const Ctx& ctx, const Expr& a, const Expr& b) {
    SlotId m = std::max(max_slot(a), max_slot(b));
    for (const auto& l : ctx.lin) m = std::max(m, l.slot);
    return m + 1;
}

bool equal_nf(const Signature& sig, const Ctx& ctx, const Expr& type, const Expr& a, const Expr& b,
              const EqFlags& flags, std::size_t budget, int fuel) {
    const Expr na = normalize(sig, a, flags, budget);
    const Expr nb = normalize(sig, b, flags, budget);
    if (alpha_eq(na, nb)) return true;
    if (!type || fuel <= 0) return false;
    const Expr t = normalize(sig, type, flags, budget);
    switch (t.head()) {
        case Head::Pi:
        case Head::Sqcap: {
            const bool lin = t.head() == Head::Sqcap;
            Ctx inner = ctx.extended("x", t.kid(0));
            auto ap = [&](const Expr& f) {
                return lin ? sqapp(shift(f, 0, 1), cvar(0)) : app(shift(f, 0, 1), cvar(0));
            };
            return equal_nf(sig, inner, t.kid(1), ap(na), ap(nb), flags, budget, fuel - 1);
        }
        case Head::Lolli: {
            const SlotId s = fresh_slot(ctx, na, nb);
            Ctx inner = ctx;
            inner.lin.push_back({s, "u", t.kid(0)});
            return equal_nf(sig, inner, t.kid(1), linapp(na, lvar(s)), linapp(nb, lvar(s)), flags, budget, fuel - 1);
        }
        case Head::With:
            return equal_nf(sig, ctx, t.kid(0), withfst(na), withfst(nb), flags, budget, fuel - 1) &&
                   equal_nf(sig, ctx, t.kid(1), withsnd(na), withsnd(nb), flags, budget, fuel - 1);
        case Head::MTy:
            return equal_nf(sig, ctx, t.kid(0), melim(na), melim(nb), flags, budget, fuel - 1);
        case Head::Sigma:
            if (!flags.eta_sigma) return false;
            return equal_nf(sig, ctx, t.kid(0), pr1(na), pr1(nb), flags, budget, fuel - 1) &&
                   equal_nf(sig, ctx, instantiate(t.kid(1), pr1(na)), pr2(na), pr2(nb), flags, budget, fuel - 1);
        default:
            return false;
    }
}

}  // namespace

bool equal(const Signature& sig, const Ctx& ctx, const Expr& type, const Expr& a, const Expr& b, const EqFlags& flags,
           std::size_t budget) {
    return equal_nf(sig, ctx, type, a, b, flags, budget, 16);
}

}  // namespace ldtt
