#include "ldtt/subst.hpp"

#include <algorithm>
#include <set>

namespace ldtt {

namespace {

bool linear_sorted(const Expr& a) {
    if (a.head() == Head::LinVar) return true;
    switch (a.head()) {
        case Head::SqLam: case Head::SqApp: case Head::SqPair: case Head::SqLet:
        case Head::TenPair: case Head::TenLet: case Head::UnitIntro: case Head::UnitLet:
        case Head::LinLam: case Head::LinApp: case Head::WithPair: case Head::WithFst:
        case Head::WithSnd: case Head::Inl: case Head::Inr: case Head::PlusCase:
        case Head::ZeroElim: case Head::TopIntro: case Head::LIntro: case Head::LLet:
        case Head::MElim: case Head::SigElim2: case Head::IdElim2:
            return true;
        default:
            return false;
    }
}

// args[i] replaces the binder at distance (n-1-i) from the body's top.
Expr inst_rec(const Expr& e, const std::vector<Expr>& args, int depth) {
    const int n = static_cast<int>(args.size());
    if (e.head() == Head::CartVar) {
        const int k = e->index;
        if (k < depth) return e;
        if (k - depth < n) return shift(args[static_cast<std::size_t>(n - 1 - (k - depth))], 0, depth);
        return cvar(k - n);
    }
    if (e.arity() == 0) return e;
    std::vector<Expr> kids;
    kids.reserve(e.arity());
    bool changed = false;
    for (std::size_t i = 0; i < e.arity(); ++i) {
        kids.push_back(inst_rec(e.kid(i), args, depth + e->cart_binders(i)));
        changed = changed || kids.back().get() != e.kid(i).get();
    }
    return changed ? with_kids(e, std::move(kids)) : e;
}

Expr subst_rec(const Expr& e, const Expr& a, int idx, int depth) {
    if (e.head() == Head::CartVar) {
        const int k = e->index;
        if (k < depth + idx) return e;
        if (k == depth + idx) return shift(a, 0, depth + idx);
        return cvar(k - 1);
    }
    if (e.arity() == 0) return e;
    std::vector<Expr> kids;
    kids.reserve(e.arity());
    bool changed = false;
    for (std::size_t i = 0; i < e.arity(); ++i) {
        kids.push_back(subst_rec(e.kid(i), a, idx, depth + e->cart_binders(i)));
        changed = changed || kids.back().get() != e.kid(i).get();
    }
    return changed ? with_kids(e, std::move(kids)) : e;
}

Expr rename_rec(const Expr& e, const std::map<SlotId, SlotId>& m, std::vector<SlotId>& bound) {
    if (e.head() == Head::LinVar) {
        if (std::find(bound.begin(), bound.end(), e->index) != bound.end()) return e;
        auto it = m.find(e->index);
        return it == m.end() ? e : lvar(it->second, e->name);
    }
    if (e.arity() == 0) return e;
    std::vector<Expr> kids;
    bool changed = false;
    for (std::size_t i = 0; i < e.arity(); ++i) {
        const auto& lb = e->lin_binders[i];
        bound.insert(bound.end(), lb.begin(), lb.end());
        kids.push_back(rename_rec(e.kid(i), m, bound));
        bound.resize(bound.size() - lb.size());
        changed = changed || kids.back().get() != e.kid(i).get();
    }
    return changed ? with_kids(e, std::move(kids)) : e;
}

struct LinSubst {
    SlotId slot;
    Expr t;  // at the cartesian scope of the root
    std::set<SlotId> t_free;
    SlotId next;

    Expr run(const Expr& e, int depth) {
        if (e.head() == Head::LinVar) return e->index == slot ? shift(t, 0, depth) : e;
        if (e.arity() == 0) return e;
        const bool pairs = has_zone_pairs(e.head());
        const std::size_t fixed = pairs ? head_shape(e.head()).size() : e.arity();
        std::vector<Expr> kids;
        std::vector<std::vector<SlotId>> binders;
        bool changed = false;
        for (std::size_t i = 0; i < fixed; ++i) {
            Expr kid = e.kid(i);
            std::vector<SlotId> lb = e->lin_binders[i];
            if (std::find(lb.begin(), lb.end(), slot) != lb.end()) {
                kids.push_back(kid);
                binders.push_back(lb);
                continue;
            }
            std::map<SlotId, SlotId> ren;
            for (auto& s : lb) {
                if (t_free.count(s)) {
                    ren[s] = next;
                    s = next++;
                }
            }
            if (!ren.empty()) {
                kid = rename_free_slots(kid, ren);
                changed = true;
            }
            Expr out = run(kid, depth + e->cart_binders(i));
            changed = changed || out.get() != e.kid(i).get();
            kids.push_back(out);
            binders.push_back(lb);
        }
        // zone annotations: rename when replaced by a variable, drop otherwise
        for (std::size_t i = fixed; i < e.arity(); i += 2) {
            const Expr& v = e.kid(i);
            if (v->index == slot) {
                changed = true;
                if (t.head() != Head::LinVar) continue;
                kids.push_back(t);
            } else {
                kids.push_back(v);
            }
            kids.push_back(e.kid(i + 1));
            binders.push_back({});
            binders.push_back({});
        }
        if (!changed) return e;
        return with_binders(e, std::move(kids), std::move(binders));
    }
};

Expr freshen_rec(const Expr& e, SlotId* next) {
    if (e.arity() == 0) return e;
    std::vector<Expr> kids;
    std::vector<std::vector<SlotId>> binders;
    for (std::size_t i = 0; i < e.arity(); ++i) {
        Expr kid = e.kid(i);
        std::vector<SlotId> lb = e->lin_binders[i];
        if (!lb.empty()) {
            std::map<SlotId, SlotId> ren;
            for (auto& s : lb) {
                ren[s] = *next;
                s = (*next)++;
            }
            kid = rename_free_slots(kid, ren);
        }
        kids.push_back(freshen_rec(kid, next));
        binders.push_back(std::move(lb));
    }
    return with_binders(e, std::move(kids), std::move(binders));
}

}  // namespace

Expr subst(const Expr& e, const Expr& a, int idx) {
    if (linear_sorted(a)) throw Error(ErrorKind::SortMismatch, "substituted term must be cartesian");
    return subst_rec(e, a, idx, 0);
}

Expr instantiate(const Expr& body, const std::vector<Expr>& args) {
    for (const auto& a : args) {
        if (linear_sorted(a)) throw Error(ErrorKind::SortMismatch, "substituted term must be cartesian");
    }
    return inst_rec(body, args, 0);
}

Expr subst_lin(const Expr& e, SlotId slot, const Expr& t) {
    LinSubst s{slot, t, free_slots(t), std::max(max_slot(e), max_slot(t)) + 1};
    return s.run(e, 0);
}

Expr rename_free_slots(const Expr& e, const std::map<SlotId, SlotId>& m) {
    if (m.empty()) return e;
    std::vector<SlotId> bound;
    return rename_rec(e, m, bound);
}

Expr freshen_bound(const Expr& e, SlotId* next) { return freshen_rec(e, next); }

}  // namespace ldtt
