#include "ldtt/expr.hpp"

#include <algorithm>
#include <utility>

namespace ldtt {

const char* head_name(Head h) {
    switch (h) {
        case Head::CartVar: return "CartVar";
        case Head::LinVar: return "LinVar";
        case Head::Const: return "Const";
        case Head::Pi: return "Pi";
        case Head::Lam: return "Lam";
        case Head::App: return "App";
        case Head::Sigma: return "Sigma";
        case Head::PairC: return "PairC";
        case Head::Pr1: return "Pr1";
        case Head::Pr2: return "Pr2";
        case Head::SigElim1: return "SigElim1";
        case Head::SigElim2: return "SigElim2";
        case Head::Id: return "Id";
        case Head::Refl: return "Refl";
        case Head::IdElim1: return "IdElim1";
        case Head::IdElim2: return "IdElim2";
        case Head::UnivU: return "UnivU";
        case Head::UnivL: return "UnivL";
        case Head::El: return "El";
        case Head::Sqcap: return "Sqcap";
        case Head::SqLam: return "SqLam";
        case Head::SqApp: return "SqApp";
        case Head::Sqsubset: return "Sqsubset";
        case Head::SqPair: return "SqPair";
        case Head::SqLet: return "SqLet";
        case Head::Tensor: return "Tensor";
        case Head::TenPair: return "TenPair";
        case Head::TenLet: return "TenLet";
        case Head::UnitI: return "UnitI";
        case Head::UnitIntro: return "UnitIntro";
        case Head::UnitLet: return "UnitLet";
        case Head::Lolli: return "Lolli";
        case Head::LinLam: return "LinLam";
        case Head::LinApp: return "LinApp";
        case Head::With: return "With";
        case Head::WithPair: return "WithPair";
        case Head::WithFst: return "WithFst";
        case Head::WithSnd: return "WithSnd";
        case Head::Plus: return "Plus";
        case Head::Inl: return "Inl";
        case Head::Inr: return "Inr";
        case Head::PlusCase: return "PlusCase";
        case Head::ZeroTy: return "ZeroTy";
        case Head::ZeroElim: return "ZeroElim";
        case Head::TopTy: return "TopTy";
        case Head::TopIntro: return "TopIntro";
        case Head::LTy: return "LTy";
        case Head::LIntro: return "LIntro";
        case Head::LLet: return "LLet";
        case Head::MTy: return "MTy";
        case Head::MIntro: return "MIntro";
        case Head::MElim: return "MElim";
        case Head::Ua: return "Ua";
    }
    return "?";
}

const char* sort_name(Sort s) {
    switch (s) {
        case Sort::CartType: return "CartType";
        case Sort::LinType: return "LinType";
        case Sort::CartTerm: return "CartTerm";
        case Sort::LinTerm: return "LinTerm";
    }
    return "?";
}

const char* judgment_kind_name(JudgmentKind k) {
    switch (k) {
        case JudgmentKind::CtxOk: return "CtxOk";
        case JudgmentKind::CartTypeOk: return "CartTypeOk";
        case JudgmentKind::LinTypeOk: return "LinTypeOk";
        case JudgmentKind::CartTermHasType: return "CartTermHasType";
        case JudgmentKind::LinTermHasType: return "LinTermHasType";
        case JudgmentKind::CartEq: return "CartEq";
        case JudgmentKind::LinEq: return "LinEq";
    }
    return "?";
}

const std::vector<ChildShape>& head_shape(Head h) {
    using V = std::vector<ChildShape>;
    static const V none{};
    static const V one{{0, 0}};
    static const V two{{0, 0}, {0, 0}};
    static const V three{{0, 0}, {0, 0}, {0, 0}};
    static const V binder{{0, 0}, {1, 0}};
    static const V sig_elim{{1, 0}, {2, 0}, {0, 0}};
    static const V id_elim{{3, 0}, {1, 0}, {0, 0}, {0, 0}, {0, 0}};
    static const V sq_let{{0, 0}, {1, 1}};
    static const V ten_let{{0, 0}, {0, 2}};
    static const V lin_lam{{0, 0}, {0, 1}};
    static const V plus_case{{0, 0}, {0, 1}, {0, 1}};
    static const V ua(7, ChildShape{0, 0});
    switch (h) {
        case Head::CartVar:
        case Head::LinVar:
        case Head::Const:
        case Head::UnivU:
        case Head::UnivL:
        case Head::UnitI:
        case Head::UnitIntro:
        case Head::ZeroTy:
        case Head::TopTy:
        case Head::TopIntro:
            return none;
        case Head::Pr1:
        case Head::Pr2:
        case Head::Refl:
        case Head::El:
        case Head::WithFst:
        case Head::WithSnd:
        case Head::Inl:
        case Head::Inr:
        case Head::ZeroElim:
        case Head::LTy:
        case Head::LIntro:
        case Head::MTy:
        case Head::MIntro:
        case Head::MElim:
            return one;
        case Head::App:
        case Head::PairC:
        case Head::SqApp:
        case Head::SqPair:
        case Head::Tensor:
        case Head::TenPair:
        case Head::UnitLet:
        case Head::Lolli:
        case Head::LinApp:
        case Head::With:
        case Head::WithPair:
        case Head::Plus:
            return two;
        case Head::Id:
            return three;
        case Head::Pi:
        case Head::Lam:
        case Head::Sigma:
        case Head::Sqcap:
        case Head::SqLam:
        case Head::Sqsubset:
        case Head::LLet:
            return binder;
        case Head::SigElim1:
        case Head::SigElim2:
            return sig_elim;
        case Head::IdElim1:
        case Head::IdElim2:
            return id_elim;
        case Head::SqLet:
            return sq_let;
        case Head::TenLet:
            return ten_let;
        case Head::LinLam:
            return lin_lam;
        case Head::PlusCase:
            return plus_case;
        case Head::Ua:
            return ua;
    }
    return none;
}

bool has_zone_pairs(Head h) { return h == Head::SigElim2 || h == Head::IdElim2; }

int zone_family_binders(Head h) {
    if (h == Head::SigElim2) return 2;
    if (h == Head::IdElim2) return 3;
    return 0;
}

int Node::cart_binders(std::size_t child) const {
    const auto& shape = head_shape(head);
    if (child < shape.size()) return shape[child].cart;
    return ((child - shape.size()) % 2 == 1) ? zone_family_binders(head) : 0;
}

// ---- construction --------------------------------------------------------------------

Expr make(Head h, std::vector<Expr> kids, std::vector<std::vector<SlotId>> lin_binders,
          std::vector<std::vector<std::string>> hints) {
    const auto& shape = head_shape(h);
    const bool pairs = has_zone_pairs(h);
    if (kids.size() < shape.size() || (!pairs && kids.size() != shape.size()) ||
        (pairs && (kids.size() - shape.size()) % 2 != 0)) {
        throw Error(ErrorKind::IllFormedNode, std::string("wrong child count for ") + head_name(h));
    }
    for (const auto& k : kids) {
        if (!k) throw Error(ErrorKind::IllFormedNode, std::string("null child in ") + head_name(h));
    }
    lin_binders.resize(kids.size());
    for (std::size_t i = 0; i < kids.size(); ++i) {
        const int expect = i < shape.size() ? shape[i].lin : 0;
        if (static_cast<int>(lin_binders[i].size()) != expect) {
            throw Error(ErrorKind::IllFormedNode, std::string("wrong linear binder count for ") + head_name(h));
        }
    }
    if (pairs) {
        for (std::size_t i = shape.size(); i < kids.size(); i += 2) {
            if (kids[i].head() != Head::LinVar) {
                throw Error(ErrorKind::IllFormedNode, "zone annotation must name a linear variable");
            }
        }
    }
    auto node = std::make_shared<Node>();
    node->head = h;
    node->kids = std::move(kids);
    node->lin_binders = std::move(lin_binders);
    hints.resize(node->kids.size());
    node->cart_hints = std::move(hints);
    return Expr(std::move(node));
}

Expr cvar(int index) {
    if (index < 0) throw Error(ErrorKind::NegativeIndex, "negative de Bruijn index");
    auto node = std::make_shared<Node>();
    node->head = Head::CartVar;
    node->index = index;
    return Expr(std::move(node));
}

Expr lvar(SlotId slot, std::string hint) {
    auto node = std::make_shared<Node>();
    node->head = Head::LinVar;
    node->index = slot;
    node->name = std::move(hint);
    return Expr(std::move(node));
}

Expr constant(std::string name) {
    auto node = std::make_shared<Node>();
    node->head = Head::Const;
    node->name = std::move(name);
    return Expr(std::move(node));
}

Expr atom(Head h) { return make(h, {}); }

namespace {
std::vector<std::vector<std::string>> hint_at(std::size_t n, std::size_t pos, std::vector<std::string> names) {
    std::vector<std::vector<std::string>> out(n);
    out[pos] = std::move(names);
    return out;
}
}  // namespace

Expr pi(Expr dom, Expr cod, std::string hint) {
    return make(Head::Pi, {std::move(dom), std::move(cod)}, {}, hint_at(2, 1, {std::move(hint)}));
}
Expr lam(Expr dom, Expr body, std::string hint) {
    return make(Head::Lam, {std::move(dom), std::move(body)}, {}, hint_at(2, 1, {std::move(hint)}));
}
Expr app(Expr f, Expr a) { return make(Head::App, {std::move(f), std::move(a)}); }
Expr sigma(Expr a, Expr b, std::string hint) {
    return make(Head::Sigma, {std::move(a), std::move(b)}, {}, hint_at(2, 1, {std::move(hint)}));
}
Expr pair_c(Expr a, Expr b) { return make(Head::PairC, {std::move(a), std::move(b)}); }
Expr pr1(Expr p) { return make(Head::Pr1, {std::move(p)}); }
Expr pr2(Expr p) { return make(Head::Pr2, {std::move(p)}); }
Expr id_type(Expr a, Expr m, Expr n) { return make(Head::Id, {std::move(a), std::move(m), std::move(n)}); }
Expr refl(Expr a) { return make(Head::Refl, {std::move(a)}); }
Expr el(Expr code) { return make(Head::El, {std::move(code)}); }
Expr sqcap(Expr a, Expr b, std::string hint) {
    return make(Head::Sqcap, {std::move(a), std::move(b)}, {}, hint_at(2, 1, {std::move(hint)}));
}
Expr sqlam(Expr a, Expr b, std::string hint) {
    return make(Head::SqLam, {std::move(a), std::move(b)}, {}, hint_at(2, 1, {std::move(hint)}));
}
Expr sqapp(Expr t, Expr a) { return make(Head::SqApp, {std::move(t), std::move(a)}); }
Expr sqsubset(Expr a, Expr b, std::string hint) {
    return make(Head::Sqsubset, {std::move(a), std::move(b)}, {}, hint_at(2, 1, {std::move(hint)}));
}
Expr sqpair(Expr s, Expr b) { return make(Head::SqPair, {std::move(s), std::move(b)}); }
Expr sqlet(Expr scrut, SlotId y, Expr body, std::string xhint) {
    return make(Head::SqLet, {std::move(scrut), std::move(body)}, {{}, {y}}, hint_at(2, 1, {std::move(xhint)}));
}
Expr tensor(Expr a, Expr b) { return make(Head::Tensor, {std::move(a), std::move(b)}); }
Expr tenpair(Expr a, Expr b) { return make(Head::TenPair, {std::move(a), std::move(b)}); }
Expr tenlet(Expr scrut, SlotId u, SlotId v, Expr body) {
    return make(Head::TenLet, {std::move(scrut), std::move(body)}, {{}, {u, v}});
}
Expr unitlet(Expr scrut, Expr body) { return make(Head::UnitLet, {std::move(scrut), std::move(body)}); }
Expr lolli(Expr a, Expr b) { return make(Head::Lolli, {std::move(a), std::move(b)}); }
Expr linlam(Expr dom, SlotId u, Expr body) {
    return make(Head::LinLam, {std::move(dom), std::move(body)}, {{}, {u}});
}
Expr linapp(Expr f, Expr a) { return make(Head::LinApp, {std::move(f), std::move(a)}); }
Expr with(Expr a, Expr b) { return make(Head::With, {std::move(a), std::move(b)}); }
Expr withpair(Expr a, Expr b) { return make(Head::WithPair, {std::move(a), std::move(b)}); }
Expr withfst(Expr p) { return make(Head::WithFst, {std::move(p)}); }
Expr withsnd(Expr p) { return make(Head::WithSnd, {std::move(p)}); }
Expr plus(Expr a, Expr b) { return make(Head::Plus, {std::move(a), std::move(b)}); }
Expr inl(Expr a) { return make(Head::Inl, {std::move(a)}); }
Expr inr(Expr a) { return make(Head::Inr, {std::move(a)}); }
Expr pluscase(Expr scrut, SlotId u, Expr left, SlotId v, Expr right) {
    return make(Head::PlusCase, {std::move(scrut), std::move(left), std::move(right)}, {{}, {u}, {v}});
}
Expr zeroelim(Expr s) { return make(Head::ZeroElim, {std::move(s)}); }
Expr lty(Expr a) { return make(Head::LTy, {std::move(a)}); }
Expr lintro(Expr a) { return make(Head::LIntro, {std::move(a)}); }
Expr llet(Expr scrut, Expr body, std::string hint) {
    return make(Head::LLet, {std::move(scrut), std::move(body)}, {}, hint_at(2, 1, {std::move(hint)}));
}
Expr mty(Expr b) { return make(Head::MTy, {std::move(b)}); }
Expr mintro(Expr b) { return make(Head::MIntro, {std::move(b)}); }
Expr melim(Expr t) { return make(Head::MElim, {std::move(t)}); }

Expr with_kids(const Expr& e, std::vector<Expr> kids) {
    if (kids.size() != e.arity()) return make(e.head(), std::move(kids), {}, {});
    auto node = std::make_shared<Node>(*e);
    node->kids = std::move(kids);
    return Expr(std::move(node));
}

Expr with_binders(const Expr& e, std::vector<Expr> kids, std::vector<std::vector<SlotId>> lin_binders) {
    auto node = std::make_shared<Node>(*e);
    node->kids = std::move(kids);
    node->lin_binders = std::move(lin_binders);
    node->lin_binders.resize(node->kids.size());
    node->cart_hints.resize(node->kids.size());
    return Expr(std::move(node));
}

// ---- contexts ------------------------------------------------------------------------

Expr Ctx::cart_type(int index) const {
    if (index < 0 || static_cast<std::size_t>(index) >= cart.size()) {
        throw Error(ErrorKind::OutOfScope, "cartesian index " + std::to_string(index) + " out of scope");
    }
    return shift(cart[cart.size() - 1 - static_cast<std::size_t>(index)].type, 0, index + 1);
}

const LinEntry* Ctx::find_lin(SlotId slot) const {
    for (const auto& e : lin) {
        if (e.slot == slot) return &e;
    }
    return nullptr;
}

Ctx Ctx::extended(std::string name, Expr type) const {
    Ctx out = *this;
    out.cart.push_back({std::move(name), std::move(type)});
    for (auto& l : out.lin) l.type = shift(l.type, 0, 1);
    return out;
}

// ---- classification ------------------------------------------------------------------

bool is_cart_type_head(Head h) {
    switch (h) {
        case Head::Pi:
        case Head::Sigma:
        case Head::Id:
        case Head::UnivU:
        case Head::UnivL:
        case Head::MTy:
            return true;
        default:
            return false;
    }
}

bool is_lin_type_head(Head h) {
    switch (h) {
        case Head::Sqcap:
        case Head::Sqsubset:
        case Head::Tensor:
        case Head::UnitI:
        case Head::Lolli:
        case Head::With:
        case Head::Plus:
        case Head::ZeroTy:
        case Head::TopTy:
        case Head::LTy:
            return true;
        default:
            return false;
    }
}

bool is_type_head(Head h) { return is_cart_type_head(h) || is_lin_type_head(h) || h == Head::El; }

// ---- sort computation ----------------------------------------------------------------

namespace {

class SortChecker {
public:
    SortChecker(const Ctx& ctx, const ConstLookup& consts) : ctx_(ctx), consts_(consts) {}

    Sort run(const Expr& e) { return sort(e); }

private:
    const Ctx& ctx_;
    const ConstLookup& consts_;
    std::vector<Expr> local_types_;  // innermost last; entries may be null (unknown)
    std::vector<SlotId> bound_slots_;

    [[noreturn]] static void ill(const Expr& e, const std::string& why) {
        throw Error(ErrorKind::IllFormedNode, std::string(head_name(e.head())) + ": " + why);
    }

    std::size_t depth() const { return ctx_.depth() + local_types_.size(); }

    // Type of CartVar i in the current scope (unshifted is fine: we only inspect heads of
    // closed universe codomains).
    Expr var_type(int i) const {
        if (static_cast<std::size_t>(i) < local_types_.size()) {
            return local_types_[local_types_.size() - 1 - static_cast<std::size_t>(i)];
        }
        const int outer = i - static_cast<int>(local_types_.size());
        return ctx_.cart[ctx_.cart.size() - 1 - static_cast<std::size_t>(outer)].type;
    }

    // Universe a code lives in, derived from the type of the head of its application spine.
    std::optional<Sort> code_universe(const Expr& t) {
        Expr h = t;
        int args = 0;
        while (h.head() == Head::App) {
            h = h.kid(0);
            ++args;
        }
        Expr ty;
        if (h.head() == Head::CartVar) {
            ty = var_type(h->index);
        } else if (h.head() == Head::Const && consts_) {
            if (auto info = consts_(h->name)) ty = info->type;
        }
        if (!ty) return std::nullopt;
        for (int i = 0; i < args && ty && ty.head() == Head::Pi; ++i) ty = ty.kid(1);
        if (!ty) return std::nullopt;
        if (ty.head() == Head::UnivU) return Sort::CartType;
        if (ty.head() == Head::UnivL) return Sort::LinType;
        return std::nullopt;
    }

    static bool termish(Sort s) { return s != Sort::LinTerm; }

    Sort sort_in(const Expr& e, std::size_t child, const Expr& binder_type = Expr()) {
        const int nb = e->cart_binders(child);
        for (int i = 0; i < nb; ++i) local_types_.push_back(i == 0 ? binder_type : Expr());
        for (auto s : e->lin_binders[child]) bound_slots_.push_back(s);
        Sort s;
        try {
            s = sort(e.kid(child));
        } catch (...) {
            local_types_.resize(local_types_.size() - static_cast<std::size_t>(nb));
            bound_slots_.resize(bound_slots_.size() - e->lin_binders[child].size());
            throw;
        }
        local_types_.resize(local_types_.size() - static_cast<std::size_t>(nb));
        bound_slots_.resize(bound_slots_.size() - e->lin_binders[child].size());
        return s;
    }

    void need(const Expr& e, std::size_t child, Sort want, const Expr& binder_type = Expr()) {
        const Sort got = sort_in(e, child, binder_type);
        if (got != want) {
            ill(e, "child " + std::to_string(child) + " has sort " + sort_name(got) + ", expected " +
                       sort_name(want));
        }
    }

    void need_termish(const Expr& e, std::size_t child) {
        const Sort got = sort_in(e, child);
        if (!termish(got)) ill(e, "child " + std::to_string(child) + " must be cartesian");
    }

    Sort sort(const Expr& e) {
        switch (e.head()) {
            case Head::CartVar:
                if (e->index < 0 || static_cast<std::size_t>(e->index) >= depth()) {
                    throw Error(ErrorKind::OutOfScope, "cartesian index " + std::to_string(e->index) + " out of scope");
                }
                return Sort::CartTerm;
            case Head::LinVar:
                if (std::find(bound_slots_.begin(), bound_slots_.end(), e->index) == bound_slots_.end() &&
                    !ctx_.find_lin(e->index)) {
                    throw Error(ErrorKind::OutOfScope, "linear slot " + std::to_string(e->index) + " out of scope");
                }
                return Sort::LinTerm;
            case Head::Const:
                if (consts_) {
                    auto info = consts_(e->name);
                    if (!info) throw Error(ErrorKind::OutOfScope, "unknown constant " + e->name);
                    return info->sort;
                }
                return Sort::CartTerm;
            case Head::Pi:
            case Head::Sigma:
                need(e, 0, Sort::CartType);
                need(e, 1, Sort::CartType, e.kid(0));
                return Sort::CartType;
            case Head::Lam:
                need(e, 0, Sort::CartType);
                if (!termish(sort_in(e, 1, e.kid(0)))) ill(e, "body must be cartesian");
                return Sort::CartTerm;
            case Head::App:
            case Head::PairC:
                need_termish(e, 0);
                need_termish(e, 1);
                return Sort::CartTerm;
            case Head::Pr1:
            case Head::Pr2:
            case Head::Refl:
                need_termish(e, 0);
                return Sort::CartTerm;
            case Head::SigElim1:
                need(e, 0, Sort::CartType);
                need_termish(e, 1);
                need_termish(e, 2);
                return Sort::CartTerm;
            case Head::SigElim2:
            case Head::IdElim2: {
                need(e, 0, Sort::LinType);
                need(e, 1, Sort::LinTerm);
                const auto fixed = head_shape(e.head()).size();
                for (std::size_t i = 2; i < fixed; ++i) need_termish(e, i);
                for (std::size_t i = fixed; i < e.arity(); i += 2) {
                    need(e, i, Sort::LinTerm);
                    need(e, i + 1, Sort::LinType);
                }
                return Sort::LinTerm;
            }
            case Head::Id:
                need(e, 0, Sort::CartType);
                need_termish(e, 1);
                need_termish(e, 2);
                return Sort::CartType;
            case Head::IdElim1:
                need(e, 0, Sort::CartType);
                for (std::size_t i = 1; i < 5; ++i) need_termish(e, i);
                return Sort::CartTerm;
            case Head::UnivU:
            case Head::UnivL:
                return Sort::CartType;
            case Head::El: {
                const Sort s = sort_in(e, 0);
                if (s == Sort::CartType || s == Sort::LinType) return s;
                if (s == Sort::LinTerm) ill(e, "code must be cartesian");
                if (auto u = code_universe(e.kid(0))) return *u;
                ill(e, "cannot determine the universe of the code");
            }
            case Head::Sqcap:
            case Head::Sqsubset:
                need(e, 0, Sort::CartType);
                need(e, 1, Sort::LinType, e.kid(0));
                return Sort::LinType;
            case Head::SqLam:
                need(e, 0, Sort::CartType);
                need(e, 1, Sort::LinTerm, e.kid(0));
                return Sort::LinTerm;
            case Head::SqApp:
                need(e, 0, Sort::LinTerm);
                need_termish(e, 1);
                return Sort::LinTerm;
            case Head::SqPair:
                need_termish(e, 0);
                need(e, 1, Sort::LinTerm);
                return Sort::LinTerm;
            case Head::SqLet:
            case Head::TenLet:
            case Head::UnitLet:
            case Head::TenPair:
            case Head::LinApp:
            case Head::WithPair:
                need(e, 0, Sort::LinTerm);
                need(e, 1, Sort::LinTerm);
                return Sort::LinTerm;
            case Head::Tensor:
            case Head::Lolli:
            case Head::With:
            case Head::Plus:
                need(e, 0, Sort::LinType);
                need(e, 1, Sort::LinType);
                return Sort::LinType;
            case Head::UnitI:
            case Head::ZeroTy:
            case Head::TopTy:
                return Sort::LinType;
            case Head::UnitIntro:
            case Head::TopIntro:
                return Sort::LinTerm;
            case Head::LinLam:
                need(e, 0, Sort::LinType);
                need(e, 1, Sort::LinTerm);
                return Sort::LinTerm;
            case Head::WithFst:
            case Head::WithSnd:
            case Head::Inl:
            case Head::Inr:
            case Head::ZeroElim:
                need(e, 0, Sort::LinTerm);
                return Sort::LinTerm;
            case Head::PlusCase:
                need(e, 0, Sort::LinTerm);
                need(e, 1, Sort::LinTerm);
                need(e, 2, Sort::LinTerm);
                return Sort::LinTerm;
            case Head::LTy:
                need(e, 0, Sort::CartType);
                return Sort::LinType;
            case Head::LIntro:
                need_termish(e, 0);
                return Sort::LinTerm;
            case Head::LLet:
                need(e, 0, Sort::LinTerm);
                need(e, 1, Sort::LinTerm);
                return Sort::LinTerm;
            case Head::MTy:
                need(e, 0, Sort::LinType);
                return Sort::CartType;
            case Head::MIntro:
                need(e, 0, Sort::LinTerm);
                return Sort::CartTerm;
            case Head::MElim:
                need_termish(e, 0);
                return Sort::LinTerm;
            case Head::Ua:
                need_termish(e, 0);
                need_termish(e, 1);
                need(e, 2, Sort::LinTerm);
                need(e, 3, Sort::LinTerm);
                need(e, 4, Sort::LinTerm);
                need_termish(e, 5);
                need_termish(e, 6);
                return Sort::CartTerm;
        }
        ill(e, "unknown head");
    }
};

}  // namespace

Sort sort_of(const Expr& e, const Ctx& ctx, const ConstLookup& consts) {
    SortChecker checker(ctx, consts);
    return checker.run(e);
}

// ---- alpha equivalence ---------------------------------------------------------------

namespace {

struct SlotPairs {
    std::vector<std::pair<SlotId, SlotId>> pairs;  // innermost last

    // Returns 1 if a and b are bound to each other, 0 if both free, -1 on mismatch.
    int lookup(SlotId a, SlotId b) const {
        for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) {
            const bool la = it->first == a;
            const bool lb = it->second == b;
            if (la || lb) return (la && lb) ? 1 : -1;
        }
        return 0;
    }
};

bool alpha_rec(const Expr& a, const Expr& b, SlotPairs& slots) {
    if (a.get() == b.get() && slots.pairs.empty()) return true;
    if (a.head() != b.head() || a.arity() != b.arity()) return false;
    switch (a.head()) {
        case Head::CartVar:
            return a->index == b->index;
        case Head::LinVar: {
            const int r = slots.lookup(a->index, b->index);
            if (r < 0) return false;
            if (r == 0) return a->index == b->index;
            return true;
        }
        case Head::Const:
            return a->name == b->name;
        default:
            break;
    }
    for (std::size_t i = 0; i < a.arity(); ++i) {
        const auto& la = a->lin_binders[i];
        const auto& lb = b->lin_binders[i];
        if (la.size() != lb.size()) return false;
        for (std::size_t k = 0; k < la.size(); ++k) slots.pairs.emplace_back(la[k], lb[k]);
        const bool ok = alpha_rec(a.kid(i), b.kid(i), slots);
        slots.pairs.resize(slots.pairs.size() - la.size());
        if (!ok) return false;
    }
    return true;
}

}  // namespace

bool alpha_eq(const Expr& a, const Expr& b) {
    SlotPairs slots;
    return alpha_rec(a, b, slots);
}

// ---- shifting and occurrence queries -------------------------------------------------

namespace {

Expr shift_rec(const Expr& e, int cutoff, int amount) {
    if (e.head() == Head::CartVar) {
        if (e->index < cutoff) return e;
        const int n = e->index + amount;
        if (n < 0) throw Error(ErrorKind::NegativeIndex, "shift produced a negative index");
        if (n < cutoff) throw Error(ErrorKind::NegativeIndex, "shift would capture a bound variable");
        return cvar(n);
    }
    if (e.arity() == 0) return e;
    std::vector<Expr> kids;
    kids.reserve(e.arity());
    bool changed = false;
    for (std::size_t i = 0; i < e.arity(); ++i) {
        kids.push_back(shift_rec(e.kid(i), cutoff + e->cart_binders(i), amount));
        changed = changed || kids.back().get() != e.kid(i).get();
    }
    return changed ? with_kids(e, std::move(kids)) : e;
}

int count_cart_rec(const Expr& e, int index) {
    if (e.head() == Head::CartVar) return e->index == index ? 1 : 0;
    int n = 0;
    for (std::size_t i = 0; i < e.arity(); ++i) n += count_cart_rec(e.kid(i), index + e->cart_binders(i));
    return n;
}

void free_slots_rec(const Expr& e, std::vector<SlotId>& bound, std::set<SlotId>& out) {
    if (e.head() == Head::LinVar) {
        if (std::find(bound.begin(), bound.end(), e->index) == bound.end()) out.insert(e->index);
        return;
    }
    for (std::size_t i = 0; i < e.arity(); ++i) {
        const auto& lb = e->lin_binders[i];
        bound.insert(bound.end(), lb.begin(), lb.end());
        free_slots_rec(e.kid(i), bound, out);
        bound.resize(bound.size() - lb.size());
    }
}

}  // namespace

Expr shift(const Expr& e, int cutoff, int amount) {
    if (amount == 0) return e;
    return shift_rec(e, cutoff, amount);
}

int linear_occurrences(const Expr& e, SlotId slot) {
    if (e.head() == Head::LinVar) return e->index == slot ? 1 : 0;
    auto child = [&](std::size_t i) {
        const auto& lb = e->lin_binders[i];
        if (std::find(lb.begin(), lb.end(), slot) != lb.end()) return 0;
        return linear_occurrences(e.kid(i), slot);
    };
    switch (e.head()) {
        case Head::WithPair:
            return std::max(child(0), child(1));
        case Head::PlusCase:
            return child(0) + std::max(child(1), child(2));
        default:
            break;
    }
    int n = 0;
    const std::size_t fixed = has_zone_pairs(e.head()) ? head_shape(e.head()).size() : e.arity();
    for (std::size_t i = 0; i < fixed; ++i) n += child(i);
    return n;
}

bool has_free_cart(const Expr& e, int index) { return count_cart_rec(e, index) > 0; }

int count_free_cart(const Expr& e, int index) { return count_cart_rec(e, index); }

std::set<SlotId> free_slots(const Expr& e) {
    std::set<SlotId> out;
    std::vector<SlotId> bound;
    free_slots_rec(e, bound, out);
    return out;
}

SlotId max_slot(const Expr& e) {
    SlotId m = -1;
    if (e.head() == Head::LinVar) m = e->index;
    for (std::size_t i = 0; i < e.arity(); ++i) {
        for (auto s : e->lin_binders[i]) m = std::max(m, s);
        m = std::max(m, max_slot(e.kid(i)));
    }
    return m;
}

bool mentions_lin_var(const Expr& e) {
    if (e.head() == Head::LinVar) return true;
    for (std::size_t i = 0; i < e.arity(); ++i) {
        if (mentions_lin_var(e.kid(i))) return true;
    }
    return false;
}

std::size_t expr_size(const Expr& e) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < e.arity(); ++i) n += expr_size(e.kid(i));
    return n;
}

}  // namespace ldtt
