#include "ldtt/kernel.hpp"

#include <algorithm>

#include "ldtt/subst.hpp"
#include "ldtt/syntax.hpp"

namespace ldtt {

LinZoneState LinZoneState::from(const Ctx& ctx) {
    LinZoneState z;
    for (const auto& l : ctx.lin) z.entries.push_back({l.slot, l.name, l.type, SlotStatus::Live});
    return z;
}

const ZoneEntry* LinZoneState::find(SlotId slot) const {
    for (const auto& e : entries) {
        if (e.slot == slot) return &e;
    }
    return nullptr;
}

bool LinZoneState::exhausted() const {
    return std::all_of(entries.begin(), entries.end(), [](const ZoneEntry& e) { return e.status != SlotStatus::Live; });
}

namespace {

struct Slot {
    SlotId slot = 0;
    std::string name;
    Expr type;  // scoped at `depth`
    int depth = 0;
    SlotStatus status = SlotStatus::Live;
    int epoch = 0;  // for Slack: the additive branch that slacked it
};

struct Frame {
    std::vector<Slot> slots;
};

class Session {
public:
    Session(const Signature& sig, const EqFlags& flags, std::size_t budget, std::vector<std::string>* trace)
        : sig_(sig), flags_(flags), budget_(budget), trace_(trace) {}

    void load(const Ctx& ctx, const LinZoneState& zone) {
        cart_ = ctx.cart;
        frames_.assign(1, Frame{});
        for (const auto& z : zone.entries) {
            frames_[0].slots.push_back({z.slot, z.name, z.type, static_cast<int>(depth()), z.status, 0});
        }
    }

    LinZoneState zone_state() const {
        LinZoneState z;
        for (const auto& s : frames_[0].slots) z.entries.push_back({s.slot, s.name, zone_type(s), s.status});
        return z;
    }

    // ---- types -----------------------------------------------------------------------

    enum class Want { Cart, Lin };

    void cart_type(const Expr& t, bool small) {
        switch (t.head()) {
            case Head::Pi:
            case Head::Sigma:
                rule(t.head() == Head::Pi ? "Π-F" : "Σ-F");
                cart_type(t.kid(0), small);
                push(hint(t), t.kid(0));
                cart_type(t.kid(1), small);
                pop();
                return;
            case Head::Id:
                rule("Id-F");
                cart_type(t.kid(0), small);
                check_cart(t.kid(1), t.kid(0));
                check_cart(t.kid(2), t.kid(0));
                return;
            case Head::UnivU:
            case Head::UnivL:
                rule(t.head() == Head::UnivU ? "U-F" : "L-F-univ");
                if (small) fail(ErrorKind::TypeMismatch, "a universe is not a small type", t);
                return;
            case Head::MTy:
                rule("M-F");
                lin_type(t.kid(0), small);
                return;
            case Head::El:
                rule("El-F");
                check_cart(t.kid(0), atom(Head::UnivU));
                return;
            default:
                if (is_lin_type_head(t.head())) {
                    fail(ErrorKind::SortMismatch, "expected a type, found the linear type " + show(t), t);
                }
                fail(ErrorKind::SortMismatch, "expected a type, found " + show(t), t);
        }
    }

    void lin_type(const Expr& t, bool small) {
        switch (t.head()) {
            case Head::Sqcap:
            case Head::Sqsubset:
                rule(t.head() == Head::Sqcap ? "⊓-F" : "⊏-F");
                cart_type(t.kid(0), small);
                push(hint(t), t.kid(0));
                lin_type(t.kid(1), small);
                pop();
                return;
            case Head::Tensor:
            case Head::Lolli:
            case Head::With:
            case Head::Plus:
                rule(t.head() == Head::Tensor  ? "⊗-F"
                     : t.head() == Head::Lolli ? "⊸-F"
                     : t.head() == Head::With  ? "&-F"
                                               : "⊕-F");
                lin_type(t.kid(0), small);
                lin_type(t.kid(1), small);
                return;
            case Head::UnitI: rule("I-F"); return;
            case Head::ZeroTy: rule("0-F"); return;
            case Head::TopTy: rule("⊤-F"); return;
            case Head::LTy:
                rule("L-F");
                cart_type(t.kid(0), small);
                return;
            case Head::El:
                rule("El-F");
                check_cart(t.kid(0), atom(Head::UnivL));
                return;
            default:
                fail(ErrorKind::SortMismatch, "expected a linear type, found " + show(t), t);
        }
    }

    void any_type(const Expr& t) {
        if (is_lin_type_head(t.head())) return lin_type(t, false);
        if (t.head() == Head::El) {
            const Expr ty = nf(infer_cart(t.kid(0)));
            if (ty.head() == Head::UnivL) return;
            if (ty.head() == Head::UnivU) return;
            fail(ErrorKind::TypeMismatch, "El expects a code in U or L, got " + show(ty), t);
        }
        cart_type(t, false);
    }

    bool is_linear_type(const Expr& t) {
        if (is_lin_type_head(t.head())) return true;
        if (t.head() == Head::El) return nf(infer_cart(t.kid(0))).head() == Head::UnivL;
        return false;
    }

    // ---- cartesian terms ---------------------------------------------------------------

    Expr infer_cart(const Expr& e) {
        switch (e.head()) {
            case Head::CartVar:
                rule("var");
                return cart_type_of(e->index);
            case Head::LinVar:
                fail(ErrorKind::ModeError, "linear variable " + show(e) + " in a cartesian position", e);
            case Head::Const: {
                rule("const");
                const SigEntry* d = sig_.find(e->name);
                if (!d) fail(ErrorKind::OutOfScope, "unknown constant " + e->name, e);
                if (d->linear) fail(ErrorKind::ModeError, "linear constant " + e->name + " in a cartesian position", e);
                return d->type;
            }
            case Head::Lam: {
                rule("Π-I");
                cart_type(e.kid(0), false);
                push(hint(e), e.kid(0));
                Expr b = infer_cart(e.kid(1));
                pop();
                return pi(e.kid(0), b, hint(e));
            }
            case Head::App: {
                rule("Π-E");
                const Expr f = nf(infer_cart(e.kid(0)));
                if (f.head() != Head::Pi) fail(ErrorKind::TypeMismatch, "applying a non-function of type " + show(f), e);
                check_cart(e.kid(1), f.kid(0));
                return instantiate(f.kid(1), e.kid(1));
            }
            case Head::PairC: {
                rule("Σ-I");
                const Expr a = infer_cart(e.kid(0));
                const Expr b = infer_cart(e.kid(1));
                return sigma(a, shift(b, 0, 1));
            }
            case Head::Pr1:
            case Head::Pr2: {
                rule(e.head() == Head::Pr1 ? "Σ-pr1" : "Σ-pr2");
                const Expr s = nf(infer_cart(e.kid(0)));
                if (s.head() != Head::Sigma) fail(ErrorKind::TypeMismatch, "projection from non-pair type " + show(s), e);
                if (e.head() == Head::Pr1) return s.kid(0);
                return instantiate(s.kid(1), pr1(e.kid(0)));
            }
            case Head::SigElim1: {
                rule("Σ-E1");
                const Expr s = nf(infer_cart(e.kid(2)));
                if (s.head() != Head::Sigma) fail(ErrorKind::TypeMismatch, "split on non-pair type " + show(s), e);
                push("t", s);
                cart_type(e.kid(0), false);
                pop();
                push("x", s.kid(0));
                push("y", s.kid(1));
                check_cart(e.kid(1), instantiate(shift(e.kid(0), 1, 2), pair_c(cvar(1), cvar(0))));
                pop(2);
                return instantiate(e.kid(0), e.kid(2));
            }
            case Head::Refl: {
                rule("Id-I");
                const Expr a = infer_cart(e.kid(0));
                return id_type(a, e.kid(0), e.kid(0));
            }
            case Head::IdElim1: {
                rule("=-E1");
                const Expr a = id_elim_prelude(e);
                push("z", a);
                check_cart(e.kid(1), diagonal(e.kid(0)));
                pop();
                return instantiate(e.kid(0), {e.kid(2), e.kid(3), e.kid(4)});
            }
            case Head::MIntro: {
                rule("M-I");
                frames_.push_back(Frame{});
                const Expr b = infer_lin(e.kid(0));
                close_frame();
                return mty(b);
            }
            case Head::Ua:
                return infer_ua(e);
            case Head::UnivU:
            case Head::UnivL:
                fail(ErrorKind::CannotInfer, "a universe is not a term", e);
            default:
                break;
        }
        if (is_cart_type_head(e.head()) || e.head() == Head::El) {
            if (e.head() == Head::El) {
                const Expr u = nf(infer_cart(e.kid(0)));
                rule("El-code");
                return u;
            }
            cart_type(e, true);
            return atom(Head::UnivU);
        }
        if (is_lin_type_head(e.head())) {
            lin_type(e, true);
            return atom(Head::UnivL);
        }
        fail(ErrorKind::SortMismatch, std::string("expected a cartesian term, found ") + head_name(e.head()), e);
    }

    void check_cart(const Expr& e, const Expr& type) {
        const Expr t = nf(type);
        if (is_type_head(e.head())) {
            if (t.head() == Head::UnivU) {
                if (e.head() == Head::El) return check_code_el(e, t);
                if (!is_cart_type_head(e.head())) fail(ErrorKind::TypeMismatch, show(e) + " is linear, not in U", e);
                return cart_type(e, true);
            }
            if (t.head() == Head::UnivL) {
                if (e.head() == Head::El) return check_code_el(e, t);
                if (!is_lin_type_head(e.head())) fail(ErrorKind::TypeMismatch, show(e) + " is not a linear type code", e);
                return lin_type(e, true);
            }
            fail(ErrorKind::TypeMismatch, "type " + show(e) + " used as a term of " + show(t), e);
        }
        if (e.head() == Head::PairC && t.head() == Head::Sigma) {
            rule("Σ-I");
            check_cart(e.kid(0), t.kid(0));
            check_cart(e.kid(1), instantiate(t.kid(1), e.kid(0)));
            return;
        }
        if (e.head() == Head::Lam && t.head() == Head::Pi) {
            rule("Π-I");
            cart_type(e.kid(0), false);
            conv(e.kid(0), t.kid(0), e);
            push(hint(e), e.kid(0));
            check_cart(e.kid(1), t.kid(1));
            pop();
            return;
        }
        if (e.head() == Head::MIntro && t.head() == Head::MTy) {
            rule("M-I");
            frames_.push_back(Frame{});
            check_lin(e.kid(0), t.kid(0));
            close_frame();
            return;
        }
        const Expr got = infer_cart(e);
        conv(got, t, e);
    }

    // ---- linear terms ------------------------------------------------------------------

    Expr infer_lin(const Expr& e) {
        switch (e.head()) {
            case Head::LinVar:
                rule("lin-var");
                return consume(e);
            case Head::Const: {
                rule("const");
                const SigEntry* d = sig_.find(e->name);
                if (!d) fail(ErrorKind::OutOfScope, "unknown constant " + e->name, e);
                if (!d->linear) fail(ErrorKind::SortMismatch, "cartesian constant " + e->name + " used linearly", e);
                return d->type;
            }
            case Head::SqLam: {
                rule("⊓-I");
                cart_type(e.kid(0), false);
                push(hint(e), e.kid(0));
                const Expr b = infer_lin(e.kid(1));
                pop();
                return sqcap(e.kid(0), b, hint(e));
            }
            case Head::SqApp: {
                rule("⊓-E");
                const Expr f = nf(infer_lin(e.kid(0)));
                if (f.head() != Head::Sqcap) fail(ErrorKind::TypeMismatch, "⊓-application of " + show(f), e);
                check_cart(e.kid(1), f.kid(0));
                return instantiate(f.kid(1), e.kid(1));
            }
            case Head::SqLet:
                return sq_let(e, Expr());
            case Head::TenPair: {
                rule("⊗-I");
                const Expr a = infer_lin(e.kid(0));
                const Expr b = infer_lin(e.kid(1));
                return tensor(a, b);
            }
            case Head::TenLet:
                return ten_let(e, Expr());
            case Head::UnitIntro:
                rule("I-I");
                return atom(Head::UnitI);
            case Head::UnitLet:
                return unit_let(e, Expr());
            case Head::LinLam: {
                rule("⊸-I");
                lin_type(e.kid(0), false);
                const SlotId u = e->lin_binders[1][0];
                bind(u, e.kid(0));
                const Expr b = infer_lin(e.kid(1));
                unbind(u, e);
                return lolli(e.kid(0), b);
            }
            case Head::LinApp: {
                rule("⊸-E");
                const Expr f = nf(infer_lin(e.kid(0)));
                if (f.head() != Head::Lolli) fail(ErrorKind::TypeMismatch, "linear application of " + show(f), e);
                check_lin(e.kid(1), f.kid(0));
                return f.kid(1);
            }
            case Head::WithPair: {
                rule("&-I");
                Expr a, b;
                additive({[&] { a = infer_lin(e.kid(0)); }, [&] { b = infer_lin(e.kid(1)); }}, e);
                return with(a, b);
            }
            case Head::WithFst:
            case Head::WithSnd: {
                rule(e.head() == Head::WithFst ? "&-E1" : "&-E2");
                const Expr w = nf(infer_lin(e.kid(0)));
                if (w.head() != Head::With) fail(ErrorKind::TypeMismatch, "projection from " + show(w), e);
                return w.kid(e.head() == Head::WithFst ? 0 : 1);
            }
            case Head::PlusCase:
                return plus_case(e, Expr());
            case Head::LIntro: {
                rule("L-I");
                return lty(infer_cart(e.kid(0)));
            }
            case Head::LLet:
                return l_let(e, Expr());
            case Head::MElim: {
                rule("M-E");
                const Expr m = nf(infer_cart(e.kid(0)));
                if (m.head() != Head::MTy) fail(ErrorKind::TypeMismatch, "σ⁻¹ of non-M type " + show(m), e);
                return m.kid(0);
            }
            case Head::SigElim2:
                return sig_elim2(e);
            case Head::IdElim2:
                return id_elim2(e);
            case Head::SqPair:
            case Head::Inl:
            case Head::Inr:
            case Head::ZeroElim:
            case Head::TopIntro:
                fail(ErrorKind::CannotInfer, std::string(head_name(e.head())) + " needs a type annotation", e);
            default:
                fail(ErrorKind::SortMismatch, std::string("expected a linear term, found ") + head_name(e.head()), e);
        }
    }

    void check_lin(const Expr& e, const Expr& type) {
        const Expr t = nf(type);
        switch (e.head()) {
            case Head::SqPair:
                rule("⊏-I");
                if (t.head() != Head::Sqsubset) fail(ErrorKind::TypeMismatch, "⊏-pair against " + show(t), e);
                check_cart(e.kid(0), t.kid(0));
                check_lin(e.kid(1), instantiate(t.kid(1), e.kid(0)));
                return;
            case Head::Inl:
            case Head::Inr:
                rule(e.head() == Head::Inl ? "⊕-I1" : "⊕-I2");
                if (t.head() != Head::Plus) fail(ErrorKind::TypeMismatch, "injection against " + show(t), e);
                check_lin(e.kid(0), t.kid(e.head() == Head::Inl ? 0 : 1));
                return;
            case Head::TopIntro:
                rule("⊤-I");
                if (t.head() != Head::TopTy) fail(ErrorKind::TypeMismatch, "top against " + show(t), e);
                slack_all();
                return;
            case Head::ZeroElim: {
                rule("0-E");
                const Expr z = nf(infer_lin(e.kid(0)));
                if (z.head() != Head::ZeroTy) fail(ErrorKind::TypeMismatch, "absurd on " + show(z), e);
                any_type(t);
                slack_all();
                return;
            }
            case Head::WithPair:
                if (t.head() == Head::With) {
                    rule("&-I");
                    additive({[&] { check_lin(e.kid(0), t.kid(0)); }, [&] { check_lin(e.kid(1), t.kid(1)); }}, e);
                    return;
                }
                break;
            case Head::TenPair:
                if (t.head() == Head::Tensor) {
                    rule("⊗-I");
                    check_lin(e.kid(0), t.kid(0));
                    check_lin(e.kid(1), t.kid(1));
                    return;
                }
                break;
            case Head::LinLam:
                if (t.head() == Head::Lolli) {
                    rule("⊸-I");
                    lin_type(e.kid(0), false);
                    conv(e.kid(0), t.kid(0), e);
                    const SlotId u = e->lin_binders[1][0];
                    bind(u, e.kid(0));
                    check_lin(e.kid(1), t.kid(1));
                    unbind(u, e);
                    return;
                }
                break;
            case Head::SqLam:
                if (t.head() == Head::Sqcap) {
                    rule("⊓-I");
                    cart_type(e.kid(0), false);
                    conv(e.kid(0), t.kid(0), e);
                    push(hint(e), e.kid(0));
                    check_lin(e.kid(1), t.kid(1));
                    pop();
                    return;
                }
                break;
            case Head::LIntro:
                if (t.head() == Head::LTy) {
                    rule("L-I");
                    check_cart(e.kid(0), t.kid(0));
                    return;
                }
                break;
            case Head::SqLet:
                sq_let(e, t);
                return;
            case Head::TenLet:
                ten_let(e, t);
                return;
            case Head::UnitLet:
                unit_let(e, t);
                return;
            case Head::PlusCase:
                plus_case(e, t);
                return;
            case Head::LLet:
                l_let(e, t);
                return;
            default:
                break;
        }
        const Expr got = infer_lin(e);
        conv(got, t, e);
    }

    // Full check of a term of either sort against a type.
    void check_any(const Expr& e, const Expr& type, const ConstLookup& consts) {
        any_type(type);
        const Ctx probe = probe_ctx();
        const Sort s = sort_of(e, probe, consts);
        if (s == Sort::LinTerm) {
            if (!is_linear_type(type)) fail(ErrorKind::SortMismatch, "linear term against cartesian type " + show(type), e);
            check_lin(e, type);
        } else {
            if (is_linear_type(type)) fail(ErrorKind::SortMismatch, "cartesian term against linear type " + show(type), e);
            check_cart(e, type);
        }
    }

    Expr infer_any(const Expr& e, const ConstLookup& consts) {
        const Sort s = sort_of(e, probe_ctx(), consts);
        return s == Sort::LinTerm ? infer_lin(e) : infer_cart(e);
    }

    void require_exhausted() {
        std::string unused;
        for (const auto& s : frames_[0].slots) {
            if (s.status == SlotStatus::Live) unused += (unused.empty() ? "" : ", ") + s.name;
        }
        if (!unused.empty()) {
            throw Error(ErrorKind::LinearViolation, "linear variable(s) used 0 times: " + unused);
        }
    }

    std::string show(const Expr& e) const {
        std::vector<std::string> names;
        for (const auto& c : cart_) names.push_back(c.name);
        std::map<SlotId, std::string> lin;
        for (const auto& f : frames_) {
            for (const auto& s : f.slots) lin[s.slot] = s.name;
        }
        return pretty(e, names, lin);
    }

    bool conv_types(const Expr& a, const Expr& b) { return equal(sig_, Ctx{}, Expr(), a, b, flags_, budget_); }
    std::size_t depth() const { return cart_.size(); }

private:
    const Signature& sig_;
    const EqFlags& flags_;
    std::size_t budget_;
    std::vector<std::string>* trace_;
    std::vector<CartEntry> cart_;
    std::vector<Frame> frames_;
    int epoch_ = 0;
    int epoch_counter_ = 0;

    void rule(const char* name) {
        if (trace_) trace_->push_back(name);
    }

    [[noreturn]] void fail(ErrorKind kind, const std::string& msg, const Expr&) const { throw Error(kind, msg); }

    static std::string hint(const Expr& e) {
        if (e->cart_hints.size() > 1 && !e->cart_hints[1].empty() && !e->cart_hints[1][0].empty()) {
            return e->cart_hints[1][0];
        }
        return "x";
    }

    Ctx probe_ctx() const {
        Ctx c;
        c.cart = cart_;
        for (const auto& f : frames_) {
            for (const auto& s : f.slots) c.lin.push_back({s.slot, s.name, Expr()});
        }
        return c;
    }

    Expr nf(const Expr& t) const { return normalize(sig_, t, flags_, budget_); }

    void conv(const Expr& got, const Expr& want, const Expr& at) {
        if (!conv_types(got, want)) {
            fail(ErrorKind::TypeMismatch, "type mismatch: inferred " + show(got) + ", expected " + show(want), at);
        }
    }

    Expr cart_type_of(int i) const {
        if (i < 0 || static_cast<std::size_t>(i) >= cart_.size()) {
            throw Error(ErrorKind::OutOfScope, "cartesian index " + std::to_string(i) + " out of scope");
        }
        return shift(cart_[cart_.size() - 1 - static_cast<std::size_t>(i)].type, 0, i + 1);
    }

    void push(const std::string& name, const Expr& type) { cart_.push_back({name, type}); }
    void pop(std::size_t n = 1) { cart_.resize(cart_.size() - n); }

    Expr zone_type(const Slot& s) const { return shift(s.type, 0, static_cast<int>(depth()) - s.depth); }

    // ---- zone bookkeeping --------------------------------------------------------------

    Expr consume(const Expr& var) {
        const SlotId slot = var->index;
        Frame& top = frames_.back();
        for (auto it = top.slots.rbegin(); it != top.slots.rend(); ++it) {
            if (it->slot != slot) continue;
            if (it->status == SlotStatus::Consumed) {
                throw Error(ErrorKind::LinearViolation, "linear variable " + it->name + " used more than once");
            }
            it->status = SlotStatus::Consumed;
            return zone_type(*it);
        }
        for (std::size_t f = 0; f + 1 < frames_.size(); ++f) {
            for (const auto& s : frames_[f].slots) {
                if (s.slot == slot) {
                    throw Error(ErrorKind::ModeError,
                                "linear variable " + s.name + " used where the zone is frozen (cartesian subterm)");
                }
            }
        }
        throw Error(ErrorKind::OutOfScope, "linear slot " + show(var) + " not in scope");
    }

    void bind(SlotId slot, const Expr& type, const std::string& name = "") {
        frames_.back().slots.push_back(
            {slot, name.empty() ? "%" + std::to_string(slot) : name, type, static_cast<int>(depth()), SlotStatus::Live, 0});
    }

    void unbind(SlotId slot, const Expr& at) {
        auto& slots = frames_.back().slots;
        for (std::size_t i = slots.size(); i-- > 0;) {
            if (slots[i].slot != slot) continue;
            if (slots[i].status == SlotStatus::Live) {
                fail(ErrorKind::LinearViolation, "linear variable " + show(lvar(slot)) + " used 0 times", at);
            }
            slots.erase(slots.begin() + static_cast<std::ptrdiff_t>(i));
            return;
        }
    }

    void close_frame() {
        Frame& top = frames_.back();
        for (const auto& s : top.slots) {
            if (s.status == SlotStatus::Live) {
                throw Error(ErrorKind::LinearViolation, "linear variable " + s.name + " used 0 times");
            }
        }
        frames_.pop_back();
    }

    void slack_all() {
        for (auto& s : frames_.back().slots) {
            if (s.status == SlotStatus::Live) {
                s.status = SlotStatus::Slack;
                s.epoch = epoch_;
            }
        }
    }

    // Runs each branch from the same starting zone and merges the results.
    void additive(const std::vector<std::function<void()>>& branches, const Expr& at) {
        const std::vector<Slot> start = frames_.back().slots;
        const int b = ++epoch_counter_;
        const int saved_epoch = epoch_;
        epoch_ = b;
        std::vector<std::vector<Slot>> results;
        for (const auto& br : branches) {
            frames_.back().slots = start;
            br();
            results.push_back(frames_.back().slots);
        }
        epoch_ = saved_epoch;
        std::vector<Slot> merged = results[0];
        for (std::size_t r = 1; r < results.size(); ++r) {
            for (std::size_t i = 0; i < merged.size(); ++i) {
                Slot& m = merged[i];
                const Slot& o = results[r][i];
                const bool wm = m.status == SlotStatus::Slack && m.epoch >= b;
                const bool wo = o.status == SlotStatus::Slack && o.epoch >= b;
                if (wm && wo) {
                    m.epoch = b;
                } else if (wm) {
                    m.status = o.status;
                    m.epoch = o.epoch;
                } else if (wo) {
                    // keep m
                } else if (m.status != o.status || (m.status == SlotStatus::Slack && m.epoch != o.epoch)) {
                    fail(ErrorKind::ZoneMismatch, "additive branches use " + m.name + " differently", at);
                }
            }
        }
        frames_.back().slots = merged;
    }

    // ---- eliminators with binders ------------------------------------------------------

    Expr finish(const Expr& result, const Expr& expected, const Expr& at) {
        if (expected) {
            conv(result, expected, at);
            return expected;
        }
        return result;
    }

    // Body of a let under `n` fresh cartesian binders: check against the expected type
    // (shifted in) or infer one that does not mention the binders.
    Expr let_body(const Expr& body, const Expr& expected, int n, const Expr& at) {
        if (expected) {
            check_lin(body, shift(expected, 0, n));
            return expected;
        }
        Expr t = nf(infer_lin(body));
        for (int i = 0; i < n; ++i) {
            if (has_free_cart(t, i)) {
                fail(ErrorKind::TypeMismatch, "result type " + show(t) + " depends on a let-bound variable", at);
            }
        }
        return shift(t, 0, -n);
    }

    Expr sq_let(const Expr& e, const Expr& expected) {
        rule("⊏-E");
        const Expr s = nf(infer_lin(e.kid(0)));
        if (s.head() != Head::Sqsubset) fail(ErrorKind::TypeMismatch, "⊏-let on " + show(s), e);
        push(hint(e), s.kid(0));
        const SlotId y = e->lin_binders[1][0];
        bind(y, s.kid(1));
        const Expr t = let_body(e.kid(1), expected, 1, e);
        unbind(y, e);
        pop();
        return t;
    }

    Expr ten_let(const Expr& e, const Expr& expected) {
        rule("⊗-E");
        const Expr s = nf(infer_lin(e.kid(0)));
        if (s.head() != Head::Tensor) fail(ErrorKind::TypeMismatch, "⊗-let on " + show(s), e);
        const SlotId u = e->lin_binders[1][0];
        const SlotId v = e->lin_binders[1][1];
        bind(u, s.kid(0));
        bind(v, s.kid(1));
        const Expr t = let_body(e.kid(1), expected, 0, e);
        unbind(v, e);
        unbind(u, e);
        return t;
    }

    Expr unit_let(const Expr& e, const Expr& expected) {
        rule("I-E");
        check_lin(e.kid(0), atom(Head::UnitI));
        return let_body(e.kid(1), expected, 0, e);
    }

    Expr l_let(const Expr& e, const Expr& expected) {
        rule("L-E");
        const Expr s = nf(infer_lin(e.kid(0)));
        if (s.head() != Head::LTy) fail(ErrorKind::TypeMismatch, "L-let on " + show(s), e);
        push(hint(e), s.kid(0));
        const Expr t = let_body(e.kid(1), expected, 1, e);
        pop();
        return t;
    }

    Expr plus_case(const Expr& e, const Expr& expected) {
        rule("⊕-E");
        const Expr s = nf(infer_lin(e.kid(0)));
        if (s.head() != Head::Plus) fail(ErrorKind::TypeMismatch, "case on " + show(s), e);
        Expr types[2];
        additive({[&] {
                      const SlotId u = e->lin_binders[1][0];
                      bind(u, s.kid(0));
                      types[0] = let_body(e.kid(1), expected, 0, e);
                      unbind(u, e);
                  },
                  [&] {
                      const SlotId v = e->lin_binders[2][0];
                      bind(v, s.kid(1));
                      types[1] = let_body(e.kid(2), expected, 0, e);
                      unbind(v, e);
                  }},
                 e);
        if (!expected) conv(types[1], types[0], e);
        return types[0];
    }

    // Checks the listed zone entries against their family instances, moves them into the
    // body's scope, and returns the (slot, family) pairs.
    std::vector<std::pair<SlotId, Expr>> claim_zone(const Expr& e, const std::vector<Expr>& binder_types,
                                                    const std::vector<Expr>& instance) {
        const std::size_t fixed = head_shape(e.head()).size();
        std::vector<std::pair<SlotId, Expr>> out;
        for (std::size_t i = fixed; i < e.arity(); i += 2) {
            const SlotId slot = e.kid(i)->index;
            const Expr& fam = e.kid(i + 1);
            for (const auto& t : binder_types) push("x", t);
            lin_type(fam, false);
            pop(binder_types.size());
            Slot* entry = nullptr;
            for (auto it = frames_.back().slots.rbegin(); it != frames_.back().slots.rend(); ++it) {
                if (it->slot == slot) {
                    entry = &*it;
                    break;
                }
            }
            if (!entry) consume(e.kid(i));  // raises ModeError / OutOfScope
            if (entry->status == SlotStatus::Consumed) {
                fail(ErrorKind::LinearViolation, "linear variable " + entry->name + " used more than once", e);
            }
            const Expr want = instantiate(fam, instance);
            if (!conv_types(zone_type(*entry), want)) {
                fail(ErrorKind::TypeMismatch,
                     "zone entry " + entry->name + " : " + show(zone_type(*entry)) + " is not " + show(want), e);
            }
            entry->status = SlotStatus::Consumed;
            out.emplace_back(slot, fam);
        }
        return out;
    }

    Expr sig_elim2(const Expr& e) {
        rule("Σ-E2");
        const Expr s = nf(infer_cart(e.kid(2)));
        if (s.head() != Head::Sigma) fail(ErrorKind::TypeMismatch, "split on non-pair type " + show(s), e);
        push("t", s);
        lin_type(e.kid(0), false);
        pop();
        const auto claimed = claim_zone(e, {s.kid(0), s.kid(1)}, {pr1(e.kid(2)), pr2(e.kid(2))});
        push("x", s.kid(0));
        push("y", s.kid(1));
        for (const auto& [slot, fam] : claimed) bind(slot, fam);
        check_lin(e.kid(1), instantiate(shift(e.kid(0), 1, 2), pair_c(cvar(1), cvar(0))));
        for (auto it = claimed.rbegin(); it != claimed.rend(); ++it) unbind(it->first, e);
        pop(2);
        return instantiate(e.kid(0), e.kid(2));
    }

    // Shared premises of both identity eliminators; returns the carrier A.
    Expr id_elim_prelude(const Expr& e) {
        const Expr a = infer_cart(e.kid(2));
        check_cart(e.kid(3), a);
        check_cart(e.kid(4), id_type(a, e.kid(2), e.kid(3)));
        push("x", a);
        push("y", shift(a, 0, 1));
        push("p", id_type(shift(a, 0, 2), cvar(1), cvar(0)));
        if (e.head() == Head::IdElim1) {
            cart_type(e.kid(0), false);
        } else {
            lin_type(e.kid(0), false);
        }
        pop(3);
        return a;
    }

    // C[z, z, refl z] in the scope extended by z.
    static Expr diagonal(const Expr& fam) {
        return instantiate(shift(fam, 3, 1), {cvar(0), cvar(0), refl(cvar(0))});
    }

    Expr id_elim2(const Expr& e) {
        rule("=-E2");
        const Expr a = id_elim_prelude(e);
        const auto claimed = claim_zone(e, {a, shift(a, 0, 1), id_type(shift(a, 0, 2), cvar(1), cvar(0))},
                                        {e.kid(2), e.kid(3), e.kid(4)});
        push("z", a);
        for (const auto& [slot, fam] : claimed) bind(slot, diagonal(fam));
        check_lin(e.kid(1), diagonal(e.kid(0)));
        for (auto it = claimed.rbegin(); it != claimed.rend(); ++it) unbind(it->first, e);
        pop();
        return instantiate(e.kid(0), {e.kid(2), e.kid(3), e.kid(4)});
    }

    Expr infer_ua(const Expr& e) {
        rule("ua-I");
        if (!flags_.ua) fail(ErrorKind::FeatureDisabled, "ua requires 'pragma ua'", e);
        const Expr univ = atom(Head::UnivL);
        check_cart(e.kid(0), univ);
        check_cart(e.kid(1), univ);
        const Expr ea = el(e.kid(0));
        const Expr eb = el(e.kid(1));
        auto closed = [&](const Expr& t, const Expr& ty) {
            frames_.push_back(Frame{});
            check_lin(t, ty);
            close_frame();
        };
        closed(e.kid(2), lolli(ea, eb));
        closed(e.kid(3), lolli(eb, ea));
        closed(e.kid(4), lolli(eb, ea));
        const SlotId u = std::max(max_slot(e), SlotId(0)) + 1;
        const Expr gf = mintro(linlam(ea, u, linapp(e.kid(3), linapp(e.kid(2), lvar(u)))));
        const Expr ida = mintro(linlam(ea, u, lvar(u)));
        const Expr fh = mintro(linlam(eb, u, linapp(e.kid(2), linapp(e.kid(4), lvar(u)))));
        const Expr idb = mintro(linlam(eb, u, lvar(u)));
        check_cart(e.kid(5), id_type(mty(lolli(ea, ea)), gf, ida));
        check_cart(e.kid(6), id_type(mty(lolli(eb, eb)), fh, idb));
        return id_type(univ, e.kid(0), e.kid(1));
    }

    void check_code_el(const Expr& e, const Expr& univ) {
        rule("El-code");
        const Expr u = nf(infer_cart(e.kid(0)));
        if (u.head() != univ.head()) fail(ErrorKind::TypeMismatch, "code in " + show(u) + " used as " + show(univ), e);
    }
};

CheckReport make_report(JudgmentKind kind, const Ctx& ctx, std::vector<Expr> subjects) {
    CheckReport r;
    r.judgment.kind = kind;
    r.judgment.ctx = ctx;
    r.judgment.subjects = std::move(subjects);
    return r;
}

void reject(CheckReport& r, const Error& err) {
    r.accepted = false;
    r.error = err.kind();
    r.reason = err.what();
    r.span = err.span();
}

}  // namespace

Checker::Checker(const Signature& sig, EqFlags flags, std::size_t budget) : sig_(&sig), flags_(flags), budget_(budget) {}

CheckReport Checker::check_ctx(const Ctx& ctx) {
    CheckReport r = make_report(JudgmentKind::CtxOk, ctx, {});
    Session s(*sig_, flags_, budget_, tracing_ ? &r.trace : nullptr);
    try {
        Ctx prefix;
        for (const auto& c : ctx.cart) {
            sort_of(c.type, prefix, consts());
            s.load(prefix, {});
            s.cart_type(c.type, false);
            prefix.cart.push_back(c);
        }
        std::set<SlotId> seen;
        s.load(prefix, {});
        for (const auto& l : ctx.lin) {
            if (!seen.insert(l.slot).second) {
                throw Error(ErrorKind::DuplicateLinearName, "slot " + std::to_string(l.slot) + " appears twice");
            }
            if (mentions_lin_var(l.type)) throw Error(ErrorKind::LinearVarInType, "linear type mentions a linear variable");
            sort_of(l.type, prefix, consts());
            s.lin_type(l.type, false);
        }
        r.accepted = true;
    } catch (const Error& err) {
        reject(r, err);
    }
    return r;
}

CheckReport Checker::check_type(const Ctx& ctx, const Expr& type) {
    CheckReport r = make_report(is_lin_type_head(type.head()) ? JudgmentKind::LinTypeOk : JudgmentKind::CartTypeOk, ctx,
                                {type});
    Session s(*sig_, flags_, budget_, tracing_ ? &r.trace : nullptr);
    try {
        Ctx bare = ctx;
        bare.lin.clear();
        const Sort so = sort_of(type, bare, consts());
        if (so != Sort::CartType && so != Sort::LinType) {
            throw Error(ErrorKind::SortMismatch, std::string("not a type: sort ") + sort_name(so));
        }
        s.load(bare, {});
        if (so == Sort::LinType) r.judgment.kind = JudgmentKind::LinTypeOk;
        s.any_type(type);
        r.accepted = true;
    } catch (const Error& err) {
        reject(r, err);
    }
    return r;
}

std::pair<CheckReport, LinZoneState> Checker::check_term(const Ctx& ctx, LinZoneState zone, const Expr& e,
                                                         const Expr& type) {
    CheckReport r = make_report(JudgmentKind::LinTermHasType, ctx, {e, type});
    Session s(*sig_, flags_, budget_, tracing_ ? &r.trace : nullptr);
    try {
        s.load(ctx, zone);
        Ctx probe = ctx;
        if (sort_of(e, probe, consts()) != Sort::LinTerm) r.judgment.kind = JudgmentKind::CartTermHasType;
        s.check_any(e, type, consts());
        zone = s.zone_state();
        r.accepted = true;
    } catch (const Error& err) {
        reject(r, err);
    }
    return {r, zone};
}

CheckReport Checker::check_term(const Ctx& ctx, const Expr& e, const Expr& type) {
    auto [r, zone] = check_term(ctx, LinZoneState::from(ctx), e, type);
    if (r.accepted && !zone.exhausted()) {
        std::string unused;
        for (const auto& z : zone.entries) {
            if (z.status == SlotStatus::Live) unused += (unused.empty() ? "" : ", ") + z.name;
        }
        reject(r, Error(ErrorKind::LinearViolation, "linear variable(s) used 0 times: " + unused));
    }
    return r;
}

std::pair<CheckReport, Expr> Checker::infer(const Ctx& ctx, const Expr& e) {
    CheckReport r = make_report(JudgmentKind::LinTermHasType, ctx, {e});
    Session s(*sig_, flags_, budget_, tracing_ ? &r.trace : nullptr);
    Expr type;
    try {
        s.load(ctx, LinZoneState::from(ctx));
        type = s.infer_any(e, consts());
        s.require_exhausted();
        r.judgment.subjects.push_back(type);
        r.accepted = true;
    } catch (const Error& err) {
        reject(r, err);
    }
    return {r, type};
}

Expr Checker::infer_open(const Ctx& ctx, const Expr& e) {
    Session s(*sig_, flags_, budget_, nullptr);
    s.load(ctx, LinZoneState::from(ctx));
    return s.infer_any(e, consts());
}

CheckReport Checker::check_equal(const Ctx& ctx, const Expr& a, const Expr& b, const Expr& type) {
    CheckReport ra = check_term(ctx, a, type);
    CheckReport r = make_report(is_lin_type_head(type.head()) ? JudgmentKind::LinEq : JudgmentKind::CartEq, ctx,
                                {a, b, type});
    if (ra.judgment.kind == JudgmentKind::LinTermHasType) r.judgment.kind = JudgmentKind::LinEq;
    if (!ra.accepted) {
        r.error = ra.error;
        r.reason = "left side: " + ra.reason;
        return r;
    }
    CheckReport rb = check_term(ctx, b, type);
    if (!rb.accepted) {
        r.error = rb.error;
        r.reason = "right side: " + rb.reason;
        return r;
    }
    r.trace = ra.trace;
    r.trace.insert(r.trace.end(), rb.trace.begin(), rb.trace.end());
    try {
        if (equal(*sig_, ctx, type, a, b, flags_, budget_)) {
            r.accepted = true;
        } else {
            r.error = ErrorKind::TypeMismatch;
            r.reason = "sides are not definitionally equal: " + pretty(normalize(*sig_, a, flags_, budget_), ctx) +
                       " vs " + pretty(normalize(*sig_, b, flags_, budget_), ctx);
        }
    } catch (const Error& err) {
        reject(r, err);
    }
    return r;
}

}  // namespace ldtt
