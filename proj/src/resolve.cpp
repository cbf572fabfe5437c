#include <algorithm>

#include "ldtt/syntax.hpp"

namespace ldtt {

namespace {

struct ScopeEntry {
    std::string name;
    bool linear = false;
    SlotId slot = 0;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& msg, const SExprPtr& at) {
    throw Error(kind, msg, at ? std::optional<SourceSpan>(at->span) : std::nullopt);
}

}  // namespace

/// Name environment for one declaration: a single stack holds cartesian and linear names so
/// the innermost binding wins regardless of kind.
class ResolveScope {
public:
    ResolveScope(const Resolver& r, SlotId first_slot) : globals_(r.globals_), next_slot_(first_slot) {}

    void push_cart(const std::string& name) { stack_.push_back({name, false, 0}); }
    SlotId push_lin(const std::string& name) {
        const SlotId s = next_slot_++;
        stack_.push_back({name, true, s});
        return s;
    }
    void push_lin_slot(const std::string& name, SlotId s) {
        stack_.push_back({name, true, s});
        next_slot_ = std::max(next_slot_, s + 1);
    }
    void pop(std::size_t n = 1) { stack_.resize(stack_.size() - n); }

    Expr type(const SExprPtr& e) {
        const bool outermost = barrier_ < 0;
        if (outermost) barrier_ = static_cast<int>(stack_.size());
        Expr out;
        try {
            out = term(e);
        } catch (...) {
            if (outermost) barrier_ = -1;
            throw;
        }
        if (outermost) barrier_ = -1;
        if (!is_type_head(out.head())) out = el(out);
        return out;
    }

    Expr term(const SExprPtr& e) {
        const std::string& t = e->tag;
        auto k = [&](std::size_t i) { return e->kids[i]; };
        if (t == "var") return lookup(e->names[0], e);
        if (t == "U") return atom(Head::UnivU);
        if (t == "L") return atom(Head::UnivL);
        if (t == "Unit") return atom(Head::UnitI);
        if (t == "Top") return atom(Head::TopTy);
        if (t == "Zero") return atom(Head::ZeroTy);
        if (t == "unit") return atom(Head::UnitIntro);
        if (t == "top") return atom(Head::TopIntro);
        if (t == "app") return app(term(k(0)), term(k(1)));
        if (t == "sqapp") return sqapp(term(k(0)), term(k(1)));
        if (t == "lapp") return linapp(term(k(0)), term(k(1)));
        if (t == "fun" || t == "cfun" || t == "Pi" || t == "Sigma" || t == "cap" || t == "sub") {
            const bool body_is_type = t == "Pi" || t == "Sigma" || t == "cap" || t == "sub";
            Expr dom = type(k(0));
            push_cart(e->names[0]);
            Expr body = body_is_type ? type(k(1)) : term(k(1));
            pop();
            const std::string& h = e->names[0];
            if (t == "fun") return lam(dom, body, h);
            if (t == "cfun") return sqlam(dom, body, h);
            if (t == "Pi") return pi(dom, body, h);
            if (t == "Sigma") return sigma(dom, body, h);
            if (t == "cap") return sqcap(dom, body, h);
            return sqsubset(dom, body, h);
        }
        if (t == "lfun") {
            Expr dom = type(k(0));
            const SlotId u = push_lin(e->names[0]);
            Expr body = term(k(1));
            pop();
            return linlam(dom, u, body);
        }
        if (t == "->") {
            Expr dom = type(k(0));
            push_cart("");
            Expr cod = type(k(1));
            pop();
            return pi(dom, cod, "_");
        }
        if (t == "-o") return lolli(type(k(0)), type(k(1)));
        if (t == "*") return tensor(type(k(0)), type(k(1)));
        if (t == "&") return with(type(k(0)), type(k(1)));
        if (t == "(+)") return plus(type(k(0)), type(k(1)));
        if (t == "**") return tenpair(term(k(0)), term(k(1)));
        if (t == "pair") return pair_c(term(k(0)), term(k(1)));
        if (t == "wpair") return withpair(term(k(0)), term(k(1)));
        if (t == "sqpair") return sqpair(term(k(0)), term(k(1)));
        if (t == "sig") return mintro(term(k(0)));
        if (t == "unsig") return melim(term(k(0)));
        if (t == "lift") return lintro(term(k(0)));
        if (t == "refl") return refl(term(k(0)));
        if (t == "fst") return withfst(term(k(0)));
        if (t == "snd") return withsnd(term(k(0)));
        if (t == "pr1") return pr1(term(k(0)));
        if (t == "pr2") return pr2(term(k(0)));
        if (t == "inl") return inl(term(k(0)));
        if (t == "inr") return inr(term(k(0)));
        if (t == "absurd") return zeroelim(term(k(0)));
        if (t == "El") return el(term(k(0)));
        if (t == "Lt") return lty(type(k(0)));
        if (t == "Mt") return mty(type(k(0)));
        if (t == "Id") return id_type(type(k(0)), term(k(1)), term(k(2)));
        if (t == "ua") {
            std::vector<Expr> kids;
            for (std::size_t i = 0; i < 7; ++i) kids.push_back(term(k(i)));
            return make(Head::Ua, std::move(kids));
        }
        if (t == "let1") {
            Expr scrut = term(k(0));
            push_cart(e->names[0]);
            Expr body = term(k(1));
            pop();
            return llet(scrut, body, e->names[0]);
        }
        if (t == "let2") {
            Expr scrut = term(k(0));
            push_cart(e->names[0]);
            const SlotId y = push_lin(e->names[1]);
            Expr body = term(k(1));
            pop(2);
            return sqlet(scrut, y, body, e->names[0]);
        }
        if (t == "letT") {
            if (e->names[0] == e->names[1]) fail(ErrorKind::DuplicateLinearName, "duplicate linear name " + e->names[0], e);
            Expr scrut = term(k(0));
            const SlotId u = push_lin(e->names[0]);
            const SlotId v = push_lin(e->names[1]);
            Expr body = term(k(1));
            pop(2);
            return tenlet(scrut, u, v, body);
        }
        if (t == "letU") return unitlet(term(k(0)), term(k(1)));
        if (t == "case") {
            Expr scrut = term(k(0));
            const SlotId u = push_lin(e->names[0]);
            Expr left = term(k(1));
            pop();
            const SlotId v = push_lin(e->names[1]);
            Expr right = term(k(2));
            pop();
            return pluscase(scrut, u, left, v, right);
        }
        if (t == "split1" || t == "split2") {
            Expr s = term(k(0));
            push_cart(e->names[0]);
            Expr motive = type(k(1));
            pop();
            push_cart(e->names[1]);
            push_cart(e->names[2]);
            Expr body = term(k(2));
            std::vector<Expr> kids{motive, body, s};
            std::vector<Expr> zone;
            for (std::size_t i = 3; i < e->names.size(); ++i) zone.push_back(type(k(i)));
            pop(2);
            for (std::size_t i = 3; i < e->names.size(); ++i) {
                kids.push_back(zone_var(e->names[i], e));
                kids.push_back(zone[i - 3]);
            }
            std::vector<std::vector<std::string>> hints(kids.size());
            hints[0] = {e->names[0]};
            hints[1] = {e->names[1], e->names[2]};
            return make(t == "split1" ? Head::SigElim1 : Head::SigElim2, kids, {}, hints);
        }
        if (t == "J1" || t == "J2") {
            push_cart(e->names[0]);
            push_cart(e->names[1]);
            push_cart(e->names[2]);
            Expr motive = type(k(0));
            std::vector<Expr> zone;
            for (std::size_t i = 4; i < e->names.size(); ++i) zone.push_back(type(k(i + 1)));
            pop(3);
            push_cart(e->names[3]);
            Expr body = term(k(1));
            pop();
            std::vector<Expr> kids{motive, body, term(k(2)), term(k(3)), term(k(4))};
            for (std::size_t i = 4; i < e->names.size(); ++i) {
                kids.push_back(zone_var(e->names[i], e));
                kids.push_back(zone[i - 4]);
            }
            std::vector<std::vector<std::string>> hints(kids.size());
            hints[0] = {e->names[0], e->names[1], e->names[2]};
            hints[1] = {e->names[3]};
            return make(t == "J1" ? Head::IdElim1 : Head::IdElim2, kids, {}, hints);
        }
        fail(ErrorKind::ParseError, "unknown surface form " + t, e);
    }

private:
    const std::map<std::string, Resolver::Global>& globals_;
    std::vector<ScopeEntry> stack_;
    SlotId next_slot_;
    int barrier_ = -1;  // stack size at entry to the outermost type position

    Expr lookup(const std::string& name, const SExprPtr& at) {
        int cart_seen = 0;
        for (std::size_t i = stack_.size(); i-- > 0;) {
            const ScopeEntry& s = stack_[i];
            if (s.name == name) {
                if (!s.linear) return cvar(cart_seen);
                if (barrier_ >= 0 && static_cast<int>(i) < barrier_) {
                    fail(ErrorKind::LinearVarInType, "linear variable " + name + " used inside a type", at);
                }
                return lvar(s.slot, name);
            }
            if (!s.linear) ++cart_seen;
        }
        if (globals_.count(name)) return constant(name);
        fail(ErrorKind::UnboundName, "unbound name " + name, at);
    }

    Expr zone_var(const std::string& name, const SExprPtr& at) {
        for (std::size_t i = stack_.size(); i-- > 0;) {
            if (stack_[i].name == name) {
                if (!stack_[i].linear) break;
                return lvar(stack_[i].slot, name);
            }
        }
        fail(ErrorKind::UnboundName, "'using' needs a linear variable in scope: " + name, at);
    }
};

void Resolver::declare(const std::string& name, const Expr& type, bool linear) { globals_[name] = Global{type, linear}; }

Expr Resolver::resolve_expr(const SExprPtr& e, const Ctx& ctx, bool type_position) {
    SlotId first = 0;
    for (const auto& l : ctx.lin) first = std::max(first, l.slot + 1);
    ResolveScope scope(*this, first);
    for (const auto& c : ctx.cart) scope.push_cart(c.name);
    for (const auto& l : ctx.lin) scope.push_lin_slot(l.name, l.slot);
    return type_position ? scope.type(e) : scope.term(e);
}

ResolvedDecl Resolver::resolve_decl(const SurfaceDecl& d) {
    ResolvedDecl out;
    out.kind = d.kind;
    out.name = d.name;
    out.span = d.span;
    if (d.kind == DeclKind::Flag) {
        static const std::set<std::string> flags = {"nat_l", "eta_sigma", "eta_sub", "ua"};
        if (!flags.count(d.name)) throw Error(ErrorKind::UnboundName, "unknown pragma " + d.name, d.span);
        return out;
    }
    if (d.kind == DeclKind::Def && globals_.count(d.name)) {
        throw Error(ErrorKind::DuplicateName, "duplicate definition " + d.name, d.span);
    }
    ResolveScope scope(*this, 0);
    std::set<std::string> lin_names;
    for (const auto& b : d.params) {
        if (!b.linear) {
            Expr ty = scope.type(b.type);
            out.ctx.cart.push_back({b.name, ty});
            scope.push_cart(b.name);
        }
    }
    for (const auto& b : d.params) {
        if (!b.linear) continue;
        if (!lin_names.insert(b.name).second) {
            throw Error(ErrorKind::DuplicateLinearName, "duplicate linear name " + b.name, b.span);
        }
        Expr ty = scope.type(b.type);
        const SlotId s = static_cast<SlotId>(out.ctx.lin.size());
        out.ctx.lin.push_back({s, b.name, ty});
    }
    for (const auto& l : out.ctx.lin) {
        scope.push_lin_slot(l.name, l.slot);
    }
    out.type = scope.type(d.expected);
    out.body = scope.term(d.body);
    if (d.rhs) out.rhs = scope.term(d.rhs);
    if (d.kind == DeclKind::Def) {
        ConstLookup lookup = [this](const std::string& n) -> std::optional<ConstInfo> {
            auto it = globals_.find(n);
            if (it == globals_.end()) return std::nullopt;
            return ConstInfo{it->second.linear ? Sort::LinTerm : Sort::CartTerm, it->second.type};
        };
        Ctx bare = out.ctx;
        bare.lin.clear();
        try {
            out.linear = sort_of(out.type, bare, lookup) == Sort::LinType;
        } catch (const Error& err) {
            throw Error(err.kind(), err.what(), d.span);
        }
        declare(out.name, abstract_def(out).type, out.linear);
    }
    return out;
}

std::vector<ResolvedDecl> Resolver::resolve(const std::vector<SurfaceDecl>& decls) {
    std::vector<ResolvedDecl> out;
    out.reserve(decls.size());
    for (const auto& d : decls) out.push_back(resolve_decl(d));
    return out;
}

DefEntry abstract_def(const ResolvedDecl& d) {
    DefEntry out;
    out.linear = d.linear;
    Expr type = d.type;
    Expr value = d.body;
    if (d.linear) {
        for (auto it = d.ctx.lin.rbegin(); it != d.ctx.lin.rend(); ++it) {
            type = lolli(it->type, type);
            value = linlam(it->type, it->slot, value);
        }
        for (auto it = d.ctx.cart.rbegin(); it != d.ctx.cart.rend(); ++it) {
            type = sqcap(it->type, type, it->name);
            value = sqlam(it->type, value, it->name);
        }
    } else {
        for (auto it = d.ctx.cart.rbegin(); it != d.ctx.cart.rend(); ++it) {
            type = pi(it->type, type, it->name);
            value = lam(it->type, value, it->name);
        }
    }
    out.type = type;
    out.value = value;
    return out;
}

}  // namespace ldtt
