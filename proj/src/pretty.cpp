#include <algorithm>
#include <functional>

#include "ldtt/syntax.hpp"

namespace ldtt {

namespace {

// Precedence levels; a node printed where a higher level is required gets parentheses.
enum Level : int { kBinder = 0, kArrow = 1, kLolli = 2, kAdd = 3, kMul = 4, kAt = 5, kApp = 6, kAtom = 7 };

void collect_consts(const Expr& e, std::set<std::string>& out) {
    if (e.head() == Head::Const) out.insert(e->name);
    for (std::size_t i = 0; i < e.arity(); ++i) collect_consts(e.kid(i), out);
}

class Printer {
public:
    Printer(const std::vector<std::string>& cart, const std::map<SlotId, std::string>& lin, const Expr& root)
        : cart_(cart), lin_(lin) {
        collect_consts(root, reserved_);
        for (const auto& n : cart_) reserved_.insert(n);
        for (const auto& [s, n] : lin_) reserved_.insert(n);
    }

    std::string print(const Expr& e, int need) {
        int own = kAtom;
        std::string s = render(e, own);
        return own < need ? "(" + s + ")" : s;
    }

private:
    std::vector<std::string> cart_;
    std::map<SlotId, std::string> lin_;
    std::set<std::string> reserved_;

    bool in_use(const std::string& n) const {
        if (reserved_.count(n) || is_keyword(n)) return true;
        if (std::find(cart_.begin(), cart_.end(), n) != cart_.end()) return true;
        for (const auto& [s, m] : lin_) {
            if (m == n) return true;
        }
        return false;
    }

    std::string fresh(std::string base) {
        if (base.empty() || base == "_") base = "x";
        if (!in_use(base)) return base;
        for (int i = 1;; ++i) {
            std::string c = base + std::to_string(i);
            if (!in_use(c)) return c;
        }
    }

    std::string hint(const Expr& e, std::size_t child, std::size_t k, const char* dflt) const {
        if (child < e->cart_hints.size() && k < e->cart_hints[child].size() && !e->cart_hints[child][k].empty()) {
            return e->cart_hints[child][k];
        }
        return dflt;
    }

    // Prints child `i` with its cartesian binders named `names` and linear binders named
    // after their slots.
    std::string under(const Expr& e, std::size_t i, const std::vector<std::string>& names,
                      const std::vector<std::string>& lin_names, int need) {
        for (const auto& n : names) cart_.push_back(n);
        const auto& lb = e->lin_binders[i];
        std::vector<std::pair<SlotId, std::optional<std::string>>> saved;
        for (std::size_t k = 0; k < lb.size(); ++k) {
            auto it = lin_.find(lb[k]);
            saved.emplace_back(lb[k], it == lin_.end() ? std::nullopt : std::optional<std::string>(it->second));
            lin_[lb[k]] = lin_names[k];
        }
        std::string s = print(e.kid(i), need);
        for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
            if (it->second) {
                lin_[it->first] = *it->second;
            } else {
                lin_.erase(it->first);
            }
        }
        cart_.resize(cart_.size() - names.size());
        return s;
    }

    std::vector<std::string> fresh_lin(const Expr& e, std::size_t i) {
        std::vector<std::string> out;
        std::set<std::string> taken;
        for (SlotId s : e->lin_binders[i]) {
            std::string base = "u";
            std::string n = fresh(base);
            for (int k = 1; taken.count(n); ++k) n = fresh(base + std::to_string(k));
            taken.insert(n);
            out.push_back(n);
            (void)s;
        }
        return out;
    }

    std::vector<std::string> fresh_cart(const Expr& e, std::size_t child, const std::vector<const char*>& dflt) {
        std::vector<std::string> out;
        std::set<std::string> taken;
        for (std::size_t k = 0; k < dflt.size(); ++k) {
            std::string n = fresh(hint(e, child, k, dflt[k]));
            for (int j = 1; taken.count(n); ++j) n = fresh(hint(e, child, k, dflt[k]) + std::to_string(j));
            taken.insert(n);
            out.push_back(n);
        }
        return out;
    }

    std::string binder(const char* kw, const Expr& e, const char* dflt) {
        const auto names = fresh_cart(e, 1, {dflt});
        const auto lnames = fresh_lin(e, 1);
        return std::string(kw) + " (" + names[0] + " : " + print(e.kid(0), kBinder) + ") . " +
               under(e, 1, names, lnames, kBinder);
    }

    std::string unary(const char* kw, const Expr& e, int& own) {
        own = kApp;
        return std::string(kw) + " " + print(e.kid(0), kAtom);
    }

    std::string infix(const Expr& e, const char* op, int level, int left, int right, int& own) {
        own = level;
        return print(e.kid(0), left) + " " + op + " " + print(e.kid(1), right);
    }

    std::string zone_pairs(const Expr& e, const std::vector<std::string>& names) {
        std::string s;
        const std::size_t fixed = head_shape(e.head()).size();
        if (e.arity() == fixed) return s;
        s += " using";
        for (std::size_t i = fixed; i < e.arity(); i += 2) {
            s += " (" + print(e.kid(i), kAtom) + " : " + under(e, i + 1, names, {}, kBinder) + ")";
        }
        return s;
    }

    std::string render(const Expr& e, int& own) {
        own = kAtom;
        switch (e.head()) {
            case Head::CartVar: {
                const int i = e->index;
                if (i >= 0 && static_cast<std::size_t>(i) < cart_.size()) return cart_[cart_.size() - 1 - i];
                return "#" + std::to_string(i);
            }
            case Head::LinVar: {
                auto it = lin_.find(e->index);
                if (it != lin_.end()) return it->second;
                return "%" + std::to_string(e->index);
            }
            case Head::Const: return e->name;
            case Head::UnivU: return "U";
            case Head::UnivL: return "L";
            case Head::UnitI: return "Unit";
            case Head::TopTy: return "Top";
            case Head::ZeroTy: return "Zero";
            case Head::UnitIntro: return "unit";
            case Head::TopIntro: return "top";
            case Head::Pi:
                if (!has_free_cart(e.kid(1), 0)) {
                    own = kArrow;
                    return print(e.kid(0), kLolli) + " -> " + print(shift(e.kid(1), 0, -1), kArrow);
                }
                own = kBinder;
                return binder("Pi", e, "x");
            case Head::Lam: own = kBinder; return binder("fun", e, "x");
            case Head::Sigma: own = kBinder; return binder("Sigma", e, "x");
            case Head::Sqcap: own = kBinder; return binder("cap", e, "x");
            case Head::SqLam: own = kBinder; return binder("cfun", e, "x");
            case Head::Sqsubset: own = kBinder; return binder("sub", e, "x");
            case Head::LinLam: {
                own = kBinder;
                const auto lnames = fresh_lin(e, 1);
                return "lfun (" + lnames[0] + " : " + print(e.kid(0), kBinder) + ") . " +
                       under(e, 1, {}, lnames, kBinder);
            }
            case Head::App: own = kApp; return print(e.kid(0), kApp) + " " + print(e.kid(1), kAtom);
            case Head::SqApp: own = kApp; return print(e.kid(0), kApp) + " [" + print(e.kid(1), kBinder) + "]";
            case Head::LinApp: return infix(e, "@", kAt, kAt, kApp, own);
            case Head::PairC: return "(" + print(e.kid(0), kBinder) + ", " + print(e.kid(1), kBinder) + ")";
            case Head::WithPair: return "<" + print(e.kid(0), kBinder) + ", " + print(e.kid(1), kBinder) + ">";
            case Head::SqPair: return "{" + print(e.kid(0), kBinder) + ", " + print(e.kid(1), kBinder) + "}";
            case Head::Tensor: return infix(e, "*", kMul, kMul, kAt, own);
            case Head::TenPair: return infix(e, "**", kMul, kMul, kAt, own);
            case Head::Lolli: return infix(e, "-o", kLolli, kAdd, kLolli, own);
            case Head::With: return infix(e, "&", kAdd, kAdd, kMul, own);
            case Head::Plus: return infix(e, "(+)", kAdd, kAdd, kMul, own);
            case Head::Pr1: return unary("pr1", e, own);
            case Head::Pr2: return unary("pr2", e, own);
            case Head::Refl: return unary("refl", e, own);
            case Head::El: return unary("El", e, own);
            case Head::WithFst: return unary("fst", e, own);
            case Head::WithSnd: return unary("snd", e, own);
            case Head::Inl: return unary("inl", e, own);
            case Head::Inr: return unary("inr", e, own);
            case Head::ZeroElim: return unary("absurd", e, own);
            case Head::LTy: return unary("Lt", e, own);
            case Head::LIntro: return unary("lift", e, own);
            case Head::MTy: return unary("Mt", e, own);
            case Head::MIntro: return unary("sig", e, own);
            case Head::MElim: return unary("unsig", e, own);
            case Head::Id:
                own = kApp;
                return "Id " + print(e.kid(0), kAtom) + " " + print(e.kid(1), kAtom) + " " + print(e.kid(2), kAtom);
            case Head::Ua: {
                own = kApp;
                std::string s = "ua";
                for (std::size_t i = 0; i < 7; ++i) s += " " + print(e.kid(i), kAtom);
                return s;
            }
            case Head::SigElim1:
            case Head::SigElim2: {
                own = kApp;
                const auto t = fresh_cart(e, 0, {"t"});
                const auto xy = fresh_cart(e, 1, {"x", "y"});
                std::string s = e.head() == Head::SigElim1 ? "split1 " : "split2 ";
                s += print(e.kid(2), kAtom) + " (" + t[0] + " . " + under(e, 0, t, {}, kBinder) + ") (" + xy[0] +
                     " " + xy[1] + " . " + under(e, 1, xy, {}, kBinder) + ")";
                return s + zone_pairs(e, xy);
            }
            case Head::IdElim1:
            case Head::IdElim2: {
                own = kApp;
                const auto xyp = fresh_cart(e, 0, {"x", "y", "p"});
                const auto z = fresh_cart(e, 1, {"z"});
                std::string s = e.head() == Head::IdElim1 ? "J1 (" : "J2 (";
                s += xyp[0] + " " + xyp[1] + " " + xyp[2] + " . " + under(e, 0, xyp, {}, kBinder) + ") (" + z[0] +
                     " . " + under(e, 1, z, {}, kBinder) + ") " + print(e.kid(2), kAtom) + " " +
                     print(e.kid(3), kAtom) + " " + print(e.kid(4), kAtom);
                return s + zone_pairs(e, xyp);
            }
            case Head::SqLet: {
                own = kBinder;
                const auto x = fresh_cart(e, 1, {"x"});
                const auto y = fresh_lin(e, 1);
                return "let " + x[0] + " , " + y[0] + " be " + print(e.kid(0), kArrow) + " in " +
                       under(e, 1, x, y, kBinder);
            }
            case Head::TenLet: {
                own = kBinder;
                const auto uv = fresh_lin(e, 1);
                return "let " + uv[0] + " ** " + uv[1] + " be " + print(e.kid(0), kArrow) + " in " +
                       under(e, 1, {}, uv, kBinder);
            }
            case Head::UnitLet:
                own = kBinder;
                return "let unit be " + print(e.kid(0), kArrow) + " in " + print(e.kid(1), kBinder);
            case Head::LLet: {
                own = kBinder;
                const auto x = fresh_cart(e, 1, {"x"});
                return "let " + x[0] + " be " + print(e.kid(0), kArrow) + " in " + under(e, 1, x, {}, kBinder);
            }
            case Head::PlusCase: {
                own = kBinder;
                const auto u = fresh_lin(e, 1);
                const auto v = fresh_lin(e, 2);
                return "case " + print(e.kid(0), kArrow) + " of inl " + u[0] + " . " + under(e, 1, {}, u, kArrow) +
                       " | inr " + v[0] + " . " + under(e, 2, {}, v, kArrow);
            }
        }
        return "?";
    }
};

}  // namespace

std::string pretty(const Expr& e, const std::vector<std::string>& cart_names,
                   const std::map<SlotId, std::string>& lin_names) {
    if (!e) return "<null>";
    Printer p(cart_names, lin_names, e);
    return p.print(e, kBinder);
}

std::string pretty(const Expr& e, const Ctx& ctx) {
    std::vector<std::string> names;
    for (const auto& c : ctx.cart) names.push_back(c.name);
    std::map<SlotId, std::string> lin;
    for (const auto& l : ctx.lin) lin[l.slot] = l.name;
    return pretty(e, names, lin);
}

std::string pretty_decl(const ResolvedDecl& d) {
    std::string tele;
    std::vector<std::string> names;
    for (const auto& c : d.ctx.cart) {
        tele += " (" + c.name + " : " + pretty(c.type, names, {}) + ")";
        names.push_back(c.name);
    }
    if (!d.ctx.lin.empty()) {
        tele += " ( ;";
        for (const auto& l : d.ctx.lin) tele += " " + l.name + " : " + pretty(l.type, names, {});
        tele += ")";
    }
    switch (d.kind) {
        case DeclKind::Def:
            return "def " + d.name + tele + " : " + pretty(d.type, d.ctx) + " := " + pretty(d.body, d.ctx) + " ;";
        case DeclKind::Check:
            return "check" + tele + " " + pretty(d.body, d.ctx) + " : " + pretty(d.type, d.ctx) + " ;";
        case DeclKind::EqCheck:
            return "checkeq" + tele + " " + pretty(d.body, d.ctx) + " == " + pretty(d.rhs, d.ctx) + " : " +
                   pretty(d.type, d.ctx) + " ;";
        case DeclKind::Flag:
            return "pragma " + d.name + " ;";
    }
    return "";
}

}  // namespace ldtt
