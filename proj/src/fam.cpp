#include "ldtt/fam.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include <json.hpp>

#include "ldtt/kernel.hpp"
#include "ldtt/subst.hpp"
#include "ldtt/syntax.hpp"

namespace ldtt::fam {

using gf::Mat;

ValPtr elem(int i) {
    auto v = std::make_shared<Val>();
    v->kind = Val::Kind::Elem;
    v->n = i;
    return v;
}

ValPtr pair(ValPtr a, ValPtr b) {
    auto v = std::make_shared<Val>();
    v->kind = Val::Kind::Pair;
    v->a = std::move(a);
    v->b = std::move(b);
    return v;
}

ValPtr star() {
    static const ValPtr s = std::make_shared<Val>();
    return s;
}

ValPtr mvec(std::vector<int> vec) {
    auto v = std::make_shared<Val>();
    v->kind = Val::Kind::MVec;
    v->vec = std::move(vec);
    return v;
}

ValPtr base_set(int n) {
    auto v = std::make_shared<Val>();
    v->kind = Val::Kind::BaseSet;
    v->n = n;
    return v;
}

ValPtr base_vec(int d) {
    auto v = std::make_shared<Val>();
    v->kind = Val::Kind::BaseVec;
    v->n = d;
    return v;
}

std::string show(const ValPtr& v) {
    switch (v->kind) {
        case Val::Kind::Elem: return "#" + std::to_string(v->n);
        case Val::Kind::Pair: return "(" + show(v->a) + ", " + show(v->b) + ")";
        case Val::Kind::Star: return "refl";
        case Val::Kind::MVec: {
            std::string s = "sig[";
            for (std::size_t i = 0; i < v->vec.size(); ++i) s += (i ? " " : "") + std::to_string(v->vec[i]);
            return s + "]";
        }
        case Val::Kind::Closure: return "<fun>";
        case Val::Kind::Table: {
            std::string s = "{";
            for (std::size_t i = 0; i < v->graph.size(); ++i) {
                s += (i ? ", " : "") + show(v->graph[i].first) + " -> " + show(v->graph[i].second);
            }
            return s + "}";
        }
        case Val::Kind::BaseSet: return "set(" + std::to_string(v->n) + ")";
        case Val::Kind::BaseVec: return "vec(" + std::to_string(v->n) + ")";
        case Val::Kind::Code: return "code(" + pretty(v->expr) + ")";
    }
    return "?";
}

bool is_large(const Expr& type) {
    switch (type.head()) {
        case Head::UnivU:
        case Head::UnivL: return true;
        case Head::Pi: return is_large(type.kid(1));
        default: return false;
    }
}

Basis basis_from_json(const std::string& text) {
    Basis out;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Usage, std::string("basis file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorKind::Usage, "basis file must be a JSON object");
    for (const auto& [name, v] : j.items()) {
        BasisValue bv;
        if (v.contains("set") && v["set"].is_number_unsigned()) {
            bv.kind = BasisValue::Kind::Set;
            bv.sizes = {v["set"].get<int>()};
        } else if (v.contains("vec") && v["vec"].is_array()) {
            bv.kind = BasisValue::Kind::Vec;
            bv.sizes = v["vec"].get<std::vector<int>>();
        } else if (v.contains("sets") && v["sets"].is_array()) {
            bv.kind = BasisValue::Kind::Sets;
            bv.sizes = v["sets"].get<std::vector<int>>();
        } else {
            throw Error(ErrorKind::Usage, "basis entry '" + name + "' needs \"set\", \"vec\" or \"sets\"");
        }
        for (int s : bv.sizes) {
            if (s < 0) throw Error(ErrorKind::Usage, "basis entry '" + name + "' has a negative size");
        }
        out[name] = bv;
    }
    return out;
}

namespace {

bool contains_head(const Expr& e, Head h) {
    if (e.head() == h) return true;
    for (std::size_t i = 0; i < e.arity(); ++i) {
        if (contains_head(e.kid(i), h)) return true;
    }
    return false;
}

// Whether a linear term can swallow zone entries it does not mention (through ⊤ or 0).
bool absorbs(const Expr& e) {
    switch (e.head()) {
        case Head::TopIntro:
        case Head::ZeroElim: return true;
        case Head::WithPair: return absorbs(e.kid(0)) && absorbs(e.kid(1));
        case Head::PlusCase: return absorbs(e.kid(0)) || (absorbs(e.kid(1)) && absorbs(e.kid(2)));
        case Head::TenPair:
        case Head::LinApp:
        case Head::TenLet:
        case Head::UnitLet:
        case Head::SqLet:
        case Head::LLet: return absorbs(e.kid(0)) || absorbs(e.kid(1));
        case Head::SqLam:
        case Head::LinLam: return absorbs(e.kid(1));
        case Head::SqApp:
        case Head::WithFst:
        case Head::WithSnd:
        case Head::Inl:
        case Head::Inr: return absorbs(e.kid(0));
        case Head::SqPair: return absorbs(e.kid(1));
        case Head::SigElim2:
        case Head::IdElim2: return absorbs(e.kid(1));
        default: return false;
    }
}

std::vector<SlotId> intersect(const std::vector<SlotId>& s, const std::set<SlotId>& keep) {
    std::vector<SlotId> out;
    for (SlotId x : s) {
        if (keep.count(x)) out.push_back(x);
    }
    return out;
}

std::vector<SlotId> minus(const std::vector<SlotId>& s, const std::vector<SlotId>& drop) {
    std::vector<SlotId> out;
    for (SlotId x : s) {
        if (std::find(drop.begin(), drop.end(), x) == drop.end()) out.push_back(x);
    }
    return out;
}

// Permutation taking the tensor of factors `dims` (left-major) to the tensor of the
// factors listed in `order`.
Mat reorder(const std::vector<int>& dims, const std::vector<std::size_t>& order, gf::Residue p) {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    Mat out(n, n, p);
    std::vector<int> digits(dims.size(), 0);
    for (std::size_t src = 0; src < n; ++src) {
        std::size_t rem = src;
        for (std::size_t i = dims.size(); i-- > 0;) {
            digits[i] = static_cast<int>(rem % static_cast<std::size_t>(dims[i]));
            rem /= static_cast<std::size_t>(dims[i]);
        }
        std::size_t dst = 0;
        for (std::size_t k : order) dst = dst * static_cast<std::size_t>(dims[k]) + static_cast<std::size_t>(digits[k]);
        out.set(dst, src, 1);
    }
    return out;
}

}  // namespace

class Interp {
public:
    Interp(const Model& m, std::vector<CartEntry> scope, std::vector<ValPtr> rho)
        : m_(m), p_(static_cast<gf::Residue>(m.p_)), scope_(std::move(scope)), rho_(std::move(rho)) {}

    struct LinSlot {
        SlotId slot = 0;
        std::string name;
        Expr type;  // scoped at `depth`
        int depth = 0;
        int dim = 0;
    };

    void push(const std::string& name, const Expr& type, ValPtr v) {
        scope_.push_back({name, type});
        rho_.push_back(std::move(v));
    }
    void pop(std::size_t n = 1) {
        scope_.resize(scope_.size() - n);
        rho_.resize(rho_.size() - n);
    }
    int depth() const { return static_cast<int>(scope_.size()); }

    void bind_lin(SlotId slot, const std::string& name, const Expr& type) {
        zone_.push_back({slot, name, type, depth(), dim(type)});
    }
    void unbind_lin(std::size_t n = 1) { zone_.resize(zone_.size() - n); }

    // ---- types ------------------------------------------------------------------------

    Expr nf(const Expr& t) const { return normalize(*m_.sig_, t, m_.flags_); }

    Expr synth(const Expr& e) const {
        Ctx c;
        c.cart = scope_;
        for (const auto& z : zone_) c.lin.push_back({z.slot, z.name, shift(z.type, 0, depth() - z.depth)});
        Checker ck(*m_.sig_, m_.flags_);
        return nf(ck.infer_open(c, e));
    }

    Interp code_scope(const ValPtr& code) const { return Interp(m_, code->scope, code->env); }

    std::vector<ValPtr> enumerate(const Expr& type) {
        const Expr t = nf(type);
        switch (t.head()) {
            case Head::El: {
                const ValPtr c = eval(t.kid(0));
                if (c->kind == Val::Kind::BaseSet) {
                    std::vector<ValPtr> out;
                    for (int i = 0; i < c->n; ++i) out.push_back(elem(i));
                    return out;
                }
                if (c->kind == Val::Kind::Code) return code_scope(c).enumerate(c->expr);
                throw Error(ErrorKind::SortMismatch, "El of a non-code value " + show(c));
            }
            case Head::Pi: {
                const std::vector<ValPtr> doms = enumerate(t.kid(0));
                std::vector<std::vector<ValPtr>> cods;
                std::size_t total = 1;
                for (const auto& a : doms) {
                    push("x", t.kid(0), a);
                    cods.push_back(enumerate(t.kid(1)));
                    pop();
                    total *= cods.back().size();
                    if (total > m_.limits_.max_elements) {
                        throw Error(ErrorKind::SizeOverflow, "function space " + pretty(t) + " too large to enumerate");
                    }
                }
                std::vector<ValPtr> out;
                std::vector<std::size_t> pick(doms.size(), 0);
                for (std::size_t k = 0; k < total; ++k) {
                    auto v = std::make_shared<Val>();
                    v->kind = Val::Kind::Table;
                    v->dom = t.kid(0);
                    v->env = rho_;
                    v->scope = scope_;
                    for (std::size_t i = 0; i < doms.size(); ++i) v->graph.emplace_back(doms[i], cods[i][pick[i]]);
                    out.push_back(v);
                    for (std::size_t i = doms.size(); i-- > 0;) {
                        if (++pick[i] < cods[i].size()) break;
                        pick[i] = 0;
                    }
                }
                return out;
            }
            case Head::Sigma: {
                std::vector<ValPtr> out;
                for (const auto& a : enumerate(t.kid(0))) {
                    push("x", t.kid(0), a);
                    for (const auto& b : enumerate(t.kid(1))) out.push_back(pair(a, b));
                    pop();
                    if (out.size() > m_.limits_.max_elements) {
                        throw Error(ErrorKind::SizeOverflow, "pair type " + pretty(t) + " too large to enumerate");
                    }
                }
                return out;
            }
            case Head::Id: {
                const ValPtr a = eval(t.kid(1), t.kid(0));
                const ValPtr b = eval(t.kid(2), t.kid(0));
                if (val_equal(a, b, t.kid(0))) return {star()};
                return {};
            }
            case Head::MTy: {
                const int d = dim(t.kid(0));
                std::size_t count = 1;
                for (int i = 0; i < d; ++i) {
                    count *= p_;
                    if (count > m_.limits_.max_elements) {
                        throw Error(ErrorKind::SizeOverflow, "M-type " + pretty(t) + " too large to enumerate");
                    }
                }
                std::vector<ValPtr> out;
                for (std::size_t k = 0; k < count; ++k) {
                    std::vector<int> v(static_cast<std::size_t>(d));
                    std::size_t rem = k;
                    for (int i = d; i-- > 0;) {
                        v[static_cast<std::size_t>(i)] = static_cast<int>(rem % p_);
                        rem /= p_;
                    }
                    out.push_back(mvec(std::move(v)));
                }
                return out;
            }
            case Head::UnivU:
            case Head::UnivL:
                throw Error(ErrorKind::SizeOverflow, "a universe cannot be enumerated; give it in the basis");
            default:
                throw Error(ErrorKind::SortMismatch, "not a cartesian type: " + pretty(t));
        }
    }

    int dim(const Expr& type) {
        const Expr t = nf(type);
        long d = 0;
        switch (t.head()) {
            case Head::El: {
                const ValPtr c = eval(t.kid(0));
                if (c->kind == Val::Kind::BaseVec) return c->n;
                if (c->kind == Val::Kind::Code) return code_scope(c).dim(c->expr);
                throw Error(ErrorKind::SortMismatch, "El of a non-linear code " + show(c));
            }
            case Head::UnitI: return 1;
            case Head::ZeroTy:
            case Head::TopTy: return 0;
            case Head::Tensor:
            case Head::Lolli: d = static_cast<long>(dim(t.kid(0))) * dim(t.kid(1)); break;
            case Head::With:
            case Head::Plus: d = static_cast<long>(dim(t.kid(0))) + dim(t.kid(1)); break;
            case Head::LTy: d = static_cast<long>(enumerate(t.kid(0)).size()); break;
            case Head::Sqcap:
            case Head::Sqsubset:
                for (const auto& a : enumerate(t.kid(0))) {
                    push("x", t.kid(0), a);
                    d += dim(t.kid(1));
                    pop();
                }
                break;
            default: throw Error(ErrorKind::SortMismatch, "not a linear type: " + pretty(t));
        }
        if (d > m_.limits_.max_dim) throw Error(ErrorKind::SizeOverflow, "dimension of " + pretty(t) + " too large");
        return static_cast<int>(d);
    }

    bool val_equal(const ValPtr& x, const ValPtr& y, const Expr& type) {
        if (x == y) return true;
        const Expr t = nf(type);
        switch (t.head()) {
            case Head::Pi:
                for (const auto& a : enumerate(t.kid(0))) {
                    const ValPtr fx = apply(x, a);
                    const ValPtr fy = apply(y, a);
                    push("x", t.kid(0), a);
                    const bool same = val_equal(fx, fy, t.kid(1));
                    pop();
                    if (!same) return false;
                }
                return true;
            case Head::Sigma: {
                if (!val_equal(x->a, y->a, t.kid(0))) return false;
                push("x", t.kid(0), x->a);
                const bool same = val_equal(x->b, y->b, t.kid(1));
                pop();
                return same;
            }
            case Head::Id: return true;
            case Head::MTy: return x->vec == y->vec;
            case Head::El: {
                const ValPtr c = eval(t.kid(0));
                if (c->kind == Val::Kind::Code) return code_scope(c).val_equal(x, y, c->expr);
                return x->kind == y->kind && x->n == y->n;
            }
            case Head::UnivU:
            case Head::UnivL: return code_equal(x, y);
            default: throw Error(ErrorKind::SortMismatch, "cannot compare values of " + pretty(t));
        }
    }

    static bool code_equal(const ValPtr& x, const ValPtr& y) {
        if (x->kind != y->kind) return false;
        if (x->kind == Val::Kind::BaseSet || x->kind == Val::Kind::BaseVec) return x->n == y->n;
        if (x->kind == Val::Kind::Code) {
            if (!alpha_eq(x->expr, y->expr) || x->env.size() != y->env.size()) return false;
            for (std::size_t i = 0; i < x->env.size(); ++i) {
                if (x->env[i] != y->env[i]) return false;
            }
            return true;
        }
        return false;
    }

    int index_of(const ValPtr& x, const Expr& type) {
        const auto all = enumerate(type);
        for (std::size_t i = 0; i < all.size(); ++i) {
            if (val_equal(all[i], x, type)) return static_cast<int>(i);
        }
        throw Error(ErrorKind::DimMismatch, "value " + show(x) + " not found in " + pretty(type));
    }

    // ---- cartesian terms --------------------------------------------------------------

    ValPtr apply(const ValPtr& f, const ValPtr& a) {
        if (f->kind == Val::Kind::Closure) {
            Interp sub(m_, f->scope, f->env);
            sub.push("x", f->dom, a);
            return sub.eval(f->expr);
        }
        if (f->kind == Val::Kind::Table) {
            Interp sub(m_, f->scope, f->env);
            for (const auto& [k, v] : f->graph) {
                if (sub.val_equal(k, a, f->dom)) return v;
            }
            throw Error(ErrorKind::DimMismatch, "argument " + show(a) + " outside the table's domain");
        }
        throw Error(ErrorKind::SortMismatch, "applying a non-function value " + show(f));
    }

    ValPtr eval(const Expr& e, const Expr& expected = Expr()) {
        switch (e.head()) {
            case Head::CartVar: {
                const auto i = static_cast<std::size_t>(e->index);
                if (i >= rho_.size()) throw Error(ErrorKind::OutOfScope, "variable outside the environment");
                return rho_[rho_.size() - 1 - i];
            }
            case Head::Const: {
                const SigEntry* d = m_.sig_->find(e->name);
                if (!d) throw Error(ErrorKind::OutOfScope, "unknown constant " + e->name);
                Interp top(m_, {}, {});
                return top.eval(d->value, d->type);
            }
            case Head::Lam: {
                auto v = std::make_shared<Val>();
                v->kind = Val::Kind::Closure;
                v->expr = e.kid(1);
                v->dom = e.kid(0);
                v->env = rho_;
                v->scope = scope_;
                return v;
            }
            case Head::App: {
                const ValPtr f = eval(e.kid(0));
                Expr dom;
                if (contains_head(e.kid(1), Head::MIntro)) dom = synth(e.kid(0)).kid(0);
                return apply(f, eval(e.kid(1), dom));
            }
            case Head::PairC: {
                if (expected) {
                    const Expr t = nf(expected);
                    if (t.head() == Head::Sigma) {
                        return pair(eval(e.kid(0), t.kid(0)), eval(e.kid(1), instantiate(t.kid(1), e.kid(0))));
                    }
                }
                return pair(eval(e.kid(0)), eval(e.kid(1)));
            }
            case Head::Pr1: return eval(e.kid(0))->a;
            case Head::Pr2: return eval(e.kid(0))->b;
            case Head::SigElim1: {
                const Expr st = synth(e.kid(2));
                const ValPtr s = eval(e.kid(2));
                push("x", st.kid(0), s->a);
                push("y", st.kid(1), s->b);
                const ValPtr r = eval(e.kid(1));
                pop(2);
                return r;
            }
            case Head::Refl:
            case Head::Ua: return star();
            case Head::IdElim1: {
                const Expr a = synth(e.kid(2));
                push("z", a, eval(e.kid(2), a));
                const ValPtr r = eval(e.kid(1));
                pop();
                return r;
            }
            case Head::MIntro: {
                const Expr t = nf(expected ? expected : synth(e));
                if (t.head() != Head::MTy) throw Error(ErrorKind::SortMismatch, "sig at non-M type " + pretty(t));
                const Mat col = term(e.kid(0), t.kid(0), {});
                std::vector<int> v;
                for (std::size_t r = 0; r < col.rows(); ++r) v.push_back(static_cast<int>(col(r, 0)));
                return mvec(std::move(v));
            }
            default: break;
        }
        if (is_type_head(e.head())) {
            auto v = std::make_shared<Val>();
            v->kind = Val::Kind::Code;
            v->expr = e;
            v->env = rho_;
            v->scope = scope_;
            return v;
        }
        throw Error(ErrorKind::SortMismatch, std::string("cannot evaluate ") + head_name(e.head()) + " as a value");
    }

    // ---- linear terms ------------------------------------------------------------------

    const LinSlot& slot(SlotId s) const {
        for (auto it = zone_.rbegin(); it != zone_.rend(); ++it) {
            if (it->slot == s) return *it;
        }
        throw Error(ErrorKind::OutOfScope, "linear slot %" + std::to_string(s) + " not in the zone");
    }

    std::vector<int> dims_of(const std::vector<SlotId>& s) const {
        std::vector<int> d;
        for (SlotId x : s) d.push_back(slot(x).dim);
        return d;
    }

    std::size_t size_of(const std::vector<SlotId>& s) const {
        std::size_t n = 1;
        for (int d : dims_of(s)) n *= static_cast<std::size_t>(d);
        return n;
    }

    // Splits the source between a subterm checked first and the one after it.
    std::pair<std::vector<SlotId>, std::vector<SlotId>> split(const std::vector<SlotId>& src, const Expr& first,
                                                              const Expr& second) const {
        const auto fa = intersect(src, free_slots(first));
        const auto fb = intersect(src, free_slots(second));
        if (absorbs(first)) return {minus(src, fb), fb};
        if (absorbs(second)) return {fa, minus(src, fa)};
        if (!minus(minus(src, fa), fb).empty()) {
            throw Error(ErrorKind::DimMismatch, "zone entries left unused by a multiplicative split");
        }
        return {fa, fb};
    }

    // Matrix for `src` → ⟦left⟧ ⊗ ⟦right⟧ after moving the factors of `left` to the front.
    Mat front(const std::vector<SlotId>& src, const std::vector<SlotId>& left, const std::vector<SlotId>& right) const {
        std::vector<std::size_t> order;
        for (const auto* part : {&left, &right}) {
            for (SlotId x : *part) {
                order.push_back(static_cast<std::size_t>(std::find(src.begin(), src.end(), x) - src.begin()));
            }
        }
        return reorder(dims_of(src), order, p_);
    }

    // body ∘ (scrut ⊗ id_rest) ∘ reorder, where body reads scrut's target followed by `rest`.
    Mat cut(const std::vector<SlotId>& src, const std::vector<SlotId>& scrut_src, const Mat& scrut,
            const std::vector<SlotId>& rest, const Mat& body) const {
        const Mat mid = gf::kron(scrut, gf::idmat(size_of(rest), p_));
        return gf::matmul(body, gf::matmul(mid, front(src, scrut_src, rest)));
    }

    Mat term(const Expr& e, const Expr& expected, const std::vector<SlotId>& src) {
        const Expr t = expected ? nf(expected) : Expr();
        auto want = [&](Head h) {
            if (!t || t.head() != h) {
                throw Error(ErrorKind::SortMismatch,
                            std::string(head_name(e.head())) + " interpreted without its " + head_name(h) + " type");
            }
        };
        const std::size_t n = size_of(src);
        switch (e.head()) {
            case Head::LinVar: {
                if (src.size() != 1 || src[0] != static_cast<SlotId>(e->index)) {
                    throw Error(ErrorKind::DimMismatch, "variable interpreted over a different zone");
                }
                return gf::idmat(static_cast<std::size_t>(slot(src[0]).dim), p_);
            }
            case Head::Const: {
                const SigEntry* d = m_.sig_->find(e->name);
                if (!d) throw Error(ErrorKind::OutOfScope, "unknown constant " + e->name);
                SlotId next = max_slot(d->value) + 1;
                for (const auto& z : zone_) next = std::max(next, z.slot + 1);
                return term(freshen_bound(d->value, &next), expected ? expected : d->type, src);
            }
            case Head::TopIntro: return gf::zeros(0, n, p_);
            case Head::ZeroElim: {
                const int d = dim(expected ? expected : synth(e));
                return gf::zeros(static_cast<std::size_t>(d), n, p_);
            }
            case Head::UnitIntro: {
                if (!src.empty()) throw Error(ErrorKind::DimMismatch, "unit over a nonempty zone");
                return gf::idmat(1, p_);
            }
            case Head::TenPair: {
                const Expr tt = t && t.head() == Head::Tensor ? t : Expr();
                const auto [sa, sb] = split(src, e.kid(0), e.kid(1));
                const Mat a = term(e.kid(0), tt ? tt.kid(0) : Expr(), sa);
                const Mat b = term(e.kid(1), tt ? tt.kid(1) : Expr(), sb);
                return gf::matmul(gf::kron(a, b), front(src, sa, sb));
            }
            case Head::TenLet: {
                const Expr st = synth(e.kid(0));
                const auto [ss, rest] = split(src, e.kid(0), e.kid(1));
                const Mat s = term(e.kid(0), st, ss);
                const SlotId u = e->lin_binders[1][0];
                const SlotId v = e->lin_binders[1][1];
                bind_lin(u, "u", st.kid(0));
                bind_lin(v, "v", st.kid(1));
                std::vector<SlotId> inner{u, v};
                inner.insert(inner.end(), rest.begin(), rest.end());
                const Mat body = term(e.kid(1), expected ? expected : Expr(), inner);
                unbind_lin(2);
                return cut(src, ss, s, rest, body);
            }
            case Head::UnitLet: {
                const auto [ss, rest] = split(src, e.kid(0), e.kid(1));
                const Mat s = term(e.kid(0), atom(Head::UnitI), ss);
                const Mat body = term(e.kid(1), expected, rest);
                return cut(src, ss, s, rest, body);
            }
            case Head::LinLam: {
                const Expr ft = t ? t : synth(e);
                const SlotId u = e->lin_binders[1][0];
                bind_lin(u, "u", e.kid(0));
                const int da = slot(u).dim;
                std::vector<SlotId> inner{u};
                inner.insert(inner.end(), src.begin(), src.end());
                const Mat body = term(e.kid(1), ft.kid(1), inner);
                unbind_lin();
                const std::size_t db = body.rows();
                Mat out(static_cast<std::size_t>(da) * db, n, p_);
                for (std::size_t a = 0; a < static_cast<std::size_t>(da); ++a) {
                    for (std::size_t b = 0; b < db; ++b) {
                        for (std::size_t s = 0; s < n; ++s) out.set(a * db + b, s, body(b, a * n + s));
                    }
                }
                return out;
            }
            case Head::LinApp: {
                const Expr ft = synth(e.kid(0));
                const auto [sf, sa] = split(src, e.kid(0), e.kid(1));
                const Mat f = term(e.kid(0), ft, sf);
                const Mat a = term(e.kid(1), ft.kid(0), sa);
                const std::size_t da = static_cast<std::size_t>(dim(ft.kid(0)));
                const std::size_t db = static_cast<std::size_t>(dim(ft.kid(1)));
                Mat ev(db, da * db * da, p_);
                for (std::size_t x = 0; x < da; ++x) {
                    for (std::size_t b = 0; b < db; ++b) ev.set(b, (x * db + b) * da + x, 1);
                }
                return gf::matmul(ev, gf::matmul(gf::kron(f, a), front(src, sf, sa)));
            }
            case Head::WithPair: {
                const Expr wt = t ? t : synth(e);
                return gf::vstack(term(e.kid(0), wt.kid(0), src), term(e.kid(1), wt.kid(1), src));
            }
            case Head::WithFst:
            case Head::WithSnd: {
                const Expr wt = synth(e.kid(0));
                const Mat w = term(e.kid(0), wt, src);
                const std::size_t da = static_cast<std::size_t>(dim(wt.kid(0)));
                if (e.head() == Head::WithFst) return gf::submatrix(w, 0, 0, da, n);
                return gf::submatrix(w, da, 0, w.rows() - da, n);
            }
            case Head::Inl:
            case Head::Inr: {
                want(Head::Plus);
                const bool left = e.head() == Head::Inl;
                const Mat a = term(e.kid(0), t.kid(left ? 0 : 1), src);
                const Mat z = gf::zeros(static_cast<std::size_t>(dim(t.kid(left ? 1 : 0))), n, p_);
                return left ? gf::vstack(a, z) : gf::vstack(z, a);
            }
            case Head::PlusCase: {
                const Expr ct = expected ? expected : Expr();
                const Head sh = e.kid(0).head();
                if (sh == Head::Inl || sh == Head::Inr) {
                    // An injection carries no summand type; only the chosen branch is needed.
                    const std::size_t i = sh == Head::Inl ? 1 : 2;
                    const Expr inner = e.kid(0).kid(0);
                    const Expr at = synth(inner);
                    const auto [ss, rest] = split(src, inner, e.kid(i));
                    const Mat s = term(inner, at, ss);
                    const SlotId u = e->lin_binders[i][0];
                    bind_lin(u, "u", at);
                    std::vector<SlotId> body_src{u};
                    body_src.insert(body_src.end(), rest.begin(), rest.end());
                    const Mat body = term(e.kid(i), ct, body_src);
                    unbind_lin();
                    return cut(src, ss, s, rest, body);
                }
                const Expr st = synth(e.kid(0));
                const auto [ss, rest] = split(src, e.kid(0), withpair(e.kid(1), e.kid(2)));
                const Mat s = term(e.kid(0), st, ss);
                Mat branches[2];
                for (int i = 0; i < 2; ++i) {
                    const SlotId u = e->lin_binders[static_cast<std::size_t>(i + 1)][0];
                    bind_lin(u, "u", st.kid(static_cast<std::size_t>(i)));
                    std::vector<SlotId> inner{u};
                    inner.insert(inner.end(), rest.begin(), rest.end());
                    branches[i] = term(e.kid(static_cast<std::size_t>(i + 1)), ct, inner);
                    unbind_lin();
                }
                return cut(src, ss, s, rest, gf::hstack(branches[0], branches[1]));
            }
            case Head::SqLam: {
                const Expr ft = t ? t : synth(e);
                Mat out(0, n, p_);
                for (const auto& a : enumerate(e.kid(0))) {
                    push("x", e.kid(0), a);
                    out = gf::vstack(out, term(e.kid(1), ft.kid(1), src));
                    pop();
                }
                return out;
            }
            case Head::SqApp: {
                if (auto direct = spine(e, expected, src)) return *direct;
                const Expr ft = synth(e.kid(0));
                const Mat f = term(e.kid(0), ft, src);
                const ValPtr a = eval(e.kid(1), ft.kid(0));
                std::size_t offset = 0;
                std::size_t rows = 0;
                bool found = false;
                for (const auto& x : enumerate(ft.kid(0))) {
                    push("x", ft.kid(0), x);
                    const auto d = static_cast<std::size_t>(dim(ft.kid(1)));
                    pop();
                    if (!found && val_equal(x, a, ft.kid(0))) {
                        rows = d;
                        found = true;
                    } else if (!found) {
                        offset += d;
                    }
                }
                if (!found) throw Error(ErrorKind::DimMismatch, "index outside the ⊓ domain");
                return gf::submatrix(f, offset, 0, rows, n);
            }
            case Head::SqPair: {
                want(Head::Sqsubset);
                const ValPtr s = eval(e.kid(0), t.kid(0));
                const Mat b = term(e.kid(1), instantiate(t.kid(1), e.kid(0)), src);
                Mat out(0, n, p_);
                for (const auto& x : enumerate(t.kid(0))) {
                    push("x", t.kid(0), x);
                    const auto d = static_cast<std::size_t>(dim(t.kid(1)));
                    pop();
                    out = gf::vstack(out, val_equal(x, s, t.kid(0)) ? b : gf::zeros(d, n, p_));
                }
                return out;
            }
            case Head::SqLet: {
                if (e.kid(0).head() == Head::SqPair) {
                    // {a, t} carries no family; the body is read at x := a only.
                    const Expr a = e.kid(0).kid(0), t_in = e.kid(0).kid(1);
                    const Expr xt = synth(a), yt = synth(t_in);
                    const auto [ss, rest] = split(src, t_in, e.kid(1));
                    const Mat s = term(t_in, yt, ss);
                    const SlotId y = e->lin_binders[1][0];
                    std::vector<SlotId> inner{y};
                    inner.insert(inner.end(), rest.begin(), rest.end());
                    push("x", xt, eval(a, xt));
                    bind_lin(y, "y", shift(yt, 0, 1));
                    const Mat body = term(e.kid(1), expected ? shift(expected, 0, 1) : Expr(), inner);
                    unbind_lin();
                    pop();
                    return cut(src, ss, s, rest, body);
                }
                const Expr st = synth(e.kid(0));
                const auto [ss, rest] = split(src, e.kid(0), e.kid(1));
                const Mat s = term(e.kid(0), st, ss);
                const SlotId y = e->lin_binders[1][0];
                const Expr ct = expected ? shift(expected, 0, 1) : Expr();
                std::vector<SlotId> inner{y};
                inner.insert(inner.end(), rest.begin(), rest.end());
                Mat body;
                bool first = true;
                for (const auto& a : enumerate(st.kid(0))) {
                    push("x", st.kid(0), a);
                    bind_lin(y, "y", st.kid(1));
                    const Mat blk = term(e.kid(1), ct, inner);
                    unbind_lin();
                    pop();
                    body = first ? blk : gf::hstack(body, blk);
                    first = false;
                }
                if (first) body = gf::zeros(static_cast<std::size_t>(dim(expected ? expected : synth(e))), 0, p_);
                return cut(src, ss, s, rest, body);
            }
            case Head::LIntro: {
                const Expr lt = t && t.head() == Head::LTy ? t : synth(e);
                if (!src.empty()) throw Error(ErrorKind::DimMismatch, "lift over a nonempty zone");
                const ValPtr a = eval(e.kid(0), lt.kid(0));
                const int size = static_cast<int>(enumerate(lt.kid(0)).size());
                return gf::basis_column(static_cast<std::size_t>(size), static_cast<std::size_t>(index_of(a, lt.kid(0))), p_);
            }
            case Head::LLet: {
                const Expr st = synth(e.kid(0));
                const auto [ss, rest] = split(src, e.kid(0), e.kid(1));
                const Mat s = term(e.kid(0), st, ss);
                const Expr ct = expected ? shift(expected, 0, 1) : Expr();
                Mat body;
                bool first = true;
                for (const auto& a : enumerate(st.kid(0))) {
                    push("x", st.kid(0), a);
                    const Mat blk = term(e.kid(1), ct, rest);
                    pop();
                    body = first ? blk : gf::hstack(body, blk);
                    first = false;
                }
                if (first) body = gf::zeros(static_cast<std::size_t>(dim(expected ? expected : synth(e))), 0, p_);
                return cut(src, ss, s, rest, body);
            }
            case Head::MElim: {
                if (!src.empty()) throw Error(ErrorKind::DimMismatch, "unsig over a nonempty zone");
                const ValPtr m = eval(e.kid(0));
                Mat col(m->vec.size(), 1, p_);
                for (std::size_t i = 0; i < m->vec.size(); ++i) col.set(i, 0, m->vec[i]);
                return col;
            }
            case Head::SigElim2: {
                const Expr st = synth(e.kid(2));
                const ValPtr s = eval(e.kid(2), st);
                push("x", st.kid(0), s->a);
                push("y", st.kid(1), s->b);
                const std::size_t fixed = head_shape(e.head()).size();
                std::size_t bound = 0;
                for (std::size_t i = fixed; i < e.arity(); i += 2, ++bound) {
                    bind_lin(static_cast<SlotId>(e.kid(i)->index), "w", e.kid(i + 1));
                }
                const Mat r = term(e.kid(1), instantiate(shift(e.kid(0), 1, 2), pair_c(cvar(1), cvar(0))), src);
                unbind_lin(bound);
                pop(2);
                return r;
            }
            case Head::IdElim2: {
                const Expr a = synth(e.kid(2));
                push("z", a, eval(e.kid(2), a));
                auto diagonal = [](const Expr& fam) {
                    return instantiate(shift(fam, 3, 1), {cvar(0), cvar(0), refl(cvar(0))});
                };
                const std::size_t fixed = head_shape(e.head()).size();
                std::size_t bound = 0;
                for (std::size_t i = fixed; i < e.arity(); i += 2, ++bound) {
                    bind_lin(static_cast<SlotId>(e.kid(i)->index), "w", diagonal(e.kid(i + 1)));
                }
                const Mat r = term(e.kid(1), diagonal(e.kid(0)), src);
                unbind_lin(bound);
                pop();
                return r;
            }
            default:
                throw Error(ErrorKind::SortMismatch, std::string("cannot interpret ") + head_name(e.head()) + " linearly");
        }
    }

    // A ⊓-application spine whose head is a ⊓-abstraction (possibly behind a constant) binds
    // the argument values directly; the domain need not be enumerable then.
    std::optional<Mat> spine(const Expr& e, const Expr& expected, const std::vector<SlotId>& src) {
        std::vector<Expr> args;
        Expr head = e;
        while (head.head() == Head::SqApp) {
            args.insert(args.begin(), head.kid(1));
            head = head.kid(0);
        }
        if (head.head() == Head::Const) {
            const SigEntry* d = m_.sig_->find(head->name);
            if (!d || !d->linear) return std::nullopt;
            SlotId next = max_slot(d->value) + 1;
            for (const auto& z : zone_) next = std::max(next, z.slot + 1);
            head = freshen_bound(d->value, &next);
        }
        Expr body = head;
        std::size_t depth_in = 0;
        for (; depth_in < args.size() && body.head() == Head::SqLam; ++depth_in) body = body.kid(1);
        if (depth_in < args.size()) return std::nullopt;
        const Expr want = expected ? expected : synth(e);
        // The arguments live in the outer scope; shift each past the binders pushed so far.
        Expr lam = head;
        for (std::size_t i = 0; i < args.size(); ++i) {
            const Expr arg = shift(args[i], 0, static_cast<int>(i));
            push("x", lam.kid(0), eval(arg, lam.kid(0)));
            lam = lam.kid(1);
        }
        const Mat r = term(body, shift(want, 0, static_cast<int>(args.size())), src);
        pop(args.size());
        return r;
    }

    std::vector<LinSlot>& zone() { return zone_; }

private:
    const Model& m_;
    gf::Residue p_;
    std::vector<CartEntry> scope_;
    std::vector<ValPtr> rho_;
    std::vector<LinSlot> zone_;
};

Model::Model(const Signature& sig, int p, EqFlags flags, Limits limits)
    : sig_(&sig), p_(p), flags_(flags), limits_(limits) {
    if (p < 2 || !gf::is_prime(static_cast<std::uint32_t>(p))) {
        throw Error(ErrorKind::Usage, "the field size must be prime, got " + std::to_string(p));
    }
}

namespace {

ValPtr large_value(Interp& in, const Expr& type, const std::string& name, const Basis& basis) {
    auto it = basis.find(name);
    if (it == basis.end()) throw Error(ErrorKind::MissingBasis, "no basis value for '" + name + "'");
    const BasisValue& bv = it->second;
    auto code_of = [&](Head univ, int k) -> ValPtr {
        if (univ == Head::UnivU) return base_set(k);
        return base_vec(k);
    };
    if (type.head() == Head::UnivU || type.head() == Head::UnivL) {
        if (bv.sizes.size() != 1) throw Error(ErrorKind::MissingBasis, "basis for '" + name + "' must give one size");
        return code_of(type.head(), bv.sizes[0]);
    }
    if (type.head() == Head::Pi && (type.kid(1).head() == Head::UnivU || type.kid(1).head() == Head::UnivL)) {
        const auto dom = in.enumerate(type.kid(0));
        if (dom.size() != bv.sizes.size()) {
            throw Error(ErrorKind::MissingBasis, "basis for '" + name + "' needs " + std::to_string(dom.size()) +
                                                     " entries, has " + std::to_string(bv.sizes.size()));
        }
        auto v = std::make_shared<Val>();
        v->kind = Val::Kind::Table;
        v->dom = type.kid(0);
        for (std::size_t i = 0; i < dom.size(); ++i) v->graph.emplace_back(dom[i], code_of(type.kid(1).head(), bv.sizes[i]));
        return v;
    }
    throw Error(ErrorKind::MissingBasis, "unsupported large type for '" + name + "'");
}

}  // namespace

InterpEnv Model::interp_ctx(const Ctx& ctx, const Basis& basis) const {
    InterpEnv env;
    env.ctx = ctx;
    env.p = p_;
    std::vector<std::vector<ValPtr>> points{{}};
    std::vector<CartEntry> scope;
    for (const auto& c : ctx.cart) {
        std::vector<std::vector<ValPtr>> next;
        for (const auto& rho : points) {
            Interp in(*this, scope, rho);
            if (is_large(c.type)) {
                ValPtr v = large_value(in, c.type, c.name, basis);
                if (v->kind == Val::Kind::Table) {
                    auto w = std::make_shared<Val>(*v);
                    w->env = rho;
                    w->scope = scope;
                    v = w;
                }
                auto ext = rho;
                ext.push_back(v);
                next.push_back(std::move(ext));
                continue;
            }
            for (const auto& v : in.enumerate(c.type)) {
                auto ext = rho;
                ext.push_back(v);
                next.push_back(std::move(ext));
                if (next.size() > limits_.max_points) {
                    throw Error(ErrorKind::SizeOverflow, "context has more than " + std::to_string(limits_.max_points) +
                                                             " points");
                }
            }
        }
        points = std::move(next);
        scope.push_back(c);
    }
    env.points = std::move(points);
    env.zone.base = env.base();
    for (const auto& rho : env.points) {
        Interp in(*this, ctx.cart, rho);
        int d = 1;
        for (const auto& l : ctx.lin) d *= in.dim(l.type);
        env.zone.dims.push_back(d);
    }
    return env;
}

VecFam Model::interp_lin_type(const InterpEnv& env, const Expr& type) const {
    VecFam out;
    out.base = env.base();
    for (const auto& rho : env.points) {
        Interp in(*this, env.ctx.cart, rho);
        out.dims.push_back(in.dim(type));
    }
    return out;
}

LinMorFam Model::interp_lin_term(const InterpEnv& env, const Expr& e, const Expr& type) const {
    LinMorFam out;
    out.base = env.base();
    std::vector<SlotId> src;
    for (const auto& l : env.ctx.lin) src.push_back(l.slot);
    for (const auto& rho : env.points) {
        Interp in(*this, env.ctx.cart, rho);
        for (const auto& l : env.ctx.lin) in.bind_lin(l.slot, l.name, l.type);
        Mat m = in.term(e, type, src);
        const auto rows = static_cast<std::size_t>(in.dim(type));
        if (m.rows() != rows || m.cols() != in.size_of(src)) {
            throw Error(ErrorKind::DimMismatch, "interpretation has shape " + std::to_string(m.rows()) + "x" +
                                                    std::to_string(m.cols()) + ", expected " + std::to_string(rows) +
                                                    "x" + std::to_string(in.size_of(src)));
        }
        out.mats.push_back(std::move(m));
    }
    return out;
}

std::vector<ValPtr> Model::interp_cart_term(const InterpEnv& env, const Expr& e) const {
    std::vector<ValPtr> out;
    for (const auto& rho : env.points) {
        Interp in(*this, env.ctx.cart, rho);
        out.push_back(in.eval(e));
    }
    return out;
}

bool Model::check_soundness(const Ctx& ctx, const Expr& a, const Expr& b, const Expr& type, const Basis& basis,
                            std::string* why) const {
    const InterpEnv env = interp_ctx(ctx, basis);
    Ctx bare = ctx;
    bare.lin.clear();
    const bool linear = sort_of(type, bare, sig_->lookup()) == Sort::LinType;
    if (linear) {
        const LinMorFam ma = interp_lin_term(env, a, type);
        const LinMorFam mb = interp_lin_term(env, b, type);
        for (std::size_t i = 0; i < env.points.size(); ++i) {
            if (!(ma.mats[i] == mb.mats[i])) {
                if (why) *why = "matrices differ at point " + std::to_string(i);
                return false;
            }
        }
        return true;
    }
    for (std::size_t i = 0; i < env.points.size(); ++i) {
        Interp in(*this, ctx.cart, env.points[i]);
        if (!in.val_equal(in.eval(a, type), in.eval(b, type), type)) {
            if (why) *why = "values differ at point " + std::to_string(i);
            return false;
        }
    }
    return true;
}

std::vector<ValPtr> Model::enumerate(const InterpEnv& env, std::size_t point, const Expr& type) const {
    Interp in(*this, env.ctx.cart, env.points.at(point));
    return in.enumerate(type);
}

int Model::dim(const InterpEnv& env, std::size_t point, const Expr& type) const {
    Interp in(*this, env.ctx.cart, env.points.at(point));
    return in.dim(type);
}

ValPtr Model::eval(const InterpEnv& env, std::size_t point, const Expr& e, const Expr& type) const {
    Interp in(*this, env.ctx.cart, env.points.at(point));
    return in.eval(e, type);
}

bool Model::val_equal(const InterpEnv& env, std::size_t point, const ValPtr& x, const ValPtr& y,
                      const Expr& type) const {
    Interp in(*this, env.ctx.cart, env.points.at(point));
    return in.val_equal(x, y, type);
}

int Model::index_of(const InterpEnv& env, std::size_t point, const ValPtr& x, const Expr& type) const {
    Interp in(*this, env.ctx.cart, env.points.at(point));
    return in.index_of(x, type);
}

}  // namespace ldtt::fam
