#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "ldtt/equality.hpp"
#include "ldtt/expr.hpp"
#include "ldtt/gf.hpp"
#include "ldtt/signature.hpp"

// Set-indexed families over FinVect(GF(p)): contexts are finite sets of environments,
// cartesian types are finite sets per point, linear types are dimensions per point and
// linear terms are matrices per point from the zone (Kronecker, left-major) to the type.
namespace ldtt::fam {

struct Val;
using ValPtr = std::shared_ptr<const Val>;

/// Semantic value of a cartesian term at one point.
struct Val {
    enum class Kind { Elem, Pair, Star, MVec, Closure, Table, BaseSet, BaseVec, Code };
    Kind kind = Kind::Star;
    int n = 0;                      // Elem index, BaseSet size, BaseVec dimension
    std::vector<int> vec;           // MVec coordinates
    ValPtr a, b;                    // Pair components
    Expr expr;                      // Closure body (under one binder) or Code type expression
    Expr dom;                       // Closure / Table domain type, scoped like `env`
    std::vector<ValPtr> env;        // environment, outer-first
    std::vector<CartEntry> scope;   // types of `env`
    std::vector<std::pair<ValPtr, ValPtr>> graph;  // Table
};

ValPtr elem(int i);
ValPtr pair(ValPtr a, ValPtr b);
ValPtr star();
ValPtr mvec(std::vector<int> v);
ValPtr base_set(int n);
ValPtr base_vec(int d);
std::string show(const ValPtr& v);

struct FinSet {
    int size = 0;
    std::vector<std::string> labels;  // optional
};

/// Dimension per point of the base.
struct VecFam {
    FinSet base;
    std::vector<int> dims;
};

struct LinMorFam {
    FinSet base;
    std::vector<gf::Mat> mats;
};

/// Values for the large entries of a context (universe-valued variables).
struct BasisValue {
    enum class Kind { Set, Vec, Sets };
    Kind kind = Kind::Set;
    std::vector<int> sizes;  // Set: {n}; Vec: one dimension per element of the domain (or {d}); Sets: sizes
};
using Basis = std::map<std::string, BasisValue>;

/// Reads {"name": {"set": n} | {"vec": [d...]} | {"sets": [n...]}, ...}. Throws Usage.
Basis basis_from_json(const std::string& text);

struct InterpEnv {
    Ctx ctx;
    int p = 2;
    std::vector<std::vector<ValPtr>> points;  // one environment (outer-first) per element of ⟦Γ⟧
    VecFam zone;                              // ⟦Ξ⟧ = ⊗ of the linear entries
    FinSet base() const { return {static_cast<int>(points.size()), {}}; }
};

struct Limits {
    std::size_t max_points = 10000;   // |⟦Γ⟧|
    std::size_t max_elements = 4096;  // size of any enumerated cartesian type
    int max_dim = 4096;
};

class Model {
public:
    Model(const Signature& sig, int p = 2, EqFlags flags = {}, Limits limits = {});

    /// Enumerates ⟦Γ⟧. Large entries take their value from the basis. Throws MissingBasis / SizeOverflow.
    InterpEnv interp_ctx(const Ctx& ctx, const Basis& basis) const;

    VecFam interp_lin_type(const InterpEnv& env, const Expr& type) const;
    /// Matrix per point from ⟦Ξ⟧ to ⟦type⟧.
    LinMorFam interp_lin_term(const InterpEnv& env, const Expr& e, const Expr& type) const;
    /// Value per point of a cartesian term.
    std::vector<ValPtr> interp_cart_term(const InterpEnv& env, const Expr& e) const;

    /// Both sides interpret equally at every point (matrices for linear types, values otherwise).
    bool check_soundness(const Ctx& ctx, const Expr& a, const Expr& b, const Expr& type, const Basis& basis,
                         std::string* why = nullptr) const;

    // Access at a single point of an interpreted context.
    std::vector<ValPtr> enumerate(const InterpEnv& env, std::size_t point, const Expr& type) const;
    int dim(const InterpEnv& env, std::size_t point, const Expr& type) const;
    ValPtr eval(const InterpEnv& env, std::size_t point, const Expr& e, const Expr& type = Expr()) const;
    bool val_equal(const InterpEnv& env, std::size_t point, const ValPtr& x, const ValPtr& y, const Expr& type) const;
    int index_of(const InterpEnv& env, std::size_t point, const ValPtr& x, const Expr& type) const;

    int prime() const noexcept { return p_; }
    const Signature& signature() const noexcept { return *sig_; }

private:
    const Signature* sig_;
    int p_;
    EqFlags flags_;
    Limits limits_;
    friend class Interp;
};

/// Deterministic values for every large entry of `ctx`: universes get `set_size` / `dim`, families
/// over an enumerable domain get sizes 1 + (i + variant) mod set_size (resp. dim) at element i.
Basis auto_basis(const Model& m, const Ctx& ctx, int set_size = 2, int dim = 2, int variant = 0);

/// True if the given type is "large" (a universe or a family into one) and so comes from the basis.
bool is_large(const Expr& type);

// ---- L ⊣ M at the level of hom-sets --------------------------------------------------

/// A point-wise set family A and vector family B over a base of the same size.
struct AdjInstance {
    std::vector<int> set_sizes;  // |A(γ)|
    std::vector<int> dims;       // dim B(γ)
};

struct AdjCount {
    std::size_t lin_homs = 0;   // |𝓛_Γ(LA, B)| by enumeration
    std::size_t cart_homs = 0;  // |𝒯_Γ(A, MB)| by enumeration
    bool bijective = false;     // transpose is injective and onto
};

/// Enumerates both hom-sets and the transpose map between them.
AdjCount enumerate_adjunction(const AdjInstance& inst, int p);

/// Transpose of a family of matrices F(A(γ)) → B(γ) to functions A(γ) → M B(γ) (columns).
std::vector<std::vector<std::vector<int>>> transpose_lin(const std::vector<gf::Mat>& m);
std::vector<gf::Mat> transpose_cart(const std::vector<std::vector<std::vector<int>>>& f, const std::vector<int>& dims,
                                    int p);

/// Naturality of the transpose in A (precomposition with h : A' → A pointwise) and in B
/// (postcomposition with g : B → B') for one sampled morphism pair.
bool adjunction_natural(const std::vector<gf::Mat>& m, const std::vector<std::vector<int>>& h,
                        const std::vector<gf::Mat>& g, int p);

}  // namespace ldtt::fam
