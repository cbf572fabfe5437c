#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "ldtt/gf.hpp"

// Diagram model: finite groupoids as contexts, groupoid-valued diagrams as cartesian types,
// FinVect(GF(p))-valued diagrams as linear types. Kan extensions interpret ⊏ and ⊓.
namespace ldtt::gpd {

struct Arrow {
    int src = 0;
    int dst = 0;
    bool operator==(const Arrow&) const = default;
};

/// Finite groupoid with explicit composition, identity and inverse tables.
class FinGroupoid {
public:
    FinGroupoid() = default;

    /// Tabulates `compose(g, f)` (g after f) on every composable pair, derives identities and
    /// inverses, then audits. Throws InvalidStructure.
    template <class Compose>
    static FinGroupoid build(int objects, std::vector<Arrow> mors, Compose&& compose);

    int objects() const noexcept { return objects_; }
    std::size_t size() const noexcept { return mors_.size(); }
    const Arrow& arrow(int m) const { return mors_[static_cast<std::size_t>(m)]; }
    int src(int m) const { return arrow(m).src; }
    int dst(int m) const { return arrow(m).dst; }
    int id(int obj) const { return ident_[static_cast<std::size_t>(obj)]; }
    int inv(int m) const { return inv_[static_cast<std::size_t>(m)]; }
    /// g ∘ f; requires dst f = src g.
    int comp(int g, int f) const;
    const std::vector<int>& out(int obj) const { return out_[static_cast<std::size_t>(obj)]; }
    std::vector<int> hom(int a, int b) const;
    bool discrete() const noexcept { return mors_.size() == static_cast<std::size_t>(objects_); }

    /// Closure, associativity on every composable triple, units and two-sided inverses.
    void audit() const;

    std::vector<std::string> labels;  // optional object names

private:
    void index();
    int objects_ = 0;
    std::vector<Arrow> mors_;
    std::vector<std::vector<int>> out_;
    std::vector<std::size_t> pos_;   // position of a morphism within out_[src]
    std::vector<std::size_t> base_;  // per f: offset of the row {g ∘ f : g ∈ out(dst f)}
    std::vector<int> table_;
    std::vector<int> ident_;
    std::vector<int> inv_;
};

using GpdPtr = std::shared_ptr<const FinGroupoid>;

GpdPtr terminal();
GpdPtr discrete(int n);
/// n objects, exactly one morphism between any two.
GpdPtr codiscrete(int n);
/// One-object groupoid from a multiplication table (row-major, element 0 the unit).
GpdPtr group(int order, const std::vector<int>& mult);
GpdPtr cyclic(int n);
GpdPtr klein();
GpdPtr s3();
GpdPtr product(const GpdPtr& a, const GpdPtr& b);
GpdPtr coproduct(const GpdPtr& a, const GpdPtr& b);

/// {"objects": n, "morphisms": [[src, dst], ...], "comp": [[g, f, g∘f], ...]} with every
/// composable pair listed. Throws Usage on malformed input, InvalidStructure on bad tables.
GpdPtr groupoid_from_json(const std::string& text);

struct Functor {
    GpdPtr src, dst;
    std::vector<int> ob;
    std::vector<int> mor;
    bool operator==(const Functor& o) const { return ob == o.ob && mor == o.mor; }
};

/// Object/morphism maps agree, identities and composites preserved. Throws InvalidStructure.
void validate(const Functor& f);
Functor identity(const GpdPtr& g);
/// g ∘ f. Throws BaseMismatch.
Functor compose(const Functor& g, const Functor& f);
/// The unique functor to the terminal groupoid.
Functor to_terminal(const GpdPtr& g);

// ---- Diagrams ---------------------------------------------------------------------------

/// Γ → Gpd: a groupoid per object and a strict functor per morphism.
struct GpdDiagram {
    GpdPtr base;
    std::vector<GpdPtr> fibers;
    std::vector<Functor> action;
};

/// Γ → FinVect(GF(p)): a dimension per object and a matrix dim dst × dim src per morphism.
struct VectDiagram {
    GpdPtr base;
    int p = 2;
    std::vector<int> dims;
    std::vector<gf::Mat> mats;
    bool operator==(const VectDiagram& o) const { return dims == o.dims && mats == o.mats && p == o.p; }
};

struct NatTrans {
    VectDiagram src, tgt;
    std::vector<gf::Mat> comps;
};

/// Functoriality on the full tables. Throws InvalidStructure.
void validate(const GpdDiagram& d);
/// Functoriality and invertibility. Throws InvalidStructure / DimMismatch.
void validate(const VectDiagram& d);
bool is_natural(const NatTrans& t);

GpdDiagram constant(const GpdPtr& base, const GpdPtr& fiber);
VectDiagram constant(const GpdPtr& base, int p, int dim);
VectDiagram zero_diagram(const GpdPtr& base, int p);
/// F*D = D ∘ F. Throws BaseMismatch.
VectDiagram precompose(const Functor& f, const VectDiagram& d);
GpdDiagram precompose(const Functor& f, const GpdDiagram& d);
NatTrans precompose(const Functor& f, const NatTrans& t);
VectDiagram tensor(const VectDiagram& a, const VectDiagram& b);
NatTrans identity(const VectDiagram& d);
/// s ∘ t (vertical).
NatTrans vcompose(const NatTrans& s, const NatTrans& t);
/// Basis of the space of natural transformations a ⇒ b (each element a component list).
std::vector<std::vector<gf::Mat>> nat_basis(const VectDiagram& a, const VectDiagram& b);

// ---- Grothendieck construction ------------------------------------------------------------

/// Γ.A with objects (γ, a) and morphisms (u, α : A(u)(a) → a').
struct Total {
    GpdPtr gpd;
    Functor proj;
    std::vector<std::pair<int, int>> obj;  // (γ, a) per object
    std::vector<std::pair<int, int>> mor;  // (u, α) per morphism
    std::map<std::pair<int, int>, int> obj_index;
    std::map<std::pair<int, int>, int> mor_index;
    int object(int gamma, int a) const;
    int morphism(int u, int alpha) const;
};

/// Throws SizeOverflow above `max_morphisms`.
Total grothendieck(const GpdDiagram& a, std::size_t max_morphisms = 200000);

/// A section of Γ.A → Γ: an object per γ and, per u : γ → γ', a fiber morphism A(u)(s γ) → s γ'.
struct Section {
    std::vector<int> ob;
    std::vector<int> mor;
    bool operator==(const Section&) const = default;
};

void validate(const GpdDiagram& a, const Section& s);
Functor section_functor(const Total& t, const GpdDiagram& a, const Section& s);
/// Every section, in lexicographic order of (ob, mor). Throws SizeOverflow past `limit`.
std::vector<Section> all_sections(const GpdDiagram& a, std::size_t limit = 100000);

// ---- Kan extensions -------------------------------------------------------------------------

/// Comma category (p ↓ b) or (b ↓ p), materialized.
struct Comma {
    std::vector<std::pair<int, int>> obj;      // (a, u)
    std::vector<std::tuple<int, int, int>> mor;  // (from, to, f)
};
Comma comma_under(const Functor& p, int b);  // objects u : p a → b
Comma comma_over(const Functor& p, int b);   // objects u : b → p a

/// Lan_p F with its unit η : F ⇒ p* Lan_p F.
struct Lan {
    VectDiagram ext;
    NatTrans unit;
    std::vector<Comma> commas;
    std::vector<std::vector<std::size_t>> offsets;  // block offset of each comma object
    std::vector<gf::Mat> quot;                      // ⊕ F(a) → Lan(b), surjective
    std::vector<gf::Mat> lift;                      // right inverse of quot
    std::vector<gf::Mat> rel;                       // relation matrix, quot · rel = 0
};
/// Ran_p F with its counit ε : p* Ran_p F ⇒ F.
struct Ran {
    VectDiagram ext;
    NatTrans counit;
    std::vector<Comma> commas;
    std::vector<std::vector<std::size_t>> offsets;
    std::vector<gf::Mat> incl;  // basis of the limit inside ⊕ F(a)
};

Lan lan(const Functor& p, const VectDiagram& f);
Ran ran(const Functor& p, const VectDiagram& f);
/// Lan_p α and Ran_p α for α : F ⇒ F'.
NatTrans lan_map(const Functor& p, const NatTrans& alpha);
NatTrans ran_map(const Functor& p, const NatTrans& alpha);
/// ε : Lan_p p* G ⇒ G and η : G ⇒ Ran_p p* G.
NatTrans lan_counit(const Functor& p, const VectDiagram& g);
NatTrans ran_unit(const Functor& p, const VectDiagram& g);

struct TriangleReport {
    bool lan_left = false;   // ε Lan ∘ Lan η = id
    bool lan_right = false;  // p*ε ∘ η p* = id
    bool ran_left = false;   // Ran ε ∘ η Ran = id
    bool ran_right = false;  // ε p* ∘ p* η = id
    bool ok() const { return lan_left && lan_right && ran_left && ran_right; }
};
TriangleReport check_triangles(const Functor& p, const VectDiagram& f, const VectDiagram& g);

struct HomBijection {
    std::size_t lhs = 0;  // |[A](F, p*G)|
    std::size_t rhs = 0;  // |[B](Lan F, G)|
    bool bijective = false;
};
/// Exhaustive over all component families (entries in GF(p)), filtered for naturality.
HomBijection check_adjunction(const Functor& p, const VectDiagram& f, const VectDiagram& g,
                              std::uint64_t max_families = 1u << 22);

/// Strict pullback of π : Γ.A → Γ along f : Δ → Γ, realized as Δ.(A∘f) with q : Δ.(A∘f) → Γ.A.
struct PullbackSquare {
    Functor f;
    GpdDiagram a;
    Total top;     // Γ.A
    Total pulled;  // Δ.(A∘f)
    Functor q;
};
PullbackSquare pullback_square(const GpdDiagram& a, const Functor& f);
/// Checks the universal property on objects and morphisms. Throws NotAPullback.
void verify_pullback(const PullbackSquare& sq);

/// Canonical Lan_{π'} q* F → f* Lan_π F and f* Ran_π F → Ran_{π'} q* F, both natural and invertible.
bool check_beck_chevalley(const PullbackSquare& sq, const VectDiagram& f, std::string* why = nullptr);
/// Canonical Lan_p(p*Ξ ⊗ F) → Ξ ⊗ Lan_p F natural and invertible.
bool check_frobenius(const Functor& p, const VectDiagram& xi, const VectDiagram& f, std::string* why = nullptr);

// ---- Identity types ---------------------------------------------------------------------------

/// Id_A as the arrow category: a discrete fiber Hom_{A(γ)}(a, a') over each (γ, a, a').
struct IdModel {
    GpdDiagram a;
    Total ga;       // Γ.A
    GpdDiagram a2;  // π*A over Γ.A
    Total gaa;      // Γ.A.A
    GpdDiagram id;  // over Γ.A.A
    Total gaai;     // Γ.A.A.Id_A
    Functor refl;   // r_A : Γ.A → Γ.A.A.Id_A
    Functor diag;   // v_A : Γ.A → Γ.A.A
};
IdModel arrow_category(const GpdDiagram& a);

/// Identities between two sections: Id_A pulled back along ⟨M, N⟩ : Γ → Γ.A.A.
GpdDiagram id_over(const IdModel& m, const Section& M, const Section& N);
/// P⁺ ∘ N⁺ ∘ M : Γ → Γ.A.A.Id_A for a section P of id_over(M, N).
Functor mnp(const IdModel& m, const Section& M, const Section& N, const Section& P);
Functor refl_at(const IdModel& m, const Section& M);  // r_A ∘ M
/// φ_γ : r_A(M γ) → ⟨M, N, P⟩(γ), with the naturality check.
std::vector<int> phi(const IdModel& m, const Section& M, const Section& N, const Section& P);
bool phi_natural(const IdModel& m, const Section& M, const Section& N, const Section& P);

/// ĉ_[M,N,P] = C_φ ∘ c M ∘ Ξ_φ⁻¹ for c : Ξ∘r_A ⇒ C∘r_A (components over Γ.A).
NatTrans c_hat(const IdModel& m, const VectDiagram& xi, const VectDiagram& c_diag, const std::vector<gf::Mat>& c,
               const Section& M, const Section& N, const Section& P);
/// c ∘ M : Ξ∘r_A∘M ⇒ C∘r_A∘M.
NatTrans c_at(const IdModel& m, const VectDiagram& xi, const VectDiagram& c_diag, const std::vector<gf::Mat>& c,
              const Section& M);
/// Refl section of id_over(M, M).
Section refl_section(const IdModel& m, const Section& M);

/// Γ = 1, A = BZ/2, Ξ trivial and C the product of the sign characters of both arrow components,
/// over GF(p). Reports ĉ along refl and along the nontrivial loop.
struct SignExample {
    gf::Mat c_refl;
    gf::Mat c_loop;
    gf::Mat c_m;
};
SignExample bz2_sign_example(int p = 3);

// ---- Linear universe and univalence ----------------------------------------------------------

/// The core of FinVect(GF(p)) truncated to dimensions 0..cap: all invertible matrices.
struct Universe {
    int p = 2;
    int cap = 2;
    GpdPtr core;
    std::vector<gf::Mat> mats;  // per morphism
    int lookup(const gf::Mat& m) const;  // morphism id of an invertible matrix
};
Universe linear_universe(int p, int cap);

/// 𝕃 over Γ (constant at the truncated core) and its identity type.
struct UaSetting {
    Universe u;
    GpdPtr base;
    IdModel ids;
};
UaSetting ua_setting(const GpdPtr& base, int p, int cap);

Section code_of(const UaSetting& s, const VectDiagram& el);
VectDiagram el_of(const UaSetting& s, const Section& code);

/// A natural iso El(A) ≅ El(B) as a section of Id_𝕃 over ⟨A, B⟩. Throws NotInvertibleComponent.
Section ua_forward(const UaSetting& s, const NatTrans& iso);
NatTrans ua_backward(const UaSetting& s, const VectDiagram& a, const VectDiagram& b, const Section& path);

struct UaReport {
    std::size_t isos = 0;      // natural isos by exhaustive component search
    std::size_t sections = 0;  // sections of Id_𝕃 over ⟨A, B⟩
    bool roundtrip = false;    // backward ∘ forward = id and forward ∘ backward = id
};
UaReport ua_roundtrip(const UaSetting& s, const VectDiagram& a, const VectDiagram& b);

/// M[El(A), El(A)]: the discrete groupoid of all endomorphisms at each γ, acted on by conjugation.
GpdDiagram m_endo(const VectDiagram& a);
/// σ(k) as a section of m_endo for a natural endomorphism k.
Section sigma(const VectDiagram& a, const std::vector<gf::Mat>& k);

/// The L-ua-I premises: f : El A ⊸ El B, g, h : El B ⊸ El A, p : σ(g f) = σ(id_A), q : σ(f h) = σ(id_B).
/// Discreteness of the endomorphism groupoids forces g f = id and f h = id; returns f as a natural iso.
/// Throws InvalidStructure if a premise section does not live over the stated endpoints.
NatTrans ua_discharge(const VectDiagram& a, const VectDiagram& b, const NatTrans& f, const NatTrans& g,
                      const NatTrans& h, const Section& p, const Section& q);

// ---- Random instances -------------------------------------------------------------------------

using Rng = std::mt19937_64;

/// Disjoint union of connected groupoids G × codiscrete(k) with G among 1, Z/2, Z/3, Z/4, Z/2×Z/2, S3.
GpdPtr random_groupoid(Rng& rng, int max_objects = 3, int max_morphisms = 8);
Functor random_functor(Rng& rng, const GpdPtr& a, const GpdPtr& b);
VectDiagram random_vect(Rng& rng, const GpdPtr& base, int p, int max_dim);
/// Discrete fibers of size ≤ max_fiber with a permutation action, or a constant BZ/2 fiber.
GpdDiagram random_gpd_diagram(Rng& rng, const GpdPtr& base, int max_fiber = 2);
NatTrans random_nat(Rng& rng, const VectDiagram& a, const VectDiagram& b);
/// A random natural isomorphism a ≅ b' where b' is a transported along random invertible components.
std::pair<VectDiagram, NatTrans> random_iso(Rng& rng, const VectDiagram& a);

// ---- template ---------------------------------------------------------------------------------

template <class Compose>
FinGroupoid FinGroupoid::build(int objects, std::vector<Arrow> mors, Compose&& compose) {
    FinGroupoid g;
    g.objects_ = objects;
    g.mors_ = std::move(mors);
    g.index();
    for (std::size_t f = 0; f < g.mors_.size(); ++f) {
        for (int h : g.out_[static_cast<std::size_t>(g.mors_[f].dst)]) {
            g.table_[g.base_[f] + g.pos_[static_cast<std::size_t>(h)]] = compose(h, static_cast<int>(f));
        }
    }
    g.ident_.assign(static_cast<std::size_t>(objects), -1);
    g.inv_.assign(g.mors_.size(), -1);
    for (int o = 0; o < objects; ++o) {
        for (int m : g.out_[static_cast<std::size_t>(o)]) {
            if (g.dst(m) != o) continue;
            bool unit = true;
            for (int h : g.out_[static_cast<std::size_t>(o)]) unit = unit && g.comp(h, m) == h;
            if (unit) {
                g.ident_[static_cast<std::size_t>(o)] = m;
                break;
            }
        }
    }
    for (std::size_t f = 0; f < g.mors_.size(); ++f) {
        const int s = g.mors_[f].src;
        const int t = g.mors_[f].dst;
        if (g.ident_[static_cast<std::size_t>(s)] < 0) continue;
        for (int h : g.out_[static_cast<std::size_t>(t)]) {
            if (g.dst(h) == s && g.comp(h, static_cast<int>(f)) == g.ident_[static_cast<std::size_t>(s)]) {
                g.inv_[f] = h;
                break;
            }
        }
    }
    g.audit();
    return g;
}

}  // namespace ldtt::gpd
