#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ldtt/error.hpp"

namespace ldtt {

/// Identifier of a linear-zone slot. Linear binders bind slots by id; ids are stable
/// under exchange of the zone.
using SlotId = std::int32_t;

enum class Head : std::uint8_t {
    CartVar,
    LinVar,
    Const,  // reference to a top-level definition
    // cartesian formers
    Pi, Lam, App,
    Sigma, PairC, Pr1, Pr2, SigElim1, SigElim2,
    Id, Refl, IdElim1, IdElim2,
    UnivU, UnivL, El,
    // linear dependent formers
    Sqcap, SqLam, SqApp,
    Sqsubset, SqPair, SqLet,
    // intuitionistic linear logic
    Tensor, TenPair, TenLet,
    UnitI, UnitIntro, UnitLet,
    Lolli, LinLam, LinApp,
    With, WithPair, WithFst, WithSnd,
    Plus, Inl, Inr, PlusCase,
    ZeroTy, ZeroElim,
    TopTy, TopIntro,
    // modalities
    LTy, LIntro, LLet,
    MTy, MIntro, MElim,
    Ua,
};

const char* head_name(Head h);

enum class Sort : std::uint8_t { CartType, LinType, CartTerm, LinTerm };

const char* sort_name(Sort s);

/// Binding shape of one child position: how many cartesian variables and how many linear
/// slots the child sees bound.
struct ChildShape {
    int cart = 0;
    int lin = 0;
};

/// Fixed child shapes of a head. SigElim2 and IdElim2 additionally take a trailing list of
/// (LinVar, zone type family) pairs; see `zone_pair_shape`.
const std::vector<ChildShape>& head_shape(Head h);
bool has_zone_pairs(Head h);
/// Binders over which the zone type families of SigElim2 (2) / IdElim2 (3) are stated.
int zone_family_binders(Head h);

struct Node;

/// Immutable, shareable core expression.
class Expr {
public:
    Expr() = default;
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    const Node& operator*() const { return *node_; }
    const Node* operator->() const { return node_.get(); }
    explicit operator bool() const noexcept { return static_cast<bool>(node_); }
    const Node* get() const noexcept { return node_.get(); }

    Head head() const;
    const Expr& kid(std::size_t i) const;
    std::size_t arity() const;

private:
    std::shared_ptr<const Node> node_;
};

struct Node {
    Head head;
    std::vector<Expr> kids;
    /// Slots bound in each child (size == kids.size()).
    std::vector<std::vector<SlotId>> lin_binders;
    /// Pretty-printing hints for the cartesian binders of each child (may be empty).
    std::vector<std::vector<std::string>> cart_hints;
    /// CartVar: de Bruijn index. LinVar: slot id.
    std::int32_t index = 0;
    /// Const: definition name. LinVar: optional name hint.
    std::string name;

    int cart_binders(std::size_t child) const;
    int lin_binder_count(std::size_t child) const { return static_cast<int>(lin_binders[child].size()); }
};

inline Head Expr::head() const { return node_->head; }
inline const Expr& Expr::kid(std::size_t i) const { return node_->kids[i]; }
inline std::size_t Expr::arity() const { return node_->kids.size(); }

// ---- construction -------------------------------------------------------------------

/// Generic constructor; validates child count and linear-binder counts against the head.
Expr make(Head h, std::vector<Expr> kids, std::vector<std::vector<SlotId>> lin_binders = {},
          std::vector<std::vector<std::string>> hints = {});

Expr cvar(int index);
Expr lvar(SlotId slot, std::string hint = {});
Expr constant(std::string name);
Expr atom(Head h);  // nullary heads: UnivU, UnivL, UnitI, UnitIntro, ZeroTy, TopTy, TopIntro

// Convenience builders for the common formers. Binding children are given already in the
// extended scope (de Bruijn), linear binders by slot.
Expr pi(Expr dom, Expr cod, std::string hint = "x");
Expr lam(Expr dom, Expr body, std::string hint = "x");
Expr app(Expr f, Expr a);
Expr sigma(Expr a, Expr b, std::string hint = "x");
Expr pair_c(Expr a, Expr b);
Expr pr1(Expr p);
Expr pr2(Expr p);
Expr id_type(Expr a, Expr m, Expr n);
Expr refl(Expr a);
Expr el(Expr code);
Expr sqcap(Expr a, Expr b, std::string hint = "x");
Expr sqlam(Expr a, Expr b, std::string hint = "x");
Expr sqapp(Expr t, Expr a);
Expr sqsubset(Expr a, Expr b, std::string hint = "x");
Expr sqpair(Expr s, Expr b);
Expr sqlet(Expr scrut, SlotId y, Expr body, std::string xhint = "x");
Expr tensor(Expr a, Expr b);
Expr tenpair(Expr a, Expr b);
Expr tenlet(Expr scrut, SlotId u, SlotId v, Expr body);
Expr unitlet(Expr scrut, Expr body);
Expr lolli(Expr a, Expr b);
Expr linlam(Expr dom, SlotId u, Expr body);
Expr linapp(Expr f, Expr a);
Expr with(Expr a, Expr b);
Expr withpair(Expr a, Expr b);
Expr withfst(Expr p);
Expr withsnd(Expr p);
Expr plus(Expr a, Expr b);
Expr inl(Expr a);
Expr inr(Expr a);
Expr pluscase(Expr scrut, SlotId u, Expr left, SlotId v, Expr right);
Expr zeroelim(Expr s);
Expr lty(Expr a);
Expr lintro(Expr a);
Expr llet(Expr scrut, Expr body, std::string hint = "x");
Expr mty(Expr b);
Expr mintro(Expr b);
Expr melim(Expr t);

/// Same node with some children replaced (binders and hints kept).
Expr with_kids(const Expr& e, std::vector<Expr> kids);
Expr with_binders(const Expr& e, std::vector<Expr> kids, std::vector<std::vector<SlotId>> lin_binders);

// ---- contexts and judgments ----------------------------------------------------------

struct CartEntry {
    std::string name;
    Expr type;  // scoped over the preceding prefix
};

struct LinEntry {
    SlotId slot = 0;
    std::string name;
    Expr type;  // scoped over all of `cart`
};

/// Split context Γ;Ξ.
struct Ctx {
    std::vector<CartEntry> cart;
    std::vector<LinEntry> lin;

    std::size_t depth() const noexcept { return cart.size(); }
    /// Type of CartVar `index`, shifted into the full context.
    Expr cart_type(int index) const;
    const LinEntry* find_lin(SlotId slot) const;
    Ctx extended(std::string name, Expr type) const;
};

enum class JudgmentKind { CtxOk, CartTypeOk, LinTypeOk, CartTermHasType, LinTermHasType, CartEq, LinEq };

const char* judgment_kind_name(JudgmentKind k);

struct Judgment {
    JudgmentKind kind = JudgmentKind::CtxOk;
    Ctx ctx;
    std::vector<Expr> subjects;
};

/// What sort computation needs to know about a top-level definition.
struct ConstInfo {
    Sort sort = Sort::CartTerm;
    Expr type;  // closed
};

using ConstLookup = std::function<std::optional<ConstInfo>(const std::string&)>;

// ---- operations ----------------------------------------------------------------------

/// Unique syntactic sort. Throws OutOfScope / IllFormedNode.
Sort sort_of(const Expr& e, const Ctx& ctx, const ConstLookup& consts = {});

/// Structural equality under de Bruijn / slot-bijection for bound slots.
bool alpha_eq(const Expr& a, const Expr& b);

/// Moves free cartesian indices >= cutoff by `amount`. Throws NegativeIndex on underflow.
Expr shift(const Expr& e, int cutoff, int amount);

/// Number of free occurrences of `slot`; additive branches (&, ⊕) count as their maximum.
int linear_occurrences(const Expr& e, SlotId slot);

bool has_free_cart(const Expr& e, int index);
/// Occurrences of CartVar `index` (free, adjusted under binders).
int count_free_cart(const Expr& e, int index);
std::set<SlotId> free_slots(const Expr& e);
/// Largest slot id occurring anywhere (bound or free), or -1.
SlotId max_slot(const Expr& e);
bool mentions_lin_var(const Expr& e);
std::size_t expr_size(const Expr& e);

/// Is this head a type former (sort CartType or LinType regardless of children)?
bool is_type_head(Head h);
bool is_lin_type_head(Head h);
bool is_cart_type_head(Head h);

}  // namespace ldtt
