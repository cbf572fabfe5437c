#pragma once

#include <map>
#include <vector>

#include "ldtt/expr.hpp"

namespace ldtt {

/// b[a/x] where x is CartVar `idx` of e's scope. `a` lives in the scope below x; indices
/// above x drop by one. Throws SortMismatch if `a` is syntactically linear.
Expr subst(const Expr& e, const Expr& a, int idx);

/// Instantiates the innermost `args.size()` binders of `body`; args are outermost first and
/// scoped in the context outside those binders.
Expr instantiate(const Expr& body, const std::vector<Expr>& args);
inline Expr instantiate(const Expr& body, const Expr& a) { return instantiate(body, std::vector<Expr>{a}); }

/// Replaces free occurrences of linear `slot` by `t` (a linear term in the same cartesian
/// scope as e). Bound slots of e that clash with free slots of t are renamed.
Expr subst_lin(const Expr& e, SlotId slot, const Expr& t);

/// Renames free slots according to `m` (bound slots are untouched).
Expr rename_free_slots(const Expr& e, const std::map<SlotId, SlotId>& m);

/// Renames every bound slot to a fresh id >= *next, advancing *next.
Expr freshen_bound(const Expr& e, SlotId* next);

}  // namespace ldtt
