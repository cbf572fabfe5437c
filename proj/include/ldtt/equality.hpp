#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ldtt/expr.hpp"
#include "ldtt/signature.hpp"

namespace ldtt {

/// Optional equations, switched on per file by pragmas.
struct EqFlags {
    bool nat_l = false;      // hoist L-lets out of linear elimination frames
    bool eta_sigma = false;  // (pr1 p, pr2 p) == p
    bool eta_sub = false;    // uniqueness for ⊏ and ⊗, with their commuting conversions
    bool ua = false;         // ua typing rule and its computation rule

    bool operator==(const EqFlags&) const = default;
};

inline constexpr std::size_t kDefaultBudget = 100000;

struct RedexStep {
    std::string rule;
    std::vector<int> path;  // child indices from the root
};

struct RedexTrace {
    std::vector<RedexStep> steps;
};

struct Reduced {
    Expr term;
    RedexTrace trace;
};

/// One leftmost-outermost step (hoisting rules take priority), or nullopt at normal form.
std::optional<Expr> reduce_step(const Signature& sig, const Expr& e, const EqFlags& flags, RedexStep* step = nullptr);

/// Normal form. Throws NonTermination when more than `budget` steps are needed.
Reduced reduce(const Signature& sig, const Ctx& ctx, const Expr& e, const EqFlags& flags,
               std::size_t budget = kDefaultBudget);

Expr normalize(const Signature& sig, const Expr& e, const EqFlags& flags, std::size_t budget = kDefaultBudget);

/// Re-applies a trace; throws InvalidStructure if a step does not match its rule.
Expr replay(const Signature& sig, const Expr& e, const RedexTrace& trace, const EqFlags& flags);

/// All one-step reducts (any position, any applicable rule), for confluence testing.
std::vector<Expr> one_step_reducts(const Signature& sig, const Expr& e, const EqFlags& flags);

/// Type-directed definitional equality at `type` (may be null for types themselves).
bool equal(const Signature& sig, const Ctx& ctx, const Expr& type, const Expr& a, const Expr& b,
           const EqFlags& flags, std::size_t budget = kDefaultBudget);

}  // namespace ldtt
