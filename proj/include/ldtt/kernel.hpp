#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ldtt/equality.hpp"
#include "ldtt/expr.hpp"
#include "ldtt/signature.hpp"

namespace ldtt {

enum class SlotStatus { Live, Consumed, Slack };

struct ZoneEntry {
    SlotId slot = 0;
    std::string name;
    Expr type;
    SlotStatus status = SlotStatus::Live;
};

/// Usage state of a linear zone; entry types are scoped over the whole cartesian context.
struct LinZoneState {
    std::vector<ZoneEntry> entries;

    static LinZoneState from(const Ctx& ctx);
    const ZoneEntry* find(SlotId slot) const;
    /// Every slot consumed or slacked.
    bool exhausted() const;
};

struct CheckReport {
    Judgment judgment;
    bool accepted = false;
    std::optional<ErrorKind> error;
    std::string reason;
    std::optional<SourceSpan> span;
    std::vector<std::string> trace;  // typing rules applied, in checking order
};

/// Bidirectional checker for all cartesian and linear formers. The zone is threaded through
/// subterms (leftover style); cartesian subterms see it frozen.
class Checker {
public:
    explicit Checker(const Signature& sig, EqFlags flags = {}, std::size_t budget = kDefaultBudget);

    void set_flags(const EqFlags& flags) { flags_ = flags; }
    const EqFlags& flags() const noexcept { return flags_; }
    void set_tracing(bool on) { tracing_ = on; }

    /// ⊢ Γ; Ξ ctxt
    CheckReport check_ctx(const Ctx& ctx);
    /// Γ ⊢ T type, or Γ ⊢ T linear, by the head of T.
    CheckReport check_type(const Ctx& ctx, const Expr& type);
    /// Γ ⊢ a : T or Γ; Ξ ⊢ t : T (by sort); the zone of ctx must be used up exactly.
    CheckReport check_term(const Ctx& ctx, const Expr& e, const Expr& type);
    /// Leftover form: returns the zone after checking without demanding exhaustion.
    std::pair<CheckReport, LinZoneState> check_term(const Ctx& ctx, LinZoneState zone, const Expr& e,
                                                    const Expr& type);
    /// Infers the type of a term (cartesian or linear); zone must be used up.
    std::pair<CheckReport, Expr> infer(const Ctx& ctx, const Expr& e);
    /// Type of a subterm whose zone need not be used up (e.g. a scrutinee). Throws on failure.
    Expr infer_open(const Ctx& ctx, const Expr& e);

    /// Γ ⊢ a ≡ b : T (both sides checked first).
    CheckReport check_equal(const Ctx& ctx, const Expr& a, const Expr& b, const Expr& type);

    /// Lookup adapter for sort_of.
    ConstLookup consts() const { return sig_->lookup(); }
    const Signature& signature() const noexcept { return *sig_; }

private:
    const Signature* sig_;
    EqFlags flags_;
    std::size_t budget_;
    bool tracing_ = false;
};

}  // namespace ldtt
