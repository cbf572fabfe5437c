#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ldtt/equality.hpp"
#include "ldtt/error.hpp"
#include "ldtt/kernel.hpp"
#include "ldtt/signature.hpp"
#include "ldtt/syntax.hpp"

namespace ldtt {

struct DeclReport {
    DeclKind kind = DeclKind::Def;
    std::string name;  // def name; "check"/"checkeq" subjects are numbered
    CheckReport report;
    SourceSpan span;
};

struct SourceReport {
    std::vector<DeclReport> decls;
    /// Lex, parse or resolution failure; declarations before it are still reported.
    std::optional<Error> front_error;
    Signature sig;
    EqFlags flags;

    bool ok() const;
    std::size_t failures() const;
};

/// Parses, resolves and checks a whole file. Pragmas update the flags for the declarations
/// that follow them; each accepted def enters the signature.
SourceReport check_source(const std::string& text, const std::string& file = "<input>", EqFlags flags = {},
                          std::size_t budget = kDefaultBudget, bool tracing = false);

/// Session over a growing signature, for checking several files (e.g. a prelude first).
class Session {
public:
    explicit Session(EqFlags flags = {}, std::size_t budget = kDefaultBudget) : flags_(flags), budget_(budget) {}

    SourceReport load(const std::string& text, const std::string& file = "<input>", bool tracing = false);

    const Signature& signature() const noexcept { return sig_; }
    const EqFlags& flags() const noexcept { return flags_; }
    Resolver& resolver() noexcept { return resolver_; }

    /// Parses and resolves an expression against the loaded definitions.
    Expr expr(const std::string& text, const Ctx& ctx = {}, bool type_position = false);

private:
    EqFlags flags_;
    std::size_t budget_;
    Signature sig_;
    Resolver resolver_;
};

}  // namespace ldtt
