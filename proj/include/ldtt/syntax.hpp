#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ldtt/error.hpp"
#include "ldtt/expr.hpp"

namespace ldtt {

// ---- tokens ----------------------------------------------------------------------------

enum class Tok {
    Ident, Keyword,
    LParen, RParen, LBrack, RBrack, LBrace, RBrace, LAngle, RAngle,
    Comma, Semi, Colon, Define, Dot, Arrow, Lolli, Star, StarStar, Amp, OPlus, At, Bar, EqEq,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceSpan span;
};

const char* token_name(Tok t);
bool is_keyword(const std::string& word);

/// Throws LexError.
std::vector<Token> lex(const std::string& source, const std::string& file = "<input>");

// ---- surface syntax --------------------------------------------------------------------

/// Named surface expression. `tag` is the surface form ("var", "app", "fun", "let2", ...),
/// `names` its bound or referenced identifiers, `kids` its subexpressions.
struct SExpr {
    std::string tag;
    std::vector<std::string> names;
    std::vector<std::shared_ptr<SExpr>> kids;
    SourceSpan span;
};
using SExprPtr = std::shared_ptr<SExpr>;

struct SurfaceBind {
    std::string name;
    SExprPtr type;
    bool linear = false;
    SourceSpan span;
};

enum class DeclKind { Def, Check, EqCheck, Flag };

struct SurfaceDecl {
    DeclKind kind = DeclKind::Def;
    std::string name;  // def name, or flag name for pragmas
    std::vector<SurfaceBind> params;
    SExprPtr body;      // def body, check subject, left side of checkeq
    SExprPtr rhs;       // right side of checkeq
    SExprPtr expected;  // declared type
    SourceSpan span;
};

/// Throws LexError / ParseError (the message lists the expected tokens).
std::vector<SurfaceDecl> parse(const std::string& source, const std::string& file = "<input>");
/// Parses a single expression (whole input).
SExprPtr parse_expr(const std::string& source, const std::string& file = "<input>");

// ---- resolution ------------------------------------------------------------------------

struct ResolvedDecl {
    DeclKind kind = DeclKind::Def;
    std::string name;
    Ctx ctx;
    Expr type;
    Expr body;
    Expr rhs;
    bool linear = false;  // def whose declared type is linear
    SourceSpan span;
};

/// Sort oracle for top-level names already resolved (name -> sort of the constant and its type).
class Resolver {
public:
    Resolver() = default;

    /// Resolves declarations in order; each def becomes visible to later ones.
    std::vector<ResolvedDecl> resolve(const std::vector<SurfaceDecl>& decls);
    ResolvedDecl resolve_decl(const SurfaceDecl& d);

    /// Resolves an expression in a given context (names from ctx entries).
    Expr resolve_expr(const SExprPtr& e, const Ctx& ctx, bool type_position = false);

    /// Makes a top-level name known (with its closed type and whether it is linear).
    void declare(const std::string& name, const Expr& type, bool linear);
    bool declared(const std::string& name) const { return globals_.count(name) != 0; }

private:
    struct Global {
        Expr type;
        bool linear = false;
    };
    std::map<std::string, Global> globals_;
    friend class ResolveScope;
};

/// Closed type and value a definition contributes to the signature.
struct DefEntry {
    Expr type;
    Expr value;
    bool linear = false;
};
DefEntry abstract_def(const ResolvedDecl& d);

// ---- printing --------------------------------------------------------------------------

/// Surface rendering; cartesian names are innermost-last, linear names keyed by slot.
std::string pretty(const Expr& e, const std::vector<std::string>& cart_names = {},
                   const std::map<SlotId, std::string>& lin_names = {});
std::string pretty(const Expr& e, const Ctx& ctx);
std::string pretty_decl(const ResolvedDecl& d);

}  // namespace ldtt
