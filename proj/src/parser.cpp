#include <array>
#include <cctype>
#include <initializer_list>

#include "ldtt/syntax.hpp"

namespace ldtt {

namespace {

const std::set<std::string>& keywords() {
    static const std::set<std::string> kw = {
        "def",   "check", "checkeq", "pragma", "fun",    "lfun",   "cfun", "Pi",  "Sigma", "cap", "sub",
        "let",   "be",    "in",      "case",   "of",     "inl",    "inr",  "absurd", "unit", "top", "U",
        "L",     "Unit",  "Top",     "Zero",   "El",     "Lt",     "Mt",   "Id",  "refl",  "sig", "unsig",
        "lift",  "fst",   "snd",     "pr1",    "pr2",    "split1", "split2", "J1", "J2",   "using", "ua",
    };
    return kw;
}

const std::set<std::string>& unary_keywords() {
    static const std::set<std::string> kw = {"sig", "unsig", "lift", "refl", "fst", "snd", "pr1",
                                             "pr2", "inl",   "inr",  "El",   "Lt",  "Mt",  "absurd"};
    return kw;
}

const std::set<std::string>& atom_keywords() {
    static const std::set<std::string> kw = {"U", "L", "Unit", "Top", "Zero", "unit", "top"};
    return kw;
}

const std::set<std::string>& binder_keywords() {
    static const std::set<std::string> kw = {"fun", "lfun", "cfun", "Pi", "Sigma", "cap", "sub"};
    return kw;
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

}  // namespace

const char* token_name(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Keyword: return "keyword";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrack: return "'['";
        case Tok::RBrack: return "']'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::LAngle: return "'<'";
        case Tok::RAngle: return "'>'";
        case Tok::Comma: return "','";
        case Tok::Semi: return "';'";
        case Tok::Colon: return "':'";
        case Tok::Define: return "':='";
        case Tok::Dot: return "'.'";
        case Tok::Arrow: return "'->'";
        case Tok::Lolli: return "'-o'";
        case Tok::Star: return "'*'";
        case Tok::StarStar: return "'**'";
        case Tok::Amp: return "'&'";
        case Tok::OPlus: return "'(+)'";
        case Tok::At: return "'@'";
        case Tok::Bar: return "'|'";
        case Tok::EqEq: return "'=='";
        case Tok::End: return "end of input";
    }
    return "?";
}

bool is_keyword(const std::string& word) { return keywords().count(word) != 0; }

std::vector<Token> lex(const std::string& src, const std::string& file) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto span_here = [&](std::size_t len) { return SourceSpan{file, i, i + len, line, col}; };
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        if (ident_start(c)) {
            std::size_t j = i;
            while (j < src.size() && ident_char(src[j])) ++j;
            std::string word = src.substr(i, j - i);
            Token t{is_keyword(word) ? Tok::Keyword : Tok::Ident, word, span_here(j - i)};
            out.push_back(t);
            advance(j - i);
            continue;
        }
        struct Sym {
            const char* text;
            Tok kind;
        };
        static const std::array<Sym, 23> syms = {{
            {"(+)", Tok::OPlus}, {":=", Tok::Define}, {"->", Tok::Arrow}, {"-o", Tok::Lolli},
            {"**", Tok::StarStar}, {"==", Tok::EqEq},  {"(", Tok::LParen},  {")", Tok::RParen},
            {"[", Tok::LBrack},  {"]", Tok::RBrack},  {"{", Tok::LBrace},  {"}", Tok::RBrace},
            {"<", Tok::LAngle},  {">", Tok::RAngle},  {",", Tok::Comma},   {";", Tok::Semi},
            {":", Tok::Colon},   {".", Tok::Dot},     {"*", Tok::Star},    {"&", Tok::Amp},
            {"@", Tok::At},      {"|", Tok::Bar},     {"", Tok::End},
        }};
        bool matched = false;
        for (const auto& s : syms) {
            const std::string text = s.text;
            if (text.empty()) break;
            if (src.compare(i, text.size(), text) == 0) {
                // "-o" must not swallow the start of an identifier such as "-ops"
                if (s.kind == Tok::Lolli && i + 2 < src.size() && ident_char(src[i + 2])) continue;
                out.push_back(Token{s.kind, text, span_here(text.size())});
                advance(text.size());
                matched = true;
                break;
            }
        }
        if (!matched) {
            throw Error(ErrorKind::LexError, std::string("unexpected character '") + c + "'", span_here(1));
        }
    }
    out.push_back(Token{Tok::End, "", SourceSpan{file, src.size(), src.size(), line, col}});
    return out;
}

// ---- parser ----------------------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    std::vector<SurfaceDecl> file() {
        std::vector<SurfaceDecl> out;
        while (peek().kind != Tok::End) out.push_back(decl());
        return out;
    }

    SExprPtr whole_expr() {
        SExprPtr e = expr();
        expect(Tok::End);
        return e;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int tele_ = 0;  // > 0 while parsing telescope types: application stops before "x y :"

    const Token& peek(std::size_t k = 0) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    bool at(Tok k) const { return peek().kind == k; }
    bool at_kw(const char* w) const { return peek().kind == Tok::Keyword && peek().text == w; }

    [[noreturn]] void fail(const std::string& expected) const {
        const Token& t = peek();
        const std::string found = t.kind == Tok::End ? "end of input" : "'" + t.text + "'";
        throw Error(ErrorKind::ParseError, "expected " + expected + ", found " + found, t.span);
    }

    Token expect(Tok k) {
        if (!at(k)) fail(token_name(k));
        return toks_[pos_++];
    }
    void expect_kw(const char* w) {
        if (!at_kw(w)) fail(std::string("'") + w + "'");
        ++pos_;
    }
    std::string ident() {
        if (!at(Tok::Ident)) fail("identifier");
        return toks_[pos_++].text;
    }

    SourceSpan span_from(const SourceSpan& start) const {
        SourceSpan s = start;
        const Token& last = toks_[pos_ == 0 ? 0 : pos_ - 1];
        s.end = std::max(start.end, last.span.end);
        return s;
    }

    SExprPtr node(std::string tag, std::vector<std::string> names, std::vector<SExprPtr> kids,
                  const SourceSpan& start) const {
        auto e = std::make_shared<SExpr>();
        e->tag = std::move(tag);
        e->names = std::move(names);
        e->kids = std::move(kids);
        e->span = span_from(start);
        return e;
    }

    // "x y :" ahead?
    bool at_bind_start() const {
        std::size_t k = 0;
        while (peek(k).kind == Tok::Ident) ++k;
        return k > 0 && peek(k).kind == Tok::Colon;
    }

    bool tele_group_ahead() const {
        if (!at(Tok::LParen)) return false;
        if (peek(1).kind == Tok::Semi) return true;
        std::size_t k = 1;
        while (peek(k).kind == Tok::Ident) ++k;
        return k > 1 && peek(k).kind == Tok::Colon;
    }

    // ---- declarations ------------------------------------------------------------------

    std::vector<SurfaceBind> telescope() {
        std::vector<SurfaceBind> out;
        bool linear = false;
        while (tele_group_ahead()) {
            expect(Tok::LParen);
            bool seen_semi = false;
            while (!at(Tok::RParen)) {
                if (at(Tok::Semi)) {
                    if (seen_semi) fail("binder");
                    seen_semi = true;
                    linear = true;
                    ++pos_;
                    continue;
                }
                if (at(Tok::Comma)) {
                    ++pos_;
                    continue;
                }
                const SourceSpan start = peek().span;
                std::vector<std::string> names;
                while (at(Tok::Ident)) names.push_back(ident());
                if (names.empty()) fail("binder name");
                expect(Tok::Colon);
                ++tele_;
                SExprPtr ty = expr();
                --tele_;
                for (auto& n : names) out.push_back(SurfaceBind{n, ty, linear, span_from(start)});
            }
            expect(Tok::RParen);
        }
        return out;
    }

    SurfaceDecl decl() {
        SurfaceDecl d;
        const SourceSpan start = peek().span;
        if (at_kw("def")) {
            ++pos_;
            d.kind = DeclKind::Def;
            d.name = ident();
            d.params = telescope();
            expect(Tok::Colon);
            d.expected = expr();
            expect(Tok::Define);
            d.body = expr();
        } else if (at_kw("check")) {
            ++pos_;
            d.kind = DeclKind::Check;
            d.params = telescope();
            d.body = expr();
            expect(Tok::Colon);
            d.expected = expr();
        } else if (at_kw("checkeq")) {
            ++pos_;
            d.kind = DeclKind::EqCheck;
            d.params = telescope();
            d.body = expr();
            expect(Tok::EqEq);
            d.rhs = expr();
            expect(Tok::Colon);
            d.expected = expr();
        } else if (at_kw("pragma")) {
            ++pos_;
            d.kind = DeclKind::Flag;
            if (at_kw("ua")) {  // the only flag spelled as a keyword
                ++pos_;
                d.name = "ua";
            } else {
                d.name = ident();
            }
        } else {
            fail("'def', 'check', 'checkeq' or 'pragma'");
        }
        expect(Tok::Semi);
        d.span = span_from(start);
        return d;
    }

    // ---- expressions -------------------------------------------------------------------

    SExprPtr expr() {
        if (peek().kind == Tok::Keyword) {
            const std::string& w = peek().text;
            if (binder_keywords().count(w)) return binder();
            if (w == "let") return let_form();
            if (w == "case") return case_form();
        }
        return arrow();
    }

    SExprPtr binder() {
        const SourceSpan start = peek().span;
        const std::string kw = toks_[pos_++].text;
        std::vector<std::pair<std::string, SExprPtr>> binds;
        do {
            expect(Tok::LParen);
            std::vector<std::string> names;
            while (at(Tok::Ident)) names.push_back(ident());
            if (names.empty()) fail("binder name");
            expect(Tok::Colon);
            const int saved = tele_;
            tele_ = 0;
            SExprPtr ty = expr();
            tele_ = saved;
            expect(Tok::RParen);
            for (auto& n : names) binds.emplace_back(n, ty);
        } while (at(Tok::LParen));
        expect(Tok::Dot);
        SExprPtr body = expr();
        for (auto it = binds.rbegin(); it != binds.rend(); ++it) {
            body = node(kw, {it->first}, {it->second, body}, start);
        }
        return body;
    }

    SExprPtr let_form() {
        const SourceSpan start = peek().span;
        expect_kw("let");
        std::string tag;
        std::vector<std::string> names;
        if (at_kw("unit")) {
            ++pos_;
            tag = "letU";
        } else {
            names.push_back(ident());
            if (at(Tok::Comma)) {
                ++pos_;
                names.push_back(ident());
                tag = "let2";
            } else if (at(Tok::StarStar)) {
                ++pos_;
                names.push_back(ident());
                tag = "letT";
            } else {
                tag = "let1";
            }
        }
        expect_kw("be");
        SExprPtr scrut = expr();
        expect_kw("in");
        SExprPtr body = expr();
        return node(tag, names, {scrut, body}, start);
    }

    SExprPtr case_form() {
        const SourceSpan start = peek().span;
        expect_kw("case");
        SExprPtr scrut = expr();
        expect_kw("of");
        expect_kw("inl");
        const std::string u = ident();
        expect(Tok::Dot);
        SExprPtr left = expr();
        expect(Tok::Bar);
        expect_kw("inr");
        const std::string v = ident();
        expect(Tok::Dot);
        SExprPtr right = expr();
        return node("case", {u, v}, {scrut, left, right}, start);
    }

    SExprPtr arrow() {
        const SourceSpan start = peek().span;
        SExprPtr l = lolli();
        if (at(Tok::Arrow)) {
            ++pos_;
            SExprPtr r = expr();
            return node("->", {}, {l, r}, start);
        }
        return l;
    }

    SExprPtr lolli() {
        const SourceSpan start = peek().span;
        SExprPtr l = additive();
        if (at(Tok::Lolli)) {
            ++pos_;
            SExprPtr r = (peek().kind == Tok::Keyword && (binder_keywords().count(peek().text) ||
                                                          peek().text == "let" || peek().text == "case"))
                             ? expr()
                             : lolli();
            return node("-o", {}, {l, r}, start);
        }
        return l;
    }

    SExprPtr additive() {
        const SourceSpan start = peek().span;
        SExprPtr l = multiplicative();
        while (at(Tok::Amp) || at(Tok::OPlus)) {
            const std::string op = at(Tok::Amp) ? "&" : "(+)";
            ++pos_;
            SExprPtr r = multiplicative();
            l = node(op, {}, {l, r}, start);
        }
        return l;
    }

    SExprPtr multiplicative() {
        const SourceSpan start = peek().span;
        SExprPtr l = at_level();
        while (at(Tok::Star) || at(Tok::StarStar)) {
            const std::string op = at(Tok::Star) ? "*" : "**";
            ++pos_;
            SExprPtr r = at_level();
            l = node(op, {}, {l, r}, start);
        }
        return l;
    }

    SExprPtr at_level() {
        const SourceSpan start = peek().span;
        SExprPtr l = application();
        while (at(Tok::At)) {
            ++pos_;
            SExprPtr r = application();
            l = node("lapp", {}, {l, r}, start);
        }
        return l;
    }

    bool atom_ahead() const {
        switch (peek().kind) {
            case Tok::Ident:
                return !(tele_ > 0 && at_bind_start());
            case Tok::Keyword:
                return atom_keywords().count(peek().text) != 0;
            case Tok::LParen:
            case Tok::LAngle:
            case Tok::LBrace:
                return true;
            default:
                return false;
        }
    }

    SExprPtr application() {
        const SourceSpan start = peek().span;
        SExprPtr f = app_head();
        for (;;) {
            if (at(Tok::LBrack)) {
                ++pos_;
                const int saved = tele_;
                tele_ = 0;
                SExprPtr a = expr();
                tele_ = saved;
                expect(Tok::RBrack);
                f = node("sqapp", {}, {f, a}, start);
            } else if (atom_ahead()) {
                SExprPtr a = atom();
                f = node("app", {}, {f, a}, start);
            } else {
                return f;
            }
        }
    }

    SExprPtr bound_group(std::size_t count, std::vector<std::string>& names) {
        expect(Tok::LParen);
        for (std::size_t i = 0; i < count; ++i) names.push_back(ident());
        expect(Tok::Dot);
        const int saved = tele_;
        tele_ = 0;
        SExprPtr e = expr();
        tele_ = saved;
        expect(Tok::RParen);
        return e;
    }

    void using_groups(std::vector<std::string>& names, std::vector<SExprPtr>& kids) {
        if (!at_kw("using")) return;
        ++pos_;
        if (!at(Tok::LParen)) fail("'(' after 'using'");
        while (at(Tok::LParen) && peek(1).kind == Tok::Ident && peek(2).kind == Tok::Colon) {
            ++pos_;
            names.push_back(ident());
            expect(Tok::Colon);
            const int saved = tele_;
            tele_ = 0;
            kids.push_back(expr());
            tele_ = saved;
            expect(Tok::RParen);
        }
    }

    SExprPtr app_head() {
        const SourceSpan start = peek().span;
        if (peek().kind == Tok::Keyword) {
            const std::string w = peek().text;
            if (unary_keywords().count(w)) {
                ++pos_;
                return node(w, {}, {atom()}, start);
            }
            if (w == "Id") {
                ++pos_;
                SExprPtr a = atom(), m = atom(), n = atom();
                return node("Id", {}, {a, m, n}, start);
            }
            if (w == "ua") {
                ++pos_;
                std::vector<SExprPtr> kids;
                for (int i = 0; i < 7; ++i) kids.push_back(atom());
                return node("ua", {}, kids, start);
            }
            if (w == "split1" || w == "split2") {
                ++pos_;
                std::vector<std::string> names;
                SExprPtr s = atom();
                SExprPtr motive = bound_group(1, names);
                SExprPtr body = bound_group(2, names);
                std::vector<SExprPtr> kids{s, motive, body};
                if (w == "split2") using_groups(names, kids);
                return node(w, names, kids, start);
            }
            if (w == "J1" || w == "J2") {
                ++pos_;
                std::vector<std::string> names;
                SExprPtr motive = bound_group(3, names);
                SExprPtr body = bound_group(1, names);
                SExprPtr m = atom(), n = atom(), p = atom();
                std::vector<SExprPtr> kids{motive, body, m, n, p};
                if (w == "J2") using_groups(names, kids);
                return node(w, names, kids, start);
            }
        }
        return atom();
    }

    SExprPtr atom() {
        const SourceSpan start = peek().span;
        const Token& t = peek();
        if (t.kind == Tok::Ident) {
            ++pos_;
            return node("var", {t.text}, {}, start);
        }
        if (t.kind == Tok::Keyword && atom_keywords().count(t.text)) {
            ++pos_;
            return node(t.text, {}, {}, start);
        }
        const int saved = tele_;
        if (t.kind == Tok::LParen) {
            ++pos_;
            tele_ = 0;
            SExprPtr a = expr();
            if (at(Tok::Comma)) {
                ++pos_;
                SExprPtr b = expr();
                expect(Tok::RParen);
                tele_ = saved;
                return node("pair", {}, {a, b}, start);
            }
            expect(Tok::RParen);
            tele_ = saved;
            return a;
        }
        if (t.kind == Tok::LAngle || t.kind == Tok::LBrace) {
            const bool angle = t.kind == Tok::LAngle;
            ++pos_;
            tele_ = 0;
            SExprPtr a = expr();
            expect(Tok::Comma);
            SExprPtr b = expr();
            expect(angle ? Tok::RAngle : Tok::RBrace);
            tele_ = saved;
            return node(angle ? "wpair" : "sqpair", {}, {a, b}, start);
        }
        fail("expression");
    }
};

}  // namespace

std::vector<SurfaceDecl> parse(const std::string& source, const std::string& file) {
    Parser p(lex(source, file));
    return p.file();
}

SExprPtr parse_expr(const std::string& source, const std::string& file) {
    Parser p(lex(source, file));
    return p.whole_expr();
}

}  // namespace ldtt
