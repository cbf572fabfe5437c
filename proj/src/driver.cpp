#include "ldtt/driver.hpp"

namespace ldtt {

bool SourceReport::ok() const { return !front_error && failures() == 0; }

std::size_t SourceReport::failures() const {
    std::size_t n = 0;
    for (const auto& d : decls) n += d.report.accepted ? 0 : 1;
    return n;
}

namespace {

void set_flag(EqFlags& flags, const std::string& name) {
    if (name == "nat_l") flags.nat_l = true;
    if (name == "eta_sigma") flags.eta_sigma = true;
    if (name == "eta_sub") flags.eta_sub = true;
    if (name == "ua") flags.ua = true;
}

CheckReport flag_report(const ResolvedDecl& d) {
    CheckReport r;
    r.accepted = true;
    r.reason = "pragma " + d.name;
    return r;
}

}  // namespace

SourceReport Session::load(const std::string& text, const std::string& file, bool tracing) {
    SourceReport out;
    std::vector<SurfaceDecl> decls;
    try {
        decls = parse(text, file);
    } catch (const Error& err) {
        out.front_error = err;
        out.sig = sig_;
        out.flags = flags_;
        return out;
    }
    int anon = 0;
    for (const auto& sd : decls) {
        ResolvedDecl d;
        try {
            d = resolver_.resolve_decl(sd);
        } catch (const Error& err) {
            out.front_error = err.span() ? err : Error(err.kind(), err.what(), sd.span);
            break;
        }
        DeclReport dr;
        dr.kind = d.kind;
        dr.span = d.span;
        dr.name = d.kind == DeclKind::Def || d.kind == DeclKind::Flag
                      ? d.name
                      : (d.kind == DeclKind::Check ? "check#" : "checkeq#") + std::to_string(++anon);
        if (d.kind == DeclKind::Flag) {
            set_flag(flags_, d.name);
            dr.report = flag_report(d);
            out.decls.push_back(std::move(dr));
            continue;
        }
        Checker checker(sig_, flags_, budget_);
        checker.set_tracing(tracing);
        CheckReport ctx_report = checker.check_ctx(d.ctx);
        if (!ctx_report.accepted) {
            dr.report = ctx_report;
        } else {
            CheckReport type_report = checker.check_type(d.ctx, d.type);
            if (!type_report.accepted) {
                dr.report = type_report;
            } else if (d.kind == DeclKind::EqCheck) {
                dr.report = checker.check_equal(d.ctx, d.body, d.rhs, d.type);
            } else {
                dr.report = checker.check_term(d.ctx, d.body, d.type);
                if (d.kind == DeclKind::Def && dr.report.accepted && !d.linear && !d.ctx.lin.empty()) {
                    dr.report.accepted = false;
                    dr.report.error = ErrorKind::SortMismatch;
                    dr.report.reason = "a cartesian definition cannot take linear parameters";
                }
            }
        }
        if (dr.report.accepted && !dr.report.span) dr.report.span = d.span;
        if (!dr.report.accepted && !dr.report.span) dr.report.span = d.span;
        if (d.kind == DeclKind::Def && dr.report.accepted) {
            const DefEntry entry = abstract_def(d);
            sig_.add({d.name, entry.type, entry.value, entry.linear});
        }
        out.decls.push_back(std::move(dr));
    }
    out.sig = sig_;
    out.flags = flags_;
    return out;
}

Expr Session::expr(const std::string& text, const Ctx& ctx, bool type_position) {
    return resolver_.resolve_expr(parse_expr(text), ctx, type_position);
}

SourceReport check_source(const std::string& text, const std::string& file, EqFlags flags, std::size_t budget,
                          bool tracing) {
    Session s(flags, budget);
    return s.load(text, file, tracing);
}

}  // namespace ldtt
