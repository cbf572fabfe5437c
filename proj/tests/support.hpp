#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ldtt/corpus.hpp"
#include "ldtt/driver.hpp"
#include "ldtt/kernel.hpp"

namespace ldtt::testing {

// Outcome of the last declaration in a source, with the rules seen while checking its
// context, its type and its subject.
struct Probe {
    bool accepted = false;
    std::optional<ErrorKind> error;
    std::string reason;
    std::vector<std::string> trace;
    std::vector<std::string> redexes;  // reduction rules fired normalizing both sides of an equation
    bool front_error = false;

    bool used(const std::string& rule) const { return std::find(trace.begin(), trace.end(), rule) != trace.end(); }
};

inline Probe probe(const std::string& source, EqFlags flags = {}, bool with_prelude = true) {
    Session s(flags);
    if (with_prelude) s.load(corpus_file("prelude")->text, "prelude.ldtt");
    const SourceReport r = s.load(source, "probe.ldtt", true);
    Probe p;
    if (r.front_error) {
        p.front_error = true;
        p.error = r.front_error->kind();
        p.reason = r.front_error->what();
        return p;
    }
    if (r.decls.empty()) return p;
    const DeclReport& d = r.decls.back();
    p.accepted = d.report.accepted;
    p.error = d.report.error;
    p.reason = d.report.reason;
    const Judgment& j = d.report.judgment;
    Checker c(r.sig, r.flags);
    c.set_tracing(true);
    const CheckReport ctx = c.check_ctx(j.ctx);
    p.trace = ctx.trace;
    if (j.subjects.size() >= 2) {
        const CheckReport ty = c.check_type(j.ctx, j.subjects.back());
        p.trace.insert(p.trace.end(), ty.trace.begin(), ty.trace.end());
    }
    p.trace.insert(p.trace.end(), d.report.trace.begin(), d.report.trace.end());
    if (d.kind == DeclKind::EqCheck && j.subjects.size() == 3) {
        for (int side = 0; side < 2; ++side) {
            try {
                for (const auto& step : reduce(r.sig, j.ctx, j.subjects[static_cast<std::size_t>(side)], r.flags).trace.steps) {
                    p.redexes.push_back(step.rule);
                }
            } catch (const Error&) {
            }
        }
    }
    return p;
}

}  // namespace ldtt::testing
