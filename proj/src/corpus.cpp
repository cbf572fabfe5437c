#include "ldtt/corpus.hpp"

#include <algorithm>

namespace ldtt {

namespace {

const CorpusFile kRaw[] = {
#include "corpus_data.inc"
};

}  // namespace

const std::vector<CorpusFile>& corpus_files() {
    static const std::vector<CorpusFile> files = [] {
        std::vector<CorpusFile> v(std::begin(kRaw), std::end(kRaw));
        std::stable_partition(v.begin(), v.end(), [](const CorpusFile& f) { return f.name == "prelude"; });
        return v;
    }();
    return files;
}

const CorpusFile* corpus_file(const std::string& name) {
    for (const auto& f : corpus_files()) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

SourceReport run_corpus_file(const std::string& name, EqFlags base, std::size_t budget, bool tracing) {
    const CorpusFile* file = corpus_file(name);
    if (!file) throw Error(ErrorKind::Usage, "no corpus file named " + name);
    Session s(base, budget);
    if (name != "prelude") {
        const SourceReport pre = s.load(corpus_file("prelude")->text, "prelude.ldtt");
        if (!pre.ok()) return pre;
    }
    return s.load(file->text, name + ".ldtt", tracing);
}

std::vector<std::pair<std::string, CheckReport>> corpus_isos(EqFlags base, std::size_t budget) {
    std::vector<std::pair<std::string, CheckReport>> out;
    for (const auto& f : corpus_files()) {
        if (f.name == "prelude") continue;
        const SourceReport r = run_corpus_file(f.name, base, budget);
        CheckReport agg;
        agg.accepted = r.ok();
        if (r.front_error) {
            agg.error = r.front_error->kind();
            agg.reason = r.front_error->what();
        }
        for (const auto& d : r.decls) {
            if (d.report.accepted || !agg.reason.empty()) continue;
            agg.error = d.report.error;
            agg.reason = d.name + ": " + d.report.reason;
            agg.span = d.span;
        }
        out.emplace_back(f.name, agg);
    }
    return out;
}

}  // namespace ldtt
