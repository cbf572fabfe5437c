#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ldtt/driver.hpp"

namespace ldtt {

struct CorpusFile {
    std::string name;  // file stem
    std::string text;
};

/// Built-in derivation files; the prelude comes first.
const std::vector<CorpusFile>& corpus_files();
const CorpusFile* corpus_file(const std::string& name);

/// Loads the prelude (unless `name` is the prelude itself) and then the named file into a
/// fresh session with the given base flags; in-file pragmas add to them.
SourceReport run_corpus_file(const std::string& name, EqFlags base = {}, std::size_t budget = kDefaultBudget,
                             bool tracing = false);

/// One aggregate report per derivation file other than the prelude: accepted iff every
/// declaration in it is.
std::vector<std::pair<std::string, CheckReport>> corpus_isos(EqFlags base = {}, std::size_t budget = kDefaultBudget);

}  // namespace ldtt
