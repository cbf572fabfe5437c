#pragma once

#include <map>
#include <string>
#include <vector>

#include "ldtt/expr.hpp"

namespace ldtt {

/// A top-level definition. Cartesian defs abstract their telescope with Lam, linear defs
/// with SqLam/LinLam, so both `type` and `value` are closed.
struct SigEntry {
    std::string name;
    Expr type;
    Expr value;
    bool linear = false;
};

/// Append-only table of definitions; cheap to copy for snapshots.
class Signature {
public:
    void add(SigEntry entry) {
        index_[entry.name] = entries_.size();
        entries_.push_back(std::move(entry));
    }

    const SigEntry* find(const std::string& name) const {
        auto it = index_.find(name);
        return it == index_.end() ? nullptr : &entries_[it->second];
    }

    bool contains(const std::string& name) const { return index_.count(name) != 0; }
    const std::vector<SigEntry>& entries() const noexcept { return entries_; }

    ConstLookup lookup() const {
        return [this](const std::string& name) -> std::optional<ConstInfo> {
            const SigEntry* e = find(name);
            if (!e) return std::nullopt;
            return ConstInfo{e->linear ? Sort::LinTerm : Sort::CartTerm, e->type};
        };
    }

private:
    std::vector<SigEntry> entries_;
    std::map<std::string, std::size_t> index_;
};

}  // namespace ldtt
