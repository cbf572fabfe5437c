#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ldtt/equality.hpp"
#include "ldtt/error.hpp"

namespace ldtt::cli {

enum class Format { Text, Json };

struct RunConfig {
    int prime = 2;
    std::size_t step_budget = kDefaultBudget;
    EqFlags flags;
    int universe_dim_cap = 2;
    Format report_format = Format::Text;
};

/// Throws Usage for a non-prime or non-positive value.
void validate(const RunConfig& c);
/// Overlays a JSON config file's keys onto `base`. Unknown keys and ill-typed values throw Usage.
RunConfig config_from_json(const std::string& text, RunConfig base = {});
nlohmann::json to_json(const RunConfig& c);

struct Location {
    std::string file;
    std::size_t line = 0;
    std::size_t col = 0;
};

enum class Status { Pass, Fail, Error };

struct ReportEntry {
    std::string name;
    Status status = Status::Pass;
    std::optional<ErrorKind> error;
    std::string reason;
    std::optional<Location> location;
    std::vector<std::string> trace;     // typing rules, in checking order
    std::vector<std::string> failures;  // per point / object / instance
    std::string output;                 // e.g. a printed normal form
};

struct Report {
    std::string command;
    RunConfig config;
    std::vector<ReportEntry> entries;
    bool ok() const;
};

inline constexpr const char* kSchemaName = "ldtt-report";
inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const Report& r);
/// Empty when `j` conforms to the current report schema, else the first violation.
std::string schema_violation(const nlohmann::json& j);
std::string to_text(const Report& r);

/// `ldtt` entry point. Exit codes: 0 all entries pass, 1 some entry fails, 2 usage error.
/// LDTT_CONFIG names a JSON config file; command-line flags override it and in-file pragmas
/// add to both.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ldtt::cli
