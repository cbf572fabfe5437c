#include <algorithm>
#include <sstream>

#include "ldtt/cli.hpp"
#include "ldtt/gf.hpp"

namespace ldtt::cli {

using nlohmann::json;

namespace {

const std::vector<std::pair<const char*, bool EqFlags::*>> kFlagNames{
    {"nat_l", &EqFlags::nat_l},
    {"eta_sigma", &EqFlags::eta_sigma},
    {"eta_sub", &EqFlags::eta_sub},
    {"ua", &EqFlags::ua},
};

[[noreturn]] void usage(const std::string& msg) { throw Error(ErrorKind::Usage, "config: " + msg); }

const char* status_name(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Error: return "error";
    }
    return "error";
}

}  // namespace

void validate(const RunConfig& c) {
    if (c.prime < 2 || !gf::is_prime(static_cast<std::uint32_t>(c.prime))) usage(std::to_string(c.prime) + " is not prime");
    if (c.step_budget == 0) usage("step_budget must be positive");
    if (c.universe_dim_cap <= 0) usage("universe_dim_cap must be positive");
}

RunConfig config_from_json(const std::string& text, RunConfig base) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        usage(e.what());
    }
    if (!j.is_object()) usage("top level must be an object");
    const auto positive = [](const json& v, const char* key) {
        if (!v.is_number_integer() || v.get<long long>() <= 0) usage(std::string(key) + " must be a positive integer");
        return v.get<long long>();
    };
    for (const auto& [key, v] : j.items()) {
        if (key == "prime") {
            base.prime = static_cast<int>(positive(v, "prime"));
        } else if (key == "step_budget") {
            base.step_budget = static_cast<std::size_t>(positive(v, "step_budget"));
        } else if (key == "universe_dim_cap") {
            base.universe_dim_cap = static_cast<int>(positive(v, "universe_dim_cap"));
        } else if (key == "report_format") {
            if (v == "text") {
                base.report_format = Format::Text;
            } else if (v == "json") {
                base.report_format = Format::Json;
            } else {
                usage("report_format must be \"text\" or \"json\"");
            }
        } else if (key == "flags") {
            if (!v.is_object()) usage("flags must be an object of booleans");
            for (const auto& [name, on] : v.items()) {
                auto it = std::find_if(kFlagNames.begin(), kFlagNames.end(), [&](const auto& f) { return name == f.first; });
                if (it == kFlagNames.end()) usage("unknown flag " + name);
                if (!on.is_boolean()) usage("flag " + name + " must be a boolean");
                base.flags.*(it->second) = on.get<bool>();
            }
        } else {
            usage("unknown key " + key);
        }
    }
    validate(base);
    return base;
}

json to_json(const RunConfig& c) {
    json flags = json::object();
    for (const auto& [name, member] : kFlagNames) flags[name] = c.flags.*member;
    return {{"prime", static_cast<unsigned>(c.prime)},
            {"step_budget", c.step_budget},
            {"universe_dim_cap", static_cast<unsigned>(c.universe_dim_cap)},
            {"flags", flags},
            {"report_format", c.report_format == Format::Json ? "json" : "text"}};
}

bool Report::ok() const {
    return std::all_of(entries.begin(), entries.end(), [](const ReportEntry& e) { return e.status == Status::Pass; });
}

json to_json(const Report& r) {
    json entries = json::array();
    std::size_t passed = 0;
    for (const auto& e : r.entries) {
        if (e.status == Status::Pass) ++passed;
        json loc = nullptr;
        if (e.location) loc = {{"file", e.location->file}, {"line", e.location->line}, {"col", e.location->col}};
        json x{{"name", e.name},
               {"status", status_name(e.status)},
               {"error", e.error ? json(to_string(*e.error)) : json(nullptr)},
               {"reason", e.reason},
               {"location", loc},
               {"trace", e.trace},
               {"failures", e.failures}};
        if (!e.output.empty()) x["output"] = e.output;
        entries.push_back(std::move(x));
    }
    return {{"schema", kSchemaName},
            {"version", kSchemaVersion},
            {"command", r.command},
            {"config", to_json(r.config)},
            {"entries", entries},
            {"summary", {{"total", r.entries.size()}, {"passed", passed}, {"failed", r.entries.size() - passed}, {"ok", r.ok()}}}};
}

std::string schema_violation(const json& j) {
    const auto need = [&](const json& obj, const char* key, auto pred, const char* what) -> std::string {
        if (!obj.is_object() || !obj.contains(key)) return std::string("missing ") + key;
        if (!pred(obj.at(key))) return std::string(key) + " must be " + what;
        return {};
    };
    const auto is_str = [](const json& v) { return v.is_string(); };
    const auto is_uint = [](const json& v) { return v.is_number_unsigned(); };
    const auto is_bool = [](const json& v) { return v.is_boolean(); };
    const auto str_array = [](const json& v) {
        return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& s) { return s.is_string(); });
    };
    std::string bad;
    if (!(bad = need(j, "schema", [](const json& v) { return v == kSchemaName; }, kSchemaName)).empty()) return bad;
    if (!(bad = need(j, "version", [](const json& v) { return v == kSchemaVersion; }, "1")).empty()) return bad;
    if (!(bad = need(j, "command", is_str, "a string")).empty()) return bad;
    if (!(bad = need(j, "config", [](const json& v) { return v.is_object(); }, "an object")).empty()) return bad;
    const json& c = j.at("config");
    for (const char* k : {"prime", "step_budget", "universe_dim_cap"}) {
        if (!(bad = need(c, k, is_uint, "a non-negative integer")).empty()) return "config: " + bad;
    }
    if (!(bad = need(c, "report_format", [](const json& v) { return v == "text" || v == "json"; }, "text or json")).empty()) {
        return "config: " + bad;
    }
    if (!(bad = need(c, "flags", [](const json& v) { return v.is_object(); }, "an object")).empty()) return "config: " + bad;
    for (const auto& [name, member] : kFlagNames) {
        if (!(bad = need(c.at("flags"), name, is_bool, "a boolean")).empty()) return "config.flags: " + bad;
    }
    if (!(bad = need(j, "entries", [](const json& v) { return v.is_array(); }, "an array")).empty()) return bad;
    std::size_t passed = 0;
    for (std::size_t i = 0; i < j.at("entries").size(); ++i) {
        const json& e = j.at("entries")[i];
        const std::string at = "entries[" + std::to_string(i) + "]: ";
        if (!(bad = need(e, "name", is_str, "a string")).empty()) return at + bad;
        if (!(bad = need(e, "status", [](const json& v) { return v == "pass" || v == "fail" || v == "error"; },
                         "pass, fail or error"))
                 .empty()) {
            return at + bad;
        }
        if (e.at("status") == "pass") ++passed;
        if (!(bad = need(e, "error", [](const json& v) { return v.is_null() || v.is_string(); }, "null or a string")).empty()) {
            return at + bad;
        }
        if (!(bad = need(e, "reason", is_str, "a string")).empty()) return at + bad;
        if (!(bad = need(e, "trace", str_array, "an array of strings")).empty()) return at + bad;
        if (!(bad = need(e, "failures", str_array, "an array of strings")).empty()) return at + bad;
        if (!(bad = need(e, "location", [](const json& v) { return v.is_null() || v.is_object(); }, "null or an object"))
                 .empty()) {
            return at + bad;
        }
        if (const json& loc = e.at("location"); loc.is_object()) {
            if (!(bad = need(loc, "file", is_str, "a string")).empty()) return at + "location: " + bad;
            for (const char* k : {"line", "col"}) {
                if (!(bad = need(loc, k, is_uint, "a non-negative integer")).empty()) return at + "location: " + bad;
            }
        }
        if (e.contains("output") && !e.at("output").is_string()) return at + "output must be a string";
    }
    if (!(bad = need(j, "summary", [](const json& v) { return v.is_object(); }, "an object")).empty()) return bad;
    const json& s = j.at("summary");
    for (const char* k : {"total", "passed", "failed"}) {
        if (!(bad = need(s, k, is_uint, "a non-negative integer")).empty()) return "summary: " + bad;
    }
    if (!(bad = need(s, "ok", is_bool, "a boolean")).empty()) return "summary: " + bad;
    const auto total = j.at("entries").size();
    if (s.at("total") != total || s.at("passed") != passed || s.at("failed") != total - passed ||
        s.at("ok") != (passed == total)) {
        return "summary disagrees with entries";
    }
    return {};
}

std::string to_text(const Report& r) {
    std::ostringstream os;
    std::size_t passed = 0;
    for (const auto& e : r.entries) {
        if (e.status == Status::Pass) ++passed;
        os << (e.status == Status::Pass ? "PASS " : e.status == Status::Fail ? "FAIL " : "ERROR ") << e.name;
        if (e.location) os << " (" << e.location->file << ':' << e.location->line << ':' << e.location->col << ')';
        if (!e.reason.empty()) os << ": " << (e.error ? std::string(to_string(*e.error)) + ": " : "") << e.reason;
        os << '\n';
        if (!e.output.empty()) os << "  " << e.output << '\n';
        for (const auto& t : e.trace) os << "  rule " << t << '\n';
        for (const auto& f : e.failures) os << "  - " << f << '\n';
    }
    os << r.command << ": " << passed << '/' << r.entries.size() << " passed\n";
    return os.str();
}

}  // namespace ldtt::cli
