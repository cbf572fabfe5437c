#include "ldtt/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "ldtt/corpus.hpp"
#include "ldtt/driver.hpp"
#include "ldtt/fam.hpp"
#include "ldtt/suites.hpp"

namespace ldtt::cli {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Usage, "cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Location location(const SourceSpan& s) { return {s.file, s.line, s.col}; }

std::string file_stem(const std::string& path) {
    const auto slash = path.find_last_of('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

ReportEntry error_entry(std::string name, const Error& e) {
    ReportEntry x{std::move(name), Status::Error, e.kind(), e.what(), std::nullopt, {}, {}, {}};
    if (e.span()) x.location = location(*e.span());
    return x;
}

// One entry per declaration, then one for a front-end failure.
void append(std::vector<ReportEntry>& out, const std::string& prefix, const SourceReport& r) {
    for (const auto& d : r.decls) {
        ReportEntry x{prefix + d.name, d.report.accepted ? Status::Pass : Status::Fail, d.report.error, d.report.reason,
                      location(d.report.span ? *d.report.span : d.span), d.report.trace, {}, {}};
        out.push_back(std::move(x));
    }
    if (r.front_error) out.push_back(error_entry(prefix + "parse", *r.front_error));
}

// Runs `work(i)` for i < n on up to `jobs` threads; each result lands in its own slot.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& work) {
    const auto threads = static_cast<std::size_t>(std::max(1, jobs));
    if (threads == 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < std::min(threads, n); ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) work(i);
        });
    }
    for (auto& th : pool) th.join();
}

struct Options {
    RunConfig config;
    bool json = false;
    bool trace = false;
    bool prelude = false;
    int jobs = 1;
};

// A session for one input file, with the built-in prelude loaded first if asked.
struct Loaded {
    SourceReport pre;
    SourceReport file;
};

Loaded load(const Options& o, const std::string& path) {
    const std::string text = read_file(path);
    Session s(o.config.flags, o.config.step_budget);
    Loaded l;
    if (o.prelude) l.pre = s.load(corpus_file("prelude")->text, "prelude.ldtt", o.trace);
    l.file = s.load(text, path, o.trace);
    return l;
}

Report cmd_check(const Options& o, const std::vector<std::string>& paths) {
    std::vector<std::vector<ReportEntry>> per(paths.size());
    parallel_for(paths.size(), o.jobs, [&](std::size_t i) {
        try {
            const Loaded l = load(o, paths[i]);
            if (o.prelude) append(per[i], file_stem(paths[i]) + ":prelude:", l.pre);
            append(per[i], file_stem(paths[i]) + ":", l.file);
        } catch (const Error& e) {
            per[i].push_back(error_entry(file_stem(paths[i]), e));
        }
    });
    Report r{"check", o.config, {}};
    for (auto& v : per) r.entries.insert(r.entries.end(), v.begin(), v.end());
    return r;
}

Report cmd_normalize(const Options& o, const std::string& path, const std::string& def) {
    const Loaded l = load(o, path);
    Report r{"normalize", o.config, {}};
    append(r.entries, file_stem(path) + ":", l.file);
    const SigEntry* e = l.file.sig.find(def);
    if (!e || !e->value) throw Error(ErrorKind::Usage, "no checked definition named " + def + " in " + path);
    ReportEntry x{"normalize " + def, Status::Pass, std::nullopt, "", std::nullopt, {}, {}, {}};
    try {
        x.output = pretty(normalize(l.file.sig, e->value, l.file.flags, o.config.step_budget), Ctx{});
    } catch (const Error& err) {
        x = error_entry("normalize " + def, err);
    }
    r.entries.push_back(std::move(x));
    return r;
}

Report cmd_interp(const Options& o, const std::string& path, const std::string& basis_path) {
    const Loaded l = load(o, path);
    std::optional<fam::Basis> basis;
    if (!basis_path.empty()) basis = fam::basis_from_json(read_file(basis_path));
    Report r{"interp", o.config, {}};
    const fam::Model model(l.file.sig, o.config.prime, l.file.flags);
    for (const auto& d : l.file.decls) {
        if (d.kind != DeclKind::EqCheck) continue;
        const std::string name = file_stem(path) + ":" + d.name;
        if (!d.report.accepted) {
            r.entries.push_back({name, Status::Fail, d.report.error, "not derivable: " + d.report.reason, location(d.span), {}, {}, {}});
            continue;
        }
        const auto& j = d.report.judgment;
        try {
            const fam::Basis b = basis ? *basis : fam::auto_basis(model, j.ctx, 2, o.config.universe_dim_cap);
            std::string why;
            const bool sound = model.check_soundness(j.ctx, j.subjects[0], j.subjects[1], j.subjects[2], b, &why);
            ReportEntry x{name, sound ? Status::Pass : Status::Fail, std::nullopt, "", location(d.span), {}, {}, {}};
            if (!sound) x.failures.push_back(why);
            r.entries.push_back(std::move(x));
        } catch (const Error& e) {
            auto x = error_entry(name, e);
            x.location = location(d.span);
            r.entries.push_back(std::move(x));
        }
    }
    if (l.file.front_error) r.entries.push_back(error_entry(file_stem(path) + ":parse", *l.file.front_error));
    return r;
}

Report cmd_model_test(const Options& o, const std::string& suite, int instances, std::uint64_t seed) {
    suites::Options so;
    so.prime = o.config.prime;
    so.cap = o.config.universe_dim_cap;
    so.instances = instances;
    so.seed = seed;
    so.budget = o.config.step_budget;
    so.flags = o.config.flags;
    const suites::Report s = suite == "fam" ? suites::fam_suite(so) : suite == "gpd" ? suites::gpd_suite(so)
                                                                                     : suites::univalence_suite(so);
    Report r{"model-test " + suite, o.config, {}};
    for (const auto& e : s.entries) {
        r.entries.push_back({e.name, e.pass ? Status::Pass : Status::Fail, std::nullopt, e.detail, std::nullopt, {}, e.failures, {}});
    }
    return r;
}

Report cmd_corpus(const Options& o) {
    const auto& files = corpus_files();
    std::vector<std::vector<ReportEntry>> per(files.size());
    parallel_for(files.size(), o.jobs, [&](std::size_t i) {
        try {
            append(per[i], files[i].name + ":", run_corpus_file(files[i].name, o.config.flags, o.config.step_budget, o.trace));
        } catch (const Error& e) {
            per[i].push_back(error_entry(files[i].name, e));
        }
    });
    Report r{"corpus", o.config, {}};
    for (auto& v : per) r.entries.insert(r.entries.end(), v.begin(), v.end());
    return r;
}

int emit(const Options& o, const Report& r, std::ostream& out, std::ostream& err) {
    if (o.json) {
        const nlohmann::json j = to_json(r);
        if (const std::string bad = schema_violation(j); !bad.empty()) {
            err << "ldtt: internal error: report violates its schema: " << bad << '\n';
            return 1;
        }
        out << j.dump(2) << '\n';
    } else {
        out << to_text(r);
    }
    return r.ok() ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Checker and semantic test harness for linear dependent type theory", "ldtt"};
    app.require_subcommand(1);
    app.fallthrough();

    std::optional<int> prime, cap, jobs;
    std::optional<std::size_t> budget;
    bool json = false, trace = false, prelude = false;
    bool nat_l = false, eta_sigma = false, eta_sub = false, ua = false;
    app.add_option("--prime", prime, "Field characteristic for the models");
    app.add_option("--budget", budget, "Reduction step budget per equality check");
    app.add_option("--cap", cap, "Universe dimension cap and maximal random dimension");
    app.add_option("--jobs,-j", jobs, "Files checked in parallel")->check(CLI::PositiveNumber);
    app.add_flag("--json", json, "Emit the versioned JSON report");
    app.add_flag("--trace", trace, "Record the typing rules applied per entry");
    app.add_flag("--prelude", prelude, "Load the built-in prelude before each file");
    app.add_flag("--nat-l", nat_l, "Enable the L-naturality conversions");
    app.add_flag("--eta-sigma", eta_sigma, "Enable surjective pairing");
    app.add_flag("--eta-sub", eta_sub, "Enable uniqueness for the subset and tensor formers");
    app.add_flag("--ua", ua, "Enable the ua rule");

    std::vector<std::string> paths;
    auto* check = app.add_subcommand("check", "Check every declaration of the given files");
    check->add_option("files", paths, "Source files")->required()->check(CLI::ExistingFile);

    std::string norm_path, def;
    auto* norm = app.add_subcommand("normalize", "Print the normal form of a definition");
    norm->add_option("file", norm_path, "Source file")->required()->check(CLI::ExistingFile);
    norm->add_option("--def", def, "Definition name")->required();

    std::string interp_path, basis_path;
    auto* interp = app.add_subcommand("interp", "Interpret every checked equation in the families model");
    interp->add_option("file", interp_path, "Source file")->required()->check(CLI::ExistingFile);
    interp->add_option("--basis", basis_path, "JSON values for the universe-valued context entries")
        ->check(CLI::ExistingFile);

    std::string suite;
    int instances = 20;
    std::uint64_t seed = 1;
    auto* model = app.add_subcommand("model-test", "Run a semantic model suite");
    model->add_option("suite", suite, "fam, gpd or univalence")->required()->check(CLI::IsMember({"fam", "gpd", "univalence"}));
    model->add_option("--instances", instances, "Random instances per property")->check(CLI::PositiveNumber);
    model->add_option("--seed", seed, "Random seed");

    auto* corpus = app.add_subcommand("corpus", "Check the built-in derivation corpus");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    Options o;
    try {
        if (const char* path = std::getenv("LDTT_CONFIG"); path && *path) o.config = config_from_json(read_file(path));
        if (prime) o.config.prime = *prime;
        if (cap) o.config.universe_dim_cap = *cap;
        if (budget) o.config.step_budget = *budget;
        if (json) o.config.report_format = Format::Json;
        o.config.flags.nat_l |= nat_l;
        o.config.flags.eta_sigma |= eta_sigma;
        o.config.flags.eta_sub |= eta_sub;
        o.config.flags.ua |= ua;
        validate(o.config);
    } catch (const Error& e) {
        err << "ldtt: " << e.what() << '\n';
        return 2;
    }
    o.json = o.config.report_format == Format::Json;
    o.trace = trace || o.json;
    o.prelude = prelude;
    o.jobs = jobs.value_or(1);

    try {
        Report r;
        if (*check) {
            r = cmd_check(o, paths);
        } else if (*norm) {
            r = cmd_normalize(o, norm_path, def);
        } else if (*interp) {
            r = cmd_interp(o, interp_path, basis_path);
        } else if (*model) {
            r = cmd_model_test(o, suite, instances, seed);
        } else if (*corpus) {
            r = cmd_corpus(o);
        }
        return emit(o, r, out, err);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::Usage) {
            err << "ldtt: " << e.what() << '\n';
            return 2;
        }
        err << "ldtt: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return 1;
    }
}

}  // namespace ldtt::cli
