#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldtt/equality.hpp"
#include "ldtt/fam.hpp"
#include "ldtt/gpd.hpp"

// Model test suites run by `ldtt model-test`.
namespace ldtt::suites {

struct Entry {
    std::string name;
    bool pass = false;
    std::string detail;
    std::vector<std::string> failures;  // per point / object / instance
};

struct Report {
    std::string suite;
    std::vector<Entry> entries;
    bool ok() const;
};

struct Options {
    int prime = 2;
    int cap = 2;          // universe truncation and maximal random dimension
    int instances = 20;
    std::uint64_t seed = 1;
    std::size_t budget = kDefaultBudget;
    EqFlags flags;
};

/// Soundness of every accepted corpus equation, the swapped-injection negative control and
/// exhaustive L ⊣ M hom-set enumeration.
Report fam_suite(const Options& opt);
/// Kan triangles, Beck–Chevalley, Frobenius, Lan/Ran examples and the Id computation rule.
Report gpd_suite(const Options& opt);
/// ua round trips, the sign-representation non-example and premise discharge.
Report univalence_suite(const Options& opt);

/// A random Id-type instance: A over Γ, Ξ and C over Γ.A.A.Id_A, c : Ξ∘r_A ⇒ C∘r_A and a section M.
struct IdInstance {
    gpd::IdModel m;
    gpd::VectDiagram xi, c_diag;
    std::vector<gf::Mat> c;
    std::vector<gpd::Section> sections;  // all sections of A
};
/// Empty `sections` when A admits none.
IdInstance random_id_instance(gpd::Rng& rng, int p, int max_dim);

/// A well-typed term whose head is a redex of `rule`, over Γ with at most four entries and
/// random dimensions for its large entries.
struct RedexInstance {
    std::string rule;
    std::string source;  // one check declaration, read after the prelude
    fam::Basis basis;
};
RedexInstance random_redex(gpd::Rng& rng, int max_dim);

/// Checks the instance, reduces it and compares both sides (and the one-step reduct) in the
/// families model. Empty on success, otherwise the reason.
std::string redex_soundness(const RedexInstance& in, int p, std::size_t budget = kDefaultBudget);

}  // namespace ldtt::suites
