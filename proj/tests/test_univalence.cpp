#include <gtest/gtest.h>

#include "ldtt/gpd.hpp"

namespace ldtt::gpd {
namespace {

using gf::Mat;

std::vector<Mat> invertibles(int d, int p) {
    std::vector<Mat> out;
    const auto n = static_cast<std::size_t>(d);
    for (std::uint64_t code = 0; code < gf::count_matrices(n, n, static_cast<gf::Residue>(p)); ++code) {
        const Mat m = gf::decode_matrix(code, n, n, static_cast<gf::Residue>(p));
        if (gf::is_invertible(m)) out.push_back(m);
    }
    return out;
}

// Every family of invertible components a(γ) → b(γ) commuting with every arrow.
std::vector<std::vector<Mat>> brute_isos(const VectDiagram& a, const VectDiagram& b) {
    const int objs = a.base->objects();
    for (int o = 0; o < objs; ++o)
        if (a.dims[static_cast<std::size_t>(o)] != b.dims[static_cast<std::size_t>(o)]) return {};
    std::vector<std::vector<Mat>> choices;
    for (int o = 0; o < objs; ++o) choices.push_back(invertibles(a.dims[static_cast<std::size_t>(o)], a.p));
    std::vector<std::vector<Mat>> out;
    std::vector<std::size_t> idx(static_cast<std::size_t>(objs), 0);
    while (true) {
        std::vector<Mat> comps;
        for (int o = 0; o < objs; ++o) comps.push_back(choices[static_cast<std::size_t>(o)][idx[static_cast<std::size_t>(o)]]);
        bool natural = true;
        for (std::size_t u = 0; u < a.base->size(); ++u) {
            const auto s = static_cast<std::size_t>(a.base->src(static_cast<int>(u)));
            const auto t = static_cast<std::size_t>(a.base->dst(static_cast<int>(u)));
            natural = natural && gf::matmul(b.mats[u], comps[s]) == gf::matmul(comps[t], a.mats[u]);
        }
        if (natural) out.push_back(comps);
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
        if (k == idx.size()) break;
    }
    return out;
}

TEST(Univalence, RoundTripMatchesBruteForceOnTenInstances) {
    Rng rng(21);
    std::size_t nonempty = 0;
    for (int i = 0; i < 12; ++i) {
        const GpdPtr g = random_groupoid(rng);
        const UaSetting s = ua_setting(g, 2, 2);
        const VectDiagram a = random_vect(rng, g, 2, 2);
        const VectDiagram b = i % 3 == 2 ? random_vect(rng, g, 2, 2) : random_iso(rng, a).first;
        const auto expect = brute_isos(a, b);
        const UaReport r = ua_roundtrip(s, a, b);
        EXPECT_EQ(r.isos, expect.size()) << i;
        EXPECT_EQ(r.sections, expect.size()) << i;
        EXPECT_TRUE(r.roundtrip) << i;
        for (const auto& comps : expect) {
            const NatTrans iso{a, b, comps};
            EXPECT_EQ(ua_backward(s, a, b, ua_forward(s, iso)).comps, comps);
        }
        nonempty += !expect.empty();
    }
    EXPECT_GE(nonempty, 8u);
}

TEST(Univalence, CodesRoundTrip) {
    Rng rng(22);
    for (int i = 0; i < 10; ++i) {
        const GpdPtr g = random_groupoid(rng);
        const UaSetting s = ua_setting(g, 2, 2);
        const VectDiagram a = random_vect(rng, g, 2, 2);
        EXPECT_EQ(el_of(s, code_of(s, a)), a);
    }
}

// The sign character of Z/2 over GF(3) is not isomorphic to the trivial one.
TEST(Univalence, SignIsNotTrivial) {
    const GpdPtr z2 = cyclic(2);
    const VectDiagram triv = constant(z2, 3, 1);
    VectDiagram sign = triv;
    sign.mats[1] = Mat(1, 1, 3, {2});
    EXPECT_TRUE(brute_isos(triv, sign).empty());
    const UaReport r = ua_roundtrip(ua_setting(z2, 3, 1), triv, sign);
    EXPECT_EQ(r.isos, 0u);
    EXPECT_EQ(r.sections, 0u);
    EXPECT_EQ(ua_roundtrip(ua_setting(z2, 3, 1), sign, sign).isos, brute_isos(sign, sign).size());
}

std::vector<Section> endo_paths(const VectDiagram& x, const std::vector<Mat>& k) {
    const IdModel ids = arrow_category(m_endo(x));
    return all_sections(id_over(ids, sigma(x, k), sigma(x, identity(x).comps)));
}

NatTrans inverse_of(const NatTrans& f) {
    NatTrans inv{f.tgt, f.src, {}};
    for (const auto& c : f.comps) inv.comps.push_back(*gf::inverse(c));
    return inv;
}

TEST(Univalence, PremiseDischargeOnThreeInstances) {
    Rng rng(23);
    int done = 0;
    while (done < 3) {
        const GpdPtr g = random_groupoid(rng);
        const VectDiagram a = random_vect(rng, g, 2, 2);
        const auto [b, f] = random_iso(rng, a);
        const NatTrans inv = inverse_of(f);
        const auto ps = endo_paths(a, vcompose(inv, f).comps);
        const auto qs = endo_paths(b, vcompose(f, inv).comps);
        ASSERT_EQ(ps.size(), 1u);
        ASSERT_EQ(qs.size(), 1u);
        const NatTrans iso = ua_discharge(a, b, f, inv, inv, ps[0], qs[0]);
        EXPECT_EQ(iso.comps, f.comps);
        EXPECT_TRUE(is_natural(iso));
        ++done;
    }
}

// Discreteness: σ(k) = σ(id) has a witness only when k is the identity.
TEST(Univalence, NonIdentityEndomorphismHasNoPath) {
    const GpdPtr g = terminal();
    const VectDiagram a = constant(g, 2, 2);
    const std::vector<Mat> swap{Mat(2, 2, 2, {0, 1, 1, 0})};
    const std::vector<Mat> zero{Mat(2, 2, 2)};
    EXPECT_TRUE(endo_paths(a, swap).empty());
    EXPECT_TRUE(endo_paths(a, zero).empty());
    EXPECT_EQ(endo_paths(a, identity(a).comps).size(), 1u);
}

}  // namespace
}  // namespace ldtt::gpd
