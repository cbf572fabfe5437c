#include <set>

#include "ldtt/fam.hpp"

namespace ldtt::fam {

using gf::Mat;

std::vector<std::vector<std::vector<int>>> transpose_lin(const std::vector<Mat>& m) {
    std::vector<std::vector<std::vector<int>>> out;
    for (const auto& mat : m) {
        std::vector<std::vector<int>> fn;
        for (std::size_t a = 0; a < mat.cols(); ++a) {
            std::vector<int> col;
            for (std::size_t r = 0; r < mat.rows(); ++r) col.push_back(static_cast<int>(mat(r, a)));
            fn.push_back(std::move(col));
        }
        out.push_back(std::move(fn));
    }
    return out;
}

std::vector<Mat> transpose_cart(const std::vector<std::vector<std::vector<int>>>& f, const std::vector<int>& dims,
                                int p) {
    std::vector<Mat> out;
    for (std::size_t g = 0; g < f.size(); ++g) {
        Mat m(static_cast<std::size_t>(dims[g]), f[g].size(), static_cast<gf::Residue>(p));
        for (std::size_t a = 0; a < f[g].size(); ++a) {
            for (std::size_t r = 0; r < static_cast<std::size_t>(dims[g]); ++r) m.set(r, a, f[g][a][r]);
        }
        out.push_back(std::move(m));
    }
    return out;
}

namespace {

// Mixed-radix walk over a product of finite ranges.
bool next(std::vector<std::uint64_t>& digits, const std::vector<std::uint64_t>& radix) {
    for (std::size_t i = digits.size(); i-- > 0;) {
        if (++digits[i] < radix[i]) return true;
        digits[i] = 0;
    }
    return false;
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

std::vector<int> decode_vec(std::uint64_t code, int d, int p) {
    std::vector<int> v(static_cast<std::size_t>(d));
    for (int i = d; i-- > 0;) {
        v[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::uint64_t>(p));
        code /= static_cast<std::uint64_t>(p);
    }
    return v;
}

}  // namespace

AdjCount enumerate_adjunction(const AdjInstance& inst, int p) {
    const std::size_t k = inst.set_sizes.size();
    const auto P = static_cast<gf::Residue>(p);
    AdjCount out;

    // 𝓛_Γ(LA, B): one matrix dim B(γ) × |A(γ)| per point.
    std::vector<std::uint64_t> lin_radix;
    for (std::size_t g = 0; g < k; ++g) {
        lin_radix.push_back(gf::count_matrices(static_cast<std::size_t>(inst.dims[g]),
                                               static_cast<std::size_t>(inst.set_sizes[g]), P));
    }
    // 𝒯_Γ(A, MB): one function A(γ) → GF(p)^dim B(γ) per point, a digit per element.
    std::vector<std::uint64_t> cart_radix;
    for (std::size_t g = 0; g < k; ++g) {
        for (int a = 0; a < inst.set_sizes[g]; ++a) cart_radix.push_back(ipow(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(inst.dims[g])));
    }

    std::set<std::vector<std::vector<std::vector<int>>>> images;
    std::vector<std::uint64_t> digits(k, 0);
    bool round_trip = true;
    do {
        std::vector<Mat> fam;
        for (std::size_t g = 0; g < k; ++g) {
            fam.push_back(gf::decode_matrix(digits[g], static_cast<std::size_t>(inst.dims[g]),
                                            static_cast<std::size_t>(inst.set_sizes[g]), P));
        }
        ++out.lin_homs;
        const auto f = transpose_lin(fam);
        if (!(transpose_cart(f, inst.dims, p) == fam)) round_trip = false;
        images.insert(f);
    } while (next(digits, lin_radix));

    std::set<std::vector<std::vector<std::vector<int>>>> cart_all;
    std::vector<std::uint64_t> cd(cart_radix.size(), 0);
    do {
        std::vector<std::vector<std::vector<int>>> f(k);
        std::size_t i = 0;
        for (std::size_t g = 0; g < k; ++g) {
            for (int a = 0; a < inst.set_sizes[g]; ++a) f[g].push_back(decode_vec(cd[i++], inst.dims[g], p));
        }
        ++out.cart_homs;
        if (!(transpose_lin(transpose_cart(f, inst.dims, p)) == f)) round_trip = false;
        cart_all.insert(std::move(f));
    } while (!cart_radix.empty() && next(cd, cart_radix));

    out.bijective = round_trip && images.size() == out.lin_homs && images == cart_all;
    return out;
}

bool adjunction_natural(const std::vector<Mat>& m, const std::vector<std::vector<int>>& h, const std::vector<Mat>& g,
                        int p) {
    const auto P = static_cast<gf::Residue>(p);
    const auto tm = transpose_lin(m);
    for (std::size_t pt = 0; pt < m.size(); ++pt) {
        // In A: transpose(m ∘ L h) = transpose(m) ∘ h.
        Mat lh(m[pt].cols(), h[pt].size(), P);
        for (std::size_t a = 0; a < h[pt].size(); ++a) lh.set(static_cast<std::size_t>(h[pt][a]), a, 1);
        const auto left = transpose_lin({gf::matmul(m[pt], lh)});
        for (std::size_t a = 0; a < h[pt].size(); ++a) {
            if (left[0][a] != tm[pt][static_cast<std::size_t>(h[pt][a])]) return false;
        }
        // In B: transpose(g ∘ m) = M g ∘ transpose(m).
        const auto lg = transpose_lin({gf::matmul(g[pt], m[pt])});
        for (std::size_t a = 0; a < tm[pt].size(); ++a) {
            std::vector<gf::Residue> col(tm[pt][a].begin(), tm[pt][a].end());
            const Mat image = gf::matmul(g[pt], gf::column(col, P));
            for (std::size_t r = 0; r < image.rows(); ++r) {
                if (lg[0][a][r] != static_cast<int>(image(r, 0))) return false;
            }
        }
    }
    return true;
}

}  // namespace ldtt::fam
