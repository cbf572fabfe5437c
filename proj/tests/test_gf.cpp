#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ldtt/gf.hpp"

namespace ldtt::gf {
namespace {

// Brute-force oracles: enumerate every vector of GF(p)^n rather than eliminate.
std::vector<std::vector<Residue>> all_vectors(std::size_t n, Residue p) {
    std::vector<std::vector<Residue>> out;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) total *= p;
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<Residue> v(n);
        std::uint64_t c = code;
        for (auto& x : v) {
            x = static_cast<Residue>(c % p);
            c /= p;
        }
        out.push_back(v);
    }
    return out;
}

std::vector<Residue> image_of(const Mat& m, const std::vector<Residue>& v) {
    std::vector<Residue> out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::uint64_t s = 0;
        for (std::size_t c = 0; c < m.cols(); ++c) s += std::uint64_t{m(r, c)} * v[c];
        out[r] = static_cast<Residue>(s % m.prime());
    }
    return out;
}

// p^rank = size of the image.
std::size_t brute_rank(const Mat& m) {
    std::set<std::vector<Residue>> image;
    for (const auto& v : all_vectors(m.cols(), m.prime())) image.insert(image_of(m, v));
    std::size_t r = 0;
    for (std::size_t size = 1; size < image.size(); size *= m.prime()) ++r;
    return r;
}

Mat random_mat(std::mt19937_64& rng, std::size_t rows, std::size_t cols, Residue p) {
    Mat m(rows, cols, p);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, static_cast<std::int64_t>(rng() % p));
    return m;
}

struct Shape {
    std::size_t rows, cols;
    Residue p;
};

std::vector<Shape> shapes() {
    std::vector<Shape> out;
    for (Residue p : {2u, 3u, 5u})
        for (std::size_t r = 0; r <= 3; ++r)
            for (std::size_t c = 0; c <= 3; ++c) out.push_back({r, c, p});
    return out;
}

TEST(Gf, InvModByBruteForce) {
    for (Residue p : {2u, 3u, 5u, 7u, 11u}) {
        for (Residue a = 1; a < p; ++a) {
            Residue expect = 0;
            for (Residue b = 1; b < p; ++b)
                if (a * b % p == 1) expect = b;
            EXPECT_EQ(inv_mod(a, p), expect);
        }
    }
}

TEST(Gf, PrimalityByTrialDivision) {
    for (std::uint32_t n = 0; n < 200; ++n) {
        bool prime = n >= 2;
        for (std::uint32_t d = 2; d * d <= n; ++d) prime = prime && n % d != 0;
        EXPECT_EQ(is_prime(n), prime) << n;
    }
}

TEST(Gf, MatmulAgreesWithApply) {
    std::mt19937_64 rng(11);
    for (const auto& s : shapes()) {
        const Mat a = random_mat(rng, s.rows, s.cols, s.p);
        const Mat b = random_mat(rng, s.cols, 2, s.p);
        const Mat ab = matmul(a, b);
        for (std::size_t j = 0; j < 2; ++j) {
            std::vector<Residue> col(s.cols);
            for (std::size_t i = 0; i < s.cols; ++i) col[i] = b(i, j);
            const auto expect = image_of(a, col);
            for (std::size_t i = 0; i < s.rows; ++i) EXPECT_EQ(ab(i, j), expect[i]);
        }
    }
}

TEST(Gf, RankAndKernelMatchEnumeration) {
    std::mt19937_64 rng(12);
    for (const auto& s : shapes()) {
        for (int trial = 0; trial < 4; ++trial) {
            const Mat m = random_mat(rng, s.rows, s.cols, s.p);
            const std::size_t r = brute_rank(m);
            EXPECT_EQ(rank(m), r);
            const Mat k = kernel_basis(m);
            EXPECT_EQ(k.cols(), s.cols - r);
            EXPECT_TRUE(matmul(m, k).is_zero());
            EXPECT_EQ(brute_rank(k), k.cols());
        }
    }
}

TEST(Gf, CokernelAnnihilatesAndSurjects) {
    std::mt19937_64 rng(13);
    for (const auto& s : shapes()) {
        const Mat m = random_mat(rng, s.rows, s.cols, s.p);
        const Cokernel ck = cokernel(m);
        EXPECT_EQ(ck.dim, s.rows - brute_rank(m));
        EXPECT_EQ(ck.proj.rows(), ck.dim);
        EXPECT_TRUE(matmul(ck.proj, m).is_zero());
        EXPECT_EQ(brute_rank(ck.proj), ck.dim);
        if (ck.dim > 0) EXPECT_EQ(matmul(ck.proj, right_inverse(ck.proj)), idmat(ck.dim, s.p));
    }
}

TEST(Gf, SolveFindsExactlyTheReachableTargets) {
    std::mt19937_64 rng(14);
    for (const auto& s : shapes()) {
        if (s.rows == 0) continue;
        const Mat m = random_mat(rng, s.rows, s.cols, s.p);
        std::set<std::vector<Residue>> image;
        for (const auto& v : all_vectors(s.cols, s.p)) image.insert(image_of(m, v));
        for (const auto& target : all_vectors(s.rows, s.p)) {
            const auto x = solve(m, column(target, s.p));
            EXPECT_EQ(x.has_value(), image.count(target) == 1);
            if (x) EXPECT_EQ(matmul(m, *x), column(target, s.p));
        }
    }
}

TEST(Gf, InvertibleCountOfGl2) {
    for (Residue p : {2u, 3u}) {
        std::uint64_t count = 0;
        for (std::uint64_t code = 0; code < count_matrices(2, 2, p); ++code) {
            const Mat m = decode_matrix(code, 2, 2, p);
            const auto inv = inverse(m);
            EXPECT_EQ(inv.has_value(), is_invertible(m));
            if (!inv) continue;
            ++count;
            EXPECT_EQ(matmul(m, *inv), idmat(2, p));
            EXPECT_EQ(matmul(*inv, m), idmat(2, p));
        }
        EXPECT_EQ(count, (p * p - 1) * (p * p - p));
    }
}

TEST(Gf, DecodeVisitsEveryMatrixOnce) {
    std::set<std::vector<Residue>> seen;
    for (std::uint64_t code = 0; code < count_matrices(2, 3, 3); ++code) seen.insert(decode_matrix(code, 2, 3, 3).entries());
    EXPECT_EQ(seen.size(), 729u);
}

TEST(Gf, KronAndSumShapes) {
    std::mt19937_64 rng(15);
    const Mat a = random_mat(rng, 2, 3, 5), b = random_mat(rng, 3, 2, 5);
    const Mat k = kron(a, b);
    ASSERT_EQ(k.rows(), 6u);
    ASSERT_EQ(k.cols(), 6u);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) EXPECT_EQ(k(i, j), a(i / 3, j / 2) * b(i % 3, j % 2) % 5);
    const Mat d = dsum(a, b);
    EXPECT_EQ(submatrix(d, 0, 0, 2, 3), a);
    EXPECT_EQ(submatrix(d, 2, 3, 3, 2), b);
    EXPECT_TRUE(submatrix(d, 0, 3, 2, 2).is_zero());
    EXPECT_EQ(brute_rank(d), brute_rank(a) + brute_rank(b));
}

}  // namespace
}  // namespace ldtt::gf
