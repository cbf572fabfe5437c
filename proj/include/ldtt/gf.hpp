#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ldtt/error.hpp"

namespace ldtt::gf {

using Residue = std::uint32_t;

bool is_prime(std::uint32_t p);

/// Dense row-major matrix over GF(p). Entries are always reduced into [0, p).
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, Residue p);
    Mat(std::size_t rows, std::size_t cols, Residue p, std::vector<Residue> entries);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    Residue prime() const noexcept { return p_; }

    Residue operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, std::int64_t v);
    void add(std::size_t r, std::size_t c, std::int64_t v);

    const std::vector<Residue>& entries() const noexcept { return data_; }

    bool operator==(const Mat& o) const = default;

    bool is_zero() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    Residue p_ = 2;
    std::vector<Residue> data_;
};

Residue inv_mod(Residue a, Residue p);

Mat idmat(std::size_t n, Residue p);
Mat zeros(std::size_t rows, std::size_t cols, Residue p);
Mat matmul(const Mat& a, const Mat& b);
Mat kron(const Mat& a, const Mat& b);
/// Block-diagonal direct sum.
Mat dsum(const Mat& a, const Mat& b);
Mat add(const Mat& a, const Mat& b);
Mat sub(const Mat& a, const Mat& b);
Mat scale(const Mat& a, Residue s);
Mat transpose(const Mat& a);
Mat hstack(const Mat& a, const Mat& b);
Mat vstack(const Mat& a, const Mat& b);
Mat column(std::span<const Residue> v, Residue p);
Mat basis_column(std::size_t n, std::size_t i, Residue p);
Mat submatrix(const Mat& a, std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols);

struct RrefResult {
    Mat reduced;
    std::size_t rank = 0;
    std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

RrefResult rref(const Mat& m);
std::size_t rank(const Mat& m);

/// Columns form a basis of the null space: m * kernel_basis(m) = 0.
Mat kernel_basis(const Mat& m);

struct Cokernel {
    Mat proj;  // dim x m.rows(), surjective, proj * m = 0
    std::size_t dim = 0;
};
Cokernel cokernel(const Mat& m);

/// Some x with m * x = v, if one exists.
std::optional<Mat> solve(const Mat& m, const Mat& v);

std::optional<Mat> inverse(const Mat& m);
bool is_invertible(const Mat& m);

/// Right inverse s of a surjection m (m * s = id).
Mat right_inverse(const Mat& m);

/// Decodes integer `code` into a rows x cols matrix, digit base p, row-major, least
/// significant digit first. Enumerating code = 0 .. p^(rows*cols)-1 visits every matrix.
Mat decode_matrix(std::uint64_t code, std::size_t rows, std::size_t cols, Residue p);
std::uint64_t count_matrices(std::size_t rows, std::size_t cols, Residue p);

}  // namespace ldtt::gf
