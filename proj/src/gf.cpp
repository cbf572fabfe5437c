#include "ldtt/gf.hpp"

#include <string>
#include <utility>

namespace ldtt::gf {

namespace {

void require_same_prime(const Mat& a, const Mat& b) {
    if (a.prime() != b.prime()) {
        throw Error(ErrorKind::ModulusMismatch,
                    "moduli differ: " + std::to_string(a.prime()) + " vs " + std::to_string(b.prime()));
    }
}

[[noreturn]] void dim_error(const char* op, const Mat& a, const Mat& b) {
    throw Error(ErrorKind::DimMismatch, std::string(op) + ": " + std::to_string(a.rows()) + "x" +
                                            std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                            "x" + std::to_string(b.cols()));
}

Residue reduce(std::int64_t v, Residue p) {
    std::int64_t r = v % static_cast<std::int64_t>(p);
    if (r < 0) r += p;
    return static_cast<Residue>(r);
}

}  // namespace

bool is_prime(std::uint32_t p) {
    if (p < 2) return false;
    for (std::uint32_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) return false;
    }
    return true;
}

Mat::Mat(std::size_t rows, std::size_t cols, Residue p) : rows_(rows), cols_(cols), p_(p), data_(rows * cols, 0) {}

Mat::Mat(std::size_t rows, std::size_t cols, Residue p, std::vector<Residue> entries)
    : rows_(rows), cols_(cols), p_(p), data_(std::move(entries)) {
    if (data_.size() != rows * cols) {
        throw Error(ErrorKind::DimMismatch, "entry count does not match shape");
    }
    for (auto& e : data_) e %= p_;
}

void Mat::set(std::size_t r, std::size_t c, std::int64_t v) { data_[r * cols_ + c] = reduce(v, p_); }

void Mat::add(std::size_t r, std::size_t c, std::int64_t v) {
    data_[r * cols_ + c] = reduce(static_cast<std::int64_t>(data_[r * cols_ + c]) + v, p_);
}

bool Mat::is_zero() const {
    for (auto e : data_) {
        if (e != 0) return false;
    }
    return true;
}

Residue inv_mod(Residue a, Residue p) {
    // Fermat: a^(p-2)
    std::uint64_t result = 1, base = a % p;
    std::uint64_t e = p - 2;
    while (e > 0) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return static_cast<Residue>(result);
}

Mat idmat(std::size_t n, Residue p) {
    Mat m(n, n, p);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Mat zeros(std::size_t rows, std::size_t cols, Residue p) { return Mat(rows, cols, p); }

Mat matmul(const Mat& a, const Mat& b) {
    require_same_prime(a, b);
    if (a.cols() != b.rows()) dim_error("matmul", a, b);
    const Residue p = a.prime();
    Mat out(a.rows(), b.cols(), p);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            std::uint64_t acc = 0;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                acc += static_cast<std::uint64_t>(a(i, k)) * b(k, j);
                acc %= p;
            }
            out.set(i, j, static_cast<std::int64_t>(acc));
        }
    }
    return out;
}

Mat kron(const Mat& a, const Mat& b) {
    require_same_prime(a, b);
    Mat out(a.rows() * b.rows(), a.cols() * b.cols(), a.prime());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const auto x = a(i, j);
            if (x == 0) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out.set(i * b.rows() + k, j * b.cols() + l, static_cast<std::int64_t>(x) * b(k, l));
        }
    return out;
}

Mat dsum(const Mat& a, const Mat& b) {
    require_same_prime(a, b);
    Mat out(a.rows() + b.rows(), a.cols() + b.cols(), a.prime());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.set(i, j, a(i, j));
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) out.set(a.rows() + i, a.cols() + j, b(i, j));
    return out;
}

Mat add(const Mat& a, const Mat& b) {
    require_same_prime(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols()) dim_error("add", a, b);
    Mat out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.add(i, j, b(i, j));
    return out;
}

Mat sub(const Mat& a, const Mat& b) {
    require_same_prime(a, b);
    if (a.rows() != b.rows() || a.cols() != b.cols()) dim_error("sub", a, b);
    Mat out = a;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.add(i, j, -static_cast<std::int64_t>(b(i, j)));
    return out;
}

Mat scale(const Mat& a, Residue s) {
    Mat out(a.rows(), a.cols(), a.prime());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out.set(i, j, static_cast<std::int64_t>(a(i, j)) * s);
    return out;
}

Mat transpose(const Mat& a) {
    Mat out(a.cols(), a.rows(), a.prime());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.set(j, i, a(i, j));
    return out;
}

Mat hstack(const Mat& a, const Mat& b) {
    require_same_prime(a, b);
    if (a.rows() != b.rows()) dim_error("hstack", a, b);
    Mat out(a.rows(), a.cols() + b.cols(), a.prime());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out.set(i, j, a(i, j));
        for (std::size_t j = 0; j < b.cols(); ++j) out.set(i, a.cols() + j, b(i, j));
    }
    return out;
}

Mat vstack(const Mat& a, const Mat& b) {
    require_same_prime(a, b);
    if (a.cols() != b.cols()) dim_error("vstack", a, b);
    Mat out(a.rows() + b.rows(), a.cols(), a.prime());
    for (std::size_t j = 0; j < a.cols(); ++j) {
        for (std::size_t i = 0; i < a.rows(); ++i) out.set(i, j, a(i, j));
        for (std::size_t i = 0; i < b.rows(); ++i) out.set(a.rows() + i, j, b(i, j));
    }
    return out;
}

Mat column(std::span<const Residue> v, Residue p) {
    return Mat(v.size(), 1, p, std::vector<Residue>(v.begin(), v.end()));
}

Mat basis_column(std::size_t n, std::size_t i, Residue p) {
    Mat m(n, 1, p);
    m.set(i, 0, 1);
    return m;
}

Mat submatrix(const Mat& a, std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) {
    if (r0 + rows > a.rows() || c0 + cols > a.cols()) {
        throw Error(ErrorKind::DimMismatch, "submatrix out of range");
    }
    Mat out(rows, cols, a.prime());
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) out.set(i, j, a(r0 + i, c0 + j));
    return out;
}

RrefResult rref(const Mat& m) {
    Mat r = m;
    const Residue p = m.prime();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < r.cols() && row < r.rows(); ++col) {
        std::size_t sel = row;
        while (sel < r.rows() && r(sel, col) == 0) ++sel;
        if (sel == r.rows()) continue;
        if (sel != row) {
            for (std::size_t j = 0; j < r.cols(); ++j) {
                auto t = r(row, j);
                r.set(row, j, r(sel, j));
                r.set(sel, j, t);
            }
        }
        const auto inv = inv_mod(r(row, col), p);
        for (std::size_t j = 0; j < r.cols(); ++j) r.set(row, j, static_cast<std::int64_t>(r(row, j)) * inv);
        for (std::size_t i = 0; i < r.rows(); ++i) {
            if (i == row || r(i, col) == 0) continue;
            const std::int64_t f = r(i, col);
            for (std::size_t j = 0; j < r.cols(); ++j) r.add(i, j, -f * static_cast<std::int64_t>(r(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(r), pivots.size(), std::move(pivots)};
}

std::size_t rank(const Mat& m) { return rref(m).rank; }

Mat kernel_basis(const Mat& m) {
    const auto rr = rref(m);
    const Residue p = m.prime();
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : rr.pivots) is_pivot[c] = true;
    const std::size_t nullity = m.cols() - rr.rank;
    Mat basis(m.cols(), nullity, p);
    std::size_t k = 0;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        basis.set(free, k, 1);
        for (std::size_t i = 0; i < rr.rank; ++i) {
            basis.set(rr.pivots[i], k, -static_cast<std::int64_t>(rr.reduced(i, free)));
        }
        ++k;
    }
    return basis;
}

Cokernel cokernel(const Mat& m) {
    // Left null space of m: rows y with y m = 0, i.e. kernel of m^T.
    const Mat left = kernel_basis(transpose(m));
    return {transpose(left), left.cols()};
}

std::optional<Mat> solve(const Mat& m, const Mat& v) {
    if (m.rows() != v.rows()) dim_error("solve", m, v);
    require_same_prime(m, v);
    const Mat aug = hstack(m, v);
    const auto rr = rref(aug);
    Mat x(m.cols(), v.cols(), m.prime());
    for (std::size_t i = 0; i < rr.rank; ++i) {
        const auto pc = rr.pivots[i];
        if (pc >= m.cols()) return std::nullopt;  // pivot in the augmented part: inconsistent
        for (std::size_t j = 0; j < v.cols(); ++j) x.set(pc, j, rr.reduced(i, m.cols() + j));
    }
    return x;
}

std::optional<Mat> inverse(const Mat& m) {
    if (m.rows() != m.cols()) return std::nullopt;
    if (rank(m) != m.rows()) return std::nullopt;
    return solve(m, idmat(m.rows(), m.prime()));
}

bool is_invertible(const Mat& m) { return m.rows() == m.cols() && rank(m) == m.rows(); }

Mat right_inverse(const Mat& m) {
    auto s = solve(m, idmat(m.rows(), m.prime()));
    if (!s) throw Error(ErrorKind::DimMismatch, "right_inverse: matrix is not surjective");
    return *s;
}

std::uint64_t count_matrices(std::size_t rows, std::size_t cols, Residue p) {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < rows * cols; ++i) n *= p;
    return n;
}

Mat decode_matrix(std::uint64_t code, std::size_t rows, std::size_t cols, Residue p) {
    Mat m(rows, cols, p);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            m.set(i, j, static_cast<std::int64_t>(code % p));
            code /= p;
        }
    return m;
}

}  // namespace ldtt::gf
