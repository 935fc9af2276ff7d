// linalg.hpp
// Dense complex linear algebra used throughout luinv: a row-major complex
// matrix, polynomials in one variable, Jacobi eigen/singular value solvers,
// LU determinant, Faddeev-LeVerrier characteristic polynomial and Haar
// random unitaries.

#pragma once

#include "luinv/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace luinv {

using complex = std::complex<double>;

inline constexpr double default_structure_tol = 1e-10;
inline constexpr double default_identity_rtol = 1e-9;

inline bool is_finite(complex z) noexcept {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Dense rows x cols complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<complex> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_)
            throw error(errc::bad_length, "matrix entries length " + std::to_string(data_.size()) +
                                              " != " + std::to_string(rows_ * cols_));
    }

    // Nested-list construction, mostly for tests and fixtures.
    ComplexMatrix(std::initializer_list<std::initializer_list<complex>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw error(errc::bad_length, "ragged matrix literal");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(std::span<const complex> d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    static ComplexMatrix diagonal(std::initializer_list<complex> d) {
        return diagonal(std::span<const complex>(d.begin(), d.size()));
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<complex> entries() noexcept { return data_; }
    std::span<const complex> entries() const noexcept { return data_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
        return out;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
        return out;
    }

    ComplexMatrix conj() const {
        ComplexMatrix out = *this;
        for (auto& z : out.data_) z = std::conj(z);
        return out;
    }

    complex trace() const {
        complex t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const noexcept {
        double m = 0.0;
        for (const auto& z : data_) m = std::max(m, std::abs(z));
        return m;
    }

    bool all_finite() const noexcept {
        return std::all_of(data_.begin(), data_.end(), [](complex z) { return is_finite(z); });
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        require_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }

    ComplexMatrix& operator*=(complex s) {
        for (auto& z : data_) z *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, complex s) { return a *= s; }
    friend ComplexMatrix operator*(complex s, ComplexMatrix a) { return a *= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_)
            throw error(errc::dimension_mismatch, "product of " + a.shape() + " and " + b.shape());
        ComplexMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const complex aik = a(i, k);
                if (aik == complex{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
            }
        return out;
    }

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

private:
    void require_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw error(errc::dimension_mismatch, "shapes " + shape() + " and " + o.shape());
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<complex> data_;
};

// Largest entrywise modulus of a - b.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

// tr(a * b) without forming the product.
inline complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows() || a.rows() != b.cols())
        throw error(errc::dimension_mismatch, "trace of product " + a.shape() + " * " + b.shape());
    complex t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) t += a(i, k) * b(k, i);
    return t;
}

inline double hermitian_residual(const ComplexMatrix& h) {
    if (!h.is_square()) throw error(errc::dimension_mismatch, "expected square matrix, got " + h.shape());
    double r = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = i; j < h.cols(); ++j) r = std::max(r, std::abs(h(i, j) - std::conj(h(j, i))));
    return r;
}

// max |U^dagger U - E|.
inline double unitarity_residual(const ComplexMatrix& u) {
    if (!u.is_square()) return INFINITY;
    return max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.rows()));
}

inline void require_unitary(const ComplexMatrix& u, std::size_t n, const char* what, double tol = default_structure_tol) {
    if (u.rows() != n || u.cols() != n)
        throw error(errc::dimension_mismatch,
                    std::string(what) + " must be " + std::to_string(n) + "x" + std::to_string(n) + ", got " + u.shape());
    const double r = unitarity_residual(u);
    if (!(r <= tol))
        throw error(errc::not_unitary, std::string(what) + " has |U^dag U - E|_max = " + std::to_string(r), r);
}

// Polynomial in one variable, coefficients by ascending power. Trailing
// exact zeros are trimmed; the zero polynomial is stored as {0}.
class Polynomial {
public:
    Polynomial() : coeffs_{0.0} {}

    explicit Polynomial(std::vector<complex> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

    Polynomial(std::initializer_list<complex> coeffs) : coeffs_(coeffs) { trim(); }

    std::size_t degree() const noexcept { return coeffs_.size() - 1; }
    bool is_zero() const noexcept { return coeffs_.size() == 1 && coeffs_[0] == complex{}; }
    const std::vector<complex>& coeffs() const noexcept { return coeffs_; }

    // Coefficient of x^k, zero beyond the degree.
    complex operator[](std::size_t k) const noexcept { return k < coeffs_.size() ? coeffs_[k] : complex{}; }

    complex operator()(complex x) const noexcept {
        complex acc = 0.0;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    // p(x) * x^k
    Polynomial shifted(std::size_t k) const {
        if (is_zero()) return {};
        std::vector<complex> c(k, 0.0);
        c.insert(c.end(), coeffs_.begin(), coeffs_.end());
        return Polynomial(std::move(c));
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void trim() {
        while (coeffs_.size() > 1 && coeffs_.back() == complex{}) coeffs_.pop_back();
        if (coeffs_.empty()) coeffs_.push_back(0.0);
    }

    std::vector<complex> coeffs_;
};

// Largest coefficientwise |a_k - b_k|.
inline double max_coeff_diff(const Polynomial& a, const Polynomial& b) {
    double d = 0.0;
    for (std::size_t k = 0; k <= std::max(a.degree(), b.degree()); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

struct EigenResult {
    std::vector<double> values; // descending
    ComplexMatrix vectors;      // column k pairs with values[k]
};

// Cyclic Jacobi diagonalisation of a Hermitian matrix.
inline EigenResult hermitian_eig(const ComplexMatrix& h, double tol = default_structure_tol, int max_sweeps = 100) {
    const double asym = hermitian_residual(h);
    if (!(asym <= tol)) throw error(errc::not_hermitian, "|H - H^dag|_max = " + std::to_string(asym), asym);

    const std::size_t n = h.rows();
    ComplexMatrix a = h;
    for (std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
    ComplexMatrix v = ComplexMatrix::identity(n);

    auto off_norm2 = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += std::norm(a(i, j));
        return s;
    };
    double scale2 = 0.0;
    for (const auto& z : a.entries()) scale2 += std::norm(z);
    const double eps = std::numeric_limits<double>::epsilon();

    int sweep = 0;
    while (off_norm2() > eps * eps * scale2 * 1e-4) {
        if (++sweep > max_sweeps)
            throw error(errc::no_convergence, "Jacobi eigen solver exceeded " + std::to_string(max_sweeps) + " sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const complex apq = a(p, q);
                const double r = std::abs(apq);
                if (r == 0.0) continue;
                // Phase e makes the (p,q) element real, then a real Givens
                // rotation annihilates it: J = diag(1, conj(e)) * [[c, s], [-s, c]].
                const complex e = apq / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = 0.5 * std::atan2(2.0 * r, aqq - app);
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                const complex j10 = -s * std::conj(e);
                const complex j11 = c * std::conj(e);

                for (std::size_t k = 0; k < n; ++k) {
                    const complex akp = a(k, p);
                    const complex akq = a(k, q);
                    a(k, p) = akp * c + akq * j10;
                    a(k, q) = akp * s + akq * j11;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const complex apk = a(p, k);
                    const complex aqk = a(q, k);
                    a(p, k) = c * apk + std::conj(j10) * aqk;
                    a(q, k) = s * apk + std::conj(j11) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();

                for (std::size_t k = 0; k < n; ++k) {
                    const complex vkp = v(k, p);
                    const complex vkq = v(k, q);
                    v(k, p) = vkp * c + vkq * j10;
                    v(k, q) = vkp * s + vkq * j11;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });
    EigenResult out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

// Singular values in descending order, via one-sided (Hestenes) Jacobi,
// which keeps small singular values accurate to working precision.
inline std::vector<double> singular_values(const ComplexMatrix& m, int max_sweeps = 100) {
    // Work on the orientation with fewer columns; its column norms are the
    // min(rows, cols) singular values.
    ComplexMatrix w = m.cols() <= m.rows() ? m : m.adjoint();
    const std::size_t rows = w.rows();
    const std::size_t cols = w.cols();
    const double eps = std::numeric_limits<double>::epsilon();

    auto column_dot = [&](std::size_t p, std::size_t q) {
        complex g = 0.0;
        for (std::size_t k = 0; k < rows; ++k) g += std::conj(w(k, p)) * w(k, q);
        return g;
    };

    for (int sweep = 0;; ++sweep) {
        if (sweep >= max_sweeps)
            throw error(errc::no_convergence, "one-sided Jacobi SVD exceeded " + std::to_string(max_sweeps) + " sweeps");
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < cols; ++p) {
            for (std::size_t q = p + 1; q < cols; ++q) {
                const double alpha = column_dot(p, p).real();
                const double beta = column_dot(q, q).real();
                const complex gamma = column_dot(p, q);
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const complex e = gamma / g;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t k = 0; k < rows; ++k) {
                    const complex wp = w(k, p);
                    const complex wq = w(k, q) * std::conj(e);
                    w(k, p) = c * wp - s * wq;
                    w(k, q) = (s * wp + c * wq) * e;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sv(cols);
    for (std::size_t j = 0; j < cols; ++j) sv[j] = std::sqrt(column_dot(j, j).real());
    std::sort(sv.begin(), sv.end(), std::greater<>());
    return sv;
}

// LU with partial pivoting; 0 for an exactly singular matrix.
inline complex determinant(const ComplexMatrix& m) {
    if (!m.is_square()) throw error(errc::dimension_mismatch, "determinant of non-square " + m.shape());
    const std::size_t n = m.rows();
    if (n == 0) return 1.0;
    if (n == 1) return m(0, 0);
    ComplexMatrix a = m;
    complex det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (a(piv, col) == complex{}) return 0.0;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
            det = -det;
        }
        det *= a(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const complex f = a(r, col) / a(col, col);
            if (f == complex{}) continue;
            for (std::size_t c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
        }
    }
    return det;
}

// det(x E - M) by the Faddeev-LeVerrier trace recursion; monic of degree n.
inline Polynomial char_poly(const ComplexMatrix& m) {
    if (!m.is_square()) throw error(errc::dimension_mismatch, "characteristic polynomial of non-square " + m.shape());
    const std::size_t n = m.rows();
    std::vector<complex> c(n + 1);
    c[n] = 1.0;
    ComplexMatrix mk = ComplexMatrix::zeros(n, n);
    const ComplexMatrix id = ComplexMatrix::identity(n);
    for (std::size_t k = 1; k <= n; ++k) {
        mk = m * mk + id * c[n - k + 1];
        c[n - k] = -trace_of_product(m, mk) / static_cast<double>(k);
    }
    return Polynomial(std::move(c));
}

// Haar-distributed dim x dim unitary: Ginibre sample, Householder QR, then
// column phases chosen so that R has a real positive diagonal.
inline ComplexMatrix haar_unitary(std::size_t dim, std::uint64_t seed) {
    if (dim == 0) throw error(errc::bad_length, "unitary dimension must be positive");
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix z(dim, dim);
    for (auto& e : z.entries()) {
        const double re = normal(gen);
        const double im = normal(gen);
        e = complex(re, im);
    }

    // Householder QR: z = Q R. Q is accumulated by applying the reflectors to E.
    ComplexMatrix r = z;
    ComplexMatrix q = ComplexMatrix::identity(dim);
    for (std::size_t k = 0; k + 1 < dim; ++k) {
        double norm_x = 0.0;
        for (std::size_t i = k; i < dim; ++i) norm_x += std::norm(r(i, k));
        norm_x = std::sqrt(norm_x);
        if (norm_x == 0.0) continue;
        const complex x0 = r(k, k);
        const complex phase = std::abs(x0) == 0.0 ? complex(1.0) : x0 / std::abs(x0);
        std::vector<complex> v(dim, 0.0);
        v[k] = x0 + phase * norm_x;
        for (std::size_t i = k + 1; i < dim; ++i) v[i] = r(i, k);
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < dim; ++i) vnorm2 += std::norm(v[i]);
        if (vnorm2 == 0.0) continue;
        // H = E - 2 v v^dag / (v^dag v); R <- H R, Q <- Q H.
        for (std::size_t c = 0; c < dim; ++c) {
            complex dot = 0.0;
            for (std::size_t i = k; i < dim; ++i) dot += std::conj(v[i]) * r(i, c);
            const complex f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < dim; ++i) r(i, c) -= f * v[i];
        }
        for (std::size_t row = 0; row < dim; ++row) {
            complex dot = 0.0;
            for (std::size_t i = k; i < dim; ++i) dot += q(row, i) * v[i];
            const complex f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < dim; ++i) q(row, i) -= f * std::conj(v[i]);
        }
    }

    for (std::size_t j = 0; j < dim; ++j) {
        const complex d = r(j, j);
        const complex ph = std::abs(d) == 0.0 ? complex(1.0) : d / std::abs(d);
        for (std::size_t i = 0; i < dim; ++i) q(i, j) *= ph;
    }
    return q;
}

} // namespace luinv
