// invariants.hpp
// Local-unitary invariants that do not depend on the chosen pure-state
// decomposition: characteristic-polynomial coefficients of the Gram matrix,
// degree-4 determinants of the order-4 trace hypermatrix, Cayley's 2x2x2
// hyperdeterminant, and the realignment trace norm used as a baseline.

#pragma once

#include "luinv/error.hpp"
#include "luinv/linalg.hpp"
#include "luinv/states.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace luinv {

// Omega_ij = tr(A_i A_j^dag). Hermitian, PSD, trace tr(rho).
struct GramMatrix {
    ComplexMatrix omega;
};

inline GramMatrix gram_matrix(const PureStateDecomposition& d) {
    const std::size_t count = d.size();
    GramMatrix g{ComplexMatrix(count, count)};
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i; j < count; ++j) {
            // tr(A_i A_j^dag) = sum_kl A_i(k,l) conj(A_j(k,l))
            complex t = 0.0;
            const auto ai = d.mats[i].entries();
            const auto aj = d.mats[j].entries();
            for (std::size_t k = 0; k < ai.size(); ++k) t += ai[k] * std::conj(aj[k]);
            g.omega(i, j) = t;
            g.omega(j, i) = std::conj(t);
        }
    return g;
}

// F_0 ... F_I with F_0 = 1.
struct InvariantVector {
    std::vector<complex> F;

    std::size_t rank() const noexcept { return F.empty() ? 0 : F.size() - 1; }
};

// F_i = e_i(spec Omega), the i-th elementary symmetric polynomial of the
// eigenvalues. det(Omega - x E) = sum_i (-1)^(I-i) F_i x^(I-i), so these
// are the characteristic coefficients with the alternating sign removed.
inline InvariantVector f_invariants(const GramMatrix& g) {
    const Polynomial p = char_poly(g.omega);
    const std::size_t count = g.omega.rows();
    InvariantVector out{std::vector<complex>(count + 1)};
    out.F[0] = 1.0;
    for (std::size_t i = 1; i <= count; ++i) out.F[i] = (i % 2 ? -1.0 : 1.0) * p[count - i];
    return out;
}

// Order-2s array of cyclic trace products
//   (Omega_s)_{i1..is j1..js} = tr(A_{i1} A_{j1}^dag A_{i2} A_{j2}^dag ... A_{is} A_{js}^dag).
// Entries are stored row-major over the multi-index (i1, ..., is, j1, ..., js),
// big-endian.
class Hypermatrix {
public:
    static constexpr std::size_t max_entries = std::size_t{1} << 20;

    Hypermatrix(std::size_t s, std::size_t side) : s_(s), side_(side), data_(checked_size(s, side)) {}

    // E with entries prod_k delta(i_k, j_k).
    static Hypermatrix identity(std::size_t s, std::size_t side) {
        Hypermatrix e(s, side);
        std::size_t half = 1;
        for (std::size_t k = 0; k < s; ++k) half *= side;
        for (std::size_t d = 0; d < half; ++d) e.data_[d * half + d] = 1.0;
        return e;
    }

    std::size_t order_parameter() const noexcept { return s_; }
    std::size_t side() const noexcept { return side_; }
    std::span<const complex> entries() const noexcept { return data_; }
    std::span<complex> entries() noexcept { return data_; }

    std::size_t flat_index(std::span<const std::size_t> is, std::span<const std::size_t> js) const {
        if (is.size() != s_ || js.size() != s_)
            throw error(errc::bad_shape, "hypermatrix index needs " + std::to_string(s_) + " + " + std::to_string(s_) + " components");
        std::size_t r = 0;
        for (std::size_t k = 0; k < 2 * s_; ++k) {
            const std::size_t v = k < s_ ? is[k] : js[k - s_];
            if (v >= side_) throw error(errc::bad_shape, "hypermatrix index out of range");
            r = r * side_ + v;
        }
        return r;
    }

    const complex& at(std::span<const std::size_t> is, std::span<const std::size_t> js) const {
        return data_[flat_index(is, js)];
    }

    // Omega_s - x E.
    Hypermatrix minus_identity(complex x) const {
        Hypermatrix out = *this;
        std::size_t half = 1;
        for (std::size_t k = 0; k < s_; ++k) half *= side_;
        for (std::size_t d = 0; d < half; ++d) out.data_[d * half + d] -= x;
        return out;
    }

    // For s = 1 the hypermatrix is the I x I matrix (i1, j1).
    ComplexMatrix as_matrix() const {
        if (s_ != 1) throw error(errc::bad_shape, "only s = 1 hypermatrices are matrices");
        return ComplexMatrix(side_, side_, data_);
    }

private:
    static std::size_t checked_size(std::size_t s, std::size_t side) {
        if (s < 1) throw error(errc::bad_shape, "hypermatrix order parameter s must be >= 1");
        if (side < 1) throw error(errc::bad_shape, "hypermatrix side must be >= 1");
        std::size_t total = 1;
        for (std::size_t k = 0; k < 2 * s; ++k) {
            if (total > max_entries / side)
                throw error(errc::too_large, "I^(2s) exceeds 2^20 for I = " + std::to_string(side) + ", s = " + std::to_string(s));
            total *= side;
        }
        return total;
    }

    std::size_t s_;
    std::size_t side_;
    std::vector<complex> data_;
};

namespace detail {

struct TraceFill {
    const std::vector<ComplexMatrix>& g; // g[i * side + j] = A_i A_j^dag
    std::size_t side;
    std::size_t s;
    std::size_t half; // side^s
    std::span<complex> out;

    // prefix = G_{i1 j1} ... G_{i_depth j_depth}; i_acc / j_acc are the
    // big-endian partial indices of the i and j halves.
    void operator()(std::size_t depth, std::size_t i_acc, std::size_t j_acc, const ComplexMatrix* prefix) const {
        for (std::size_t i = 0; i < side; ++i)
            for (std::size_t j = 0; j < side; ++j) {
                const ComplexMatrix& gij = g[i * side + j];
                const std::size_t ia = i_acc * side + i;
                const std::size_t ja = j_acc * side + j;
                if (depth + 1 == s) {
                    out[ia * half + ja] = prefix ? trace_of_product(*prefix, gij) : gij.trace();
                } else {
                    const ComplexMatrix next = prefix ? *prefix * gij : gij;
                    (*this)(depth + 1, ia, ja, &next);
                }
            }
    }
};

} // namespace detail

// Omega_s of a decomposition; requires I^(2s) <= 2^20.
inline Hypermatrix hypermatrix(const PureStateDecomposition& d, std::size_t s) {
    Hypermatrix h(s, d.size());
    const std::size_t side = d.size();
    std::vector<ComplexMatrix> g;
    g.reserve(side * side);
    for (std::size_t i = 0; i < side; ++i)
        for (std::size_t j = 0; j < side; ++j) g.push_back(d.mats[i] * d.mats[j].adjoint());
    std::size_t half = 1;
    for (std::size_t k = 0; k < s; ++k) half *= side;
    detail::TraceFill{g, side, s, half, h.entries()}(0, 0, 0, nullptr);
    return h;
}

// 2x2x2 tensor a_{ijk} at position 4i + 2j + k.
using Tensor222 = std::array<complex, 8>;

namespace detail {

inline const complex* require_222(std::span<const complex> a) {
    if (a.size() != 8) throw error(errc::bad_shape, "2x2x2 tensor needs 8 entries, got " + std::to_string(a.size()));
    return a.data();
}

constexpr double levi_civita(std::size_t i, std::size_t j) noexcept {
    return i == j ? 0.0 : (i == 0 ? 1.0 : -1.0);
}

} // namespace detail

// Cayley's hyperdeterminant of format 2x2x2, as the explicit 12-term
// polynomial.
inline complex cayley_det_222(std::span<const complex> t) {
    const complex* a = detail::require_222(t);
    auto at = [a](int i, int j, int k) { return a[4 * i + 2 * j + k]; };
    const complex a000 = at(0, 0, 0), a001 = at(0, 0, 1), a010 = at(0, 1, 0), a011 = at(0, 1, 1);
    const complex a100 = at(1, 0, 0), a101 = at(1, 0, 1), a110 = at(1, 1, 0), a111 = at(1, 1, 1);
    return a000 * a000 * a111 * a111 + a001 * a001 * a110 * a110 + a010 * a010 * a101 * a101 +
           a100 * a100 * a011 * a011                                                         //
           - 2.0 * a000 * a001 * a110 * a111 - 2.0 * a000 * a010 * a101 * a111               //
           - 2.0 * a000 * a011 * a100 * a111 - 2.0 * a001 * a010 * a101 * a110               //
           - 2.0 * a001 * a011 * a110 * a100 - 2.0 * a010 * a011 * a101 * a100               //
           + 4.0 * a000 * a011 * a101 * a110 + 4.0 * a001 * a010 * a100 * a111;
}

// Same value through Levi-Civita contractions:
//   b_{kn} = (1/2) eps^{il} eps^{jm} a_{ijk} a_{lmn},
//   Det    = -2 eps^{il} eps^{jm} b_{ij} b_{lm}.
// The outer factor -2 (rather than 1/2) is what makes this equal to the
// 12-term expansion above.
inline complex cayley_det_222_compact(std::span<const complex> t) {
    const complex* a = detail::require_222(t);
    using detail::levi_civita;
    complex b[2][2] = {};
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t n = 0; n < 2; ++n)
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t l = 0; l < 2; ++l)
                    for (std::size_t j = 0; j < 2; ++j)
                        for (std::size_t m = 0; m < 2; ++m) {
                            const double e = levi_civita(i, l) * levi_civita(j, m);
                            if (e != 0.0) b[k][n] += 0.5 * e * a[4 * i + 2 * j + k] * a[4 * l + 2 * m + n];
                        }
    complex det = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t l = 0; l < 2; ++l)
            for (std::size_t j = 0; j < 2; ++j)
                for (std::size_t m = 0; m < 2; ++m) det += levi_civita(i, l) * levi_civita(j, m) * b[i][j] * b[l][m];
    return -2.0 * det;
}

// Applies a 2x2 matrix to one slot (0, 1 or 2) of a 2x2x2 tensor:
// a'_{...i...} = sum_i' B_{i i'} a_{...i'...}.
inline Tensor222 act_on_slot(std::span<const complex> t, const ComplexMatrix& b, std::size_t slot) {
    const complex* a = detail::require_222(t);
    if (b.rows() != 2 || b.cols() != 2) throw error(errc::bad_shape, "slot action needs a 2x2 matrix");
    if (slot > 2) throw error(errc::bad_shape, "slot must be 0, 1 or 2");
    const std::size_t stride = std::size_t{4} >> slot;
    Tensor222 out{};
    for (std::size_t r = 0; r < 8; ++r) {
        const std::size_t idx = (r / stride) % 2;
        const std::size_t base = r - idx * stride;
        out[r] = b(idx, 0) * a[base] + b(idx, 1) * a[base + stride];
    }
    return out;
}

namespace detail {

inline std::span<const complex> require_2222(const Hypermatrix& h) {
    if (h.order_parameter() != 2 || h.side() != 2)
        throw error(errc::unsupported_format, "degree-4 invariants are defined for s = 2, I = 2 only (got s = " +
                                                  std::to_string(h.order_parameter()) + ", I = " + std::to_string(h.side()) + ")");
    return h.entries();
}

inline ComplexMatrix layout_4x4(std::span<const complex> a, const std::array<int, 16>& pos) {
    if (a.size() != 16) throw error(errc::bad_shape, "format 2x2x2x2 needs 16 entries, got " + std::to_string(a.size()));
    ComplexMatrix m(4, 4);
    for (std::size_t k = 0; k < 16; ++k) m.entries()[k] = a[pos[k]];
    return m;
}

inline constexpr std::array<int, 16> n_layout = {0, 1, 8, 9, 2, 3, 10, 11, 4, 5, 12, 13, 6, 7, 14, 15};
inline constexpr std::array<int, 16> m_layout = {0, 8, 2, 10, 1, 9, 3, 11, 4, 12, 6, 14, 5, 13, 7, 15};

} // namespace detail

// Omega_2 (I = 2) listed as a_r = tr(A_i A_j^dag A_k A_l^dag), r = 8i + 4j + 2k + l.
// Storage order is (i1 i2 j1 j2), so this swaps the two middle index bits.
inline std::array<complex, 16> trace_order_entries(const Hypermatrix& h) {
    const auto a = detail::require_2222(h);
    std::array<complex, 16> out{};
    for (std::size_t r = 0; r < 16; ++r) {
        const std::size_t swapped = (r & 9u) | ((r & 4u) >> 1) | ((r & 2u) << 1);
        out[r] = a[swapped];
    }
    return out;
}

// Degree-4 invariant N: determinant of
//   | a0 a1 a8  a9  |
//   | a2 a3 a10 a11 |
//   | a4 a5 a12 a13 |
//   | a6 a7 a14 a15 |
// with a_r = tr(A_i A_j^dag A_k A_l^dag), r = 8i + 4j + 2k + l.
inline complex invariant_N(std::span<const complex> a) { return determinant(detail::layout_4x4(a, detail::n_layout)); }
inline complex invariant_N(const Hypermatrix& h) { return invariant_N(trace_order_entries(h)); }

// Degree-4 invariant M: determinant of
//   | a0 a8  a2 a10 |
//   | a1 a9  a3 a11 |
//   | a4 a12 a6 a14 |
//   | a5 a13 a7 a15 |
// with a_r the stored entry (Omega_2)_{i1 i2 j1 j2}, r = 8 i1 + 4 i2 + 2 j1 + j2.
inline complex invariant_M(std::span<const complex> a) { return determinant(detail::layout_4x4(a, detail::m_layout)); }
inline complex invariant_M(const Hypermatrix& h) { return invariant_M(detail::require_2222(h)); }

enum class LambdaInvariant { N, M, det };

constexpr std::string_view lambda_invariant_name(LambdaInvariant inv) noexcept {
    switch (inv) {
    case LambdaInvariant::N: return "N";
    case LambdaInvariant::M: return "M";
    case LambdaInvariant::det: return "det";
    }
    return "?";
}

// Interpolating polynomial through (x_k, y_k) in monomial form, by the
// Bjorck-Pereyra Vandermonde solve.
inline std::vector<complex> interpolate_monomial(std::span<const double> x, std::span<const complex> y) {
    const std::size_t n = x.size() - 1;
    std::vector<complex> c(y.begin(), y.end());
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = n; i > k; --i) c[i] = (c[i] - c[i - 1]) / (x[i] - x[i - k - 1]);
    for (std::size_t k = n; k-- > 0;)
        for (std::size_t i = k; i < n; ++i) c[i] -= x[k] * c[i + 1];
    return c;
}

// Coefficients of a polynomial invariant of Omega_s - x E, ascending in x.
struct LambdaPolynomial {
    static constexpr double negligible_threshold = 1e-9;

    LambdaInvariant inv;
    std::size_t s;
    std::vector<complex> raw;

    bool negligible(std::size_t k) const { return std::abs(raw.at(k)) < negligible_threshold; }

    // Raw coefficients with negligible ones set to exact zero.
    Polynomial cleaned() const {
        std::vector<complex> c = raw;
        for (auto& z : c)
            if (std::abs(z) < negligible_threshold) z = 0.0;
        return Polynomial(std::move(c));
    }
};

// Evaluates inv(Omega_s - x E) at the nodes x = 0, 1, ..., d and
// interpolates; d = 4 for N and M, d = I for det. The det polynomial is
// normalised to be monic, det(x E - Omega) = (-1)^I det(Omega - x E), so the
// coefficient of x^(I-i) is (-1)^i F_i and zero-padding multiplies it by
// exactly x^(J-I). N and M are even in their argument and need no sign.
inline LambdaPolynomial lambda_poly(const PureStateDecomposition& d, std::size_t s, LambdaInvariant inv) {
    const std::size_t count = d.size();
    std::size_t degree = 0;
    if (inv == LambdaInvariant::det) {
        if (s != 1) throw error(errc::unsupported_format, "det lambda polynomial needs s = 1");
        degree = count;
    } else {
        if (s != 2 || count != 2)
            throw error(errc::unsupported_format, std::string(lambda_invariant_name(inv)) +
                                                      " lambda polynomial needs s = 2, I = 2 (got s = " + std::to_string(s) +
                                                      ", I = " + std::to_string(count) + ")");
        degree = 4;
    }
    std::optional<Hypermatrix> h;
    ComplexMatrix omega;
    if (inv == LambdaInvariant::det)
        omega = gram_matrix(d).omega;
    else
        h = hypermatrix(d, s);

    std::vector<double> nodes(degree + 1);
    std::vector<complex> values(degree + 1);
    for (std::size_t k = 0; k <= degree; ++k) {
        nodes[k] = static_cast<double>(k);
        switch (inv) {
        case LambdaInvariant::det:
            values[k] = determinant(ComplexMatrix::identity(count) * nodes[k] - omega);
            break;
        case LambdaInvariant::N: values[k] = invariant_N(h->minus_identity(nodes[k])); break;
        case LambdaInvariant::M: values[k] = invariant_M(h->minus_identity(nodes[k])); break;
        }
    }
    return {inv, s, interpolate_monomial(nodes, values)};
}

// Realigned matrix R_{(i,j),(k,l)} = rho_{(i,k),(j,l)}, shape n^2 x m^2.
inline ComplexMatrix realign(const DensityMatrix& rho) {
    if (!rho.is_bipartite())
        throw error(errc::not_bipartite, "realignment needs a bipartite state, got dims " + dims_string(rho.dims()));
    const std::size_t n = rho.dims()[0];
    const std::size_t m = rho.dims()[1];
    const ComplexMatrix& a = rho.matrix();
    ComplexMatrix r(n * n, m * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = 0; l < m; ++l) r(i * n + j, k * m + l) = a(i * m + k, j * m + l);
    return r;
}

// Sum of all singular values of the realigned matrix.
inline double realignment_kyfan(const DensityMatrix& rho) {
    const auto sv = singular_values(realign(rho));
    double sum = 0.0;
    for (double v : sv) sum += v;
    return sum;
}

} // namespace luinv
