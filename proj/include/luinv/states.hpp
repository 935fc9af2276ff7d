// states.hpp
// Validated density matrices and pure-state decompositions.
//
// A decomposition rho = sum_i p_i |v_i><v_i| is stored as coefficient
// matrices A_i with (A_i)_{kl} = sqrt(p_i) <k l|v_i>; the weights are never
// kept separately. Basis kets |k_1 ... k_m> are enumerated big-endian over
// the subsystem dimensions, so the bipartite reshape of a vector is its
// row-major view as an N1 x N2 matrix.

#pragma once

#include "luinv/error.hpp"
#include "luinv/linalg.hpp"

#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace luinv {

using Dims = std::vector<std::size_t>;

inline std::size_t dims_product(std::span<const std::size_t> dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

inline std::string dims_string(std::span<const std::size_t> dims) {
    std::string s = "(";
    for (std::size_t i = 0; i < dims.size(); ++i) s += (i ? "," : "") + std::to_string(dims[i]);
    return s + ")";
}

// Row and column sizes (N1, N2) of the bipartition after the first `cut`
// subsystems.
inline std::pair<std::size_t, std::size_t> bipartition(std::span<const std::size_t> dims, std::size_t cut) {
    if (cut < 1 || cut >= dims.size())
        throw error(errc::bad_cut, "cut " + std::to_string(cut) + " invalid for " + std::to_string(dims.size()) +
                                       " subsystems (need 1 <= cut < m)");
    return {dims_product(dims.subspan(0, cut)), dims_product(dims.subspan(cut))};
}

class DensityMatrix;
DensityMatrix validate_density(ComplexMatrix mat, Dims dims, double tol = default_structure_tol);

// Hermitian, unit-trace, positive semidefinite matrix on a tensor product
// of spaces with dimensions `dims`. Only obtainable through validate_density.
class DensityMatrix {
public:
    const Dims& dims() const noexcept { return dims_; }
    const ComplexMatrix& matrix() const noexcept { return mat_; }
    double tol() const noexcept { return tol_; }
    std::size_t dim() const noexcept { return mat_.rows(); }
    bool is_bipartite() const noexcept { return dims_.size() == 2; }

private:
    friend DensityMatrix validate_density(ComplexMatrix, Dims, double);
    DensityMatrix(ComplexMatrix mat, Dims dims, double tol) : dims_(std::move(dims)), mat_(std::move(mat)), tol_(tol) {}

    Dims dims_;
    ComplexMatrix mat_;
    double tol_;
};

inline DensityMatrix validate_density(ComplexMatrix mat, Dims dims, double tol) {
    if (dims.empty()) throw error(errc::bad_shape, "empty dimension list");
    for (auto d : dims)
        if (d < 2) throw error(errc::bad_shape, "subsystem dimension " + std::to_string(d) + " < 2");
    const std::size_t n = dims_product(dims);
    if (mat.rows() != n || mat.cols() != n)
        throw error(errc::dimension_mismatch, "matrix " + mat.shape() + " does not match dims " + dims_string(dims));
    if (!mat.all_finite()) throw error(errc::bad_shape, "matrix has non-finite entries");

    const double asym = hermitian_residual(mat);
    if (!(asym <= tol)) throw error(errc::not_hermitian, "|rho - rho^dag|_max = " + std::to_string(asym), asym);
    const double trace_dev = std::abs(mat.trace() - 1.0);
    if (!(trace_dev <= tol)) throw error(errc::not_unit_trace, "|tr(rho) - 1| = " + std::to_string(trace_dev), trace_dev);
    const auto eig = hermitian_eig(mat, tol);
    const double min_ev = eig.values.back();
    if (!(min_ev >= -tol))
        throw error(errc::not_psd, "minimum eigenvalue " + std::to_string(min_ev) + " below -" + std::to_string(tol), -min_ev);
    return DensityMatrix(std::move(mat), std::move(dims), tol);
}

// Same matrix viewed as a bipartite state across `cut`.
inline DensityMatrix as_bipartite(const DensityMatrix& rho, std::size_t cut = 1) {
    if (rho.is_bipartite() && cut == 1) return rho;
    const auto [n1, n2] = bipartition(rho.dims(), cut);
    return validate_density(rho.matrix(), {n1, n2}, rho.tol());
}

// Coefficient matrices A_i, each n x m, with the weights folded in.
struct PureStateDecomposition {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<ComplexMatrix> mats;

    PureStateDecomposition() = default;
    PureStateDecomposition(std::size_t rows, std::size_t cols, std::vector<ComplexMatrix> ms)
        : n(rows), m(cols), mats(std::move(ms)) {
        for (const auto& a : mats)
            if (a.rows() != n || a.cols() != m)
                throw error(errc::dimension_mismatch,
                            "coefficient matrix " + a.shape() + " in " + std::to_string(n) + "x" + std::to_string(m) +
                                " decomposition");
    }

    std::size_t size() const noexcept { return mats.size(); }
};

// rho = sum_i vec(A_i) vec(A_i)^dag.
inline ComplexMatrix reconstruct(const PureStateDecomposition& d) {
    const std::size_t dim = d.n * d.m;
    ComplexMatrix rho(dim, dim);
    for (const auto& a : d.mats) {
        const auto v = a.entries();
        for (std::size_t r = 0; r < dim; ++r) {
            if (v[r] == complex{}) continue;
            for (std::size_t c = 0; c < dim; ++c) rho(r, c) += v[r] * std::conj(v[c]);
        }
    }
    return rho;
}

// Default rank threshold: 1e-10 times the largest eigenvalue.
inline double default_rank_tol(std::span<const double> eigenvalues) {
    return eigenvalues.empty() ? 0.0 : 1e-10 * std::max(eigenvalues.front(), 0.0);
}

// Eigenvector decomposition A_i = sqrt(lambda_i) reshape(v_i), one term per
// eigenvalue above rank_tol. Multipartite states are split after `cut`
// subsystems. Inside a degenerate eigenspace the basis is whatever the
// eigen solver returns.
inline PureStateDecomposition eigen_decomposition(const DensityMatrix& rho, std::optional<double> rank_tol = {},
                                                  std::size_t cut = 1) {
    const auto [n1, n2] = bipartition(rho.dims(), cut);
    const auto eig = hermitian_eig(rho.matrix(), rho.tol());
    const double thr = rank_tol.value_or(default_rank_tol(eig.values));
    std::vector<ComplexMatrix> mats;
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        if (!(eig.values[k] > thr)) break;
        ComplexMatrix a(n1, n2);
        const double w = std::sqrt(eig.values[k]);
        for (std::size_t r = 0; r < n1 * n2; ++r) a.entries()[r] = w * eig.vectors(r, k);
        mats.push_back(std::move(a));
    }
    return {n1, n2, std::move(mats)};
}

// B_i = sum_j U_ij A_j.
inline PureStateDecomposition mix_decomposition(const PureStateDecomposition& d, const ComplexMatrix& u) {
    require_unitary(u, d.size(), "mixing matrix");
    std::vector<ComplexMatrix> out(d.size(), ComplexMatrix(d.n, d.m));
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) {
            const complex uij = u(i, j);
            if (uij == complex{}) continue;
            out[i] += d.mats[j] * uij;
        }
    return {d.n, d.m, std::move(out)};
}

// Appends J - I zero matrices.
inline PureStateDecomposition pad_with_zeros(const PureStateDecomposition& d, std::size_t j) {
    if (j < d.size())
        throw error(errc::bad_length,
                    "cannot pad " + std::to_string(d.size()) + " terms down to " + std::to_string(j));
    auto mats = d.mats;
    mats.resize(j, ComplexMatrix(d.n, d.m));
    return {d.n, d.m, std::move(mats)};
}

// A_i' = P A_i Q^T, the decomposition of (P x Q) rho (P x Q)^dag. Q is
// transposed, not conjugated.
inline PureStateDecomposition apply_local_unitary(const PureStateDecomposition& d, const ComplexMatrix& p,
                                                  const ComplexMatrix& q) {
    require_unitary(p, d.n, "P");
    require_unitary(q, d.m, "Q");
    const ComplexMatrix qt = q.transpose();
    std::vector<ComplexMatrix> out;
    out.reserve(d.size());
    for (const auto& a : d.mats) out.push_back(p * a * qt);
    return {d.n, d.m, std::move(out)};
}

// (u_1 x ... x u_m) rho (u_1 x ... x u_m)^dag, Kronecker factors in dims order.
inline DensityMatrix apply_local_unitary_density(const DensityMatrix& rho, std::span<const ComplexMatrix> locals) {
    if (locals.size() != rho.dims().size())
        throw error(errc::dimension_mismatch, std::to_string(locals.size()) + " local unitaries for " +
                                                  std::to_string(rho.dims().size()) + " subsystems");
    ComplexMatrix u = ComplexMatrix::identity(1);
    for (std::size_t k = 0; k < locals.size(); ++k) {
        require_unitary(locals[k], rho.dims()[k], ("local unitary " + std::to_string(k)).c_str());
        u = kron(u, locals[k]);
    }
    ComplexMatrix out = u * rho.matrix() * u.adjoint();
    // Restore exact Hermiticity lost to rounding.
    for (std::size_t i = 0; i < out.rows(); ++i) {
        out(i, i) = out(i, i).real();
        for (std::size_t j = i + 1; j < out.cols(); ++j) {
            const complex avg = 0.5 * (out(i, j) + std::conj(out(j, i)));
            out(i, j) = avg;
            out(j, i) = std::conj(avg);
        }
    }
    return validate_density(std::move(out), rho.dims(), rho.tol());
}

// Views the coefficient array of a multipartite vector as an N1 x N2 matrix
// across the cut after `cut` subsystems (mixed-radix, big-endian).
inline ComplexMatrix flatten_multipartite(std::span<const complex> coeffs, std::span<const std::size_t> dims,
                                          std::size_t cut) {
    const auto [n1, n2] = bipartition(dims, cut);
    if (coeffs.size() != n1 * n2)
        throw error(errc::bad_length, "coefficient array length " + std::to_string(coeffs.size()) + " != " +
                                          std::to_string(n1 * n2) + " for dims " + dims_string(dims));
    return ComplexMatrix(n1, n2, std::vector<complex>(coeffs.begin(), coeffs.end()));
}

} // namespace luinv
