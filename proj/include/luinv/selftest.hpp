// selftest.hpp
// Built-in property suites behind `lu-invar selftest`: the reference-state
// values plus randomized checks of decomposition independence, LU
// invariance, the zero-padding law and Cayley SL(2) covariance.

#pragma once

#include "luinv/equivalence.hpp"
#include "luinv/invariants.hpp"
#include "luinv/random.hpp"
#include "luinv/reference_states.hpp"

#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace luinv {

// Expected reference values; tests swap in wrong ones to check that
// failures are reported by name.
struct SelftestConstants {
    double n_rho1 = reference::n_rho1;
    double m_sigma1 = reference::m_sigma1;
    double kyfan_rho = reference::kyfan_rho;
};

struct SelftestOptions {
    bool full = false;
    std::size_t trials = 10;
    std::uint64_t seed = 0;
    SelftestConstants constants{};
};

struct PropertyResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {

inline std::string fmt(double x) {
    std::ostringstream ss;
    ss.precision(12);
    ss << x;
    return ss.str();
}

// Random bipartite test state; dims alternate between (2,2) and (2,3).
inline DensityMatrix selftest_state(std::uint64_t seed, std::size_t t, std::size_t max_rank = 4) {
    const Dims dims = t % 2 ? Dims{2, 3} : Dims{2, 2};
    return random_density(dims, 1 + t % max_rank, derive_seed(seed, t));
}

inline double max_f_diff(const InvariantVector& a, const InvariantVector& b) {
    double d = a.F.size() == b.F.size() ? 0.0 : INFINITY;
    for (std::size_t i = 0; i < std::min(a.F.size(), b.F.size()); ++i) d = std::max(d, std::abs(a.F[i] - b.F[i]));
    return d;
}

inline double max_raw_diff(const LambdaPolynomial& a, const LambdaPolynomial& b) {
    double d = a.raw.size() == b.raw.size() ? 0.0 : INFINITY;
    for (std::size_t k = 0; k < std::min(a.raw.size(), b.raw.size()); ++k) d = std::max(d, std::abs(a.raw[k] - b.raw[k]));
    return d;
}

} // namespace detail

inline std::vector<PropertyResult> run_selftest(const SelftestOptions& opt) {
    using detail::fmt;
    std::vector<PropertyResult> out;
    auto record = [&](std::string name, bool pass, std::string detail) {
        out.push_back({std::move(name), pass, std::move(detail)});
    };
    const auto& k = opt.constants;

    {
        const auto n = invariant_N(hypermatrix(eigen_decomposition(reference::rho1()), 2));
        record("Example1: N(ρ₁)=1/256", std::abs(n - k.n_rho1) < 1e-12, "N = " + fmt(n.real()));
        const auto n2 = invariant_N(hypermatrix(eigen_decomposition(reference::rho2()), 2));
        record("Example1: N(ρ₂)=0", std::abs(n2) < 1e-12, "N = " + fmt(n2.real()));
        const double k1 = realignment_kyfan(reference::rho1());
        const double k2 = realignment_kyfan(reference::rho2());
        record("Example1: kyfan(ρ₁)=kyfan(ρ₂)=1/√2",
               std::abs(k1 - k.kyfan_rho) < 1e-10 && std::abs(k2 - k.kyfan_rho) < 1e-10,
               "kyfan = " + fmt(k1) + ", " + fmt(k2));
        const auto m = invariant_M(hypermatrix(eigen_decomposition(reference::sigma1()), 2));
        record("Example2: M(σ₁)=1/6561", std::abs(m - k.m_sigma1) < 1e-12, "M = " + fmt(m.real()));
        const auto m2 = invariant_M(hypermatrix(eigen_decomposition(reference::sigma2()), 2));
        record("Example2: M(σ₂)=0", std::abs(m2) < 1e-12, "M = " + fmt(m2.real()));
    }

    // F_i under random unitary mixing.
    {
        double worst = 0.0;
        for (std::size_t t = 0; t < opt.trials; ++t) {
            const auto rho = detail::selftest_state(opt.seed, t);
            const auto d = eigen_decomposition(rho);
            const auto f = f_invariants(gram_matrix(d));
            const auto u = haar_unitary(d.size(), derive_seed(opt.seed, 1000 + t));
            worst = std::max(worst, detail::max_f_diff(f, f_invariants(gram_matrix(mix_decomposition(d, u)))));
        }
        record("Theorem1: F decomposition independence", worst < 1e-9, "max |ΔF| = " + fmt(worst));
    }

    // Omega entrywise under P x Q.
    {
        double worst_omega = 0.0;
        for (std::size_t t = 0; t < opt.trials; ++t) {
            const auto rho = detail::selftest_state(opt.seed + 1, t);
            const auto d = eigen_decomposition(rho);
            const auto p = haar_unitary(d.n, derive_seed(opt.seed, 2000 + t));
            const auto q = haar_unitary(d.m, derive_seed(opt.seed, 3000 + t));
            worst_omega = std::max(worst_omega,
                                   max_abs_diff(gram_matrix(d).omega, gram_matrix(apply_local_unitary(d, p, q)).omega));
        }
        record("Theorem1: LU invariance of Ω", worst_omega < 1e-10, "max |ΔΩ| = " + fmt(worst_omega));
    }

    // N, M and lambda coefficients under mixing and LU, rank-2 two-qubit states.
    {
        double worst = 0.0;
        for (std::size_t t = 0; t < opt.trials; ++t) {
            const auto rho = random_density({2, 2}, 2, derive_seed(opt.seed + 2, t));
            const auto d = eigen_decomposition(rho);
            const auto u = haar_unitary(2, derive_seed(opt.seed, 4000 + t));
            const auto p = haar_unitary(2, derive_seed(opt.seed, 5000 + t));
            const auto q = haar_unitary(2, derive_seed(opt.seed, 6000 + t));
            const auto h = hypermatrix(d, 2);
            for (const auto& other : {mix_decomposition(d, u), apply_local_unitary(d, p, q)}) {
                const auto h2 = hypermatrix(other, 2);
                worst = std::max(worst, std::abs(invariant_N(h) - invariant_N(h2)));
                worst = std::max(worst, std::abs(invariant_M(h) - invariant_M(h2)));
                for (auto inv : {LambdaInvariant::N, LambdaInvariant::M})
                    worst = std::max(worst, detail::max_raw_diff(lambda_poly(d, 2, inv), lambda_poly(other, 2, inv)));
            }
        }
        record("Theorem2: N, M, λ-coefficients decomposition/LU independence", worst < 1e-8,
               "max deviation = " + fmt(worst));
    }

    // Screening never separates LU-equivalent pairs.
    {
        std::size_t false_positives = 0;
        for (std::size_t t = 0; t < opt.trials; ++t) {
            const auto rho = detail::selftest_state(opt.seed + 3, t);
            const auto locals = random_local_unitaries(rho.dims(), derive_seed(opt.seed, 7000 + t));
            if (screen(rho, apply_local_unitary_density(rho, locals)).verdict == Verdict::NotEquivalent)
                ++false_positives;
        }
        record("Soundness: LU pairs never NotEquivalent", false_positives == 0,
               std::to_string(false_positives) + " false positives");
    }

    if (opt.full) {
        double worst = 0.0;
        for (std::size_t t = 0; t < opt.trials; ++t) {
            const auto rho = detail::selftest_state(opt.seed + 4, t);
            const auto d = eigen_decomposition(rho);
            const auto base = lambda_poly(d, 1, LambdaInvariant::det).cleaned();
            for (std::size_t extra : {1u, 2u}) {
                const auto padded = lambda_poly(pad_with_zeros(d, d.size() + extra), 1, LambdaInvariant::det);
                worst = std::max(worst, max_coeff_diff(Polynomial(padded.raw), base.shifted(extra)));
            }
        }
        record("Remark: padding law det(Ω'-λE) = λ^(J-r) det(Ω-λE)", worst < 1e-9, "max coefficient deviation = " + fmt(worst));
    }

    if (opt.full) {
        double worst_rel = 0.0;
        double worst_forms = 0.0;
        for (std::size_t t = 0; t < opt.trials; ++t) {
            const auto g = ginibre(8, 1, derive_seed(opt.seed + 5, t));
            Tensor222 a{};
            std::copy(g.entries().begin(), g.entries().end(), a.begin());
            const auto b = ginibre(2, 2, derive_seed(opt.seed + 6, t));
            const complex det_a = cayley_det_222(a);
            worst_forms = std::max(worst_forms, std::abs(det_a - cayley_det_222_compact(a)) / std::abs(det_a));
            const complex db = determinant(b);
            for (std::size_t slot = 0; slot < 3; ++slot) {
                const complex expect = det_a * db * db;
                worst_rel = std::max(worst_rel, std::abs(cayley_det_222(act_on_slot(a, b, slot)) - expect) / std::abs(expect));
            }
        }
        record("Cayley: SL covariance Det(B·A) = det(B)² Det(A)", worst_rel < 1e-8 && worst_forms < 1e-12,
               "max relative deviation = " + fmt(worst_rel) + ", 12-term vs compact = " + fmt(worst_forms));
    }
    return out;
}

inline bool report_selftest(const std::vector<PropertyResult>& results, std::ostream& os) {
    bool ok = true;
    for (const auto& r : results) {
        os << r.name << " " << (r.pass ? "PASS" : "FAIL") << "  (" << r.detail << ")\n";
        ok = ok && r.pass;
    }
    std::size_t passed = 0;
    for (const auto& r : results) passed += r.pass;
    os << passed << "/" << results.size() << " properties passed\n";
    return ok;
}

} // namespace luinv
