// equivalence.hpp
// One-sided LU-equivalence screening. Two states whose invariants differ
// are certainly not LU equivalent; matching invariants prove nothing, so the
// strongest positive verdict is Inconclusive.

#pragma once

#include "luinv/invariants.hpp"
#include "luinv/linalg.hpp"
#include "luinv/states.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace luinv {

struct ScreenConfig {
    // Absolute eigenvalue threshold for the rank; unset means
    // 1e-10 * largest eigenvalue.
    std::optional<double> rank_tol;
    // A check fails when |a - b| > atol + rtol * max(|a|, |b|).
    double atol = 1e-8;
    double rtol = 1e-8;
    // Bipartition used for multipartite states.
    std::size_t cut = 1;
    // Recorded in reports; fingerprints themselves are deterministic.
    std::uint64_t seed = 0;
};

struct Fingerprint {
    Dims dims;
    std::size_t rank = 0;
    InvariantVector F;
    std::optional<complex> N; // rank 2 only
    std::optional<complex> M; // rank 2 only
    double kyfan = 0.0;
    std::vector<LambdaPolynomial> lambda;
};

// Fingerprint from an explicit decomposition of rho. Any decomposition
// gives the same values up to rounding.
inline Fingerprint fingerprint(const DensityMatrix& rho, const PureStateDecomposition& d, const ScreenConfig& cfg = {}) {
    Fingerprint fp;
    fp.dims = rho.dims();
    fp.rank = d.size();
    fp.F = f_invariants(gram_matrix(d));
    fp.kyfan = realignment_kyfan(as_bipartite(rho, cfg.cut));
    fp.lambda.push_back(lambda_poly(d, 1, LambdaInvariant::det));
    if (d.size() == 2) {
        const Hypermatrix h = hypermatrix(d, 2);
        fp.N = invariant_N(h);
        fp.M = invariant_M(h);
        fp.lambda.push_back(lambda_poly(d, 2, LambdaInvariant::N));
        fp.lambda.push_back(lambda_poly(d, 2, LambdaInvariant::M));
    }
    return fp;
}

// Fingerprint through the eigenvector decomposition.
inline Fingerprint fingerprint(const DensityMatrix& rho, const ScreenConfig& cfg = {}) {
    return fingerprint(rho, eigen_decomposition(rho, cfg.rank_tol, cfg.cut), cfg);
}

enum class Verdict { NotEquivalent, Inconclusive };

constexpr std::string_view verdict_name(Verdict v) noexcept {
    return v == Verdict::NotEquivalent ? "NotEquivalent" : "Inconclusive";
}

struct Check {
    std::string name;
    complex a;
    complex b;
    double diff = 0.0;
    bool pass = true;
    bool marginal = false;
};

struct Witness {
    std::string name;
    complex a;
    complex b;
    double diff = 0.0;
};

struct EquivalenceReport {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<Witness> witness;
    std::vector<Check> checks;
};

inline Check compare_values(std::string name, complex a, complex b, const ScreenConfig& cfg) {
    Check c{std::move(name), a, b, std::abs(a - b)};
    const double threshold = cfg.atol + cfg.rtol * std::max(std::abs(a), std::abs(b));
    c.pass = c.diff <= threshold;
    c.marginal = c.diff > 0.1 * threshold && c.diff <= 10.0 * threshold;
    return c;
}

// All checks in the fixed order: rank, F_i, N, M, kyfan, lambda coefficients.
inline std::vector<Check> fingerprint_checks(const Fingerprint& fa, const Fingerprint& fb, const ScreenConfig& cfg) {
    std::vector<Check> checks;
    {
        Check rank{"rank", static_cast<double>(fa.rank), static_cast<double>(fb.rank),
                   std::abs(static_cast<double>(fa.rank) - static_cast<double>(fb.rank))};
        rank.pass = fa.rank == fb.rank;
        checks.push_back(rank);
    }
    // F of a lower-rank state extends by zeros (zero eigenvalues add nothing
    // to the elementary symmetric polynomials).
    const std::size_t max_rank = std::max(fa.rank, fb.rank);
    auto f_at = [](const Fingerprint& f, std::size_t i) { return i < f.F.F.size() ? f.F.F[i] : complex{}; };
    for (std::size_t i = 1; i <= max_rank; ++i)
        checks.push_back(compare_values("F_" + std::to_string(i), f_at(fa, i), f_at(fb, i), cfg));
    if (fa.N && fb.N) checks.push_back(compare_values("invariant_N", *fa.N, *fb.N, cfg));
    if (fa.M && fb.M) checks.push_back(compare_values("invariant_M", *fa.M, *fb.M, cfg));
    checks.push_back(compare_values("kyfan", fa.kyfan, fb.kyfan, cfg));
    if (fa.rank == fb.rank) {
        for (const auto& la : fa.lambda) {
            auto it = std::find_if(fb.lambda.begin(), fb.lambda.end(),
                                   [&](const LambdaPolynomial& lb) { return lb.inv == la.inv && lb.s == la.s; });
            if (it == fb.lambda.end()) continue;
            const std::string base = "lambda_" + std::string(lambda_invariant_name(la.inv));
            for (std::size_t k = 0; k < la.raw.size() && k < it->raw.size(); ++k)
                checks.push_back(compare_values(base + "[" + std::to_string(k) + "]", la.raw[k], it->raw[k], cfg));
        }
    }
    return checks;
}

inline EquivalenceReport screen_fingerprints(const Fingerprint& fa, const Fingerprint& fb, const ScreenConfig& cfg = {}) {
    EquivalenceReport report;
    if (fa.dims != fb.dims) {
        Check c{"dimension signature", static_cast<double>(dims_product(fa.dims)),
                static_cast<double>(dims_product(fb.dims)), 0.0, false};
        report.checks.push_back(c);
    } else {
        report.checks = fingerprint_checks(fa, fb, cfg);
    }
    for (const auto& c : report.checks)
        if (!c.pass) {
            report.verdict = Verdict::NotEquivalent;
            report.witness = Witness{c.name, c.a, c.b, c.diff};
            break;
        }
    return report;
}

inline EquivalenceReport screen(const DensityMatrix& a, const DensityMatrix& b, const ScreenConfig& cfg = {}) {
    if (a.dims() != b.dims()) {
        EquivalenceReport report;
        report.verdict = Verdict::NotEquivalent;
        Check c{"dimension signature", static_cast<double>(a.dim()), static_cast<double>(b.dim()), 0.0, false};
        report.witness = Witness{c.name, c.a, c.b, c.diff};
        report.checks.push_back(std::move(c));
        return report;
    }
    return screen_fingerprints(fingerprint(a, cfg), fingerprint(b, cfg), cfg);
}

struct HintEntry {
    std::string name;
    double diff = 0.0;  // |a - b|
    double score = 0.0; // |a - b| / (|a| + |b|), in [0, 1]
};

// Orders every check by symmetric relative difference, largest first.
// Scores equal to nine digits keep the fixed check order.
inline std::vector<HintEntry> witness_search_hint(const EquivalenceReport& report) {
    std::vector<HintEntry> out;
    for (const auto& c : report.checks) {
        const double denom = std::abs(c.a) + std::abs(c.b);
        double score = denom > 0.0 ? c.diff / denom : 0.0;
        if (c.name == "dimension signature") score = 1.0;
        out.push_back({c.name, c.diff, score});
    }
    std::stable_sort(out.begin(), out.end(), [](const HintEntry& x, const HintEntry& y) {
        return std::llround(x.score * 1e9) > std::llround(y.score * 1e9);
    });
    return out;
}

inline std::vector<HintEntry> witness_search_hint(const DensityMatrix& a, const DensityMatrix& b,
                                                  const ScreenConfig& cfg = {}) {
    return witness_search_hint(screen(a, b, cfg));
}

} // namespace luinv
