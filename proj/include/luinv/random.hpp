// random.hpp
// Seeded generators for random states, local unitaries and test tensors.

#pragma once

#include "luinv/linalg.hpp"
#include "luinv/states.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace luinv {

// splitmix64 step; derives independent child seeds from one parent seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline ComplexMatrix ginibre(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(rows, cols);
    for (auto& e : g.entries()) {
        const double re = normal(gen);
        const double im = normal(gen);
        e = complex(re, im);
    }
    return g;
}

// rho = G G^dag / tr(G G^dag) with G a dim x rank Ginibre matrix; rank is
// exactly `rank` with probability one.
inline DensityMatrix random_density(const Dims& dims, std::size_t rank, std::uint64_t seed) {
    const std::size_t n = dims_product(dims);
    const ComplexMatrix g = ginibre(n, rank, seed);
    ComplexMatrix rho = g * g.adjoint();
    rho *= 1.0 / rho.trace().real();
    for (std::size_t i = 0; i < n; ++i) {
        rho(i, i) = rho(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) rho(j, i) = std::conj(rho(i, j));
    }
    return validate_density(std::move(rho), dims);
}

// One Haar unitary per entry of dims.
inline std::vector<ComplexMatrix> random_local_unitaries(const Dims& dims, std::uint64_t seed) {
    std::vector<ComplexMatrix> out;
    out.reserve(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k) out.push_back(haar_unitary(dims[k], derive_seed(seed, k)));
    return out;
}

} // namespace luinv
