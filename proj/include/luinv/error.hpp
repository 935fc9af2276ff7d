// error.hpp
// Error type shared by every luinv module.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace luinv {

enum class errc {
    not_hermitian,
    no_convergence,
    not_unit_trace,
    not_psd,
    dimension_mismatch,
    not_unitary,
    bad_length,
    bad_cut,
    too_large,
    bad_shape,
    unsupported_format,
    not_bipartite,
};

constexpr std::string_view errc_name(errc code) noexcept {
    switch (code) {
    case errc::not_hermitian: return "NotHermitian";
    case errc::no_convergence: return "NoConvergence";
    case errc::not_unit_trace: return "NotUnitTrace";
    case errc::not_psd: return "NotPSD";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::not_unitary: return "NotUnitary";
    case errc::bad_length: return "BadLength";
    case errc::bad_cut: return "BadCut";
    case errc::too_large: return "TooLarge";
    case errc::bad_shape: return "BadShape";
    case errc::unsupported_format: return "UnsupportedFormat";
    case errc::not_bipartite: return "NotBipartite";
    }
    return "Unknown";
}

// Thrown by all library operations. what() starts with the error name,
// e.g. "NotPSD: minimum eigenvalue -0.1 below -1e-10".
class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail, double residual = 0.0)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
          code_(code),
          residual_(residual) {}

    errc code() const noexcept { return code_; }
    std::string_view name() const noexcept { return errc_name(code_); }
    // Measured violation for validation failures, 0 otherwise.
    double residual() const noexcept { return residual_; }

private:
    errc code_;
    double residual_;
};

} // namespace luinv
