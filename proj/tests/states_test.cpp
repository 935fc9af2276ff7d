#include "luinv/invariants.hpp"
#include "luinv/random.hpp"
#include "luinv/reference_states.hpp"
#include "luinv/states.hpp"

#include "gtest/gtest.h"

#include <cmath>

using namespace luinv;

namespace {

errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no luinv::error thrown";
    return errc::bad_shape;
}

ComplexMatrix single_entry(std::size_t n, std::size_t m, std::size_t r, std::size_t c, complex v) {
    ComplexMatrix a(n, m);
    a(r, c) = v;
    return a;
}

} // namespace

TEST(validate_density, accepts_rho1) {
    const auto rho = validate_density(ComplexMatrix::diagonal({0.5, 0.5, 0.0, 0.0}), {2, 2});
    EXPECT_EQ(rho.dims(), (Dims{2, 2}));
    EXPECT_EQ(rho.tol(), default_structure_tol);
    EXPECT_TRUE(rho.is_bipartite());
}

TEST(validate_density, rejects_trace_two) {
    EXPECT_EQ(code_of([] { validate_density(ComplexMatrix::identity(2), {2}); }), errc::not_unit_trace);
}

TEST(validate_density, rejects_negative_eigenvalue) {
    // Eigenvalues 1.1 and -0.1.
    const ComplexMatrix m{{0.5, 0.6}, {0.6, 0.5}};
    try {
        validate_density(m, {2});
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::not_psd);
        EXPECT_NEAR(e.residual(), 0.1, 1e-12);
        EXPECT_NE(std::string(e.what()).find("NotPSD"), std::string::npos);
    }
}

TEST(validate_density, rejects_asymmetry_and_shape) {
    EXPECT_EQ(code_of([] { validate_density(ComplexMatrix{{0.5, 0.1}, {0.0, 0.5}}, {2}); }), errc::not_hermitian);
    EXPECT_EQ(code_of([] { validate_density(ComplexMatrix::identity(3) * (1.0 / 3), {2, 2}); }),
              errc::dimension_mismatch);
    EXPECT_EQ(code_of([] { validate_density(ComplexMatrix::identity(1), {1}); }), errc::bad_shape);
    EXPECT_EQ(code_of([] { validate_density(ComplexMatrix::identity(2) * 0.5, {}); }), errc::bad_shape);
    auto nan = ComplexMatrix::identity(2) * 0.5;
    nan(0, 1) = complex(std::nan(""), 0.0);
    EXPECT_EQ(code_of([&] { validate_density(nan, {2}); }), errc::bad_shape);
}

TEST(validate_density, tolerance_is_respected) {
    auto m = ComplexMatrix::identity(2) * 0.5;
    m(0, 0) += 1e-7;
    EXPECT_THROW(validate_density(m, {2}), error);
    EXPECT_NO_THROW(validate_density(m, {2}, 1e-6));
}

TEST(eigen_decomposition, rho1_rank_two) {
    const auto d = eigen_decomposition(reference::rho1());
    ASSERT_EQ(d.size(), 2u);
    EXPECT_EQ(d.n, 2u);
    EXPECT_EQ(d.m, 2u);
    // Any orthonormal basis of span{|00>, |01>} is valid: all weight sits in row 0.
    for (const auto& a : d.mats) {
        EXPECT_NEAR(std::abs(a(1, 0)), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(a(1, 1)), 0.0, 1e-15);
        EXPECT_NEAR(std::norm(a(0, 0)) + std::norm(a(0, 1)), 0.5, 1e-14);
    }
    EXPECT_LT(max_abs_diff(reconstruct(d), reference::rho1().matrix()), 1e-14);
}

TEST(eigen_decomposition, sigma2_matches_printed_form) {
    const auto d = eigen_decomposition(reference::sigma2());
    ASSERT_EQ(d.size(), 2u);
    EXPECT_NEAR(std::abs(d.mats[0](0, 0)), std::sqrt(2.0 / 3.0), 1e-14);
    EXPECT_NEAR(std::abs(d.mats[1](1, 1)), 1.0 / std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(d.mats[0].max_abs(), std::sqrt(2.0 / 3.0), 1e-14);
    EXPECT_NEAR(d.mats[1].max_abs(), 1.0 / std::sqrt(3.0), 1e-14);
}

TEST(eigen_decomposition, pure_product_state) {
    const auto rho = validate_density(ComplexMatrix::diagonal({1.0, 0.0, 0.0, 0.0}), {2, 2});
    const auto d = eigen_decomposition(rho);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_NEAR(std::abs(d.mats[0](0, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(d.mats[0](1, 1)), 0.0, 1e-15);
}

TEST(eigen_decomposition, explicit_rank_tol) {
    const auto rho = validate_density(ComplexMatrix::diagonal({0.9, 0.1 - 1e-6, 1e-6, 0.0}), {2, 2});
    EXPECT_EQ(eigen_decomposition(rho).size(), 3u);
    EXPECT_EQ(eigen_decomposition(rho, 1e-5).size(), 2u);
}

TEST(eigen_decomposition, multipartite_cut) {
    const auto rho = random_density({2, 2, 2}, 2, 5);
    const auto d1 = eigen_decomposition(rho, {}, 1);
    const auto d2 = eigen_decomposition(rho, {}, 2);
    EXPECT_EQ(d1.n, 2u);
    EXPECT_EQ(d1.m, 4u);
    EXPECT_EQ(d2.n, 4u);
    EXPECT_EQ(d2.m, 2u);
    EXPECT_LT(max_abs_diff(reconstruct(d1), rho.matrix()), 1e-12);
    EXPECT_LT(max_abs_diff(reconstruct(d2), rho.matrix()), 1e-12);
    EXPECT_EQ(code_of([&] { eigen_decomposition(rho, {}, 3); }), errc::bad_cut);
}

TEST(eigen_decomposition, property_round_trip) {
    std::size_t trial = 0;
    for (const Dims& dims : {Dims{2, 2}, Dims{2, 3}, Dims{3, 2}, Dims{3, 3}})
        for (std::size_t rank = 1; rank <= 4; ++rank, ++trial) {
            const auto rho = random_density(dims, rank, 900 + trial);
            const auto d = eigen_decomposition(rho);
            EXPECT_EQ(d.size(), rank);
            EXPECT_LT(max_abs_diff(reconstruct(d), rho.matrix()), 1e-9);
            complex total = 0.0;
            for (const auto& a : d.mats) total += trace_of_product(a, a.adjoint());
            EXPECT_NEAR(std::abs(total - 1.0), 0.0, 1e-10);
        }
}

TEST(mix_decomposition, identity_is_exact) {
    const auto d = reference::rho1_decomposition();
    const auto b = mix_decomposition(d, ComplexMatrix::identity(2));
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(b.mats[i], d.mats[i]);
}

TEST(mix_decomposition, hadamard_on_rho1) {
    const double h = 1.0 / std::sqrt(2.0);
    const ComplexMatrix u{{h, h}, {h, -h}};
    const auto b = mix_decomposition(reference::rho1_decomposition(), u);
    for (const auto& m : b.mats) {
        EXPECT_NEAR(std::abs(m(0, 0)), 0.5, 1e-15);
        EXPECT_NEAR(std::abs(m(0, 1)), 0.5, 1e-15);
        EXPECT_EQ(m(1, 0), complex(0.0));
        EXPECT_EQ(m(1, 1), complex(0.0));
    }
    EXPECT_LT(max_abs_diff(reconstruct(b), reference::rho1().matrix()), 1e-15);
}

TEST(mix_decomposition, diagonal_phases_conjugate_gram) {
    const auto d = eigen_decomposition(random_density({2, 3}, 3, 77));
    const auto u = ComplexMatrix::diagonal({std::polar(1.0, 0.3), std::polar(1.0, -1.1), std::polar(1.0, 2.0)});
    // Oracle: Omega'_ij = sum_kl U_ik conj(U_jl) tr(A_k A_l^dag), spelled out.
    const auto b = mix_decomposition(d, u);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            const complex got = trace_of_product(b.mats[i], b.mats[j].adjoint());
            const complex expect =
                u(i, i) * std::conj(u(j, j)) * trace_of_product(d.mats[i], d.mats[j].adjoint());
            EXPECT_LT(std::abs(got - expect), 1e-14);
        }
}

TEST(mix_decomposition, errors) {
    const auto d = reference::rho1_decomposition();
    EXPECT_EQ(code_of([&] { mix_decomposition(d, ComplexMatrix::identity(3)); }), errc::dimension_mismatch);
    EXPECT_EQ(code_of([&] { mix_decomposition(d, ComplexMatrix{{1, 1}, {0, 1}}); }), errc::not_unitary);
}

TEST(mix_decomposition, property_preserves_reconstruction) {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const auto rho = random_density({3, 3}, 4, 40 + s);
        const auto d = eigen_decomposition(rho);
        for (std::uint64_t k = 0; k < 100; ++k) {
            const auto b = mix_decomposition(d, haar_unitary(d.size(), derive_seed(s, k)));
            ASSERT_LT(max_abs_diff(reconstruct(b), rho.matrix()), 1e-9);
        }
    }
}

TEST(pad_with_zeros, behaviour) {
    const auto d = reference::rho1_decomposition();
    const auto same = pad_with_zeros(d, 2);
    EXPECT_EQ(same.size(), 2u);
    EXPECT_EQ(same.mats[1], d.mats[1]);
    const auto four = pad_with_zeros(d, 4);
    ASSERT_EQ(four.size(), 4u);
    EXPECT_EQ(four.mats[3], ComplexMatrix::zeros(2, 2));
    // char_poly of the padded Gram matrix picks up lambda^2.
    const auto p = char_poly(gram_matrix(four).omega);
    EXPECT_EQ(p, char_poly(gram_matrix(d).omega).shifted(2));
    EXPECT_EQ(code_of([&] { pad_with_zeros(d, 1); }), errc::bad_length);
}

TEST(pad_with_zeros, pure_state_gram) {
    const PureStateDecomposition d{2, 2, {single_entry(2, 2, 0, 0, 1.0)}};
    EXPECT_EQ(gram_matrix(pad_with_zeros(d, 3)).omega, ComplexMatrix::diagonal({1.0, 0.0, 0.0}));
}

TEST(pad_with_zeros, property_pad_then_mix) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto rho = random_density({2, 3}, 1 + s % 4, 300 + s);
        const auto d = pad_with_zeros(eigen_decomposition(rho), 6);
        const auto b = mix_decomposition(d, haar_unitary(6, s));
        EXPECT_LT(max_abs_diff(reconstruct(b), rho.matrix()), 1e-9);
    }
}

TEST(apply_local_unitary, identity_unchanged) {
    const auto d = reference::sigma1_decomposition();
    const auto out = apply_local_unitary(d, ComplexMatrix::identity(2), ComplexMatrix::identity(2));
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(out.mats[i], d.mats[i]);
}

TEST(apply_local_unitary, flip_first_factor_of_rho1) {
    const ComplexMatrix x{{0, 1}, {1, 0}};
    const auto out = apply_local_unitary(reference::rho1_decomposition(), x, ComplexMatrix::identity(2));
    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_EQ(out.mats[0], single_entry(2, 2, 1, 0, h));
    EXPECT_EQ(out.mats[1], single_entry(2, 2, 1, 1, h));
    EXPECT_LT(max_abs_diff(gram_matrix(out).omega, ComplexMatrix::diagonal({0.5, 0.5})), 1e-15);
}

TEST(apply_local_unitary, gram_unchanged_seed_42) {
    const auto d = eigen_decomposition(random_density({2, 3}, 3, 42));
    const auto locals = random_local_unitaries({2, 3}, 42);
    const auto out = apply_local_unitary(d, locals[0], locals[1]);
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j)
            EXPECT_LT(std::abs(trace_of_product(out.mats[i], out.mats[j].adjoint()) -
                               trace_of_product(d.mats[i], d.mats[j].adjoint())),
                      1e-10);
}

TEST(apply_local_unitary, errors) {
    const auto d = reference::rho1_decomposition();
    EXPECT_EQ(code_of([&] { apply_local_unitary(d, ComplexMatrix::identity(3), ComplexMatrix::identity(2)); }),
              errc::dimension_mismatch);
    EXPECT_EQ(code_of([&] { apply_local_unitary(d, ComplexMatrix::identity(2) * 2.0, ComplexMatrix::identity(2)); }),
              errc::not_unitary);
}

TEST(apply_local_unitary, property_commutes_with_reconstruction) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const Dims dims = s % 2 ? Dims{2, 3} : Dims{3, 3};
        const auto rho = random_density(dims, 1 + s % 4, 600 + s);
        const auto locals = random_local_unitaries(dims, s);
        const auto d = apply_local_unitary(eigen_decomposition(rho), locals[0], locals[1]);
        const auto direct = apply_local_unitary_density(rho, locals);
        EXPECT_LT(max_abs_diff(reconstruct(d), direct.matrix()), 1e-9);
    }
}

TEST(apply_local_unitary_density, examples) {
    const auto rho = reference::rho1();
    const std::vector<ComplexMatrix> ids{ComplexMatrix::identity(2), ComplexMatrix::identity(2)};
    EXPECT_EQ(apply_local_unitary_density(rho, ids).matrix(), rho.matrix());
    const std::vector<ComplexMatrix> flip{ComplexMatrix{{0, 1}, {1, 0}}, ComplexMatrix::identity(2)};
    EXPECT_EQ(apply_local_unitary_density(rho, flip).matrix(), ComplexMatrix::diagonal({0.0, 0.0, 0.5, 0.5}));
    EXPECT_EQ(code_of([&] { apply_local_unitary_density(rho, std::span(ids).first(1)); }), errc::dimension_mismatch);
}

TEST(apply_local_unitary_density, property_spectrum_preserved) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto rho = random_density({2, 3}, 1 + s % 6, 700 + s);
        const auto out = apply_local_unitary_density(rho, random_local_unitaries(rho.dims(), s));
        const auto a = hermitian_eig(rho.matrix()).values;
        const auto b = hermitian_eig(out.matrix()).values;
        for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-10);
    }
}

TEST(flatten_multipartite, bipartite_is_plain_reshape) {
    std::vector<complex> v(6);
    for (std::size_t k = 0; k < 6; ++k) v[k] = complex(double(k), -double(k));
    const auto m = flatten_multipartite(v, std::vector<std::size_t>{2, 3}, 1);
    EXPECT_EQ(m.rows(), 2u);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(m(r, c), v[r * 3 + c]);
}

TEST(flatten_multipartite, ghz) {
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<complex> ghz(8);
    ghz[0] = ghz[7] = h;
    const auto m = flatten_multipartite(ghz, std::vector<std::size_t>{2, 2, 2}, 1);
    ASSERT_EQ(m.rows(), 2u);
    ASSERT_EQ(m.cols(), 4u);
    EXPECT_EQ(m(0, 0), complex(h));
    EXPECT_EQ(m(1, 3), complex(h));
    EXPECT_NEAR(m.max_abs(), h, 0.0);
    const auto m2 = flatten_multipartite(ghz, std::vector<std::size_t>{2, 2, 2}, 2);
    EXPECT_EQ(m2(0, 0), complex(h));
    EXPECT_EQ(m2(3, 1), complex(h));
}

TEST(flatten_multipartite, product_state_rank_one_every_cut) {
    const std::vector<std::size_t> dims{2, 3, 2};
    std::vector<complex> u{complex(0.6), complex(0, 0.8)};
    std::vector<complex> v{complex(1), complex(2, 1), complex(0, -1)};
    std::vector<complex> w{complex(0.3, 0.1), complex(-0.5)};
    std::vector<complex> coeffs;
    for (auto a : u)
        for (auto b : v)
            for (auto c : w) coeffs.push_back(a * b * c);
    for (std::size_t cut : {1u, 2u}) {
        const auto sv = singular_values(flatten_multipartite(coeffs, dims, cut));
        EXPECT_GT(sv[0], 0.1);
        for (std::size_t k = 1; k < sv.size(); ++k) EXPECT_LT(sv[k], 1e-12 * sv[0]);
    }
}

TEST(flatten_multipartite, errors) {
    const std::vector<complex> v(8);
    EXPECT_EQ(code_of([&] { flatten_multipartite(v, std::vector<std::size_t>{2, 2, 2}, 0); }), errc::bad_cut);
    EXPECT_EQ(code_of([&] { flatten_multipartite(v, std::vector<std::size_t>{2, 2, 2}, 3); }), errc::bad_cut);
    EXPECT_EQ(code_of([&] { flatten_multipartite(v, std::vector<std::size_t>{2, 3}, 1); }), errc::bad_length);
}

TEST(as_bipartite, groups_subsystems) {
    const auto rho = random_density({2, 2, 3}, 2, 8);
    EXPECT_EQ(as_bipartite(rho, 1).dims(), (Dims{2, 6}));
    EXPECT_EQ(as_bipartite(rho, 2).dims(), (Dims{4, 3}));
    EXPECT_EQ(as_bipartite(rho, 2).matrix(), rho.matrix());
}

TEST(random_density, has_requested_rank) {
    for (std::size_t rank = 1; rank <= 4; ++rank) {
        const auto rho = random_density({2, 2}, rank, rank);
        EXPECT_EQ(eigen_decomposition(rho).size(), rank);
    }
}
