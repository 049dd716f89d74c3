#include <gtest/gtest.h>

#include "tcur/tproduct.hpp"
#include "test_util.hpp"

using namespace tcur;
using tcur::testing::circular_tprod;
using tcur::testing::random_tensor;

TEST(Tensor3, SliceMajorLayout) {
    Tensor3 t(2, 3, 2);
    t(1, 2, 1) = 7.0;
    EXPECT_EQ(t.data()[1 * 6 + 1 * 3 + 2], 7.0);
    EXPECT_EQ(t.slice(1)(1, 2), 7.0);
    EXPECT_THROW(Tensor3(Dims{2, 2, 2}, std::vector<double>(7)), Error);
    EXPECT_THROW(Tensor3(0, 2, 2), Error);
}

TEST(FftMode3, ZerosAndSingleSlice) {
    const ComplexTensor3 z = fft_mode3(Tensor3(2, 2, 3));
    for (const Complex& v : z.data()) EXPECT_EQ(v, Complex(0.0));

    const Tensor3 t = random_tensor({3, 2, 1}, 1);
    const ComplexTensor3 f = fft_mode3(t);
    for (std::size_t n = 0; n < t.size(); ++n) EXPECT_EQ(f.data()[n], Complex(t.data()[n]));
}

TEST(FftMode3, TwoPointTubes) {
    Tensor3 t(1, 2, 2);
    t(0, 0, 0) = 1.0;
    t(0, 0, 1) = 1.0;
    t(0, 1, 0) = 1.0;
    t(0, 1, 1) = -1.0;
    const ComplexTensor3 f = fft_mode3(t);
    EXPECT_NEAR(std::abs(f(0, 0, 0) - Complex(2.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f(0, 0, 1)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f(0, 1, 0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(f(0, 1, 1) - Complex(2.0)), 0.0, 1e-15);
}

TEST(FftMode3, MatchesDirectDft) {
    for (std::size_t n3 : {1u, 2u, 3u, 5u, 7u, 8u}) {
        const Tensor3 t = random_tensor({3, 2, n3}, 10 + n3);
        const ComplexTensor3 fast = fft_mode3(t), slow = tcur::testing::naive_dft(t);
        for (std::size_t n = 0; n < t.size(); ++n) EXPECT_NEAR(std::abs(fast.data()[n] - slow.data()[n]), 0.0, 1e-12);
    }
}

TEST(IfftMode3, RoundTripAndSymmetry) {
    const Tensor3 t = random_tensor({4, 3, 5}, 2);
    const ComplexTensor3 f = fft_mode3(t);
    EXPECT_LE(conjugate_symmetry_residual(f), 1e-12);
    EXPECT_LE(rel_error(ifft_mode3(f), t), 1e-12);
    EXPECT_EQ(ifft_mode3(ComplexTensor3(2, 2, 3)), Tensor3(2, 2, 3));
}

TEST(IfftMode3, AsymmetricSpectrumRejected) {
    ComplexTensor3 f(1, 1, 2);
    f(0, 0, 1) = Complex(0.0, 1.0);
    try {
        ifft_mode3(f);
        FAIL() << "expected ResidualImaginary";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ResidualImaginary);
    }
}

TEST(Tprod, SingleSliceIsMatrixProduct) {
    const Tensor3 a = random_tensor({3, 4, 1}, 3), b = random_tensor({4, 2, 1}, 4);
    const Matrix expected = slice_matrix(a, 0) * slice_matrix(b, 0);
    EXPECT_LE((slice_matrix(tprod(a, b), 0) - expected).norm(), 1e-12);
}

TEST(Tprod, TwoSliceHandExpansion) {
    const Tensor3 a = random_tensor({2, 3, 2}, 5), b = random_tensor({3, 2, 2}, 6);
    const Matrix A1 = slice_matrix(a, 0), A2 = slice_matrix(a, 1);
    const Matrix B1 = slice_matrix(b, 0), B2 = slice_matrix(b, 1);
    const Tensor3 c = tprod_bruteforce(a, b);
    EXPECT_LE((slice_matrix(c, 0) - (A1 * B1 + A2 * B2)).norm(), 1e-12);
    EXPECT_LE((slice_matrix(c, 1) - (A2 * B1 + A1 * B2)).norm(), 1e-12);
}

TEST(Tprod, AgreesWithOracles) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::size_t> small(1, 8), depth(1, 6);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n1 = small(rng), n2 = small(rng), l = small(rng), n3 = depth(rng);
        const Tensor3 a = random_normal({n1, n2, n3}, rng), b = random_normal({n2, l, n3}, rng);
        const Tensor3 reference = circular_tprod(a, b);
        EXPECT_LE(rel_error(tprod(a, b), reference), 1e-10);
        EXPECT_LE(rel_error(tprod_bruteforce(a, b), reference), 1e-12);
    }
}

TEST(Tprod, IdentityAndAssociativity) {
    const Tensor3 a = random_tensor({3, 4, 5}, 8), b = random_tensor({4, 2, 5}, 9), c = random_tensor({2, 3, 5}, 10);
    EXPECT_LE(rel_error(tprod(tidentity(3, 5), a), a), 1e-12);
    EXPECT_LE(rel_error(tprod(a, tidentity(4, 5)), a), 1e-12);
    EXPECT_LE(rel_error(tprod_bruteforce(tidentity(3, 5), a), a), 0.0);
    EXPECT_LE(rel_error(tprod(tprod(a, b), c), tprod(a, tprod(b, c))), 1e-9);
}

TEST(Tprod, DimMismatch) {
    EXPECT_THROW(tprod(Tensor3(2, 3, 2), Tensor3(4, 2, 2)), Error);
    EXPECT_THROW(tprod(Tensor3(2, 3, 2), Tensor3(3, 2, 3)), Error);
    EXPECT_THROW(tprod_bruteforce(Tensor3(2, 3, 2), Tensor3(4, 2, 2)), Error);
}

TEST(Tidentity, FourierSlicesAreIdentity) {
    const ComplexTensor3 f = fft_mode3(tidentity(3, 4));
    for (std::size_t k = 0; k < 4; ++k) EXPECT_LE((f.slice(k) - ComplexMatrix::Identity(3, 3)).norm(), 1e-15);
    EXPECT_EQ(slice_matrix(tidentity(3, 1), 0), Matrix::Identity(3, 3));
}

TEST(Ttranspose, LayoutAndLaws) {
    const Tensor3 a = random_tensor({2, 3, 4}, 11);
    const Tensor3 t = ttranspose(a);
    EXPECT_EQ(t.dims(), (Dims{3, 2, 4}));
    EXPECT_EQ(slice_matrix(t, 0), slice_matrix(a, 0).transpose());
    EXPECT_EQ(slice_matrix(t, 1), slice_matrix(a, 3).transpose());
    EXPECT_EQ(slice_matrix(t, 3), slice_matrix(a, 1).transpose());
    EXPECT_EQ(ttranspose(t), a);

    const Tensor3 b = random_tensor({3, 5, 4}, 12);
    EXPECT_LE(rel_error(ttranspose(circular_tprod(a, b)), tprod(ttranspose(b), ttranspose(a))), 1e-10);

    const Tensor3 m = random_tensor({2, 3, 1}, 13);
    EXPECT_EQ(slice_matrix(ttranspose(m), 0), slice_matrix(m, 0).transpose());
}

TEST(Tpinv, InverseOfInvertibleMatrix) {
    const Tensor3 a = random_tensor({4, 4, 1}, 14);
    const Matrix inv = slice_matrix(a, 0).inverse();
    EXPECT_LE((slice_matrix(tpinv(a), 0) - inv).norm() / inv.norm(), 1e-10);
    EXPECT_LE(rel_error(tpinv(tidentity(3, 4)), tidentity(3, 4)), 1e-14);
}

TEST(Tpinv, PenroseLaws) {
    for (Dims d : {Dims{4, 4, 3}, Dims{5, 3, 4}, Dims{2, 6, 5}}) {
        const Tensor3 a = random_tensor(d, d.numel());
        const Tensor3 p = tpinv(a);
        EXPECT_LE(rel_error(tprod(a, tprod(p, a)), a), 1e-8);
        EXPECT_LE(rel_error(tprod(p, tprod(a, p)), p), 1e-8);
        // A A+ and A+ A are t-symmetric.
        const Tensor3 ap = tprod(a, p);
        EXPECT_LE(rel_error(ttranspose(ap), ap), 1e-8);
    }
}

TEST(Tpinv, RankDeficientSlicesTruncated) {
    // Tubal rank 1 tensor, 3x3: pinv must still satisfy A A+ A = A.
    const Tensor3 a = tprod(random_tensor({3, 1, 4}, 15), random_tensor({1, 3, 4}, 16));
    const Tensor3 p = tpinv(a);
    EXPECT_TRUE(p.all_finite());
    EXPECT_LE(rel_error(tprod(a, tprod(p, a)), a), 1e-8);
}

TEST(Norms, FrobeniusAndRelError) {
    EXPECT_EQ(fro_norm(Tensor3(2, 2, 2)), 0.0);
    Tensor3 ones(2, 2, 2);
    for (double& v : ones.data()) v = 1.0;
    EXPECT_DOUBLE_EQ(fro_norm(ones), std::sqrt(8.0));
    EXPECT_EQ(rel_error(ones, ones), 0.0);
    try {
        rel_error(ones, Tensor3(2, 2, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroReference);
    }
    EXPECT_THROW(rel_error(ones, Tensor3(2, 2, 3)), Error);
}
