#include <gtest/gtest.h>

#include <numeric>

#include "tcur/cur.hpp"
#include "test_util.hpp"

using namespace tcur;
using tcur::testing::random_tensor;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected a tcur::Error";
    return ErrorKind::IoFailure;
}

Tensor3 tubal_rank(Dims d, std::size_t r, std::uint64_t seed) {
    return tprod(random_tensor({d.n1, r, d.n3}, seed), random_tensor({r, d.n2, d.n3}, seed + 1));
}

}  // namespace

TEST(ColumnScores, SingleSupportAndHandValues) {
    Tensor3 t(3, 4, 2);
    t(0, 0, 0) = 1.0;
    t(2, 0, 1) = -2.0;
    const ScoreVector a = column_scores(fft_mode3(t));
    EXPECT_DOUBLE_EQ(a.values[0], 1.0);
    for (std::size_t j = 1; j < 4; ++j) EXPECT_EQ(a.values[j], 0.0);

    Tensor3 two(1, 2, 1);
    two(0, 0, 0) = 3.0;
    two(0, 1, 0) = -1.0;
    const ScoreVector b = column_scores(fft_mode3(two));
    EXPECT_DOUBLE_EQ(b.values[0], 0.75);
    EXPECT_DOUBLE_EQ(b.values[1], 0.25);
}

TEST(ColumnScores, ZeroTensorRejected) {
    EXPECT_EQ(kind_of([] { column_scores(fft_mode3(Tensor3(2, 2, 2))); }), ErrorKind::ZeroTensor);
}

TEST(RowScores, RestrictedToSelectedColumns) {
    Tensor3 t(2, 2, 1);
    t(0, 0, 0) = 3.0;
    t(1, 1, 0) = 4.0;
    const ScoreVector b = row_scores(fft_mode3(t), IndexSet({0}, 2));
    EXPECT_DOUBLE_EQ(b.values[0], 1.0);
    EXPECT_EQ(b.values[1], 0.0);

    const ScoreVector all = row_scores(fft_mode3(t), IndexSet::all(2));
    EXPECT_DOUBLE_EQ(all.values[0], 3.0 / 7.0);

    Tensor3 single(3, 3, 2);
    single(1, 0, 0) = 1.0;
    single(1, 2, 1) = 5.0;
    const ScoreVector s = row_scores(fft_mode3(single), IndexSet::all(3));
    EXPECT_DOUBLE_EQ(s.values[1], 1.0);

    Tensor3 empty_column(2, 2, 1);
    empty_column(0, 0, 0) = 3.0;
    empty_column(1, 0, 0) = 1.0;
    EXPECT_EQ(kind_of([&] { row_scores(fft_mode3(empty_column), IndexSet({1}, 2)); }), ErrorKind::ZeroTensor);
}

TEST(Scores, SumToOne) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Tensor3 w = random_tensor({5, 7, 4}, seed);
        const ComplexTensor3 f = fft_mode3(w);
        const ScoreVector a = column_scores(f);
        EXPECT_NEAR(a.sum(), 1.0, 1e-12);
        EXPECT_NEAR(row_scores(f, select_top_r(a, 3)).sum(), 1.0, 1e-12);
    }
}

TEST(SelectTopR, OrderingAndTies) {
    EXPECT_EQ(select_top_r({{0.1, 0.5, 0.4}}, 2).indices(), (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(select_top_r({{0.25, 0.25, 0.25, 0.25}}, 2).indices(), (std::vector<std::size_t>{0, 1}));
    EXPECT_EQ(select_top_r({{0.2, 0.3, 0.5}}, 3).indices(), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(select_top_r({{0.4, 0.1, 0.4, 0.1}}, 3).indices(), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_EQ(kind_of([] { select_top_r({{0.5, 0.5}}, 0); }), ErrorKind::RankOutOfRange);
    EXPECT_EQ(kind_of([] { select_top_r({{0.5, 0.5}}, 3); }), ErrorKind::RankOutOfRange);
}

TEST(IndexSet, Validation) {
    EXPECT_THROW(IndexSet({2, 1}, 3), Error);
    EXPECT_THROW(IndexSet({1, 1}, 3), Error);
    EXPECT_THROW(IndexSet({3}, 3), Error);
    EXPECT_NO_THROW(IndexSet({0, 2}, 3));
}

TEST(Tcur, FactorsAreSpatialSubtensors) {
    const Tensor3 w = random_tensor({6, 5, 4}, 20);
    const TcurFactors f = decompose(w, 3);
    EXPECT_EQ(f.C.dims(), (Dims{6, 3, 4}));
    EXPECT_EQ(f.core.dims(), (Dims{3, 3, 4}));
    EXPECT_EQ(f.R.dims(), (Dims{3, 5, 4}));
    EXPECT_LE(rel_error(f.C, select(w, IndexSet::all(6), f.columns)), 1e-12);
    EXPECT_LE(rel_error(f.core, select(w, f.rows, f.columns)), 1e-12);
    EXPECT_LE(rel_error(f.R, select(w, f.rows, IndexSet::all(5))), 1e-12);
}

TEST(Tcur, ColumnsFollowFourierNorms) {
    // Brute-force column selection straight from the direct DFT.
    const Tensor3 w = random_tensor({4, 6, 3}, 21);
    const ComplexTensor3 f = tcur::testing::naive_dft(w);
    std::vector<double> norms(6, 0.0);
    for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t k = 0; k < 3; ++k) {
            double sq = 0.0;
            for (std::size_t i = 0; i < 4; ++i) sq += std::norm(f(i, j, k));
            norms[j] += std::sqrt(sq);
        }
    std::vector<std::size_t> order(6);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return norms[a] > norms[b]; });
    order.resize(2);
    std::sort(order.begin(), order.end());
    EXPECT_EQ(decompose(w, 2).columns.indices(), order);
}

TEST(Tcur, FullSelectionReconstructs) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Tensor3 w = random_tensor({4 + seed % 3, 6 - seed % 3, 1 + seed % 4}, 30 + seed);
        EXPECT_LE(rel_error(reconstruct(decompose(w, std::min(w.n1(), w.n2()))), w), 1e-8);
    }
}

TEST(Tcur, ExactAtTrueTubalRank) {
    const Tensor3 w = tubal_rank({9, 7, 5}, 2, 40);
    EXPECT_LE(rel_error(reconstruct(decompose(w, 2)), w), 1e-8);
}

TEST(Tcur, ScalarTensor) {
    const Tensor3 w(Dims{1, 1, 1}, {5.0});
    const TcurFactors f = decompose(w, 1);
    EXPECT_EQ(f.C, w);
    EXPECT_EQ(f.core, w);
    EXPECT_EQ(f.R, w);
    EXPECT_LE(rel_error(reconstruct(f), w), 1e-15);
}

TEST(Tcur, Errors) {
    const Tensor3 w = random_tensor({3, 4, 2}, 50);
    EXPECT_EQ(kind_of([&] { decompose(w, 0); }), ErrorKind::RankOutOfRange);
    EXPECT_EQ(kind_of([&] { decompose(w, 4); }), ErrorKind::RankOutOfRange);
    EXPECT_EQ(kind_of([] { decompose(Tensor3(3, 3, 2), 1); }), ErrorKind::ZeroTensor);
}

TEST(Tcur, ScaleInvariantSelection) {
    const Tensor3 w = random_tensor({7, 8, 3}, 60);
    const TcurFactors ref = decompose(w, 3);
    for (double s : {1e-3, 1e3, 0.5}) {
        const TcurFactors f = decompose(w * s, 3);
        EXPECT_EQ(f.rows, ref.rows);
        EXPECT_EQ(f.columns, ref.columns);
    }
}

TEST(Reconstruct, IdentityCore) {
    const Tensor3 c = random_tensor({5, 2, 3}, 70), r = random_tensor({2, 4, 3}, 71);
    TcurFactors f{c, tidentity(2, 3), r, IndexSet({0, 1}, 5), IndexSet({0, 1}, 4), 2};
    EXPECT_LE(rel_error(reconstruct(f), tprod(c, r)), 1e-12);
}

TEST(Reconstruct, ApproximationErrorIsFinite) {
    const Tensor3 w = random_tensor({8, 8, 4}, 80);
    const double err = rel_error(reconstruct(decompose(w, 3)), w);
    EXPECT_TRUE(std::isfinite(err));
    EXPECT_GT(err, 0.0);
}

TEST(MatrixCur, MatchesTcurAtSingleSlice) {
    const Tensor3 w = random_tensor({6, 5, 1}, 90);
    const MatrixCur m = matrix_cur(slice_matrix(w, 0), 3);
    const TcurFactors t = decompose(w, 3);
    EXPECT_EQ(m.rows, t.rows);
    EXPECT_EQ(m.columns, t.columns);
    EXPECT_LE((m.C - slice_matrix(t.C, 0)).norm(), 1e-14);
    EXPECT_LE((m.R - slice_matrix(t.R, 0)).norm(), 1e-14);
    EXPECT_TRUE(m.U0.isZero(0.0));
    EXPECT_EQ(m.U0.rows(), 3);
}

TEST(MatrixCur, RankOneExact) {
    Eigen::VectorXd u(4), v(3);
    u << 1.0, -2.0, 0.5, 3.0;
    v << 2.0, 0.0, -1.0;
    const Matrix w = u * v.transpose();
    EXPECT_LE((reconstruct(matrix_cur(w, 1)) - w).norm() / w.norm(), 1e-10);
    EXPECT_EQ(kind_of([&] { matrix_cur(w, 4); }), ErrorKind::RankOutOfRange);
    EXPECT_EQ(kind_of([] { matrix_cur(Matrix::Zero(3, 3), 1); }), ErrorKind::ZeroTensor);
}
