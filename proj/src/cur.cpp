#include "tcur/cur.hpp"

#include <algorithm>
#include <numeric>

namespace tcur {

double ScoreVector::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

IndexSet::IndexSet(std::vector<std::size_t> indices, std::size_t extent) : indices_(std::move(indices)) {
    for (std::size_t n = 0; n < indices_.size(); ++n) {
        if (indices_[n] >= extent) {
            throw Error(ErrorKind::RankOutOfRange, "index " + std::to_string(indices_[n]) + " outside extent " +
                                                       std::to_string(extent));
        }
        if (n > 0 && indices_[n] <= indices_[n - 1]) {
            throw Error(ErrorKind::RankOutOfRange, "index set must be strictly increasing");
        }
    }
}

IndexSet IndexSet::all(std::size_t extent) {
    std::vector<std::size_t> idx(extent);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    return IndexSet(std::move(idx), extent);
}

namespace {

ScoreVector normalize(std::vector<double> sums) {
    const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
    if (!(total > 0.0)) throw Error(ErrorKind::ZeroTensor, "all fiber norms are zero");
    for (double& v : sums) v /= total;
    return ScoreVector{std::move(sums)};
}

}  // namespace

ScoreVector column_scores(const ComplexTensor3& w_hat) {
    const Dims d = w_hat.dims();
    std::vector<double> sums(d.n2, 0.0);
    for (std::size_t k = 0; k < d.n3; ++k) {
        const auto slice = w_hat.slice(k);
        for (std::size_t j = 0; j < d.n2; ++j) sums[j] += slice.col(Eigen::Index(j)).norm();
    }
    return normalize(std::move(sums));
}

ScoreVector row_scores(const ComplexTensor3& w_hat, const IndexSet& columns) {
    const Dims d = w_hat.dims();
    if (columns.size() == 0) throw Error(ErrorKind::RankOutOfRange, "empty column set");
    if (columns.indices().back() >= d.n2) {
        throw Error(ErrorKind::RankOutOfRange, "column index outside tensor with dims " + d.str());
    }
    std::vector<double> sums(d.n1, 0.0);
    for (std::size_t k = 0; k < d.n3; ++k) {
        for (std::size_t i = 0; i < d.n1; ++i) {
            double sq = 0.0;
            for (std::size_t j : columns.indices()) sq += std::norm(w_hat(i, j, k));
            sums[i] += std::sqrt(sq);
        }
    }
    return normalize(std::move(sums));
}

IndexSet select_top_r(const ScoreVector& scores, std::size_t r) {
    const std::size_t n = scores.size();
    if (r < 1 || r > n) {
        throw Error(ErrorKind::RankOutOfRange, "rank " + std::to_string(r) + " not in [1, " + std::to_string(n) + "]");
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores.values[a] > scores.values[b]; });
    order.resize(r);
    std::sort(order.begin(), order.end());
    return IndexSet(std::move(order), n);
}

TcurFactors decompose(const Tensor3& w, std::size_t r) {
    const Dims d = w.dims();
    if (r < 1 || r > std::min(d.n1, d.n2)) {
        throw Error(ErrorKind::RankOutOfRange,
                    "rank " + std::to_string(r) + " must lie in [1, min(n1, n2)] for dims " + d.str());
    }
    const ComplexTensor3 w_hat = fft_mode3(w);
    IndexSet columns = select_top_r(column_scores(w_hat), r);
    IndexSet rows = select_top_r(row_scores(w_hat, columns), r);

    const IndexSet all_rows = IndexSet::all(d.n1);
    const IndexSet all_cols = IndexSet::all(d.n2);
    TcurFactors f{
        .C = ifft_mode3(select(w_hat, all_rows, columns)),
        .core = ifft_mode3(select(w_hat, rows, columns)),
        .R = ifft_mode3(select(w_hat, rows, all_cols)),
        .rows = std::move(rows),
        .columns = std::move(columns),
        .rank = r,
    };
    return f;
}

Tensor3 reconstruct(const TcurFactors& f, double sv_tol_factor) {
    return tprod(f.C, tprod(tpinv(f.core, sv_tol_factor), f.R));
}

Matrix real_pinv(const Matrix& m, double sv_tol_factor) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    Matrix result = Matrix::Zero(m.cols(), m.rows());
    if (sigma.size() == 0 || sigma(0) == 0.0) return result;
    const double cutoff = sv_tol_factor * double(std::max(m.rows(), m.cols())) * sigma(0);
    for (Eigen::Index s = 0; s < sigma.size(); ++s) {
        if (sigma(s) <= cutoff) break;
        result.noalias() += svd.matrixV().col(s) * (1.0 / sigma(s)) * svd.matrixU().col(s).transpose();
    }
    return result;
}

MatrixCur matrix_cur(const Matrix& w, std::size_t r) {
    const auto rows_n = std::size_t(w.rows()), cols_n = std::size_t(w.cols());
    if (r < 1 || r > std::min(rows_n, cols_n)) {
        throw Error(ErrorKind::RankOutOfRange, "rank " + std::to_string(r) + " must lie in [1, " +
                                                   std::to_string(std::min(rows_n, cols_n)) + "]");
    }
    std::vector<double> col_sums(cols_n);
    for (std::size_t j = 0; j < cols_n; ++j) col_sums[j] = w.col(Eigen::Index(j)).norm();
    IndexSet columns = select_top_r(normalize(std::move(col_sums)), r);

    std::vector<double> row_sums(rows_n);
    for (std::size_t i = 0; i < rows_n; ++i) {
        double sq = 0.0;
        for (std::size_t j : columns.indices()) sq += w(Eigen::Index(i), Eigen::Index(j)) * w(Eigen::Index(i), Eigen::Index(j));
        row_sums[i] = std::sqrt(sq);
    }
    IndexSet rows = select_top_r(normalize(std::move(row_sums)), r);

    const auto rr = Eigen::Index(r);
    MatrixCur f;
    f.C.resize(w.rows(), rr);
    f.R.resize(rr, w.cols());
    f.intersection.resize(rr, rr);
    for (Eigen::Index b = 0; b < rr; ++b) f.C.col(b) = w.col(Eigen::Index(columns[std::size_t(b)]));
    for (Eigen::Index a = 0; a < rr; ++a) {
        f.R.row(a) = w.row(Eigen::Index(rows[std::size_t(a)]));
        for (Eigen::Index b = 0; b < rr; ++b) f.intersection(a, b) = f.R(a, Eigen::Index(columns[std::size_t(b)]));
    }
    f.U0 = Matrix::Zero(rr, rr);
    f.rows = std::move(rows);
    f.columns = std::move(columns);
    return f;
}

Matrix reconstruct(const MatrixCur& f, double sv_tol_factor) {
    return f.C * real_pinv(f.intersection, sv_tol_factor) * f.R;
}

}  // namespace tcur
