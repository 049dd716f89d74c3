#pragma once

#include <cstddef>
#include <vector>

#include "tcur/tproduct.hpp"

namespace tcur {

/// Normalized importance scores, one per candidate column or row.
struct ScoreVector {
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double sum() const;
};

/// Strictly increasing list of 0-based indices.
class IndexSet {
public:
    IndexSet() = default;
    /// Validates ordering and the upper bound `extent`.
    IndexSet(std::vector<std::size_t> indices, std::size_t extent);

    static IndexSet all(std::size_t extent);

    const std::vector<std::size_t>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    std::size_t operator[](std::size_t n) const { return indices_[n]; }
    bool operator==(const IndexSet&) const = default;

private:
    std::vector<std::size_t> indices_;
};

/// Output of the tensor CUR decomposition. `core` is the sampled
/// intersection W(I, J, :); the reconstruction uses its pseudoinverse.
struct TcurFactors {
    Tensor3 C;     // n1 x r x n3
    Tensor3 core;  // r x r x n3
    Tensor3 R;     // r x n2 x n3
    IndexSet rows;     // I
    IndexSet columns;  // J
    std::size_t rank = 0;
};

/// Column score: summed Fourier-domain column fiber norms, normalized to sum to one.
ScoreVector column_scores(const ComplexTensor3& w_hat);

/// Row score restricted to the selected columns.
ScoreVector row_scores(const ComplexTensor3& w_hat, const IndexSet& columns);

/// Indices of the r largest scores, ties to the smaller index, sorted ascending.
IndexSet select_top_r(const ScoreVector& scores, std::size_t r);

// Mode-1 / mode-2 sub-tensor extraction.
template <typename T>
BasicTensor3<T> select(const BasicTensor3<T>& t, const IndexSet& rows, const IndexSet& columns) {
    BasicTensor3<T> out(rows.size(), columns.size(), t.n3());
    for (std::size_t k = 0; k < t.n3(); ++k)
        for (std::size_t a = 0; a < rows.size(); ++a)
            for (std::size_t b = 0; b < columns.size(); ++b) out(a, b, k) = t(rows[a], columns[b], k);
    return out;
}

/// Tensor CUR: Fourier-domain column scores pick J, row scores on J pick I.
TcurFactors decompose(const Tensor3& w, std::size_t r);

/// C * pinv(core) * R.
Tensor3 reconstruct(const TcurFactors& f, double sv_tol_factor = kDefaultSvTolFactor);

struct MatrixCur {
    Matrix C;   // rows x r
    Matrix U0;  // r x r, zero
    Matrix R;   // r x cols
    IndexSet rows;
    IndexSet columns;
    /// W(I, J), kept so the baseline can be reconstructed without the source matrix.
    Matrix intersection;
};

/// Per-matrix CUR with the same norm-based top-r selection at n3 = 1.
MatrixCur matrix_cur(const Matrix& w, std::size_t r);

/// C * pinv(W(I, J)) * R.
Matrix reconstruct(const MatrixCur& f, double sv_tol_factor = kDefaultSvTolFactor);

/// Real pseudoinverse with the tpinv truncation rule.
Matrix real_pinv(const Matrix& m, double sv_tol_factor = kDefaultSvTolFactor);

}  // namespace tcur
