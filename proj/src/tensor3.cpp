#include "tcur/tensor3.hpp"

namespace tcur {

std::string Dims::str() const {
    return "(" + std::to_string(n1) + ", " + std::to_string(n2) + ", " + std::to_string(n3) + ")";
}

Tensor3 random_normal(Dims dims, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Tensor3 t(dims);
    for (double& v : t.data()) v = normal(rng);
    return t;
}

Matrix slice_matrix(const Tensor3& t, std::size_t k) { return t.slice(k); }

Tensor3 from_matrix(const Matrix& m) {
    Tensor3 t(std::size_t(m.rows()), std::size_t(m.cols()), 1);
    t.slice(0) = m;
    return t;
}

}  // namespace tcur
