#include "tcur/tproduct.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>

namespace tcur {

namespace {

void require_conformable(const Dims& a, const Dims& b, const char* op) {
    if (a.n2 != b.n1 || a.n3 != b.n3) {
        throw Error(ErrorKind::DimMismatch, std::string(op) + ": cannot multiply " + a.str() + " by " + b.str());
    }
}

}  // namespace

ComplexTensor3 fft_mode3(const Tensor3& t) {
    const Dims d = t.dims();
    ComplexTensor3 out(d);
    const std::size_t stride = d.slice_size();
    if (d.n3 == 1) {
        for (std::size_t n = 0; n < stride; ++n) out.data()[n] = t.data()[n];
        return out;
    }
    Eigen::FFT<double> fft;
    std::vector<Complex> tube(d.n3), spectrum(d.n3);
    for (std::size_t n = 0; n < stride; ++n) {
        for (std::size_t k = 0; k < d.n3; ++k) tube[k] = t.data()[k * stride + n];
        fft.fwd(spectrum, tube);
        for (std::size_t k = 0; k < d.n3; ++k) out.data()[k * stride + n] = spectrum[k];
    }
    return out;
}

Tensor3 ifft_mode3(const ComplexTensor3& t, double tol) {
    const Dims d = t.dims();
    const std::size_t stride = d.slice_size();
    std::vector<Complex> values(t.size());
    if (d.n3 == 1) {
        std::copy(t.data().begin(), t.data().end(), values.begin());
    } else {
        Eigen::FFT<double> fft;  // inverse is scaled by 1/n3
        std::vector<Complex> tube(d.n3), spatial(d.n3);
        for (std::size_t n = 0; n < stride; ++n) {
            for (std::size_t k = 0; k < d.n3; ++k) tube[k] = t.data()[k * stride + n];
            fft.inv(spatial, tube);
            for (std::size_t k = 0; k < d.n3; ++k) values[k * stride + n] = spatial[k];
        }
    }

    double max_real = 0.0, max_imag = 0.0;
    for (const Complex& v : values) {
        max_real = std::max(max_real, std::abs(v.real()));
        max_imag = std::max(max_imag, std::abs(v.imag()));
    }
    if (!(max_imag <= tol * (1.0 + max_real))) {
        throw Error(ErrorKind::ResidualImaginary, "inverse FFT left imaginary residual " + std::to_string(max_imag) +
                                                      " against real magnitude " + std::to_string(max_real));
    }

    Tensor3 out(d);
    for (std::size_t n = 0; n < values.size(); ++n) out.data()[n] = values[n].real();
    return out;
}

double conjugate_symmetry_residual(const ComplexTensor3& t) {
    const Dims d = t.dims();
    double worst = 0.0;
    for (std::size_t k = 0; k < d.n3; ++k) {
        const std::size_t mirror = (d.n3 - k) % d.n3;
        for (std::size_t i = 0; i < d.n1; ++i) {
            for (std::size_t j = 0; j < d.n2; ++j) {
                worst = std::max(worst, std::abs(t(i, j, k) - std::conj(t(i, j, mirror))));
            }
        }
    }
    return worst;
}

ComplexTensor3 slice_product(const ComplexTensor3& a, const ComplexTensor3& b) {
    require_conformable(a.dims(), b.dims(), "slice_product");
    ComplexTensor3 out(a.n1(), b.n2(), a.n3());
    for (std::size_t k = 0; k < a.n3(); ++k) out.slice(k).noalias() = a.slice(k) * b.slice(k);
    return out;
}

Tensor3 tprod(const Tensor3& a, const Tensor3& b) {
    require_conformable(a.dims(), b.dims(), "tprod");
    return ifft_mode3(slice_product(fft_mode3(a), fft_mode3(b)));
}

Matrix block_circulant(const Tensor3& a) {
    const Dims d = a.dims();
    const auto rows = Eigen::Index(d.n1), cols = Eigen::Index(d.n2);
    Matrix circ(rows * Eigen::Index(d.n3), cols * Eigen::Index(d.n3));
    for (std::size_t p = 0; p < d.n3; ++p) {
        for (std::size_t q = 0; q < d.n3; ++q) {
            const std::size_t k = (p + d.n3 - q) % d.n3;
            circ.block(Eigen::Index(p) * rows, Eigen::Index(q) * cols, rows, cols) = a.slice(k);
        }
    }
    return circ;
}

Matrix matvec(const Tensor3& b) {
    const Dims d = b.dims();
    const auto rows = Eigen::Index(d.n1);
    Matrix stacked(rows * Eigen::Index(d.n3), Eigen::Index(d.n2));
    for (std::size_t k = 0; k < d.n3; ++k) stacked.middleRows(Eigen::Index(k) * rows, rows) = b.slice(k);
    return stacked;
}

Tensor3 fold(const Matrix& stacked, std::size_t n3) {
    if (n3 == 0 || stacked.rows() % Eigen::Index(n3) != 0) {
        throw Error(ErrorKind::DimMismatch, "fold: " + std::to_string(stacked.rows()) +
                                                " rows cannot be split into " + std::to_string(n3) + " slices");
    }
    const Eigen::Index rows = stacked.rows() / Eigen::Index(n3);
    Tensor3 out(std::size_t(rows), std::size_t(stacked.cols()), n3);
    for (std::size_t k = 0; k < n3; ++k) out.slice(k) = stacked.middleRows(Eigen::Index(k) * rows, rows);
    return out;
}

Tensor3 tprod_bruteforce(const Tensor3& a, const Tensor3& b) {
    require_conformable(a.dims(), b.dims(), "tprod_bruteforce");
    return fold(block_circulant(a) * matvec(b), a.n3());
}

Tensor3 ttranspose(const Tensor3& a) {
    const Dims d = a.dims();
    Tensor3 out(d.n2, d.n1, d.n3);
    for (std::size_t k = 0; k < d.n3; ++k) {
        out.slice(k) = a.slice((d.n3 - k) % d.n3).transpose();
    }
    return out;
}

Tensor3 tidentity(std::size_t n, std::size_t n3) {
    Tensor3 out(n, n, n3);
    for (std::size_t i = 0; i < n; ++i) out(i, i, 0) = 1.0;
    return out;
}

ComplexMatrix complex_pinv(const ComplexMatrix& m, double sv_tol_factor) {
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sigma = svd.singularValues();
    ComplexMatrix result = ComplexMatrix::Zero(m.cols(), m.rows());
    if (sigma.size() == 0 || sigma(0) == 0.0) return result;
    const double cutoff = sv_tol_factor * double(std::max(m.rows(), m.cols())) * sigma(0);
    for (Eigen::Index s = 0; s < sigma.size(); ++s) {
        if (sigma(s) <= cutoff) break;  // sorted descending
        result.noalias() += svd.matrixV().col(s) * (1.0 / sigma(s)) * svd.matrixU().col(s).adjoint();
    }
    return result;
}

Tensor3 tpinv(const Tensor3& a, double sv_tol_factor) {
    const ComplexTensor3 spectrum = fft_mode3(a);
    ComplexTensor3 inverse(a.n2(), a.n1(), a.n3());
    for (std::size_t k = 0; k < a.n3(); ++k) {
        inverse.slice(k) = complex_pinv(ComplexMatrix(spectrum.slice(k)), sv_tol_factor);
    }
    return ifft_mode3(inverse);
}

double fro_norm(const Tensor3& a) {
    double sum = 0.0;
    for (double v : a.data()) sum += v * v;
    return std::sqrt(sum);
}

double rel_error(const Tensor3& a, const Tensor3& b) {
    if (a.dims() != b.dims()) {
        throw Error(ErrorKind::DimMismatch, "rel_error: " + a.dims().str() + " vs " + b.dims().str());
    }
    const double ref = fro_norm(b);
    if (ref == 0.0) throw Error(ErrorKind::ZeroReference, "rel_error against a zero tensor");
    return fro_norm(a - b) / ref;
}

double inner(const Tensor3& a, const Tensor3& b) {
    if (a.dims() != b.dims()) {
        throw Error(ErrorKind::DimMismatch, "inner: " + a.dims().str() + " vs " + b.dims().str());
    }
    double sum = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) sum += a.data()[n] * b.data()[n];
    return sum;
}

}  // namespace tcur
