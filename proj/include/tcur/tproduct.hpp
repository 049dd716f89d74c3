#pragma once

#include "tcur/tensor3.hpp"

namespace tcur {

/// Default bound on the relative imaginary residual accepted by ifft_mode3.
inline constexpr double kDefaultImagTol = 1e-8;

/// Default relative singular-value cutoff factor for tpinv (machine epsilon).
inline constexpr double kDefaultSvTolFactor = 2.220446049250313e-16;

/// Unnormalized forward DFT of every tube t(i, j, :).
ComplexTensor3 fft_mode3(const Tensor3& t);

/// Inverse DFT (1/n3 scaling) along mode 3, keeping the real part.
///
/// Throws ResidualImaginary when max|imag| > tol * (1 + max|real|), which
/// means the spectrum was not conjugate-symmetric.
Tensor3 ifft_mode3(const ComplexTensor3& t, double tol = kDefaultImagTol);

/// Largest |S_k - conj(S_{(n3-k) mod n3})| over all entries.
double conjugate_symmetry_residual(const ComplexTensor3& t);

/// Slice-wise product of two Fourier-domain tensors.
ComplexTensor3 slice_product(const ComplexTensor3& a, const ComplexTensor3& b);

/// t-product a * b through the Fourier domain.
Tensor3 tprod(const Tensor3& a, const Tensor3& b);

/// t-product computed as fold(circ(a) * MatVec(b)) with circ(a) materialized.
Tensor3 tprod_bruteforce(const Tensor3& a, const Tensor3& b);

/// Block-circulant matrix of a: block (p, q) is frontal slice (p - q) mod n3.
Matrix block_circulant(const Tensor3& a);

/// Frontal slices stacked vertically.
Matrix matvec(const Tensor3& b);

/// Inverse of matvec for a tensor with n3 slices.
Tensor3 fold(const Matrix& stacked, std::size_t n3);

/// t-transpose: each slice transposed, slices 2..n3 in reverse order.
Tensor3 ttranspose(const Tensor3& a);

/// Identity for the t-product: first slice I_n, remaining slices zero.
Tensor3 tidentity(std::size_t n, std::size_t n3);

/// Moore-Penrose pseudoinverse under the t-product.
///
/// Each Fourier slice is inverted through a complex SVD; singular values
/// below sv_tol_factor * max(n1, n2) * sigma_max are dropped.
Tensor3 tpinv(const Tensor3& a, double sv_tol_factor = kDefaultSvTolFactor);

/// Pseudoinverse of one complex matrix with the same truncation rule as tpinv.
ComplexMatrix complex_pinv(const ComplexMatrix& m, double sv_tol_factor = kDefaultSvTolFactor);

double fro_norm(const Tensor3& a);

/// fro_norm(a - b) / fro_norm(b). Throws ZeroReference when b is zero.
double rel_error(const Tensor3& a, const Tensor3& b);

/// Sum of element-wise products.
double inner(const Tensor3& a, const Tensor3& b);

}  // namespace tcur
