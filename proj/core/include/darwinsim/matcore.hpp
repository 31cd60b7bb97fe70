#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace darwinsim {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Shared numerical policy. All residuals are entrywise max-norm.
inline constexpr double kHermitianTol = 1e-10;  // accepted ||a - a^dag|| for Hermitian inputs
inline constexpr double kEigClip = -1e-12;      // eigenvalues in [kEigClip, 0) are clipped to 0
inline constexpr Eigen::Index kMaxDim = 1 << 14; // hard cap for explicit matrices

const ComplexMatrix& pauli_x();
const ComplexMatrix& pauli_y();
const ComplexMatrix& pauli_z();
ComplexMatrix identity(Eigen::Index n);

double max_norm(const ComplexMatrix& a);
double hermiticity_residual(const ComplexMatrix& a);

// Kronecker products. Throws std::length_error when the result would exceed kMaxDim.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor(const ComplexVector& a, const ComplexVector& b);

// Traces out every subsystem not listed in `keep`. `dims` lists the subsystem
// dimensions in tensor order (first factor most significant); their product
// must equal the matrix dimension. `keep` holds strictly ascending subsystem
// indices; kept factors retain their original order. An empty `keep` yields
// the 1x1 matrix holding the trace.
ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            const std::vector<Eigen::Index>& dims,
                            const std::vector<std::size_t>& keep);

struct HermitianSpectrum {
  Eigen::VectorXd eigenvalues;  // sorted descending
  ComplexMatrix eigenvectors;   // orthonormal columns, column k pairs with eigenvalues[k]
};

// Throws std::invalid_argument unless ||a - a^dag|| <= kHermitianTol.
HermitianSpectrum eig_hermitian(const ComplexMatrix& a);

// U = exp(-i h t) for Hermitian h, computed from the eigendecomposition of h.
ComplexMatrix expm_hermitian_generator(const ComplexMatrix& h, double t);

double commutator_residual(const ComplexMatrix& a, const ComplexMatrix& b);
double normality_residual(const ComplexMatrix& a);
bool is_normal(const ComplexMatrix& a, double tol = 1e-10);

}  // namespace darwinsim
