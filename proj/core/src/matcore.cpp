#include "darwinsim/matcore.hpp"

#include <stdexcept>
#include <string>

namespace darwinsim {

namespace {

void require_square(const ComplexMatrix& a, const char* who) {
  if (a.rows() != a.cols())
    throw std::invalid_argument(std::string(who) + ": matrix must be square, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
}

}  // namespace

const ComplexMatrix& pauli_x() {
  static const ComplexMatrix m = [] {
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
  }();
  return m;
}

const ComplexMatrix& pauli_y() {
  static const ComplexMatrix m = [] {
    ComplexMatrix y(2, 2);
    y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return y;
  }();
  return m;
}

const ComplexMatrix& pauli_z() {
  static const ComplexMatrix m = [] {
    ComplexMatrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
  }();
  return m;
}

ComplexMatrix identity(Eigen::Index n) {
  if (n < 1) throw std::invalid_argument("identity: dimension must be positive");
  return ComplexMatrix::Identity(n, n);
}

double max_norm(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const ComplexMatrix& a) {
  require_square(a, "hermiticity_residual");
  return max_norm(a - a.adjoint());
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > kMaxDim || cols > kMaxDim)
    throw std::length_error("tensor: result dimension " + std::to_string(rows) + "x" +
                            std::to_string(cols) + " exceeds cap " + std::to_string(kMaxDim));
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector tensor(const ComplexVector& a, const ComplexVector& b) {
  const Eigen::Index n = a.size() * b.size();
  if (n > kMaxDim * 4)
    throw std::length_error("tensor: vector dimension " + std::to_string(n) + " exceeds cap");
  ComplexVector out(n);
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& rho, const std::vector<Eigen::Index>& dims,
                            const std::vector<std::size_t>& keep) {
  require_square(rho, "partial_trace");
  Eigen::Index total = 1;
  for (Eigen::Index d : dims) {
    if (d < 1) throw std::invalid_argument("partial_trace: subsystem dimensions must be positive");
    total *= d;
  }
  if (total != rho.rows())
    throw std::invalid_argument("partial_trace: product of dims " + std::to_string(total) +
                                " does not match matrix dimension " + std::to_string(rho.rows()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= dims.size())
      throw std::invalid_argument("partial_trace: keep index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("partial_trace: keep indices must be strictly ascending");
  }

  // Strides of each subsystem inside the flattened index (first factor most significant).
  std::vector<Eigen::Index> stride(dims.size());
  Eigen::Index s = 1;
  for (std::size_t i = dims.size(); i-- > 0;) {
    stride[i] = s;
    s *= dims[i];
  }

  std::vector<std::size_t> traced;
  std::vector<bool> kept(dims.size(), false);
  for (std::size_t k : keep) kept[k] = true;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (!kept[i]) traced.push_back(i);

  Eigen::Index dim_keep = 1, dim_trace = 1;
  for (std::size_t k : keep) dim_keep *= dims[k];
  for (std::size_t k : traced) dim_trace *= dims[k];

  // Maps a flattened kept (resp. traced) index to its offset in the full index.
  auto offset = [&](const std::vector<std::size_t>& subs, Eigen::Index flat) {
    Eigen::Index off = 0;
    for (std::size_t i = subs.size(); i-- > 0;) {
      const std::size_t sub = subs[i];
      off += (flat % dims[sub]) * stride[sub];
      flat /= dims[sub];
    }
    return off;
  };

  std::vector<Eigen::Index> keep_off(dim_keep), trace_off(dim_trace);
  for (Eigen::Index i = 0; i < dim_keep; ++i) keep_off[i] = offset(keep, i);
  for (Eigen::Index i = 0; i < dim_trace; ++i) trace_off[i] = offset(traced, i);

  ComplexMatrix out = ComplexMatrix::Zero(dim_keep, dim_keep);
  for (Eigen::Index r = 0; r < dim_keep; ++r)
    for (Eigen::Index c = 0; c < dim_keep; ++c) {
      Complex acc(0, 0);
      for (Eigen::Index t = 0; t < dim_trace; ++t)
        acc += rho(keep_off[r] + trace_off[t], keep_off[c] + trace_off[t]);
      out(r, c) = acc;
    }
  return out;
}

HermitianSpectrum eig_hermitian(const ComplexMatrix& a) {
  require_square(a, "eig_hermitian");
  const double res = hermiticity_residual(a);
  if (res > kHermitianTol)
    throw std::invalid_argument("eig_hermitian: input is not Hermitian (residual " +
                                std::to_string(res) + ")");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  HermitianSpectrum out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

ComplexMatrix expm_hermitian_generator(const ComplexMatrix& h, double t) {
  const HermitianSpectrum es = eig_hermitian(h);
  ComplexVector phases(es.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k)
    phases(k) = std::exp(Complex(0, -es.eigenvalues(k) * t));
  return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

double commutator_residual(const ComplexMatrix& a, const ComplexMatrix& b) {
  require_square(a, "commutator_residual");
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("commutator_residual: dimension mismatch");
  return max_norm(a * b - b * a);
}

double normality_residual(const ComplexMatrix& a) {
  require_square(a, "normality_residual");
  return max_norm(a * a.adjoint() - a.adjoint() * a);
}

bool is_normal(const ComplexMatrix& a, double tol) { return normality_residual(a) <= tol; }

}  // namespace darwinsim
