#include "darwinsim/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace darwinsim {

namespace {

// Two-site operator embedded into an n-qubit register.
ComplexMatrix embed2(int n_qubits, int site_a, const ComplexMatrix& op_a, int site_b,
                     const ComplexMatrix& op_b) {
  ComplexMatrix out = ComplexMatrix::Ones(1, 1);
  for (int q = 0; q < n_qubits; ++q) {
    if (q == site_a)
      out = tensor(out, op_a);
    else if (q == site_b)
      out = tensor(out, op_b);
    else
      out = tensor(out, identity(2));
  }
  return out;
}

std::vector<std::size_t> selector_keep(int n_env, const SubsystemSelector& sel) {
  if (sel.empty()) throw std::invalid_argument("dense_reduce: selection keeps no subsystem");
  if (sel.env_kept < 0 || sel.env_kept > n_env)
    throw std::invalid_argument("dense_reduce: env_kept outside [0, n_env]");
  std::vector<std::size_t> keep;
  if (sel.keep_s1) keep.push_back(0);
  if (sel.keep_s2) keep.push_back(1);
  for (int q = 0; q < sel.env_kept; ++q) keep.push_back(2 + static_cast<std::size_t>(q));
  return keep;
}

}  // namespace

DenseParams DenseParams::from(const ModelParams& p) {
  DenseParams d;
  d.theta1 = p.theta1;
  d.theta2 = p.theta2;
  d.jx = p.j;
  d.jy = p.j;
  d.jz = p.jz;
  d.jse = p.jse;
  d.n_env = p.n_env;
  d.t = p.t;
  return d;
}

DenseEvolver::DenseEvolver(const DenseParams& p) : params_(p) {
  if (p.n_env < 1) throw std::invalid_argument("DenseEvolver: n_env must be >= 1");
  if (p.n_env > 8)
    throw std::length_error("DenseEvolver: n_env " + std::to_string(p.n_env) +
                            " exceeds the dense cap of 8");
  const int nq = p.n_env + 2;
  const Eigen::Index dim = Eigen::Index(1) << nq;

  ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
  h += (p.jx / 2.0) * embed2(nq, 0, pauli_x(), 1, pauli_x());
  h += (p.jy / 2.0) * embed2(nq, 0, pauli_y(), 1, pauli_y());
  h += (static_cast<double>(p.n_env) * p.jz) * embed2(nq, 0, pauli_z(), 1, pauli_z());
  for (int k = 0; k < p.n_env; ++k) {
    h += p.jse * embed2(nq, 0, pauli_z(), 2 + k, pauli_z());
    h += p.jse * embed2(nq, 1, pauli_z(), 2 + k, pauli_z());
  }
  hamiltonian_ = eig_hermitian(h);

  ComplexVector s1(2), s2(2), plus(2);
  s1 << std::cos(p.theta1), std::sin(p.theta1);
  s2 << std::cos(p.theta2), std::sin(p.theta2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  ComplexVector psi0 = tensor(s1, s2);
  for (int k = 0; k < p.n_env; ++k) psi0 = tensor(psi0, plus);
  psi0_eigbasis_ = hamiltonian_.eigenvectors.adjoint() * psi0;
}

ComplexVector DenseEvolver::state_at(double t) const {
  ComplexVector phased(psi0_eigbasis_.size());
  for (Eigen::Index k = 0; k < phased.size(); ++k)
    phased(k) = std::exp(Complex(0, -hamiltonian_.eigenvalues(k) * t)) * psi0_eigbasis_(k);
  return hamiltonian_.eigenvectors * phased;
}

ComplexVector dense_evolve(const DenseParams& p) { return DenseEvolver(p).state_at(p.t); }

DensityMatrix dense_reduce(const ComplexVector& psi, const std::vector<Eigen::Index>& dims,
                           const std::vector<std::size_t>& keep) {
  Eigen::Index total = 1;
  for (Eigen::Index d : dims) total *= d;
  if (total != psi.size())
    throw std::invalid_argument("dense_reduce: dims do not match state dimension");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= dims.size()) throw std::invalid_argument("dense_reduce: keep index out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("dense_reduce: keep indices must be strictly ascending");
  }
  if (keep.empty()) throw std::invalid_argument("dense_reduce: keep set is empty");

  std::vector<Eigen::Index> stride(dims.size());
  Eigen::Index s = 1;
  for (std::size_t i = dims.size(); i-- > 0;) {
    stride[i] = s;
    s *= dims[i];
  }
  std::vector<std::size_t> traced;
  {
    std::vector<bool> flag(dims.size(), false);
    for (std::size_t k : keep) flag[k] = true;
    for (std::size_t i = 0; i < dims.size(); ++i)
      if (!flag[i]) traced.push_back(i);
  }
  Eigen::Index dim_keep = 1, dim_trace = 1;
  std::vector<Eigen::Index> out_dims;
  for (std::size_t k : keep) {
    dim_keep *= dims[k];
    out_dims.push_back(dims[k]);
  }
  for (std::size_t k : traced) dim_trace *= dims[k];
  if (dim_keep > kMaxDim) throw std::length_error("dense_reduce: kept dimension exceeds cap");

  auto offset = [&](const std::vector<std::size_t>& subs, Eigen::Index flat) {
    Eigen::Index off = 0;
    for (std::size_t i = subs.size(); i-- > 0;) {
      const std::size_t sub = subs[i];
      off += (flat % dims[sub]) * stride[sub];
      flat /= dims[sub];
    }
    return off;
  };

  // rho_keep = M M^dag where M reshapes psi into (kept x traced).
  ComplexMatrix m(dim_keep, dim_trace);
  for (Eigen::Index r = 0; r < dim_keep; ++r) {
    const Eigen::Index base = offset(keep, r);
    for (Eigen::Index c = 0; c < dim_trace; ++c) m(r, c) = psi(base + offset(traced, c));
  }
  ComplexMatrix rho = m * m.adjoint();
  rho = (rho + ComplexMatrix(rho.adjoint())) * 0.5;
  return DensityMatrix(std::move(rho), std::move(out_dims));
}

DensityMatrix dense_reduce(const ComplexVector& psi, int n_env, const SubsystemSelector& sel) {
  const std::vector<Eigen::Index> dims(static_cast<std::size_t>(n_env) + 2, 2);
  return dense_reduce(psi, dims, selector_keep(n_env, sel));
}

std::vector<double> dense_reduced_spectrum(const ComplexVector& psi, int n_env,
                                           const SubsystemSelector& sel) {
  const DensityMatrix rho = dense_reduce(psi, n_env, sel);
  const HermitianSpectrum es = eig_hermitian(rho.matrix);
  std::vector<double> out(static_cast<std::size_t>(es.eigenvalues.size()));
  for (Eigen::Index k = 0; k < es.eigenvalues.size(); ++k) {
    double lam = es.eigenvalues(k);
    if (lam < 0) {
      if (lam < kEigClip)
        throw std::runtime_error("dense_reduced_spectrum: eigenvalue below clip threshold");
      lam = 0.0;
    }
    out[static_cast<std::size_t>(k)] = lam;
  }
  return out;
}

ComplexVector materialize(const BranchState& s) {
  if (s.n_env() > 12)
    throw std::length_error("materialize: environment too large for an explicit vector");
  const Eigen::Index dim = Eigen::Index(1) << (s.n_env() + 2);
  ComplexVector psi = ComplexVector::Zero(dim);
  for (int b = 0; b < 4; ++b) {
    ComplexVector sys = ComplexVector::Zero(4);
    sys(b) = s.branch(b).amplitude;
    ComplexVector full = sys;
    for (int q = 0; q < s.n_env(); ++q) full = tensor(full, ComplexVector(s.branch(b).env_ket));
    psi += full;
  }
  return psi;
}

}  // namespace darwinsim
