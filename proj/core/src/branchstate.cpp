#include "darwinsim/branchstate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace darwinsim {

namespace {

Complex pow_int(Complex z, int p) {
  Complex r(1, 0);
  while (p > 0) {
    if (p & 1) r *= z;
    z *= z;
    p >>= 1;
  }
  return r;
}

// <env_ket_j | env_ket_i> for one environment qubit.
Complex single_overlap(const BranchState& s, int i, int j) {
  return s.branch(j).env_ket.dot(s.branch(i).env_ket);
}

void validate_selector(const BranchState& s, const SubsystemSelector& sel, const char* who) {
  if (sel.env_kept < 0 || sel.env_kept > s.n_env())
    throw std::invalid_argument(std::string(who) + ": env_kept " + std::to_string(sel.env_kept) +
                                " outside [0, " + std::to_string(s.n_env()) + "]");
}

// W_ij = a_i conj(a_j) * (traced env overlap)^(N-m) * delta on traced system
// bits. Reassembling sum_ij W_ij |v_i><v_j| over the kept branch vectors v
// gives the reduction exactly.
Eigen::Matrix4cd weight_matrix(const BranchState& s, const SubsystemSelector& sel) {
  const int traced_env = s.n_env() - sel.env_kept;
  Eigen::Matrix4cd w;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (!sel.keep_s1 && branch_s1(i) != branch_s1(j)) {
        w(i, j) = Complex(0, 0);
        continue;
      }
      if (!sel.keep_s2 && branch_s2(i) != branch_s2(j)) {
        w(i, j) = Complex(0, 0);
        continue;
      }
      w(i, j) = s.branch(i).amplitude * std::conj(s.branch(j).amplitude) *
                pow_int(single_overlap(s, i, j), traced_env);
    }
  return w;
}

// Gram matrix G_ij = <v_i | v_j> of the kept branch product vectors.
Eigen::Matrix4cd gram_matrix(const BranchState& s, const SubsystemSelector& sel) {
  Eigen::Matrix4cd g;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const bool sys_match = (!sel.keep_s1 || branch_s1(i) == branch_s1(j)) &&
                             (!sel.keep_s2 || branch_s2(i) == branch_s2(j));
      g(i, j) = sys_match ? pow_int(single_overlap(s, j, i), sel.env_kept) : Complex(0, 0);
    }
  return g;
}

}  // namespace

DensityMatrix::DensityMatrix(ComplexMatrix m, std::vector<Eigen::Index> d)
    : matrix(std::move(m)), dims(std::move(d)) {
  Eigen::Index total = 1;
  for (Eigen::Index x : dims) total *= x;
  if (matrix.rows() != matrix.cols() || matrix.rows() != total)
    throw std::invalid_argument("DensityMatrix: dims do not match matrix shape");
  const double herm = hermiticity_residual(matrix);
  if (herm > kHermitianTol)
    throw std::invalid_argument("DensityMatrix: not Hermitian (residual " + std::to_string(herm) +
                                ")");
  const double tr = std::abs(matrix.trace() - Complex(1, 0));
  if (tr > 1e-10)
    throw std::invalid_argument("DensityMatrix: trace deviates from 1 by " + std::to_string(tr));
}

BranchState::BranchState(std::array<Branch, 4> branches, int n_env, const ModelParams& origin)
    : branches_(branches), n_env_(n_env), params_(origin) {
  if (n_env_ < 1) throw std::invalid_argument("BranchState: need at least one environment qubit");
  double norm = 0.0;
  for (const Branch& b : branches_) {
    norm += std::norm(b.amplitude);
    if (std::abs(b.env_ket.squaredNorm() - 1.0) > 1e-12)
      throw std::invalid_argument("BranchState: environment kets must be unit vectors");
  }
  if (std::abs(norm - 1.0) > 1e-12)
    throw std::invalid_argument("BranchState: branch amplitudes are not normalized (sum " +
                                std::to_string(norm) + ")");
}

BranchState build_state(const ModelParams& p) {
  if (p.n_env < 1) throw std::invalid_argument("build_state: n_env must be >= 1");
  if (p.t < 0) throw std::invalid_argument("build_state: t must be >= 0");
  if (!std::isfinite(p.theta1) || !std::isfinite(p.theta2) || !std::isfinite(p.j) ||
      !std::isfinite(p.jz) || !std::isfinite(p.jse) || !std::isfinite(p.t))
    throw std::invalid_argument("build_state: parameters must be finite");

  const double alpha = std::cos(p.theta1) * std::cos(p.theta2);
  const double beta = std::cos(p.theta1) * std::sin(p.theta2);
  const double gamma = std::sin(p.theta1) * std::cos(p.theta2);
  const double delta = std::sin(p.theta1) * std::sin(p.theta2);

  const double jt = p.j * p.t;
  // Phase picked up from the Ising part; opposite sign on the aligned and
  // anti-aligned system labels, growing with the environment size.
  const Complex zph = std::exp(Complex(0, p.n_env * p.jz * p.t));
  const Complex a00 = std::conj(zph) * alpha;
  const Complex a01 = zph * Complex(beta * std::cos(jt), -gamma * std::sin(jt));
  const Complex a10 = zph * Complex(gamma * std::cos(jt), -beta * std::sin(jt));
  const Complex a11 = std::conj(zph) * delta;

  // Aligned system labels imprint opposite dephasing phases on every
  // environment qubit; the anti-aligned labels leave the environment in |+>.
  const double phi = 2.0 * p.jse * p.t;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd ket00, ket_mid, ket11;
  ket00 << std::exp(Complex(0, -phi)) * inv_sqrt2, std::exp(Complex(0, phi)) * inv_sqrt2;
  ket_mid << inv_sqrt2, inv_sqrt2;
  ket11 << std::exp(Complex(0, phi)) * inv_sqrt2, std::exp(Complex(0, -phi)) * inv_sqrt2;

  return BranchState({Branch{a00, ket00}, Branch{a01, ket_mid}, Branch{a10, ket_mid},
                      Branch{a11, ket11}},
                     p.n_env, p);
}

Complex branch_env_overlap(const BranchState& s, int i, int j, int m) {
  if (i < 0 || i > 3 || j < 0 || j > 3)
    throw std::invalid_argument("branch_env_overlap: branch index outside {0..3}");
  if (m < 0 || m > s.n_env())
    throw std::invalid_argument("branch_env_overlap: power " + std::to_string(m) +
                                " outside [0, " + std::to_string(s.n_env()) + "]");
  return pow_int(single_overlap(s, i, j), m);
}

DensityMatrix reduce(const BranchState& s, const SubsystemSelector& sel) {
  validate_selector(s, sel, "reduce");
  if (sel.empty()) throw std::invalid_argument("reduce: selection keeps no subsystem");
  const int kept_qubits = sel.kept_system_qubits() + sel.env_kept;
  if (kept_qubits > 14)
    throw std::length_error("reduce: kept dimension 2^" + std::to_string(kept_qubits) +
                            " exceeds the matrix cap; use reduced_spectrum instead");
  const Eigen::Index dim = Eigen::Index(1) << kept_qubits;

  // Kept branch vectors v_b = |kept system bits> (x) env_ket^(x)m.
  ComplexMatrix v = ComplexMatrix::Zero(dim, 4);
  for (int b = 0; b < 4; ++b) {
    ComplexVector sys = ComplexVector::Ones(1);
    if (sel.keep_s1) {
      ComplexVector e = ComplexVector::Zero(2);
      e(branch_s1(b)) = 1.0;
      sys = tensor(sys, e);
    }
    if (sel.keep_s2) {
      ComplexVector e = ComplexVector::Zero(2);
      e(branch_s2(b)) = 1.0;
      sys = tensor(sys, e);
    }
    ComplexVector full = sys;
    for (int q = 0; q < sel.env_kept; ++q)
      full = tensor(full, ComplexVector(s.branch(b).env_ket));
    v.col(b) = full;
  }

  const Eigen::Matrix4cd w = weight_matrix(s, sel);
  ComplexMatrix rho = v * w * v.adjoint();
  rho = (rho + ComplexMatrix(rho.adjoint())) * 0.5;  // scrub rounding asymmetry

  std::vector<Eigen::Index> dims;
  if (sel.keep_s1) dims.push_back(2);
  if (sel.keep_s2) dims.push_back(2);
  for (int q = 0; q < sel.env_kept; ++q) dims.push_back(2);
  return DensityMatrix(std::move(rho), std::move(dims));
}

std::vector<double> reduced_spectrum(const BranchState& s, const SubsystemSelector& sel) {
  validate_selector(s, sel, "reduced_spectrum");
  const Eigen::Matrix4cd w = weight_matrix(s, sel);
  const Eigen::Matrix4cd g = gram_matrix(s, sel);

  // G^(1/2) through the Hermitian eigendecomposition, clipping the tiny
  // negative rounding dust so the root stays real.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> gs(g);
  if (gs.info() != Eigen::Success)
    throw std::runtime_error("reduced_spectrum: Gram eigendecomposition failed");
  Eigen::Vector4d gvals = gs.eigenvalues();
  for (int k = 0; k < 4; ++k) {
    if (gvals(k) < kEigClip)
      throw std::runtime_error("reduced_spectrum: Gram matrix has negative eigenvalue " +
                               std::to_string(gvals(k)));
    gvals(k) = gvals(k) > 0 ? std::sqrt(gvals(k)) : 0.0;
  }
  const Eigen::Matrix4cd root =
      gs.eigenvectors() * gvals.asDiagonal() * gs.eigenvectors().adjoint();

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> hs(root * w * root);
  if (hs.info() != Eigen::Success)
    throw std::runtime_error("reduced_spectrum: eigendecomposition failed");

  std::vector<double> out(4);
  for (int k = 0; k < 4; ++k) {
    double lam = hs.eigenvalues()(3 - k);  // descending
    if (lam < 0) {
      if (lam < kEigClip)
        throw std::runtime_error("reduced_spectrum: eigenvalue " + std::to_string(lam) +
                                 " below the clip threshold");
      lam = 0.0;
    }
    out[static_cast<std::size_t>(k)] = lam;
  }
  return out;
}

}  // namespace darwinsim
