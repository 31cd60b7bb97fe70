#pragma once

#include "darwinsim/branchstate.hpp"

namespace darwinsim {

// Parameters for the brute-force reference evolution. jx and jy may differ;
// that breaks the commutation between the intra-system and dephasing terms,
// which is exactly the regime the closed form cannot reach.
struct DenseParams {
  double theta1 = 0.5235987755982988;
  double theta2 = 0.5235987755982988;
  double jx = 10.0;
  double jy = 10.0;
  double jz = 0.0;
  double jse = 1.0;
  int n_env = 6;
  double t = 0.7853981633974483;

  static DenseParams from(const ModelParams& p);
  bool commuting() const { return jx == jy; }
};

// Assembles the full 2^(N+2)-dimensional Hamiltonian once (couplings scaled
// so that the jx = jy case reproduces the branch form exactly: exchange terms
// enter with jx/2 and jy/2, the Ising term with N*jz), diagonalizes it, and
// evolves the product initial state in one shot. No time stepping. N <= 8.
class DenseEvolver {
 public:
  explicit DenseEvolver(const DenseParams& p);

  ComplexVector state_at(double t) const;
  const DenseParams& params() const { return params_; }
  Eigen::Index dim() const { return psi0_eigbasis_.size(); }

 private:
  DenseParams params_;
  HermitianSpectrum hamiltonian_;
  ComplexVector psi0_eigbasis_;
};

// One-shot state at p.t.
ComplexVector dense_evolve(const DenseParams& p);

// Partial trace of |psi><psi| onto the subsystems listed in `keep` (strictly
// ascending indices into `dims`).
DensityMatrix dense_reduce(const ComplexVector& psi, const std::vector<Eigen::Index>& dims,
                           const std::vector<std::size_t>& keep);

// Selector-keyed reduction of a (2,2,2...) pure state; qubit order is
// S1, S2, E_1..E_N and the selector keeps env qubits 1..env_kept.
DensityMatrix dense_reduce(const ComplexVector& psi, int n_env, const SubsystemSelector& sel);

// Spectrum of the selector-keyed reduction (descending, clipped, padded with
// zeros to the reduced dimension).
std::vector<double> dense_reduced_spectrum(const ComplexVector& psi, int n_env,
                                           const SubsystemSelector& sel);

// Expands the branch form into the full 2^(N+2) vector (N <= 12).
ComplexVector materialize(const BranchState& s);

}  // namespace darwinsim
