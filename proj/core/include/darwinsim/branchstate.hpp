#pragma once

#include "darwinsim/matcore.hpp"

#include <array>
#include <vector>

namespace darwinsim {

// Parameters of the two-qubit system coupled to an N-qubit dephasing
// environment. Defaults are the reference working point used throughout the
// tests: product state at pi/6 angles, strong intra-system exchange, pure
// dephasing with J_SE = 1.
struct ModelParams {
  double theta1 = 0.5235987755982988;  // pi/6
  double theta2 = 0.5235987755982988;
  double j = 10.0;    // exchange coupling between the system qubits (Jx = Jy)
  double jz = 0.0;    // Ising part of the intra-system coupling
  double jse = 1.0;   // system-environment dephasing strength
  int n_env = 6;      // number of environment qubits N
  double t = 0.7853981633974483;  // evolution time, pi/4
};

// One branch of the evolved global state: a computational-basis system label
// carrying a scalar amplitude and the single-qubit state shared by all N
// environment qubits in that branch.
struct Branch {
  Complex amplitude;
  Eigen::Vector2cd env_ket;
};

// Branch index b in {0,1,2,3} encodes the system label bits (s1 s2).
constexpr int branch_s1(int b) { return (b >> 1) & 1; }
constexpr int branch_s2(int b) { return b & 1; }

// Which subsystems survive a reduction. Environment qubits are
// interchangeable, so only the kept count matters; reductions behave as if
// qubits 1..env_kept were kept and the rest traced out.
struct SubsystemSelector {
  bool keep_s1 = false;
  bool keep_s2 = false;
  int env_kept = 0;

  static SubsystemSelector s1() { return {true, false, 0}; }
  static SubsystemSelector s2() { return {false, true, 0}; }
  static SubsystemSelector system() { return {true, true, 0}; }
  static SubsystemSelector env(int m) { return {false, false, m}; }
  static SubsystemSelector system_plus_env(int m) { return {true, true, m}; }
  static SubsystemSelector s1_plus_env(int m) { return {true, false, m}; }

  bool empty() const { return !keep_s1 && !keep_s2 && env_kept == 0; }
  int kept_system_qubits() const { return (keep_s1 ? 1 : 0) + (keep_s2 ? 1 : 0); }
};

// Explicit reduced density matrix. `dims` lists one factor per kept subsystem
// in the fixed order S1, S2, E_1..E_m (each a qubit here).
struct DensityMatrix {
  ComplexMatrix matrix;
  std::vector<Eigen::Index> dims;

  DensityMatrix(ComplexMatrix m, std::vector<Eigen::Index> d);
  Eigen::Index dim() const { return matrix.rows(); }
};

// Exact global pure state at time t in branch form: four system branches,
// each dressed with N identical environment qubits.
class BranchState {
 public:
  BranchState(std::array<Branch, 4> branches, int n_env, const ModelParams& origin);

  const std::array<Branch, 4>& branches() const { return branches_; }
  const Branch& branch(int b) const { return branches_.at(static_cast<std::size_t>(b)); }
  int n_env() const { return n_env_; }
  const ModelParams& params() const { return params_; }

 private:
  std::array<Branch, 4> branches_;
  int n_env_;
  ModelParams params_;
};

// Closed-form evolution of the product initial state (both system qubits at
// angles theta, every environment qubit in |+>). Valid for Jx = Jy = j, where
// the intra-system and dephasing terms commute.
BranchState build_state(const ModelParams& p);

// (<env_ket_j | env_ket_i>)^m, evaluated by exact integer powering so that
// real negative overlaps keep an exactly real alternating sign at large m.
Complex branch_env_overlap(const BranchState& s, int i, int j, int m);

// Explicit reduced density matrix onto the selected subsystems. Throws
// std::length_error (pointing at reduced_spectrum) when 2^(kept qubits)
// exceeds the matrix cap, and std::invalid_argument for an empty selection.
DensityMatrix reduce(const BranchState& s, const SubsystemSelector& sel);

// Spectrum of the same reduction without materializing it: the reduction is
// a rank-<=4 mixture of branch product vectors, so its nonzero eigenvalues
// equal those of G^(1/2) W G^(1/2) where W is the 4x4 branch weight matrix
// and G the Gram matrix of the kept branch vectors. Returns 4 eigenvalues,
// descending, clipped at kEigClip; works unchanged for hundreds of
// environment qubits. An empty selection yields {1,0,0,0}.
std::vector<double> reduced_spectrum(const BranchState& s, const SubsystemSelector& sel);

}  // namespace darwinsim
