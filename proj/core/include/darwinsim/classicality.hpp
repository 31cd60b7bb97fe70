#pragma once

#include "darwinsim/branchstate.hpp"

#include <array>
#include <utility>
#include <vector>

namespace darwinsim {

// Two block slicings of an (S1,S2):E1 state, stored in system-major ordering
// (row index 2*s + e with s the two-bit system label, e the env bit). A block
// family that is normal and pairwise commuting is simultaneously
// diagonalizable, which certifies that some projective measurement on the
// side the blocks act on leaves the state unchanged.
struct BlockDecomposition {
  // Quadrants <S1=i| rho |S1=j>: 4x4 operators on (S2,E1). This is the
  // system-side certificate family.
  std::array<std::array<ComplexMatrix, 2>, 2> blocks_sys;
  // Fine blocks indexed by system label pairs: 2x2 operators on E1. This is
  // the environment-side certificate family.
  std::array<std::array<ComplexMatrix, 4>, 4> blocks_env;
};

// Slices an 8x8 state with dims (4,2) or (2,2,2). Either family reassembles
// the input exactly.
BlockDecomposition decompose(const DensityMatrix& rho);

struct ClassicalityReport {
  double max_residual_forward = 0.0;   // worst normality/commutator residual, system side
  double max_residual_backward = 0.0;  // same for the environment side
  bool forward_classical = false;
  bool backward_classical = false;
  double tolerance = 1e-8;
};

// Max-norm residuals over all per-block normality checks and all pairwise
// commutators in each family; a side is classical when its residual stays
// within tol.
ClassicalityReport nullity_certificate(const BlockDecomposition& blocks, double tol = 1e-8);

struct PlateauReport {
  std::vector<std::pair<double, double>> fraction_curve;  // (m/N, I(S1S2:E_m)/S(S1S2))
  bool plateau_detected = false;
  double plateau_level = 0.0;  // mean interior ratio
  double deviation = 0.0;      // max interior |ratio - 1|
};

// Scans the mutual-information fraction curve. Interior points are
// 1 <= m <= N-1; the detector requires every interior ratio within tol of 1.
// Throws std::domain_error when S(rho_S1S2) < 1e-12 (nothing to correlate)
// and std::invalid_argument for N < 3 (no interior to speak of).
PlateauReport detect_plateau(const BranchState& s, double tol = 1e-3);

}  // namespace darwinsim
