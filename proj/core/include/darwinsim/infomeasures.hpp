#pragma once

#include "darwinsim/branchstate.hpp"

#include <optional>
#include <span>

namespace darwinsim {

// Von Neumann entropy in bits. Entries in [kEigClip, 0) are treated as 0;
// anything below kEigClip, or a total off 1 by more than 1e-9, is rejected.
double entropy(std::span<const double> spectrum);

// Entropy of the reduction onto `sel` (Gram path, so large environments are
// fine). The empty selection has entropy 0.
double selection_entropy(const BranchState& s, const SubsystemSelector& sel);

// I(A:B) = S(A) + S(B) - S(A u B). The selections must be disjoint: at most
// one may keep each system qubit and their env counts must fit inside N.
double mutual_information(const BranchState& s, const SubsystemSelector& a,
                          const SubsystemSelector& b);

// Sum of the moduli of the strictly-lower-triangle entries.
double l1_coherence(const DensityMatrix& rho);

// Rank-1 projective measurement direction on a qubit.
struct MeasurementBasis {
  double theta = 0.0;  // polar angle in [0, pi]
  double phi = 0.0;    // azimuth in [0, 2*pi)
  Eigen::Vector2cd ket0() const;  // cos(t/2)|0> + e^(i*phi) sin(t/2)|1>
  Eigen::Vector2cd ket1() const;
};

struct DiscordResult {
  double mutual_info = 0.0;
  double holevo = 0.0;   // S(B) - min over measurements of the conditional entropy
  double discord = 0.0;  // mutual_info - holevo
  MeasurementBasis basis;  // minimizing measurement
};

struct DiscordOptions {
  int grid_theta = 64;
  int grid_phi = 64;
};

// Discord of `rho` under rank-1 projective measurements of the qubit factor
// `measured`; the remaining factors (joint dimension <= 64) form the
// unmeasured side. The conditional entropy is minimized on the angle grid
// and then polished by compass search until the step is below 1e-8.
DiscordResult discord_measured_on_qubit(const DensityMatrix& rho, std::size_t measured,
                                        const DiscordOptions& opt = {});

struct DeltaIdentity {
  double lhs;  // I(S1S2:E_m) - I(S1:E_m)
  double rhs;  // I(S2:E)     - I(S2:E_complement)
};

// Both sides of the partial-information gap identity; they coincide for any
// pure global state. 0 <= m <= N.
DeltaIdentity delta_mutual_information(const BranchState& s, int m);

struct GapBounds {
  double lower = 0.0;
  std::optional<double> upper;  // S(rho_S1S2) + D^<-(S1S2:E_m); only computed for m = 1
  double delta = 0.0;           // the measured gap, lhs of the identity
};

// Koashi-Winter style sandwich for the gap. For m > 1 the upper bound needs a
// multi-qubit measurement and is reported as unavailable. 1 <= m <= N.
GapBounds kw_gap_bounds(const BranchState& s, int m);

// Wootters concurrence and entanglement of formation (bits) of a two-qubit
// state (dims (2,2)).
double concurrence(const DensityMatrix& rho);
double entanglement_of_formation(const DensityMatrix& rho);

}  // namespace darwinsim
