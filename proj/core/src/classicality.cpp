#include "darwinsim/classicality.hpp"

#include "darwinsim/infomeasures.hpp"

#include <cmath>
#include <stdexcept>

namespace darwinsim {

namespace {

bool dims_ok(const std::vector<Eigen::Index>& dims) {
  if (dims == std::vector<Eigen::Index>{4, 2}) return true;
  if (dims == std::vector<Eigen::Index>{2, 2, 2}) return true;
  return false;
}

template <std::size_t n>
double family_residual(const std::array<std::array<ComplexMatrix, n>, n>& blocks) {
  double worst = 0.0;
  std::vector<const ComplexMatrix*> flat;
  for (const auto& row : blocks)
    for (const auto& b : row) {
      worst = std::max(worst, normality_residual(b));
      flat.push_back(&b);
    }
  for (std::size_t a = 0; a < flat.size(); ++a)
    for (std::size_t b = a + 1; b < flat.size(); ++b)
      worst = std::max(worst, commutator_residual(*flat[a], *flat[b]));
  return worst;
}

}  // namespace

BlockDecomposition decompose(const DensityMatrix& rho) {
  if (!dims_ok(rho.dims) || rho.dim() != 8)
    throw std::invalid_argument(
        "decompose: expected an 8x8 state with dims (4,2) or (2,2,2)");
  BlockDecomposition out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.blocks_sys[i][j] = rho.matrix.block(4 * i, 4 * j, 4, 4);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) out.blocks_env[k][l] = rho.matrix.block(2 * k, 2 * l, 2, 2);
  return out;
}

ClassicalityReport nullity_certificate(const BlockDecomposition& blocks, double tol) {
  if (tol <= 0) throw std::invalid_argument("nullity_certificate: tolerance must be positive");
  ClassicalityReport report;
  report.tolerance = tol;
  report.max_residual_forward = family_residual(blocks.blocks_sys);
  report.max_residual_backward = family_residual(blocks.blocks_env);
  report.forward_classical = report.max_residual_forward <= tol;
  report.backward_classical = report.max_residual_backward <= tol;
  return report;
}

PlateauReport detect_plateau(const BranchState& s, double tol) {
  if (s.n_env() < 3)
    throw std::invalid_argument("detect_plateau: need at least 3 environment qubits");
  if (tol <= 0) throw std::invalid_argument("detect_plateau: tolerance must be positive");
  const double total = selection_entropy(s, SubsystemSelector::system());
  if (total < 1e-12)
    throw std::domain_error("detect_plateau: S(rho_S1S2) is numerically zero at this time");

  PlateauReport report;
  double level_acc = 0.0;
  for (int m = 1; m <= s.n_env(); ++m) {
    const double ratio =
        mutual_information(s, SubsystemSelector::system(), SubsystemSelector::env(m)) / total;
    report.fraction_curve.emplace_back(static_cast<double>(m) / s.n_env(), ratio);
    if (m < s.n_env()) {
      level_acc += ratio;
      report.deviation = std::max(report.deviation, std::abs(ratio - 1.0));
    }
  }
  report.plateau_level = level_acc / (s.n_env() - 1);
  report.plateau_detected = report.deviation <= tol;
  return report;
}

}  // namespace darwinsim
