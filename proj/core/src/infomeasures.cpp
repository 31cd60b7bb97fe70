#include "darwinsim/infomeasures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace darwinsim {

namespace {

constexpr double kTwoPi = 6.283185307179586;
constexpr double kPi = 3.141592653589793;

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

double checked_term(double lam, const char* who) {
  if (lam < kEigClip)
    throw std::domain_error(std::string(who) + ": eigenvalue " + std::to_string(lam) +
                            " below the clip threshold");
  return plogp(std::max(lam, 0.0));
}

// Entropy of a density matrix; 2x2 inputs use the closed-form spectrum, the
// rest go through the Hermitian eigensolver.
double matrix_entropy(const ComplexMatrix& rho) {
  const Eigen::Index n = rho.rows();
  if (n == 1) return 0.0;
  if (n == 2) {
    const double a = rho(0, 0).real();
    const double d = rho(1, 1).real();
    const double half_gap = 0.5 * (a - d);
    const double r = std::sqrt(half_gap * half_gap + std::norm(rho(0, 1)));
    const double mid = 0.5 * (a + d);
    return checked_term(mid + r, "matrix_entropy") + checked_term(mid - r, "matrix_entropy");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("matrix_entropy: eigensolver failed");
  double h = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) h += checked_term(es.eigenvalues()(k), "matrix_entropy");
  return h;
}

// p * S(block / p) for an unnormalized conditional block of trace p, computed
// from the block's own eigenvalues so rounding noise is never amplified by
// 1/p when an outcome is nearly certain not to occur.
double weighted_entropy(const ComplexMatrix& block, double p) {
  const Eigen::Index n = block.rows();
  auto term = [p](double lam) {
    if (lam < kEigClip)
      throw std::domain_error("weighted_entropy: eigenvalue " + std::to_string(lam) +
                              " below the clip threshold");
    return lam > 0.0 ? -lam * std::log2(lam / p) : 0.0;
  };
  if (n == 1) return 0.0;
  if (n == 2) {
    const double a = block(0, 0).real();
    const double d = block(1, 1).real();
    const double half_gap = 0.5 * (a - d);
    const double r = std::sqrt(half_gap * half_gap + std::norm(block(0, 1)));
    const double mid = 0.5 * (a + d);
    return term(mid + r) + term(mid - r);
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(block, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("weighted_entropy: eigensolver failed");
  double h = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) h += term(es.eigenvalues()(k));
  return h;
}

// Pre-resolved index arithmetic for conditioning rho on a measurement of one
// qubit factor: full_offset(b_index) + a * measured_stride enumerates the
// joint basis with the measured index split off.
struct ConditionalSlicer {
  Eigen::Index measured_stride = 1;
  std::vector<Eigen::Index> spread;  // flat unmeasured index -> full offset

  ConditionalSlicer(const std::vector<Eigen::Index>& dims, std::size_t measured) {
    std::vector<Eigen::Index> stride(dims.size());
    Eigen::Index s = 1;
    for (std::size_t i = dims.size(); i-- > 0;) {
      stride[i] = s;
      s *= dims[i];
    }
    measured_stride = stride[measured];
    Eigen::Index dim_b = 1;
    for (std::size_t i = 0; i < dims.size(); ++i)
      if (i != measured) dim_b *= dims[i];
    spread.resize(static_cast<std::size_t>(dim_b));
    for (Eigen::Index r = 0; r < dim_b; ++r) {
      Eigen::Index off = 0, rest = r;
      for (std::size_t i = dims.size(); i-- > 0;) {
        if (i == measured) continue;
        off += (rest % dims[i]) * stride[i];
        rest /= dims[i];
      }
      spread[static_cast<std::size_t>(r)] = off;
    }
  }

  // <n| rho |n> as a matrix on the unmeasured side (unnormalized).
  void condition(const ComplexMatrix& rho, const Eigen::Vector2cd& n, ComplexMatrix& out) const {
    const Eigen::Index dim_b = static_cast<Eigen::Index>(spread.size());
    out.resize(dim_b, dim_b);
    const Complex c0 = std::conj(n(0)), c1 = std::conj(n(1));
    for (Eigen::Index r = 0; r < dim_b; ++r) {
      const Eigen::Index ro = spread[static_cast<std::size_t>(r)];
      for (Eigen::Index c = 0; c < dim_b; ++c) {
        const Eigen::Index co = spread[static_cast<std::size_t>(c)];
        const Complex row0 = rho(ro, co) * n(0) + rho(ro, co + measured_stride) * n(1);
        const Complex row1 =
            rho(ro + measured_stride, co) * n(0) + rho(ro + measured_stride, co + measured_stride) * n(1);
        out(r, c) = c0 * row0 + c1 * row1;
      }
    }
  }
};

}  // namespace

double entropy(std::span<const double> spectrum) {
  double sum = 0.0, h = 0.0;
  for (double lam : spectrum) {
    h += checked_term(lam, "entropy");
    sum += std::max(lam, 0.0);
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw std::invalid_argument("entropy: spectrum sums to " + std::to_string(sum) +
                                ", expected 1");
  return h;
}

double selection_entropy(const BranchState& s, const SubsystemSelector& sel) {
  if (sel.empty()) return 0.0;
  const std::vector<double> spec = reduced_spectrum(s, sel);
  return entropy(spec);
}

double mutual_information(const BranchState& s, const SubsystemSelector& a,
                          const SubsystemSelector& b) {
  if (a.keep_s1 && b.keep_s1)
    throw std::invalid_argument("mutual_information: both selections keep S1");
  if (a.keep_s2 && b.keep_s2)
    throw std::invalid_argument("mutual_information: both selections keep S2");
  if (a.env_kept + b.env_kept > s.n_env())
    throw std::invalid_argument("mutual_information: selections keep more than N env qubits");
  SubsystemSelector joint;
  joint.keep_s1 = a.keep_s1 || b.keep_s1;
  joint.keep_s2 = a.keep_s2 || b.keep_s2;
  joint.env_kept = a.env_kept + b.env_kept;
  return selection_entropy(s, a) + selection_entropy(s, b) - selection_entropy(s, joint);
}

double l1_coherence(const DensityMatrix& rho) {
  double sum = 0.0;
  for (Eigen::Index i = 1; i < rho.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < i; ++j) sum += std::abs(rho.matrix(i, j));
  return sum;
}

Eigen::Vector2cd MeasurementBasis::ket0() const {
  Eigen::Vector2cd v;
  v << std::cos(theta / 2.0), std::exp(Complex(0, phi)) * std::sin(theta / 2.0);
  return v;
}

Eigen::Vector2cd MeasurementBasis::ket1() const {
  Eigen::Vector2cd v;
  v << -std::exp(Complex(0, -phi)) * std::sin(theta / 2.0), std::cos(theta / 2.0);
  return v;
}

DiscordResult discord_measured_on_qubit(const DensityMatrix& rho, std::size_t measured,
                                        const DiscordOptions& opt) {
  if (measured >= rho.dims.size())
    throw std::invalid_argument("discord_measured_on_qubit: measured index out of range");
  if (rho.dims[measured] != 2)
    throw std::invalid_argument(
        "discord_measured_on_qubit: only qubit measurements are supported");
  const Eigen::Index dim_b = rho.dim() / 2;
  if (dim_b > 64)
    throw std::invalid_argument("discord_measured_on_qubit: unmeasured side larger than 64");
  if (opt.grid_theta < 2 || opt.grid_phi < 1)
    throw std::invalid_argument("discord_measured_on_qubit: degenerate search grid");

  std::vector<std::size_t> keep_b;
  for (std::size_t i = 0; i < rho.dims.size(); ++i)
    if (i != measured) keep_b.push_back(i);

  const double s_a = matrix_entropy(partial_trace(rho.matrix, rho.dims, {measured}));
  const double s_b = matrix_entropy(partial_trace(rho.matrix, rho.dims, keep_b));
  const double s_ab = matrix_entropy(rho.matrix);
  const double mi = s_a + s_b - s_ab;

  const ConditionalSlicer slicer(rho.dims, measured);
  ComplexMatrix cond;  // reused scratch
  auto objective = [&](double theta, double phi) {
    const MeasurementBasis basis{theta, phi};
    double avg = 0.0;
    for (int outcome = 0; outcome < 2; ++outcome) {
      slicer.condition(rho.matrix, outcome == 0 ? basis.ket0() : basis.ket1(), cond);
      const double p = cond.trace().real();
      if (p < 1e-14) continue;
      avg += weighted_entropy(cond, p);
    }
    return avg;
  };

  // Coarse grid over the Bloch sphere, then compass refinement.
  double best_theta = 0.0, best_phi = 0.0;
  double best = objective(0.0, 0.0);
  const double dtheta = kPi / (opt.grid_theta - 1);
  const double dphi = kTwoPi / opt.grid_phi;
  for (int i = 0; i < opt.grid_theta; ++i) {
    const double theta = i * dtheta;
    for (int j = 0; j < opt.grid_phi; ++j) {
      const double phi = j * dphi;
      const double val = objective(theta, phi);
      if (val < best) {
        best = val;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }
  double step = std::max(dtheta, dphi);
  while (step > 1e-8) {
    bool moved = false;
    const double cand_theta[4] = {best_theta + step, best_theta - step, best_theta, best_theta};
    const double cand_phi[4] = {best_phi, best_phi, best_phi + step, best_phi - step};
    for (int k = 0; k < 4; ++k) {
      const double theta = std::clamp(cand_theta[k], 0.0, kPi);
      double phi = std::fmod(cand_phi[k], kTwoPi);
      if (phi < 0) phi += kTwoPi;
      const double val = objective(theta, phi);
      if (val < best) {
        best = val;
        best_theta = theta;
        best_phi = phi;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }

  DiscordResult out;
  out.mutual_info = mi;
  out.holevo = s_b - best;
  out.discord = mi - out.holevo;
  out.basis = MeasurementBasis{best_theta, best_phi};
  return out;
}

DeltaIdentity delta_mutual_information(const BranchState& s, int m) {
  if (m < 0 || m > s.n_env())
    throw std::invalid_argument("delta_mutual_information: m outside [0, N]");
  DeltaIdentity d;
  d.lhs = mutual_information(s, SubsystemSelector::system(), SubsystemSelector::env(m)) -
          mutual_information(s, SubsystemSelector::s1(), SubsystemSelector::env(m));
  d.rhs = mutual_information(s, SubsystemSelector::s2(), SubsystemSelector::env(s.n_env())) -
          mutual_information(s, SubsystemSelector::s2(), SubsystemSelector::env(s.n_env() - m));
  return d;
}

GapBounds kw_gap_bounds(const BranchState& s, int m) {
  if (m < 1 || m > s.n_env()) throw std::invalid_argument("kw_gap_bounds: m outside [1, N]");
  GapBounds out;
  out.lower = 0.0;
  out.delta = delta_mutual_information(s, m).lhs;
  if (m == 1) {
    const DensityMatrix joint = reduce(s, SubsystemSelector::system_plus_env(1));
    const DiscordResult back = discord_measured_on_qubit(joint, 2);
    out.upper = selection_entropy(s, SubsystemSelector::system()) + back.discord;
  }
  return out;
}

double concurrence(const DensityMatrix& rho) {
  if (rho.dims != std::vector<Eigen::Index>{2, 2})
    throw std::invalid_argument("concurrence: expected a two-qubit state");
  const ComplexMatrix yy = tensor(pauli_y(), pauli_y());
  const ComplexMatrix tilde = yy * rho.matrix.conjugate() * yy;
  const Eigen::ComplexEigenSolver<ComplexMatrix> es(rho.matrix * tilde);
  if (es.info() != Eigen::Success) throw std::runtime_error("concurrence: eigensolver failed");
  std::array<double, 4> r{};
  for (Eigen::Index k = 0; k < 4; ++k)
    r[static_cast<std::size_t>(k)] = std::sqrt(std::max(0.0, es.eigenvalues()(k).real()));
  std::sort(r.begin(), r.end(), std::greater<>());
  return std::max(0.0, r[0] - r[1] - r[2] - r[3]);
}

double entanglement_of_formation(const DensityMatrix& rho) {
  const double c = concurrence(rho);
  const double x = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c)));
  return plogp(x) + plogp(1.0 - x);
}

}  // namespace darwinsim
