#include "darwinsim/oracle.hpp"

#include "darwinsim/matcore.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace darwinsim;

namespace {

constexpr double kPi = 3.141592653589793;

ModelParams random_params(std::mt19937_64& rng, int n_env) {
  std::uniform_real_distribution<double> angle(0.0, kPi / 2.0);
  std::uniform_real_distribution<double> coupling(0.0, 10.0);
  std::uniform_real_distribution<double> ising(-2.0, 2.0);
  std::uniform_real_distribution<double> dephase(0.0, 2.0);
  std::uniform_real_distribution<double> time(0.0, kPi);
  ModelParams p;
  p.theta1 = angle(rng);
  p.theta2 = angle(rng);
  p.j = coupling(rng);
  p.jz = ising(rng);
  p.jse = dephase(rng);
  p.n_env = n_env;
  p.t = time(rng);
  return p;
}

double fidelity(const ComplexVector& a, const ComplexVector& b) { return std::abs(a.dot(b)); }

}  // namespace

TEST_CASE("dense evolution reproduces the closed form when jx equals jy") {
  std::mt19937_64 rng(307);
  for (int trial = 0; trial < 12; ++trial) {
    const int n_env = 2 + static_cast<int>(rng() % 3);
    const ModelParams p = random_params(rng, n_env);
    const ComplexVector dense = dense_evolve(DenseParams::from(p));
    const ComplexVector analytic = materialize(build_state(p));
    CHECK(fidelity(dense, analytic) >= 1.0 - 1e-9);
    CHECK((dense - analytic).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("dense evolution at the reference point, full environment") {
  const ModelParams p;
  const ComplexVector dense = dense_evolve(DenseParams::from(p));
  const ComplexVector analytic = materialize(build_state(p));
  CHECK(fidelity(dense, analytic) >= 1.0 - 1e-12);
  CHECK(std::abs(dense.squaredNorm() - 1.0) < 1e-12);
}

TEST_CASE("reduced matrices from the two representations agree") {
  std::mt19937_64 rng(311);
  for (int trial = 0; trial < 6; ++trial) {
    const ModelParams p = random_params(rng, 3);
    const BranchState s = build_state(p);
    const ComplexVector psi = dense_evolve(DenseParams::from(p));
    for (const SubsystemSelector& sel :
         {SubsystemSelector::s1(), SubsystemSelector::system(), SubsystemSelector::env(1),
          SubsystemSelector::env(2), SubsystemSelector::system_plus_env(1),
          SubsystemSelector::s1_plus_env(2)}) {
      const DensityMatrix a = reduce(s, sel);
      const DensityMatrix b = dense_reduce(psi, p.n_env, sel);
      CHECK(max_norm(a.matrix - b.matrix) < 1e-9);
    }
  }
}

TEST_CASE("dense spectra match the gram-path spectra") {
  std::mt19937_64 rng(313);
  for (int trial = 0; trial < 6; ++trial) {
    const ModelParams p = random_params(rng, 4);
    const BranchState s = build_state(p);
    const ComplexVector psi = dense_evolve(DenseParams::from(p));
    for (const SubsystemSelector& sel :
         {SubsystemSelector::system(), SubsystemSelector::env(2),
          SubsystemSelector::system_plus_env(2)}) {
      const std::vector<double> fast = reduced_spectrum(s, sel);
      const std::vector<double> slow = dense_reduced_spectrum(psi, p.n_env, sel);
      for (std::size_t k = 0; k < 4; ++k) {
        const double ref = k < slow.size() ? slow[k] : 0.0;
        CHECK(std::abs(fast[k] - ref) < 1e-9);
      }
    }
  }
}

TEST_CASE("environment qubits are interchangeable in the dense state") {
  std::mt19937_64 rng(317);
  const ModelParams p = random_params(rng, 4);
  const ComplexVector psi = dense_evolve(DenseParams::from(p));
  const std::vector<Eigen::Index> dims(6, 2);

  const DensityMatrix e1 = dense_reduce(psi, dims, {2});
  const DensityMatrix e3 = dense_reduce(psi, dims, {4});
  CHECK(max_norm(e1.matrix - e3.matrix) < 1e-12);

  const DensityMatrix s1e2 = dense_reduce(psi, dims, {0, 3});
  const DensityMatrix s1e4 = dense_reduce(psi, dims, {0, 5});
  CHECK(max_norm(s1e2.matrix - s1e4.matrix) < 1e-12);
}

TEST_CASE("unequal exchange couplings leave the closed form") {
  DenseParams d;
  d.jx = 10.0;
  d.jy = 7.0;
  const ComplexVector dense = dense_evolve(d);

  ModelParams p;  // closed form only sees one exchange constant
  const ComplexVector analytic = materialize(build_state(p));
  CHECK(fidelity(dense, analytic) < 1.0 - 1e-3);
  CHECK(std::abs(dense.squaredNorm() - 1.0) < 1e-12);
  CHECK_FALSE(d.commuting());
}

TEST_CASE("state_at preserves norm and starts at the product state") {
  DenseParams d;
  d.n_env = 3;
  d.jx = 4.0;
  d.jy = 2.5;
  const DenseEvolver ev(d);
  const ComplexVector psi0 = ev.state_at(0.0);
  ComplexVector s1(2), s2(2), plus(2);
  s1 << std::cos(d.theta1), std::sin(d.theta1);
  s2 << std::cos(d.theta2), std::sin(d.theta2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  ComplexVector expected = tensor(tensor(s1, s2), plus);
  expected = tensor(tensor(expected, plus), plus);
  CHECK((psi0 - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(std::abs(ev.state_at(1.37).squaredNorm() - 1.0) < 1e-12);
}

TEST_CASE("dense caps and argument validation") {
  DenseParams d;
  d.n_env = 9;
  CHECK_THROWS_AS(DenseEvolver{d}, std::length_error);
  d.n_env = 0;
  CHECK_THROWS_AS(DenseEvolver{d}, std::invalid_argument);

  ModelParams p;
  p.n_env = 13;
  CHECK_THROWS_AS(materialize(build_state(p)), std::length_error);

  const ComplexVector psi = dense_evolve(DenseParams{});
  const std::vector<Eigen::Index> dims(8, 2);
  CHECK_THROWS_AS(dense_reduce(psi, dims, {3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(dense_reduce(psi, dims, {}), std::invalid_argument);
  CHECK_THROWS_AS(dense_reduce(psi, dims, {9}), std::invalid_argument);
  CHECK_THROWS_AS(dense_reduce(psi, 6, SubsystemSelector::env(7)), std::invalid_argument);
}
