#include "darwinsim/infomeasures.hpp"

#include "darwinsim/matcore.hpp"

#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

using namespace darwinsim;

namespace {

constexpr double kPi = 3.141592653589793;

// Binary entropies of the reference-point spectra, frozen from the closed
// forms h(x) = -x log2 x - (1-x) log2 (1-x).
constexpr double kH58 = 0.954434002924965;   // h(5/8)
constexpr double kH34 = 0.811278124459133;   // h(3/4)
constexpr double kH58MinusH34 = 0.143155878465832;

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

DensityMatrix bell_state() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return DensityMatrix(v * v.adjoint(), {2, 2});
}

DensityMatrix plateau_system_state() {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 9.0 / 16.0;
  m(1, 1) = 3.0 / 16.0;
  m(2, 2) = 3.0 / 16.0;
  m(3, 3) = 1.0 / 16.0;
  m(0, 3) = m(3, 0) = 3.0 / 16.0;
  m(1, 2) = m(2, 1) = 3.0 / 16.0;
  return DensityMatrix(std::move(m), {2, 2});
}

}  // namespace

TEST_CASE("spectrum entropy closed forms") {
  const std::array<double, 2> xs{0.625, 0.375};
  CHECK(entropy(xs) == doctest::Approx(kH58).epsilon(1e-12));
  const std::array<double, 2> pure{1.0, 0.0};
  CHECK(entropy(pure) == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
  const std::array<double, 2> flat{0.5, 0.5};
  CHECK(entropy(flat) == doctest::Approx(1.0).epsilon(1e-15));
  const std::array<double, 3> dusty{0.625, 0.375 + 5e-13, -5e-13};
  CHECK(entropy(dusty) == doctest::Approx(kH58).epsilon(1e-9));
}

TEST_CASE("spectrum entropy rejects malformed input") {
  const std::array<double, 2> short_sum{0.5, 0.4};
  CHECK_THROWS_AS(entropy(short_sum), std::invalid_argument);
  const std::array<double, 2> negative{1.05, -0.05};
  CHECK_THROWS_AS(entropy(negative), std::domain_error);
}

TEST_CASE("selection entropies at the reference point") {
  const BranchState s = build_state(ModelParams{});
  CHECK(selection_entropy(s, SubsystemSelector::system()) == doctest::Approx(kH58).epsilon(1e-12));
  CHECK(selection_entropy(s, SubsystemSelector::s1()) == doctest::Approx(kH34).epsilon(1e-12));
  CHECK(selection_entropy(s, SubsystemSelector::env(3)) == doctest::Approx(kH58).epsilon(1e-12));
  CHECK(selection_entropy(s, SubsystemSelector::s1_plus_env(2)) ==
        doctest::Approx(2.0 * kH34).epsilon(1e-12));
  CHECK(selection_entropy(s, SubsystemSelector{}) == 0.0);
}

TEST_CASE("mutual information plateau at the reference point") {
  const BranchState s = build_state(ModelParams{});
  const double s_sys = selection_entropy(s, SubsystemSelector::system());
  for (int m = 1; m < 6; ++m) {
    const double mi =
        mutual_information(s, SubsystemSelector::system(), SubsystemSelector::env(m));
    CHECK(mi == doctest::Approx(kH58).epsilon(1e-9));
    CHECK(mi / s_sys == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mutual_information(s, SubsystemSelector::s1(), SubsystemSelector::env(m)) ==
          doctest::Approx(kH58MinusH34).epsilon(1e-9));
  }
  const double full = mutual_information(s, SubsystemSelector::system(), SubsystemSelector::env(6));
  CHECK(full == doctest::Approx(2.0 * kH58).epsilon(1e-9));
  CHECK(full / s_sys == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("mutual information rejects overlapping selections") {
  const BranchState s = build_state(ModelParams{});
  CHECK_THROWS_AS(mutual_information(s, SubsystemSelector::s1(), SubsystemSelector::s1()),
                  std::invalid_argument);
  CHECK_THROWS_AS(mutual_information(s, SubsystemSelector::system(), SubsystemSelector::s2()),
                  std::invalid_argument);
  CHECK_THROWS_AS(mutual_information(s, SubsystemSelector::env(4), SubsystemSelector::env(3)),
                  std::invalid_argument);
}

TEST_CASE("l1 coherences at the reference point") {
  const BranchState s = build_state(ModelParams{});
  CHECK(l1_coherence(reduce(s, SubsystemSelector::system())) ==
        doctest::Approx(0.375).epsilon(1e-12));
  CHECK(l1_coherence(reduce(s, SubsystemSelector::env(1))) ==
        doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("discord of a Bell pair is one bit") {
  const DiscordResult r = discord_measured_on_qubit(bell_state(), 0);
  CHECK(r.mutual_info == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.holevo == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.discord == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("diagonal two-qubit states carry no discord") {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = 0.4;
  m(1, 1) = 0.3;
  m(2, 2) = 0.2;
  m(3, 3) = 0.1;
  const DensityMatrix rho(std::move(m), {2, 2});
  for (std::size_t measured : {std::size_t{0}, std::size_t{1}}) {
    const DiscordResult r = discord_measured_on_qubit(rho, measured);
    CHECK(std::abs(r.discord) < 1e-9);
  }
}

TEST_CASE("forward discord of the reference system state") {
  // Frozen from an independent grid-plus-refinement search over measurement
  // directions on the first qubit.
  const DiscordResult r = discord_measured_on_qubit(plateau_system_state(), 0);
  CHECK(r.mutual_info == doctest::Approx(0.668122245993301).epsilon(1e-9));
  CHECK(r.holevo == doctest::Approx(0.527836188929674).epsilon(1e-6));
  CHECK(r.discord == doctest::Approx(0.140286057063626).epsilon(1e-6));
  CHECK(std::abs(r.basis.theta - kPi / 2.0) < 1e-4);  // equatorial minimizer
}

TEST_CASE("discord search is stable under grid refinement") {
  const DensityMatrix rho = plateau_system_state();
  const DiscordResult coarse = discord_measured_on_qubit(rho, 0, DiscordOptions{64, 64});
  const DiscordResult fine = discord_measured_on_qubit(rho, 0, DiscordOptions{128, 128});
  CHECK(std::abs(coarse.discord - fine.discord) < 1e-6);
}

TEST_CASE("reference point is classical towards the environment") {
  const BranchState s = build_state(ModelParams{});

  const DensityMatrix joint = reduce(s, SubsystemSelector::system_plus_env(1));
  const DiscordResult backward = discord_measured_on_qubit(joint, 2);
  CHECK(std::abs(backward.discord) < 1e-8);

  const DensityMatrix pair = reduce(s, SubsystemSelector::s1_plus_env(1));
  for (std::size_t measured : {std::size_t{0}, std::size_t{1}}) {
    const DiscordResult r = discord_measured_on_qubit(pair, measured);
    CHECK(std::abs(r.discord) < 1e-8);
  }
}

TEST_CASE("discord argument validation") {
  const DensityMatrix rho = plateau_system_state();
  CHECK_THROWS_AS(discord_measured_on_qubit(rho, 2), std::invalid_argument);
  CHECK_THROWS_AS(discord_measured_on_qubit(rho, 0, DiscordOptions{1, 0}),
                  std::invalid_argument);

  const DensityMatrix coarse(ComplexMatrix::Identity(4, 4) / 4.0, {4});
  CHECK_THROWS_AS(discord_measured_on_qubit(coarse, 0), std::invalid_argument);

  const Eigen::Index big = 256;
  const DensityMatrix wide(ComplexMatrix::Identity(big, big) / static_cast<double>(big),
                           std::vector<Eigen::Index>(8, 2));
  CHECK_THROWS_AS(discord_measured_on_qubit(wide, 0), std::invalid_argument);
}

TEST_CASE("partial information gap identity at the reference point") {
  const BranchState s = build_state(ModelParams{});
  const DeltaIdentity d1 = delta_mutual_information(s, 1);
  CHECK(d1.lhs == doctest::Approx(kH34).epsilon(1e-9));
  CHECK(d1.rhs == doctest::Approx(kH34).epsilon(1e-9));
  for (int m = 0; m <= 6; ++m) {
    const DeltaIdentity d = delta_mutual_information(s, m);
    CHECK(std::abs(d.lhs - d.rhs) < 1e-9);
  }
}

TEST_CASE("partial information gap identity for random parameters") {
  std::mt19937_64 rng(401);
  for (int trial = 0; trial < 15; ++trial) {
    const BranchState s = build_state(random_params(rng, 5));
    for (int m = 0; m <= 5; ++m) {
      const DeltaIdentity d = delta_mutual_information(s, m);
      CHECK(std::abs(d.lhs - d.rhs) < 1e-9);
    }
  }
  const BranchState s = build_state(ModelParams{});
  CHECK_THROWS_AS(delta_mutual_information(s, -1), std::invalid_argument);
  CHECK_THROWS_AS(delta_mutual_information(s, 7), std::invalid_argument);
}

TEST_CASE("mutual information grows with the fragment") {
  std::mt19937_64 rng(409);
  for (int trial = 0; trial < 10; ++trial) {
    const BranchState s = build_state(random_params(rng, 6));
    double prev = 0.0;
    for (int m = 1; m <= 6; ++m) {
      const double mi =
          mutual_information(s, SubsystemSelector::system(), SubsystemSelector::env(m));
      CHECK(mi >= prev - 1e-9);
      prev = mi;
    }
  }
}

TEST_CASE("gap bounds sandwich the measured gap") {
  const BranchState ref = build_state(ModelParams{});
  const GapBounds at_ref = kw_gap_bounds(ref, 1);
  CHECK(at_ref.delta == doctest::Approx(kH34).epsilon(1e-9));
  REQUIRE(at_ref.upper.has_value());
  CHECK(*at_ref.upper == doctest::Approx(kH58).epsilon(1e-6));
  CHECK(at_ref.delta >= at_ref.lower - 1e-9);
  CHECK(at_ref.delta <= *at_ref.upper + 1e-6);

  std::mt19937_64 rng(419);
  for (int trial = 0; trial < 6; ++trial) {
    const BranchState s = build_state(random_params(rng, 4));
    const GapBounds b1 = kw_gap_bounds(s, 1);
    REQUIRE(b1.upper.has_value());
    CHECK(b1.delta >= b1.lower - 1e-9);
    CHECK(b1.delta <= *b1.upper + 1e-6);
    const GapBounds b2 = kw_gap_bounds(s, 2);
    CHECK_FALSE(b2.upper.has_value());
    CHECK(b2.delta >= b2.lower - 1e-9);
  }
  CHECK_THROWS_AS(kw_gap_bounds(ref, 0), std::invalid_argument);
  CHECK_THROWS_AS(kw_gap_bounds(ref, 7), std::invalid_argument);
}

TEST_CASE("concurrence and entanglement of formation") {
  CHECK(concurrence(bell_state()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(entanglement_of_formation(bell_state()) == doctest::Approx(1.0).epsilon(1e-12));

  ComplexMatrix prod = ComplexMatrix::Zero(4, 4);
  prod(0, 0) = 1.0;
  const DensityMatrix product(std::move(prod), {2, 2});
  CHECK(concurrence(product) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  CHECK(entanglement_of_formation(product) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

  // Werner mixture p |Phi+><Phi+| + (1-p) I/4 at p = 0.9: C = (3p-1)/2.
  const double p = 0.9;
  ComplexMatrix w = p * bell_state().matrix + (1.0 - p) * ComplexMatrix::Identity(4, 4) / 4.0;
  const DensityMatrix werner(std::move(w), {2, 2});
  CHECK(concurrence(werner) == doctest::Approx(0.85).epsilon(1e-12));
  CHECK(entanglement_of_formation(werner) == doctest::Approx(0.789354960988785).epsilon(1e-12));

  const DensityMatrix coarse(ComplexMatrix::Identity(4, 4) / 4.0, {4});
  CHECK_THROWS_AS(concurrence(coarse), std::invalid_argument);
}

TEST_CASE("entanglement plus classical correlation saturates the marginal entropy") {
  // For a pure three-qubit state, E_F(S1:S2) + J(S1:E) = S(S1), with J the
  // classical correlation extracted by the optimal environment measurement.
  std::mt19937_64 rng(431);
  for (int trial = 0; trial < 6; ++trial) {
    const BranchState s = build_state(random_params(rng, 1));
    const double eof = entanglement_of_formation(reduce(s, SubsystemSelector::system()));
    const DensityMatrix pair = reduce(s, SubsystemSelector::s1_plus_env(1));
    const double classical = discord_measured_on_qubit(pair, 1).holevo;
    const double marginal = selection_entropy(s, SubsystemSelector::s1());
    CHECK(std::abs(eof + classical - marginal) < 1e-6);
  }
}
