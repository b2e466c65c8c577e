// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qproc/identities.hpp"

using namespace qproc;
using qt::max_abs_diff;

namespace {

Eigen::VectorXcd bell_ket() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

MultiMeasurement zx_measurement() {
  MultiMeasurement mm;
  mm.dim = 2;
  mm.n_settings = 2;
  mm.n_outcomes = 2;
  mm.effects = {qt::proj0(), qt::proj1(), qt::proj_plus(), qt::proj_minus()};
  return mm;
}

MultiMeasurement pauli_complete() {
  MultiMeasurement mm;
  mm.dim = 2;
  mm.n_settings = 3;
  mm.n_outcomes = 2;
  mm.effects = {qt::proj0(),       qt::proj1(),        qt::proj_plus(),
                qt::proj_minus(),  qt::bloch(0, 1, 0), qt::bloch(0, -1, 0)};
  return mm;
}

MultiMeasurement pentagon(double eta) {
  MultiMeasurement mm;
  mm.dim = 2;
  mm.n_settings = 1;
  mm.n_outcomes = 5;
  for (int b = 0; b < 5; ++b) {
    const double th = 2.0 * M_PI * b / 5.0;
    mm.effects.push_back(0.4 * qt::bloch(eta * std::cos(th), 0, eta * std::sin(th)));
  }
  return mm;
}

MultiMeasurement qubit_sic() {
  MultiMeasurement mm;
  mm.dim = 2;
  mm.n_settings = 1;
  mm.n_outcomes = 4;
  const double s = 1.0 / std::sqrt(3.0);
  const double v[4][3] = {{s, s, s}, {s, -s, -s}, {-s, s, -s}, {-s, -s, s}};
  for (const auto& r : v) mm.effects.push_back(0.5 * qt::bloch(r[0], r[1], r[2]));
  return mm;
}

MultiSource uniform_source(std::vector<HermitianOperator> states) {
  MultiSource ms;
  ms.dim = states.front().dim();
  ms.n_settings = 1;
  ms.n_outcomes = static_cast<int>(states.size());
  ms.weights.assign(states.size(), 1.0 / static_cast<double>(states.size()));
  ms.states = std::move(states);
  return ms;
}

}  // namespace

TEST_CASE("conjugate-basis multi-state has the single expected identity") {
  const IdentitySet ids = identities_of_multisource(
      uniform_source({qt::proj0(), qt::proj1(), qt::proj_plus(), qt::proj_minus()}));
  REQUIRE(ids.dimension() == 1);
  Eigen::Vector4d expected;
  expected << 0.5, 0.5, -0.5, -0.5;
  CHECK((ids.basis[0] - expected).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(ids.index_labels[0] == "a0|x0");
  CHECK(ids.index_labels[3] == "a3|x0");
}

TEST_CASE("three linearly independent states carry no identities") {
  std::vector<HermitianOperator> trine;
  for (int k = 0; k < 3; ++k) {
    const double th = 2.0 * M_PI * k / 3.0;
    trine.push_back(qt::bloch(std::sin(th), 0, std::cos(th)));
  }
  CHECK(identities_of_multisource(uniform_source(trine)).dimension() == 0);
}

TEST_CASE("assemblages contain the marginal identities") {
  const BipartiteState bell{2, 2, qt::ket_proj(bell_ket())};
  const MultiSource assemblage = steer(bell, zx_measurement(), 1);
  const IdentitySet ids = identities_of_multisource(assemblage);
  // Marginal identity: outcomes of setting 0 minus outcomes of setting 1.
  Eigen::VectorXd marginal(4);
  marginal << 1, 1, -1, -1;
  marginal.normalize();
  CHECK(ids.contains(marginal, 1e-8));
}

TEST_CASE("the conjugate-pair measurement has exactly the completeness identity") {
  const IdentitySet ids = identities_of_multimeasurement(zx_measurement());
  REQUIRE(ids.dimension() == 1);
  Eigen::Vector4d expected;
  expected << 0.5, 0.5, -0.5, -0.5;
  CHECK((ids.basis[0] - expected).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("identity dimensions of the pentagon and SIC measurements") {
  CHECK(identities_of_multimeasurement(pentagon(1.0)).dimension() == 2);
  CHECK(identities_of_multimeasurement(pentagon(0.3)).dimension() == 2);
  CHECK(identities_of_multimeasurement(qubit_sic()).dimension() == 0);
}

TEST_CASE("steered identity sets subsume the measurement identities") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const BipartiteState rho{2, 2, qt::random_state(4, rng)};
    const BipartiteIdentities ind =
        induced_identities_bipartite(rho, zx_measurement(), pauli_complete());
    for (const auto& v : ind.m1.basis) CHECK(ind.steered1.contains(v, 1e-8));
    for (const auto& v : ind.m2.basis) CHECK(ind.steered2.contains(v, 1e-8));
  }
}

TEST_CASE("nonsingular states create no new identities") {
  const BipartiteState bell{2, 2, qt::ket_proj(bell_ket())};
  const BipartiteIdentities ind =
      induced_identities_bipartite(bell, pauli_complete(), pauli_complete());
  CHECK(ind.steered1.dimension() == ind.m1.dimension());
  CHECK(ind.steered2.dimension() == ind.m2.dimension());
  for (const auto& v : ind.steered1.basis) CHECK(ind.m1.contains(v, 1e-8));
  for (const auto& v : ind.steered2.basis) CHECK(ind.m2.contains(v, 1e-8));
}

TEST_CASE("product states collapse the steered identity space") {
  std::mt19937 rng(37);
  const auto rho1 = qt::random_state(2, rng);
  const auto rho2 = qt::random_state(2, rng);
  const BipartiteState prod{2, 2, kron(rho1, rho2)};
  const BipartiteIdentities ind =
      induced_identities_bipartite(prod, zx_measurement(), zx_measurement());
  // Steered states on side 2 are all proportional to rho2, so the identity
  // space is the hyperplane of vectors orthogonal to the probability vector.
  CHECK(ind.steered1.dimension() == 3);
  for (const auto& v : ind.steered1.basis) {
    double pairing = 0.0;
    for (int i = 0; i < 4; ++i)
      pairing += v(i) * hs_inner(zx_measurement().effects[i], rho1);
    CHECK(std::abs(pairing) < 1e-8);
  }
}

TEST_CASE("product expansion exists exactly when the steered products span") {
  const BipartiteState bell{2, 2, qt::ket_proj(bell_ket())};
  // Z and X alone never produce the sigma_y (x) sigma_y component.
  const BipartiteIdentities zx =
      induced_identities_bipartite(bell, zx_measurement(), zx_measurement());
  CHECK(!zx.expansion_exists);
  CHECK(zx.expansion_residual > 1e-3);

  const BipartiteIdentities full =
      induced_identities_bipartite(bell, pauli_complete(), pauli_complete());
  CHECK(full.expansion_exists);
  CHECK(full.expansion_residual < 1e-10);
  // Rebuild the state from the reported coefficients.
  std::vector<HermitianOperator> side1, side2;
  for (const auto& m : pauli_complete().effects) {
    side2.push_back(steered_operator(bell, m, 1));
    side1.push_back(steered_operator(bell, m, 2));
  }
  HermitianOperator rebuilt = HermitianOperator::zero(4);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      rebuilt = rebuilt + full.expansion_coeffs(i, j) * kron(side1[i], side2[j]);
  CHECK(max_abs_diff(rebuilt, bell.rho) < 1e-9);
}

TEST_CASE("nonsingularity of standard states") {
  const BipartiteState bell{2, 2, qt::ket_proj(bell_ket())};
  const NonsingularityReport rep = is_nonsingular(bell);
  CHECK(rep.nonsingular);
  CHECK(rep.cond1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.cond2 == doctest::Approx(1.0).epsilon(1e-9));

  std::mt19937 rng(41);
  const BipartiteState prod{2, 2, kron(qt::random_state(2, rng), qt::random_state(2, rng))};
  CHECK(!is_nonsingular(prod).nonsingular);

  // Mismatched subsystem dimensions can never be nonsingular.
  Eigen::MatrixXcd cq = Eigen::MatrixXcd::Zero(8, 8);
  const HermitianOperator branches[4] = {qt::proj0(), qt::proj1(), qt::proj_plus(),
                                         qt::proj_minus()};
  for (int i = 0; i < 4; ++i) {
    Eigen::MatrixXcd flag = Eigen::MatrixXcd::Zero(4, 4);
    flag(i, i) = 1.0;
    cq += 0.25 * kron(flag, branches[i].mat());
  }
  CHECK(!is_nonsingular(BipartiteState{4, 2, HermitianOperator(cq)}).nonsingular);
}
