// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "qproc/processes.hpp"

using namespace qproc;
using qt::max_abs_diff;

namespace {

Eigen::VectorXcd bell_ket() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

HermitianOperator basis_proj(int dim, int k) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  m(k, k) = 1.0;
  return HermitianOperator(m);
}

/** The 4 (x) 2 classical-quantum state with conjugate-basis branches. */
BipartiteState cq_conjugate_state() {
  const HermitianOperator branches[4] = {qt::proj0(), qt::proj1(), qt::proj_plus(),
                                         qt::proj_minus()};
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(8, 8);
  for (int i = 0; i < 4; ++i)
    rho += 0.25 * kron(basis_proj(4, i).mat(), branches[i].mat());
  return BipartiteState{4, 2, HermitianOperator(rho)};
}

MultiMeasurement zx_measurement() {
  MultiMeasurement mm;
  mm.dim = 2;
  mm.n_settings = 2;
  mm.n_outcomes = 2;
  mm.effects = {qt::proj0(), qt::proj1(), qt::proj_plus(), qt::proj_minus()};
  return mm;
}

}  // namespace

TEST_CASE("kron and partial trace are mutually consistent") {
  std::mt19937 rng(3);
  const auto a = qt::random_state(2, rng);
  const auto b = qt::random_state(3, rng);
  const auto ab = kron(a, b);
  CHECK(max_abs_diff(partial_trace(ab, {2, 3}, {true, false}), a) < 1e-12);
  CHECK(max_abs_diff(partial_trace(ab, {2, 3}, {false, true}), b) < 1e-12);
  CHECK(partial_trace(ab, {2, 3}, {false, false}).mat()(0, 0).real() ==
        doctest::Approx(1.0));

  const auto c = qt::random_state(2, rng);
  const auto abc = kron(kron(a, b), c);
  CHECK(max_abs_diff(partial_trace(abc, {2, 3, 2}, {false, true, false}), b) < 1e-12);
  CHECK(max_abs_diff(partial_trace(abc, {2, 3, 2}, {true, false, true}), kron(a, c)) < 1e-12);
}

TEST_CASE("partial transpose acts factorwise and squares to the identity") {
  std::mt19937 rng(4);
  const auto a = qt::random_herm(2, rng);
  const auto b = qt::random_herm(3, rng);
  const auto ab = kron(a, b);
  const HermitianOperator bt(b.mat().transpose().eval());
  CHECK(max_abs_diff(partial_transpose(ab, {2, 3}, {false, true}), kron(a, bt)) < 1e-12);
  CHECK(max_abs_diff(
            partial_transpose(partial_transpose(ab, {2, 3}, {false, true}), {2, 3},
                              {false, true}),
            ab) < 1e-12);
}

TEST_CASE("the maximally entangled state has negative partial transpose -1/2") {
  const HermitianOperator bell = qt::ket_proj(bell_ket());
  const HermitianOperator pt = partial_transpose(bell, {2, 2}, {false, true});
  CHECK(pt.eig_min() == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("identity channel round-trips states and effects") {
  const ChannelChoi id = ChannelChoi::from_map(
      2, 2, [](const Eigen::MatrixXcd& x) { return x; });
  CHECK_NOTHROW(validate(id));
  // Its Choi state is the maximally entangled state.
  CHECK(max_abs_diff(id.choi, qt::ket_proj(bell_ket())) < 1e-12);

  std::mt19937 rng(9);
  const auto x = qt::random_herm(2, rng);
  CHECK(max_abs_diff(id.apply(x), x) < 1e-12);
  CHECK(max_abs_diff(id.adjoint_apply(x), x) < 1e-12);
}

TEST_CASE("channel action, adjoint, and trace preservation agree") {
  std::mt19937 rng(10);
  // A qubit amplitude-damping-like map given through Kraus operators.
  Eigen::Matrix2cd k0, k1;
  const double g = 0.3;
  k0 << 1, 0, 0, std::sqrt(1 - g);
  k1 << 0, std::sqrt(g), 0, 0;
  const ChannelChoi ch = ChannelChoi::from_map(2, 2, [&](const Eigen::MatrixXcd& x) {
    return (k0 * x * k0.adjoint() + k1 * x * k1.adjoint()).eval();
  });
  CHECK_NOTHROW(validate(ch));

  for (int t = 0; t < 5; ++t) {
    const auto rho = qt::random_state(2, rng);
    const auto m = qt::random_herm(2, rng);
    CHECK(rho.trace() == doctest::Approx(ch.apply(rho).trace()).epsilon(1e-10));
    CHECK(hs_inner(m, ch.apply(rho)) ==
          doctest::Approx(hs_inner(ch.adjoint_apply(m), rho)).epsilon(1e-10));
  }
  CHECK(max_abs_diff(ch.adjoint_apply(HermitianOperator::identity(2)),
                     HermitianOperator::identity(2)) < 1e-10);
}

TEST_CASE("measure-and-prepare channels realize their defining action") {
  // 4 -> 2: read the input in the computational basis, prepare the matching
  // conjugate-basis pure state.
  const std::vector<HermitianOperator> effects = {basis_proj(4, 0), basis_proj(4, 1),
                                                  basis_proj(4, 2), basis_proj(4, 3)};
  const std::vector<HermitianOperator> prepared = {qt::proj0(), qt::proj1(), qt::proj_plus(),
                                                   qt::proj_minus()};
  const ChannelChoi ch = ChannelChoi::measure_prepare(effects, prepared);
  CHECK_NOTHROW(validate(ch));

  std::mt19937 rng(12);
  const auto x = qt::random_herm(4, rng);
  HermitianOperator expected = HermitianOperator::zero(2);
  for (int k = 0; k < 4; ++k) expected = expected + hs_inner(effects[k], x) * prepared[k];
  CHECK(max_abs_diff(ch.apply(x), expected) < 1e-10);
}

TEST_CASE("steering the maximally entangled state reflects the measurement") {
  const BipartiteState bell{2, 2, qt::ket_proj(bell_ket())};
  const MultiSource assemblage = steer(bell, zx_measurement(), 1);
  CHECK(assemblage.assemblage);
  CHECK(assemblage.n_settings == 2);
  CHECK(assemblage.n_outcomes == 2);
  for (double w : assemblage.weights) CHECK(w == doctest::Approx(0.5).epsilon(1e-12));
  // For this state the conditional states are the transposed effects; all
  // four effects here are real, so they come back unchanged.
  CHECK(max_abs_diff(assemblage.states[0], qt::proj0()) < 1e-10);
  CHECK(max_abs_diff(assemblage.states[1], qt::proj1()) < 1e-10);
  CHECK(max_abs_diff(assemblage.states[2], qt::proj_plus()) < 1e-10);
  CHECK(max_abs_diff(assemblage.states[3], qt::proj_minus()) < 1e-10);
}

TEST_CASE("steering a product state never updates the remote side") {
  std::mt19937 rng(15);
  const auto rho_a = qt::random_state(2, rng);
  const auto rho_b = qt::random_state(2, rng);
  const BipartiteState prod{2, 2, kron(rho_a, rho_b)};
  const MultiSource assemblage = steer(prod, zx_measurement(), 2);
  for (int i = 0; i < assemblage.size(); ++i) {
    CHECK(assemblage.weights[i] ==
          doctest::Approx(hs_inner(zx_measurement().effects[i], rho_b)).epsilon(1e-10));
    CHECK(max_abs_diff(assemblage.states[i], rho_a) < 1e-9);
  }
}

TEST_CASE("steering the classical-quantum state yields the conjugate-basis source") {
  MultiMeasurement computational;
  computational.dim = 4;
  computational.n_settings = 1;
  computational.n_outcomes = 4;
  for (int i = 0; i < 4; ++i) computational.effects.push_back(basis_proj(4, i));

  const MultiSource src = steer(cq_conjugate_state(), computational, 1);
  const HermitianOperator expected[4] = {qt::proj0(), qt::proj1(), qt::proj_plus(),
                                         qt::proj_minus()};
  for (int i = 0; i < 4; ++i) {
    CHECK(src.weights[i] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(max_abs_diff(src.states[i], expected[i]) < 1e-10);
  }
}

TEST_CASE("pushforward and pullback are adjoint to each other") {
  std::mt19937 rng(21);
  Eigen::Matrix2cd k0, k1;
  const double g = 0.45;
  k0 << 1, 0, 0, std::sqrt(1 - g);
  k1 << 0, std::sqrt(g), 0, 0;
  const ChannelChoi ch = ChannelChoi::from_map(2, 2, [&](const Eigen::MatrixXcd& x) {
    return (k0 * x * k0.adjoint() + k1 * x * k1.adjoint()).eval();
  });

  MultiSource src;
  src.dim = 2;
  src.n_settings = 1;
  src.n_outcomes = 2;
  src.weights = {0.5, 0.5};
  src.states = {qt::random_state(2, rng), qt::random_state(2, rng)};

  const MultiSource pushed = pushforward(ch, src);
  const MultiMeasurement pulled = pullback(ch, zx_measurement());
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < 2; ++a)
      CHECK(hs_inner(zx_measurement().effects[i], pushed.states[a]) ==
            doctest::Approx(hs_inner(pulled.effects[i], src.states[a])).epsilon(1e-10));
}

TEST_CASE("flag convexification merges settings uniformly") {
  const MultiSource src = steer(BipartiteState{2, 2, qt::ket_proj(bell_ket())},
                                zx_measurement(), 1);
  const MultiSource flat = flag_convexify(src);
  CHECK(flat.n_settings == 1);
  CHECK(flat.n_outcomes == 4);
  for (double w : flat.weights) CHECK(w == doctest::Approx(0.25).epsilon(1e-12));

  const MultiMeasurement flat_m = flag_convexify(zx_measurement());
  CHECK(flat_m.n_settings == 1);
  CHECK(flat_m.n_outcomes == 4);
  CHECK(max_abs_diff(flat_m.effects[0], 0.5 * qt::proj0()) < 1e-12);
  HermitianOperator sum = HermitianOperator::zero(2);
  for (const auto& e : flat_m.effects) sum = sum + e;
  CHECK(max_abs_diff(sum, HermitianOperator::identity(2)) < 1e-12);
}

TEST_CASE("dephased embedding produces the expected classical-quantum state") {
  MultiSource src;
  src.dim = 2;
  src.n_settings = 1;
  src.n_outcomes = 2;
  src.weights = {0.25, 0.75};
  src.states = {qt::proj0(), qt::proj_plus()};
  const BipartiteState emb = dephase_embed(src);
  CHECK(emb.d1 == 2);
  CHECK(emb.d2 == 2);
  const HermitianOperator flag_marginal = partial_trace(emb.rho, {2, 2}, {true, false});
  CHECK(flag_marginal.mat()(0, 0).real() == doctest::Approx(0.25));
  CHECK(flag_marginal.mat()(1, 1).real() == doctest::Approx(0.75));
  CHECK(std::abs(flag_marginal.mat()(0, 1)) < 1e-14);
  const HermitianOperator avg = partial_trace(emb.rho, {2, 2}, {false, true});
  CHECK(max_abs_diff(avg, 0.25 * qt::proj0() + 0.75 * qt::proj_plus()) < 1e-12);
}

TEST_CASE("associated state of the conjugate-basis measurement is the cq state") {
  MultiMeasurement bb;
  bb.dim = 2;
  bb.n_settings = 1;
  bb.n_outcomes = 4;
  bb.effects = {0.5 * qt::proj0(), 0.5 * qt::proj1(), 0.5 * qt::proj_plus(),
                0.5 * qt::proj_minus()};
  const MultipartiteState assoc = associated_state(Process{bb});
  REQUIRE(assoc.dims == std::vector<int>{4, 2});
  CHECK(max_abs_diff(assoc.rho, cq_conjugate_state().rho) < 1e-12);
}

TEST_CASE("associated state of a channel is its Choi state") {
  const ChannelChoi id = ChannelChoi::from_map(
      2, 2, [](const Eigen::MatrixXcd& x) { return x; });
  const MultipartiteState assoc = associated_state(Process{id});
  REQUIRE(assoc.dims == std::vector<int>{2, 2});
  CHECK(max_abs_diff(assoc.rho, id.choi) < 1e-14);
}

TEST_CASE("a measurement read out into a classical wire forms a valid instrument") {
  MultiInstrument mi;
  mi.dims_in = {2};
  mi.dims_out = {2};
  mi.n_settings = 1;
  mi.n_outcomes = 2;
  const HermitianOperator p[2] = {qt::proj0(), qt::proj1()};
  for (int c = 0; c < 2; ++c)
    mi.chois.push_back(HermitianOperator(
        0.5 * kron(p[c].mat(), p[c].mat().transpose().eval())));
  CHECK_NOTHROW(validate(mi));
  const MultipartiteState assoc = associated_state(Process{mi});
  REQUIRE(assoc.dims == std::vector<int>{2, 2, 2});
  CHECK(assoc.rho.trace() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("validation rejects malformed processes") {
  MultiSource bad_weights;
  bad_weights.dim = 2;
  bad_weights.n_settings = 1;
  bad_weights.n_outcomes = 2;
  bad_weights.weights = {0.6, 0.6};
  bad_weights.states = {qt::proj0(), qt::proj1()};
  CHECK_THROWS_AS(validate(bad_weights), ValidationError);

  MultiMeasurement not_povm;
  not_povm.dim = 2;
  not_povm.n_settings = 1;
  not_povm.n_outcomes = 2;
  not_povm.effects = {qt::proj0(), qt::proj0()};
  CHECK_THROWS_AS(validate(not_povm), ValidationError);

  // Not trace preserving: the Choi marginal on the input is not maximally mixed.
  ChannelChoi bad_channel{2, 2, kron(qt::proj0(), qt::proj0())};
  CHECK_THROWS_AS(validate(bad_channel), ValidationError);

  MultiSource declared_assemblage = steer(BipartiteState{2, 2, qt::ket_proj(bell_ket())},
                                          zx_measurement(), 1);
  declared_assemblage.states[0] = qt::proj_plus();  // breaks marginal independence
  CHECK_THROWS_AS(validate(declared_assemblage), ValidationError);
}

TEST_CASE("dimension limits are enforced") {
  const MultipartiteState big{{17},
                              HermitianOperator(Eigen::MatrixXcd::Identity(17, 17) / 17.0)};
  CHECK_THROWS_AS(validate(big), LimitError);

  // Total dimension 256 > 64 even though each subsystem is within range.
  const MultipartiteState wide{
      {16, 16}, HermitianOperator(Eigen::MatrixXcd::Identity(256, 256) / 256.0)};
  CHECK_THROWS_AS(validate(wide), LimitError);
}
