// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "qproc/certify.hpp"

using namespace qproc;
using qt::max_abs_diff;

namespace {

Eigen::VectorXcd bell_ket() {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

/** Two-state single-setting source {|0><0|, |+><+|} with equal weights. */
MultiSource two_state_source() {
  MultiSource s;
  s.dim = 2;
  s.n_settings = 1;
  s.n_outcomes = 2;
  s.weights = {0.5, 0.5};
  s.states = {qt::proj0(), qt::proj_plus()};
  return s;
}

/** Eight states at the cube vertices, Bloch radius eta, equal weights. */
MultiSource cube_source(double eta) {
  MultiSource s;
  s.dim = 2;
  s.n_settings = 1;
  s.n_outcomes = 8;
  const double q = eta / std::sqrt(3.0);
  for (const int sx : {1, -1})
    for (const int sy : {1, -1})
      for (const int sz : {1, -1}) {
        s.weights.push_back(0.125);
        s.states.push_back(qt::bloch(sx * q, sy * q, sz * q));
      }
  return s;
}

/** Antipodal pairs along the three Bloch axes: +x, -x, +y, -y, +z, -z. */
std::vector<HermitianOperator> octahedron_states() {
  return {qt::bloch(1, 0, 0),  qt::bloch(-1, 0, 0), qt::bloch(0, 1, 0),
          qt::bloch(0, -1, 0), qt::bloch(0, 0, 1),  qt::bloch(0, 0, -1)};
}

/** Three equiangular xz-plane directions, both outcomes, radius eta. */
MultiSource trine_assemblage(double eta) {
  MultiSource s;
  s.dim = 2;
  s.n_settings = 3;
  s.n_outcomes = 2;
  s.assemblage = true;
  for (int x = 0; x < 3; ++x) {
    const double th = 2.0 * M_PI * x / 3.0;
    const double nx = std::sin(th), nz = std::cos(th);
    s.weights.insert(s.weights.end(), {0.5, 0.5});
    s.states.push_back(qt::bloch(eta * nx, 0, eta * nz));
    s.states.push_back(qt::bloch(-eta * nx, 0, -eta * nz));
  }
  return s;
}

/** Six pure states at xz-plane angles j*pi/3. */
std::vector<HermitianOperator> hexagon_states() {
  std::vector<HermitianOperator> f;
  for (int j = 0; j < 6; ++j) {
    const double th = M_PI * j / 3.0;
    f.push_back(qt::bloch(std::sin(th), 0, std::cos(th)));
  }
  return f;
}

std::vector<HermitianOperator> tetrahedron_states() {
  const double s = 1.0 / std::sqrt(3.0);
  return {qt::bloch(s, s, s), qt::bloch(s, -s, -s), qt::bloch(-s, s, -s), qt::bloch(-s, -s, s)};
}

std::vector<HermitianOperator> sic_effects() {
  std::vector<HermitianOperator> e;
  for (const auto& p : tetrahedron_states()) e.push_back(0.5 * p);
  return e;
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

/** Two smoothed binary measurements along z and x, Bloch radius eta. */
MultiMeasurement smoothed_pair(double eta) {
  MultiMeasurement mm;
  mm.dim = 2;
  mm.n_settings = 2;
  mm.n_outcomes = 2;
  mm.effects = {qt::bloch(0, 0, eta), qt::bloch(0, 0, -eta), qt::bloch(eta, 0, 0),
                qt::bloch(-eta, 0, 0)};
  return mm;
}

HermitianOperator half_identity() { return 0.5 * HermitianOperator::identity(2); }

/** Fully depolarizing qubit channel: Choi state 1/4 on the 2x2 system. */
ChannelChoi depolarizing_channel() {
  return {2, 2, HermitianOperator(Eigen::MatrixXcd::Identity(4, 4) / 4.0)};
}

ChannelCertificate depolarizing_certificate() {
  ChannelCertificate cert;
  cert.input.frame = {half_identity()};
  cert.input.dual = {HermitianOperator::identity(2)};
  cert.output.frame = {half_identity()};
  cert.output.dual = {HermitianOperator::identity(2)};
  return cert;
}

ChannelChoi measure_prepare_sic() {
  return ChannelChoi::measure_prepare(sic_effects(), tetrahedron_states());
}

ChannelCertificate measure_prepare_certificate() {
  ChannelCertificate cert;
  cert.input.frame = dual_basis(sic_effects());
  cert.input.dual = sic_effects();
  cert.output.frame = tetrahedron_states();
  cert.output.dual = dual_basis(tetrahedron_states());
  return cert;
}

/** k random PSD operators rescaled so they sum to the identity. */
std::vector<HermitianOperator> random_povm(int dim, int k, std::mt19937& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::MatrixXcd> raw;
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < k; ++i) {
    Eigen::MatrixXcd g(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) g(r, c) = qt::cd(gauss(rng), gauss(rng));
    raw.emplace_back(g * g.adjoint());
    total += raw.back();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(total);
  const Eigen::MatrixXcd isq = es.operatorInverseSqrt();
  std::vector<HermitianOperator> out;
  for (const auto& m : raw) out.emplace_back(Eigen::MatrixXcd(isq * m * isq));
  return out;
}

/** Shifts a random Hermitian operator onto the unit-trace hyperplane. */
HermitianOperator unit_trace(const HermitianOperator& h) {
  const double shift = (h.trace() - 1.0) / h.dim();
  return HermitianOperator(
      Eigen::MatrixXcd(h.mat() - shift * Eigen::MatrixXcd::Identity(h.dim(), h.dim())));
}

/** Copy of the operator with its (0,0) entry displaced by `amount`. */
HermitianOperator bump_corner(const HermitianOperator& h, double amount) {
  Eigen::MatrixXcd m = h.mat();
  m(0, 0) += amount;
  return HermitianOperator(m);
}

}  // namespace

TEST_CASE("two-state source certificate with closed-form duals") {
  const MultiSource s = two_state_source();
  SourceCertificate cert;
  cert.frame = s.states;
  cert.dual = dual_basis(s.states);

  // Gram inverse of {|0><0|, |+><+|} gives (4/3, -2/3) coefficient rows.
  const HermitianOperator expected = (4.0 / 3.0) * qt::proj0() - (2.0 / 3.0) * qt::proj_plus();
  CHECK(max_abs_diff(cert.dual[0], expected) < 1e-12);

  const VerifyReport rep = verify_source_certificate(s, cert);
  CHECK(rep.pass);
  CHECK(rep.worst_ratio() < 1e-2);
  for (const auto& c : rep.checks) CHECK(c.residual < 1e-9);
  CHECK(rep.find("assemblage-marginal") == nullptr);

  SUBCASE("scaled duals break the dual sum") {
    SourceCertificate bad = cert;
    for (auto& d : bad.dual) d = 1.1 * d;
    const VerifyReport rbad = verify_source_certificate(s, bad);
    CHECK_FALSE(rbad.pass);
    REQUIRE(rbad.find("dual-sum") != nullptr);
    CHECK_FALSE(rbad.find("dual-sum")->pass);
  }

  SUBCASE("zero-weight frame elements are harmless") {
    SourceCertificate padded = cert;
    padded.frame.push_back(qt::bloch(0, 0.7, 0));
    padded.dual.push_back(HermitianOperator::zero(2));
    CHECK(verify_source_certificate(s, padded).pass);
  }
}

TEST_CASE("cube source at the octahedron threshold") {
  const std::vector<HermitianOperator> frame = octahedron_states();
  const std::vector<HermitianOperator> dual = canonical_dual_frame(frame);

  // Canonical duals of the six axis states are 1/6 +- sigma_i/2.
  const HermitianOperator expected =
      HermitianOperator(Eigen::Matrix2cd(Eigen::Matrix2cd::Identity() / 6.0 + 0.5 * qt::pauli_x()));
  CHECK(max_abs_diff(dual[0], expected) < 1e-12);

  SourceCertificate cert{frame, dual};

  SUBCASE("at radius 1/sqrt(3) all weights are 0 or 1/3") {
    const MultiSource s = cube_source(1.0 / std::sqrt(3.0));
    const VerifyReport rep = verify_source_certificate(s, cert);
    CHECK(rep.pass);
    for (const auto& rho : s.states)
      for (const auto& h : dual) {
        const double w = hs_inner(h, rho);
        CHECK(std::min(std::abs(w), std::abs(w - 1.0 / 3.0)) < 1e-12);
      }
  }

  SUBCASE("outside the octahedron a weight goes negative") {
    const MultiSource s = cube_source(0.6);
    const VerifyReport rep = verify_source_certificate(s, cert);
    CHECK_FALSE(rep.pass);
    REQUIRE(rep.find("weights") != nullptr);
    CHECK_FALSE(rep.find("weights")->pass);
    CHECK(rep.find("weights")->residual ==
          doctest::Approx(0.6 / (2.0 * std::sqrt(3.0)) - 1.0 / 6.0).epsilon(1e-6));
    CHECK(rep.find("reconstruction")->pass);
    CHECK(rep.find("dual-sum")->pass);
  }

  SUBCASE("interior weights tolerate small dual perturbations only at loose tolerance") {
    const MultiSource s = cube_source(0.4);
    REQUIRE(verify_source_certificate(s, cert).pass);
    SourceCertificate bumped = cert;
    bumped.dual[0] = bump_corner(bumped.dual[0], 10.0 * tol::certificate);
    CHECK_FALSE(verify_source_certificate(s, bumped).pass);
    CHECK(verify_source_certificate(s, bumped, 1e-4).pass);
  }
}

TEST_CASE("linearly independent state family certifies itself") {
  MultiSource s;
  s.dim = 2;
  s.n_settings = 1;
  s.n_outcomes = 4;
  s.weights.assign(4, 0.25);
  s.states = tetrahedron_states();

  SourceCertificate cert{s.states, dual_basis(s.states)};
  const VerifyReport rep = verify_source_certificate(s, cert);
  CHECK(rep.pass);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l)
      CHECK(std::abs(hs_inner(cert.dual[l], s.states[k]) - (k == l ? 1.0 : 0.0)) < 1e-10);
}

TEST_CASE("trine assemblage with the hexagon frame survives flag convexification") {
  const std::vector<HermitianOperator> frame = hexagon_states();
  const std::vector<HermitianOperator> dual = canonical_dual_frame(frame);

  // Planar hexagon duals are 1/6 + m.sigma/3; the first direction is +z.
  const HermitianOperator expected =
      HermitianOperator(Eigen::Matrix2cd(Eigen::Matrix2cd::Identity() / 6.0 + qt::pauli_z() / 3.0));
  CHECK(max_abs_diff(dual[0], expected) < 1e-12);

  const MultiSource s = trine_assemblage(0.5);
  const SourceCertificate cert{frame, dual};
  const VerifyReport rep = verify_source_certificate(s, cert);
  CHECK(rep.pass);
  REQUIRE(rep.find("assemblage-marginal") != nullptr);
  CHECK(rep.find("assemblage-marginal")->pass);

  const MultiSource conv = flag_convexify(s);
  const SourceCertificate moved = transport_flag(cert);
  const VerifyReport rconv = verify_source_certificate(conv, moved);
  CHECK(rconv.pass);
  CHECK(rconv.find("assemblage-marginal") == nullptr);
}

TEST_CASE("assemblage marginal check catches setting-dependent hidden weights") {
  MultiSource s;
  s.dim = 2;
  s.n_settings = 2;
  s.n_outcomes = 2;
  s.assemblage = true;
  s.weights = {0.5, 0.5, 0.5, 0.5};
  s.states = {qt::proj0(), qt::proj1(), qt::bloch(0, 0, 0.6), qt::bloch(0, 0, 0.6)};

  const SourceCertificate cert{{qt::proj0(), qt::proj1()}, {qt::proj0(), qt::proj1()}};
  const VerifyReport rep = verify_source_certificate(s, cert);
  CHECK_FALSE(rep.pass);
  CHECK(rep.find("reconstruction")->pass);
  CHECK(rep.find("weights")->pass);
  REQUIRE(rep.find("assemblage-marginal") != nullptr);
  CHECK_FALSE(rep.find("assemblage-marginal")->pass);
  // Setting 1 reaches |0> with probability 1/2, setting 2 with 0.8.
  CHECK(rep.find("assemblage-marginal")->residual == doctest::Approx(0.3).epsilon(1e-9));
}

TEST_CASE("projective measurement certificate") {
  MultiMeasurement mm;
  mm.dim = 2;
  mm.n_settings = 1;
  mm.n_outcomes = 2;
  mm.effects = {qt::proj0(), qt::proj1()};

  MeasurementCertificate cert{{qt::proj0(), qt::proj1()}, {qt::proj0(), qt::proj1()}};
  const VerifyReport rep = verify_measurement_certificate(mm, cert);
  CHECK(rep.pass);
  CHECK(rep.worst_ratio() < 1e-3);

  SUBCASE("a displaced dual trace is caught") {
    MeasurementCertificate bad = cert;
    bad.dual[0] = bump_corner(bad.dual[0], 1e-6);
    const VerifyReport rbad = verify_measurement_certificate(mm, bad);
    CHECK_FALSE(rbad.pass);
    CHECK_FALSE(rbad.find("dual-traces")->pass);
  }
}

TEST_CASE("smoothed measurement pair certifies through its square parent") {
  const double eta = 0.6;
  const MultiMeasurement mm = smoothed_pair(eta);

  MeasurementCertificate cert;
  for (const int sz : {1, -1})
    for (const int sx : {1, -1}) {
      cert.parent.push_back(0.5 * qt::bloch(eta * sx, 0, eta * sz));
      cert.dual.push_back(qt::bloch(sx / eta, 0, sz / eta));
    }

  const VerifyReport rep = verify_measurement_certificate(mm, cert);
  CHECK(rep.pass);
  // Deterministic post-processing: every recomputed weight is 0 or 1.
  for (const auto& effect : mm.effects)
    for (const auto& d : cert.dual) {
      const double w = hs_inner(effect, d);
      CHECK(std::min(std::abs(w), std::abs(w - 1.0)) < 1e-12);
    }

  const MultiMeasurement conv = flag_convexify(mm);
  REQUIRE(conv.n_settings == 1);
  REQUIRE(conv.n_outcomes == 4);
  CHECK(verify_measurement_certificate(conv, transport_flag(cert)).pass);
}

TEST_CASE("pentagon measurement rejects random certificates") {
  const MultiMeasurement mm = pentagon(1.0);
  std::mt19937 rng(414243);
  bool all_rejected = true;
  for (int it = 0; it < 100; ++it) {
    MeasurementCertificate cert;
    cert.parent = random_povm(2, 4, rng);
    for (int l = 0; l < 4; ++l) cert.dual.push_back(unit_trace(qt::random_herm(2, rng)));
    all_rejected = all_rejected && !verify_measurement_certificate(mm, cert).pass;
  }
  CHECK(all_rejected);
}

TEST_CASE("product state certificate from its own marginals") {
  const HermitianOperator a = qt::bloch(0, 0, 0.3);
  const HermitianOperator b = qt::bloch(0.5, 0, 0);
  const BipartiteState rho{2, 2, kron(a, b)};

  BipartiteCertificate cert;
  cert.sides = {SideFrames{{a}, {(1.0 / hs_inner(a, a)) * a}},
                SideFrames{{b}, {(1.0 / hs_inner(b, b)) * b}}};
  const VerifyReport rep = verify_bipartite_certificate(rho, cert);
  CHECK(rep.pass);
  CHECK(rep.worst_ratio() < 1e-3);

  CHECK(steered_span(MultipartiteState{{2, 2}, rho.rho}, 1).rank() == 1);
  CHECK(steered_span(MultipartiteState{{2, 2}, rho.rho}, 2).rank() == 1);
}

TEST_CASE("separable mixture certificate and its perturbation") {
  const BipartiteState rho{
      2, 2,
      0.6 * kron(qt::proj0(), qt::proj_plus()) + 0.4 * kron(qt::proj1(), qt::proj_minus())};

  BipartiteCertificate cert;
  cert.sides = {SideFrames{{qt::proj0(), qt::proj1()}, {qt::proj0(), qt::proj1()}},
                SideFrames{{qt::proj_plus(), qt::proj_minus()}, {qt::proj_plus(), qt::proj_minus()}}};
  const VerifyReport rep = verify_bipartite_certificate(rho, cert);
  CHECK(rep.pass);
  for (int side = 1; side <= 2; ++side) {
    const std::string tag = "side" + std::to_string(side);
    CHECK(rep.find(tag + "-frame-states") != nullptr);
    CHECK(rep.find(tag + "-dual-sum") != nullptr);
    CHECK(rep.find(tag + "-frame-property") != nullptr);
  }

  BipartiteCertificate bad = cert;
  bad.sides[1].dual[0] = bump_corner(bad.sides[1].dual[0], 10.0 * tol::certificate);
  const VerifyReport rbad = verify_bipartite_certificate(rho, bad);
  CHECK_FALSE(rbad.pass);
  CHECK_FALSE(rbad.find("side2-dual-sum")->pass);
}

TEST_CASE("Bell state admits no frame certificate") {
  const BipartiteState bell{2, 2, qt::ket_proj(bell_ket())};
  std::mt19937 rng(20260823);
  int rejected = 0, weight_failures = 0;
  const int trials = 1000;
  for (int it = 0; it < trials; ++it) {
    BipartiteCertificate cert;
    for (int side = 0; side < 2; ++side) {
      std::vector<HermitianOperator> frame;
      for (int k = 0; k < 4; ++k) frame.push_back(qt::random_state(2, rng));
      cert.sides.push_back(SideFrames{frame, dual_basis(frame)});
    }
    const VerifyReport rep = verify_bipartite_certificate(bell, cert);
    if (!rep.pass) ++rejected;
    if (!rep.find("weights")->pass) ++weight_failures;
  }
  CHECK(rejected == trials);
  // Biorthogonal spanning frames satisfy every structural check exactly, so
  // entanglement must surface as a negative weight every single time.
  CHECK(weight_failures == trials);
}

TEST_CASE("fully depolarizing channel certificate") {
  const ChannelChoi e = depolarizing_channel();
  const ChannelCertificate cert = depolarizing_certificate();
  const VerifyReport rep = verify_channel_certificate(e, cert);
  CHECK(rep.pass);
  CHECK(rep.worst_ratio() < 1e-3);
  for (const char* name : {"input-frame-traces", "input-dual-psd", "input-dual-sum",
                           "input-frame-property", "output-frame-states", "output-dual-sum",
                           "output-frame-property", "weights", "reconstruction"})
    CHECK(rep.find(name) != nullptr);

  ChannelCertificate bad = cert;
  bad.output.dual[0] = bump_corner(bad.output.dual[0], 1e-6);
  const VerifyReport rbad = verify_channel_certificate(e, bad);
  CHECK_FALSE(rbad.pass);
  CHECK_FALSE(rbad.find("output-dual-sum")->pass);
}

TEST_CASE("measure-and-prepare channel delta-certificate") {
  const ChannelChoi e = measure_prepare_sic();
  const ChannelCertificate cert = measure_prepare_certificate();
  const VerifyReport rep = verify_channel_certificate(e, cert);
  CHECK(rep.pass);
  for (int k = 0; k < 4; ++k)
    for (int l = 0; l < 4; ++l) {
      const double w = hs_inner(cert.output.dual[l], e.apply(cert.input.frame[k]));
      CHECK(w == doctest::Approx(k == l ? 1.0 : 0.0).epsilon(1e-9).scale(1));
    }
}

TEST_CASE("identity channel rejects biorthogonal certificates on its weights") {
  const ChannelChoi e{2, 2, qt::ket_proj(bell_ket())};
  CHECK(max_abs_diff(e.apply(qt::proj_plus()), qt::proj_plus()) < 1e-12);

  std::mt19937 rng(515253);
  int rejected = 0, weight_failures = 0;
  const int trials = 200;
  for (int it = 0; it < trials; ++it) {
    ChannelCertificate cert;
    cert.input.dual = random_povm(2, 4, rng);
    cert.input.frame = dual_basis(cert.input.dual);
    for (int k = 0; k < 4; ++k) cert.output.frame.push_back(qt::random_state(2, rng));
    cert.output.dual = dual_basis(cert.output.frame);
    const VerifyReport rep = verify_channel_certificate(e, cert);
    if (!rep.pass) ++rejected;
    if (!rep.find("weights")->pass) ++weight_failures;
  }
  CHECK(rejected == trials);
  CHECK(weight_failures == trials);
}

TEST_CASE("general certificate for a product of depolarizers with a comb marginal") {
  MultiInstrument mi;
  mi.dims_in = {2, 2};
  mi.dims_out = {2, 2};
  mi.chois = {HermitianOperator(Eigen::MatrixXcd::Identity(16, 16) / 16.0)};
  mi.two_comb = true;

  GeneralCertificate cert;
  cert.inputs.push_back(SideFrames{{half_identity()}, {HermitianOperator::identity(2)}});
  cert.inputs.push_back(SideFrames{{qt::bloch(0, 0, 0.5), qt::bloch(0, 0, -0.5)},
                                   {qt::bloch(0, 0, 0.5), qt::bloch(0, 0, -0.5)}});
  cert.outputs.push_back(SideFrames{{half_identity()}, {HermitianOperator::identity(2)}});
  cert.outputs.push_back(SideFrames{{half_identity()}, {HermitianOperator::identity(2)}});

  const VerifyReport rep = verify_general_certificate(mi, cert);
  CHECK(rep.pass);
  REQUIRE(rep.find("comb-marginal") != nullptr);
  CHECK(rep.find("comb-marginal")->pass);
  for (const char* name : {"in1-frame-traces", "in2-dual-sum", "in2-frame-property",
                           "out1-frame-states", "out2-dual-sum", "weights", "reconstruction"})
    CHECK(rep.find(name) != nullptr);

  SUBCASE("scaled output duals are caught on the right wire") {
    GeneralCertificate bad = cert;
    bad.outputs[1].dual[0] = 1.05 * bad.outputs[1].dual[0];
    const VerifyReport rbad = verify_general_certificate(mi, bad);
    CHECK_FALSE(rbad.pass);
    CHECK_FALSE(rbad.find("out2-dual-sum")->pass);
    CHECK(rbad.find("out1-dual-sum")->pass);
  }

  SUBCASE("without the comb declaration the marginal check is absent") {
    MultiInstrument plain = mi;
    plain.two_comb = false;
    const VerifyReport rplain = verify_general_certificate(plain, cert);
    CHECK(rplain.pass);
    CHECK(rplain.find("comb-marginal") == nullptr);
  }
}

TEST_CASE("dispatcher matches process and certificate kinds") {
  CHECK(std::string(certificate_kind(FrameCertificate{SourceCertificate{}})) == "source");
  CHECK(std::string(certificate_kind(FrameCertificate{MeasurementCertificate{}})) == "measurement");
  CHECK(std::string(certificate_kind(FrameCertificate{BipartiteCertificate{}})) == "bipartite");
  CHECK(std::string(certificate_kind(FrameCertificate{ChannelCertificate{}})) == "channel");
  CHECK(std::string(certificate_kind(FrameCertificate{GeneralCertificate{}})) == "general");

  const MultiSource s = two_state_source();
  const SourceCertificate good{s.states, dual_basis(s.states)};
  CHECK(verify_certificate(Process{s}, FrameCertificate{good}).pass);

  const VerifyReport mismatch =
      verify_certificate(Process{s}, FrameCertificate{MeasurementCertificate{}});
  CHECK_FALSE(mismatch.pass);
  REQUIRE(mismatch.find("kind-match") != nullptr);
  CHECK_FALSE(mismatch.find("kind-match")->pass);
}

TEST_CASE("Choi transport carries channel certificates to the associated state") {
  SUBCASE("depolarizing") {
    const ChannelChoi e = depolarizing_channel();
    const BipartiteCertificate bip = transport_choi(depolarizing_certificate(), e);
    REQUIRE(bip.sides.size() == 2);
    CHECK(max_abs_diff(bip.sides[1].frame[0], half_identity()) < 1e-12);
    CHECK(max_abs_diff(bip.sides[1].dual[0], HermitianOperator::identity(2)) < 1e-12);
    CHECK(verify_bipartite_certificate(BipartiteState{2, 2, e.choi}, bip).pass);
  }

  SUBCASE("measure-and-prepare round trip") {
    const ChannelChoi e = measure_prepare_sic();
    const ChannelCertificate cert = measure_prepare_certificate();
    const BipartiteCertificate bip = transport_choi(cert, e);
    CHECK(verify_bipartite_certificate(BipartiteState{2, 2, e.choi}, bip).pass);

    const ChannelCertificate back = transport_choi_inverse(bip, e);
    REQUIRE(back.input.frame.size() == cert.input.frame.size());
    for (std::size_t l = 0; l < cert.input.frame.size(); ++l) {
      CHECK(max_abs_diff(back.input.frame[l], cert.input.frame[l]) < 1e-12);
      CHECK(max_abs_diff(back.input.dual[l], cert.input.dual[l]) < 1e-12);
    }
    CHECK(verify_channel_certificate(e, back).pass);
  }

  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(transport_choi(depolarizing_certificate(),
                                   ChannelChoi{3, 3, HermitianOperator(
                                                         Eigen::MatrixXcd::Identity(9, 9) / 9.0)}),
                    DimensionError);
  }
}

TEST_CASE("dephasing transport carries source certificates to flag states") {
  SUBCASE("two-state source") {
    const MultiSource s = two_state_source();
    const SourceCertificate cert{s.states, dual_basis(s.states)};
    const BipartiteCertificate bip = transport_dephase(cert, s);
    REQUIRE(bip.sides.size() == 2);
    CHECK(bip.sides[0].frame.size() == 2);
    CHECK(verify_bipartite_certificate(dephase_embed(s), bip).pass);
  }

  SUBCASE("cube source with the octahedron frame") {
    const MultiSource s = cube_source(1.0 / std::sqrt(3.0));
    const SourceCertificate cert{octahedron_states(), canonical_dual_frame(octahedron_states())};
    REQUIRE(verify_source_certificate(s, cert).pass);

    const BipartiteState embedded = dephase_embed(s);
    REQUIRE(embedded.d1 == 8);
    // The flag side only spans what the eight states can distinguish.
    CHECK(steered_span(MultipartiteState{{8, 2}, embedded.rho}, 1).rank() == 4);

    const BipartiteCertificate bip = transport_dephase(cert, s);
    CHECK(bip.sides[0].frame.size() == 8);
    CHECK(verify_bipartite_certificate(embedded, bip).pass);
  }

  SUBCASE("multi-setting sources must be convexified first") {
    const MultiSource s = trine_assemblage(0.5);
    const SourceCertificate cert{hexagon_states(), canonical_dual_frame(hexagon_states())};
    CHECK_THROWS_AS(transport_dephase(cert, s), ValidationError);
    CHECK(verify_bipartite_certificate(dephase_embed(flag_convexify(s)),
                                       transport_dephase(cert, flag_convexify(s)))
              .pass);
  }
}

TEST_CASE("steered span dimensions and bounds") {
  const MultipartiteState bell{{2, 2}, qt::ket_proj(bell_ket())};
  CHECK(steered_span(bell, 1).rank() == 4);
  CHECK(steered_span(bell, 2).rank() == 4);
  CHECK_THROWS_AS(steered_span(bell, 0), DimensionError);
  CHECK_THROWS_AS(steered_span(bell, 3), DimensionError);
}
