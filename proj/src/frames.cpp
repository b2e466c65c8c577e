// SPDX-License-Identifier: MIT
#include "qproc/frames.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace qproc {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr double kPi = std::numbers::pi;

/** State with the given Bloch vector (PSD iff |r| <= 1). */
HermitianOperator bloch_state(double x, double y, double z) {
  MatrixXcd m(2, 2);
  m(0, 0) = 0.5 * (1.0 + z);
  m(1, 1) = 0.5 * (1.0 - z);
  m(0, 1) = 0.5 * cdouble(x, -y);
  m(1, 0) = 0.5 * cdouble(x, y);
  return HermitianOperator(m);
}

HermitianOperator ket_proj(const VectorXcd& k) {
  return HermitianOperator(k * k.adjoint());
}

VectorXcd basis_ket(int dim, int i) {
  VectorXcd k = VectorXcd::Zero(dim);
  k(i) = 1.0;
  return k;
}

VectorXcd plus_ket() {
  VectorXcd k(2);
  k << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return k;
}

VectorXcd minus_ket() {
  VectorXcd k(2);
  k << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
  return k;
}

VectorXcd kron_ket(const VectorXcd& a, const VectorXcd& b) {
  VectorXcd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

std::vector<HermitianOperator> basis_projectors(const MatrixXcd& columns) {
  std::vector<HermitianOperator> out;
  for (Eigen::Index c = 0; c < columns.cols(); ++c)
    out.push_back(ket_proj(columns.col(c)));
  return out;
}

MatrixXcd fourier_matrix(int dim) {
  MatrixXcd f(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int k = 0; k < dim; ++k)
      f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(dim)), 2.0 * kPi * j * k / dim);
  return f;
}

bool is_odd_prime(int n) {
  if (n < 3 || n % 2 == 0) return false;
  for (int d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

/** Uniform single-setting multi-measurement from a list of effects. */
MultiMeasurement single_setting(const std::vector<HermitianOperator>& effects) {
  MultiMeasurement mm;
  mm.dim = effects.empty() ? 0 : effects.front().dim();
  mm.n_settings = 1;
  mm.n_outcomes = static_cast<int>(effects.size());
  mm.effects = effects;
  return mm;
}

/** Two-setting multi-measurement from two equally sized effect lists. */
MultiMeasurement two_settings(std::vector<HermitianOperator> first,
                              std::vector<HermitianOperator> second) {
  MultiMeasurement mm;
  mm.dim = first.front().dim();
  mm.n_settings = 2;
  mm.n_outcomes = static_cast<int>(first.size());
  mm.effects = std::move(first);
  for (auto& e : second) mm.effects.push_back(std::move(e));
  return mm;
}

std::vector<HermitianOperator> pauli_z_effects() {
  return {bloch_state(0, 0, 1.0), bloch_state(0, 0, -1.0)};
}

std::vector<HermitianOperator> pauli_x_effects() {
  return {bloch_state(1.0, 0, 0), bloch_state(-1.0, 0, 0)};
}

std::vector<HermitianOperator> pauli_y_effects() {
  return {bloch_state(0, 1.0, 0), bloch_state(0, -1.0, 0)};
}

void require_dim(const std::string& id, int dim, int wanted) {
  if (dim != wanted)
    throw FrameError("frame \"" + id + "\" exists only in dimension " + std::to_string(wanted) +
                     ", not " + std::to_string(dim));
}

}  // namespace

namespace frames {

std::vector<HermitianOperator> octahedron_states() {
  return {bloch_state(1, 0, 0),  bloch_state(-1, 0, 0), bloch_state(0, 1, 0),
          bloch_state(0, -1, 0), bloch_state(0, 0, 1),  bloch_state(0, 0, -1)};
}

std::vector<HermitianOperator> tetrahedron_states() {
  const double s = 1.0 / std::sqrt(3.0);
  return {bloch_state(s, s, s), bloch_state(s, -s, -s), bloch_state(-s, s, -s),
          bloch_state(-s, -s, s)};
}

std::vector<HermitianOperator> icosahedron_states() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double n = std::sqrt(1.0 + phi * phi);
  std::vector<HermitianOperator> out;
  for (double a : {1.0, -1.0})
    for (double b : {phi, -phi}) {
      out.push_back(bloch_state(0, a / n, b / n));
      out.push_back(bloch_state(a / n, b / n, 0));
      out.push_back(bloch_state(b / n, 0, a / n));
    }
  return out;
}

std::vector<HermitianOperator> mub_states(int dim) {
  if (dim < 2) throw FrameError("mub_states needs dim >= 2");
  std::vector<HermitianOperator> out;
  for (auto& p : basis_projectors(MatrixXcd::Identity(dim, dim))) out.push_back(p);
  for (auto& p : basis_projectors(fourier_matrix(dim))) out.push_back(p);
  if (dim == 2) {
    out.push_back(bloch_state(0, 1, 0));
    out.push_back(bloch_state(0, -1, 0));
  } else if (is_odd_prime(dim)) {
    // The d - 1 further bases |m;k> with amplitudes w^{k j^2 + m j}/sqrt(d).
    for (int k = 1; k < dim; ++k) {
      MatrixXcd cols(dim, dim);
      for (int m = 0; m < dim; ++m)
        for (int j = 0; j < dim; ++j)
          cols(j, m) = std::polar(1.0 / std::sqrt(static_cast<double>(dim)),
                                  2.0 * kPi * ((k * j * j + m * j) % dim) / dim);
      for (auto& p : basis_projectors(cols)) out.push_back(p);
    }
  }
  return out;
}

std::vector<HermitianOperator> state_net(int dim, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<HermitianOperator> out;
  for (int s = 0; s < count; ++s) {
    VectorXcd k(dim);
    for (int i = 0; i < dim; ++i) k(i) = cdouble(gauss(rng), gauss(rng));
    k.normalize();
    out.push_back(ket_proj(k));
  }
  return out;
}

std::vector<HermitianOperator> state_frame(const std::string& id, int dim, std::uint64_t seed) {
  if (id == "octahedron") {
    require_dim(id, dim, 2);
    return octahedron_states();
  }
  if (id == "tetrahedron") {
    require_dim(id, dim, 2);
    return tetrahedron_states();
  }
  if (id == "icosahedron") {
    require_dim(id, dim, 2);
    return icosahedron_states();
  }
  if (id == "mub") return mub_states(dim);
  if (id.rfind("net@", 0) == 0) {
    const int count = std::stoi(id.substr(4));
    if (count < 1 || count > 4096) throw FrameError("net size out of range in \"" + id + "\"");
    return state_net(dim, count, seed);
  }
  throw FrameError("unknown state frame \"" + id + "\"");
}

std::vector<std::string> default_state_frames(int dim) {
  if (dim == 2) return {"octahedron", "tetrahedron", "icosahedron"};
  return {"mub", "net@" + std::to_string(4 * dim * dim)};
}

std::vector<HermitianOperator> parent_povm(const std::string& id, int dim) {
  if (id == "pm-xz") {
    require_dim(id, dim, 2);
    const double eta = 1.0 / std::sqrt(2.0);
    std::vector<HermitianOperator> out;
    for (double sz : {1.0, -1.0})
      for (double sx : {1.0, -1.0})
        out.push_back(0.5 * bloch_state(eta * sx, 0, eta * sz));
    return out;
  }
  if (id == "sic") {
    require_dim(id, dim, 2);
    std::vector<HermitianOperator> out;
    for (const auto& s : tetrahedron_states()) out.push_back(0.5 * s);
    return out;
  }
  if (id == "octahedron") {
    require_dim(id, dim, 2);
    std::vector<HermitianOperator> out;
    for (const auto& s : octahedron_states()) out.push_back((1.0 / 3.0) * s);
    return out;
  }
  if (id == "z") {
    require_dim(id, dim, 2);
    return pauli_z_effects();
  }
  if (id == "x") {
    require_dim(id, dim, 2);
    return pauli_x_effects();
  }
  if (id == "computational") {
    std::vector<HermitianOperator> out;
    for (int i = 0; i < dim; ++i) out.push_back(ket_proj(basis_ket(dim, i)));
    return out;
  }
  if (id == "fourier") return basis_projectors(fourier_matrix(dim));
  throw FrameError("unknown parent POVM \"" + id + "\"");
}

std::vector<std::string> default_parent_povms(int dim) {
  if (dim == 2) return {"z", "x", "pm-xz", "sic", "octahedron"};
  return {"computational", "fourier"};
}

MultiMeasurement probe_measurement(const std::string& id, int dim) {
  if (id == "bb84") {
    require_dim(id, dim, 2);
    return two_settings(pauli_z_effects(), pauli_x_effects());
  }
  if (id == "zxy") {
    require_dim(id, dim, 2);
    MultiMeasurement mm = two_settings(pauli_z_effects(), pauli_x_effects());
    mm.n_settings = 3;
    for (auto& e : pauli_y_effects()) mm.effects.push_back(e);
    return mm;
  }
  if (id == "bb84-povm") {
    require_dim(id, dim, 2);
    std::vector<HermitianOperator> effects;
    for (const auto& s : examples::bb84_states()) effects.push_back(0.5 * s);
    return single_setting(effects);
  }
  if (id == "computational") return single_setting(parent_povm("computational", dim));
  if (id == "fourier") return single_setting(parent_povm("fourier", dim));
  if (id == "mub-pair")
    return two_settings(parent_povm("computational", dim), parent_povm("fourier", dim));
  throw FrameError("unknown probe \"" + id + "\"");
}

std::vector<std::string> default_probes(int dim) {
  if (dim == 2) return {"bb84", "zxy", "bb84-povm"};
  if (dim <= limits::max_subsystem_dim) return {"computational", "fourier", "mub-pair"};
  return {};
}

std::vector<CatalogEntry> catalog(int dim) {
  std::vector<CatalogEntry> out;
  for (const auto& id : default_state_frames(dim)) out.push_back({"state-frame", id});
  for (const auto& id : default_parent_povms(dim)) out.push_back({"parent", id});
  for (const auto& id : default_probes(dim)) out.push_back({"probe", id});
  return out;
}

}  // namespace frames

namespace examples {

std::vector<HermitianOperator> bb84_states() {
  return {ket_proj(basis_ket(2, 0)), ket_proj(basis_ket(2, 1)), ket_proj(plus_ket()),
          ket_proj(minus_ket())};
}

std::vector<HermitianOperator> computational_states(int dim) {
  std::vector<HermitianOperator> out;
  for (int i = 0; i < dim; ++i) out.push_back(ket_proj(basis_ket(dim, i)));
  return out;
}

MultiSource bb84_multistate() {
  MultiSource ms;
  ms.dim = 2;
  ms.n_settings = 4;
  ms.n_outcomes = 1;
  ms.weights = {1.0, 1.0, 1.0, 1.0};
  ms.states = bb84_states();
  return ms;
}

MultiSource bb84_source() {
  MultiSource ms;
  ms.dim = 2;
  ms.n_settings = 1;
  ms.n_outcomes = 4;
  ms.weights = {0.25, 0.25, 0.25, 0.25};
  ms.states = bb84_states();
  return ms;
}

MultiSource cube_source(double eta) {
  MultiSource ms;
  ms.dim = 2;
  ms.n_settings = 1;
  ms.n_outcomes = 8;
  const double q = eta / std::sqrt(3.0);
  for (double sx : {1.0, -1.0})
    for (double sy : {1.0, -1.0})
      for (double sz : {1.0, -1.0}) {
        ms.weights.push_back(0.125);
        ms.states.push_back(bloch_state(sx * q, sy * q, sz * q));
      }
  return ms;
}

MultiSource trine_source() {
  MultiSource ms;
  ms.dim = 2;
  ms.n_settings = 1;
  ms.n_outcomes = 3;
  for (int j = 0; j < 3; ++j) {
    const double th = 2.0 * kPi * j / 3.0;
    ms.weights.push_back(1.0 / 3.0);
    ms.states.push_back(bloch_state(std::sin(th), 0, std::cos(th)));
  }
  return ms;
}

MultiSource zx_assemblage() {
  MultiSource ms;
  ms.dim = 2;
  ms.n_settings = 2;
  ms.n_outcomes = 2;
  ms.weights = {0.5, 0.5, 0.5, 0.5};
  ms.states = bb84_states();
  ms.assemblage = true;
  return ms;
}

MultiMeasurement sic_povm() {
  std::vector<HermitianOperator> effects;
  for (const auto& s : frames::tetrahedron_states()) effects.push_back(0.5 * s);
  return single_setting(effects);
}

MultiMeasurement pentagon_measurement(double eta) {
  std::vector<HermitianOperator> effects;
  for (int b = 0; b < 5; ++b) {
    const double th = 2.0 * kPi * b / 5.0;
    effects.push_back(0.4 * bloch_state(eta * std::cos(th), 0, eta * std::sin(th)));
  }
  return single_setting(effects);
}

MultiMeasurement zx_pair() { return two_settings(pauli_z_effects(), pauli_x_effects()); }

MultiMeasurement zz_pair() { return two_settings(pauli_z_effects(), pauli_z_effects()); }

MultiMeasurement smoothed_zx_pair(double eta) {
  return two_settings({bloch_state(0, 0, eta), bloch_state(0, 0, -eta)},
                      {bloch_state(eta, 0, 0), bloch_state(-eta, 0, 0)});
}

BipartiteState bell_state() {
  VectorXcd k = (kron_ket(basis_ket(2, 0), basis_ket(2, 0)) +
                 kron_ket(basis_ket(2, 1), basis_ket(2, 1))) /
                std::sqrt(2.0);
  return {2, 2, ket_proj(k)};
}

BipartiteState werner_state(double w) {
  const HermitianOperator bell = bell_state().rho;
  const MatrixXcd m = w * bell.mat() + (1.0 - w) * 0.25 * MatrixXcd::Identity(4, 4);
  return {2, 2, HermitianOperator(m)};
}

BipartiteState example4_state() {
  MatrixXcd m = MatrixXcd::Zero(8, 8);
  const std::vector<HermitianOperator> tau = bb84_states();
  for (int i = 0; i < 4; ++i)
    m += 0.25 * kron(ket_proj(basis_ket(4, i)), tau[static_cast<std::size_t>(i)]).mat();
  return {4, 2, HermitianOperator(m)};
}

ChannelChoi example5_channel() {
  return ChannelChoi::measure_prepare(computational_states(4), bb84_states());
}

ChannelChoi example6_channel() {
  std::vector<HermitianOperator> effects;
  for (const auto& s : bb84_states()) effects.push_back(0.5 * s);
  return ChannelChoi::measure_prepare(effects, computational_states(4));
}

BipartiteState discord_state() {
  const VectorXcd k00 = kron_ket(basis_ket(2, 0), basis_ket(2, 0));
  const VectorXcd k1p = kron_ket(basis_ket(2, 1), plus_ket());
  const MatrixXcd m = 0.5 * ket_proj(k00).mat() + 0.5 * ket_proj(k1p).mat();
  return {2, 2, HermitianOperator(m)};
}

MultipartiteState tripartite_mixture() {
  const VectorXcd k0 = basis_ket(2, 0), k1 = basis_ket(2, 1);
  const VectorXcd kp = plus_ket(), km = minus_ket();
  std::vector<VectorXcd> kets = {kron_ket(k0, kron_ket(k0, k0)), kron_ket(km, kron_ket(kp, k1)),
                                 kron_ket(k1, kron_ket(km, kp)), kron_ket(kp, kron_ket(k1, km))};
  MatrixXcd m = MatrixXcd::Zero(8, 8);
  for (const auto& k : kets) m += 0.25 * ket_proj(k).mat();
  return {{2, 2, 2}, HermitianOperator(m)};
}

ChannelChoi identity_channel(int dim) {
  return ChannelChoi::from_map(dim, dim, [](const MatrixXcd& x) { return x; });
}

ChannelChoi depolarizing_channel(int dim) {
  const int d2 = dim * dim;
  return {dim, dim, HermitianOperator(MatrixXcd::Identity(d2, d2) / d2)};
}

}  // namespace examples

}  // namespace qproc
