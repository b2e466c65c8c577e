// SPDX-License-Identifier: MIT
#include "qproc/processes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qproc {

namespace {

constexpr double kNormTol = 1e-9;  ///< slack for probability / trace normalization checks

/** Digit strides for a row-major (first factor slowest) tensor index. */
std::vector<int> strides_of(const std::vector<int>& dims) {
  std::vector<int> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k) s[k] = s[k + 1] * dims[k + 1];
  return s;
}

void check_dims_match(const HermitianOperator& h, const std::vector<int>& dims, const char* who) {
  if (h.dim() != dim_product(dims))
    throw DimensionError(std::string(who) + ": operator dimension " + std::to_string(h.dim()) +
                         " does not match factor dimensions (product " +
                         std::to_string(dim_product(dims)) + ")");
  for (int d : dims)
    if (d < 1) throw DimensionError(std::string(who) + ": factor dimensions must be positive");
}

void check_limits(const std::vector<int>& dims, const char* who) {
  for (int d : dims)
    if (d > limits::max_subsystem_dim)
      throw LimitError(std::string(who) + ": subsystem dimension " + std::to_string(d) +
                       " exceeds the supported maximum " +
                       std::to_string(limits::max_subsystem_dim));
  if (dim_product(dims) > limits::max_total_dim)
    throw LimitError(std::string(who) + ": total dimension " + std::to_string(dim_product(dims)) +
                     " exceeds the supported maximum " + std::to_string(limits::max_total_dim));
}

void check_single_system_limit(int dim, const char* who) {
  if (dim > limits::max_total_dim)
    throw LimitError(std::string(who) + ": dimension " + std::to_string(dim) +
                     " exceeds the supported maximum " + std::to_string(limits::max_total_dim));
}

void check_psd(const HermitianOperator& h, const char* who, const std::string& where) {
  if (!h.is_psd(tol::psd_floor))
    throw ValidationError(std::string(who) + ": " + where + " has negative eigenvalue " +
                          std::to_string(h.eig_min()));
}

HermitianOperator maximally_mixed(int dim) {
  return HermitianOperator(Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim));
}

}  // namespace

// --------------------------------------------------------------------------
// Tensor utilities
// --------------------------------------------------------------------------

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.mat(), b.mat()));
}

int dim_product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
}

HermitianOperator partial_trace(const HermitianOperator& h, const std::vector<int>& dims,
                                const std::vector<bool>& keep) {
  check_dims_match(h, dims, "partial_trace");
  if (keep.size() != dims.size())
    throw DimensionError("partial_trace: keep mask length does not match dims");
  const int n = static_cast<int>(dims.size());
  const auto stride = strides_of(dims);

  std::vector<int> kept_dims;
  for (int k = 0; k < n; ++k)
    if (keep[k]) kept_dims.push_back(dims[k]);
  const int dk = dim_product(kept_dims);
  const auto kept_stride = strides_of(kept_dims);

  const int D = h.dim();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  std::vector<int> rd(n), cd(n);
  for (int r = 0; r < D; ++r) {
    for (int k = 0; k < n; ++k) rd[k] = (r / stride[k]) % dims[k];
    for (int c = 0; c < D; ++c) {
      for (int k = 0; k < n; ++k) cd[k] = (c / stride[k]) % dims[k];
      bool diagonal_on_traced = true;
      for (int k = 0; k < n; ++k)
        if (!keep[k] && rd[k] != cd[k]) {
          diagonal_on_traced = false;
          break;
        }
      if (!diagonal_on_traced) continue;
      int rk = 0, ck = 0, q = 0;
      for (int k = 0; k < n; ++k)
        if (keep[k]) {
          rk += rd[k] * kept_stride[q];
          ck += cd[k] * kept_stride[q];
          ++q;
        }
      out(rk, ck) += h.mat()(r, c);
    }
  }
  return HermitianOperator(out);
}

HermitianOperator partial_transpose(const HermitianOperator& h, const std::vector<int>& dims,
                                    const std::vector<bool>& transpose) {
  check_dims_match(h, dims, "partial_transpose");
  if (transpose.size() != dims.size())
    throw DimensionError("partial_transpose: mask length does not match dims");
  const int n = static_cast<int>(dims.size());
  const auto stride = strides_of(dims);
  const int D = h.dim();
  Eigen::MatrixXcd out(D, D);
  std::vector<int> rd(n), cd(n);
  for (int r = 0; r < D; ++r) {
    for (int k = 0; k < n; ++k) rd[k] = (r / stride[k]) % dims[k];
    for (int c = 0; c < D; ++c) {
      for (int k = 0; k < n; ++k) cd[k] = (c / stride[k]) % dims[k];
      int rr = 0, cc = 0;
      for (int k = 0; k < n; ++k) {
        const int ri = transpose[k] ? cd[k] : rd[k];
        const int ci = transpose[k] ? rd[k] : cd[k];
        rr += ri * stride[k];
        cc += ci * stride[k];
      }
      out(rr, cc) = h.mat()(r, c);
    }
  }
  return HermitianOperator(out);
}

// --------------------------------------------------------------------------
// MultiSource / ChannelChoi members
// --------------------------------------------------------------------------

std::vector<HermitianOperator> MultiSource::family() const {
  std::vector<HermitianOperator> fam;
  fam.reserve(states.size());
  for (int i = 0; i < size(); ++i) fam.push_back(weights[i] * states[i]);
  return fam;
}

HermitianOperator MultiSource::average_state(int setting) const {
  HermitianOperator avg = HermitianOperator::zero(dim);
  for (int a = 0; a < n_outcomes; ++a) {
    const int i = index(setting, a);
    avg = avg + weights[i] * states[i];
  }
  return avg;
}

HermitianOperator ChannelChoi::apply(const HermitianOperator& x) const {
  if (x.dim() != d_in)
    throw DimensionError("ChannelChoi::apply: input dimension mismatch");
  const Eigen::MatrixXcd op =
      kron(Eigen::MatrixXcd::Identity(d_out, d_out), x.mat().transpose().eval()) * choi.mat();
  const HermitianOperator prod = partial_trace(HermitianOperator(static_cast<double>(d_in) *
                                                                 0.5 *
                                                                 (op + op.adjoint()).eval()),
                                               {d_out, d_in}, {true, false});
  return prod;
}

HermitianOperator ChannelChoi::adjoint_apply(const HermitianOperator& m) const {
  if (m.dim() != d_out)
    throw DimensionError("ChannelChoi::adjoint_apply: output dimension mismatch");
  const Eigen::MatrixXcd op =
      kron(m.mat(), Eigen::MatrixXcd::Identity(d_in, d_in)) * choi.mat();
  const HermitianOperator traced = partial_trace(HermitianOperator(static_cast<double>(d_in) *
                                                                   0.5 *
                                                                   (op + op.adjoint()).eval()),
                                                 {d_out, d_in}, {false, true});
  return HermitianOperator(traced.mat().transpose().eval());
}

ChannelChoi ChannelChoi::from_map(
    int d_in, int d_out, const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>& map) {
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(d_out * d_in, d_out * d_in);
  for (int i = 0; i < d_in; ++i)
    for (int j = 0; j < d_in; ++j) {
      Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(d_in, d_in);
      unit(i, j) = 1.0;
      Eigen::MatrixXcd image = map(unit);
      if (image.rows() != d_out || image.cols() != d_out)
        throw DimensionError("ChannelChoi::from_map: map image has wrong dimension");
      c += kron(image, unit) / static_cast<double>(d_in);
    }
  return ChannelChoi{d_in, d_out, HermitianOperator(0.5 * (c + c.adjoint()).eval())};
}

ChannelChoi ChannelChoi::measure_prepare(const std::vector<HermitianOperator>& effects,
                                         const std::vector<HermitianOperator>& states) {
  if (effects.empty() || effects.size() != states.size())
    throw DimensionError("ChannelChoi::measure_prepare: effect/state count mismatch");
  const int din = effects.front().dim();
  const int dout = states.front().dim();
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(dout * din, dout * din);
  for (std::size_t k = 0; k < effects.size(); ++k)
    c += kron(states[k].mat(), effects[k].mat().transpose().eval()) / static_cast<double>(din);
  return ChannelChoi{din, dout, HermitianOperator(c)};
}

// --------------------------------------------------------------------------
// Validation
// --------------------------------------------------------------------------

const char* kind_name(const Process& p) {
  struct Visitor {
    const char* operator()(const MultiSource&) const { return "multi_source"; }
    const char* operator()(const MultiMeasurement&) const { return "multi_measurement"; }
    const char* operator()(const BipartiteState&) const { return "bipartite_state"; }
    const char* operator()(const MultipartiteState&) const { return "multipartite_state"; }
    const char* operator()(const ChannelChoi&) const { return "channel"; }
    const char* operator()(const MultiInstrument&) const { return "multi_instrument"; }
  };
  return std::visit(Visitor{}, p);
}

void validate(const MultiSource& p) {
  if (p.dim < 1 || p.n_settings < 1 || p.n_outcomes < 1)
    throw ValidationError("multi_source: dimensions and cardinalities must be positive");
  check_single_system_limit(p.dim, "multi_source");
  if (static_cast<int>(p.weights.size()) != p.size() ||
      static_cast<int>(p.states.size()) != p.size())
    throw ValidationError("multi_source: expected " + std::to_string(p.size()) +
                          " weight/state entries");
  for (int x = 0; x < p.n_settings; ++x) {
    double total = 0.0;
    for (int a = 0; a < p.n_outcomes; ++a) {
      const int i = p.index(x, a);
      if (p.weights[i] < -kNormTol)
        throw ValidationError("multi_source: negative outcome probability at setting " +
                              std::to_string(x));
      total += p.weights[i];
      if (p.states[i].dim() != p.dim)
        throw DimensionError("multi_source: state dimension mismatch at setting " +
                             std::to_string(x));
      check_psd(p.states[i], "multi_source", "state (" + std::to_string(x) + "," +
                                                 std::to_string(a) + ")");
      if (std::abs(p.states[i].trace() - 1.0) > kNormTol)
        throw ValidationError("multi_source: state (" + std::to_string(x) + "," +
                              std::to_string(a) + ") has trace " +
                              std::to_string(p.states[i].trace()) + ", expected 1");
    }
    if (std::abs(total - 1.0) > kNormTol)
      throw ValidationError("multi_source: outcome probabilities at setting " +
                            std::to_string(x) + " sum to " + std::to_string(total));
  }
  if (p.assemblage && p.n_settings > 1) {
    const HermitianOperator ref = p.average_state(0);
    for (int x = 1; x < p.n_settings; ++x)
      if (trace_distance(ref, p.average_state(x)) > 1e-8)
        throw ValidationError(
            "multi_source: declared an assemblage but the outcome-averaged state depends on the "
            "setting");
  }
}

void validate(const MultiMeasurement& p) {
  if (p.dim < 1 || p.n_settings < 1 || p.n_outcomes < 1)
    throw ValidationError("multi_measurement: dimensions and cardinalities must be positive");
  check_single_system_limit(p.dim, "multi_measurement");
  if (static_cast<int>(p.effects.size()) != p.size())
    throw ValidationError("multi_measurement: expected " + std::to_string(p.size()) + " effects");
  for (int y = 0; y < p.n_settings; ++y) {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(p.dim, p.dim);
    for (int b = 0; b < p.n_outcomes; ++b) {
      const HermitianOperator& m = p.effects[p.index(y, b)];
      if (m.dim() != p.dim)
        throw DimensionError("multi_measurement: effect dimension mismatch at setting " +
                             std::to_string(y));
      check_psd(m, "multi_measurement",
                "effect (" + std::to_string(y) + "," + std::to_string(b) + ")");
      sum += m.mat();
    }
    const double dev =
        (sum - Eigen::MatrixXcd::Identity(p.dim, p.dim)).cwiseAbs().maxCoeff();
    if (dev > kNormTol)
      throw ValidationError("multi_measurement: effects at setting " + std::to_string(y) +
                            " sum to identity only up to " + std::to_string(dev));
  }
}

void validate(const BipartiteState& p) {
  if (p.d1 < 1 || p.d2 < 1)
    throw ValidationError("bipartite_state: subsystem dimensions must be positive");
  check_limits(p.dims(), "bipartite_state");
  check_dims_match(p.rho, p.dims(), "bipartite_state");
  check_psd(p.rho, "bipartite_state", "state");
  if (std::abs(p.rho.trace() - 1.0) > kNormTol)
    throw ValidationError("bipartite_state: trace is " + std::to_string(p.rho.trace()) +
                          ", expected 1");
}

void validate(const MultipartiteState& p) {
  if (p.dims.empty()) throw ValidationError("multipartite_state: needs at least one subsystem");
  check_limits(p.dims, "multipartite_state");
  check_dims_match(p.rho, p.dims, "multipartite_state");
  check_psd(p.rho, "multipartite_state", "state");
  if (std::abs(p.rho.trace() - 1.0) > kNormTol)
    throw ValidationError("multipartite_state: trace is " + std::to_string(p.rho.trace()) +
                          ", expected 1");
}

void validate(const ChannelChoi& p) {
  if (p.d_in < 1 || p.d_out < 1)
    throw ValidationError("channel: dimensions must be positive");
  check_limits({p.d_out, p.d_in}, "channel");
  check_dims_match(p.choi, {p.d_out, p.d_in}, "channel");
  check_psd(p.choi, "channel", "Choi state");
  if (std::abs(p.choi.trace() - 1.0) > kNormTol)
    throw ValidationError("channel: Choi trace is " + std::to_string(p.choi.trace()) +
                          ", expected 1");
  const HermitianOperator marginal = partial_trace(p.choi, {p.d_out, p.d_in}, {false, true});
  const double dev = (marginal.mat() -
                      Eigen::MatrixXcd::Identity(p.d_in, p.d_in) / static_cast<double>(p.d_in))
                         .cwiseAbs()
                         .maxCoeff();
  if (dev > kNormTol)
    throw ValidationError("channel: not trace preserving (input marginal deviates by " +
                          std::to_string(dev) + ")");
}

void validate(const MultiInstrument& p) {
  if (p.n_settings < 1 || p.n_outcomes < 1)
    throw ValidationError("multi_instrument: cardinalities must be positive");
  if (p.dims_out.empty())
    throw ValidationError("multi_instrument: needs at least one quantum output wire");
  std::vector<int> all = p.dims_out;
  all.insert(all.end(), p.dims_in.begin(), p.dims_in.end());
  check_limits(all, "multi_instrument");
  if (p.two_comb && (p.dims_in.size() != 2 || p.dims_out.size() != 2))
    throw ValidationError("multi_instrument: a 2-comb needs exactly two input and output wires");
  if (static_cast<int>(p.chois.size()) != p.size())
    throw ValidationError("multi_instrument: expected " + std::to_string(p.size()) +
                          " branch operators");
  const int din = p.dim_in();
  for (int z = 0; z < p.n_settings; ++z) {
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(p.dim_out() * din, p.dim_out() * din);
    for (int c = 0; c < p.n_outcomes; ++c) {
      const HermitianOperator& b = p.chois[p.index(z, c)];
      if (b.dim() != p.dim_out() * din)
        throw DimensionError("multi_instrument: branch dimension mismatch at setting " +
                             std::to_string(z));
      check_psd(b, "multi_instrument",
                "branch (" + std::to_string(z) + "," + std::to_string(c) + ")");
      sum += b.mat();
    }
    const HermitianOperator total(sum);
    if (std::abs(total.trace() - 1.0) > kNormTol)
      throw ValidationError("multi_instrument: branches at setting " + std::to_string(z) +
                            " have total trace " + std::to_string(total.trace()) +
                            ", expected 1");
    if (din > 1) {
      const HermitianOperator marginal =
          partial_trace(total, {p.dim_out(), din}, {false, true});
      const double dev =
          (marginal.mat() - Eigen::MatrixXcd::Identity(din, din) / static_cast<double>(din))
              .cwiseAbs()
              .maxCoeff();
      if (dev > kNormTol)
        throw ValidationError("multi_instrument: setting " + std::to_string(z) +
                              " is not trace preserving (deviation " + std::to_string(dev) + ")");
    }
  }
}

void validate(const Process& p) {
  std::visit([](const auto& q) { validate(q); }, p);
}

// --------------------------------------------------------------------------
// Transforms
// --------------------------------------------------------------------------

MultiSource steer(const BipartiteState& rho, const MultiMeasurement& mm, int measured_side) {
  validate(rho);
  validate(mm);
  if (measured_side != 1 && measured_side != 2)
    throw ValidationError("steer: measured_side must be 1 or 2");
  const int dm = measured_side == 1 ? rho.d1 : rho.d2;
  const int dr = measured_side == 1 ? rho.d2 : rho.d1;
  if (mm.dim != dm)
    throw DimensionError("steer: measurement dimension " + std::to_string(mm.dim) +
                         " does not match subsystem dimension " + std::to_string(dm));

  MultiSource out;
  out.dim = dr;
  out.n_settings = mm.n_settings;
  out.n_outcomes = mm.n_outcomes;
  out.assemblage = true;
  out.weights.resize(mm.size());
  out.states.reserve(mm.size());
  const Eigen::MatrixXcd id_rest = Eigen::MatrixXcd::Identity(dr, dr);
  for (int i = 0; i < mm.size(); ++i) {
    const Eigen::MatrixXcd full = measured_side == 1 ? kron(mm.effects[i].mat(), id_rest)
                                                     : kron(id_rest, mm.effects[i].mat());
    const Eigen::MatrixXcd prod = full * rho.rho.mat();
    const HermitianOperator sub =
        partial_trace(HermitianOperator(0.5 * (prod + prod.adjoint()).eval()), rho.dims(),
                      {measured_side == 2, measured_side == 1});
    const double w = sub.trace();
    out.weights[i] = std::max(w, 0.0);
    out.states.push_back(w > 1e-12 ? (1.0 / w) * sub : maximally_mixed(dr));
  }
  validate(out);
  return out;
}

MultiSource pushforward(const ChannelChoi& e, const MultiSource& p) {
  validate(e);
  validate(p);
  if (e.d_in != p.dim)
    throw DimensionError("pushforward: channel input dimension does not match the source");
  MultiSource out = p;
  out.dim = e.d_out;
  out.assemblage = false;
  for (auto& s : out.states) s = e.apply(s);
  validate(out);
  return out;
}

MultiMeasurement pullback(const ChannelChoi& e, const MultiMeasurement& m) {
  validate(e);
  validate(m);
  if (e.d_out != m.dim)
    throw DimensionError("pullback: channel output dimension does not match the measurement");
  MultiMeasurement out = m;
  out.dim = e.d_in;
  for (auto& eff : out.effects) eff = e.adjoint_apply(eff);
  validate(out);
  return out;
}

MultiSource flag_convexify(const MultiSource& p) {
  validate(p);
  MultiSource out;
  out.dim = p.dim;
  out.n_settings = 1;
  out.n_outcomes = p.size();
  out.assemblage = false;
  out.states = p.states;
  out.weights.resize(p.size());
  for (int i = 0; i < p.size(); ++i)
    out.weights[i] = p.weights[i] / static_cast<double>(p.n_settings);
  validate(out);
  return out;
}

MultiMeasurement flag_convexify(const MultiMeasurement& m) {
  validate(m);
  MultiMeasurement out;
  out.dim = m.dim;
  out.n_settings = 1;
  out.n_outcomes = m.size();
  out.effects.reserve(m.size());
  for (const auto& eff : m.effects)
    out.effects.push_back((1.0 / static_cast<double>(m.n_settings)) * eff);
  validate(out);
  return out;
}

MultiInstrument flag_convexify(const MultiInstrument& mi) {
  validate(mi);
  MultiInstrument out;
  out.dims_in = mi.dims_in;
  out.dims_out = mi.dims_out;
  out.n_settings = 1;
  out.n_outcomes = mi.size();
  out.two_comb = mi.two_comb;
  out.chois.reserve(mi.size());
  for (const auto& b : mi.chois)
    out.chois.push_back((1.0 / static_cast<double>(mi.n_settings)) * b);
  validate(out);
  return out;
}

BipartiteState dephase_embed(const MultiSource& source) {
  validate(source);
  if (source.n_settings != 1)
    throw ValidationError(
        "dephase_embed: the source must have a single setting (flag-convexify first)");
  const int a_card = source.n_outcomes;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(a_card * source.dim, a_card * source.dim);
  for (int a = 0; a < a_card; ++a) {
    Eigen::MatrixXcd flag = Eigen::MatrixXcd::Zero(a_card, a_card);
    flag(a, a) = 1.0;
    rho += source.weights[a] * kron(flag, source.states[a].mat());
  }
  BipartiteState out{a_card, source.dim, HermitianOperator(rho)};
  validate(out);
  return out;
}

namespace {

/** Flag-convexify + dephase everything classical about a multi-instrument. */
MultipartiteState instrument_associated_state(const MultiInstrument& mi) {
  const MultiInstrument flat = flag_convexify(mi);  // settings absorbed with uniform weight
  std::vector<int> dims;
  const int c_card = flat.n_outcomes;
  if (c_card > 1) dims.push_back(c_card);
  for (int d : flat.dims_out)
    if (d > 1) dims.push_back(d);
  for (int d : flat.dims_in)
    if (d > 1) dims.push_back(d);
  if (dims.empty()) dims.push_back(1);
  const int dq = flat.dim_out() * flat.dim_in();
  const int total = (c_card > 1 ? c_card : 1) * dq;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(total, total);
  for (int c = 0; c < c_card; ++c) {
    if (c_card > 1) {
      Eigen::MatrixXcd flag = Eigen::MatrixXcd::Zero(c_card, c_card);
      flag(c, c) = 1.0;
      rho += kron(flag, flat.chois[c].mat());
    } else {
      rho += flat.chois[c].mat();
    }
  }
  MultipartiteState out{dims, HermitianOperator(rho)};
  validate(out);
  return out;
}

}  // namespace

MultipartiteState associated_state(const Process& p) {
  struct Visitor {
    MultipartiteState operator()(const MultiSource& ms) const {
      const MultiSource flat = flag_convexify(ms);
      const BipartiteState emb = dephase_embed(flat);
      std::vector<int> dims;
      if (emb.d1 > 1) dims.push_back(emb.d1);
      dims.push_back(emb.d2);
      return MultipartiteState{dims, emb.rho};
    }
    MultipartiteState operator()(const MultiMeasurement& mm) const {
      const MultiMeasurement flat = flag_convexify(mm);
      // Outcome flag tensored with the Choi copy of the input wire.
      const int b_card = flat.n_outcomes;
      const int d = flat.dim;
      Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(b_card * d, b_card * d);
      for (int b = 0; b < b_card; ++b) {
        Eigen::MatrixXcd flag = Eigen::MatrixXcd::Zero(b_card, b_card);
        flag(b, b) = 1.0;
        rho += kron(flag, flat.effects[b].mat().transpose().eval()) / static_cast<double>(d);
      }
      std::vector<int> dims;
      if (b_card > 1) dims.push_back(b_card);
      dims.push_back(d);
      MultipartiteState out{dims, HermitianOperator(rho)};
      validate(out);
      return out;
    }
    MultipartiteState operator()(const BipartiteState& bs) const {
      validate(bs);
      return MultipartiteState{bs.dims(), bs.rho};
    }
    MultipartiteState operator()(const MultipartiteState& ms) const {
      validate(ms);
      return ms;
    }
    MultipartiteState operator()(const ChannelChoi& ch) const {
      validate(ch);
      std::vector<int> dims;
      if (ch.d_out > 1) dims.push_back(ch.d_out);
      if (ch.d_in > 1) dims.push_back(ch.d_in);
      if (dims.empty()) dims.push_back(1);
      return MultipartiteState{dims, ch.choi};
    }
    MultipartiteState operator()(const MultiInstrument& mi) const {
      validate(mi);
      return instrument_associated_state(mi);
    }
  };
  return std::visit(Visitor{}, p);
}

}  // namespace qproc
