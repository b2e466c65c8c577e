// SPDX-License-Identifier: MIT
#include "qproc/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

namespace qproc {

namespace {

/// Frame elements with |trace| at or below this are dropped by transports
/// (they necessarily carry zero weight).
constexpr double kZeroTraceDrop = 1e-12;

/// Outcome branches below this probability have no certified state; their
/// weight bounds are skipped (the reconstruction check is vacuous for them).
constexpr double kZeroProb = 1e-12;

void add_check(VerifyReport& r, std::string name, double residual, double tolerance) {
  const bool ok = residual <= tolerance;
  r.checks.push_back({std::move(name), residual, tolerance, ok});
  if (!ok) r.pass = false;
}

/// A report that failed structural (size/dimension) validation outright.
VerifyReport shape_failure() {
  VerifyReport r;
  add_check(r, "shape", 1.0, 0.0);
  return r;
}

bool side_well_formed(const SideFrames& s, int dim) {
  if (s.frame.empty() || s.frame.size() != s.dual.size()) return false;
  for (const auto& h : s.frame)
    if (h.dim() != dim) return false;
  for (const auto& h : s.dual)
    if (h.dim() != dim) return false;
  return true;
}

/// Worst deviation of a family from being states: max(PSD violation, trace).
double state_family_residual(const std::vector<HermitianOperator>& fam) {
  double res = 0.0;
  for (const auto& s : fam) res = std::max({res, -s.eig_min(), std::abs(s.trace() - 1.0)});
  return res;
}

/// Worst PSD violation over a family.
double psd_family_residual(const std::vector<HermitianOperator>& fam) {
  double res = 0.0;
  for (const auto& g : fam) res = std::max(res, -g.eig_min());
  return res;
}

/// Worst |Tr - 1| over a family.
double unit_trace_residual(const std::vector<HermitianOperator>& fam) {
  double res = 0.0;
  for (const auto& f : fam) res = std::max(res, std::abs(f.trace() - 1.0));
  return res;
}

HermitianOperator family_sum(const std::vector<HermitianOperator>& fam) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(fam.front().dim(), fam.front().dim());
  for (const auto& h : fam) acc += h.mat();
  return HermitianOperator(std::move(acc));
}

/// || sum duals - P_V(1) ||_F
double dual_sum_residual(const std::vector<HermitianOperator>& duals, const OperatorSpan& v) {
  return (family_sum(duals) - v.project_identity()).norm();
}

/**
 * Worst reconstruction error of the span's own (orthonormal) basis through
 * the synthesis/analysis pair: tau ?= sum_l <analysis_l, tau> synthesis_l.
 */
double frame_property_residual(const OperatorSpan& v,
                               const std::vector<HermitianOperator>& synthesis,
                               const std::vector<HermitianOperator>& analysis) {
  double res = 0.0;
  for (int k = 0; k < v.rank(); ++k) {
    const HermitianOperator tau = unvectorize(v.basis.col(k), v.dim);
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(v.dim, v.dim);
    for (std::size_t l = 0; l < synthesis.size(); ++l)
      acc += hs_inner(analysis[l], tau) * synthesis[l].mat();
    res = std::max(res, (tau.mat() - acc).norm());
  }
  return res;
}

/**
 * The operators steered onto `party` (0-based) by a complete product family
 * of Hermitian probes on the remaining factors:
 * Tr_{others}[(B_k1 (x) ... (x) 1_party (x) ...) rho].
 */
std::vector<HermitianOperator> steered_family(const HermitianOperator& rho,
                                              const std::vector<int>& dims, std::size_t party) {
  std::vector<std::vector<HermitianOperator>> bases;
  std::size_t total = 1;
  for (std::size_t j = 0; j < dims.size(); ++j) {
    if (j == party) continue;
    bases.push_back(hermitian_basis(dims[j]));
    total *= bases.back().size();
  }
  std::vector<bool> keep(dims.size(), false);
  keep[party] = true;

  std::vector<HermitianOperator> out;
  out.reserve(total);
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t rem = t, pos = 0;
    Eigen::MatrixXcd probe = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t j = 0; j < dims.size(); ++j) {
      if (j == party) {
        probe = kron(probe, Eigen::MatrixXcd::Identity(dims[j], dims[j]));
      } else {
        const std::size_t n = bases[pos].size();
        probe = kron(probe, bases[pos][rem % n].mat());
        rem /= n;
        ++pos;
      }
    }
    // Tr_C[(B (x) 1) rho] equals the partial trace of the symmetrized
    // product because the probe acts as the identity on the kept factor.
    const Eigen::MatrixXcd sym = 0.5 * (probe * rho.mat() + rho.mat() * probe);
    out.push_back(partial_trace(HermitianOperator(sym), dims, keep));
  }
  return out;
}

/// Kron chain of the picked frame elements of each side, in side order.
Eigen::MatrixXcd kron_pick(const std::vector<const std::vector<HermitianOperator>*>& families,
                           const std::vector<std::size_t>& picks) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t i = 0; i < families.size(); ++i) acc = kron(acc, (*families[i])[picks[i]].mat());
  return acc;
}

bool next_combo(std::vector<std::size_t>& picks, const std::vector<std::size_t>& sizes) {
  for (std::size_t i = picks.size(); i-- > 0;) {
    if (++picks[i] < sizes[i]) return true;
    picks[i] = 0;
  }
  return false;
}

}  // namespace

const CheckResult* VerifyReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double VerifyReport::worst_ratio() const {
  double worst = 0.0;
  for (const auto& c : checks) {
    const double denom = (c.tolerance > 0.0) ? c.tolerance : 1.0;
    worst = std::max(worst, c.residual / denom);
  }
  return worst;
}

const char* certificate_kind(const FrameCertificate& c) {
  struct Visitor {
    const char* operator()(const SourceCertificate&) const { return "source"; }
    const char* operator()(const MeasurementCertificate&) const { return "measurement"; }
    const char* operator()(const BipartiteCertificate&) const { return "bipartite"; }
    const char* operator()(const ChannelCertificate&) const { return "channel"; }
    const char* operator()(const GeneralCertificate&) const { return "general"; }
  };
  return std::visit(Visitor{}, c);
}

// --------------------------------------------------------------------------
// Source
// --------------------------------------------------------------------------

VerifyReport verify_source_certificate(const MultiSource& ms, const SourceCertificate& cert,
                                       double tolerance) {
  const SideFrames side{cert.frame, cert.dual};
  if (!side_well_formed(side, ms.dim) || ms.states.empty()) return shape_failure();

  VerifyReport r;
  add_check(r, "shape", 0.0, 0.0);
  add_check(r, "frame-states", state_family_residual(cert.frame), tol::psd_floor);
  // The certified span is that of the subnormalized family: zero-probability
  // branches contribute nothing, whatever state they carry.
  add_check(r, "dual-sum", dual_sum_residual(cert.dual, span_of(ms.family())), tolerance);

  const std::size_t nl = cert.frame.size();
  Eigen::MatrixXd sub(static_cast<Eigen::Index>(nl), ms.size());  // subnormalized weights
  double wres = 0.0, rres = 0.0;
  for (int k = 0; k < ms.size(); ++k) {
    const double p = ms.weights[static_cast<std::size_t>(k)];
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(ms.dim, ms.dim);
    for (std::size_t l = 0; l < nl; ++l) {
      const double w = hs_inner(cert.dual[l], ms.states[static_cast<std::size_t>(k)]);
      if (p > kZeroProb) wres = std::max({wres, -w, w - 1.0});
      sub(static_cast<Eigen::Index>(l), k) = p * w;
      acc += (p * w) * cert.frame[l].mat();
    }
    rres = std::max(rres, (p * ms.states[static_cast<std::size_t>(k)].mat() - acc).norm());
  }
  add_check(r, "weights", std::max(wres, 0.0), -tol::weight_floor);
  add_check(r, "reconstruction", rres, tolerance);

  if (ms.assemblage && ms.n_settings > 1) {
    // p(lambda|x) = sum_a p(a|x) Tr[H rho_{a|x}] must not depend on x.
    double ares = 0.0;
    for (std::size_t l = 0; l < nl; ++l) {
      double first = 0.0;
      for (int x = 0; x < ms.n_settings; ++x) {
        double px = 0.0;
        for (int a = 0; a < ms.n_outcomes; ++a) px += sub(static_cast<Eigen::Index>(l), ms.index(x, a));
        if (x == 0)
          first = px;
        else
          ares = std::max(ares, std::abs(px - first));
      }
    }
    add_check(r, "assemblage-marginal", ares, tolerance);
  }
  return r;
}

// --------------------------------------------------------------------------
// Measurement
// --------------------------------------------------------------------------

VerifyReport verify_measurement_certificate(const MultiMeasurement& mm,
                                            const MeasurementCertificate& cert, double tolerance) {
  const SideFrames side{cert.parent, cert.dual};
  if (!side_well_formed(side, mm.dim) || mm.effects.empty()) return shape_failure();

  VerifyReport r;
  add_check(r, "shape", 0.0, 0.0);
  add_check(r, "parent-psd", psd_family_residual(cert.parent), tol::psd_floor);
  add_check(r, "parent-sum",
            (family_sum(cert.parent) - HermitianOperator::identity(mm.dim)).norm(), tolerance);
  add_check(r, "dual-traces", unit_trace_residual(cert.dual), tolerance);

  double wres = 0.0, rres = 0.0;
  for (const auto& effect : mm.effects) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(mm.dim, mm.dim);
    for (std::size_t l = 0; l < cert.parent.size(); ++l) {
      const double w = hs_inner(effect, cert.dual[l]);
      wres = std::max({wres, -w, w - 1.0});
      acc += w * cert.parent[l].mat();
    }
    rres = std::max(rres, (effect.mat() - acc).norm());
  }
  add_check(r, "weights", std::max(wres, 0.0), -tol::weight_floor);
  add_check(r, "reconstruction", rres, tolerance);
  return r;
}

// --------------------------------------------------------------------------
// Bipartite / multipartite state
// --------------------------------------------------------------------------

VerifyReport verify_bipartite_certificate(const MultipartiteState& rho,
                                          const BipartiteCertificate& cert, double tolerance) {
  const std::size_t np = rho.dims.size();
  if (cert.sides.size() != np || np == 0) return shape_failure();
  for (std::size_t i = 0; i < np; ++i)
    if (!side_well_formed(cert.sides[i], rho.dims[i])) return shape_failure();

  VerifyReport r;
  add_check(r, "shape", 0.0, 0.0);
  for (std::size_t i = 0; i < np; ++i) {
    const std::string tag = "side" + std::to_string(i + 1);
    const SideFrames& s = cert.sides[i];
    add_check(r, tag + "-frame-states", state_family_residual(s.frame), tol::psd_floor);
    const OperatorSpan v = span_of(steered_family(rho.rho, rho.dims, i));
    add_check(r, tag + "-dual-sum", dual_sum_residual(s.dual, v), tolerance);
    add_check(r, tag + "-frame-property", frame_property_residual(v, s.frame, s.dual), tolerance);
  }

  std::vector<const std::vector<HermitianOperator>*> frames, duals;
  std::vector<std::size_t> sizes;
  for (const auto& s : cert.sides) {
    frames.push_back(&s.frame);
    duals.push_back(&s.dual);
    sizes.push_back(s.frame.size());
  }
  const int d = rho.rho.dim();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
  double wres = 0.0;
  std::vector<std::size_t> picks(np, 0);
  do {
    const Eigen::MatrixXcd hk = kron_pick(duals, picks);
    const double w = (hk * rho.rho.mat()).trace().real();
    wres = std::max(wres, -w);
    acc += w * kron_pick(frames, picks);
  } while (next_combo(picks, sizes));
  add_check(r, "weights", std::max(wres, 0.0), -tol::weight_floor);
  add_check(r, "reconstruction", (rho.rho.mat() - acc).norm(), tolerance);
  return r;
}

VerifyReport verify_bipartite_certificate(const BipartiteState& rho,
                                          const BipartiteCertificate& cert, double tolerance) {
  return verify_bipartite_certificate(MultipartiteState{rho.dims(), rho.rho}, cert, tolerance);
}

// --------------------------------------------------------------------------
// Channel
// --------------------------------------------------------------------------

VerifyReport verify_channel_certificate(const ChannelChoi& e, const ChannelCertificate& cert,
                                        double tolerance) {
  if (!side_well_formed(cert.input, e.d_in) || !side_well_formed(cert.output, e.d_out))
    return shape_failure();

  VerifyReport r;
  add_check(r, "shape", 0.0, 0.0);
  add_check(r, "input-frame-traces", unit_trace_residual(cert.input.frame), tolerance);
  add_check(r, "input-dual-psd", psd_family_residual(cert.input.dual), tol::psd_floor);
  add_check(r, "input-dual-sum",
            (family_sum(cert.input.dual) - HermitianOperator::identity(e.d_in)).norm(), tolerance);

  std::vector<HermitianOperator> adj_images, images;
  for (const auto& y : hermitian_basis(e.d_out)) adj_images.push_back(e.adjoint_apply(y));
  for (const auto& x : hermitian_basis(e.d_in)) images.push_back(e.apply(x));
  const OperatorSpan va = span_of(adj_images);
  const OperatorSpan vb = span_of(images);

  add_check(r, "input-frame-property",
            frame_property_residual(va, cert.input.dual, cert.input.frame), tolerance);
  add_check(r, "output-frame-states", state_family_residual(cert.output.frame), tol::psd_floor);
  add_check(r, "output-dual-sum", dual_sum_residual(cert.output.dual, vb), tolerance);
  add_check(r, "output-frame-property",
            frame_property_residual(vb, cert.output.frame, cert.output.dual), tolerance);

  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(e.choi.dim(), e.choi.dim());
  double wres = 0.0;
  for (std::size_t la = 0; la < cert.input.frame.size(); ++la) {
    const HermitianOperator img = e.apply(cert.input.frame[la]);
    const Eigen::MatrixXcd gt = cert.input.dual[la].mat().transpose();
    for (std::size_t lb = 0; lb < cert.output.frame.size(); ++lb) {
      const double w = hs_inner(cert.output.dual[lb], img);
      wres = std::max(wres, -w);
      acc += (w / e.d_in) * kron(cert.output.frame[lb].mat(), gt);
    }
  }
  add_check(r, "weights", std::max(wres, 0.0), -tol::weight_floor);
  add_check(r, "reconstruction", (e.choi.mat() - acc).norm(), tolerance);
  return r;
}

// --------------------------------------------------------------------------
// General multi-instrument
// --------------------------------------------------------------------------

VerifyReport verify_general_certificate(const MultiInstrument& mi, const GeneralCertificate& cert,
                                        double tolerance) {
  const std::size_t ni = mi.dims_in.size(), no = mi.dims_out.size();
  if (cert.inputs.size() != ni || cert.outputs.size() != no || no == 0) return shape_failure();
  for (std::size_t i = 0; i < ni; ++i)
    if (!side_well_formed(cert.inputs[i], mi.dims_in[i])) return shape_failure();
  for (std::size_t j = 0; j < no; ++j)
    if (!side_well_formed(cert.outputs[j], mi.dims_out[j])) return shape_failure();
  if (mi.two_comb && (ni != 2 || no != 2)) return shape_failure();

  const int din = mi.dim_in(), dout = mi.dim_out();
  const auto branch_apply = [&](const HermitianOperator& choi, const HermitianOperator& x) {
    const Eigen::MatrixXcd op =
        kron(Eigen::MatrixXcd::Identity(dout, dout), Eigen::MatrixXcd(x.mat().transpose()));
    const Eigen::MatrixXcd sym = 0.5 * din * (op * choi.mat() + choi.mat() * op);
    return partial_trace(HermitianOperator(sym), {dout, din}, {true, false});
  };
  const auto branch_adjoint = [&](const HermitianOperator& choi, const HermitianOperator& y) {
    const Eigen::MatrixXcd op = kron(y.mat(), Eigen::MatrixXcd::Identity(din, din));
    const Eigen::MatrixXcd sym = 0.5 * din * (op * choi.mat() + choi.mat() * op);
    const HermitianOperator t = partial_trace(HermitianOperator(sym), {dout, din}, {false, true});
    return HermitianOperator(Eigen::MatrixXcd(t.mat().transpose()));
  };

  VerifyReport r;
  add_check(r, "shape", 0.0, 0.0);

  const std::vector<HermitianOperator> in_basis = hermitian_basis(din);
  const std::vector<HermitianOperator> out_basis = hermitian_basis(dout);

  for (std::size_t i = 0; i < ni; ++i) {
    const std::string tag = "in" + std::to_string(i + 1);
    const SideFrames& s = cert.inputs[i];
    add_check(r, tag + "-frame-traces", unit_trace_residual(s.frame), tolerance);
    add_check(r, tag + "-dual-psd", psd_family_residual(s.dual), tol::psd_floor);
    add_check(r, tag + "-dual-sum",
              (family_sum(s.dual) - HermitianOperator::identity(mi.dims_in[i])).norm(), tolerance);
    std::vector<HermitianOperator> fam;
    for (const auto& choi : mi.chois)
      for (const auto& y : out_basis)
        for (auto& op : steered_family(branch_adjoint(choi, y), mi.dims_in, i))
          fam.push_back(std::move(op));
    add_check(r, tag + "-frame-property", frame_property_residual(span_of(fam), s.dual, s.frame),
              tolerance);
  }
  for (std::size_t j = 0; j < no; ++j) {
    const std::string tag = "out" + std::to_string(j + 1);
    const SideFrames& s = cert.outputs[j];
    add_check(r, tag + "-frame-states", state_family_residual(s.frame), tol::psd_floor);
    std::vector<HermitianOperator> fam;
    for (const auto& choi : mi.chois)
      for (const auto& x : in_basis)
        for (auto& op : steered_family(branch_apply(choi, x), mi.dims_out, j))
          fam.push_back(std::move(op));
    const OperatorSpan v = span_of(fam);
    add_check(r, tag + "-dual-sum", dual_sum_residual(s.dual, v), tolerance);
    add_check(r, tag + "-frame-property", frame_property_residual(v, s.frame, s.dual), tolerance);
  }

  std::vector<const std::vector<HermitianOperator>*> in_frames, in_duals, out_frames, out_duals;
  std::vector<std::size_t> in_sizes, out_sizes;
  for (const auto& s : cert.inputs) {
    in_frames.push_back(&s.frame);
    in_duals.push_back(&s.dual);
    in_sizes.push_back(s.frame.size());
  }
  for (const auto& s : cert.outputs) {
    out_frames.push_back(&s.frame);
    out_duals.push_back(&s.dual);
    out_sizes.push_back(s.frame.size());
  }
  std::size_t in_total = 1, out_total = 1;
  for (const std::size_t n : in_sizes) in_total *= n;
  for (const std::size_t n : out_sizes) out_total *= n;

  // weights indexed branch-major, then input combo, then output combo; kept
  // for the 2-comb marginal check.
  std::vector<double> weights;
  weights.reserve(static_cast<std::size_t>(mi.size()) * in_total * out_total);

  double wres = 0.0, rres = 0.0;
  for (const auto& choi : mi.chois) {
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(choi.dim(), choi.dim());
    std::vector<std::size_t> ipicks(ni, 0);
    do {
      const Eigen::MatrixXcd fa = kron_pick(in_frames, ipicks);
      const HermitianOperator img = branch_apply(choi, HermitianOperator(fa));
      const Eigen::MatrixXcd gat = kron_pick(in_duals, ipicks).transpose();
      std::vector<std::size_t> opicks(no, 0);
      do {
        const Eigen::MatrixXcd hb = kron_pick(out_duals, opicks);
        const double w = (hb * img.mat()).trace().real();
        weights.push_back(w);
        wres = std::max(wres, -w);
        acc += (w / din) * kron(kron_pick(out_frames, opicks), gat);
      } while (next_combo(opicks, out_sizes));
    } while (next_combo(ipicks, in_sizes));
    rres = std::max(rres, (choi.mat() - acc).norm());
  }
  add_check(r, "weights", std::max(wres, 0.0), -tol::weight_floor);
  add_check(r, "reconstruction", rres, tolerance);

  if (mi.two_comb) {
    // Summing the classical outcome and the second output wire's index must
    // leave weights independent of the second input wire's index.
    const std::size_t nA1 = in_sizes[0], nA2 = in_sizes[1];
    const std::size_t nB1 = out_sizes[0], nB2 = out_sizes[1];
    double cres = 0.0;
    for (int z = 0; z < mi.n_settings; ++z) {
      for (std::size_t a1 = 0; a1 < nA1; ++a1) {
        for (std::size_t b1 = 0; b1 < nB1; ++b1) {
          double first = 0.0;
          for (std::size_t a2 = 0; a2 < nA2; ++a2) {
            double marg = 0.0;
            for (int c = 0; c < mi.n_outcomes; ++c) {
              const std::size_t branch = static_cast<std::size_t>(mi.index(z, c));
              const std::size_t in_combo = a1 * nA2 + a2;
              for (std::size_t b2 = 0; b2 < nB2; ++b2)
                marg += weights[(branch * in_total + in_combo) * out_total + b1 * nB2 + b2];
            }
            if (a2 == 0)
              first = marg;
            else
              cres = std::max(cres, std::abs(marg - first));
          }
        }
      }
    }
    add_check(r, "comb-marginal", cres, tolerance);
  }
  return r;
}

// --------------------------------------------------------------------------
// Dispatch
// --------------------------------------------------------------------------

VerifyReport verify_certificate(const Process& p, const FrameCertificate& cert, double tolerance) {
  return std::visit(
      [tolerance](const auto& proc, const auto& c) -> VerifyReport {
        using P = std::decay_t<decltype(proc)>;
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<P, MultiSource> && std::is_same_v<C, SourceCertificate>)
          return verify_source_certificate(proc, c, tolerance);
        else if constexpr (std::is_same_v<P, MultiMeasurement> &&
                           std::is_same_v<C, MeasurementCertificate>)
          return verify_measurement_certificate(proc, c, tolerance);
        else if constexpr ((std::is_same_v<P, BipartiteState> ||
                            std::is_same_v<P, MultipartiteState>) &&
                           std::is_same_v<C, BipartiteCertificate>)
          return verify_bipartite_certificate(proc, c, tolerance);
        else if constexpr (std::is_same_v<P, ChannelChoi> && std::is_same_v<C, ChannelCertificate>)
          return verify_channel_certificate(proc, c, tolerance);
        else if constexpr (std::is_same_v<P, MultiInstrument> &&
                           std::is_same_v<C, GeneralCertificate>)
          return verify_general_certificate(proc, c, tolerance);
        else {
          VerifyReport r;
          add_check(r, "kind-match", 1.0, 0.0);
          return r;
        }
      },
      p, cert);
}

// --------------------------------------------------------------------------
// Transports
// --------------------------------------------------------------------------

BipartiteCertificate transport_choi(const ChannelCertificate& cert, const ChannelChoi& e) {
  if (!side_well_formed(cert.input, e.d_in) || !side_well_formed(cert.output, e.d_out))
    throw DimensionError("channel certificate does not match the channel's dimensions");
  BipartiteCertificate out;
  out.sides.resize(2);
  out.sides[0] = cert.output;
  for (std::size_t l = 0; l < cert.input.frame.size(); ++l) {
    const double tg = cert.input.dual[l].trace();
    if (tg <= kZeroTraceDrop) continue;
    out.sides[1].frame.emplace_back(Eigen::MatrixXcd(cert.input.dual[l].mat().transpose() / tg));
    out.sides[1].dual.emplace_back(Eigen::MatrixXcd(cert.input.frame[l].mat().transpose() * tg));
  }
  return out;
}

ChannelCertificate transport_choi_inverse(const BipartiteCertificate& cert, const ChannelChoi& e) {
  if (cert.sides.size() != 2 || !side_well_formed(cert.sides[0], e.d_out) ||
      !side_well_formed(cert.sides[1], e.d_in))
    throw DimensionError("Choi-state certificate does not match the channel's dimensions");
  ChannelCertificate out;
  out.output = cert.sides[0];
  for (std::size_t l = 0; l < cert.sides[1].frame.size(); ++l) {
    const double th = cert.sides[1].dual[l].trace();
    if (std::abs(th) <= kZeroTraceDrop) continue;
    out.input.frame.emplace_back(Eigen::MatrixXcd(cert.sides[1].dual[l].mat().transpose() / th));
    out.input.dual.emplace_back(Eigen::MatrixXcd(cert.sides[1].frame[l].mat().transpose() * th));
  }
  return out;
}

SourceCertificate transport_flag(const SourceCertificate& cert) { return cert; }

MeasurementCertificate transport_flag(const MeasurementCertificate& cert) { return cert; }

BipartiteCertificate transport_dephase(const SourceCertificate& cert, const MultiSource& s) {
  if (s.n_settings != 1)
    throw ValidationError("dephased embedding requires a single-setting source; flag-convexify first");
  BipartiteCertificate out;
  out.sides.resize(2);
  for (int c = 0; c < s.n_outcomes; ++c) {
    Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(s.n_outcomes, s.n_outcomes);
    proj(c, c) = 1.0;
    const HermitianOperator flag(proj);
    out.sides[0].frame.push_back(flag);
    out.sides[0].dual.push_back(flag);
  }
  out.sides[1].frame = cert.frame;
  out.sides[1].dual = cert.dual;
  return out;
}

// --------------------------------------------------------------------------
// Spans
// --------------------------------------------------------------------------

OperatorSpan steered_span(const MultipartiteState& rho, int side) {
  if (side < 1 || static_cast<std::size_t>(side) > rho.dims.size())
    throw DimensionError("steered_span: side " + std::to_string(side) + " out of range");
  return span_of(steered_family(rho.rho, rho.dims, static_cast<std::size_t>(side - 1)));
}

}  // namespace qproc
