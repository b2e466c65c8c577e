// SPDX-License-Identifier: MIT
#include "qproc/decide.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qproc/frames.hpp"
#include "qproc/identities.hpp"

namespace qproc {

namespace {

/// Branch probabilities at or below this count as zero and are skipped.
constexpr double kZeroProb = 1e-12;
/// Frobenius residual under which a linear dependence is accepted as exact.
constexpr double kDependenceTol = 1e-8;
/// Largest-eigenvalue defect under which a unit-trace state counts as pure.
constexpr double kPurityTol = 1e-9;
/// Strategy-count guard for the steering LP.
constexpr int kMaxStrategies = 1024;
/// Parent-outcome guard for the joint-measurability search.
constexpr int kMaxParentOutcomes = 256;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

bool is_pure(const HermitianOperator& rho) { return rho.eig_max() >= 1.0 - kPurityTol; }

bool is_rank_one(const HermitianOperator& effect) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(effect.mat(), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const int d = static_cast<int>(ev.size());
  if (d < 1 || ev(d - 1) <= tol::psd_floor) return false;
  return d == 1 || ev(d - 2) <= 1e-9 * std::max(1.0, ev(d - 1));
}

/** Indices of branches with nonnegligible probability. */
std::vector<int> positive_branches(const MultiSource& ms) {
  std::vector<int> idx;
  for (int i = 0; i < ms.size(); ++i)
    if (ms.weights[static_cast<std::size_t>(i)] > kZeroProb) idx.push_back(i);
  return idx;
}

/**
 * Merges a state list by trace-distance distinctness. Returns representative
 * states (first appearance order) and the representative of each input.
 */
std::vector<HermitianOperator> merge_distinct(const std::vector<HermitianOperator>& states,
                                              std::vector<int>* rep_of) {
  std::vector<HermitianOperator> reps;
  if (rep_of != nullptr) rep_of->assign(states.size(), -1);
  for (std::size_t i = 0; i < states.size(); ++i) {
    int found = -1;
    for (std::size_t r = 0; r < reps.size(); ++r)
      if (trace_distance(states[i], reps[r]) < tol::distinctness) {
        found = static_cast<int>(r);
        break;
      }
    if (found < 0) {
      reps.push_back(states[i]);
      found = static_cast<int>(reps.size()) - 1;
    }
    if (rep_of != nullptr) (*rep_of)[i] = found;
  }
  return reps;
}

/** ||sum_i alpha_i ops_i||_F, the re-checked quality of a dependence. */
double dependence_residual(const std::vector<HermitianOperator>& ops,
                           const Eigen::VectorXd& alpha) {
  if (ops.empty()) return 0.0;
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(ops.front().dim(), ops.front().dim());
  for (std::size_t i = 0; i < ops.size(); ++i) acc += alpha(static_cast<Eigen::Index>(i)) * ops[i].mat();
  return acc.norm();
}

/** Reorders tensor factors; perm[k] names the old factor at new slot k. */
HermitianOperator permute_factors(const HermitianOperator& h, const std::vector<int>& dims,
                                  const std::vector<int>& perm) {
  const int n = static_cast<int>(dims.size());
  const int total = dim_product(dims);
  std::vector<int> new_dims(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k)
    new_dims[k] = dims[static_cast<std::size_t>(perm[k])];
  // Strides of the new ordering.
  std::vector<int> new_stride(perm.size(), 1);
  for (int k = n - 2; k >= 0; --k)
    new_stride[static_cast<std::size_t>(k)] =
        new_stride[static_cast<std::size_t>(k + 1)] * new_dims[static_cast<std::size_t>(k + 1)];
  std::vector<int> map(static_cast<std::size_t>(total), 0);
  for (int flat = 0; flat < total; ++flat) {
    std::vector<int> digit(static_cast<std::size_t>(n), 0);
    int rem = flat;
    for (int f = n - 1; f >= 0; --f) {
      digit[static_cast<std::size_t>(f)] = rem % dims[static_cast<std::size_t>(f)];
      rem /= dims[static_cast<std::size_t>(f)];
    }
    int nf = 0;
    for (int k = 0; k < n; ++k)
      nf += digit[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])] *
            new_stride[static_cast<std::size_t>(k)];
    map[static_cast<std::size_t>(flat)] = nf;
  }
  Eigen::MatrixXcd out(total, total);
  for (int r = 0; r < total; ++r)
    for (int c = 0; c < total; ++c)
      out(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]) = h.mat()(r, c);
  return HermitianOperator(out);
}

/** Bipartite view (wires `side` first, the rest merged second). */
BipartiteState merged_view(const MultipartiteState& mp, const std::vector<int>& side) {
  std::vector<int> perm = side;
  for (int i = 0; i < static_cast<int>(mp.dims.size()); ++i)
    if (std::find(side.begin(), side.end(), i) == side.end()) perm.push_back(i);
  int d1 = 1;
  for (int w : side) d1 *= mp.dims[static_cast<std::size_t>(w)];
  const int d2 = dim_product(mp.dims) / d1;
  return {d1, d2, permute_factors(mp.rho, mp.dims, perm)};
}

/** Product of two multi-measurements on a merged wire pair. */
MultiMeasurement product_measurement(const MultiMeasurement& a, const MultiMeasurement& b) {
  MultiMeasurement mm;
  mm.dim = a.dim * b.dim;
  mm.n_settings = a.n_settings * b.n_settings;
  mm.n_outcomes = a.n_outcomes * b.n_outcomes;
  for (int ya = 0; ya < a.n_settings; ++ya)
    for (int yb = 0; yb < b.n_settings; ++yb)
      for (int ba = 0; ba < a.n_outcomes; ++ba)
        for (int bb = 0; bb < b.n_outcomes; ++bb)
          mm.effects.push_back(kron(a.effects[static_cast<std::size_t>(a.index(ya, ba))],
                                    b.effects[static_cast<std::size_t>(b.index(yb, bb))]));
  return mm;
}

/** Multi-state (one outcome per setting) over a list of states. */
MultiSource multistate_of(const std::vector<HermitianOperator>& states) {
  MultiSource ms;
  ms.dim = states.empty() ? 0 : states.front().dim();
  ms.n_settings = static_cast<int>(states.size());
  ms.n_outcomes = 1;
  ms.weights.assign(states.size(), 1.0);
  ms.states = states;
  return ms;
}

std::vector<std::string> probe_ids(const DecisionConfig& cfg, int dim) {
  return cfg.probes.empty() ? frames::default_probes(dim) : cfg.probes;
}

/**
 * Config for sub-decisions behind a probe rule: only a Nonclassical answer
 * is consumed, so the classical-search rules are disabled for speed.
 */
DecisionConfig probe_config(const DecisionConfig& cfg) {
  DecisionConfig inner = cfg;
  inner.state_frames = {"none"};
  inner.parent_povms = {"none"};
  return inner;
}

void note(Verdict& v, const std::string& line) { v.diagnostics.push_back(line); }

Verdict classical(std::string rule, std::string theorem, FrameCertificate cert,
                  std::vector<std::string> diags) {
  Verdict v;
  v.tag = Tag::Classical;
  v.rule = std::move(rule);
  v.theorem = std::move(theorem);
  v.certificate = std::move(cert);
  v.diagnostics = std::move(diags);
  return v;
}

Verdict nonclassical(std::string theorem, Witness w, std::vector<std::string> diags) {
  Verdict v;
  v.tag = Tag::Nonclassical;
  v.rule = w.rule;
  v.theorem = std::move(theorem);
  v.witness = std::move(w);
  v.diagnostics = std::move(diags);
  return v;
}

}  // namespace

const char* tag_name(Tag t) {
  switch (t) {
    case Tag::Classical: return "Classical";
    case Tag::Nonclassical: return "Nonclassical";
    case Tag::Inconclusive: return "Inconclusive";
  }
  return "?";
}

// --------------------------------------------------------------------------
// Steering LP
// --------------------------------------------------------------------------

namespace {

/** Response of deterministic strategy `lambda` to setting x (base-A digits). */
int strategy_response(int lambda, int setting, int n_outcomes) {
  int rem = lambda;
  for (int x = 0; x < setting; ++x) rem /= n_outcomes;
  return rem % n_outcomes;
}

/**
 * Generators of the qubit PSD slice spanned by {1, t_1, ..., t_{r-1}}
 * (orthonormal traceless directions). Inscribed generators are states;
 * circumscribed ones cover the slice from outside.
 */
std::vector<HermitianOperator> slice_generators(const std::vector<HermitianOperator>& traceless,
                                                int polygon, bool inscribed) {
  const HermitianOperator id = HermitianOperator::identity(2);
  const double root2 = std::sqrt(2.0);
  std::vector<HermitianOperator> gens;
  if (traceless.empty()) {
    gens.push_back(0.5 * id);
    return gens;
  }
  if (traceless.size() == 1) {
    // The slice is a segment: both descriptions are exact.
    gens.push_back(HermitianOperator(0.5 * (id.mat() + root2 * traceless[0].mat())));
    gens.push_back(HermitianOperator(0.5 * (id.mat() - root2 * traceless[0].mat())));
    return gens;
  }
  const double radius = inscribed ? 1.0 : 1.0 / std::cos(M_PI / polygon);
  for (int j = 0; j < polygon; ++j) {
    const double th = 2.0 * M_PI * j / polygon;
    const Eigen::MatrixXcd dir =
        std::cos(th) * traceless[0].mat() + std::sin(th) * traceless[1].mat();
    gens.push_back(HermitianOperator(0.5 * (id.mat() + radius * root2 * dir)));
  }
  return gens;
}

}  // namespace

SteeringResult unsteerable_lp(const MultiSource& assemblage, const DecisionConfig& cfg) {
  SteeringResult res;
  const int n_x = assemblage.n_settings, n_a = assemblage.n_outcomes;
  const std::vector<HermitianOperator> family = assemblage.family();

  if (n_x <= 1) {
    res.status = SteeringStatus::Unsteerable;
    res.model_states = family;
    res.detail = "single setting: the branches themselves form a deterministic model";
    return res;
  }

  double strategies_d = std::pow(static_cast<double>(n_a), n_x);
  if (strategies_d > kMaxStrategies) {
    res.detail = "strategy space too large (" + fmt(strategies_d) + " deterministic responses)";
    return res;
  }
  const int n_lambda = static_cast<int>(strategies_d);

  if (assemblage.dim != 2) {
    res.detail = "no exact polyhedral reduction of the PSD cone beyond qubits";
    return res;
  }

  // Spanning basis of the slice the hidden states may use WLOG: projecting
  // any model onto span{1, family} preserves both the matching rows and
  // positivity on a qubit.
  std::vector<HermitianOperator> spanning = family;
  spanning.push_back(HermitianOperator::identity(2));
  const OperatorSpan b = span_of(spanning);
  if (b.rank() >= 4) {
    res.detail = "steered span is full: no polyhedral reduction applies";
    return res;
  }

  // Orthonormal operator basis, split into the identity direction and
  // traceless directions.
  std::vector<HermitianOperator> basis_ops;
  for (int c = 0; c < b.rank(); ++c) basis_ops.push_back(unvectorize(b.basis.col(c), 2));
  std::vector<HermitianOperator> traceless;
  {
    // Re-orthogonalize against the identity direction.
    const HermitianOperator idn = (1.0 / std::sqrt(2.0)) * HermitianOperator::identity(2);
    for (const auto& op : basis_ops) {
      Eigen::MatrixXcd t = op.mat() - hs_inner(op, idn) * idn.mat();
      const HermitianOperator th(0.5 * (t + t.adjoint()));
      if (th.norm() < 1e-12) continue;
      Eigen::MatrixXcd u = th.mat() / th.norm();
      for (const auto& prev : traceless) {
        const HermitianOperator hu(0.5 * (u + u.adjoint()));
        u -= hs_inner(hu, prev) * prev.mat();
      }
      const HermitianOperator hu(0.5 * (u + u.adjoint()));
      if (hu.norm() > 1e-9) traceless.push_back((1.0 / hu.norm()) * hu);
    }
  }

  // Budget the polygon so the LP stays at a workable size: soundness is
  // unaffected (coarser polygons only widen the Unknown band).
  const int polygon = std::max(8, std::min(cfg.steering_polygon, 16384 / n_lambda));

  const auto build_and_solve = [&](bool inscribed, std::vector<HermitianOperator>* gens_out,
                                   Eigen::VectorXd* farkas_out) -> int {
    const std::vector<HermitianOperator> gens =
        slice_generators(traceless, polygon, inscribed);
    const int n_g = static_cast<int>(gens.size());
    const int rows = static_cast<int>(family.size()) * b.rank();
    Eigen::MatrixXd gcol(b.rank(), n_g);
    for (int k = 0; k < b.rank(); ++k)
      for (int g = 0; g < n_g; ++g) gcol(k, g) = hs_inner(basis_ops[static_cast<std::size_t>(k)],
                                                          gens[static_cast<std::size_t>(g)]);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(n_lambda) * n_g);
    Eigen::VectorXd rhs(rows);
    for (int i = 0; i < static_cast<int>(family.size()); ++i) {
      const int x = i / n_a, out = i % n_a;
      for (int k = 0; k < b.rank(); ++k) {
        const int r = i * b.rank() + k;
        rhs(r) = hs_inner(basis_ops[static_cast<std::size_t>(k)],
                          family[static_cast<std::size_t>(i)]);
        for (int lam = 0; lam < n_lambda; ++lam) {
          if (strategy_response(lam, x, n_a) != out) continue;
          a.row(r).segment(static_cast<Eigen::Index>(lam) * n_g, n_g) = gcol.row(k);
        }
      }
    }
    LpResult lp;
    try {
      lp = solve_nonnegative(a, rhs);
    } catch (const std::runtime_error&) {
      return -1;
    }
    if (lp.feasible) {
      if (gens_out != nullptr) {
        gens_out->clear();
        for (int lam = 0; lam < n_lambda; ++lam) {
          Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(2, 2);
          for (int g = 0; g < n_g; ++g)
            acc += lp.x(static_cast<Eigen::Index>(lam) * n_g + g) *
                   gens[static_cast<std::size_t>(g)].mat();
          gens_out->push_back(HermitianOperator(acc));
        }
      }
      return 1;
    }
    if (farkas_out != nullptr) *farkas_out = lp.farkas;
    return 0;
  };

  // Inscribed generators: feasibility proves unsteerability.
  std::vector<HermitianOperator> model;
  if (build_and_solve(true, &model, nullptr) == 1) {
    res.status = SteeringStatus::Unsteerable;
    res.model_states = std::move(model);
    res.detail = "local model over " + std::to_string(n_lambda) + " strategies";
    return res;
  }

  // Circumscribed generators: infeasibility proves steerability; the Farkas
  // vector becomes a steering inequality, re-verified before returning.
  Eigen::VectorXd y;
  if (build_and_solve(false, nullptr, &y) == 0 && y.size() > 0) {
    std::vector<HermitianOperator> ineq;
    for (int i = 0; i < static_cast<int>(family.size()); ++i) {
      Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(2, 2);
      for (int k = 0; k < b.rank(); ++k)
        acc += y(i * b.rank() + k) * basis_ops[static_cast<std::size_t>(k)].mat();
      ineq.push_back(HermitianOperator(acc));
    }
    const std::vector<HermitianOperator> outer = slice_generators(traceless, polygon, false);
    const auto strategy_scores = [&](double* attained_out) {
      double worst = 0.0;
      for (int lam = 0; lam < n_lambda; ++lam)
        for (const auto& g : outer) {
          double score = 0.0;
          for (int i = 0; i < static_cast<int>(family.size()); ++i) {
            const int x = i / n_a, out = i % n_a;
            if (strategy_response(lam, x, n_a) == out)
              score += hs_inner(ineq[static_cast<std::size_t>(i)], g);
          }
          worst = std::max(worst, score);
        }
      if (attained_out != nullptr) {
        *attained_out = 0.0;
        for (std::size_t i = 0; i < family.size(); ++i)
          *attained_out += hs_inner(ineq[i], family[i]);
      }
      return worst;
    };
    // The raw Farkas vector may carry solver noise in the strategy scores.
    // Shifting every operator by worst/n_x of the identity lowers every
    // strategy score by exactly `worst` (each strategy matches one outcome
    // per setting, and the generators have unit trace), so models provably
    // score <= 0 while the assemblage loses only `worst` of its value.
    const double raw_worst = strategy_scores(nullptr);
    if (raw_worst > 0.0) {
      const double shift = raw_worst / n_x;
      for (auto& f : ineq)
        f = HermitianOperator(f.mat() - shift * Eigen::MatrixXcd::Identity(2, 2));
    }
    double attained = 0.0;
    const double worst = strategy_scores(&attained);
    if (attained > tol::lp_farkas && worst <= tol::lp_farkas) {
      res.status = SteeringStatus::Steerable;
      res.inequality = std::move(ineq);
      res.violation = attained;
      res.detail = "steering inequality from the Farkas dual (model bound " + fmt(worst) + ")";
      return res;
    }
    res.detail = "Farkas dual failed re-verification";
    return res;
  }

  res.detail = "between the inscribed and circumscribed polygons";
  return res;
}

// --------------------------------------------------------------------------
// Multi-source decider
// --------------------------------------------------------------------------

namespace {

/** Riesz-recovered duals for LP weights q(lambda, .) against the family. */
std::optional<std::vector<HermitianOperator>> duals_from_weights(
    const OperatorSpan& v, const std::vector<HermitianOperator>& family,
    const Eigen::MatrixXd& q) {
  std::vector<HermitianOperator> duals;
  for (Eigen::Index lam = 0; lam < q.rows(); ++lam) {
    const RieszSolution sol = riesz_in_span(v, family, q.row(lam).transpose());
    if (sol.residual > 1e-7) return std::nullopt;
    duals.push_back(sol.op);
  }
  return duals;
}

}  // namespace

Verdict decide_multisource(const MultiSource& ms, const DecisionConfig& cfg) {
  validate(ms);
  Verdict out;

  const std::vector<int> pos = positive_branches(ms);
  std::vector<HermitianOperator> pos_states, pos_family;
  const std::vector<HermitianOperator> family_all = ms.family();
  for (int i : pos) {
    pos_states.push_back(ms.states[static_cast<std::size_t>(i)]);
    pos_family.push_back(family_all[static_cast<std::size_t>(i)]);
  }

  // Rule 1: linearly independent states (weights ignored) are classical.
  if (!pos_states.empty() && nullspace_coeffs(pos_states).empty()) {
    SourceCertificate cert{pos_states, dual_basis(pos_states)};
    const VerifyReport rep = verify_source_certificate(ms, cert, cfg.certificate_tolerance);
    if (rep.pass)
      return classical("li-states", "multi-source structure theorem (independent states)",
                       FrameCertificate(std::move(cert)), std::move(out.diagnostics));
    note(out, "li-states: certificate failed verification (worst ratio " +
                  fmt(rep.worst_ratio()) + ")");
  } else {
    note(out, "li-states: state family is linearly dependent");
  }

  // Rule 2: at most three distinct states are always classical.
  std::vector<int> rep_of;
  const std::vector<HermitianOperator> reps = merge_distinct(pos_states, &rep_of);
  if (!reps.empty() && reps.size() <= 3) {
    std::optional<SourceCertificate> cert;
    if (nullspace_coeffs(reps).empty()) {
      cert = SourceCertificate{reps, dual_basis(reps)};
    } else {
      // Three dependent unit-trace states are collinear; the middle one is a
      // convex combination of the outer two.
      for (std::size_t m = 0; m < reps.size() && !cert; ++m) {
        const std::size_t i = (m + 1) % 3, j = (m + 2) % 3;
        const HermitianOperator diff = reps[i] - reps[j];
        const double denom = hs_inner(diff, diff);
        if (denom < 1e-18) continue;
        const double t = hs_inner(reps[m] - reps[j], diff) / denom;
        if (t < -1e-10 || t > 1.0 + 1e-10) continue;
        const HermitianOperator recon =
            t * reps[i] + (1.0 - t) * reps[j];
        if ((recon - reps[m]).norm() > 1e-9) continue;
        std::vector<HermitianOperator> frame = {reps[i], reps[j]};
        cert = SourceCertificate{frame, dual_basis(frame)};
      }
    }
    if (cert) {
      const VerifyReport rep = verify_source_certificate(ms, *cert, cfg.certificate_tolerance);
      if (rep.pass)
        return classical("few-states",
                         "any source with at most three distinct states is classical",
                         FrameCertificate(std::move(*cert)), std::move(out.diagnostics));
      note(out, "few-states: certificate failed verification (worst ratio " +
                    fmt(rep.worst_ratio()) + ")");
    } else {
      note(out, "few-states: no convex middle state found");
    }
  } else {
    note(out, "few-states: " + std::to_string(reps.size()) + " distinct states");
  }

  // Rule 3: a dependent family of distinct pure states is nonclassical
  // (restriction to a subfamily preserves any classical model).
  {
    std::vector<HermitianOperator> pure;
    for (const auto& r : reps)
      if (is_pure(r)) pure.push_back(r);
    if (pure.size() >= 2) {
      const std::vector<Eigen::VectorXd> null = nullspace_coeffs(pure);
      if (!null.empty() && dependence_residual(pure, null.front()) <= kDependenceTol) {
        Witness w;
        w.rule = "pure-dependent";
        w.dependence = null.front();
        w.detail = std::to_string(pure.size()) +
                   " distinct pure states carry a linear dependence";
        return nonclassical("pure dependent state families are nonclassical", std::move(w),
                            std::move(out.diagnostics));
      }
    }
    note(out, "pure-dependent: no dependent family of distinct pure states");
  }

  // Rule 4: declared assemblages run the steering LP.
  if (ms.assemblage) {
    const SteeringResult sr = unsteerable_lp(ms, cfg);
    if (sr.status == SteeringStatus::Steerable) {
      Witness w;
      w.rule = "steerable";
      w.steering_inequality = sr.inequality;
      w.steering_violation = sr.violation;
      w.detail = sr.detail;
      return nonclassical("steerable assemblages are nonclassical", std::move(w),
                          std::move(out.diagnostics));
    }
    note(out, std::string("steerable: ") +
                  (sr.status == SteeringStatus::Unsteerable ? "local model found; " : "unknown; ") +
                  sr.detail);
  }

  // Rule 5: fixed-frame searches over the library.
  const std::vector<std::string> frame_ids =
      cfg.state_frames.empty() ? frames::default_state_frames(ms.dim) : cfg.state_frames;
  const OperatorSpan v = span_of(family_all);
  const std::vector<Eigen::VectorXd> family_null = nullspace_coeffs(pos_family);
  for (const std::string& id : frame_ids) {
    std::vector<HermitianOperator> frame;
    try {
      frame = frames::state_frame(id, ms.dim, cfg.seed);
    } catch (const FrameError& err) {
      note(out, "fixed-frame " + id + ": " + err.what());
      continue;
    }
    const OperatorSpan fspan = span_of(frame);
    bool contained = true;
    for (const auto& f : pos_family)
      if (!fspan.contains(f, 1e-9 * std::max(1.0, f.norm()))) {
        contained = false;
        break;
      }
    if (!contained) {
      note(out, "fixed-frame " + id + ": family leaves the frame span");
      continue;
    }
    const int n_l = static_cast<int>(frame.size());
    const int n_b = static_cast<int>(pos_family.size());
    // Least-norm weights first; they already respect every identity.
    Eigen::MatrixXd q(n_l, n_b);
    {
      const std::vector<HermitianOperator> duals = canonical_dual_frame(frame);
      for (int lam = 0; lam < n_l; ++lam)
        for (int i = 0; i < n_b; ++i)
          q(lam, i) = hs_inner(duals[static_cast<std::size_t>(lam)],
                               pos_family[static_cast<std::size_t>(i)]);
    }
    bool have_weights = q.minCoeff() >= -1e-10;
    if (have_weights) {
      q = q.cwiseMax(0.0);
    } else {
      // Vertex search: reconstruction rows plus identity-respecting rows.
      const std::vector<HermitianOperator> basis = hermitian_basis(ms.dim);
      const int d2 = static_cast<int>(basis.size());
      const Eigen::Index rows =
          static_cast<Eigen::Index>(n_b) * d2 +
          static_cast<Eigen::Index>(family_null.size()) * n_l;
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(n_l) * n_b);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
      for (int i = 0; i < n_b; ++i)
        for (int k = 0; k < d2; ++k) {
          const Eigen::Index r = static_cast<Eigen::Index>(i) * d2 + k;
          rhs(r) = hs_inner(basis[static_cast<std::size_t>(k)],
                            pos_family[static_cast<std::size_t>(i)]);
          for (int lam = 0; lam < n_l; ++lam)
            a(r, static_cast<Eigen::Index>(lam) * n_b + i) =
                hs_inner(basis[static_cast<std::size_t>(k)], frame[static_cast<std::size_t>(lam)]);
        }
      Eigen::Index r0 = static_cast<Eigen::Index>(n_b) * d2;
      for (const auto& beta : family_null) {
        for (int lam = 0; lam < n_l; ++lam) {
          for (int i = 0; i < n_b; ++i)
            a(r0, static_cast<Eigen::Index>(lam) * n_b + i) = beta(i);
          ++r0;
        }
      }
      LpResult lp;
      bool solved = true;
      try {
        lp = solve_nonnegative(a, rhs);
      } catch (const std::runtime_error& ex) {
        solved = false;
        note(out, "fixed-frame " + id + ": " + ex.what());
      }
      if (solved && lp.feasible) {
        for (int lam = 0; lam < n_l; ++lam)
          for (int i = 0; i < n_b; ++i)
            q(lam, i) = lp.x(static_cast<Eigen::Index>(lam) * n_b + i);
        have_weights = true;
      } else if (solved) {
        note(out, "fixed-frame " + id + ": LP infeasible (phase-one optimum " +
                      fmt(lp.residual) + ")");
      }
    }
    if (!have_weights) continue;
    const auto duals = duals_from_weights(v, pos_family, q);
    if (!duals) {
      note(out, "fixed-frame " + id + ": dual recovery failed");
      continue;
    }
    SourceCertificate cert{frame, *duals};
    const VerifyReport rep = verify_source_certificate(ms, cert, cfg.certificate_tolerance);
    if (rep.pass) {
      Verdict verdictv = classical("fixed-frame",
                                   "multi-source structure theorem (fixed-frame model)",
                                   FrameCertificate(std::move(cert)), std::move(out.diagnostics));
      note(verdictv, "fixed-frame: " + id + " frame admits nonnegative weights");
      return verdictv;
    }
    note(out, "fixed-frame " + id + ": certificate failed verification (worst ratio " +
                  fmt(rep.worst_ratio()) + ")");
  }

  out.tag = Tag::Inconclusive;
  out.theorem = "no decisive rule";
  return out;
}

// --------------------------------------------------------------------------
// Multi-measurement decider
// --------------------------------------------------------------------------

namespace {

/** Joint-measurability constraints over the product outcome lattice. */
PsdProblem joint_parent_problem(const MultiMeasurement& mm, int n_lambda) {
  PsdProblem prob;
  prob.dims.assign(static_cast<std::size_t>(n_lambda), mm.dim);
  const std::vector<HermitianOperator> basis = hermitian_basis(mm.dim);
  std::vector<double> rhs;
  for (int y = 0; y < mm.n_settings; ++y)
    for (int bo = 0; bo < mm.n_outcomes; ++bo)
      for (const auto& e : basis) {
        std::vector<HermitianOperator> row;
        row.reserve(static_cast<std::size_t>(n_lambda));
        for (int lam = 0; lam < n_lambda; ++lam)
          row.push_back(strategy_response(lam, y, mm.n_outcomes) == bo
                            ? e
                            : HermitianOperator::zero(mm.dim));
        prob.rows.push_back(std::move(row));
        rhs.push_back(hs_inner(e, mm.effects[static_cast<std::size_t>(mm.index(y, bo))]));
      }
  prob.rhs = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  return prob;
}

/** Measurement certificate from a parent candidate, or nullopt. */
std::optional<MeasurementCertificate> parent_certificate(
    const MultiMeasurement& mm, const std::vector<HermitianOperator>& parent_in,
    const std::vector<std::vector<double>>& weights) {
  // Drop negligible parent elements together with their weight rows.
  std::vector<HermitianOperator> parent;
  std::vector<std::vector<double>> q;
  for (std::size_t l = 0; l < parent_in.size(); ++l)
    if (parent_in[l].trace() > 1e-9) {
      parent.push_back(parent_in[l]);
      q.push_back(weights[l]);
    }
  if (parent.empty()) return std::nullopt;
  const OperatorSpan span = span_of(mm.effects);
  std::vector<HermitianOperator> duals;
  for (std::size_t l = 0; l < parent.size(); ++l) {
    const Eigen::VectorXd values =
        Eigen::Map<const Eigen::VectorXd>(q[l].data(), static_cast<Eigen::Index>(q[l].size()));
    const RieszSolution sol = riesz_in_span(span, mm.effects, values);
    if (sol.residual > 1e-7) return std::nullopt;
    duals.push_back(sol.op);
  }
  return MeasurementCertificate{std::move(parent), std::move(duals)};
}

}  // namespace

Verdict decide_multimeasurement(const MultiMeasurement& mm, const DecisionConfig& cfg) {
  validate(mm);
  Verdict out;

  // Rule 1: a single measurement with rank-one effects is classical exactly
  // when the distinct effect rays are linearly independent.  Effects sharing a
  // ray merge into one parent element that classical post-processing splits,
  // so proportional copies never witness nonclassicality on their own.
  if (mm.n_settings == 1) {
    std::vector<HermitianOperator> rays;  // unit-trace projectors of the nonzero effects
    std::vector<double> scale;            // trace of each nonzero effect
    std::vector<std::size_t> nz_index;
    bool all_rank_one = true;
    for (std::size_t b = 0; b < mm.effects.size(); ++b) {
      const double tr = mm.effects[b].trace();
      if (tr <= 1e-12) continue;
      if (!is_rank_one(mm.effects[b])) {
        all_rank_one = false;
        break;
      }
      rays.push_back((1.0 / tr) * mm.effects[b]);
      scale.push_back(tr);
      nz_index.push_back(b);
    }
    if (all_rank_one && !rays.empty()) {
      std::vector<int> ray_of;
      const std::vector<HermitianOperator> reps = merge_distinct(rays, &ray_of);
      std::vector<double> ray_weight(reps.size(), 0.0);
      for (std::size_t i = 0; i < rays.size(); ++i)
        ray_weight[static_cast<std::size_t>(ray_of[i])] += scale[i];
      const std::vector<Eigen::VectorXd> null = nullspace_coeffs(reps);
      if (null.empty()) {
        std::vector<HermitianOperator> parent;
        parent.reserve(reps.size());
        for (std::size_t r = 0; r < reps.size(); ++r)
          parent.push_back(ray_weight[r] * reps[r]);
        std::vector<std::vector<double>> q(reps.size(),
                                           std::vector<double>(mm.effects.size(), 0.0));
        for (std::size_t i = 0; i < rays.size(); ++i) {
          const auto r = static_cast<std::size_t>(ray_of[i]);
          q[r][nz_index[i]] = scale[i] / ray_weight[r];
        }
        std::optional<MeasurementCertificate> cert = parent_certificate(mm, parent, q);
        if (cert.has_value()) {
          const VerifyReport rep =
              verify_measurement_certificate(mm, *cert, cfg.certificate_tolerance);
          if (rep.pass)
            return classical("rank1-li",
                             "multi-measurement structure theorem (independent rank-one effects)",
                             FrameCertificate(std::move(*cert)), std::move(out.diagnostics));
          note(out, "rank1-li: certificate failed verification (worst ratio " +
                        fmt(rep.worst_ratio()) + ")");
        } else {
          note(out, "rank1-li: dual recovery failed for the ray parent");
        }
      } else if (dependence_residual(reps, null.front()) <= kDependenceTol) {
        Witness w;
        w.rule = "rank1-dependent";
        w.dependence = null.front();
        w.detail =
            std::to_string(reps.size()) + " distinct effect rays carry a linear dependence";
        return nonclassical("dependent rank-one effects are nonclassical", std::move(w),
                            std::move(out.diagnostics));
      }
    } else if (!all_rank_one) {
      note(out, "rank1: effects are not all rank-one");
    }
  }

  // Rule 2: joint measurability through the PSD feasibility search.
  if (mm.n_settings >= 2) {
    const double lattice = std::pow(static_cast<double>(mm.n_outcomes), mm.n_settings);
    if (lattice <= kMaxParentOutcomes) {
      const int n_lambda = static_cast<int>(lattice);
      const PsdProblem prob = joint_parent_problem(mm, n_lambda);
      const PsdResult pr = psd_feasible(prob, cfg.psd_iterations);
      if (pr.status == PsdStatus::Infeasible) {
        bool blocks_ok = true;
        for (const auto& blk : pr.separator)
          if (blk.eig_min() < -tol::psd_floor) blocks_ok = false;
        if (blocks_ok && pr.margin >= tol::psd_margin) {
          Witness w;
          w.rule = "incompatible";
          w.separator = pr.separator;
          w.margin = pr.margin;
          w.detail = "no joint parent: separating functional with margin " + fmt(pr.margin);
          return nonclassical("incompatible multi-measurements are nonclassical", std::move(w),
                              std::move(out.diagnostics));
        }
        note(out, "incompatible: separator failed re-verification");
      } else if (pr.status == PsdStatus::Feasible) {
        // Exact-sum polish, then certificate recovery from the parent.
        std::vector<HermitianOperator> parent = pr.point;
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(mm.dim, mm.dim);
        double total_tr = 0.0;
        for (const auto& g : parent) {
          sum += g.mat();
          total_tr += g.trace();
        }
        if (total_tr > 1e-12) {
          const Eigen::MatrixXcd defect =
              Eigen::MatrixXcd::Identity(mm.dim, mm.dim) - sum;
          for (auto& g : parent) {
            const double wgt = g.trace() / total_tr;
            g = HermitianOperator(g.mat() + wgt * defect);
          }
        }
        std::vector<std::vector<double>> weights(parent.size());
        for (int lam = 0; lam < n_lambda; ++lam) {
          std::vector<double>& row = weights[static_cast<std::size_t>(lam)];
          for (int y = 0; y < mm.n_settings; ++y)
            for (int bo = 0; bo < mm.n_outcomes; ++bo)
              row.push_back(strategy_response(lam, y, mm.n_outcomes) == bo ? 1.0 : 0.0);
        }
        auto cert = parent_certificate(mm, parent, weights);
        if (cert) {
          const VerifyReport rep =
              verify_measurement_certificate(mm, *cert, cfg.certificate_tolerance);
          if (rep.pass)
            return classical("joint-parent", "multi-measurement structure theorem (joint parent)",
                             FrameCertificate(std::move(*cert)), std::move(out.diagnostics));
          note(out, "joint-parent: certificate failed verification (worst ratio " +
                        fmt(rep.worst_ratio()) + ")");
        } else {
          note(out, "joint-parent: dual recovery failed");
        }
      } else {
        note(out, "incompatible: search inconclusive (" + pr.detail + ")");
      }
    } else {
      note(out, "incompatible: parent lattice too large (" + fmt(lattice) + " outcomes)");
    }
  }

  // Rule 3: fixed parents from the library.
  const std::vector<std::string> parent_ids =
      cfg.parent_povms.empty() ? frames::default_parent_povms(mm.dim) : cfg.parent_povms;
  const std::vector<Eigen::VectorXd> effect_null = nullspace_coeffs(mm.effects);
  for (const std::string& id : parent_ids) {
    std::vector<HermitianOperator> parent;
    try {
      parent = frames::parent_povm(id, mm.dim);
    } catch (const FrameError& err) {
      note(out, "fixed-parent " + id + ": " + err.what());
      continue;
    }
    const OperatorSpan pspan = span_of(parent);
    bool contained = true;
    for (const auto& e : mm.effects)
      if (!pspan.contains(e, 1e-9 * std::max(1.0, e.norm()))) {
        contained = false;
        break;
      }
    if (!contained) {
      note(out, "fixed-parent " + id + ": effects leave the parent span");
      continue;
    }
    const int n_l = static_cast<int>(parent.size());
    const int n_by = mm.size();
    const std::vector<HermitianOperator> basis = hermitian_basis(mm.dim);
    const int d2 = static_cast<int>(basis.size());
    const Eigen::Index rows = static_cast<Eigen::Index>(n_by) * d2 +
                              static_cast<Eigen::Index>(mm.n_settings) * n_l +
                              static_cast<Eigen::Index>(effect_null.size()) * n_l;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, static_cast<Eigen::Index>(n_by) * n_l);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows);
    // (i) reconstruction rows.
    for (int i = 0; i < n_by; ++i)
      for (int k = 0; k < d2; ++k) {
        const Eigen::Index r = static_cast<Eigen::Index>(i) * d2 + k;
        rhs(r) = hs_inner(basis[static_cast<std::size_t>(k)],
                          mm.effects[static_cast<std::size_t>(i)]);
        for (int lam = 0; lam < n_l; ++lam)
          a(r, static_cast<Eigen::Index>(i) * n_l + lam) =
              hs_inner(basis[static_cast<std::size_t>(k)], parent[static_cast<std::size_t>(lam)]);
      }
    // (ii) normalization rows: sum_b q(b|y,lambda) = 1.
    Eigen::Index r0 = static_cast<Eigen::Index>(n_by) * d2;
    for (int y = 0; y < mm.n_settings; ++y)
      for (int lam = 0; lam < n_l; ++lam) {
        for (int bo = 0; bo < mm.n_outcomes; ++bo)
          a(r0, static_cast<Eigen::Index>(mm.index(y, bo)) * n_l + lam) = 1.0;
        rhs(r0) = 1.0;
        ++r0;
      }
    // (iii) identity-respecting rows.
    for (const auto& beta : effect_null)
      for (int lam = 0; lam < n_l; ++lam) {
        for (int i = 0; i < n_by; ++i)
          a(r0, static_cast<Eigen::Index>(i) * n_l + lam) = beta(i);
        ++r0;
      }
    LpResult lp;
    try {
      lp = solve_nonnegative(a, rhs);
    } catch (const std::runtime_error& ex) {
      note(out, "fixed-parent " + id + ": " + std::string(ex.what()));
      continue;
    }
    if (!lp.feasible) {
      note(out, "fixed-parent " + id + ": LP infeasible (phase-one optimum " + fmt(lp.residual) +
                    ")");
      continue;
    }
    std::vector<std::vector<double>> weights(static_cast<std::size_t>(n_l));
    for (int lam = 0; lam < n_l; ++lam)
      for (int i = 0; i < n_by; ++i)
        weights[static_cast<std::size_t>(lam)].push_back(
            lp.x(static_cast<Eigen::Index>(i) * n_l + lam));
    auto cert = parent_certificate(mm, parent, weights);
    if (!cert) {
      note(out, "fixed-parent " + id + ": dual recovery failed");
      continue;
    }
    const VerifyReport rep = verify_measurement_certificate(mm, *cert, cfg.certificate_tolerance);
    if (rep.pass) {
      Verdict verdictv = classical("fixed-parent",
                                   "multi-measurement structure theorem (fixed parent model)",
                                   FrameCertificate(std::move(*cert)), std::move(out.diagnostics));
      note(verdictv, "fixed-parent: " + id + " parent admits a valid post-processing");
      return verdictv;
    }
    note(out, "fixed-parent " + id + ": certificate failed verification (worst ratio " +
                  fmt(rep.worst_ratio()) + ")");
  }

  out.tag = Tag::Inconclusive;
  out.theorem = "no decisive rule";
  return out;
}

// --------------------------------------------------------------------------
// State deciders
// --------------------------------------------------------------------------

namespace {

/** Singleton-frame certificate sides for an exact product state. */
BipartiteCertificate product_certificate(const std::vector<HermitianOperator>& factors) {
  BipartiteCertificate cert;
  for (const auto& f : factors) {
    SideFrames side;
    side.frame = {f};
    side.dual = {(1.0 / hs_inner(f, f)) * f};
    cert.sides.push_back(std::move(side));
  }
  return cert;
}

/** Reduced state on one wire. */
HermitianOperator reduced_state(const MultipartiteState& mp, int wire) {
  std::vector<bool> keep(mp.dims.size(), false);
  keep[static_cast<std::size_t>(wire)] = true;
  return partial_trace(mp.rho, mp.dims, keep);
}

/**
 * Classical-quantum split of a two-wire state along a candidate basis on
 * `side` (0 or 1): requires the state to be invariant under dephasing in
 * that basis and the conditional states to be independent.
 */
std::optional<BipartiteCertificate> cq_certificate(const MultipartiteState& mp, int side,
                                                   const Eigen::MatrixXcd& basis_cols) {
  const int ds = mp.dims[static_cast<std::size_t>(side)];
  const int dother = mp.dims[static_cast<std::size_t>(1 - side)];
  // Dephase in the candidate basis and compare.
  Eigen::MatrixXcd dephased = Eigen::MatrixXcd::Zero(ds * dother, ds * dother);
  std::vector<HermitianOperator> flags;
  for (int k = 0; k < ds; ++k) {
    const Eigen::VectorXcd col = basis_cols.col(k);
    const HermitianOperator pk(col * col.adjoint());
    flags.push_back(pk);
    const HermitianOperator proj =
        (side == 0) ? kron(pk, HermitianOperator::identity(dother))
                    : kron(HermitianOperator::identity(dother), pk);
    dephased += proj.mat() * mp.rho.mat() * proj.mat();
  }
  if ((dephased - mp.rho.mat()).norm() > 1e-9) return std::nullopt;
  // Conditional states on the other wire.
  std::vector<HermitianOperator> kept_flags, conds;
  for (int k = 0; k < ds; ++k) {
    const HermitianOperator proj =
        (side == 0) ? kron(flags[static_cast<std::size_t>(k)], HermitianOperator::identity(dother))
                    : kron(HermitianOperator::identity(dother), flags[static_cast<std::size_t>(k)]);
    const HermitianOperator branch(proj.mat() * mp.rho.mat() * proj.mat());
    std::vector<bool> keep(2, false);
    keep[static_cast<std::size_t>(1 - side)] = true;
    const HermitianOperator tau = partial_trace(branch, mp.dims, keep);
    const double p = tau.trace();
    if (p <= kZeroProb) continue;
    kept_flags.push_back(flags[static_cast<std::size_t>(k)]);
    conds.push_back((1.0 / p) * tau);
  }
  std::vector<int> rep_of;
  const std::vector<HermitianOperator> dis = merge_distinct(conds, &rep_of);
  if (!nullspace_coeffs(dis).empty()) return std::nullopt;
  BipartiteCertificate cert;
  SideFrames flag_side{kept_flags, kept_flags};
  SideFrames cond_side{dis, dual_basis(dis)};
  if (side == 0) {
    cert.sides.push_back(std::move(flag_side));
    cert.sides.push_back(std::move(cond_side));
  } else {
    cert.sides.push_back(std::move(cond_side));
    cert.sides.push_back(std::move(flag_side));
  }
  return cert;
}

/** One product decomposition rho = sum_k w_k |u_k v_k><u_k v_k|. */
struct ProductDecomposition {
  std::vector<Eigen::VectorXcd> left, right;
  std::vector<double> weights;
};

/** Best product vector of a PSD residual by alternating power iterations. */
double best_product_vector(const HermitianOperator& r, int d1, int d2, std::mt19937_64& rng,
                           Eigen::VectorXcd* u_out, Eigen::VectorXcd* v_out) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double best = -1.0;
  for (int restart = 0; restart < 4; ++restart) {
    Eigen::VectorXcd u(d1), v(d2);
    for (int i = 0; i < d1; ++i) u(i) = cdouble(gauss(rng), gauss(rng));
    for (int j = 0; j < d2; ++j) v(j) = cdouble(gauss(rng), gauss(rng));
    u.normalize();
    v.normalize();
    for (int round = 0; round < 25; ++round) {
      // M_u = (1 (x) v)^dag R (1 (x) v), then top eigenvector, and swap.
      Eigen::MatrixXcd mu = Eigen::MatrixXcd::Zero(d1, d1);
      for (int i = 0; i < d1; ++i)
        for (int ip = 0; ip < d1; ++ip) {
          cdouble acc = 0.0;
          for (int j = 0; j < d2; ++j)
            for (int jp = 0; jp < d2; ++jp)
              acc += std::conj(v(j)) * r.mat()(i * d2 + j, ip * d2 + jp) * v(jp);
          mu(i, ip) = acc;
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esu(0.5 * (mu + mu.adjoint()));
      u = esu.eigenvectors().col(d1 - 1);
      Eigen::MatrixXcd mv = Eigen::MatrixXcd::Zero(d2, d2);
      for (int j = 0; j < d2; ++j)
        for (int jp = 0; jp < d2; ++jp) {
          cdouble acc = 0.0;
          for (int i = 0; i < d1; ++i)
            for (int ip = 0; ip < d1; ++ip)
              acc += std::conj(u(i)) * r.mat()(i * d2 + j, ip * d2 + jp) * u(ip);
          mv(j, jp) = acc;
        }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esv(0.5 * (mv + mv.adjoint()));
      v = esv.eigenvectors().col(d2 - 1);
    }
    Eigen::VectorXcd uv(d1 * d2);
    for (int i = 0; i < d1; ++i) uv.segment(i * d2, d2) = u(i) * v;
    const double val = std::real(uv.dot(r.mat() * uv));
    if (val > best) {
      best = val;
      if (u_out != nullptr) *u_out = u;
      if (v_out != nullptr) *v_out = v;
    }
  }
  return best;
}

/**
 * Polishes a product vector into the range of R by alternating the range
 * projection with the closest-product truncation (top singular pair).
 */
void polish_product_vector(const Eigen::MatrixXcd& range_cols, int d1, int d2,
                           Eigen::VectorXcd& u, Eigen::VectorXcd& v) {
  Eigen::VectorXcd w(d1 * d2);
  for (int i = 0; i < d1; ++i) w.segment(i * d2, d2) = u(i) * v;
  for (int round = 0; round < 60; ++round) {
    Eigen::VectorXcd proj = range_cols * (range_cols.adjoint() * w);
    if (proj.norm() < 1e-12) return;
    proj.normalize();
    Eigen::MatrixXcd m(d1, d2);
    for (int i = 0; i < d1; ++i) m.row(i) = proj.segment(i * d2, d2).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXcd nu = svd.matrixU().col(0);
    const Eigen::VectorXcd nv = svd.matrixV().col(0).conjugate();
    Eigen::VectorXcd next(d1 * d2);
    for (int i = 0; i < d1; ++i) next.segment(i * d2, d2) = nu(i) * nv;
    const double step = (next - w).norm();
    u = nu;
    v = nv;
    w = next;
    if (step < 1e-14) break;
  }
}

/** Greedy PSD peeling of a two-wire state into product terms. */
std::optional<ProductDecomposition> peel_product_decomposition(const HermitianOperator& rho,
                                                               int d1, int d2,
                                                               std::mt19937_64& rng,
                                                               int attempts) {
  for (int attempt = 0; attempt < attempts; ++attempt) {
    HermitianOperator r = rho;
    ProductDecomposition dec;
    bool failed = false;
    const int max_terms = 3 * d1 * d1 * d2 * d2;
    for (int term = 0; term < max_terms && r.norm() > 1e-10; ++term) {
      Eigen::VectorXcd u, v;
      const double val = best_product_vector(r, d1, d2, rng, &u, &v);
      if (val <= 1e-10) {
        failed = true;
        break;
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r.mat());
      int rank = 0;
      for (int k = 0; k < d1 * d2; ++k)
        if (es.eigenvalues()(k) > 1e-11) ++rank;
      const Eigen::MatrixXcd range_cols = es.eigenvectors().rightCols(rank);
      polish_product_vector(range_cols, d1, d2, u, v);
      Eigen::VectorXcd uv(d1 * d2);
      for (int i = 0; i < d1; ++i) uv.segment(i * d2, d2) = u(i) * v;
      // Largest weight keeping the residual PSD: 1/<uv|R^+|uv>.
      double pinv = 0.0;
      double outside = 0.0;
      for (int k = 0; k < d1 * d2; ++k) {
        const double ev = es.eigenvalues()(k);
        const double amp = std::norm(es.eigenvectors().col(k).dot(uv));
        if (ev > 1e-11)
          pinv += amp / ev;
        else
          outside += amp;
      }
      if (outside > 1e-9 || pinv <= 0.0) {
        failed = true;
        break;
      }
      double t = 1.0 / pinv;
      HermitianOperator cand(r.mat() - t * (uv * uv.adjoint()));
      int halvings = 0;
      while (cand.eig_min() < -1e-11 && halvings < 6) {
        t *= 0.5;
        cand = HermitianOperator(r.mat() - t * (uv * uv.adjoint()));
        ++halvings;
      }
      if (cand.eig_min() < -1e-11) {
        failed = true;
        break;
      }
      r = cand;
      dec.left.push_back(u);
      dec.right.push_back(v);
      dec.weights.push_back(t);
    }
    if (!failed && r.norm() <= 1e-10) return dec;
  }
  return std::nullopt;
}

/** Randomized separable peeling for a two-wire state. */
std::optional<BipartiteCertificate> peeling_certificate(const MultipartiteState& mp,
                                                        const DecisionConfig& cfg) {
  const int d1 = mp.dims[0], d2 = mp.dims[1];
  std::mt19937_64 rng(cfg.seed ^ 0x5eedc0deULL);
  const auto dec =
      peel_product_decomposition(mp.rho, d1, d2, rng, std::max(0, cfg.search_trials / 50));
  if (!dec) return std::nullopt;
  std::vector<HermitianOperator> left, right;
  for (std::size_t k = 0; k < dec->left.size(); ++k) {
    left.push_back(HermitianOperator(dec->left[k] * dec->left[k].adjoint()));
    right.push_back(HermitianOperator(dec->right[k] * dec->right[k].adjoint()));
  }
  const std::vector<HermitianOperator> reps1 = merge_distinct(left, nullptr);
  const std::vector<HermitianOperator> reps2 = merge_distinct(right, nullptr);
  if (!nullspace_coeffs(reps1).empty() || !nullspace_coeffs(reps2).empty()) return std::nullopt;
  BipartiteCertificate cert;
  cert.sides.push_back({reps1, dual_basis(reps1)});
  cert.sides.push_back({reps2, dual_basis(reps2)});
  return cert;
}

/**
 * Discrimination probe for a list of kets: the reciprocal rank-one POVM
 * whose outcome k responds only to ket k, padded with a remainder effect.
 */
std::optional<MultiMeasurement> discrimination_probe(const std::vector<Eigen::VectorXcd>& kets,
                                                     int dim) {
  std::vector<Eigen::VectorXcd> uniq;
  for (const auto& w : kets) {
    bool dup = false;
    for (const auto& u : uniq)
      if (std::norm(u.dot(w)) > 1.0 - 1e-8) dup = true;
    if (!dup) uniq.push_back(w);
  }
  const int r = static_cast<int>(uniq.size());
  if (r < 2 || r > dim) return std::nullopt;
  Eigen::MatrixXcd basis(dim, r);
  for (int k = 0; k < r; ++k) basis.col(k) = uniq[static_cast<std::size_t>(k)];
  const Eigen::MatrixXcd gram = basis.adjoint() * basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gs(gram);
  if (gs.eigenvalues()(0) < 1e-8) return std::nullopt;
  const Eigen::MatrixXcd duals = basis * gram.inverse();
  const Eigen::MatrixXcd s = duals * duals.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ss(s);
  const double scale = ss.eigenvalues()(dim - 1);
  if (scale <= 0.0) return std::nullopt;
  MultiMeasurement mm;
  mm.dim = dim;
  mm.n_settings = 1;
  mm.n_outcomes = r + 1;
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (int k = 0; k < r; ++k) {
    const Eigen::MatrixXcd e = (duals.col(k) * duals.col(k).adjoint()) / scale;
    sum += e;
    mm.effects.push_back(HermitianOperator(e));
  }
  mm.effects.push_back(HermitianOperator(Eigen::MatrixXcd::Identity(dim, dim) - sum));
  return mm;
}

/** Verified separable-decomposition certificate, or nullopt. */
std::optional<BipartiteCertificate> separable_search(const MultipartiteState& mp,
                                                     const DecisionConfig& cfg,
                                                     Verdict& scratch) {
  const int n = static_cast<int>(mp.dims.size());
  // (a) exact product shortcut.
  {
    std::vector<HermitianOperator> factors;
    for (int i = 0; i < n; ++i) factors.push_back(reduced_state(mp, i));
    HermitianOperator prod = factors[0];
    for (int i = 1; i < n; ++i) prod = kron(prod, factors[static_cast<std::size_t>(i)]);
    if ((prod.mat() - mp.rho.mat()).norm() <= 1e-9) {
      BipartiteCertificate cert = product_certificate(factors);
      if (verify_bipartite_certificate(mp, cert, cfg.certificate_tolerance).pass) {
        note(scratch, "separable-decomposition: exact product state");
        return cert;
      }
    }
  }
  if (n != 2) {
    note(scratch, "separable-decomposition: search limited to products beyond two wires");
    return std::nullopt;
  }
  // (b) classical-quantum splits along eigen- or computational bases.
  for (int side = 0; side < 2; ++side) {
    const int ds = mp.dims[static_cast<std::size_t>(side)];
    const HermitianOperator red = reduced_state(mp, side);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(red.mat());
    for (int variant = 0; variant < 2; ++variant) {
      const Eigen::MatrixXcd cols = (variant == 0)
                                        ? Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(ds, ds))
                                        : Eigen::MatrixXcd(es.eigenvectors());
      auto cert = cq_certificate(mp, side, cols);
      if (cert && verify_bipartite_certificate(mp, *cert, cfg.certificate_tolerance).pass) {
        note(scratch, "separable-decomposition: classical-quantum split on wire " +
                          std::to_string(side + 1));
        return cert;
      }
    }
  }
  // (c) randomized peeling.
  auto cert = peeling_certificate(mp, cfg);
  if (cert && verify_bipartite_certificate(mp, *cert, cfg.certificate_tolerance).pass) {
    note(scratch, "separable-decomposition: randomized peeling succeeded");
    return cert;
  }
  note(scratch, "separable-decomposition: no verified decomposition found");
  return std::nullopt;
}

Verdict core_state(const MultipartiteState& mp, const DecisionConfig& cfg) {
  Verdict out;
  const int n = static_cast<int>(mp.dims.size());

  if (n == 1) {
    // A single system is always classical: its own normalized state is a
    // one-element frame.
    BipartiteCertificate cert = product_certificate({mp.rho});
    if (verify_bipartite_certificate(mp, cert, cfg.certificate_tolerance).pass)
      return classical("single-factor", "single-wire states are classical",
                       FrameCertificate(std::move(cert)), std::move(out.diagnostics));
    note(out, "single-factor: certificate failed verification");
    out.tag = Tag::Inconclusive;
    return out;
  }

  // Rule 1: NPT across any bipartition.
  double worst_pt = 0.0;
  for (int mask = 1; mask < (1 << n) - 1; ++mask) {
    if ((mask & 1) == 0) continue;  // each cut once, wire 1 untransposed side
    std::vector<bool> transpose(static_cast<std::size_t>(n), false);
    std::vector<int> side;
    for (int i = 0; i < n; ++i)
      if ((mask & (1 << i)) == 0) {
        transpose[static_cast<std::size_t>(i)] = true;
        side.push_back(i + 1);
      }
    const double eig = partial_transpose(mp.rho, mp.dims, transpose).eig_min();
    worst_pt = std::min(worst_pt, eig);
    if (eig < -tol::psd_floor) {
      Witness w;
      w.rule = "npt";
      w.npt_eigenvalue = eig;
      w.bipartition = side;
      w.detail = "partial transpose has eigenvalue " + fmt(eig);
      return nonclassical("entangled states are nonclassical (NPT criterion)", std::move(w),
                          std::move(out.diagnostics));
    }
  }
  note(out, "npt: every partial transpose is positive (worst eigenvalue " + fmt(worst_pt) + ")");

  // Rule 2: qubit-qubit / qubit-qutrit PPT states are classical.
  if (n == 2) {
    const int lo = std::min(mp.dims[0], mp.dims[1]);
    const int hi = std::max(mp.dims[0], mp.dims[1]);
    if (lo == 2 && hi <= 3) {
      auto cert = separable_search(mp, cfg, out);
      Verdict v;
      v.tag = Tag::Classical;
      v.rule = "ppt-low-dim";
      v.theorem = "PPT states of 2x2 and 2x3 systems are classical";
      v.diagnostics = std::move(out.diagnostics);
      if (cert) {
        v.certificate = FrameCertificate(std::move(*cert));
      } else {
        v.certificate_omitted = true;
        note(v, "ppt-low-dim: classicality holds by the theorem; certificate omitted");
      }
      return v;
    }
  }

  // Rule 3: steering probes feed the multi-source decider.
  for (int i = 0; i < n; ++i) {
    const int di = mp.dims[static_cast<std::size_t>(i)];
    for (const std::string& id : probe_ids(cfg, di)) {
      MultiMeasurement probe;
      try {
        probe = frames::probe_measurement(id, di);
      } catch (const FrameError&) {
        continue;
      }
      const MultiSource steered = steer(merged_view(mp, {i}), probe, 1);
      const Verdict inner = decide_multisource(steered, probe_config(cfg));
      if (inner.tag == Tag::Nonclassical) {
        Witness w;
        w.rule = "steering-probe";
        w.probe = id + "@wire" + std::to_string(i + 1);
        w.inner_rule = inner.rule;
        w.detail = "measuring wire " + std::to_string(i + 1) + " with " + id +
                   " steers a nonclassical ensemble (" + inner.rule + ")";
        if (inner.witness) w.dependence = inner.witness->dependence;
        return nonclassical("local measurements on a classical state steer classical ensembles",
                            std::move(w), std::move(out.diagnostics));
      }
    }
  }
  if (n >= 3) {
    // Decomposition-adapted probes first (cheap): peel the pair view into
    // product terms and discriminate the pair-side kets. Soundness does not
    // depend on how the probe was found; only the steered verdict matters.
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const BipartiteState view = merged_view(mp, {i, j});
        std::mt19937_64 rng(cfg.seed ^ (0x9e3779b97f4a7c15ULL * (16 * i + j + 1)));
        const auto dec = peel_product_decomposition(view.rho, view.d1, view.d2, rng,
                                                    std::max(0, cfg.search_trials / 50));
        if (!dec) continue;
        const auto probe = discrimination_probe(dec->left, view.d1);
        if (!probe) continue;
        const MultiSource steered = steer(view, *probe, 1);
        const Verdict inner = decide_multisource(steered, probe_config(cfg));
        if (inner.tag == Tag::Nonclassical) {
          Witness w;
          w.rule = "steering-probe";
          w.probe = "adapted@wires" + std::to_string(i + 1) + std::to_string(j + 1);
          w.inner_rule = inner.rule;
          w.detail = "discriminating the wire " + std::to_string(i + 1) + "," +
                     std::to_string(j + 1) + " product factors steers a nonclassical ensemble (" +
                     inner.rule + ")";
          if (inner.witness) w.dependence = inner.witness->dependence;
          return nonclassical(
              "local measurements on a classical state steer classical ensembles",
              std::move(w), std::move(out.diagnostics));
        }
      }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const int di = mp.dims[static_cast<std::size_t>(i)];
        const int dj = mp.dims[static_cast<std::size_t>(j)];
        for (const std::string& id_a : probe_ids(cfg, di))
          for (const std::string& id_b : probe_ids(cfg, dj)) {
            MultiMeasurement pa, pb;
            try {
              pa = frames::probe_measurement(id_a, di);
              pb = frames::probe_measurement(id_b, dj);
            } catch (const FrameError&) {
              continue;
            }
            const MultiMeasurement probe = product_measurement(pa, pb);
            const MultiSource steered = steer(merged_view(mp, {i, j}), probe, 1);
            const Verdict inner = decide_multisource(steered, probe_config(cfg));
            if (inner.tag == Tag::Nonclassical) {
              Witness w;
              w.rule = "steering-probe";
              w.probe = id_a + "&" + id_b + "@wires" + std::to_string(i + 1) +
                        std::to_string(j + 1);
              w.inner_rule = inner.rule;
              w.detail = "measuring wires " + std::to_string(i + 1) + "," +
                         std::to_string(j + 1) + " steers a nonclassical ensemble (" +
                         inner.rule + ")";
              return nonclassical(
                  "local measurements on a classical state steer classical ensembles",
                  std::move(w), std::move(out.diagnostics));
            }
          }
      }
  }
  note(out, "steering-probe: all probes steered ensembles without a nonclassical verdict");

  // Rule 4: separable decomposition with independent local frames.
  {
    auto cert = separable_search(mp, cfg, out);
    if (cert)
      return classical("separable-decomposition",
                       "multipartite structure theorem (independent local frames)",
                       FrameCertificate(std::move(*cert)), std::move(out.diagnostics));
  }

  out.tag = Tag::Inconclusive;
  out.theorem = "no decisive rule";
  if (cfg.conjecture_watch && n == 2) {
    const NonsingularityReport nr = is_nonsingular(BipartiteState{mp.dims[0], mp.dims[1], mp.rho});
    if (nr.nonsingular)
      note(out,
           "conjecture-watch: nonsingular bipartite state left undecided by the "
           "decomposition search");
  }
  return out;
}

}  // namespace

Verdict decide_bipartite_state(const BipartiteState& rho, const DecisionConfig& cfg) {
  validate(rho);
  return core_state(MultipartiteState{rho.dims(), rho.rho}, cfg);
}

Verdict decide_multipartite_state(const MultipartiteState& rho, const DecisionConfig& cfg) {
  validate(rho);
  return core_state(rho, cfg);
}

// --------------------------------------------------------------------------
// Channel decider
// --------------------------------------------------------------------------

Verdict decide_channel(const ChannelChoi& e, const DecisionConfig& cfg) {
  validate(e);
  Verdict out;

  // Rule 1: NPT Choi state.
  {
    const double eig =
        partial_transpose(e.choi, {e.d_out, e.d_in}, {false, true}).eig_min();
    if (eig < -tol::psd_floor) {
      Witness w;
      w.rule = "choi-npt";
      w.npt_eigenvalue = eig;
      w.detail = "Choi partial transpose has eigenvalue " + fmt(eig);
      return nonclassical("channels with entangled Choi states are nonclassical", std::move(w),
                          std::move(out.diagnostics));
    }
    note(out, "choi-npt: Choi state is PPT (worst eigenvalue " + fmt(eig) + ")");
  }

  // Rule 2: pushforward probes.
  {
    std::vector<std::pair<std::string, MultiSource>> sources;
    sources.emplace_back("computational", multistate_of(examples::computational_states(e.d_in)));
    sources.emplace_back("fourier", multistate_of(frames::parent_povm("fourier", e.d_in)));
    if (e.d_in == 2) sources.emplace_back("bb84", examples::bb84_multistate());
    for (auto& [id, ms] : sources) {
      const Verdict inner = decide_multisource(pushforward(e, ms), probe_config(cfg));
      if (inner.tag == Tag::Nonclassical) {
        Witness w;
        w.rule = "pushforward";
        w.probe = id;
        w.inner_rule = inner.rule;
        w.detail = "the image of the " + id + " ensemble is nonclassical (" + inner.rule + ")";
        if (inner.witness) w.dependence = inner.witness->dependence;
        return nonclassical("classical channels map classical sources to classical sources",
                            std::move(w), std::move(out.diagnostics));
      }
    }
    note(out, "pushforward: no probe ensemble became nonclassical");
  }

  // Rule 3: pullback probes.
  for (const std::string& id : probe_ids(cfg, e.d_out)) {
    MultiMeasurement probe;
    try {
      probe = frames::probe_measurement(id, e.d_out);
    } catch (const FrameError&) {
      continue;
    }
    const Verdict inner = decide_multimeasurement(pullback(e, probe), probe_config(cfg));
    if (inner.tag == Tag::Nonclassical) {
      Witness w;
      w.rule = "pullback";
      w.probe = id;
      w.inner_rule = inner.rule;
      w.detail = "the preimage of the " + id + " measurement is nonclassical (" + inner.rule + ")";
      return nonclassical("classical channels pull classical measurements back to classical ones",
                          std::move(w), std::move(out.diagnostics));
    }
  }
  note(out, "pullback: no probe measurement became nonclassical");

  // Rule 4: the full Choi-state decider; classical certificates transport
  // back through the inverse rescaling.
  {
    const Verdict inner = decide_bipartite_state(BipartiteState{e.d_out, e.d_in, e.choi}, cfg);
    for (const auto& d : inner.diagnostics) note(out, "choi: " + d);
    if (inner.tag == Tag::Nonclassical) {
      Witness w = inner.witness.value_or(Witness{});
      w.inner_rule = inner.rule;
      w.rule = "choi-state";
      w.probe = "choi";
      if (w.detail.empty()) w.detail = "the Choi state is nonclassical (" + inner.rule + ")";
      return nonclassical("a channel is classical exactly when its Choi state is", std::move(w),
                          std::move(out.diagnostics));
    }
    if (inner.tag == Tag::Classical) {
      Verdict v;
      v.tag = Tag::Classical;
      v.rule = "choi-classical";
      v.theorem = "a channel is classical exactly when its Choi state is";
      v.diagnostics = std::move(out.diagnostics);
      if (inner.certificate) {
        const auto* bc = std::get_if<BipartiteCertificate>(&*inner.certificate);
        if (bc != nullptr) {
          ChannelCertificate cc = transport_choi_inverse(*bc, e);
          if (verify_channel_certificate(e, cc, cfg.certificate_tolerance).pass) {
            v.certificate = FrameCertificate(std::move(cc));
            return v;
          }
          note(v, "choi-classical: transported certificate failed verification");
        }
      }
      v.certificate_omitted = true;
      note(v, "choi-classical: classicality holds by the Choi correspondence; certificate omitted");
      return v;
    }
  }

  out.tag = Tag::Inconclusive;
  out.theorem = "no decisive rule";
  return out;
}

// --------------------------------------------------------------------------
// General processes
// --------------------------------------------------------------------------

Verdict decide_general(const MultiInstrument& mi, const DecisionConfig& cfg) {
  validate(mi);
  const MultipartiteState tau = associated_state(Process{mi});
  Verdict v = (tau.dims.size() == 1)
                  ? core_state(tau, cfg)
                  : decide_multipartite_state(tau, cfg);
  v.theorem = "a process is classical exactly when its associated state is";
  std::string dims = "associated state wires:";
  for (int d : tau.dims) dims += " " + std::to_string(d);
  v.diagnostics.insert(v.diagnostics.begin(), dims);
  if (v.certificate)
    v.diagnostics.push_back("certificate refers to the associated multipartite state");
  return v;
}

Verdict decide(const Process& p, const DecisionConfig& cfg) {
  return std::visit(
      [&cfg](const auto& proc) -> Verdict {
        using T = std::decay_t<decltype(proc)>;
        if constexpr (std::is_same_v<T, MultiSource>) return decide_multisource(proc, cfg);
        else if constexpr (std::is_same_v<T, MultiMeasurement>)
          return decide_multimeasurement(proc, cfg);
        else if constexpr (std::is_same_v<T, BipartiteState>)
          return decide_bipartite_state(proc, cfg);
        else if constexpr (std::is_same_v<T, MultipartiteState>)
          return decide_multipartite_state(proc, cfg);
        else if constexpr (std::is_same_v<T, ChannelChoi>) return decide_channel(proc, cfg);
        else return decide_general(proc, cfg);
      },
      p);
}

}  // namespace qproc
