// SPDX-License-Identifier: MIT
/**
 * @file decide.hpp
 * @brief Decision procedures classifying processes as Classical,
 *        Nonclassical or Inconclusive.
 *
 * Every decider runs an ordered rule list and stops at the first decisive
 * rule: cheap exact criteria first, then certified feasibility searches.
 * Classical verdicts carry a frame certificate that has already passed the
 * matching verifier (a single documented exception: the low-dimensional
 * PPT rule may return Classical with the certificate marked omitted when
 * the decomposition search fails). Nonclassical verdicts name exactly one
 * triggering rule whose premises are re-checked at verdict time. When no
 * rule is decisive the answer is an honest Inconclusive with per-rule
 * diagnostics — searches that run out of budget never flip a verdict.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qproc/certify.hpp"
#include "qproc/lp.hpp"
#include "qproc/processes.hpp"

namespace qproc {

/** The three possible answers. */
enum class Tag { Classical, Nonclassical, Inconclusive };

/** Stable name ("Classical" | "Nonclassical" | "Inconclusive"). */
const char* tag_name(Tag t);

/**
 * Supporting data of a Nonclassical verdict. `rule` is the stable id of the
 * triggering rule; only the fields belonging to that rule are populated.
 */
struct Witness {
  std::string rule;
  /** Human-readable account of what was found. */
  std::string detail;
  /** Dependence coefficients ("pure-dependent", "rank1-dependent"). */
  Eigen::VectorXd dependence;
  /** Most negative partial-transpose eigenvalue ("npt"). */
  double npt_eigenvalue = 0.0;
  /** Wires on the transposed side of the violating cut ("npt"). */
  std::vector<int> bipartition;
  /** Steering inequality operators F_{a|x}, flat setting-major ("steerable"). */
  std::vector<HermitianOperator> steering_inequality;
  /** Attained value of the inequality (unsteerable models score <= 0). */
  double steering_violation = 0.0;
  /** Separating functional blocks ("incompatible"). */
  std::vector<HermitianOperator> separator;
  /** Certified separation margin ("incompatible"). */
  double margin = 0.0;
  /** Probe or transform that produced a derived hit. */
  std::string probe;
  /** Rule fired by the inner decider for a derived hit. */
  std::string inner_rule;
};

/** Tunable knobs of the deciders; the defaults reproduce the test suite. */
struct DecisionConfig {
  /** Tolerance passed to certificate verification. */
  double certificate_tolerance = tol::certificate;
  /** State-frame ids for the fixed-frame source rule (empty: defaults). */
  std::vector<std::string> state_frames;
  /** Parent-POVM ids for the fixed-parent measurement rule (empty: defaults). */
  std::vector<std::string> parent_povms;
  /** Probe ids for steering probes (empty: defaults per dimension). */
  std::vector<std::string> probes;
  /** Iteration budget of the PSD feasibility search. */
  int psd_iterations = 20000;
  /** Vertex count of the polygonal PSD-cone approximation for steering. */
  int steering_polygon = 4096;
  /** Budget of the randomized separable-decomposition search. */
  int search_trials = 200;
  /** Seed for every randomized search (identical runs are bit-identical). */
  std::uint64_t seed = 20260823u;
  /** Emit a diagnostic when a nonsingular state stays undecided. */
  bool conjecture_watch = true;
};

/** Outcome of a decision procedure. */
struct Verdict {
  Tag tag = Tag::Inconclusive;
  /** Stable id of the deciding rule (empty for Inconclusive). */
  std::string rule;
  /** Human-readable anchor of the theorem behind the deciding rule. */
  std::string theorem;
  std::optional<FrameCertificate> certificate;
  /** Classical with the certificate deliberately absent (PPT rule). */
  bool certificate_omitted = false;
  std::optional<Witness> witness;
  /** One line per rule that ran without deciding. */
  std::vector<std::string> diagnostics;
};

// --------------------------------------------------------------------------
// Steering
// --------------------------------------------------------------------------

enum class SteeringStatus { Unsteerable, Steerable, Unknown };

/** Outcome of the local-hidden-state feasibility test. */
struct SteeringResult {
  SteeringStatus status = SteeringStatus::Unknown;
  /** Unsteerable: subnormalized model states, one per response strategy. */
  std::vector<HermitianOperator> model_states;
  /** Steerable: inequality operators F_{a|x}, flat setting-major. */
  std::vector<HermitianOperator> inequality;
  /** Steerable: attained value (every unsteerable assemblage scores <= 0). */
  double violation = 0.0;
  std::string detail;
};

/**
 * Local-hidden-state feasibility of an assemblage: an LP over deterministic
 * response strategies times free states, the states eliminated by matching
 * coordinates on a spanning operator basis. Qubit assemblages use an exact
 * (rank <= 2) or polygonal (rank 3) description of the PSD slice; the
 * polygon is applied inscribed for Unsteerable answers and circumscribed
 * for Steerable ones, so neither answer can be wrong. Everything else is an
 * honest Unknown, except the always-unsteerable single-setting case.
 */
SteeringResult unsteerable_lp(const MultiSource& assemblage, const DecisionConfig& cfg = {});

// --------------------------------------------------------------------------
// Deciders
// --------------------------------------------------------------------------

Verdict decide_multisource(const MultiSource& ms, const DecisionConfig& cfg = {});
Verdict decide_multimeasurement(const MultiMeasurement& mm, const DecisionConfig& cfg = {});
Verdict decide_bipartite_state(const BipartiteState& rho, const DecisionConfig& cfg = {});
Verdict decide_multipartite_state(const MultipartiteState& rho, const DecisionConfig& cfg = {});
Verdict decide_channel(const ChannelChoi& e, const DecisionConfig& cfg = {});
Verdict decide_general(const MultiInstrument& mi, const DecisionConfig& cfg = {});

/** Kind-dispatched decision. */
Verdict decide(const Process& p, const DecisionConfig& cfg = {});

}  // namespace qproc
