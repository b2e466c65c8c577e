// SPDX-License-Identifier: MIT
/**
 * @file processes.hpp
 * @brief Process types (multi-sources, multi-measurements, states, channels,
 *        multi-instruments), their structural invariants, and the transforms
 *        that connect them (steering, push/pullback, Choi, flag
 *        convexification, dephased embedding, associated state).
 *
 * Conventions
 *  - Tensor factors compose with the first factor slowest (row-major kron).
 *  - A channel is stored by its trace-one Choi state on OUT (x) IN; the
 *    action is E(X) = d_in * Tr_in[(1 (x) X^T) choi].
 *  - Flat indices over (setting, outcome) pairs run setting-major:
 *    idx = setting * n_outcomes + outcome.
 *  - Transposes are taken in the computational basis (the basis defining the
 *    maximally entangled vector of the Choi isomorphism).
 */
#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "qproc/hermspace.hpp"

namespace qproc {

// --------------------------------------------------------------------------
// Tensor utilities
// --------------------------------------------------------------------------

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

/** Product of a dims list (1 for the empty list). */
int dim_product(const std::vector<int>& dims);

/**
 * Partial trace over the factors with keep[i] == false.
 * @throws DimensionError on inconsistent dims.
 */
HermitianOperator partial_trace(const HermitianOperator& h, const std::vector<int>& dims,
                                const std::vector<bool>& keep);

/** Partial transpose over the factors with transpose[i] == true. */
HermitianOperator partial_transpose(const HermitianOperator& h, const std::vector<int>& dims,
                                    const std::vector<bool>& transpose);

// --------------------------------------------------------------------------
// Process types
// --------------------------------------------------------------------------

/**
 * A multi-source: classical setting x, classical outcome a, quantum output.
 * Stores outcome probabilities p(a|x) and the normalized conditional states.
 * Degenerate cardinalities recover states (1,1), multi-states (X,1),
 * sources (1,A).
 */
struct MultiSource {
  int dim = 0;
  int n_settings = 1;
  int n_outcomes = 1;
  /** p(a|x), flat setting-major. */
  std::vector<double> weights;
  /** Normalized states rho_{a|x}, flat setting-major. */
  std::vector<HermitianOperator> states;
  /**
   * Declares the steering reading: the outcome-averaged state must then be
   * setting-independent (checked by validate). Set automatically by steer().
   */
  bool assemblage = false;

  int size() const { return n_settings * n_outcomes; }
  int index(int setting, int outcome) const { return setting * n_outcomes + outcome; }
  /** Subnormalized family p(a|x) rho_{a|x}, the object identities act on. */
  std::vector<HermitianOperator> family() const;
  /** Outcome-averaged state for one setting. */
  HermitianOperator average_state(int setting) const;
};

/** A setting-indexed family of POVMs on a single quantum input. */
struct MultiMeasurement {
  int dim = 0;
  int n_settings = 1;
  int n_outcomes = 1;
  /** Effects M_{b|y}, flat setting-major. */
  std::vector<HermitianOperator> effects;

  int size() const { return n_settings * n_outcomes; }
  int index(int setting, int outcome) const { return setting * n_outcomes + outcome; }
};

/** A bipartite state on H(d1) (x) H(d2). */
struct BipartiteState {
  int d1 = 0;
  int d2 = 0;
  HermitianOperator rho;

  std::vector<int> dims() const { return {d1, d2}; }
};

/** A state on an arbitrary tensor product of subsystems. */
struct MultipartiteState {
  std::vector<int> dims;
  HermitianOperator rho;
};

/** A channel A -> B held as its trace-one Choi state on B (x) A. */
struct ChannelChoi {
  int d_in = 0;
  int d_out = 0;
  HermitianOperator choi;

  /** E(X) = d_in * Tr_in[(1 (x) X^T) choi]. */
  HermitianOperator apply(const HermitianOperator& x) const;
  /** Hilbert-Schmidt adjoint E^dagger (unital). */
  HermitianOperator adjoint_apply(const HermitianOperator& m) const;

  /** Build the Choi state from the channel's action on matrix units. */
  static ChannelChoi from_map(int d_in, int d_out,
                              const std::function<Eigen::MatrixXcd(const Eigen::MatrixXcd&)>& map);
  /** Measure-and-prepare channel E(X) = sum_k Tr[effect_k X] state_k. */
  static ChannelChoi measure_prepare(const std::vector<HermitianOperator>& effects,
                                     const std::vector<HermitianOperator>& states);
};

/**
 * The most general process: classical setting z and outcome c, quantum input
 * wires A and output wires B. Each branch is a subnormalized Choi operator
 * on (B1 (x) ... (x) Bm) (x) (A1 (x) ... (x) An); summing the branches of a
 * setting gives the Choi of a channel. dims_in may be empty (no quantum
 * inputs), in which case the branches are plain subnormalized states.
 */
struct MultiInstrument {
  std::vector<int> dims_in;
  std::vector<int> dims_out;
  int n_settings = 1;
  int n_outcomes = 1;
  /** Branch Choi operators, flat setting-major. */
  std::vector<HermitianOperator> chois;
  /**
   * Declares a 2-comb pairing (dims_in = [A1,A2], dims_out = [B1,B2] in
   * causal order): the no-signaling marginal check becomes part of
   * certificate verification.
   */
  bool two_comb = false;

  int size() const { return n_settings * n_outcomes; }
  int index(int setting, int outcome) const { return setting * n_outcomes + outcome; }
  int dim_in() const { return dim_product(dims_in); }
  int dim_out() const { return dim_product(dims_out); }
};

using Process = std::variant<MultiSource, MultiMeasurement, BipartiteState, MultipartiteState,
                             ChannelChoi, MultiInstrument>;

/** Stable lowercase kind tag ("multi_source", ..., "multi_instrument"). */
const char* kind_name(const Process& p);

/**
 * Checks every structural invariant of the process (normalization, PSD,
 * Hermiticity came with construction, dimension limits).
 * @throws ValidationError, LimitError.
 */
void validate(const MultiSource& p);
void validate(const MultiMeasurement& p);
void validate(const BipartiteState& p);
void validate(const MultipartiteState& p);
void validate(const ChannelChoi& p);
void validate(const MultiInstrument& p);
void validate(const Process& p);

// --------------------------------------------------------------------------
// Transforms
// --------------------------------------------------------------------------

/**
 * Remote steering: measure subsystem `measured_side` (1 or 2) of rho with
 * the multi-measurement and collect the conditional states of the other
 * side. The result is an assemblage (marginal independence holds by
 * construction and is re-checked). Zero-probability branches keep a
 * maximally mixed placeholder state.
 */
MultiSource steer(const BipartiteState& rho, const MultiMeasurement& mm, int measured_side);

/** Image of a multi-source under a channel (weights unchanged). */
MultiSource pushforward(const ChannelChoi& e, const MultiSource& p);

/** Image of a multi-measurement under the adjoint channel. */
MultiMeasurement pullback(const ChannelChoi& e, const MultiMeasurement& m);

/**
 * Flag convexification: the setting is sampled uniformly and its value
 * appended to the outcome. Verdict-preserving.
 */
MultiSource flag_convexify(const MultiSource& p);
MultiMeasurement flag_convexify(const MultiMeasurement& m);
MultiInstrument flag_convexify(const MultiInstrument& mi);

/**
 * Dephased embedding of a source (single setting): the outcome becomes a
 * classical flag factor, rho^{CA} = sum_a p(a) |a><a| (x) rho_a.
 * @throws ValidationError unless n_settings == 1.
 */
BipartiteState dephase_embed(const MultiSource& source);

/**
 * The associated multipartite state of a process: Choi on quantum inputs,
 * settings absorbed uniformly into the outcome flag (flag convexification),
 * outcomes dephased onto a classical flag factor. Trivial (size-one)
 * classical factors are dropped. Factor order: merged classical flag,
 * quantum outputs, Choi copies of the inputs. The process is classical
 * exactly when this state is.
 */
MultipartiteState associated_state(const Process& p);

}  // namespace qproc
