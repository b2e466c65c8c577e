// SPDX-License-Identifier: MIT
/**
 * @file frames.hpp
 * @brief Frame and probe libraries for the deciders, plus constructors for
 *        the standard worked examples exercised by the tests and the
 *        reproduction registry.
 *
 * Library families come in three roles:
 *  - state frames: candidate classical frames {sigma_lambda} for the
 *    fixed-frame source searches;
 *  - parent POVMs: candidate parents {G_lambda} for the fixed-frame
 *    measurement searches;
 *  - probes: multi-measurements used to steer composite systems so that the
 *    source deciders can examine the conditional families.
 * All constructors are deterministic; the pure-state nets draw from an
 * explicitly seeded generator.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qproc/processes.hpp"

namespace qproc::frames {

// --------------------------------------------------------------------------
// State frames
// --------------------------------------------------------------------------

/** Six qubit states (1 +- sigma_i)/2 along the Bloch axes. */
std::vector<HermitianOperator> octahedron_states();

/** Four symmetric qubit states along the tetrahedron directions. */
std::vector<HermitianOperator> tetrahedron_states();

/** Twelve qubit states along the icosahedron vertices. */
std::vector<HermitianOperator> icosahedron_states();

/**
 * Mutually unbiased pure states: computational plus Fourier basis for every
 * dim, the full dim+1 bases for dim = 2 and odd primes.
 */
std::vector<HermitianOperator> mub_states(int dim);

/** A deterministic net of `count` Haar-like random pure states. */
std::vector<HermitianOperator> state_net(int dim, int count, std::uint64_t seed);

/**
 * Named state frame: "octahedron" | "tetrahedron" | "icosahedron" (qubit),
 * "mub" (any dim), "net@N" (N random pure states).
 * @throws FrameError for unknown ids or impossible dimensions.
 */
std::vector<HermitianOperator> state_frame(const std::string& id, int dim, std::uint64_t seed);

/** Frame ids tried by default for one subsystem dimension. */
std::vector<std::string> default_state_frames(int dim);

// --------------------------------------------------------------------------
// Parent POVMs
// --------------------------------------------------------------------------

/**
 * Named parent POVM: "pm-xz" (four smoothed +-x/+-z outcomes at the
 * compatibility boundary), "sic", "octahedron", "z", "x" (qubit);
 * "computational", "fourier" (any dim).
 * @throws FrameError for unknown ids or impossible dimensions.
 */
std::vector<HermitianOperator> parent_povm(const std::string& id, int dim);

/** Parent ids tried by default for one dimension. */
std::vector<std::string> default_parent_povms(int dim);

// --------------------------------------------------------------------------
// Probes
// --------------------------------------------------------------------------

/**
 * Named probe multi-measurement: "bb84" (Z/X pair), "zxy" (three Pauli
 * settings), "bb84-povm" (single-setting four-outcome POVM) for qubits;
 * "computational", "fourier", "mub-pair" for any dim.
 * @throws FrameError for unknown ids or impossible dimensions.
 */
MultiMeasurement probe_measurement(const std::string& id, int dim);

/** Probe ids tried by default against one subsystem dimension. */
std::vector<std::string> default_probes(int dim);

/** One catalog row: role ("state-frame" | "parent" | "probe") and id. */
struct CatalogEntry {
  std::string role;
  std::string id;
};

/** Library ids applicable to the given dimension, for `frames list`. */
std::vector<CatalogEntry> catalog(int dim);

}  // namespace qproc::frames

namespace qproc::examples {

/** The four states |0>, |1>, |+>, |-> as projectors. */
std::vector<HermitianOperator> bb84_states();

/** Computational basis projectors of dimension `dim`. */
std::vector<HermitianOperator> computational_states(int dim);

/** The BB84 ensemble as a multi-state: four settings, one outcome each. */
MultiSource bb84_multistate();

/** The BB84 ensemble as a single source with outcome weights 1/4. */
MultiSource bb84_source();

/** Eight states with Bloch vectors (+-, +-, +-) eta/sqrt(3), weights 1/8. */
MultiSource cube_source(double eta);

/** Three equiangular pure states in the x-z plane, weights 1/3. */
MultiSource trine_source();

/** The Z/X steering assemblage {{1/2|0>, 1/2|1>}, {1/2|+>, 1/2|->}}. */
MultiSource zx_assemblage();

/** Qubit SIC POVM: the four tetrahedron states halved. */
MultiMeasurement sic_povm();

/** Five-outcome pentagon measurement (1 + eta n_b . sigma)/5. */
MultiMeasurement pentagon_measurement(double eta);

/** Sharp Z and X as a two-setting multi-measurement. */
MultiMeasurement zx_pair();

/** Sharp Z twice: the trivially compatible control pair. */
MultiMeasurement zz_pair();

/** Smoothed pair {(1 +- eta sigma_z)/2}, {(1 +- eta sigma_x)/2}. */
MultiMeasurement smoothed_zx_pair(double eta);

/** The maximally entangled two-qubit state. */
BipartiteState bell_state();

/** Werner-like mixture w |Bell><Bell| + (1-w) 1/4. */
BipartiteState werner_state(double w);

/** The 4 (x) 2 classical-quantum state 1/4 sum_i |i><i| (x) tau_i. */
BipartiteState example4_state();

/** Measure the computational basis of C^4, prepare the BB84 states. */
ChannelChoi example5_channel();

/** Measure the BB84 POVM on a qubit, prepare |a><a| in C^4. */
ChannelChoi example6_channel();

/** The classically correlated state 1/2 |00><00| + 1/2 |1+><1+|. */
BipartiteState discord_state();

/** The 1/4-mixture of |000>, |-+1>, |1-+>, |+1->. */
MultipartiteState tripartite_mixture();

/** The identity channel on dimension `dim`. */
ChannelChoi identity_channel(int dim);

/** The fully depolarizing channel on dimension `dim`. */
ChannelChoi depolarizing_channel(int dim);

}  // namespace qproc::examples
