// SPDX-License-Identifier: MIT
/**
 * @file certify.hpp
 * @brief Frame certificates for classical verdicts, their exact verifiers,
 *        and the transports that carry certificates along the Choi
 *        isomorphism, flag convexification and dephased embedding.
 *
 * A certificate exhibits a classical model of a process in closed form: per
 * subsystem ("side"/"wire") a frame of quantum objects together with a dual
 * family of Hermitian operators. Certificates store raw operators only; all
 * weights are recomputed during verification, so a certificate cannot
 * smuggle inconsistent numbers. Verification is a fixed list of named
 * numerical checks (positivity and normalization of the frame, dual-sum
 * conditions against the projected identity on the relevant operator span,
 * the frame reconstruction property on that span, weight bounds, and exact
 * reconstruction of the process operators); each check reports its residual
 * and tolerance, and the report passes iff every check does.
 */
#pragma once

#include <string>
#include <variant>
#include <vector>

#include "qproc/processes.hpp"

namespace qproc {

/** One verifier check: a named residual compared against its tolerance. */
struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/** Result of verifying a certificate; pass iff every check passes. */
struct VerifyReport {
  bool pass = true;
  std::vector<CheckResult> checks;

  /** The named check, or nullptr when absent. */
  const CheckResult* find(const std::string& name) const;
  /** Worst residual/tolerance ratio over all checks (0 when empty). */
  double worst_ratio() const;
};

/** A frame family and its dual family attached to one side/wire. */
struct SideFrames {
  std::vector<HermitianOperator> frame;
  std::vector<HermitianOperator> dual;
};

/**
 * Certificate for a multi-source: frame states sigma_lambda and duals
 * H_lambda with sum_l H_l = P_V(1) on V = span of the subnormalized family.
 */
struct SourceCertificate {
  std::vector<HermitianOperator> frame;
  std::vector<HermitianOperator> dual;
};

/**
 * Certificate for a multi-measurement: parent POVM G_lambda (sums to the
 * identity) and unit-trace Hermitian duals F_lambda.
 */
struct MeasurementCertificate {
  std::vector<HermitianOperator> parent;
  std::vector<HermitianOperator> dual;
};

/**
 * Certificate for a bipartite (or general multipartite) state: per side a
 * frame of states and duals summing to P_{V_i}(1) on the steered span V_i.
 */
struct BipartiteCertificate {
  std::vector<SideFrames> sides;
};

/**
 * Certificate for a channel: input side holds unit-trace frame operators F
 * and a dual POVM G (summing to the identity); output side holds frame
 * states sigma and duals H summing to P_{V_B}(1) on the image span V_B.
 */
struct ChannelCertificate {
  SideFrames input;   ///< frame = F (unit trace), dual = G (POVM)
  SideFrames output;  ///< frame = sigma (states), dual = H
};

/** Per-input-wire (F, G) and per-output-wire (sigma, H) pairs. */
struct GeneralCertificate {
  std::vector<SideFrames> inputs;
  std::vector<SideFrames> outputs;
};

using FrameCertificate = std::variant<SourceCertificate, MeasurementCertificate,
                                      BipartiteCertificate, ChannelCertificate, GeneralCertificate>;

/** Stable lowercase tag ("source", ..., "general"). */
const char* certificate_kind(const FrameCertificate& c);

// --------------------------------------------------------------------------
// Verifiers (one per structure theorem)
// --------------------------------------------------------------------------

VerifyReport verify_source_certificate(const MultiSource& ms, const SourceCertificate& cert,
                                       double tolerance = tol::certificate);

VerifyReport verify_measurement_certificate(const MultiMeasurement& mm,
                                            const MeasurementCertificate& cert,
                                            double tolerance = tol::certificate);

VerifyReport verify_bipartite_certificate(const BipartiteState& rho,
                                          const BipartiteCertificate& cert,
                                          double tolerance = tol::certificate);
VerifyReport verify_bipartite_certificate(const MultipartiteState& rho,
                                          const BipartiteCertificate& cert,
                                          double tolerance = tol::certificate);

VerifyReport verify_channel_certificate(const ChannelChoi& e, const ChannelCertificate& cert,
                                        double tolerance = tol::certificate);

VerifyReport verify_general_certificate(const MultiInstrument& mi, const GeneralCertificate& cert,
                                        double tolerance = tol::certificate);

/**
 * Kind-dispatched verification. A process/certificate kind mismatch yields
 * a failed report with the single check "kind-match".
 */
VerifyReport verify_certificate(const Process& p, const FrameCertificate& cert,
                                double tolerance = tol::certificate);

// --------------------------------------------------------------------------
// Transports
// --------------------------------------------------------------------------

/**
 * Channel certificate -> certificate of the Choi state (on OUT (x) IN):
 * the output side is kept, the input side is rescaled to states
 * sigma^A = G^T/Tr G with duals H^A = F^T * Tr G. Elements with
 * Tr G <= 1e-12 are dropped together with their zero weights.
 */
BipartiteCertificate transport_choi(const ChannelCertificate& cert, const ChannelChoi& e);

/**
 * Inverse rescaling: Choi-state certificate -> channel certificate,
 * F = H^T/Tr H and G = Tr H * sigma^T on the input copy; round-trips with
 * transport_choi exactly.
 */
ChannelCertificate transport_choi_inverse(const BipartiteCertificate& cert, const ChannelChoi& e);

/**
 * Certificate transport along flag convexification. The frame operators are
 * unchanged (weights pick up the uniform setting factor on recomputation).
 */
SourceCertificate transport_flag(const SourceCertificate& cert);
MeasurementCertificate transport_flag(const MeasurementCertificate& cert);

/**
 * Source certificate -> certificate of the dephased embedding
 * rho^{CA} = sum_c p(c)|c><c| (x) rho_c of a single-setting source: the
 * classical flag side gets frame = dual = {|c><c|}, the system side keeps
 * (sigma, H). @throws ValidationError when the source has several settings
 * (flag-convexify first).
 */
BipartiteCertificate transport_dephase(const SourceCertificate& cert, const MultiSource& s);

// --------------------------------------------------------------------------
// Spans
// --------------------------------------------------------------------------

/**
 * The steered span V_side of a multipartite state (side is 1-based): the
 * span of all operators steered onto that side by a tomographically
 * complete product family on the remaining sides.
 */
OperatorSpan steered_span(const MultipartiteState& rho, int side);

}  // namespace qproc
