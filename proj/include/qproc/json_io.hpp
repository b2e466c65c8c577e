// SPDX-License-Identifier: MIT
/**
 * @file json_io.hpp
 * @brief JSON document formats for processes, certificates, verdict reports
 *        and identity sets, plus file helpers.
 *
 * Formats (each document carries its tag in a "format" field):
 *  - "qproc-process/1":    a Process; kind tag from kind_name(), matrices as
 *                          nested row-major arrays of [re, im] pairs.
 *  - "qproc-cert/1":       a FrameCertificate; kind tag from
 *                          certificate_kind(), optional free-text "theorem".
 *  - "qproc-verdict/1":    a Verdict report; the certificate (when present)
 *                          is re-verified and the resulting residual table is
 *                          embedded under "checks". "timing_ms" is always
 *                          null so reports are byte-reproducible.
 *  - "qproc-identities/1": an IdentitySet basis.
 *
 * Malformed documents (wrong structure, missing fields, ragged matrices)
 * throw ParseError. Payloads that parse but break a process invariant keep
 * their native errors: a non-Hermitian matrix throws HermiticityError and
 * semantic checks stay in validate(). Serialization is deterministic: object
 * keys are emitted in sorted order and doubles use the shortest round-trip
 * form, so equal inputs yield byte-identical documents.
 */
#pragma once

#include <string>

#include <json.hpp>

#include "qproc/decide.hpp"
#include "qproc/identities.hpp"

namespace qproc {

// --------------------------------------------------------------------------
// Matrices
// --------------------------------------------------------------------------

/** Nested row-major array of [re, im] pairs. */
nlohmann::json matrix_to_json(const Eigen::MatrixXcd& m);

/** Inverse of matrix_to_json. @throws ParseError on malformed payloads. */
Eigen::MatrixXcd matrix_from_json(const nlohmann::json& j);

nlohmann::json operator_to_json(const HermitianOperator& h);

/**
 * Parses a square matrix payload into a HermitianOperator.
 * @throws ParseError when the payload is malformed or not square,
 *         HermiticityError when it is not Hermitian.
 */
HermitianOperator operator_from_json(const nlohmann::json& j);

// --------------------------------------------------------------------------
// Process documents ("qproc-process/1")
// --------------------------------------------------------------------------

nlohmann::json process_to_json(const Process& p);

/**
 * Parses a process document. Structural problems throw ParseError; the
 * result is not validated (call validate() to check invariants). "weights"
 * may be omitted for single-outcome multi-sources (defaults to all ones).
 */
Process process_from_json(const nlohmann::json& j);

// --------------------------------------------------------------------------
// Certificate documents ("qproc-cert/1")
// --------------------------------------------------------------------------

nlohmann::json certificate_to_json(const FrameCertificate& c, const std::string& theorem = "");

/** @throws ParseError on malformed documents or unknown kinds. */
FrameCertificate certificate_from_json(const nlohmann::json& j);

// --------------------------------------------------------------------------
// Reports
// --------------------------------------------------------------------------

/**
 * Verdict report. When the verdict carries a certificate it is re-verified
 * against the process here and the residual table embedded, so a report can
 * never show a certificate without its checks. Witness fields are emitted
 * only when populated by the firing rule.
 */
nlohmann::json verdict_to_json(const Verdict& v, const Process& p,
                               double tolerance = tol::certificate);

nlohmann::json identities_to_json(const IdentitySet& ids);

// --------------------------------------------------------------------------
// Files
// --------------------------------------------------------------------------

/** Reads and parses a JSON file. @throws ParseError (unreadable/invalid). */
nlohmann::json read_json_file(const std::string& path);

/** Two-space indented dump with trailing newline (the on-disk convention). */
std::string dump_json(const nlohmann::json& j);

}  // namespace qproc
