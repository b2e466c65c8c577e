// SPDX-License-Identifier: MIT
/**
 * @file registry.hpp
 * @brief The reproduction registry: named worked examples with their
 *        expected verdicts, plus id-based construction of example processes
 *        for the command-line front end.
 *
 * Ids are either a bare family name ("bb84", "sic", "bell") or a
 * parametrized form "family@param" ("cube@0.4", "werner@0.8"). The registry
 * rows are the fixed subset with a committed expected verdict; arbitrary
 * parameters remain constructible for classification without an expectation
 * attached.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qproc/decide.hpp"

namespace qproc {

/** One reproduction row: a deterministic process and its expected verdict. */
struct RegistryEntry {
  std::string id;
  /** Always Classical or Nonclassical; the registry holds no open cases. */
  Tag expected = Tag::Inconclusive;
  /** One-line account of why the expected verdict holds. */
  std::string note;
  Process process;
};

/** All registry rows in their fixed reproduction order. */
std::vector<RegistryEntry> registry_entries();

/** The row with this exact id, or nullopt when the id is not tabled. */
std::optional<RegistryEntry> registry_entry(const std::string& id);

/**
 * Builds the example process for an id, accepting parametrized forms beyond
 * the tabled rows ("cube@0.2", "werner@0.5", "trine", "zz", ...). Returns
 * nullopt for unknown ids or malformed parameters.
 */
std::optional<Process> example_process(const std::string& id);

}  // namespace qproc
