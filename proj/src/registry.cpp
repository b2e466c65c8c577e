// SPDX-License-Identifier: MIT
/**
 * @file registry.cpp
 * @brief Registry rows and id-based example construction.
 */
#include "qproc/registry.hpp"

#include <cmath>
#include <utility>

#include "qproc/frames.hpp"

namespace qproc {

namespace {

struct Row {
  const char* id;
  Tag expected;
  const char* note;
};

/** The committed reproduction rows, in their fixed order. */
constexpr Row kRows[] = {
    {"bb84", Tag::Nonclassical, "four coplanar pure states carrying a linear dependence"},
    {"bb84-source", Tag::Nonclassical,
     "the same four states as one source; rescaling preserves the dependence"},
    {"cube@0.4", Tag::Classical, "cube ensemble well inside the octahedron frame"},
    {"cube@0.57735", Tag::Classical, "cube ensemble at the inscribed-octahedron boundary"},
    {"cube@1.0", Tag::Nonclassical, "pure cube ensemble: eight dependent pure states"},
    {"pentagon@1.0", Tag::Nonclassical, "five dependent rank-one effects"},
    {"pentagon@0.3", Tag::Classical, "noisy pentagon splits over the four-outcome x/z parent"},
    {"sic", Tag::Classical, "four linearly independent rank-one effects"},
    {"zx", Tag::Nonclassical, "sharp Z and X are incompatible"},
    {"zx-assemblage", Tag::Nonclassical, "steerable two-setting qubit assemblage"},
    {"bell", Tag::Nonclassical, "entangled: negative partial transpose"},
    {"werner@0.8", Tag::Nonclassical, "steerable above the two-setting visibility threshold"},
    {"ex4-separable", Tag::Nonclassical,
     "separable 4x2 state whose steered ensemble is nonclassical"},
    {"discord-classical", Tag::Classical,
     "discordant two-qubit state with an independent product decomposition"},
    {"ex5-channel", Tag::Nonclassical,
     "entanglement-breaking channel with a nonclassical image ensemble"},
    {"ex6-channel", Tag::Nonclassical,
     "measure-and-prepare channel whose Choi state matches the 4x2 example"},
    {"identity-channel", Tag::Nonclassical,
     "identity qubit channel: the Choi state is maximally entangled"},
    {"depolarizing", Tag::Classical, "fully depolarizing qubit channel: product Choi state"},
    {"tripartite-upb", Tag::Nonclassical, "product-vector mixture steerable on a wire pair"},
};

/** Splits "family@param". Malformed parameters leave the id unsplit. */
std::pair<std::string, std::optional<double>> split_id(const std::string& id) {
  const auto at = id.find('@');
  if (at == std::string::npos) return {id, std::nullopt};
  const std::string param = id.substr(at + 1);
  try {
    std::size_t used = 0;
    const double value = std::stod(param, &used);
    if (used != param.size()) return {id, std::nullopt};
    return {id.substr(0, at), value};
  } catch (...) {
    return {id, std::nullopt};
  }
}

/** An integer parameter (subsystem dimension), defaulting to 2. */
std::optional<int> dim_param(const std::optional<double>& param) {
  if (!param.has_value()) return 2;
  const double v = *param;
  if (v < 1.0 || v != std::floor(v)) return std::nullopt;
  return static_cast<int>(v);
}

}  // namespace

std::optional<Process> example_process(const std::string& id) {
  const auto [family, param] = split_id(id);
  const bool bare = !param.has_value();
  using namespace examples;

  if (family == "bb84" && bare) return Process{bb84_multistate()};
  if (family == "bb84-source" && bare) return Process{bb84_source()};
  if (family == "trine" && bare) return Process{trine_source()};
  if (family == "cube") return Process{cube_source(param.value_or(1.0 / std::sqrt(3.0)))};
  if (family == "zx-assemblage" && bare) return Process{zx_assemblage()};
  if (family == "sic" && bare) return Process{sic_povm()};
  if (family == "pentagon") return Process{pentagon_measurement(param.value_or(1.0))};
  if (family == "zx" && bare) return Process{zx_pair()};
  if (family == "zz" && bare) return Process{zz_pair()};
  if (family == "smoothed-zx") return Process{smoothed_zx_pair(param.value_or(0.5))};
  if (family == "bell" && bare) return Process{bell_state()};
  if (family == "werner") return Process{werner_state(param.value_or(0.8))};
  if (family == "ex4-separable" && bare) return Process{example4_state()};
  if (family == "discord-classical" && bare) return Process{discord_state()};
  if (family == "ex5-channel" && bare) return Process{example5_channel()};
  if (family == "ex6-channel" && bare) return Process{example6_channel()};
  if (family == "tripartite-upb" && bare) return Process{tripartite_mixture()};
  if (family == "identity-channel") {
    const std::optional<int> d = dim_param(param);
    if (d.has_value()) return Process{identity_channel(*d)};
    return std::nullopt;
  }
  if (family == "depolarizing") {
    const std::optional<int> d = dim_param(param);
    if (d.has_value()) return Process{depolarizing_channel(*d)};
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<RegistryEntry> registry_entry(const std::string& id) {
  for (const Row& row : kRows) {
    if (id != row.id) continue;
    std::optional<Process> p = example_process(id);
    if (!p.has_value()) return std::nullopt;
    return RegistryEntry{row.id, row.expected, row.note, std::move(*p)};
  }
  return std::nullopt;
}

std::vector<RegistryEntry> registry_entries() {
  std::vector<RegistryEntry> rows;
  rows.reserve(std::size(kRows));
  for (const Row& row : kRows) rows.push_back(*registry_entry(row.id));
  return rows;
}

}  // namespace qproc
