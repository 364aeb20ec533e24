#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "chainforge/coset.hpp"
#include "chainforge/group.hpp"
#include "chainforge/hom.hpp"

namespace chainforge {

// Descending chain G_0 > G_1 > ... > G_L of finite-index subgroups.
// `base` plays G_0; `levels` holds G_1..G_L.  Chains produced from a
// truncated product carry mode "profinite", plain ones "explicit".
struct GroupChain {
  Group base;
  std::vector<Subgroup> levels;
  std::string mode = "explicit";

  std::size_t depth() const { return levels.size(); }
  // level(0) is the base viewed as a subgroup of itself.
  Subgroup level(std::size_t l) const;
};

struct ValidatedChain {
  GroupChain chain;
  std::vector<std::uint64_t> step_indices;      // [G_{l-1} : G_l], l = 1..L
  std::vector<std::uint64_t> indices_from_base; // [G_0 : G_l],   l = 1..L
};

// Containment and strict descent checked level by level; failures name the
// offending level.  Indices are computed by coset enumeration, never by
// enumerating the base.
ValidatedChain validate_chain(const GroupChain& chain);

// Deepest level containing g: L means g survives to the last level.
std::size_t kernel_membership(const GroupChain& chain, const Element& g);

// Chain of conjugated levels g G_l g^-1 (g must lie in the base).
GroupChain conjugate_chain(const GroupChain& chain, const Element& g);

// The coset spaces X_l = G_0/G_l with the left action and the level-to-level
// projections; projections are checked to commute with the action.
struct CosetTower {
  std::vector<std::shared_ptr<CosetSpace>> levels;     // X_0 .. X_L
  std::vector<std::vector<std::uint32_t>> projections; // X_{l+1} -> X_l
};
CosetTower coset_tower(const GroupChain& chain);

// Finite Ellis data at one level: the quotient G_0/C_l by the core of G_l,
// and the isotropy subgroup (image of G_l) of the base coset.
struct EllisLevel {
  Subgroup core;           // C_l inside G_0
  QuotientResult quotient; // G_0/C_l
  Subgroup isotropy;       // G_l/C_l inside the quotient
};
EllisLevel ellis_level(const GroupChain& chain, std::size_t level);

}  // namespace chainforge
