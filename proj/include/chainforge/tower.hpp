#pragma once

#include <optional>

#include "chainforge/chain.hpp"
#include "chainforge/factored.hpp"

namespace chainforge {

// Cores C_{n,l} = core_{G_n} G_l for a fixed base index n and n <= l <= L.
struct CoreTower {
  std::size_t base_index = 0;
  std::vector<Subgroup> cores;  // entry k holds C_{n, n+k}, a subgroup of G_n
  const Subgroup& core_at(std::size_t level) const;  // absolute level index
};

CoreTower core_tower(const GroupChain& chain, std::size_t n);

// Truncated discriminant tower for base index n: the finite quotients
// G_l/C_{n,l} together with the maps induced by coset inclusion between
// consecutive levels.  The inclusion-induced maps need not be onto for an
// arbitrary chain; surjectivity is recorded per map, not assumed.
struct DiscriminantTower {
  std::size_t base_index = 0;
  CoreTower cores;
  std::vector<QuotientResult> levels;  // entry k is G_{n+k}/C_{n,n+k}
  std::vector<Homomorphism> bonding;   // level n+k+1 -> level n+k
  std::vector<bool> bonding_surjective;

  const QuotientResult& level_at(std::size_t level) const;
  FactoredOrder order_at(std::size_t level) const;
};

DiscriminantTower discriminant_tower(const GroupChain& chain, std::size_t n);

// The surjection G_l/C_{n,l} -> G_l/C_{m,l} induced by C_{n,l} <= C_{m,l},
// for n <= m <= l.  Surjectivity is verified.
Homomorphism discriminant_surjection(const DiscriminantTower& from,
                                     const DiscriminantTower& to,
                                     std::size_t level);

Homomorphism psi_map(const GroupChain& chain, std::size_t n, std::size_t m,
                     std::size_t level);

enum class StabilityVerdict { stable_so_far, wild_evidence, inconclusive };

std::string to_string(StabilityVerdict v);

struct StabilityRecord {
  std::size_t n = 0;
  std::size_t level = 0;
  FactoredOrder level_order;
  FactoredOrder core_order;
  FactoredOrder disc_order;
  // |ker psi_{n,n+1}| measured at this level; present when n+1 <= level
  std::optional<FactoredOrder> psi_kernel_order;
};

// Depth-bounded evidence, never a theorem: "stable-so-far" reports that the
// deepest-level kernels vanish from some base index on, "wild-evidence" that
// they are nontrivial at every examined base index.
struct StabilityReport {
  std::size_t depth = 0;
  std::string mode;
  std::vector<StabilityRecord> records;  // all (n, level), n <= level <= L
  StabilityVerdict verdict = StabilityVerdict::inconclusive;
  std::size_t stable_from = 0;             // n0 for stable-so-far
  std::vector<std::size_t> wild_levels;    // base indices for wild-evidence
  std::string note;

  // deepest-level kernel order for base index n
  const StabilityRecord* record(std::size_t n, std::size_t level) const;
};

StabilityReport stability_report(const GroupChain& chain);

// (disc_order, psi_kernel_order) matrices, used for conjugation-invariance
// comparisons.
bool same_invariant_matrices(const StabilityReport& a, const StabilityReport& b);

}  // namespace chainforge
