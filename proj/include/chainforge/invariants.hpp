#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "chainforge/group.hpp"

namespace chainforge {

// Cheap isomorphism obstructions.
struct CoarseInvariants {
  std::uint64_t order = 1;
  std::uint64_t exponent = 1;
  bool abelian = true;
  // elementary divisors (prime powers, ascending), abelian groups only
  std::vector<std::uint64_t> abelian_invariants;
  std::map<std::uint64_t, std::uint64_t> order_histogram;  // element order -> count
};

CoarseInvariants coarse_invariants(const Group& g);

bool same_coarse_invariants(const CoarseInvariants& a, const CoarseInvariants& b);

// Exact isomorphism by backtracking over generator images.  Only for orders
// <= 512 (DomainError beyond); coarse obstructions are checked first.
bool isomorphic_brute_force(const Group& a, const Group& b);

constexpr std::uint64_t kIsomorphismBruteForceBound = 512;

}  // namespace chainforge
