#pragma once

#include <cstdint>

#include "chainforge/group.hpp"

namespace chainforge {

// |SL_n(Z/mZ)| for arbitrary m >= 2 (multiplicative over prime powers).
FactoredOrder sl_order(std::uint32_t n, std::uint64_t m);

// SL_n(Z/mZ) generated by the elementary transvections I + E_ij, with
// structural membership (square shape, det = 1) and structural order.
Group sl_group(std::uint32_t n, std::uint64_t m);

// The two one-parameter / two-parameter unitriangular families inside
// SL_3(Z/pZ): variant 1 has order p, variant 2 has order p^2.  Both have
// trivial normal core in SL_3(Z/pZ); membership is structural.
Subgroup sl_family_subgroup(std::uint64_t p, int variant);

// Same subgroup viewed inside a caller-provided copy of SL_3(Z/pZ).
Subgroup sl_family_subgroup_in(const Group& sl3p, std::uint64_t p, int variant);

}  // namespace chainforge
