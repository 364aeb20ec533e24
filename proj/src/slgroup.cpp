#include "chainforge/slgroup.hpp"

#include <string>

#include "chainforge/errors.hpp"

namespace chainforge {

FactoredOrder sl_order(std::uint32_t n, std::uint64_t m) {
  // |SL_n(F_p)| = p^(n(n-1)/2) * prod_{k=2..n} (p^k - 1);
  // |SL_n(Z/p^e)| = p^((e-1)(n^2-1)) * |SL_n(F_p)|; multiplicative by CRT.
  FactoredOrder total;
  const FactoredOrder m_factored = FactoredOrder::of(m);
  for (const auto& [p, e] : m_factored.factors()) {
    FactoredOrder local = FactoredOrder::prime_power(p, n * (n - 1) / 2);
    std::uint64_t pk = p;
    for (std::uint32_t k = 2; k <= n; ++k) {
      pk *= p;
      local *= FactoredOrder::of(pk - 1);
    }
    local *= FactoredOrder::prime_power(p, (e - 1) * (n * n - 1));
    total *= local;
  }
  return total;
}

Group sl_group(std::uint32_t n, std::uint64_t m) {
  if (n < 2) throw DomainError("sl_group needs dimension >= 2");
  if (m < 2) throw DomainError("sl_group needs modulus >= 2");
  if (m > 0xffffffffull) throw DomainError("sl_group modulus too large");
  std::vector<Element> gens;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      if (i == j) continue;
      std::vector<std::uint32_t> a(std::size_t(n) * n, 0u);
      for (std::uint32_t k = 0; k < n; ++k) a[std::size_t(k) * n + k] = 1u;
      a[std::size_t(i) * n + j] = 1u;
      gens.push_back(Element::matrix(n, (std::uint32_t)m, std::move(a)));
    }
  }
  std::uint32_t mod = (std::uint32_t)m;
  MembershipFn membership = [n, mod](const Element& e) {
    return e.kind() == ElementKind::matrix && e.dim() == n &&
           e.modulus() == mod && e.det() == 1u % mod;
  };
  std::string name = "SL" + std::to_string(n) + "(Z/" + std::to_string(m) + ")";
  return Group::from_generators(Element::matrix_identity(n, mod),
                                std::move(gens), name)
      .with_structural_membership(std::move(membership))
      .with_structural_order(sl_order(n, m));
}

Subgroup sl_family_subgroup_in(const Group& sl3p, std::uint64_t p,
                               int variant) {
  if (!is_prime(p)) throw DomainError("family subgroup needs a prime modulus");
  if (variant != 1 && variant != 2) {
    throw DomainError("family subgroup variant must be 1 or 2");
  }
  std::uint32_t mod = (std::uint32_t)p;
  std::vector<Element> gens;
  gens.push_back(Element::matrix(3, mod, {1, 0, 0, 0, 1, 1, 0, 0, 1}));
  if (variant == 2) {
    gens.push_back(Element::matrix(3, mod, {1, 0, 1, 0, 1, 0, 0, 0, 1}));
  }
  // unitriangular with free (1,2) entry, plus free (0,2) entry for variant 2
  MembershipFn membership = [mod, variant](const Element& e) {
    if (e.kind() != ElementKind::matrix || e.dim() != 3 || e.modulus() != mod) {
      return false;
    }
    const auto& a = e.entries();
    if (a[0] != 1 || a[4] != 1 || a[8] != 1) return false;
    if (a[1] != 0 || a[3] != 0 || a[6] != 0 || a[7] != 0) return false;
    if (variant == 1 && a[2] != 0) return false;
    return true;
  };
  std::string name =
      "A" + std::to_string(variant) + "_" + std::to_string(p);
  Group self = Group::from_generators(Element::matrix_identity(3, mod),
                                      std::move(gens), name)
                   .with_structural_membership(std::move(membership))
                   .with_structural_order(
                       FactoredOrder::prime_power(p, (std::uint32_t)variant));
  for (const auto& g : self.generators()) {
    if (!sl3p.contains(g)) {
      throw DomainError("family subgroup generators do not lie in the group");
    }
  }
  return Subgroup(sl3p, std::move(self));
}

Subgroup sl_family_subgroup(std::uint64_t p, int variant) {
  return sl_family_subgroup_in(sl_group(3, p), p, variant);
}

}  // namespace chainforge
