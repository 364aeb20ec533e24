#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chainforge/chain.hpp"
#include "chainforge/group.hpp"
#include "chainforge/tower.hpp"

namespace chainforge {

// A product of finite groups together with generator tuples for a dense
// (in the truncated sense: componentwise surjective) subgroup.
struct ProductSpec {
  std::vector<Group> factors;
  std::vector<Element> dense_tuples;  // tuple elements, one part per factor
};

// Per-factor proper subgroups A_i <= H_i cutting out the closed subgroup
// D = prod A_i of the product.
struct SubproductSpec {
  std::vector<Subgroup> factor_subgroups;
};

// Prime list plus the {1,2}-valued selector choosing the order-p or
// order-p^2 unitriangular subgroup in each SL_3(Z/pZ) factor.
struct FamilySpec {
  std::vector<std::uint64_t> primes;
  std::vector<int> bits;
  std::size_t depth() const { return primes.size(); }
};

void validate_family_spec(const FamilySpec& fam);

ProductSpec family_product_spec(const FamilySpec& fam);
SubproductSpec family_subproduct(const FamilySpec& fam, const ProductSpec& spec);

// Finite truncation: the product of the first `length` factors and the
// closure of the truncated generator tuples inside it.  Componentwise
// surjectivity is certified per factor (enumerated closure for small
// factors, a full-transvection-set check for large SL factors) and the
// certificate kind is recorded.
struct Truncation {
  std::size_t length = 0;
  Group product;  // structural membership and order
  Group dense;    // closure of the truncated tuples
  bool dense_is_full_product = false;
  std::vector<std::string> density_certificates;  // one entry per factor
};

Truncation truncate_product(const ProductSpec& spec, std::size_t length);

// One level of the chain H_m = H ∩ (U_m · D) at truncation, its core in H,
// and the recovered discriminant image q_m(H_m).
struct LenstraLevel {
  std::size_t m = 0;
  Subgroup level;          // H_m inside the dense subgroup
  Subgroup core;           // core_H(H_m), computed by conjugacy orbits
  bool core_identity_ok;   // core equals {h in H : h_i = e for i < m}
  ElementSet recovered;    // q_m(H_m): tuples of length m
  bool recovery_ok;        // recovered set equals q_m(D) = prod_{i<m} A_i
};

struct LenstraResult {
  Truncation trunc;
  GroupChain chain;  // base = dense subgroup, levels H_1..H_T
  std::vector<LenstraLevel> levels;
};

LenstraResult lenstra_chain(const ProductSpec& spec, const SubproductSpec& sub,
                            std::size_t depth);

// Triviality of the rational core: intersection over the dense subgroup's
// conjugates of D (explicit), or of every per-factor core (factorwise).
bool rational_core_check_explicit(const ProductSpec& spec,
                                  const SubproductSpec& sub, std::size_t length);
bool rational_core_check_factorwise(const SubproductSpec& sub);

// Kernels of the conjugation action of D on the clopen subgroups W_n:
// structurally prod_{i<n} A_i, explicitly the centralizer condition of D
// against the W_n generator tuples.
struct AdjointKernels {
  std::vector<FactoredOrder> orders;      // |K_n| for n = 0..depth
  std::vector<ElementSet> explicit_sets;  // nonempty in explicit mode
};

AdjointKernels adjoint_kernels_structural(const SubproductSpec& sub,
                                          std::size_t depth);
AdjointKernels adjoint_kernels_explicit(const ProductSpec& spec,
                                        const SubproductSpec& sub,
                                        std::size_t depth);

// Wildness certificate: strictly increasing adjoint kernels witnessed by
// elements that centralize the deeper clopen subgroup but move a coset of
// the shallower one, plus per-factor core-triviality attestations.
struct WildWitness {
  std::size_t level = 0;    // witness lies in K_{level+1} \ K_{level}
  Element element;          // full-length tuple, only component `level` moves
  Element conjugator;       // w with w^-1 (element) w outside D, factor `level`
  bool trivial_on_deeper = false;
  bool nontrivial_on_shallower = false;
};

struct CoreAttestation {
  std::size_t factor = 0;
  std::string factor_name;
  bool trivial_core = false;
};

struct WildCertificate {
  bool granted = false;
  std::string refusal_reason;
  std::vector<WildWitness> witnesses;
  std::vector<CoreAttestation> core_attestations;
  std::vector<FactoredOrder> kernel_orders;  // |K_n|, n = 0..depth
};

WildCertificate wild_certificate(const ProductSpec& spec,
                                 const SubproductSpec& sub, std::size_t depth);

// Closed-form description of the truncated discriminant group D_n for the
// family: the product of the remaining unitriangular factors.
struct FamilyDiscriminant {
  std::size_t n = 0;
  std::vector<std::pair<std::uint64_t, int>> factors;  // (p_i, s_i), i >= n
  FactoredOrder order;
  std::uint64_t kernel_prime = 0;  // ker(psi_{n,n+1}) = A^{s_n}_{p_n}
  int kernel_exponent = 0;
};

FamilyDiscriminant family_discriminants(const FamilySpec& fam, std::size_t n);

// Explicit chain realization inside the truncated product.  ResourceError
// when the product exceeds the enumeration bound (structural mode remains
// available).
GroupChain family_to_chain(const FamilySpec& fam);

// Stability report from the closed forms, shaped exactly like the explicit
// one so the two modes can be compared record by record.
StabilityReport family_structural_report(const FamilySpec& fam);

}  // namespace chainforge
