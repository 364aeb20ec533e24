#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "chainforge/errors.hpp"
#include "chainforge/profinite.hpp"
#include "chainforge/slgroup.hpp"
#include "oracles.hpp"

using namespace chainforge;

namespace {

FamilySpec fam(std::vector<std::uint64_t> primes, std::vector<int> bits) {
  return FamilySpec{std::move(primes), std::move(bits)};
}

}  // namespace

TEST_CASE("truncation: single factor density and the full (2,3) product") {
  FamilySpec f = fam({2, 3}, {1, 1});
  ProductSpec spec = family_product_spec(f);

  Truncation one = truncate_product(spec, 1);
  CHECK(one.dense_is_full_product);
  CHECK(one.dense.order() == 168);

  Truncation two = truncate_product(spec, 2);
  CHECK(two.dense_is_full_product);
  CHECK(two.dense.order() == 168ull * 5616ull);  // CRT-predicted density
  CHECK(two.product.order() == 168ull * 5616ull);
  CHECK(two.density_certificates ==
        std::vector<std::string>{"enumerated-closure", "enumerated-closure"});
}

TEST_CASE("non-surjective dense tuples are rejected with the factor named") {
  ProductSpec spec;
  spec.factors.push_back(sl_group(3, 2));
  spec.factors.push_back(sl_group(3, 3));
  // identity in component 0: projects onto the trivial subgroup only
  std::vector<Element> parts{spec.factors[0].identity(),
                             spec.factors[1].generators()[0]};
  spec.dense_tuples.push_back(Element::tuple(parts));
  CHECK_THROWS_WITH_AS(truncate_product(spec, 2), doctest::Contains("factor 0"),
                       SpecError);
}

TEST_CASE("lenstra chain: degenerate full-subgroup choice gives no descent") {
  FamilySpec f = fam({2, 3}, {1, 1});
  ProductSpec spec = family_product_spec(f);
  SubproductSpec whole;
  for (const auto& factor : spec.factors) {
    whole.factor_subgroups.emplace_back(factor, factor);
  }
  LenstraResult res = lenstra_chain(spec, whole, 2);
  for (const auto& lv : res.levels) {
    CHECK(lv.level.order_factored() == res.trunc.dense.order_factored());
    CHECK(lv.recovery_ok);  // q_m(H_m) is the full product prefix, as is q_m(D)
  }
  // with D = H-hat the rational core is everything, so the core identity
  // C_m = H ∩ U_m must fail (the cores are the whole group)
  CHECK_FALSE(res.levels[0].core_identity_ok);
}

TEST_CASE("lenstra chain on the (2,3) family recovers the discriminant") {
  for (int b0 : {1, 2}) {
    for (int b1 : {1, 2}) {
      FamilySpec f = fam({2, 3}, {b0, b1});
      ProductSpec spec = family_product_spec(f);
      SubproductSpec sub = family_subproduct(f, spec);
      LenstraResult res = lenstra_chain(spec, sub, 2);

      std::uint64_t a0 = 1;
      for (int i = 0; i < b0; ++i) a0 *= 2;
      std::uint64_t a1 = 1;
      for (int i = 0; i < b1; ++i) a1 *= 3;

      CHECK(res.levels[0].level.order() == a0 * 5616);
      CHECK(res.levels[1].level.order() == a0 * a1);
      CHECK(res.levels[0].core_identity_ok);
      CHECK(res.levels[1].core_identity_ok);
      CHECK(res.levels[0].recovery_ok);
      CHECK(res.levels[1].recovery_ok);
      CHECK(res.levels[0].recovered.size() == a0);
      CHECK(res.levels[1].recovered.size() == a0 * a1);  // |D^2| = 2*3 for (1,1)
      CHECK(res.levels[0].core.order() == 5616);
      CHECK(res.levels[1].core.order() == 1);
    }
  }
}

TEST_CASE("rational core checks: degenerate false, family true, modes agree") {
  FamilySpec f = fam({2, 3}, {1, 2});
  ProductSpec spec = family_product_spec(f);
  SubproductSpec sub = family_subproduct(f, spec);
  CHECK(rational_core_check_factorwise(sub));
  CHECK(rational_core_check_explicit(spec, sub, 2));

  SubproductSpec whole;
  for (const auto& factor : spec.factors) {
    whole.factor_subgroups.emplace_back(factor, factor);
  }
  CHECK_FALSE(rational_core_check_factorwise(whole));
}

TEST_CASE("adjoint kernels grow by one factor per level") {
  FamilySpec f = fam({2, 3, 5}, {1, 2, 1});
  ProductSpec spec = family_product_spec(f);
  SubproductSpec sub = family_subproduct(f, spec);

  AdjointKernels structural = adjoint_kernels_structural(sub, 3);
  CHECK(structural.orders[0].is_one());  // K_0 is trivial
  CHECK(structural.orders[2] ==
        FactoredOrder::of(2) * FactoredOrder::of(9));  // |A_2| * |A_3|
  for (std::size_t n = 0; n + 1 <= 3; ++n) {
    CHECK(structural.orders[n].divides(structural.orders[n + 1]));
  }

  // explicit centralizer computation agrees where the product is enumerable
  FamilySpec f2 = fam({2, 3}, {2, 1});
  ProductSpec spec2 = family_product_spec(f2);
  SubproductSpec sub2 = family_subproduct(f2, spec2);
  AdjointKernels exp = adjoint_kernels_explicit(spec2, sub2, 2);
  AdjointKernels str = adjoint_kernels_structural(sub2, 2);
  REQUIRE(exp.orders.size() == str.orders.size());
  for (std::size_t n = 0; n < exp.orders.size(); ++n) {
    CHECK(exp.orders[n] == str.orders[n]);
  }
  // monotone as sets
  for (std::size_t n = 0; n + 1 < exp.explicit_sets.size(); ++n) {
    for (const auto& e : exp.explicit_sets[n].items()) {
      CHECK(exp.explicit_sets[n + 1].contains(e));
    }
  }
}

TEST_CASE("wild certificate: witnesses verified on both sides") {
  FamilySpec f = fam({2, 3, 5, 7}, {1, 2, 1, 2});
  ProductSpec spec = family_product_spec(f);
  SubproductSpec sub = family_subproduct(f, spec);
  WildCertificate cert = wild_certificate(spec, sub, 4);
  CHECK(cert.granted);
  REQUIRE(cert.witnesses.size() == 4);
  for (const auto& w : cert.witnesses) {
    CHECK(w.trivial_on_deeper);
    CHECK(w.nontrivial_on_shallower);
    // the recorded conjugator genuinely moves the witness out of D
    const Element& a = w.element.parts()[w.level];
    const Element& c = w.conjugator.parts()[w.level];
    Element moved = c.inverse() * a * c;
    CHECK_FALSE(sub.factor_subgroups[w.level].contains(moved));
  }
  for (const auto& at : cert.core_attestations) CHECK(at.trivial_core);
  // kernel ratios are exactly p_n^{s_n}
  CHECK(cert.kernel_orders[1].quotient_of(cert.kernel_orders[2]) ==
        FactoredOrder::of(9));

  // all-trivial factor subgroups stall the kernels: refusal
  SubproductSpec trivial_sub;
  for (const auto& factor : spec.factors) {
    Group t = Group::from_generators(factor.identity(), {}, "1");
    trivial_sub.factor_subgroups.emplace_back(factor, t);
  }
  WildCertificate refusal = wild_certificate(spec, trivial_sub, 4);
  CHECK_FALSE(refusal.granted);
  CHECK(refusal.refusal_reason.find("stall") != std::string::npos);
}

TEST_CASE("family discriminant descriptors and the kernel law") {
  FamilySpec f = fam({2, 3, 5}, {1, 1, 1});
  FamilyDiscriminant d1 = family_discriminants(f, 1);
  CHECK(d1.order == FactoredOrder::of(15));  // 3 * 5 at depth 3
  CHECK(d1.kernel_prime == 3);
  CHECK(d1.kernel_exponent == 1);

  FamilyDiscriminant d0 = family_discriminants(f, 0);
  CHECK(d0.order == FactoredOrder::of(30));
  CHECK_THROWS_AS(family_discriminants(f, 3), DomainError);
}

TEST_CASE("family chains: explicit realization matches the closed forms") {
  // single factor: depth-1 chain inside SL_3(Z/2Z) with G_1 = A^1_2
  GroupChain single = family_to_chain(fam({2}, {1}));
  validate_chain(single);
  CHECK(single.base.order() == 168);
  CHECK(single.level(1).order() == 2);

  // spec'd example: primes (2,3), bits (2,1): wild evidence, kernel 4 at n=0
  GroupChain chain = family_to_chain(fam({2, 3}, {2, 1}));
  StabilityReport rep = stability_report(chain);
  CHECK(rep.verdict == StabilityVerdict::wild_evidence);
  REQUIRE(rep.record(0, 2) != nullptr);
  CHECK(*rep.record(0, 2)->psi_kernel_order == FactoredOrder::of(4));

  // structural and explicit reports agree record by record
  for (int b0 : {1, 2}) {
    for (int b1 : {1, 2}) {
      FamilySpec f = fam({2, 3}, {b0, b1});
      StabilityReport structural = family_structural_report(f);
      StabilityReport explicit_rep = stability_report(family_to_chain(f));
      CHECK(structural.verdict == explicit_rep.verdict);
      REQUIRE(structural.records.size() == explicit_rep.records.size());
      for (std::size_t i = 0; i < structural.records.size(); ++i) {
        const auto& a = structural.records[i];
        const auto& b = explicit_rep.records[i];
        CHECK(a.n == b.n);
        CHECK(a.level == b.level);
        CHECK(a.level_order == b.level_order);
        CHECK(a.core_order == b.core_order);
        CHECK(a.disc_order == b.disc_order);
        CHECK(a.psi_kernel_order.has_value() == b.psi_kernel_order.has_value());
        if (a.psi_kernel_order) {
          CHECK(*a.psi_kernel_order == *b.psi_kernel_order);
        }
      }
    }
  }

  // single-prime window p = 5, both variants
  for (int b : {1, 2}) {
    FamilySpec f = fam({5}, {b});
    StabilityReport structural = family_structural_report(f);
    StabilityReport explicit_rep = stability_report(family_to_chain(f));
    REQUIRE(structural.records.size() == explicit_rep.records.size());
    for (std::size_t i = 0; i < structural.records.size(); ++i) {
      CHECK(structural.records[i].disc_order ==
            explicit_rep.records[i].disc_order);
      CHECK(structural.records[i].core_order ==
            explicit_rep.records[i].core_order);
    }
  }

  // out-of-bounds products direct the caller to structural mode
  CHECK_THROWS_AS(family_to_chain(fam({2, 3, 5}, {1, 1, 1})), ResourceError);
}

TEST_CASE("structural stability report has the wild shape") {
  FamilySpec f = fam({2, 3, 5, 7}, {1, 2, 1, 2});
  StabilityReport rep = family_structural_report(f);
  CHECK(rep.verdict == StabilityVerdict::wild_evidence);
  CHECK(rep.wild_levels == std::vector<std::size_t>{0, 1, 2, 3});
  // kernels are p_n^{s_n} at every measured level
  for (const auto& r : rep.records) {
    if (r.psi_kernel_order) {
      FactoredOrder expected = FactoredOrder::prime_power(
          f.primes[r.n], (std::uint32_t)f.bits[r.n]);
      CHECK(*r.psi_kernel_order == expected);
    }
  }
  // discriminant order at (0, depth) is the full product of the pieces
  REQUIRE(rep.record(0, 4) != nullptr);
  CHECK(rep.record(0, 4)->disc_order ==
        FactoredOrder::of(2) * FactoredOrder::of(9) * FactoredOrder::of(5) *
            FactoredOrder::of(49));
}
