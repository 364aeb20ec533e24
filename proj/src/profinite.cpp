#include "chainforge/profinite.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <set>

#include "chainforge/errors.hpp"
#include "chainforge/slgroup.hpp"

namespace chainforge {

void validate_family_spec(const FamilySpec& fam) {
  if (fam.primes.empty()) throw SpecError("family spec needs at least one prime");
  if (fam.primes.size() != fam.bits.size()) {
    throw SpecError("family spec: bits length must match primes length");
  }
  for (std::size_t i = 0; i < fam.primes.size(); ++i) {
    if (!is_prime(fam.primes[i])) {
      throw SpecError("family spec: " + std::to_string(fam.primes[i]) +
                      " is not prime");
    }
    if (i > 0 && fam.primes[i] <= fam.primes[i - 1]) {
      throw SpecError("family spec: primes must be strictly increasing");
    }
    if (fam.bits[i] != 1 && fam.bits[i] != 2) {
      throw SpecError("family spec: bits must be 1 or 2");
    }
  }
}

ProductSpec family_product_spec(const FamilySpec& fam) {
  validate_family_spec(fam);
  ProductSpec spec;
  for (std::uint64_t p : fam.primes) spec.factors.push_back(sl_group(3, p));
  // diagonal images of the integer transvections, one tuple per transvection
  const std::size_t gen_count = spec.factors[0].generators().size();
  for (std::size_t k = 0; k < gen_count; ++k) {
    std::vector<Element> parts;
    for (const auto& f : spec.factors) parts.push_back(f.generators()[k]);
    spec.dense_tuples.push_back(Element::tuple(std::move(parts)));
  }
  return spec;
}

SubproductSpec family_subproduct(const FamilySpec& fam,
                                 const ProductSpec& spec) {
  SubproductSpec sub;
  for (std::size_t i = 0; i < fam.primes.size(); ++i) {
    sub.factor_subgroups.push_back(
        sl_family_subgroup_in(spec.factors[i], fam.primes[i], fam.bits[i]));
  }
  return sub;
}

namespace {

Element tuple_identity(const std::vector<Group>& factors, std::size_t length) {
  std::vector<Element> parts;
  for (std::size_t i = 0; i < length; ++i) {
    parts.push_back(factors[i].identity());
  }
  return Element::tuple(std::move(parts));
}

// Product membership over the first `length` factors.
MembershipFn product_membership(std::vector<Group> factors, std::size_t length) {
  return [factors = std::move(factors), length](const Element& e) {
    if (e.kind() != ElementKind::tuple || e.parts().size() != length) {
      return false;
    }
    for (std::size_t i = 0; i < length; ++i) {
      if (!factors[i].contains(e.parts()[i])) return false;
    }
    return true;
  };
}

std::string density_certificate(const Group& factor,
                                const std::vector<Element>& component_gens) {
  auto ord = factor.order_factored().value();
  if (ord && *ord <= enumeration_limit()) {
    ElementSet closure = close_under_generators(
        factor.identity(), component_gens, enumeration_limit(),
        "density witness for " + factor.name());
    if (closure.size() != *ord) return "";
    return "enumerated-closure";
  }
  // Large factor: accept when the component generators contain the factor's
  // full generating set (the SL transvections).
  for (const auto& g : factor.generators()) {
    bool found = false;
    for (const auto& c : component_gens) {
      if (c == g) {
        found = true;
        break;
      }
    }
    if (!found) return "";
  }
  return "full-generator-set";
}

}  // namespace

namespace {

// Enumerating a truncated product is the expensive step and identical
// truncations recur across analyses (the bits choice does not affect them),
// so completed truncations are memoized by their construction data.
std::mutex g_truncation_mutex;
std::vector<std::pair<std::string, Truncation>> g_truncation_cache;

std::string truncation_signature(const ProductSpec& spec, std::size_t length) {
  std::string sig = std::to_string(length) + "@" +
                    std::to_string(enumeration_limit());
  for (std::size_t i = 0; i < length; ++i) {
    sig += "|" + spec.factors[i].name();
    for (const auto& g : spec.factors[i].generators()) sig += g.key();
  }
  for (const auto& t : spec.dense_tuples) sig += "#" + t.key();
  return sig;
}

}  // namespace

Truncation truncate_product(const ProductSpec& spec, std::size_t length) {
  if (length == 0 || length > spec.factors.size()) {
    throw DomainError("truncation length out of range");
  }
  const std::string sig = truncation_signature(spec, length);
  {
    std::lock_guard<std::mutex> lock(g_truncation_mutex);
    for (const auto& [key, cached] : g_truncation_cache) {
      if (key == sig) return cached;
    }
  }
  Truncation t;
  t.length = length;

  FactoredOrder product_order;
  std::vector<Element> product_gens;
  Element id = tuple_identity(spec.factors, length);
  for (std::size_t i = 0; i < length; ++i) {
    product_order *= spec.factors[i].order_factored();
    for (const auto& g : spec.factors[i].generators()) {
      std::vector<Element> parts;
      for (std::size_t j = 0; j < length; ++j) {
        parts.push_back(j == i ? g : spec.factors[j].identity());
      }
      product_gens.push_back(Element::tuple(std::move(parts)));
    }
  }
  std::vector<Group> kept(spec.factors.begin(), spec.factors.begin() + length);
  t.product = Group::from_generators(id, std::move(product_gens), "product")
                  .with_structural_membership(product_membership(kept, length))
                  .with_structural_order(product_order);

  std::vector<Element> dense_gens;
  for (const auto& tup : spec.dense_tuples) {
    if (tup.kind() != ElementKind::tuple ||
        tup.parts().size() != spec.factors.size()) {
      throw SpecError("dense generator tuple has wrong length");
    }
    dense_gens.push_back(tup.project(length));
  }
  // per-factor density witnesses
  for (std::size_t i = 0; i < length; ++i) {
    std::vector<Element> component;
    for (const auto& g : dense_gens) component.push_back(g.parts()[i]);
    std::string cert = density_certificate(spec.factors[i], component);
    if (cert.empty()) {
      throw SpecError("dense generators do not project onto factor " +
                      std::to_string(i) + " (" + spec.factors[i].name() + ")");
    }
    t.density_certificates.push_back(cert);
  }

  t.dense = Group::from_generators(id, std::move(dense_gens), "dense subgroup");
  auto pv = product_order.value();
  if (pv && *pv <= enumeration_limit()) {
    t.dense_is_full_product = (t.dense.elements().size() == *pv);
    if (t.dense_is_full_product) {
      t.dense = t.dense.with_structural_membership(
                           product_membership(kept, length))
                    .with_structural_order(product_order)
                    .with_known_elements(t.dense.elements());
    }
  } else {
    throw ResourceError("truncated product of order " + product_order.str() +
                        " exceeds enumeration bound " +
                        std::to_string(enumeration_limit()));
  }
  {
    std::lock_guard<std::mutex> lock(g_truncation_mutex);
    if (g_truncation_cache.size() >= 4) g_truncation_cache.erase(
        g_truncation_cache.begin());
    g_truncation_cache.emplace_back(sig, t);
  }
  return t;
}

namespace {

// {h in dense : h_i in A_i for all i < m}, with structural data when the
// dense subgroup is the whole product.
Subgroup chain_level_subgroup(const Truncation& t, const SubproductSpec& sub,
                              std::size_t m) {
  const std::size_t length = t.length;
  std::vector<Subgroup> amb(sub.factor_subgroups.begin(),
                            sub.factor_subgroups.begin() + length);
  MembershipFn member = [amb, m, length, dense = t.dense](const Element& e) {
    if (e.kind() != ElementKind::tuple || e.parts().size() != length) {
      return false;
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (!amb[i].contains(e.parts()[i])) return false;
    }
    for (std::size_t i = m; i < length; ++i) {
      if (!amb[i].parent().contains(e.parts()[i])) return false;
    }
    return dense.contains(e);
  };

  std::vector<Element> gens;
  FactoredOrder order;
  if (t.dense_is_full_product) {
    // blockwise generators of prod_{i<m} A_i x prod_{i>=m} H_i
    for (std::size_t i = 0; i < length; ++i) {
      const std::vector<Element>& fg =
          i < m ? sub.factor_subgroups[i].generators()
                : sub.factor_subgroups[i].parent().generators();
      order *= i < m ? sub.factor_subgroups[i].order_factored()
                     : sub.factor_subgroups[i].parent().order_factored();
      for (const auto& g : fg) {
        std::vector<Element> parts;
        for (std::size_t j = 0; j < length; ++j) {
          parts.push_back(j == i ? g
                                 : sub.factor_subgroups[j].parent().identity());
        }
        gens.push_back(Element::tuple(std::move(parts)));
      }
    }
  } else {
    // filter the dense enumeration
    ElementSet members;
    Element id = t.dense.identity();
    MembershipFn probe = member;
    for (const auto& e : t.dense.elements().items()) {
      if (probe(e)) members.insert(e);
    }
    gens = extract_generators(members, id);
    order = FactoredOrder::of(members.size());
  }
  Group level = Group::from_generators(t.dense.identity(), std::move(gens),
                                       "H_" + std::to_string(m))
                    .with_structural_membership(std::move(member))
                    .with_structural_order(order);
  return Subgroup(t.dense, std::move(level));
}

}  // namespace

LenstraResult lenstra_chain(const ProductSpec& spec, const SubproductSpec& sub,
                            std::size_t depth) {
  if (sub.factor_subgroups.size() != spec.factors.size()) {
    throw SpecError("subproduct spec must provide one subgroup per factor");
  }
  LenstraResult res;
  res.trunc = truncate_product(spec, depth);
  const Truncation& t = res.trunc;

  res.chain.base = t.dense;
  res.chain.mode = "profinite";

  for (std::size_t m = 1; m <= depth; ++m) {
    LenstraLevel lv;
    lv.m = m;
    lv.level = chain_level_subgroup(t, sub, m);
    res.chain.levels.push_back(lv.level);

    lv.core = normal_core(t.dense, lv.level);

    // core identity: core_H(H_m) = H ∩ U_m (identity prefix of length m)
    std::uint64_t expected = 0;
    if (t.dense_is_full_product) {
      FactoredOrder tail;
      for (std::size_t i = m; i < depth; ++i) {
        tail *= sub.factor_subgroups[i].parent().order_factored();
      }
      expected = *tail.value();
    } else {
      for (const auto& e : t.dense.elements().items()) {
        bool prefix_id = true;
        for (std::size_t i = 0; i < m && prefix_id; ++i) {
          prefix_id = e.parts()[i].is_identity();
        }
        if (prefix_id) ++expected;
      }
    }
    bool contained = true;
    for (const auto& e : lv.core.group().elements().items()) {
      for (std::size_t i = 0; i < m; ++i) {
        if (!e.parts()[i].is_identity()) {
          contained = false;
          break;
        }
      }
      if (!contained) break;
    }
    lv.core_identity_ok = contained && lv.core.order() == expected;

    // recovery: q_m(H_m) must equal q_m(D) = prod_{i<m} A_i elementwise
    for (const auto& e : lv.level.group().elements().items()) {
      lv.recovered.insert(e.project(m));
    }
    std::uint64_t d_order = 1;
    for (std::size_t i = 0; i < m; ++i) {
      d_order *= sub.factor_subgroups[i].order();
    }
    bool inside = true;
    for (const auto& d : lv.recovered.items()) {
      for (std::size_t i = 0; i < m; ++i) {
        if (!sub.factor_subgroups[i].contains(d.parts()[i])) {
          inside = false;
          break;
        }
      }
      if (!inside) break;
    }
    lv.recovery_ok = inside && lv.recovered.size() == d_order;
    res.levels.push_back(std::move(lv));
  }
  return res;
}

bool rational_core_check_factorwise(const SubproductSpec& sub) {
  for (const auto& a : sub.factor_subgroups) {
    if (a.order_factored() == a.parent().order_factored()) return false;
    Subgroup core = normal_core(a.parent(), a);
    if (core.order() != 1) return false;
  }
  return true;
}

bool rational_core_check_explicit(const ProductSpec& spec,
                                  const SubproductSpec& sub,
                                  std::size_t length) {
  Truncation t = truncate_product(spec, length);
  // D^length = prod_{i<length} A_i as a group of tuples
  std::vector<Element> dgens;
  for (std::size_t i = 0; i < length; ++i) {
    for (const auto& g : sub.factor_subgroups[i].generators()) {
      std::vector<Element> parts;
      for (std::size_t j = 0; j < length; ++j) {
        parts.push_back(j == i ? g : spec.factors[j].identity());
      }
      dgens.push_back(Element::tuple(std::move(parts)));
    }
  }
  Group d = Group::from_generators(tuple_identity(spec.factors, length),
                                   std::move(dgens), "D");
  ElementSet stable = conjugation_stable_subset(t.dense.generators(), d);
  return stable.size() == 1;
}

AdjointKernels adjoint_kernels_structural(const SubproductSpec& sub,
                                          std::size_t depth) {
  AdjointKernels k;
  for (std::size_t n = 0; n <= depth; ++n) {
    FactoredOrder o;
    for (std::size_t i = 0; i < n; ++i) {
      o *= sub.factor_subgroups[i].order_factored();
    }
    k.orders.push_back(o);
  }
  return k;
}

AdjointKernels adjoint_kernels_explicit(const ProductSpec& spec,
                                        const SubproductSpec& sub,
                                        std::size_t depth) {
  if (depth == 0 || depth > spec.factors.size()) {
    throw DomainError("adjoint kernel depth out of range");
  }
  // enumerate D = prod_{i<depth} A_i
  std::vector<Element> dgens;
  for (std::size_t i = 0; i < depth; ++i) {
    for (const auto& g : sub.factor_subgroups[i].generators()) {
      std::vector<Element> parts;
      for (std::size_t j = 0; j < depth; ++j) {
        parts.push_back(j == i ? g : spec.factors[j].identity());
      }
      dgens.push_back(Element::tuple(std::move(parts)));
    }
  }
  Group d = Group::from_generators(tuple_identity(spec.factors, depth),
                                   std::move(dgens), "D");

  AdjointKernels k;
  for (std::size_t n = 0; n <= depth; ++n) {
    // W_n generators: A_i components for i < n, full factors for i >= n
    std::vector<Element> wgens;
    for (std::size_t i = 0; i < depth; ++i) {
      const std::vector<Element>& fg =
          i < n ? sub.factor_subgroups[i].generators()
                : spec.factors[i].generators();
      for (const auto& g : fg) {
        std::vector<Element> parts;
        for (std::size_t j = 0; j < depth; ++j) {
          parts.push_back(j == i ? g : spec.factors[j].identity());
        }
        wgens.push_back(Element::tuple(std::move(parts)));
      }
    }
    ElementSet ker;
    for (const auto& e : d.elements().items()) {
      bool central = true;
      for (const auto& w : wgens) {
        if (!(e * w == w * e)) {
          central = false;
          break;
        }
      }
      if (central) ker.insert(e);
    }
    k.orders.push_back(FactoredOrder::of(ker.size()));
    k.explicit_sets.push_back(std::move(ker));
  }
  return k;
}

WildCertificate wild_certificate(const ProductSpec& spec,
                                 const SubproductSpec& sub,
                                 std::size_t depth) {
  if (depth == 0 || depth > spec.factors.size()) {
    throw DomainError("certificate depth out of range");
  }
  WildCertificate cert;

  // per-factor rational core attestations (the factorwise form of the
  // restricted-discriminant condition)
  for (std::size_t i = 0; i < depth; ++i) {
    const Subgroup& a = sub.factor_subgroups[i];
    CoreAttestation at;
    at.factor = i;
    at.factor_name = a.group().name() + " in " + a.parent().name();
    bool proper = a.order_factored() != a.parent().order_factored();
    at.trivial_core = proper && normal_core(a.parent(), a).order() == 1;
    cert.core_attestations.push_back(at);
  }

  AdjointKernels kn = adjoint_kernels_structural(sub, depth);
  cert.kernel_orders = kn.orders;

  for (std::size_t n = 0; n < depth; ++n) {
    if (kn.orders[n] == kn.orders[n + 1]) {
      cert.granted = false;
      cert.refusal_reason =
          "adjoint kernels stall: K_" + std::to_string(n) + " = K_" +
          std::to_string(n + 1) + " (factor subgroup " + std::to_string(n) +
          " is trivial)";
      return cert;
    }
  }
  for (const auto& at : cert.core_attestations) {
    if (!at.trivial_core) {
      cert.granted = false;
      cert.refusal_reason = "factor " + std::to_string(at.factor) +
                            " has nontrivial core; the restricted "
                            "discriminant condition fails";
      return cert;
    }
  }

  for (std::size_t n = 0; n < depth; ++n) {
    WildWitness w;
    w.level = n;
    // element of K_{n+1} \ K_n: only component n moves
    Element a = sub.factor_subgroups[n].generators().front();
    std::vector<Element> parts;
    for (std::size_t j = 0; j < depth; ++j) {
      parts.push_back(j == n ? a : spec.factors[j].identity());
    }
    w.element = Element::tuple(std::move(parts));

    // trivial on the deeper truncation: centralizes the W_{n+1} generators
    w.trivial_on_deeper = true;
    for (std::size_t i = 0; i < depth && w.trivial_on_deeper; ++i) {
      const std::vector<Element>& fg =
          i < n + 1 ? sub.factor_subgroups[i].generators()
                    : spec.factors[i].generators();
      for (const auto& g : fg) {
        std::vector<Element> wparts;
        for (std::size_t j = 0; j < depth; ++j) {
          wparts.push_back(j == i ? g : spec.factors[j].identity());
        }
        Element wg = Element::tuple(std::move(wparts));
        if (!(w.element * wg == wg * w.element)) {
          w.trivial_on_deeper = false;
          break;
        }
      }
    }

    // nontrivial on the shallower truncation: find a conjugate of the
    // factor-n component that escapes A_n
    const Group& factor = spec.factors[n];
    const Subgroup& an = sub.factor_subgroups[n];
    ElementSet orbit;
    orbit.insert(a);
    std::vector<Element> words{factor.identity()};
    std::deque<std::size_t> todo{0};
    bool found = false;
    while (!todo.empty() && !found) {
      std::size_t cur = todo.front();
      todo.pop_front();
      for (const auto& g : factor.generators()) {
        Element conj = g * orbit.at(cur) * g.inverse();
        Element word = g * words[cur];
        if (!an.contains(conj)) {
          // w = word^-1 satisfies w^-1 a w = conj outside A_n
          std::vector<Element> cparts;
          for (std::size_t j = 0; j < depth; ++j) {
            cparts.push_back(j == n ? word.inverse() : spec.factors[j].identity());
          }
          w.conjugator = Element::tuple(std::move(cparts));
          w.nontrivial_on_shallower = true;
          found = true;
          break;
        }
        if (orbit.insert(conj)) {
          words.push_back(word);
          todo.push_back(orbit.size() - 1);
        }
      }
    }
    if (!found) {
      throw InternalError("no escaping conjugate found despite trivial core "
                          "at factor " + std::to_string(n));
    }
    cert.witnesses.push_back(std::move(w));
  }
  cert.granted = true;
  return cert;
}

FamilyDiscriminant family_discriminants(const FamilySpec& fam, std::size_t n) {
  validate_family_spec(fam);
  if (n >= fam.depth()) throw DomainError("family discriminant index out of range");
  FamilyDiscriminant d;
  d.n = n;
  for (std::size_t i = n; i < fam.depth(); ++i) {
    d.factors.emplace_back(fam.primes[i], fam.bits[i]);
    d.order *= FactoredOrder::prime_power(fam.primes[i], fam.bits[i]);
  }
  d.kernel_prime = fam.primes[n];
  d.kernel_exponent = fam.bits[n];
  return d;
}

GroupChain family_to_chain(const FamilySpec& fam) {
  validate_family_spec(fam);
  ProductSpec spec = family_product_spec(fam);
  SubproductSpec sub = family_subproduct(fam, spec);
  LenstraResult res = lenstra_chain(spec, sub, fam.depth());
  return res.chain;
}

StabilityReport family_structural_report(const FamilySpec& fam) {
  validate_family_spec(fam);
  const std::size_t depth = fam.depth();
  StabilityReport rep;
  rep.depth = depth;
  rep.mode = "structural";

  auto sl3 = [&](std::size_t i) { return sl_order(3, fam.primes[i]); };
  auto a_ord = [&](std::size_t i) {
    return FactoredOrder::prime_power(fam.primes[i], fam.bits[i]);
  };

  for (std::size_t n = 0; n <= depth; ++n) {
    for (std::size_t l = n; l <= depth; ++l) {
      StabilityRecord r;
      r.n = n;
      r.level = l;
      for (std::size_t i = 0; i < l; ++i) r.level_order *= a_ord(i);
      for (std::size_t i = l; i < depth; ++i) r.level_order *= sl3(i);
      for (std::size_t i = 0; i < n; ++i) r.core_order *= a_ord(i);
      for (std::size_t i = l; i < depth; ++i) r.core_order *= sl3(i);
      r.disc_order = r.core_order.quotient_of(r.level_order);
      if (n + 1 <= l) r.psi_kernel_order = a_ord(n);
      rep.records.push_back(std::move(r));
    }
  }
  if (depth < 2) {
    rep.verdict = StabilityVerdict::inconclusive;
    rep.note = "depth " + std::to_string(depth) + " gives no usable kernel data";
  } else {
    rep.verdict = StabilityVerdict::wild_evidence;
    for (std::size_t n = 0; n + 1 <= depth; ++n) rep.wild_levels.push_back(n);
  }
  return rep;
}

}  // namespace chainforge
