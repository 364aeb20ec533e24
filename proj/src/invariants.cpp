#include "chainforge/invariants.hpp"

#include <algorithm>
#include <numeric>

#include "chainforge/errors.hpp"

namespace chainforge {

namespace {

std::uint64_t lcm_u64(std::uint64_t a, std::uint64_t b) {
  return a / std::gcd(a, b) * b;
}

Element pow_element(const Element& e, std::uint64_t k) {
  Element acc = e.identity_like();
  Element base = e;
  while (k > 0) {
    if (k & 1) acc = acc * base;
    base = base * base;
    k >>= 1;
  }
  return acc;
}

// Partition of an abelian p-group from the counts of p^k-torsion elements:
// with N_k = #{x : x^(p^k) = e} and m_k = log_p(N_k) - log_p(N_{k-1}), the
// m_k sequence is the conjugate partition of the type.
std::vector<std::uint32_t> abelian_p_type(const Group& g, std::uint64_t p,
                                          std::uint32_t max_exp) {
  std::vector<std::uint32_t> logs;  // log_p N_k for k = 0..max_exp
  std::uint64_t pk = 1;
  for (std::uint32_t k = 0; k <= max_exp; ++k) {
    std::uint64_t count = 0;
    for (const auto& e : g.elements().items()) {
      if (pow_element(e, pk).is_identity()) ++count;
    }
    std::uint32_t lg = 0;
    while (count > 1) {
      count /= p;
      ++lg;
    }
    logs.push_back(lg);
    if (k < max_exp) pk *= p;
  }
  std::vector<std::uint32_t> conjugate;  // m_k = #{j : lambda_j >= k}
  for (std::uint32_t k = 1; k <= max_exp; ++k) {
    conjugate.push_back(logs[k] - logs[k - 1]);
  }
  // invert the conjugate partition
  std::vector<std::uint32_t> type;
  for (std::uint32_t j = 0; j < (conjugate.empty() ? 0u : conjugate[0]); ++j) {
    std::uint32_t lambda = 0;
    for (std::uint32_t k = 0; k < conjugate.size(); ++k) {
      if (conjugate[k] > j) lambda = k + 1;
    }
    type.push_back(lambda);
  }
  return type;
}

}  // namespace

CoarseInvariants coarse_invariants(const Group& g) {
  CoarseInvariants inv;
  const auto& elems = g.elements();
  inv.order = elems.size();
  for (const auto& e : elems.items()) {
    std::uint64_t k = e.element_order();
    inv.order_histogram[k]++;
    inv.exponent = lcm_u64(inv.exponent, k);
  }
  inv.abelian = true;
  for (std::size_t i = 0; i < g.generators().size() && inv.abelian; ++i) {
    for (std::size_t j = i + 1; j < g.generators().size(); ++j) {
      const Element& a = g.generators()[i];
      const Element& b = g.generators()[j];
      if (!(a * b == b * a)) {
        inv.abelian = false;
        break;
      }
    }
  }
  if (inv.abelian) {
    FactoredOrder fo = FactoredOrder::of(inv.order);
    for (const auto& [p, e] : fo.factors()) {
      for (std::uint32_t lambda : abelian_p_type(g, p, e)) {
        std::uint64_t pp = 1;
        for (std::uint32_t i = 0; i < lambda; ++i) pp *= p;
        inv.abelian_invariants.push_back(pp);
      }
    }
    std::sort(inv.abelian_invariants.begin(), inv.abelian_invariants.end());
  }
  return inv;
}

bool same_coarse_invariants(const CoarseInvariants& a,
                            const CoarseInvariants& b) {
  return a.order == b.order && a.exponent == b.exponent &&
         a.abelian == b.abelian &&
         a.abelian_invariants == b.abelian_invariants &&
         a.order_histogram == b.order_histogram;
}

namespace {

struct IsoSearch {
  const Group& a;
  const Group& b;
  std::vector<Element> images;

  bool try_extend(std::size_t k) {
    if (k == a.generators().size()) return check_full();
    std::uint64_t want = a.generators()[k].element_order();
    for (const auto& cand : b.elements().items()) {
      if (cand.element_order() != want) continue;
      images.push_back(cand);
      if (partial_consistent() && try_extend(k + 1)) return true;
      images.pop_back();
    }
    return false;
  }

  // graph closure over the assigned prefix; prunes non-homomorphisms early
  bool partial_consistent() {
    std::vector<Element> pair_gens;
    for (std::size_t i = 0; i < images.size(); ++i) {
      pair_gens.push_back(Element::tuple({a.generators()[i], images[i]}));
    }
    Element pid = Element::tuple({a.identity(), b.identity()});
    std::uint64_t cap = a.elements().size() + 1;
    ElementSet graph;
    try {
      graph = close_under_generators(pid, pair_gens, cap, "iso graph");
    } catch (const ResourceError&) {
      return false;  // graph larger than |A|: not a function
    }
    std::unordered_map<Element, Element, ElementHash> fn;
    for (const auto& pr : graph.items()) {
      auto [it, fresh] = fn.emplace(pr.parts()[0], pr.parts()[1]);
      if (!fresh && !(it->second == pr.parts()[1])) return false;
    }
    return true;
  }

  bool check_full() {
    // full graph must be a bijective function on all of A
    std::vector<Element> pair_gens;
    for (std::size_t i = 0; i < images.size(); ++i) {
      pair_gens.push_back(Element::tuple({a.generators()[i], images[i]}));
    }
    Element pid = Element::tuple({a.identity(), b.identity()});
    ElementSet graph;
    try {
      graph = close_under_generators(pid, pair_gens, a.elements().size() + 1,
                                     "iso graph");
    } catch (const ResourceError&) {
      return false;
    }
    if (graph.size() != a.elements().size()) return false;
    std::unordered_map<Element, Element, ElementHash> fn;
    ElementSet image_set;
    for (const auto& pr : graph.items()) {
      auto [it, fresh] = fn.emplace(pr.parts()[0], pr.parts()[1]);
      if (!fresh && !(it->second == pr.parts()[1])) return false;
      image_set.insert(pr.parts()[1]);
    }
    return image_set.size() == b.elements().size();
  }
};

}  // namespace

bool isomorphic_brute_force(const Group& a, const Group& b) {
  if (a.order_factored() != b.order_factored()) return false;
  auto av = a.order_factored().value();
  if (!av || *av > kIsomorphismBruteForceBound) {
    throw DomainError("exact isomorphism testing is limited to orders <= " +
                      std::to_string(kIsomorphismBruteForceBound));
  }
  if (!same_coarse_invariants(coarse_invariants(a), coarse_invariants(b))) {
    return false;
  }
  IsoSearch search{a, b, {}};
  return search.try_extend(0);
}

}  // namespace chainforge
