#include "chainforge/taileq.hpp"

#include <algorithm>

#include "chainforge/errors.hpp"
#include "chainforge/invariants.hpp"

namespace chainforge {

FactoredOrder HomSequence::order_at(std::size_t i) const {
  if (is_structural()) return structural->orders.at(i);
  return groups.at(i).order_factored();
}

FactoredOrder HomSequence::kernel_order_at(std::size_t i) const {
  if (is_structural()) return structural->kernel_orders.at(i);
  return order_at(i + 1).quotient_of(order_at(i));
}

HomSequence family_sequence(const FamilySpec& fam) {
  validate_family_spec(fam);
  HomSequence seq;
  StructuralSequence s;
  std::vector<std::vector<std::pair<std::uint64_t, int>>> factors;
  for (std::size_t n = 0; n < fam.depth(); ++n) {
    FamilyDiscriminant d = family_discriminants(fam, n);
    s.orders.push_back(d.order);
    factors.push_back(d.factors);
    if (n + 1 < fam.depth()) {
      s.kernel_orders.push_back(
          FactoredOrder::prime_power(d.kernel_prime, d.kernel_exponent));
    }
  }
  s.level_factors = std::move(factors);
  seq.structural = std::move(s);
  return seq;
}

void check_sequence(const HomSequence& seq) {
  if (seq.is_structural()) {
    const auto& s = *seq.structural;
    if (s.orders.empty()) throw SpecError("empty structural sequence");
    if (s.kernel_orders.size() + 1 != s.orders.size()) {
      throw SpecError("structural sequence needs one kernel order per map");
    }
    for (std::size_t i = 0; i + 1 < s.orders.size(); ++i) {
      if (!(s.kernel_orders[i] * s.orders[i + 1] == s.orders[i])) {
        throw SpecError("map " + std::to_string(i) +
                        " is not surjective: |kernel| * |codomain| != |domain|");
      }
    }
    return;
  }
  if (seq.groups.empty()) throw SpecError("empty homomorphism sequence");
  if (seq.maps.size() + 1 != seq.groups.size()) {
    throw SpecError("sequence needs one map between consecutive groups");
  }
  for (std::size_t i = 0; i < seq.maps.size(); ++i) {
    seq.maps[i].validate();
    if (!seq.maps[i].is_surjective()) {
      throw SpecError("map " + std::to_string(i) +
                      " is not surjective: image order " +
                      seq.maps[i].image().order_factored().str() +
                      " < codomain order " +
                      seq.groups[i + 1].order_factored().str());
    }
  }
}

ConstancyVerdict asymptotically_constant(const HomSequence& seq,
                                         std::size_t window) {
  check_sequence(seq);
  std::size_t maps = seq.length() > 0 ? seq.length() - 1 : 0;
  std::size_t examined = std::min(window, maps);
  ConstancyVerdict v;
  v.window = examined;
  // trailing run of trivial kernels
  std::size_t from = examined;
  for (std::size_t i = examined; i-- > 0;) {
    if (seq.kernel_order_at(i).is_one()) {
      from = i;
    } else {
      break;
    }
  }
  if (from < examined || examined == 0) {
    v.constant_from_some_index = true;
    v.from = examined == 0 ? 0 : from;
  }
  return v;
}

namespace {

// surjection possible by order arithmetic, A -> B
bool can_surject(const FactoredOrder& a, const FactoredOrder& b) {
  return b.divides(a);
}

std::vector<ObstructionEntry> factor_obstructions(
    const StructuralSequence& sa, const StructuralSequence& sb,
    std::size_t from) {
  std::vector<ObstructionEntry> out;
  if (!sa.level_factors || !sb.level_factors) return out;
  const auto& fa = *sa.level_factors;
  const auto& fb = *sb.level_factors;
  std::size_t n = std::min(fa.size(), fb.size());
  for (std::size_t i = from; i < n; ++i) {
    std::size_t m = std::min(fa[i].size(), fb[i].size());
    for (std::size_t j = 0; j < m; ++j) {
      if (fa[i][j].first == fb[i][j].first &&
          fa[i][j].second != fb[i][j].second) {
        ObstructionEntry e;
        e.index = i;
        e.prime = fa[i][j].first;
        e.left_exponent = fa[i][j].second;
        e.right_exponent = fb[i][j].second;
        e.reason = "the " + std::to_string(e.prime) +
                   "-primary pieces have orders " + std::to_string(e.prime) +
                   "^" + std::to_string(e.left_exponent) + " vs " +
                   std::to_string(e.prime) + "^" +
                   std::to_string(e.right_exponent) +
                   "; a group of the smaller order cannot map onto the larger";
        out.push_back(std::move(e));
        break;  // one entry per index
      }
    }
  }
  return out;
}

// explicit-mode helper: the unique extension of h along a surjection.
// h_next(phi(x)) := psi(h(x)); returns nullopt when not a well-defined iso.
std::optional<Homomorphism> propagate_iso(const Homomorphism& h,
                                          const Homomorphism& phi,
                                          const Homomorphism& psi) {
  const Group& next_domain = phi.codomain();
  const Group& next_codomain = psi.codomain();
  std::vector<Element> images;
  for (const auto& gen : next_domain.generators()) {
    // find a preimage of gen under phi
    std::optional<Element> pre;
    for (const auto& x : phi.domain().elements().items()) {
      if (phi.apply(x) == gen) {
        pre = x;
        break;
      }
    }
    if (!pre) return std::nullopt;
    images.push_back(psi.apply(h.apply(*pre)));
  }
  try {
    Homomorphism next = Homomorphism::from_generator_images(
        next_domain, next_codomain, std::move(images));
    next.validate();
    if (!next.is_surjective()) return std::nullopt;
    if (next.kernel().order() != 1) return std::nullopt;
    if (next_domain.order() != next_codomain.order()) return std::nullopt;
    return next;
  } catch (const InvalidHomomorphism&) {
    return std::nullopt;
  }
}

// all isomorphisms domain -> codomain found by generator-image backtracking,
// stopping after the first `cap` hits
std::vector<Homomorphism> enumerate_isos(const Group& a, const Group& b,
                                         std::size_t cap) {
  std::vector<Homomorphism> found;
  if (a.order_factored() != b.order_factored()) return found;
  auto av = a.order_factored().value();
  if (!av || *av > kIsomorphismBruteForceBound) return found;

  std::vector<Element> images;
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (found.size() >= cap) return;
    if (k == a.generators().size()) {
      try {
        Homomorphism h =
            Homomorphism::from_generator_images(a, b, images);
        h.validate();
        if (h.is_surjective() && h.kernel().order() == 1) found.push_back(h);
      } catch (const InvalidHomomorphism&) {
      }
      return;
    }
    std::uint64_t want = a.generators()[k].element_order();
    for (const auto& cand : b.elements().items()) {
      if (found.size() >= cap) return;
      if (cand.element_order() != want) continue;
      images.push_back(cand);
      rec(k + 1);
      images.pop_back();
    }
  };
  rec(0);
  return found;
}

}  // namespace

InterleavingResult interleaving_search(const HomSequence& a,
                                       const HomSequence& b,
                                       std::size_t bound) {
  check_sequence(a);
  check_sequence(b);
  InterleavingResult res;
  res.bound = bound;
  const std::size_t la = a.length();
  const std::size_t lb = b.length();
  const std::size_t common = std::min(la, lb);

  // aligned-offset search: the weaving runs A_d -> B_d -> A_{d+1} -> ...
  std::size_t max_offset = std::min(bound, common == 0 ? 0 : common - 1);

  if (a.is_structural() && b.is_structural()) {
    for (std::size_t d = 0; d <= max_offset; ++d) {
      bool match = true;
      for (std::size_t i = d; i < common && match; ++i) {
        if (a.structural->level_factors && b.structural->level_factors) {
          match = (*a.structural->level_factors)[i] ==
                  (*b.structural->level_factors)[i];
        } else {
          match = a.order_at(i) == b.order_at(i) &&
                  (i + 1 >= common ||
                   a.kernel_order_at(i) == b.kernel_order_at(i));
        }
      }
      if (match && la == lb) {
        InterleavingWitness w;
        w.a_start = w.b_start = d;
        for (std::size_t i = d; i < common; ++i) {
          w.p_indices.push_back(i);
          w.q_indices.push_back(i);
        }
        w.certification = "order-arithmetic";
        if (verify_witness(a, b, w)) {
          res.kind = InterleavingResult::Kind::witness;
          res.witness = std::move(w);
          return res;
        }
      }
    }
    // obstruction: no surjection can exist in the required direction
    std::vector<ObstructionEntry> obs =
        factor_obstructions(*a.structural, *b.structural, 0);
    bool blocked_at_end = false;
    for (const auto& e : obs) {
      if (e.index + 1 == common) blocked_at_end = true;
    }
    if (obs.empty()) {
      // fall back to order divisibility on the final window index
      const FactoredOrder ta = a.order_at(common - 1);
      const FactoredOrder tb = b.order_at(common - 1);
      if (!can_surject(ta, tb) && !can_surject(tb, ta)) {
        ObstructionEntry e;
        e.index = common - 1;
        e.reason = "orders " + ta.str() + " and " + tb.str() +
                   " admit no surjection in either direction";
        res.obstructions.push_back(std::move(e));
        res.kind = InterleavingResult::Kind::obstructed;
        return res;
      }
    } else if (blocked_at_end) {
      res.obstructions = std::move(obs);
      res.kind = InterleavingResult::Kind::obstructed;
      return res;
    }
    res.kind = InterleavingResult::Kind::exhausted;
    return res;
  }

  if (!a.is_structural() && !b.is_structural()) {
    for (std::size_t d = 0; d <= max_offset; ++d) {
      if (la != lb) break;  // aligned search needs matching window ends
      // seed isomorphisms at index d, then propagation is forced
      std::vector<Homomorphism> seeds;
      try {
        seeds = enumerate_isos(a.groups[d], b.groups[d], 64);
      } catch (const DomainError&) {
        seeds.clear();
      }
      for (const auto& seed : seeds) {
        std::vector<Homomorphism> isos{seed};
        bool ok = true;
        for (std::size_t i = d; i + 1 < common && ok; ++i) {
          auto next = propagate_iso(isos.back(), a.maps[i], b.maps[i]);
          if (next) {
            isos.push_back(*next);
          } else {
            ok = false;
          }
        }
        if (!ok) continue;
        InterleavingWitness w;
        w.a_start = w.b_start = d;
        for (std::size_t i = d; i < common; ++i) {
          w.p_indices.push_back(i);
          w.q_indices.push_back(i);
        }
        w.isos = std::move(isos);
        w.certification = "elementwise";
        if (verify_witness(a, b, w)) {
          res.kind = InterleavingResult::Kind::witness;
          res.witness = std::move(w);
          return res;
        }
      }
    }
    // order-arithmetic obstruction on the tail
    const FactoredOrder ta = a.order_at(la - 1);
    const FactoredOrder tb = b.order_at(lb - 1);
    if (!can_surject(ta, tb) && !can_surject(tb, ta)) {
      ObstructionEntry e;
      e.index = std::min(la, lb) - 1;
      e.reason = "orders " + ta.str() + " and " + tb.str() +
                 " admit no surjection in either direction";
      res.obstructions.push_back(std::move(e));
      res.kind = InterleavingResult::Kind::obstructed;
      return res;
    }
    res.kind = InterleavingResult::Kind::exhausted;
    return res;
  }

  res.kind = InterleavingResult::Kind::exhausted;
  return res;
}

bool verify_witness(const HomSequence& a, const HomSequence& b,
                    const InterleavingWitness& w) {
  if (w.p_indices.size() != w.q_indices.size() || w.p_indices.empty()) {
    return false;
  }
  if (w.certification == "order-arithmetic") {
    for (std::size_t k = 0; k < w.p_indices.size(); ++k) {
      std::size_t p = w.p_indices[k];
      std::size_t q = w.q_indices[k];
      if (!(a.order_at(p) == b.order_at(q))) return false;
      if (k + 1 < w.p_indices.size()) {
        // composite kernels along the zig-zag must match levelwise
        if (!(a.kernel_order_at(p) == b.kernel_order_at(q))) return false;
      }
      if (a.structural && b.structural && a.structural->level_factors &&
          b.structural->level_factors) {
        if (!((*a.structural->level_factors)[p] ==
              (*b.structural->level_factors)[q])) {
          return false;
        }
      }
    }
    return true;
  }
  // elementwise: the squares psi_i . h_i = h_{i+1} . phi_i must commute
  if (w.isos.size() != w.p_indices.size()) return false;
  for (std::size_t k = 0; k < w.isos.size(); ++k) {
    std::size_t p = w.p_indices[k];
    const Homomorphism& h = w.isos[k];
    if (h.kernel().order() != 1 || !h.is_surjective()) return false;
    if (k + 1 < w.isos.size()) {
      Homomorphism lhs = b.maps[p].compose_after(h);
      Homomorphism rhs = w.isos[k + 1].compose_after(a.maps[p]);
      if (!lhs.equal_on_domain(rhs)) return false;
    }
  }
  return true;
}

TailDecision family_tail_decide(const FamilySpec& a, const FamilySpec& b) {
  validate_family_spec(a);
  validate_family_spec(b);
  if (a.primes != b.primes) {
    throw DomainError("family comparison requires identical prime lists");
  }
  TailDecision d;
  d.window = a.depth();
  d.criterion =
      "equivalent-on-window iff the selectors agree at every index from some "
      "n to the end of the examined window; the tail past the window is not "
      "examined";
  std::optional<std::size_t> last_disagreement;
  for (std::size_t i = 0; i < a.depth(); ++i) {
    if (a.bits[i] != b.bits[i]) {
      last_disagreement = i;
      ObstructionEntry e;
      e.index = i;
      e.prime = a.primes[i];
      e.left_exponent = a.bits[i];
      e.right_exponent = b.bits[i];
      e.reason = "kernel factors at index " + std::to_string(i) +
                 " have orders " + std::to_string(e.prime) + "^" +
                 std::to_string(e.left_exponent) + " vs " +
                 std::to_string(e.prime) + "^" +
                 std::to_string(e.right_exponent);
      d.obstructions.push_back(std::move(e));
    }
  }
  if (!last_disagreement) {
    d.kind = TailDecision::Kind::equivalent_on_window;
    d.agree_from = 0;
    d.obstructions.clear();
  } else if (*last_disagreement + 1 == a.depth()) {
    d.kind = TailDecision::Kind::distinct_evidence;
  } else {
    d.kind = TailDecision::Kind::equivalent_on_window;
    d.agree_from = *last_disagreement + 1;
  }
  return d;
}

}  // namespace chainforge
