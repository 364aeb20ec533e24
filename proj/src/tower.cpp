#include "chainforge/tower.hpp"

#include <sstream>

#include "chainforge/errors.hpp"

namespace chainforge {

const Subgroup& CoreTower::core_at(std::size_t level) const {
  if (level < base_index || level - base_index >= cores.size()) {
    throw DomainError("core tower level out of range");
  }
  return cores[level - base_index];
}

namespace {

Subgroup level_core(const GroupChain& chain, std::size_t n, std::size_t l) {
  Group parent = chain.level(n).group();
  return normal_core(parent, reparent(parent, chain.level(l).group()));
}

}  // namespace

CoreTower core_tower(const GroupChain& chain, std::size_t n) {
  if (n > chain.depth()) throw DomainError("core tower base index out of range");
  CoreTower t;
  t.base_index = n;
  for (std::size_t l = n; l <= chain.depth(); ++l) {
    t.cores.push_back(level_core(chain, n, l));
  }
  return t;
}

const QuotientResult& DiscriminantTower::level_at(std::size_t level) const {
  if (level < base_index || level - base_index >= levels.size()) {
    throw DomainError("discriminant tower level out of range");
  }
  return levels[level - base_index];
}

FactoredOrder DiscriminantTower::order_at(std::size_t level) const {
  return level_at(level).quotient.order_factored();
}

DiscriminantTower discriminant_tower(const GroupChain& chain, std::size_t n) {
  DiscriminantTower t;
  t.base_index = n;
  t.cores = core_tower(chain, n);
  for (std::size_t l = n; l <= chain.depth(); ++l) {
    Group level_group = chain.level(l).group();
    Subgroup core_in_level = reparent(level_group, t.cores.core_at(l).group());
    t.levels.push_back(quotient_group(level_group, core_in_level,
                                      "disc[" + std::to_string(n) + "," +
                                          std::to_string(l) + "]"));
  }
  for (std::size_t k = 0; k + 1 < t.levels.size(); ++k) {
    const QuotientResult& fine = t.levels[k + 1];
    const QuotientResult& coarse = t.levels[k];
    Homomorphism delta = Homomorphism::with_evaluator(
        fine.quotient, coarse.quotient, [fine, coarse](const Element& d) {
          return coarse.projection.apply(fine.lift(d));
        });
    t.bonding_surjective.push_back(delta.is_surjective());
    t.bonding.push_back(std::move(delta));
  }
  return t;
}

Homomorphism discriminant_surjection(const DiscriminantTower& from,
                                     const DiscriminantTower& to,
                                     std::size_t level) {
  if (from.base_index > to.base_index) {
    throw DomainError("discriminant surjection runs from smaller base index "
                      "to larger");
  }
  const QuotientResult& src = from.level_at(level);
  const QuotientResult& dst = to.level_at(level);
  Homomorphism psi = Homomorphism::with_evaluator(
      src.quotient, dst.quotient,
      [src, dst](const Element& d) { return dst.projection.apply(src.lift(d)); });
  if (!psi.is_surjective()) {
    throw InternalError("induced discriminant map is not onto at level " +
                        std::to_string(level));
  }
  return psi;
}

Homomorphism psi_map(const GroupChain& chain, std::size_t n, std::size_t m,
                     std::size_t level) {
  if (!(n <= m && m <= level && level <= chain.depth())) {
    throw DomainError("psi_map requires n <= m <= level <= depth");
  }
  DiscriminantTower tn = discriminant_tower(chain, n);
  DiscriminantTower tm = discriminant_tower(chain, m);
  return discriminant_surjection(tn, tm, level);
}

std::string to_string(StabilityVerdict v) {
  switch (v) {
    case StabilityVerdict::stable_so_far: return "stable-so-far";
    case StabilityVerdict::wild_evidence: return "wild-evidence";
    case StabilityVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

const StabilityRecord* StabilityReport::record(std::size_t n,
                                               std::size_t level) const {
  for (const auto& r : records) {
    if (r.n == n && r.level == level) return &r;
  }
  return nullptr;
}

StabilityReport stability_report(const GroupChain& chain) {
  StabilityReport rep;
  rep.depth = chain.depth();
  rep.mode = chain.mode;

  std::vector<CoreTower> towers;
  for (std::size_t n = 0; n <= chain.depth(); ++n) {
    towers.push_back(core_tower(chain, n));
  }
  for (std::size_t n = 0; n <= chain.depth(); ++n) {
    for (std::size_t l = n; l <= chain.depth(); ++l) {
      StabilityRecord r;
      r.n = n;
      r.level = l;
      r.level_order = chain.level(l).order_factored();
      r.core_order = towers[n].core_at(l).order_factored();
      r.disc_order = r.core_order.quotient_of(r.level_order);
      if (n + 1 <= l) {
        // ker psi_{n,n+1} at this level is C_{n+1,l}/C_{n,l}
        r.psi_kernel_order = r.core_order.quotient_of(
            towers[n + 1].core_at(l).order_factored());
      }
      rep.records.push_back(std::move(r));
    }
  }

  const std::size_t depth = chain.depth();
  if (depth < 2) {
    rep.verdict = StabilityVerdict::inconclusive;
    rep.note = "depth " + std::to_string(depth) +
               " gives no usable kernel data";
    return rep;
  }
  // deepest-level kernels, one per base index n = 0..L-1
  std::vector<bool> trivial;
  for (std::size_t n = 0; n + 1 <= depth; ++n) {
    const StabilityRecord* r = rep.record(n, depth);
    trivial.push_back(r->psi_kernel_order->is_one());
  }
  bool all_nontrivial = true;
  std::size_t first_trailing_trivial = trivial.size();
  for (std::size_t n = trivial.size(); n-- > 0;) {
    if (trivial[n]) {
      first_trailing_trivial = n;
    } else {
      break;
    }
  }
  for (bool t : trivial) all_nontrivial = all_nontrivial && !t;

  if (first_trailing_trivial < trivial.size()) {
    rep.verdict = StabilityVerdict::stable_so_far;
    rep.stable_from = first_trailing_trivial;
  } else if (all_nontrivial) {
    rep.verdict = StabilityVerdict::wild_evidence;
    for (std::size_t n = 0; n < trivial.size(); ++n) rep.wild_levels.push_back(n);
  } else {
    rep.verdict = StabilityVerdict::inconclusive;
    rep.note = "kernel pattern is neither eventually trivial nor everywhere "
               "nontrivial within the examined depth";
  }
  return rep;
}

bool same_invariant_matrices(const StabilityReport& a,
                             const StabilityReport& b) {
  if (a.depth != b.depth || a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& x = a.records[i];
    const auto& y = b.records[i];
    if (x.n != y.n || x.level != y.level) return false;
    if (x.disc_order != y.disc_order) return false;
    if (x.psi_kernel_order.has_value() != y.psi_kernel_order.has_value()) {
      return false;
    }
    if (x.psi_kernel_order && !(*x.psi_kernel_order == *y.psi_kernel_order)) {
      return false;
    }
  }
  return true;
}

}  // namespace chainforge
