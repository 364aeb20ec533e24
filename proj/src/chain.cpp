#include "chainforge/chain.hpp"

#include "chainforge/errors.hpp"

namespace chainforge {

Subgroup GroupChain::level(std::size_t l) const {
  if (l == 0) return Subgroup(base, base);
  if (l > levels.size()) throw DomainError("chain level out of range");
  return levels[l - 1];
}

ValidatedChain validate_chain(const GroupChain& chain) {
  if (chain.levels.empty()) {
    throw SpecError("chain validation requires at least one level");
  }
  ValidatedChain v{chain, {}, {}};
  std::uint64_t cumulative = 1;
  for (std::size_t l = 1; l <= chain.depth(); ++l) {
    Group upper = chain.level(l - 1).group();
    const Subgroup& lower = chain.level(l);
    for (const auto& g : lower.generators()) {
      if (!upper.contains(g)) {
        throw SpecError("chain level " + std::to_string(l) +
                        " is not contained in level " + std::to_string(l - 1) +
                        ": generator " + g.str() + " escapes");
      }
    }
    CosetSpace cs(upper, reparent(upper, lower.group()));
    if (cs.size() < 2) {
      throw SpecError("chain level " + std::to_string(l) +
                      " equals level " + std::to_string(l - 1) +
                      " (descent must be strict)");
    }
    v.step_indices.push_back(cs.size());
    cumulative *= cs.size();
    v.indices_from_base.push_back(cumulative);
  }
  return v;
}

std::size_t kernel_membership(const GroupChain& chain, const Element& g) {
  if (!chain.base.contains(g)) {
    throw DomainError("element " + g.str() + " lies outside the base group");
  }
  std::size_t deepest = 0;
  for (std::size_t l = 1; l <= chain.depth(); ++l) {
    if (!chain.level(l).contains(g)) break;
    deepest = l;
  }
  return deepest;
}

GroupChain conjugate_chain(const GroupChain& chain, const Element& g) {
  if (!chain.base.contains(g)) {
    throw DomainError("conjugator " + g.str() + " lies outside the base group");
  }
  Element ginv = g.inverse();
  GroupChain out;
  out.base = chain.base;
  out.mode = chain.mode;
  for (const auto& level : chain.levels) {
    std::vector<Element> gens;
    for (const auto& x : level.generators()) gens.push_back(g * x * ginv);
    Group inner = level.group();
    Group conj = Group::from_generators(chain.base.identity(), std::move(gens),
                                        level.group().name() + "^g");
    // x in gHg^-1  <=>  g^-1 x g in H
    conj = conj.with_structural_membership([inner, g, ginv](const Element& x) {
      return inner.contains(ginv * x * g);
    });
    if (inner.has_structural_order()) {
      conj = conj.with_structural_order(inner.order_factored());
    }
    out.levels.emplace_back(chain.base, std::move(conj));
  }
  return out;
}

CosetTower coset_tower(const GroupChain& chain) {
  CosetTower tower;
  for (std::size_t l = 0; l <= chain.depth(); ++l) {
    tower.levels.push_back(
        std::make_shared<CosetSpace>(chain.base, chain.level(l)));
  }
  for (std::size_t l = 0; l + 1 <= chain.depth(); ++l) {
    const CosetSpace& fine = *tower.levels[l + 1];
    const CosetSpace& coarse = *tower.levels[l];
    std::vector<std::uint32_t> proj(fine.size());
    for (std::size_t c = 0; c < fine.size(); ++c) {
      proj[c] = coarse.locate(fine.representative(c));
    }
    // the projection must commute with the generator actions
    for (std::size_t k = 0; k < chain.base.generators().size(); ++k) {
      for (std::size_t c = 0; c < fine.size(); ++c) {
        std::uint32_t moved_then_proj = proj[fine.generator_action(k)[c]];
        std::uint32_t proj_then_moved = coarse.generator_action(k)[proj[c]];
        if (moved_then_proj != proj_then_moved) {
          throw InternalError("coset tower projection fails to commute with "
                              "the action at level " + std::to_string(l + 1));
        }
      }
    }
    tower.projections.push_back(std::move(proj));
  }
  return tower;
}

EllisLevel ellis_level(const GroupChain& chain, std::size_t level) {
  if (level > chain.depth()) throw DomainError("ellis level out of range");
  Subgroup core = normal_core(chain.base, chain.level(level));
  QuotientResult q = quotient_group(chain.base, core, "ellis quotient");
  std::vector<Element> iso_gens;
  for (const auto& g : chain.level(level).generators()) {
    iso_gens.push_back(q.projection.apply(g));
  }
  Subgroup isotropy = close_subgroup(q.quotient, std::move(iso_gens), "isotropy");
  FactoredOrder expected = core.order_factored().quotient_of(
      chain.level(level).order_factored());
  if (isotropy.order_factored() != expected) {
    throw InternalError("isotropy order mismatch at ellis level " +
                        std::to_string(level));
  }
  return EllisLevel{std::move(core), std::move(q), std::move(isotropy)};
}

}  // namespace chainforge
