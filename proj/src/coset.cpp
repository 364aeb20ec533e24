#include "chainforge/coset.hpp"

#include <deque>

#include "chainforge/errors.hpp"

namespace chainforge {

CosetSpace::CosetSpace(Group group, Subgroup subgroup)
    : group_(std::move(group)), sub_(std::move(subgroup)) {
  // Pick the identification strategy.  Canonical keys need H enumerated and
  // cost |H| multiplications per lookup; the scan costs one membership test
  // per already-known coset.
  const std::uint64_t limit = enumeration_limit();
  auto hord = sub_.group().order_factored().value();
  auto gord = group_.order_factored().value();
  std::optional<std::uint64_t> expected_index;
  if (gord && hord && *hord > 0) expected_index = *gord / *hord;
  if (expected_index && *expected_index > limit) {
    throw ResourceError("coset space of index " +
                        std::to_string(*expected_index) +
                        " exceeds enumeration bound " + std::to_string(limit));
  }
  canonical_mode_ = hord && *hord <= limit &&
                    (!expected_index || *hord <= *expected_index);
  packed_ = group_.identity().pack().has_value();
  if (canonical_mode_) sub_.group().elements();  // materialize now

  // breadth-first coset enumeration from the base coset eH
  Element id = group_.identity();
  reps_.push_back(id);
  rep_invs_.push_back(id);
  if (canonical_mode_) remember_canonical(id, 0);

  std::deque<std::uint32_t> todo{0};
  std::vector<std::vector<std::uint32_t>> rows;  // per coset, per generator
  rows.emplace_back(group_.generators().size(), UINT32_MAX);
  while (!todo.empty()) {
    const std::uint32_t cur = todo.front();
    todo.pop_front();
    for (std::size_t k = 0; k < group_.generators().size(); ++k) {
      Element moved = group_.generators()[k] * reps_[cur];
      std::uint32_t idx = identify(moved);
      if (idx == UINT32_MAX) {
        idx = (std::uint32_t)reps_.size();
        if (canonical_mode_) remember_canonical(moved, idx);
        rep_invs_.push_back(moved.inverse());
        reps_.push_back(std::move(moved));
        rows.emplace_back(group_.generators().size(), UINT32_MAX);
        if (reps_.size() > limit) {
          throw ResourceError("coset enumeration exceeds bound " +
                              std::to_string(limit));
        }
        todo.push_back(idx);
      }
      rows[cur][k] = idx;
    }
  }
  gen_action_.assign(group_.generators().size(), {});
  for (std::size_t k = 0; k < group_.generators().size(); ++k) {
    gen_action_[k].resize(reps_.size());
    for (std::size_t c = 0; c < reps_.size(); ++c) {
      gen_action_[k][c] = rows[c][k];
    }
  }
}

std::string CosetSpace::canonical_key(const Element& x) const {
  std::string best;
  for (const auto& h : sub_.group().elements().items()) {
    std::string k = (x * h).key();
    if (best.empty() || k < best) best = std::move(k);
  }
  return best;
}

std::uint64_t CosetSpace::canonical_code(const Element& x) const {
  std::uint64_t best = UINT64_MAX;
  for (const auto& h : sub_.group().elements().items()) {
    best = std::min(best, *(x * h).pack());
  }
  return best;
}

void CosetSpace::remember_canonical(const Element& x, std::uint32_t idx) {
  if (packed_) {
    canon_packed_[canonical_code(x)] = idx;
  } else {
    canon_index_[canonical_key(x)] = idx;
  }
}

std::uint32_t CosetSpace::identify(const Element& x) const {
  if (canonical_mode_) {
    if (packed_) {
      auto it = canon_packed_.find(canonical_code(x));
      return it == canon_packed_.end() ? UINT32_MAX : it->second;
    }
    auto it = canon_index_.find(canonical_key(x));
    return it == canon_index_.end() ? UINT32_MAX : it->second;
  }
  for (std::size_t i = 0; i < reps_.size(); ++i) {
    if (sub_.contains(rep_invs_[i] * x)) return (std::uint32_t)i;
  }
  return UINT32_MAX;
}

std::uint32_t CosetSpace::apply(const Element& g, std::uint32_t coset) const {
  std::uint32_t idx = identify(g * reps_.at(coset));
  if (idx == UINT32_MAX) {
    throw DomainError("element maps coset outside the enumerated space");
  }
  return idx;
}

std::uint32_t CosetSpace::locate(const Element& x) const {
  std::uint32_t idx = identify(x);
  if (idx == UINT32_MAX) {
    throw DomainError("element does not lie in any enumerated coset");
  }
  return idx;
}

Element CosetSpace::action_permutation(const Element& g) const {
  std::vector<std::uint32_t> img(reps_.size());
  for (std::size_t i = 0; i < reps_.size(); ++i) {
    img[i] = apply(g, (std::uint32_t)i);
  }
  return Element::permutation(std::move(img));
}

}  // namespace chainforge
