#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "chainforge/group.hpp"

namespace chainforge {

// Left coset space G/H with the left G-action.  Cosets are enumerated
// breadth-first from the base coset eH; the index [G:H] never requires
// enumerating G.  Coset identification uses a canonical representative
// (minimal key over xH) when H is small, and a representative scan with
// membership tests when H is large but the coset count is small.
class CosetSpace {
 public:
  CosetSpace(Group group, Subgroup subgroup);

  const Group& group() const { return group_; }
  const Subgroup& subgroup() const { return sub_; }

  std::size_t size() const { return reps_.size(); }  // the index [G:H]
  const Element& representative(std::size_t i) const { return reps_[i]; }

  // index of the coset (g * reps_[coset]) H
  std::uint32_t apply(const Element& g, std::uint32_t coset) const;
  // index of the coset x H
  std::uint32_t locate(const Element& x) const;

  // action permutation of a single element over all cosets
  Element action_permutation(const Element& g) const;

  // precomputed action of generator #k
  const std::vector<std::uint32_t>& generator_action(std::size_t k) const {
    return gen_action_[k];
  }

 private:
  std::string canonical_key(const Element& x) const;
  std::uint64_t canonical_code(const Element& x) const;
  std::uint32_t identify(const Element& x) const;
  void remember_canonical(const Element& x, std::uint32_t idx);

  Group group_;
  Subgroup sub_;
  bool canonical_mode_;
  bool packed_;
  std::vector<Element> reps_;
  std::vector<Element> rep_invs_;
  std::unordered_map<std::string, std::uint32_t> canon_index_;
  std::unordered_map<std::uint64_t, std::uint32_t> canon_packed_;
  std::vector<std::vector<std::uint32_t>> gen_action_;
};

}  // namespace chainforge
