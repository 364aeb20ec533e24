#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "chainforge/coset.hpp"
#include "chainforge/group.hpp"

namespace chainforge {

// Group homomorphism given by generator images, optionally backed by an
// intrinsic evaluator (projections, tuple truncations, coset maps).
// Without an evaluator, arbitrary elements are mapped through the graph
// closure: the subgroup of domain x codomain generated by the pairs
// (gen, image).  The closure doubles as the validity check: the graph is
// the graph of a homomorphism exactly when its size equals |domain|.
class Homomorphism {
 public:
  Homomorphism() = default;

  static Homomorphism from_generator_images(Group domain, Group codomain,
                                            std::vector<Element> images);
  static Homomorphism with_evaluator(Group domain, Group codomain,
                                     std::function<Element(const Element&)> fn);
  static Homomorphism identity(Group g);

  const Group& domain() const;
  const Group& codomain() const;
  const std::vector<Element>& generator_images() const;

  Element apply(const Element& e) const;

  // Throws InvalidHomomorphism when the generator images do not extend to a
  // homomorphism (graph check for image homs, relation spot checks for
  // evaluator homs).
  void validate() const;

  Subgroup image() const;   // subgroup of the codomain
  Subgroup kernel() const;  // subgroup of the domain (enumerates it)
  bool is_surjective() const;

  Homomorphism compose_after(const Homomorphism& inner) const;  // this ∘ inner

  // Elementwise equality on the (enumerated) domain.
  bool equal_on_domain(const Homomorphism& o) const;

 private:
  struct Data;
  std::shared_ptr<Data> d_;
};

// Quotient G/N with its projection.  N must be normal in G (checked; the
// error names a violating conjugate).  The quotient is realized as the
// permutation action of G on the cosets of N, which is faithful for the
// quotient group; when N is trivial the original group is returned as is.
struct QuotientResult {
  Group quotient;
  Homomorphism projection;
  std::shared_ptr<CosetSpace> cosets;  // null in the trivial-kernel shortcut

  // A preimage in G of a quotient element.
  Element lift(const Element& q) const;
};

QuotientResult quotient_group(const Group& g, const Subgroup& n,
                              std::string name = "");

}  // namespace chainforge
