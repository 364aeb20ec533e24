#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "chainforge/element.hpp"
#include "chainforge/factored.hpp"

namespace chainforge {

// Process-wide enumeration bound (number of elements an operation may
// materialize).  Default 10^7; CLI flag --max-elements and the
// CHAINFORGE_MAX_ELEMENTS environment variable override it.
std::uint64_t enumeration_limit();
void set_enumeration_limit(std::uint64_t limit);

// Deduplicated element collection with stable insertion order.  When the
// element shape admits a dense 64-bit code the set dedupes on codes, which
// keeps large closures (matrix-tuple products) cheap.
class ElementSet {
 public:
  // returns true if newly inserted
  bool insert(const Element& e);
  bool contains(const Element& e) const;
  std::size_t size() const { return items_.size(); }
  const Element& at(std::size_t i) const { return items_[i]; }
  const std::vector<Element>& items() const { return items_; }

 private:
  enum class Mode { undecided, packed, generic };
  Mode mode_ = Mode::undecided;
  std::unordered_set<std::uint64_t> packed_;
  std::unordered_set<Element, ElementHash> generic_;
  std::vector<Element> items_;
};

// BFS closure of a generating set under right multiplication.
// `what` names the computation in the ResourceError message.
ElementSet close_under_generators(const Element& identity,
                                  const std::vector<Element>& gens,
                                  std::uint64_t limit, const std::string& what);

// Small generating subset of an enumerated subgroup (greedy sweep).
std::vector<Element> extract_generators(const ElementSet& elems,
                                        const Element& identity);

using MembershipFn = std::function<bool(const Element&)>;

// Immutable finite group given by generators.  Elements are materialized
// lazily; membership uses a structural predicate when one is attached,
// enumeration otherwise.  Copies share state.
class Group {
 public:
  Group() = default;

  static Group from_generators(Element identity, std::vector<Element> gens,
                               std::string name = "");

  Group with_structural_membership(MembershipFn membership) const;
  Group with_structural_order(FactoredOrder order) const;
  // Pre-seed the enumeration cache (the set must be the full element set).
  Group with_known_elements(ElementSet elems) const;

  const std::vector<Element>& generators() const;
  const Element& identity() const;
  const std::string& name() const;

  bool has_structural_order() const;
  FactoredOrder order_factored() const;  // structural or via enumeration
  std::uint64_t order() const;           // throws ResourceError if > uint64 range

  bool contains(const Element& e) const;
  const ElementSet& elements() const;  // enumerates on first use
  bool is_trivial() const;

  bool is_abelian() const;  // checks generator pairs

  // Structural equality of underlying shared state (not group equality).
  bool same_object(const Group& o) const { return d_ == o.d_; }

 private:
  struct Data;
  std::shared_ptr<Data> d_;
};

// A subgroup remembers the group it lives in; its generators are checked
// to lie in the parent at construction time.
class Subgroup {
 public:
  Subgroup() = default;
  Subgroup(Group parent, Group self);

  const Group& parent() const { return parent_; }
  const Group& group() const { return self_; }
  const std::vector<Element>& generators() const { return self_.generators(); }
  std::uint64_t order() const { return self_.order(); }
  FactoredOrder order_factored() const { return self_.order_factored(); }
  bool contains(const Element& e) const { return self_.contains(e); }

 private:
  Group parent_;
  Group self_;
};

// Subgroup generated by `gens` inside `parent`; every generator must lie in
// the parent (DomainError otherwise).
Subgroup close_subgroup(const Group& parent, std::vector<Element> gens,
                        std::string name = "");

// View the same underlying group as a subgroup of another parent.
Subgroup reparent(const Group& parent, const Group& sub);

// {d in target : every conjugate of d under the group generated by
// `conjugator_gens` stays in target} — the intersection of all conjugates
// of target.  Enumerates target only; orbits are explored breadth-first and
// abandoned the moment they leave target.
ElementSet conjugation_stable_subset(const std::vector<Element>& conjugator_gens,
                                     const Group& target);

// Largest normal subgroup of `parent` contained in `sub`.  Enumerates sub
// (never parent); a fast path returns sub itself when it is already normal.
Subgroup normal_core(const Group& parent, const Subgroup& sub);

bool is_normal_in(const Group& parent, const Subgroup& sub,
                  std::string* violating = nullptr);

}  // namespace chainforge
