#include "chainforge/group.hpp"

#include <atomic>
#include <deque>

#include "chainforge/errors.hpp"

namespace chainforge {

namespace {
std::atomic<std::uint64_t> g_limit{10000000ull};
}

std::uint64_t enumeration_limit() { return g_limit.load(); }
void set_enumeration_limit(std::uint64_t limit) {
  if (limit == 0) throw DomainError("enumeration limit must be positive");
  g_limit.store(limit);
}

bool ElementSet::insert(const Element& e) {
  if (mode_ == Mode::undecided) {
    mode_ = e.pack() ? Mode::packed : Mode::generic;
  }
  bool fresh;
  if (mode_ == Mode::packed) {
    auto code = e.pack();
    if (!code) throw InternalError("mixed element shapes in one element set");
    fresh = packed_.insert(*code).second;
  } else {
    fresh = generic_.insert(e).second;
  }
  if (fresh) items_.push_back(e);
  return fresh;
}

bool ElementSet::contains(const Element& e) const {
  switch (mode_) {
    case Mode::undecided:
      return false;
    case Mode::packed: {
      auto code = e.pack();
      return code && packed_.count(*code) != 0;
    }
    case Mode::generic:
      return generic_.count(e) != 0;
  }
  return false;
}

ElementSet close_under_generators(const Element& identity,
                                  const std::vector<Element>& gens,
                                  std::uint64_t limit, const std::string& what) {
  ElementSet set;
  set.insert(identity);
  std::deque<std::uint32_t> todo{0};
  while (!todo.empty()) {
    const std::uint32_t cur = todo.front();
    todo.pop_front();
    for (const auto& g : gens) {
      Element next = set.at(cur) * g;
      if (set.insert(next)) {
        if (set.size() > limit) {
          throw ResourceError(what + " exceeds enumeration bound " +
                              std::to_string(limit));
        }
        todo.push_back((std::uint32_t)(set.size() - 1));
      }
    }
  }
  return set;
}

std::vector<Element> extract_generators(const ElementSet& elems,
                                        const Element& identity) {
  std::vector<Element> gens;
  ElementSet have;
  have.insert(identity);
  for (const auto& e : elems.items()) {
    if (have.contains(e)) continue;
    gens.push_back(e);
    have = close_under_generators(identity, gens, elems.size(), "generator sweep");
    if (have.size() == elems.size()) break;
  }
  return gens;
}

struct Group::Data {
  Element identity;
  std::vector<Element> gens;
  std::string name;
  std::optional<MembershipFn> structural;
  std::optional<FactoredOrder> structural_order;

  mutable std::mutex mu;
  mutable std::optional<ElementSet> elems;

  Data(Element id, std::vector<Element> g, std::string n)
      : identity(std::move(id)), gens(std::move(g)), name(std::move(n)) {}

  const ElementSet& enumerate() const {
    std::lock_guard<std::mutex> lock(mu);
    if (!elems) {
      std::uint64_t limit = enumeration_limit();
      if (structural_order) {
        auto v = structural_order->value();
        if (!v || *v > limit) {
          throw ResourceError("enumeration of " +
                              (name.empty() ? std::string("group") : name) +
                              " of order " + structural_order->str() +
                              " exceeds enumeration bound " + std::to_string(limit));
        }
      }
      elems = close_under_generators(identity, gens, limit,
                                     name.empty() ? "group enumeration"
                                                  : "enumeration of " + name);
    }
    return *elems;
  }
};

Group Group::from_generators(Element identity, std::vector<Element> gens,
                             std::string name) {
  for (const auto& g : gens) {
    if (!g.same_shape(identity)) {
      throw DomainError("generator shape differs from identity shape");
    }
  }
  Group gr;
  gr.d_ = std::make_shared<Data>(std::move(identity), std::move(gens),
                                 std::move(name));
  return gr;
}

Group Group::with_structural_membership(MembershipFn membership) const {
  Group g;
  g.d_ = std::make_shared<Data>(d_->identity, d_->gens, d_->name);
  g.d_->structural = std::move(membership);
  g.d_->structural_order = d_->structural_order;
  return g;
}

Group Group::with_structural_order(FactoredOrder order) const {
  Group g;
  g.d_ = std::make_shared<Data>(d_->identity, d_->gens, d_->name);
  g.d_->structural = d_->structural;
  g.d_->structural_order = std::move(order);
  return g;
}

Group Group::with_known_elements(ElementSet elems) const {
  Group g;
  g.d_ = std::make_shared<Data>(d_->identity, d_->gens, d_->name);
  g.d_->structural = d_->structural;
  g.d_->structural_order = d_->structural_order;
  g.d_->elems = std::move(elems);
  return g;
}

const std::vector<Element>& Group::generators() const { return d_->gens; }
const Element& Group::identity() const { return d_->identity; }
const std::string& Group::name() const { return d_->name; }

bool Group::has_structural_order() const {
  return d_->structural_order.has_value();
}

FactoredOrder Group::order_factored() const {
  if (d_->structural_order) return *d_->structural_order;
  return FactoredOrder::of(elements().size());
}

std::uint64_t Group::order() const {
  if (d_->structural_order) {
    auto v = d_->structural_order->value();
    if (!v) {
      throw ResourceError("group order " + d_->structural_order->str() +
                          " does not fit in 64 bits");
    }
    return *v;
  }
  return elements().size();
}

bool Group::contains(const Element& e) const {
  if (!e.same_shape(d_->identity)) return false;
  if (d_->structural) return (*d_->structural)(e);
  return elements().contains(e);
}

const ElementSet& Group::elements() const { return d_->enumerate(); }

bool Group::is_trivial() const {
  for (const auto& g : d_->gens) {
    if (!g.is_identity()) return false;
  }
  return true;
}

bool Group::is_abelian() const {
  const auto& gens = d_->gens;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = i + 1; j < gens.size(); ++j) {
      if (!(gens[i] * gens[j] == gens[j] * gens[i])) return false;
    }
  }
  return true;
}

Subgroup::Subgroup(Group parent, Group self)
    : parent_(std::move(parent)), self_(std::move(self)) {}

Subgroup close_subgroup(const Group& parent, std::vector<Element> gens,
                        std::string name) {
  for (const auto& g : gens) {
    if (!parent.contains(g)) {
      throw DomainError("subgroup generator " + g.str() +
                        " lies outside the parent group");
    }
  }
  Group self = Group::from_generators(parent.identity(), std::move(gens),
                                      std::move(name));
  return Subgroup(parent, std::move(self));
}

Subgroup reparent(const Group& parent, const Group& sub) {
  for (const auto& g : sub.generators()) {
    if (!parent.contains(g)) {
      throw DomainError("subgroup generator " + g.str() +
                        " lies outside the new parent group");
    }
  }
  return Subgroup(parent, sub);
}

ElementSet conjugation_stable_subset(const std::vector<Element>& conjugator_gens,
                                     const Group& target) {
  const ElementSet& members = target.elements();  // ResourceError if oversized

  std::vector<std::pair<Element, Element>> conjugators;  // (g, g^-1)
  for (const auto& g : conjugator_gens) {
    Element inv = g.inverse();
    conjugators.emplace_back(g, inv);
    conjugators.emplace_back(inv, g);
  }

  // orbit status per element: 1 stable, 2 escapes
  std::unordered_map<Element, int, ElementHash> status;
  ElementSet stable;

  for (const auto& h0 : members.items()) {
    if (status.count(h0)) continue;

    ElementSet orbit;
    orbit.insert(h0);
    std::deque<std::uint32_t> todo{0};
    bool stays_inside = true;
    while (!todo.empty() && stays_inside) {
      const Element cur = orbit.at(todo.front());
      todo.pop_front();
      for (const auto& [g, ginv] : conjugators) {
        Element conj = g * cur * ginv;
        if (!target.contains(conj)) {
          stays_inside = false;
          break;
        }
        if (orbit.insert(conj)) todo.push_back((std::uint32_t)(orbit.size() - 1));
      }
    }
    // Everything seen lies in one conjugacy class, so the verdict for h0
    // applies to every visited member.
    for (const auto& e : orbit.items()) {
      status[e] = stays_inside ? 1 : 2;
    }
    if (stays_inside) {
      for (const auto& e : orbit.items()) stable.insert(e);
    }
  }
  return stable;
}

Subgroup normal_core(const Group& parent, const Subgroup& sub) {
  if (is_normal_in(parent, sub)) return sub;
  ElementSet core_elems =
      conjugation_stable_subset(parent.generators(), sub.group());
  std::vector<Element> gens = extract_generators(core_elems, parent.identity());
  Group core_group =
      Group::from_generators(parent.identity(), std::move(gens), "core")
          .with_known_elements(std::move(core_elems));
  return Subgroup(parent, std::move(core_group));
}

bool is_normal_in(const Group& parent, const Subgroup& sub,
                  std::string* violating) {
  std::vector<std::pair<Element, Element>> conjugators;
  for (const auto& g : parent.generators()) {
    Element inv = g.inverse();
    conjugators.emplace_back(g, inv);
    conjugators.emplace_back(inv, g);
  }
  for (const auto& n : sub.generators()) {
    for (const auto& [g, ginv] : conjugators) {
      Element conj = g * n * ginv;
      if (!sub.contains(conj)) {
        if (violating) {
          *violating = "conjugate of " + n.str() + " by " + g.str() +
                       " leaves the subgroup";
        }
        return false;
      }
    }
  }
  return true;
}

}  // namespace chainforge
