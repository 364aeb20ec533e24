#include "chainforge/hom.hpp"

#include <mutex>

#include "chainforge/errors.hpp"

namespace chainforge {

struct Homomorphism::Data {
  Group domain;
  Group codomain;
  std::vector<Element> gen_images;
  std::function<Element(const Element&)> evaluator;  // may be empty

  std::mutex mu;
  std::optional<std::unordered_map<Element, Element, ElementHash>> table;
  bool validated = false;

  const std::unordered_map<Element, Element, ElementHash>& build_table() {
    std::lock_guard<std::mutex> lock(mu);
    if (table) return *table;
    std::unordered_map<Element, Element, ElementHash> t;
    if (evaluator) {
      for (const auto& e : domain.elements().items()) {
        t.emplace(e, evaluator(e));
      }
    } else {
      // graph closure in domain x codomain
      std::vector<Element> pair_gens;
      for (std::size_t i = 0; i < domain.generators().size(); ++i) {
        pair_gens.push_back(
            Element::tuple({domain.generators()[i], gen_images[i]}));
      }
      Element pid = Element::tuple({domain.identity(), codomain.identity()});
      ElementSet graph = close_under_generators(pid, pair_gens,
                                                enumeration_limit(),
                                                "homomorphism graph closure");
      for (const auto& pr : graph.items()) {
        const Element& d = pr.parts()[0];
        const Element& c = pr.parts()[1];
        auto [it, fresh] = t.emplace(d, c);
        if (!fresh && !(it->second == c)) {
          throw InvalidHomomorphism(
              "generator images are inconsistent: element " + d.str() +
              " receives two different images");
        }
      }
      if (t.size() != domain.elements().size()) {
        throw InvalidHomomorphism(
            "generator images do not define a map on the whole domain");
      }
    }
    table = std::move(t);
    return *table;
  }
};

Homomorphism Homomorphism::from_generator_images(Group domain, Group codomain,
                                                 std::vector<Element> images) {
  if (images.size() != domain.generators().size()) {
    throw DomainError("one image per domain generator required");
  }
  for (const auto& im : images) {
    if (!codomain.contains(im)) {
      throw DomainError("generator image " + im.str() +
                        " lies outside the codomain");
    }
  }
  Homomorphism h;
  h.d_ = std::make_shared<Data>();
  h.d_->domain = std::move(domain);
  h.d_->codomain = std::move(codomain);
  h.d_->gen_images = std::move(images);
  return h;
}

Homomorphism Homomorphism::with_evaluator(
    Group domain, Group codomain, std::function<Element(const Element&)> fn) {
  Homomorphism h;
  h.d_ = std::make_shared<Data>();
  h.d_->domain = std::move(domain);
  h.d_->codomain = std::move(codomain);
  h.d_->evaluator = std::move(fn);
  for (const auto& g : h.d_->domain.generators()) {
    h.d_->gen_images.push_back(h.d_->evaluator(g));
  }
  return h;
}

Homomorphism Homomorphism::identity(Group g) {
  Group copy = g;
  return with_evaluator(std::move(g), std::move(copy),
                        [](const Element& e) { return e; });
}

const Group& Homomorphism::domain() const { return d_->domain; }
const Group& Homomorphism::codomain() const { return d_->codomain; }
const std::vector<Element>& Homomorphism::generator_images() const {
  return d_->gen_images;
}

Element Homomorphism::apply(const Element& e) const {
  if (d_->evaluator) return d_->evaluator(e);
  const auto& t = d_->build_table();
  auto it = t.find(e);
  if (it == t.end()) {
    throw DomainError("element " + e.str() + " is not in the domain");
  }
  return it->second;
}

void Homomorphism::validate() const {
  if (d_->evaluator) {
    // relation spot check on a bounded word set: all products of two
    // generators (and their inverses)
    std::vector<Element> words = d_->domain.generators();
    for (const auto& g : d_->domain.generators()) words.push_back(g.inverse());
    for (const auto& a : words) {
      for (const auto& b : words) {
        Element lhs = d_->evaluator(a * b);
        Element rhs = d_->evaluator(a) * d_->evaluator(b);
        if (!(lhs == rhs)) {
          throw InvalidHomomorphism("evaluator violates multiplicativity on " +
                                    a.str() + " * " + b.str());
        }
      }
    }
    return;
  }
  d_->build_table();  // throws InvalidHomomorphism on failure
}

Subgroup Homomorphism::image() const {
  return close_subgroup(d_->codomain, d_->gen_images, "image");
}

Subgroup Homomorphism::kernel() const {
  ElementSet ker;
  for (const auto& e : d_->domain.elements().items()) {
    if (apply(e).is_identity()) ker.insert(e);
  }
  std::vector<Element> gens = extract_generators(ker, d_->domain.identity());
  Group g = Group::from_generators(d_->domain.identity(), std::move(gens),
                                   "kernel")
                .with_known_elements(std::move(ker));
  return Subgroup(d_->domain, std::move(g));
}

bool Homomorphism::is_surjective() const {
  return image().order_factored() == d_->codomain.order_factored();
}

Homomorphism Homomorphism::compose_after(const Homomorphism& inner) const {
  Homomorphism outer = *this;
  Homomorphism in = inner;
  return Homomorphism::with_evaluator(
      in.domain(), outer.codomain(),
      [outer, in](const Element& e) { return outer.apply(in.apply(e)); });
}

bool Homomorphism::equal_on_domain(const Homomorphism& o) const {
  for (const auto& e : d_->domain.elements().items()) {
    if (!(apply(e) == o.apply(e))) return false;
  }
  return true;
}

Element QuotientResult::lift(const Element& q) const {
  if (!cosets) return q;  // quotient by the trivial subgroup is G itself
  return cosets->representative(q.image_of(0));
}

QuotientResult quotient_group(const Group& g, const Subgroup& n,
                              std::string name) {
  std::string violation;
  if (!is_normal_in(g, n, &violation)) {
    throw DomainError("quotient requires a normal subgroup: " + violation);
  }
  if (n.group().is_trivial()) {
    return QuotientResult{g, Homomorphism::identity(g), nullptr};
  }
  auto cs = std::make_shared<CosetSpace>(g, n);
  std::vector<Element> qgens;
  for (std::size_t k = 0; k < g.generators().size(); ++k) {
    std::vector<std::uint32_t> img = cs->generator_action(k);
    qgens.push_back(Element::permutation(std::move(img)));
  }
  Group quotient =
      Group::from_generators(Element::permutation_identity((std::uint32_t)cs->size()),
                             std::move(qgens),
                             name.empty() ? g.name() + "/N" : name)
          .with_structural_order(FactoredOrder::of(cs->size()));
  Homomorphism proj = Homomorphism::with_evaluator(
      g, quotient, [cs](const Element& e) { return cs->action_permutation(e); });
  return QuotientResult{std::move(quotient), std::move(proj), std::move(cs)};
}

}  // namespace chainforge
