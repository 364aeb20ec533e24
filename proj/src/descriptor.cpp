#include "chainforge/descriptor.hpp"

#include <fstream>

#include "chainforge/errors.hpp"
#include "chainforge/slgroup.hpp"

namespace chainforge {

namespace {

const json& require_field(const json& j, const char* name, const char* what) {
  if (!j.is_object() || !j.contains(name)) {
    throw SpecError(std::string(what) + ": missing field \"" + name + "\"");
  }
  return j.at(name);
}

std::uint64_t require_uint(const json& j, const char* name, const char* what) {
  const json& v = require_field(j, name, what);
  if (!v.is_number_unsigned()) {
    throw SpecError(std::string(what) + ": field \"" + name +
                    "\" must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw SpecError("parse error in " + path + ": " + e.what());
  }
  return j;
}

Group parse_group(const json& j) {
  std::string kind = require_field(j, "kind", "group descriptor")
                         .get<std::string>();
  if (kind == "permutation") {
    std::uint64_t degree = require_uint(j, "degree", "permutation group");
    const json& gens = require_field(j, "generators", "permutation group");
    if (!gens.is_array()) {
      throw SpecError("permutation group: \"generators\" must be an array");
    }
    std::vector<Element> elems;
    for (const auto& g : gens) {
      if (!g.is_array() || g.size() != degree) {
        throw SpecError("permutation generator must be an image array of "
                        "length " + std::to_string(degree));
      }
      elems.push_back(parse_element(
          g, Element::permutation_identity((std::uint32_t)degree)));
    }
    return Group::from_generators(
        Element::permutation_identity((std::uint32_t)degree),
        std::move(elems), "permutation group");
  }
  if (kind == "sl") {
    std::uint64_t n = require_uint(j, "n", "sl group");
    std::uint64_t m = require_uint(j, "mod", "sl group");
    return sl_group((std::uint32_t)n, m);
  }
  if (kind == "family_subgroup") {
    std::uint64_t p = require_uint(j, "p", "family subgroup");
    std::uint64_t v = require_uint(j, "variant", "family subgroup");
    return sl_family_subgroup(p, (int)v).group();
  }
  throw SpecError("unknown group kind \"" + kind + "\"");
}

Element parse_element(const json& j, const Element& shape) {
  if (shape.kind() == ElementKind::permutation) {
    if (!j.is_array()) throw SpecError("permutation element must be an array");
    std::vector<std::uint32_t> img;
    for (const auto& x : j) {
      if (!x.is_number_unsigned()) {
        throw SpecError("permutation image entries must be non-negative");
      }
      img.push_back(x.get<std::uint32_t>());
    }
    if (img.size() != shape.degree()) {
      throw SpecError("permutation element has degree " +
                      std::to_string(img.size()) + ", expected " +
                      std::to_string(shape.degree()));
    }
    return Element::permutation(std::move(img));
  }
  if (shape.kind() == ElementKind::matrix) {
    if (!j.is_array()) {
      throw SpecError("matrix element must be a row-major entry array");
    }
    std::vector<std::uint32_t> entries;
    for (const auto& x : j) {
      if (!x.is_number_unsigned()) {
        throw SpecError("matrix entries must be non-negative integers");
      }
      entries.push_back(x.get<std::uint32_t>());
    }
    if (entries.size() != std::size_t(shape.dim()) * shape.dim()) {
      throw SpecError("matrix element needs " +
                      std::to_string(shape.dim() * shape.dim()) + " entries");
    }
    return Element::matrix(shape.dim(), shape.modulus(), std::move(entries));
  }
  throw SpecError("tuple elements are produced by reports, not consumed");
}

Subgroup parse_subgroup(const json& j, const Group& parent) {
  if (j.is_object() && j.contains("kind")) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "family_subgroup") {
      std::uint64_t p = require_uint(j, "p", "family subgroup");
      std::uint64_t v = require_uint(j, "variant", "family subgroup");
      return sl_family_subgroup_in(parent, p, (int)v);
    }
    throw SpecError("unknown subgroup kind \"" + kind + "\"");
  }
  const json& gens = require_field(j, "generators", "subgroup descriptor");
  if (!gens.is_array()) {
    throw SpecError("subgroup descriptor: \"generators\" must be an array");
  }
  std::vector<Element> elems;
  for (const auto& g : gens) {
    elems.push_back(parse_element(g, parent.identity()));
  }
  return close_subgroup(parent, std::move(elems));
}

FamilyFile parse_family_file(const json& j) {
  FamilyFile f;
  const json& primes = require_field(j, "primes", "family spec");
  const json& bits = require_field(j, "bits", "family spec");
  if (!primes.is_array() || !bits.is_array()) {
    throw SpecError("family spec: \"primes\" and \"bits\" must be arrays");
  }
  for (const auto& p : primes) {
    if (!p.is_number_unsigned()) throw SpecError("family spec: primes must be integers");
    f.spec.primes.push_back(p.get<std::uint64_t>());
  }
  for (const auto& b : bits) {
    if (!b.is_number_unsigned()) throw SpecError("family spec: bits must be integers");
    f.spec.bits.push_back((int)b.get<std::uint64_t>());
  }
  if (j.contains("depth")) {
    std::uint64_t depth = require_uint(j, "depth", "family spec");
    if (depth != f.spec.primes.size()) {
      throw SpecError("family spec: \"depth\" (" + std::to_string(depth) +
                      ") disagrees with the prime list length (" +
                      std::to_string(f.spec.primes.size()) + ")");
    }
  }
  if (j.contains("mode")) {
    f.mode = j.at("mode").get<std::string>();
    if (f.mode != "structural" && f.mode != "explicit" && f.mode != "both") {
      throw SpecError("family spec: \"mode\" must be structural, explicit or both");
    }
  }
  validate_family_spec(f.spec);
  return f;
}

ChainFile parse_chain_file(const json& j) {
  std::string mode = require_field(j, "mode", "chain spec").get<std::string>();
  ChainFile out;
  if (mode == "explicit") {
    GroupChain chain;
    chain.base = parse_group(require_field(j, "base", "chain spec"));
    const json& levels = require_field(j, "levels", "chain spec");
    if (!levels.is_array() || levels.empty()) {
      throw SpecError("chain spec: \"levels\" must be a nonempty array");
    }
    for (const auto& l : levels) {
      chain.levels.push_back(parse_subgroup(l, chain.base));
    }
    out.explicit_chain = std::move(chain);
    return out;
  }
  if (mode == "profinite") {
    out.family = parse_family_file(require_field(j, "family", "chain spec"));
    return out;
  }
  throw SpecError("chain spec: \"mode\" must be explicit or profinite");
}

HomSequence parse_sequence_file(const json& j) {
  HomSequence seq;
  if (j.contains("structural")) {
    const json& s = j.at("structural");
    StructuralSequence ss;
    for (const auto& o : require_field(s, "orders", "structural sequence")) {
      if (!o.is_number_unsigned()) {
        throw SpecError("structural sequence orders must be integers");
      }
      ss.orders.push_back(FactoredOrder::of(o.get<std::uint64_t>()));
    }
    for (const auto& o :
         require_field(s, "kernel_orders", "structural sequence")) {
      if (!o.is_number_unsigned()) {
        throw SpecError("structural sequence kernel orders must be integers");
      }
      ss.kernel_orders.push_back(FactoredOrder::of(o.get<std::uint64_t>()));
    }
    seq.structural = std::move(ss);
    return seq;
  }
  const json& groups = require_field(j, "groups", "sequence file");
  const json& maps = require_field(j, "maps", "sequence file");
  if (!groups.is_array() || !maps.is_array()) {
    throw SpecError("sequence file: \"groups\" and \"maps\" must be arrays");
  }
  for (const auto& g : groups) seq.groups.push_back(parse_group(g));
  if (maps.size() + 1 != seq.groups.size()) {
    throw SpecError("sequence file needs one map between consecutive groups");
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const json& images =
        require_field(maps[i], "generator_images", "sequence map");
    std::vector<Element> imgs;
    for (const auto& im : images) {
      imgs.push_back(parse_element(im, seq.groups[i + 1].identity()));
    }
    seq.maps.push_back(Homomorphism::from_generator_images(
        seq.groups[i], seq.groups[i + 1], std::move(imgs)));
  }
  return seq;
}

json element_to_json(const Element& e) {
  switch (e.kind()) {
    case ElementKind::permutation: {
      json out = json::array();
      for (auto x : e.images()) out.push_back(x);
      return json{{"perm", out}};
    }
    case ElementKind::matrix: {
      json entries = json::array();
      for (auto x : e.entries()) entries.push_back(x);
      return json{{"mat", {{"n", e.dim()}, {"mod", e.modulus()},
                           {"entries", entries}}}};
    }
    case ElementKind::tuple: {
      json parts = json::array();
      for (const auto& p : e.parts()) parts.push_back(element_to_json(p));
      return json{{"tuple", parts}};
    }
  }
  throw InternalError("unreachable element kind");
}

json order_to_json(const FactoredOrder& o) {
  auto v = o.value();
  if (v && *v <= (1ull << 53)) return json(*v);
  return json(o.str());
}

}  // namespace chainforge
