#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "chainforge/chain.hpp"
#include "chainforge/group.hpp"
#include "chainforge/profinite.hpp"
#include "chainforge/taileq.hpp"

namespace chainforge {

using json = nlohmann::json;

// ---- input descriptors ----

// {"kind":"permutation","degree":d,"generators":[[...],...]}
// {"kind":"sl","n":N,"mod":m}
// {"kind":"family_subgroup","p":p,"variant":1|2}
Group parse_group(const json& j);

// {"generators":[element,...]} with a permutation element as an image array
// and a matrix element as a row-major entry array, or a family_subgroup
// descriptor when the parent is SL_3(Z/pZ).
Subgroup parse_subgroup(const json& j, const Group& parent);

Element parse_element(const json& j, const Element& shape);

// {"primes":[...],"bits":[...],"depth":L?,"mode":...?}
struct FamilyFile {
  FamilySpec spec;
  std::string mode = "both";  // structural | explicit | both
};
FamilyFile parse_family_file(const json& j);

// {"mode":"explicit","base":...,"levels":[...]} or
// {"mode":"profinite","family":...}
struct ChainFile {
  std::optional<GroupChain> explicit_chain;
  std::optional<FamilyFile> family;
};
ChainFile parse_chain_file(const json& j);

// {"groups":[...],"maps":[{"generator_images":[...]},...]} or
// {"structural":{"orders":[...],"kernel_orders":[...]}}
HomSequence parse_sequence_file(const json& j);

json load_json_file(const std::string& path);

// ---- output serialization ----

json element_to_json(const Element& e);
json order_to_json(const FactoredOrder& o);  // number if small, string if not

}  // namespace chainforge
