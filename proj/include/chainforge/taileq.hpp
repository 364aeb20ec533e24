#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chainforge/factored.hpp"
#include "chainforge/group.hpp"
#include "chainforge/hom.hpp"
#include "chainforge/profinite.hpp"

namespace chainforge {

// Finite window of a sequence of surjective homomorphisms, either held
// explicitly (groups + maps) or structurally (orders + kernel orders, with
// optional prime-power factor lists per level for the wild family).
struct StructuralSequence {
  std::vector<FactoredOrder> orders;
  std::vector<FactoredOrder> kernel_orders;  // one per map
  // per level, the multiset of (prime, exponent) pieces; family sequences
  // carry this and it drives the exact obstruction argument
  std::optional<std::vector<std::vector<std::pair<std::uint64_t, int>>>>
      level_factors;
};

struct HomSequence {
  std::vector<Group> groups;
  std::vector<Homomorphism> maps;
  std::optional<StructuralSequence> structural;

  bool is_structural() const { return structural.has_value(); }
  std::size_t length() const {
    return is_structural() ? structural->orders.size() : groups.size();
  }
  FactoredOrder order_at(std::size_t i) const;
  FactoredOrder kernel_order_at(std::size_t i) const;  // of map i -> i+1
};

// The family's discriminant sequence D_0 -> D_1 -> ... (structural).
HomSequence family_sequence(const FamilySpec& fam);

// Surjectivity of every map verified (image order = codomain order for
// explicit maps, order bookkeeping for structural ones); the error names
// the failing index.
void check_sequence(const HomSequence& seq);

struct ConstancyVerdict {
  bool constant_from_some_index = false;
  std::size_t from = 0;    // first index with all later kernels trivial
  std::size_t window = 0;  // number of maps examined
};

// Lemma-style criterion at finite depth: constant-from(i0) iff every kernel
// from i0 on (within the window) is trivial; never a claim past the window.
ConstancyVerdict asymptotically_constant(const HomSequence& seq,
                                         std::size_t window);

struct ObstructionEntry {
  std::size_t index = 0;
  std::uint64_t prime = 0;
  int left_exponent = 0;
  int right_exponent = 0;
  std::string reason;
};

// A witness normalized to the zig-zag form: aligned window offsets plus
// levelwise isomorphisms; the intertwined sequence runs through copies of
// the two input sequences.
struct InterleavingWitness {
  std::size_t a_start = 0;
  std::size_t b_start = 0;
  std::vector<std::size_t> p_indices;
  std::vector<std::size_t> q_indices;
  std::vector<Homomorphism> isos;  // explicit mode only
  std::string certification;       // "elementwise" or "order-arithmetic"
};

struct InterleavingResult {
  enum class Kind { witness, exhausted, obstructed };
  Kind kind = Kind::exhausted;
  std::optional<InterleavingWitness> witness;
  std::vector<ObstructionEntry> obstructions;
  std::size_t bound = 0;
};

// Bounded semi-decision.  Witnesses are re-verified before being returned;
// "exhausted" is distinct from the sound order-arithmetic "obstructed".
InterleavingResult interleaving_search(const HomSequence& a,
                                       const HomSequence& b, std::size_t bound);

bool verify_witness(const HomSequence& a, const HomSequence& b,
                    const InterleavingWitness& w);

struct TailDecision {
  enum class Kind { equivalent_on_window, distinct_evidence };
  Kind kind = Kind::distinct_evidence;
  std::size_t window = 0;
  std::size_t agree_from = 0;  // the n with s_i = t_i for all i >= n
  std::vector<ObstructionEntry> obstructions;
  std::string criterion;
};

// The family decision: equivalent-on-window iff the bit sequences agree from
// some index through the end of the examined window; distinct-evidence
// carries the per-index order obstruction.  Requires equal prime lists.
TailDecision family_tail_decide(const FamilySpec& a, const FamilySpec& b);

}  // namespace chainforge
