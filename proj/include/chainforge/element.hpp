#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace chainforge {

class Element;

namespace detail {

struct PermRep {
  std::vector<std::uint32_t> img;  // img[i] = image of point i
  bool operator==(const PermRep&) const = default;
};

struct MatRep {
  std::uint32_t n = 0;    // dimension
  std::uint32_t mod = 0;  // modulus, entries reduced into [0, mod)
  std::vector<std::uint32_t> a;  // row-major, size n*n
  bool operator==(const MatRep&) const = default;
};

struct TupleRep {
  std::vector<Element> parts;  // one component per direct factor
  bool operator==(const TupleRep& o) const;
};

struct ElementBox {
  std::variant<PermRep, MatRep, TupleRep> rep;
  mutable std::atomic<std::size_t> cached_hash{0};
};

}  // namespace detail

enum class ElementKind { permutation, matrix, tuple };

// Immutable group element: a permutation of {0..d-1}, a square matrix over
// Z/mZ, or a componentwise tuple of elements (direct products).  Copies
// share the underlying representation.
class Element {
 public:
  Element();  // empty permutation; a placeholder value

  static Element permutation(std::vector<std::uint32_t> images);
  static Element permutation_identity(std::uint32_t degree);
  static Element matrix(std::uint32_t n, std::uint32_t mod,
                        std::vector<std::uint32_t> entries);
  static Element matrix_identity(std::uint32_t n, std::uint32_t mod);
  static Element tuple(std::vector<Element> parts);

  ElementKind kind() const;

  // permutation accessors
  std::uint32_t degree() const;
  const std::vector<std::uint32_t>& images() const;
  std::uint32_t image_of(std::uint32_t point) const;

  // matrix accessors
  std::uint32_t dim() const;
  std::uint32_t modulus() const;
  const std::vector<std::uint32_t>& entries() const;
  std::uint64_t det() const;

  // tuple accessors
  const std::vector<Element>& parts() const;
  Element project(std::size_t first_k) const;  // truncate tuple to first k parts

  // a * b applies b first, then a: function composition / matrix product.
  Element operator*(const Element& o) const;
  Element inverse() const;
  Element conjugated_by(const Element& g) const;  // g * this * g^-1

  bool is_identity() const;
  bool operator==(const Element& o) const;
  bool operator!=(const Element& o) const { return !(*this == o); }

  // same degree / dim+mod / componentwise shapes
  bool same_shape(const Element& o) const;
  Element identity_like() const;

  std::uint64_t element_order() const;

  // structural hash, memoized per representation
  std::size_t hash() const;

  // Dense mixed-radix code, injective on elements of one shape; nullopt when
  // the shape's state space does not fit in 64 bits.
  std::optional<std::uint64_t> pack() const;

  // Canonical packed byte string; equal iff elements equal.  Used where a
  // total order on elements is needed (canonical coset representatives).
  std::string key() const;

  std::string str() const;  // human-readable

 private:
  bool pack_into(std::uint64_t& code, std::uint64_t& space) const;
  explicit Element(std::shared_ptr<const detail::ElementBox> box)
      : box_(std::move(box)) {}
  static Element make(std::variant<detail::PermRep, detail::MatRep,
                                   detail::TupleRep> rep);
  const std::variant<detail::PermRep, detail::MatRep, detail::TupleRep>& rep()
      const {
    return box_->rep;
  }
  std::shared_ptr<const detail::ElementBox> box_;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const { return e.hash(); }
};

// inverses over Z/mZ (m need not be prime; group elements have unit dets)
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m);

}  // namespace chainforge
