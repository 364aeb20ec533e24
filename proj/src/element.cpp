#include "chainforge/element.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "chainforge/errors.hpp"

namespace chainforge {

namespace detail {

bool TupleRep::operator==(const TupleRep& o) const { return parts == o.parts; }

}  // namespace detail

using detail::ElementBox;
using detail::MatRep;
using detail::PermRep;
using detail::TupleRep;

Element Element::make(std::variant<PermRep, MatRep, TupleRep> rep) {
  auto box = std::make_shared<ElementBox>();
  box->rep = std::move(rep);
  return Element(std::move(box));
}

Element::Element() : box_(nullptr) {
  static const std::shared_ptr<const ElementBox> empty = [] {
    auto b = std::make_shared<ElementBox>();
    b->rep = PermRep{};
    return b;
  }();
  box_ = empty;
}

Element Element::permutation(std::vector<std::uint32_t> images) {
  std::vector<bool> seen(images.size(), false);
  for (std::uint32_t x : images) {
    if (x >= images.size() || seen[x]) {
      throw DomainError("permutation image array is not a bijection");
    }
    seen[x] = true;
  }
  return make(PermRep{std::move(images)});
}

Element Element::permutation_identity(std::uint32_t degree) {
  std::vector<std::uint32_t> img(degree);
  std::iota(img.begin(), img.end(), 0u);
  return make(PermRep{std::move(img)});
}

Element Element::matrix(std::uint32_t n, std::uint32_t mod,
                        std::vector<std::uint32_t> entries) {
  if (n == 0 || mod < 2) throw DomainError("matrix needs n >= 1 and mod >= 2");
  if (entries.size() != std::size_t(n) * n) {
    throw DomainError("matrix entry array has wrong length");
  }
  for (auto& e : entries) e %= mod;
  return make(MatRep{n, mod, std::move(entries)});
}

Element Element::matrix_identity(std::uint32_t n, std::uint32_t mod) {
  std::vector<std::uint32_t> a(std::size_t(n) * n, 0u);
  for (std::uint32_t i = 0; i < n; ++i) a[std::size_t(i) * n + i] = 1u;
  return Element::matrix(n, mod, std::move(a));
}

Element Element::tuple(std::vector<Element> parts) {
  if (parts.empty()) throw DomainError("tuple element needs at least one part");
  return make(TupleRep{std::move(parts)});
}

ElementKind Element::kind() const {
  if (std::holds_alternative<PermRep>(rep())) return ElementKind::permutation;
  if (std::holds_alternative<MatRep>(rep())) return ElementKind::matrix;
  return ElementKind::tuple;
}

std::uint32_t Element::degree() const {
  return (std::uint32_t)std::get<PermRep>(rep()).img.size();
}

const std::vector<std::uint32_t>& Element::images() const {
  return std::get<PermRep>(rep()).img;
}

std::uint32_t Element::image_of(std::uint32_t point) const {
  return std::get<PermRep>(rep()).img.at(point);
}

std::uint32_t Element::dim() const { return std::get<MatRep>(rep()).n; }
std::uint32_t Element::modulus() const { return std::get<MatRep>(rep()).mod; }
const std::vector<std::uint32_t>& Element::entries() const {
  return std::get<MatRep>(rep()).a;
}

const std::vector<Element>& Element::parts() const {
  return std::get<TupleRep>(rep()).parts;
}

Element Element::project(std::size_t first_k) const {
  const auto& p = parts();
  if (first_k == 0 || first_k > p.size()) {
    throw DomainError("tuple projection length out of range");
  }
  return Element::tuple(std::vector<Element>(p.begin(), p.begin() + first_k));
}

namespace {

// recursive cofactor determinant; dimensions in this project stay tiny
std::uint64_t det_rec(const std::vector<std::uint32_t>& a, std::uint32_t n,
                      std::uint64_t mod) {
  if (n == 1) return a[0] % mod;
  if (n == 2) {
    std::uint64_t pos = (std::uint64_t)a[0] * a[3] % mod;
    std::uint64_t neg = (std::uint64_t)a[1] * a[2] % mod;
    return (pos + mod - neg) % mod;
  }
  std::uint64_t acc = 0;
  std::vector<std::uint32_t> minor((n - 1) * (n - 1));
  for (std::uint32_t c = 0; c < n; ++c) {
    std::size_t k = 0;
    for (std::uint32_t i = 1; i < n; ++i) {
      for (std::uint32_t j = 0; j < n; ++j) {
        if (j != c) minor[k++] = a[std::size_t(i) * n + j];
      }
    }
    std::uint64_t term = (std::uint64_t)a[c] * det_rec(minor, n - 1, mod) % mod;
    acc = (c % 2 == 0) ? (acc + term) % mod : (acc + mod - term) % mod;
  }
  return acc;
}

}  // namespace

std::uint64_t Element::det() const {
  const auto& m = std::get<MatRep>(rep());
  return det_rec(m.a, m.n, m.mod);
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, newt = 1;
  std::int64_t r = (std::int64_t)m, newr = (std::int64_t)(a % m);
  while (newr != 0) {
    std::int64_t q = r / newr;
    std::int64_t tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) {
    throw DomainError("element not invertible mod " + std::to_string(m));
  }
  if (t < 0) t += (std::int64_t)m;
  return (std::uint64_t)t;
}

Element Element::operator*(const Element& o) const {
  if (rep().index() != o.rep().index()) {
    throw DomainError("composing elements of different kinds");
  }
  if (const auto* p = std::get_if<PermRep>(&rep())) {
    const auto& q = std::get<PermRep>(o.rep());
    if (p->img.size() != q.img.size()) {
      throw DomainError("composing permutations of different degree");
    }
    std::vector<std::uint32_t> r(p->img.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = p->img[q.img[i]];
    return make(PermRep{std::move(r)});
  }
  if (const auto* m = std::get_if<MatRep>(&rep())) {
    const auto& b = std::get<MatRep>(o.rep());
    if (m->n != b.n || m->mod != b.mod) {
      throw DomainError("composing matrices of different shape");
    }
    const std::uint32_t n = m->n;
    const std::uint64_t mod = m->mod;
    std::vector<std::uint32_t> r(std::size_t(n) * n);
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = 0; j < n; ++j) {
        std::uint64_t acc = 0;
        for (std::uint32_t k = 0; k < n; ++k) {
          acc += (std::uint64_t)m->a[std::size_t(i) * n + k] *
                 b.a[std::size_t(k) * n + j] % mod;
        }
        r[std::size_t(i) * n + j] = (std::uint32_t)(acc % mod);
      }
    }
    return make(MatRep{n, (std::uint32_t)mod, std::move(r)});
  }
  const auto& t = std::get<TupleRep>(rep());
  const auto& u = std::get<TupleRep>(o.rep());
  if (t.parts.size() != u.parts.size()) {
    throw DomainError("composing tuples of different length");
  }
  std::vector<Element> r;
  r.reserve(t.parts.size());
  for (std::size_t i = 0; i < t.parts.size(); ++i) {
    r.push_back(t.parts[i] * u.parts[i]);
  }
  return make(TupleRep{std::move(r)});
}

Element Element::inverse() const {
  if (const auto* p = std::get_if<PermRep>(&rep())) {
    std::vector<std::uint32_t> r(p->img.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[p->img[i]] = (std::uint32_t)i;
    return make(PermRep{std::move(r)});
  }
  if (const auto* m = std::get_if<MatRep>(&rep())) {
    const std::uint32_t n = m->n;
    const std::uint64_t mod = m->mod;
    std::uint64_t dinv = mod_inverse(det(), mod);
    // adjugate: adj[j][i] = (-1)^{i+j} * minor(i,j)
    std::vector<std::uint32_t> r(std::size_t(n) * n);
    if (n == 1) {
      r[0] = (std::uint32_t)dinv;
    } else {
      std::vector<std::uint32_t> minor((n - 1) * (n - 1));
      for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) {
          std::size_t k = 0;
          for (std::uint32_t r2 = 0; r2 < n; ++r2) {
            if (r2 == i) continue;
            for (std::uint32_t c2 = 0; c2 < n; ++c2) {
              if (c2 == j) continue;
              minor[k++] = m->a[std::size_t(r2) * n + c2];
            }
          }
          std::uint64_t cof = det_rec(minor, n - 1, mod);
          if ((i + j) % 2 == 1) cof = (mod - cof) % mod;
          r[std::size_t(j) * n + i] = (std::uint32_t)(cof * dinv % mod);
        }
      }
    }
    return make(MatRep{n, (std::uint32_t)mod, std::move(r)});
  }
  const auto& t = std::get<TupleRep>(rep());
  std::vector<Element> r;
  r.reserve(t.parts.size());
  for (const auto& p : t.parts) r.push_back(p.inverse());
  return make(TupleRep{std::move(r)});
}

Element Element::conjugated_by(const Element& g) const {
  return g * (*this) * g.inverse();
}

bool Element::is_identity() const {
  if (const auto* p = std::get_if<PermRep>(&rep())) {
    for (std::size_t i = 0; i < p->img.size(); ++i) {
      if (p->img[i] != i) return false;
    }
    return true;
  }
  if (const auto* m = std::get_if<MatRep>(&rep())) {
    for (std::uint32_t i = 0; i < m->n; ++i) {
      for (std::uint32_t j = 0; j < m->n; ++j) {
        if (m->a[std::size_t(i) * m->n + j] != (i == j ? 1u : 0u)) return false;
      }
    }
    return true;
  }
  for (const auto& p : std::get<TupleRep>(rep()).parts) {
    if (!p.is_identity()) return false;
  }
  return true;
}

bool Element::operator==(const Element& o) const {
  if (box_ == o.box_) return true;
  if (hash() != o.hash()) return false;
  return rep() == o.rep();
}

bool Element::same_shape(const Element& o) const {
  if (rep().index() != o.rep().index()) return false;
  if (const auto* p = std::get_if<PermRep>(&rep())) {
    return p->img.size() == std::get<PermRep>(o.rep()).img.size();
  }
  if (const auto* m = std::get_if<MatRep>(&rep())) {
    const auto& b = std::get<MatRep>(o.rep());
    return m->n == b.n && m->mod == b.mod;
  }
  const auto& t = std::get<TupleRep>(rep()).parts;
  const auto& u = std::get<TupleRep>(o.rep()).parts;
  if (t.size() != u.size()) return false;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!t[i].same_shape(u[i])) return false;
  }
  return true;
}

Element Element::identity_like() const {
  if (const auto* p = std::get_if<PermRep>(&rep())) {
    return permutation_identity((std::uint32_t)p->img.size());
  }
  if (const auto* m = std::get_if<MatRep>(&rep())) {
    return matrix_identity(m->n, m->mod);
  }
  std::vector<Element> r;
  for (const auto& p : std::get<TupleRep>(rep()).parts) {
    r.push_back(p.identity_like());
  }
  return make(TupleRep{std::move(r)});
}

std::uint64_t Element::element_order() const {
  constexpr std::uint64_t kCap = 100000000ull;
  Element x = *this;
  std::uint64_t k = 1;
  while (!x.is_identity()) {
    x = x * (*this);
    if (++k > kCap) throw InternalError("element order exceeds sanity cap");
  }
  return k;
}

namespace {

constexpr std::size_t kFnvOffset = 14695981039346656037ull;
constexpr std::size_t kFnvPrime = 1099511628211ull;

inline std::size_t fnv_step(std::size_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (i * 8)) & 0xff;
    h *= kFnvPrime;
  }
  return h;
}

}  // namespace

std::size_t Element::hash() const {
  std::size_t cached = box_->cached_hash.load(std::memory_order_relaxed);
  if (cached != 0) return cached;
  std::size_t h = kFnvOffset;
  if (const auto* p = std::get_if<PermRep>(&rep())) {
    h = fnv_step(h, 1);
    h = fnv_step(h, p->img.size());
    for (std::uint32_t x : p->img) h = fnv_step(h, x);
  } else if (const auto* m = std::get_if<MatRep>(&rep())) {
    h = fnv_step(h, 2);
    h = fnv_step(h, ((std::uint64_t)m->n << 32) | m->mod);
    for (std::uint32_t x : m->a) h = fnv_step(h, x);
  } else {
    const auto& t = std::get<TupleRep>(rep()).parts;
    h = fnv_step(h, 3);
    h = fnv_step(h, t.size());
    for (const auto& p : t) h = fnv_step(h, p.hash());
  }
  if (h == 0) h = 1;  // 0 marks "not yet computed"
  box_->cached_hash.store(h, std::memory_order_relaxed);
  return h;
}

bool Element::pack_into(std::uint64_t& code, std::uint64_t& space) const {
  // `space` tracks the product of radices so packability is a property of
  // the shape, never of the particular entry values
  auto push = [&code, &space](std::uint64_t radix, std::uint64_t value) {
    if (radix == 0 || space > UINT64_MAX / radix) return false;
    space *= radix;
    code = code * radix + value;
    return true;
  };
  if (const auto* p = std::get_if<PermRep>(&rep())) {
    std::uint64_t d = p->img.size();
    for (std::uint32_t x : p->img) {
      if (!push(d, x)) return false;
    }
    return true;
  }
  if (const auto* m = std::get_if<MatRep>(&rep())) {
    for (std::uint32_t x : m->a) {
      if (!push(m->mod, x)) return false;
    }
    return true;
  }
  for (const auto& part : std::get<TupleRep>(rep()).parts) {
    if (!part.pack_into(code, space)) return false;
  }
  return true;
}

std::optional<std::uint64_t> Element::pack() const {
  std::uint64_t code = 0;
  std::uint64_t space = 1;
  if (!pack_into(code, space)) return std::nullopt;
  return code;
}

namespace {

void append_entry(std::string& s, std::uint32_t v, bool wide) {
  s.push_back((char)(v & 0xff));
  s.push_back((char)((v >> 8) & 0xff));
  if (wide) {
    s.push_back((char)((v >> 16) & 0xff));
    s.push_back((char)((v >> 24) & 0xff));
  }
}

}  // namespace

std::string Element::key() const {
  std::string s;
  if (const auto* p = std::get_if<PermRep>(&rep())) {
    bool wide = p->img.size() > 0xffff;
    s.push_back(wide ? 'Q' : 'P');
    append_entry(s, (std::uint32_t)p->img.size(), true);
    for (std::uint32_t x : p->img) append_entry(s, x, wide);
    return s;
  }
  if (const auto* m = std::get_if<MatRep>(&rep())) {
    bool wide = m->mod > 0xffff;
    s.push_back(wide ? 'N' : 'M');
    append_entry(s, m->n, false);
    append_entry(s, m->mod, true);
    for (std::uint32_t x : m->a) append_entry(s, x, wide);
    return s;
  }
  const auto& t = std::get<TupleRep>(rep()).parts;
  s.push_back('T');
  append_entry(s, (std::uint32_t)t.size(), false);
  for (const auto& p : t) {
    std::string k = p.key();
    append_entry(s, (std::uint32_t)k.size(), true);
    s += k;
  }
  return s;
}

std::string Element::str() const {
  std::ostringstream os;
  if (const auto* p = std::get_if<PermRep>(&rep())) {
    // disjoint cycle notation
    std::vector<bool> done(p->img.size(), false);
    bool any = false;
    for (std::size_t i = 0; i < p->img.size(); ++i) {
      if (done[i] || p->img[i] == i) continue;
      any = true;
      os << '(' << i;
      done[i] = true;
      for (std::uint32_t j = p->img[i]; j != i; j = p->img[j]) {
        os << ' ' << j;
        done[j] = true;
      }
      os << ')';
    }
    if (!any) os << "()";
    return os.str();
  }
  if (const auto* m = std::get_if<MatRep>(&rep())) {
    os << '[';
    for (std::uint32_t i = 0; i < m->n; ++i) {
      if (i) os << "; ";
      for (std::uint32_t j = 0; j < m->n; ++j) {
        if (j) os << ' ';
        os << m->a[std::size_t(i) * m->n + j];
      }
    }
    os << "] mod " << m->mod;
    return os.str();
  }
  os << '(';
  const auto& t = std::get<TupleRep>(rep()).parts;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) os << ", ";
    os << t[i].str();
  }
  os << ')';
  return os.str();
}

}  // namespace chainforge
