#include "chainforge/factored.hpp"

#include <algorithm>
#include <vector>

#include "chainforge/errors.hpp"

namespace chainforge {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

FactoredOrder FactoredOrder::of(std::uint64_t n) {
  if (n == 0) throw InternalError("FactoredOrder::of: zero is not an order");
  FactoredOrder r;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    while (n % p == 0) {
      r.f_[p]++;
      n /= p;
    }
  }
  if (n > 1) r.f_[n]++;
  return r;
}

FactoredOrder FactoredOrder::prime_power(std::uint64_t p, std::uint32_t e) {
  FactoredOrder r;
  if (e > 0) r.f_[p] = e;
  return r;
}

FactoredOrder FactoredOrder::operator*(const FactoredOrder& o) const {
  FactoredOrder r = *this;
  r *= o;
  return r;
}

FactoredOrder& FactoredOrder::operator*=(const FactoredOrder& o) {
  for (const auto& [p, e] : o.f_) f_[p] += e;
  return *this;
}

bool FactoredOrder::divides(const FactoredOrder& o) const {
  for (const auto& [p, e] : f_) {
    auto it = o.f_.find(p);
    if (it == o.f_.end() || it->second < e) return false;
  }
  return true;
}

FactoredOrder FactoredOrder::quotient_of(const FactoredOrder& o) const {
  if (!divides(o)) {
    throw InternalError("FactoredOrder: " + str() + " does not divide " + o.str());
  }
  FactoredOrder r;
  for (const auto& [p, e] : o.f_) {
    auto it = f_.find(p);
    std::uint32_t rest = e - (it == f_.end() ? 0 : it->second);
    if (rest > 0) r.f_[p] = rest;
  }
  return r;
}

FactoredOrder FactoredOrder::pow(std::uint32_t e) const {
  FactoredOrder r;
  if (e == 0) return r;
  for (const auto& [p, k] : f_) r.f_[p] = k * e;
  return r;
}

std::optional<std::uint64_t> FactoredOrder::value() const {
  std::uint64_t v = 1;
  for (const auto& [p, e] : f_) {
    for (std::uint32_t i = 0; i < e; ++i) {
      if (v > UINT64_MAX / p) return std::nullopt;
      v *= p;
    }
  }
  return v;
}

std::string FactoredOrder::str() const {
  // digits in base 1e9, least significant chunk first
  std::vector<std::uint64_t> d{1};
  constexpr std::uint64_t kBase = 1000000000ull;
  auto mul_small = [&d](std::uint64_t m) {
    std::uint64_t carry = 0;
    for (auto& c : d) {
      unsigned __int128 t = (unsigned __int128)c * m + carry;
      c = (std::uint64_t)(t % kBase);
      carry = (std::uint64_t)(t / kBase);
    }
    while (carry) {
      d.push_back(carry % kBase);
      carry /= kBase;
    }
  };
  for (const auto& [p, e] : f_) {
    for (std::uint32_t i = 0; i < e; ++i) mul_small(p);
  }
  std::string s = std::to_string(d.back());
  for (auto it = d.rbegin() + 1; it != d.rend(); ++it) {
    std::string chunk = std::to_string(*it);
    s += std::string(9 - chunk.size(), '0') + chunk;
  }
  return s;
}

}  // namespace chainforge
