#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace chainforge {

// Exact positive integer kept in factored form.  Orders of structural groups
// (products of SL factors, primorial-sized discriminants) overflow uint64_t,
// so arithmetic on them stays factored and only rendering multiplies out.
class FactoredOrder {
 public:
  FactoredOrder() = default;  // the integer 1

  static FactoredOrder of(std::uint64_t n);  // trial-division factorization
  static FactoredOrder prime_power(std::uint64_t p, std::uint32_t e);

  FactoredOrder operator*(const FactoredOrder& o) const;
  FactoredOrder& operator*=(const FactoredOrder& o);

  bool divides(const FactoredOrder& o) const;
  // Exact quotient; throws InternalError when *this does not divide o.
  FactoredOrder quotient_of(const FactoredOrder& o) const;

  FactoredOrder pow(std::uint32_t e) const;

  bool operator==(const FactoredOrder& o) const { return f_ == o.f_; }
  bool operator!=(const FactoredOrder& o) const { return f_ != o.f_; }

  bool is_one() const { return f_.empty(); }

  // Value as uint64_t when it fits, nullopt on overflow.
  std::optional<std::uint64_t> value() const;

  // Exact decimal rendering (works past 64 bits).
  std::string str() const;

  const std::map<std::uint64_t, std::uint32_t>& factors() const { return f_; }

 private:
  std::map<std::uint64_t, std::uint32_t> f_;  // prime -> exponent
};

bool is_prime(std::uint64_t n);

}  // namespace chainforge
