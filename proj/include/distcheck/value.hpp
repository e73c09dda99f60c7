#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace distcheck {

/// The value domain a session reasons over.
enum class Domain { Nat, Int, Rat };

const char* domain_name(Domain d);

/// An exact rational number in lowest terms, denominator positive.
/// Integers are denominator-1 rationals.
class Value {
 public:
  constexpr Value() = default;
  Value(long long n) : num_(n) {}
  Value(long long n, long long d);

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_integer() const { return den_ == 1; }

  std::string str() const;

  friend Value operator+(const Value& a, const Value& b);
  friend Value operator-(const Value& a, const Value& b);
  friend Value operator*(const Value& a, const Value& b);

  std::strong_ordering operator<=>(const Value& o) const {
    // Normalized representation: compare by cross-multiplication.
    __int128 l = static_cast<__int128>(num_) * o.den_;
    __int128 r = static_cast<__int128>(o.num_) * den_;
    return l < r ? std::strong_ordering::less
           : l > r ? std::strong_ordering::greater
                   : std::strong_ordering::equal;
  }
  bool operator==(const Value& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }

 private:
  long long num_ = 0;
  long long den_ = 1;
};

/// Throws DomainMismatch if `v` does not lie in `d`.
void check_domain(const Value& v, Domain d);

bool in_domain(const Value& v, Domain d);

}  // namespace distcheck
