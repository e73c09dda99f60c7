#include "distcheck/value.hpp"

#include <numeric>

#include "distcheck/error.hpp"

namespace distcheck {

const char* domain_name(Domain d) {
  switch (d) {
    case Domain::Nat: return "nat";
    case Domain::Int: return "int";
    case Domain::Rat: return "rat";
  }
  return "?";
}

Value::Value(long long n, long long d) : num_(n), den_(d) {
  if (den_ == 0) throw Error(ErrorCode::DomainMismatch, "zero denominator");
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::string Value::str() const {
  std::string s = std::to_string(num_);
  if (den_ != 1) s += "/" + std::to_string(den_);
  return s;
}

Value operator+(const Value& a, const Value& b) {
  return Value(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Value operator-(const Value& a, const Value& b) {
  return Value(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Value operator*(const Value& a, const Value& b) {
  return Value(a.num_ * b.num_, a.den_ * b.den_);
}

bool in_domain(const Value& v, Domain d) {
  switch (d) {
    case Domain::Nat: return v.den() == 1 && v.num() >= 0;
    case Domain::Int: return v.den() == 1;
    case Domain::Rat: return true;
  }
  return false;
}

void check_domain(const Value& v, Domain d) {
  if (!in_domain(v, d))
    throw Error(ErrorCode::DomainMismatch, "value " + v.str() +
                                               " not in domain " +
                                               domain_name(d));
}

}  // namespace distcheck
