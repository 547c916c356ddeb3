#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace fhist {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const BigInt& x) { return x.convert_to<double>(); }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

// n (n-1) ... (n-k+1); zero when k > n.
inline BigInt falling_factorial(long long n, long long k) {
  BigInt out = 1;
  if (k > n) return 0;
  for (long long i = 0; i < k; ++i) out *= (n - i);
  return out;
}

inline BigInt binomial(long long n, long long k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt out = 1;
  for (long long i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

inline BigInt factorial(long long n) { return falling_factorial(n, n); }

}  // namespace fhist
