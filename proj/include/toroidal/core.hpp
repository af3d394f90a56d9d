#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace toroidal {

using cplx = std::complex<double>;

// Power with a fixed branch: cpow(b, x) = exp(x log b) with the principal
// logarithm.  Computed this way, cpow(b, x) * cpow(b, y) == cpow(b, x+y)
// holds to machine precision, which is what the exponent bookkeeping in the
// vertex-operator formulas relies on.
inline cplx cpow(cplx base, double expo) {
  if (base == cplx(0.0, 0.0)) {
    if (expo == 0.0) return {1.0, 0.0};
    if (expo > 0.0) return {0.0, 0.0};
    throw std::domain_error("cpow: zero base with negative exponent");
  }
  return std::exp(expo * std::log(base));
}

inline cplx cpow(cplx base, cplx expo) { return std::exp(expo * std::log(base)); }

// integer power, exact for small |k|
inline cplx ipow(cplx base, long k) {
  if (k == 0) return {1.0, 0.0};
  cplx b = k > 0 ? base : cplx(1.0, 0.0) / base;
  unsigned long e = k > 0 ? static_cast<unsigned long>(k) : static_cast<unsigned long>(-k);
  cplx acc{1.0, 0.0};
  while (e) {
    if (e & 1ul) acc *= b;
    b *= b;
    e >>= 1ul;
  }
  return acc;
}

// q-number [x] = (q^x - q^-x)/(q - q^-1)
inline cplx qnum(cplx q, long x) {
  return (ipow(q, x) - ipow(q, -x)) / (q - cplx(1.0, 0.0) / q);
}

inline int imod(int a, int n) {
  int r = a % n;
  return r < 0 ? r + n : r;
}

// delta^{(N)}_{i,k}: 1 iff i == k mod N
inline int delta_mod(int i, int k, int N) { return imod(i - k, N) == 0 ? 1 : 0; }

// Row/column geometry of the boson grid.  Site index = i*n + j.
struct Geometry {
  int m = 2;
  int n = 2;
  int sites() const { return m * n; }
  int site(int i, int j) const { return imod(i, m) * n + imod(j, n); }
};

}  // namespace toroidal
