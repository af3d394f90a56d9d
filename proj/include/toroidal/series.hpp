#pragma once

#include <algorithm>
#include <vector>

#include "core.hpp"

namespace toroidal {

// Truncated Laurent series in one variable t, dense on the window
// [-W, W].  Everything outside the window is dropped; callers size W so
// that discarded coefficients are below working precision.
struct Poly1 {
  int W = 0;
  std::vector<cplx> c;  // index k+W holds the coefficient of t^k

  explicit Poly1(int window = 0) : W(window), c(2 * window + 1) {}

  static Poly1 one(int window) {
    Poly1 p(window);
    p.c[window] = 1.0;
    return p;
  }
  static Poly1 monomial(int window, cplx a, int e) {
    Poly1 p(window);
    if (std::abs(e) <= window) p.c[e + window] = a;
    return p;
  }

  cplx at(int k) const {
    if (k < -W || k > W) return {};
    return c[k + W];
  }
  void add_at(int k, cplx v) {
    if (k >= -W && k <= W) c[k + W] += v;
  }

  Poly1& operator*=(cplx s) {
    for (auto& x : c) x *= s;
    return *this;
  }
  Poly1& operator+=(const Poly1& o) {
    for (int k = -W; k <= W; ++k) add_at(k, o.at(k));
    return *this;
  }

  friend Poly1 operator*(const Poly1& a, const Poly1& b) {
    Poly1 r(a.W);
    for (int i = -a.W; i <= a.W; ++i) {
      if (a.at(i) == cplx{}) continue;
      int lo = std::max(-b.W, -a.W - i), hi = std::min(b.W, a.W - i);
      for (int j = lo; j <= hi; ++j) r.c[i + j + a.W] += a.at(i) * b.at(j);
    }
    return r;
  }

  // multiply in place by (1 - a t^e)^sign, sign = +1 or -1.
  // The reciprocal is the literal geometric expansion, valid for |a| < 1.
  void mul_factor(cplx a, int e, int sign) {
    if (e == 0) throw std::invalid_argument("mul_factor: e must be nonzero");
    if (sign == 1) {
      if (e > 0)
        for (int k = W; k >= -W; --k) c[k + W] -= a * at(k - e);
      else
        for (int k = -W; k <= W; ++k) c[k + W] -= a * at(k - e);
    } else {
      if (e > 0)
        for (int k = -W + e; k <= W; ++k) c[k + W] += a * c[k - e + W];
      else
        for (int k = W + e; k >= -W; --k) c[k + W] += a * c[k - e + W];
    }
  }

  double max_abs() const {
    double m = 0.0;
    for (auto& x : c) m = std::max(m, std::abs(x));
    return m;
  }
};

// exp of a series with only positive powers of t (no constant term),
// truncated at the window.  Uses the derivative recursion.
inline Poly1 exp_positive(const Poly1& f) {
  for (int k = -f.W; k <= 0; ++k)
    if (std::abs(f.at(k)) > 0.0) throw std::invalid_argument("exp_positive: nonpositive power");
  Poly1 e = Poly1::one(f.W);
  for (int k = 1; k <= f.W; ++k) {
    cplx s{};
    for (int j = 1; j <= k; ++j) s += double(j) * f.at(j) * e.at(k - j);
    e.c[k + f.W] = s / double(k);
  }
  return e;
}

// (x; p)_infinity with x = a t^e, truncated at p-order K:
// prod_{k=0..K} (1 - a p^k t^e)^sign.
inline void mul_pochhammer(Poly1& s, cplx a, int e, cplx p, int K, int sign) {
  cplx pk{1.0, 0.0};
  for (int k = 0; k <= K; ++k) {
    s.mul_factor(a * pk, e, sign);
    pk *= p;
  }
}

// Odd theta function Theta_p(x) = (x; p)(p/x; p)(p; p), with x = a t^e.
// sign = -1 gives the reciprocal via geometric expansion; that needs
// |a| < 1 and |p/a| < 1, which the caller's regime check guarantees.
inline void mul_theta(Poly1& s, cplx a, int e, cplx p, int K, int sign) {
  mul_pochhammer(s, a, e, p, K, sign);
  mul_pochhammer(s, p / a, -e, p, K, sign);
  cplx pk = p, scal{1.0, 0.0};
  for (int k = 1; k <= K; ++k) {
    scal *= (1.0 - pk);
    pk *= p;
  }
  if (sign == 1)
    s *= scal;
  else
    s *= cplx(1.0, 0.0) / scal;
}

// scalar Theta_p(x) for a numeric argument
inline cplx theta_value(cplx x, cplx p, int K) {
  cplx r{1.0, 0.0}, pk{1.0, 0.0};
  for (int k = 0; k <= K; ++k) {
    r *= (1.0 - pk * x);
    if (k >= 1) r *= (1.0 - pk / x) * (1.0 - pk);
    pk *= p;
  }
  return r;
}

}  // namespace toroidal
