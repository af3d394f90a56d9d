#pragma once

#include <random>
#include <sstream>
#include <vector>

#include "core.hpp"

namespace toroidal {

// Parameters of the two commuting actions on the shared Fock space.
// First family:  q1 = q^-1 d,   q2 = q^2,  q3 = q^-1 d^-1.
// Second family: qc1 = q^-1 dc, q2,        qc3 = q^-1 dc^-1.
// Both triples multiply to 1 by construction.
struct AlgebraParams {
  Geometry geo;
  cplx q{};
  cplx d{};
  cplx dc{};
  std::vector<cplx> u;   // weights u_0..u_{n-1}, indices mod n
  std::vector<cplx> uc;  // weights uc_0..uc_{m-1}, indices mod m

  cplx q1() const { return d / q; }
  cplx q2() const { return q * q; }
  cplx q3() const { return cplx(1.0, 0.0) / (q * d); }
  cplx qc1() const { return dc / q; }
  cplx qc3() const { return cplx(1.0, 0.0) / (q * dc); }

  // elliptic nomes: p = qc1^n, p* = qc3^-n, pc = q1^m, pc* = q3^-m
  cplx p() const { return ipow(qc1(), geo.n); }
  cplx pstar() const { return ipow(qc3(), -geo.n); }
  cplx pc() const { return ipow(q1(), geo.m); }
  cplx pcstar() const { return ipow(q3(), -geo.m); }

  cplx u_at(int j) const { return u[imod(j, geo.n)]; }
  cplx uc_at(int i) const { return uc[imod(i, geo.m)]; }

  // Genericity certificate: no small multiplicative relation
  // q1^a q2^b q3^c ~ 1 among exponents |a|,|b|,|c| <= bound (excluding the
  // trivial a=b=c family, which is exactly 1).
  bool generic(int bound = 6, double eps = 1e-4) const {
    cplx lq1 = std::log(q1()), lq2 = std::log(q2()), lq3 = std::log(q3());
    cplx lc1 = std::log(qc1()), lc3 = std::log(qc3());
    for (int a = -bound; a <= bound; ++a)
      for (int b = -bound; b <= bound; ++b)
        for (int c = -bound; c <= bound; ++c) {
          if (a == b && b == c) continue;
          cplx w1 = std::exp(cplx(a) * lq1 + cplx(b) * lq2 + cplx(c) * lq3);
          cplx w2 = std::exp(cplx(a) * lc1 + cplx(b) * lq2 + cplx(c) * lc3);
          if (std::abs(w1 - 1.0) < eps || std::abs(w2 - 1.0) < eps) return false;
        }
    return true;
  }

  // Regime needed by the literal series expansions used downstream:
  // |q1|, |qc1| < 1 < |q3|, |qc3| and small nomes.
  bool expansion_regime(double nome_cap = 0.11) const {
    return std::abs(q1()) < 1.0 && std::abs(qc1()) < 1.0 && std::abs(q3()) > 1.0 &&
           std::abs(qc3()) > 1.0 && std::abs(p()) < nome_cap && std::abs(pc()) < nome_cap &&
           std::abs(pstar()) < 1.0 && std::abs(pcstar()) < 1.0 &&
           std::abs(pstar() / q1()) < 1.0 && std::abs(pcstar() / qc1()) < 1.0;
  }
};

// Draw a generic parameter point from a fixed seed.  Moduli are pinned to
// an annulus where every geometric expansion used by the series code
// converges; phases are random.
inline AlgebraParams sample_params(Geometry geo, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * 3.14159265358979323846);
  std::uniform_real_distribution<double> jig(-0.02, 0.02);
  auto on = [&](double r) { return std::polar(r + jig(rng) * r, ph(rng)); };

  AlgebraParams P;
  P.geo = geo;
  // radii for |q1|, |qc1|: small enough that the nomes |q1|^m, |qc1|^n stay
  // below ~0.1 and that |p*| < |q1|, |pc*| < |qc1| (with |q| ~ 1.3,
  // |p*| = (|q||d|)^-n = (|q|^2 |q1|)^-n etc.), solved by damped iteration
  double r1 = std::min(0.30, std::pow(0.095, 1.0 / geo.m));
  double rc1 = std::min(0.30, std::pow(0.095, 1.0 / geo.n));
  for (int it = 0; it < 8; ++it) {
    r1 = std::min(r1, 0.85 * std::pow(rc1, 1.0 / geo.m) / 1.69);
    rc1 = std::min(rc1, 0.85 * std::pow(r1, 1.0 / geo.n) / 1.69);
  }
  for (int tries = 0; tries < 64; ++tries) {
    P.q = on(1.30);
    cplx q1 = on(r1);
    cplx qc1 = on(rc1);
    P.d = P.q * q1;
    P.dc = P.q * qc1;
    P.u.assign(geo.n, cplx{});
    P.uc.assign(geo.m, cplx{});
    for (auto& w : P.u) w = on(1.0);
    for (auto& w : P.uc) w = on(1.0);
    if (P.generic() && P.expansion_regime()) return P;
  }
  throw std::runtime_error("sample_params: could not find a generic point");
}

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Stable hash of a parameter point, used to key the operator cache.
inline std::uint64_t params_hash(const AlgebraParams& P) {
  std::ostringstream os;
  os.precision(17);
  os << P.geo.m << ',' << P.geo.n << ';' << P.q << P.d << P.dc;
  for (auto& w : P.u) os << w;
  for (auto& w : P.uc) os << w;
  return fnv1a(os.str());
}

}  // namespace toroidal
