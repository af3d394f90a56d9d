#include <catch2/catch_amalgamated.hpp>

#include "toroidal/vertex.hpp"

using namespace toroidal;

namespace {

StateVec apply_current(Current& c, int k, const StateVec& in) {
  StateVec out;
  for (const auto& [v, amp] : in) c.apply_mode(k, v, amp, out);
  return out;
}

}  // namespace

// level-one module decomposition data: each lattice sector s carries a
// highest weight vector |l+1,..,l+1,l,..,l| of degree
// nu(l+1)^2/2 + (m-nu)l^2/2, the diagonal charge acts by s, and the first
// twisted Cartan mode acts with eigenvalue u_s (1 - q2^-1) / (q - q^-1),
// u_s = (-1)^m d^{-s-m/2} q u.
TEST_CASE("sector highest weight vectors and twisted Cartan eigenvalues") {
  Geometry g{2, 1};
  AlgebraParams P = sample_params(g, 31);
  cplx u = P.u_at(0);
  cplx qq = P.q - 1.0 / P.q;

  Current F0(P, CurrentKind::F, 0), F1(P, CurrentKind::F, 1);

  for (int s = -3; s <= 3; ++s) {
    int l = (s - imod(s, 2)) / 2;
    int nu = imod(s, 2);
    FockState v{};
    v.lat[0] = std::int8_t(nu ? l + 1 : l);
    v.lat[1] = std::int8_t(l);

    // degree and diagonal charge of the sector vector
    CHECK(v.half_degree() == nu * (l + 1) * (l + 1) + (2 - nu) * l * l);
    CHECK(v.row_sum(g, 0) + v.row_sum(g, 1) == s);

    cplx us = ipow(P.d, -s - 1) * P.q * u;
    cplx lambda = us * (1.0 - 1.0 / P.q2()) / qq;

    StateVec base;
    base[v] = 1.0;
    for (int i = 0; i < 2; ++i) {
      // twisted Cartan mode as a nested q-commutator of lowering modes
      StateVec t1, t2;
      if (i == 1) {
        t1 = apply_current(F0, 0, apply_current(F1, 0, base));
        t2 = apply_current(F1, 0, apply_current(F0, 0, base));
      } else {
        t1 = apply_current(F1, 1, apply_current(F0, -1, base));
        t2 = apply_current(F0, -1, apply_current(F1, 1, base));
      }
      StateVec res;
      cplx pref = -1.0 / (-P.d);
      for (const auto& [w, a] : t1) res[w] += pref * a;
      for (const auto& [w, a] : t2) res[w] -= pref * P.q2() * a;
      double scale = std::max({max_abs(t1), max_abs(t2), std::abs(lambda)});

      cplx expect = (i == nu) ? lambda : cplx{};
      StateVec diff = res;
      diff[v] -= expect;
      CAPTURE(s, i, nu, scale);
      CHECK(max_abs(diff) / scale < 1e-8);
    }
  }
}
