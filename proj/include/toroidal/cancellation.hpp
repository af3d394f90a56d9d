#pragma once

#include "vertex.hpp"

namespace toroidal {

// One factor of a normal-ordered two-current product, evaluated at a
// numeric argument.  `zscale` rescales the argument and `boundary_diag`
// multiplies by a lattice-diagonal factor acting on the incoming state;
// together these express the wrap-around extensions of component indices
// (a component with column index -1 is the column n-1 component at a
// nome-shifted argument times a diagonal correction).
struct PairFactor {
  CurrentKind kind{};
  int i = 0, j = 0;
  cplx arg{1.0, 0.0};
  cplx diag{1.0, 0.0};
};

// component X^{i,j} with column j wrapped: j = -1 maps to the shifted
// component per the wrap-around rule (primal currents)
inline PairFactor primal_factor(const AlgebraParams& P, CurrentKind kind, int i, int j, cplx z,
                                const FockState& v) {
  PairFactor f;
  f.kind = kind;
  f.i = i;
  f.arg = z;
  if (j >= 0) {
    f.j = j;
    return f;
  }
  const Geometry& g = P.geo;
  f.j = g.n - 1;
  f.arg = z * (kind == CurrentKind::Edr || kind == CurrentKind::E ? P.pstar() : P.p());
  double e = -v.row_sum(g, imod(i - 1, g.m)) + v.row_sum(g, i);
  f.diag = ipow(P.dc, -g.n) * cpow(P.q, e);
  return f;
}

// component with row i wrapped (dual currents)
inline PairFactor dual_factor(const AlgebraParams& P, CurrentKind kind, int i, int j, cplx w,
                              const FockState& v) {
  PairFactor f;
  f.kind = kind;
  f.j = j;
  f.arg = w;
  if (i >= 0) {
    f.i = i;
    return f;
  }
  const Geometry& g = P.geo;
  f.i = g.m - 1;
  f.arg = w * (kind == CurrentKind::Ecdr || kind == CurrentKind::Ec ? P.pcstar() : P.pc());
  double e = v.col_sum(g, imod(j - 1, g.n)) - v.col_sum(g, j);
  f.diag = ipow(P.d, -g.m) * cpow(P.q, e);
  return f;
}

// :X(z) Y(w): v, truncated to created oscillator degree <= cre_cap.
// Both zero-mode diagonals are evaluated on the incoming lattice state,
// then both shift sets are applied (right factor first); the oscillator
// exponentials combine into a single normal-ordered exponential.
inline void normal_pair_apply(const AlgebraParams& P, const PairFactor& X, const PairFactor& Y,
                              const FockState& v, cplx amp, int cre_cap, StateVec& out) {
  ZeroModeResult dX = zero_mode_diag(P, zero_mode_kind(X.kind), X.i, X.j, v);
  ZeroModeResult dY = zero_mode_diag(P, zero_mode_kind(Y.kind), Y.i, Y.j, v);
  FockState s = v;
  int sgn = 1;
  for (auto sh : zero_mode_shifts(P.geo, zero_mode_kind(Y.kind), Y.i, Y.j)) {
    int s0 = 1;
    s = lattice_shift(P.geo, sh.i, sh.j, sh.sgn, s, s0);
    sgn *= s0;
  }
  for (auto sh : zero_mode_shifts(P.geo, zero_mode_kind(X.kind), X.i, X.j)) {
    int s0 = 1;
    s = lattice_shift(P.geo, sh.i, sh.j, sh.sgn, s, s0);
    sgn *= s0;
  }
  cplx zfac = amp * double(sgn) * X.diag * Y.diag * dX.coeff * dY.coeff *
              cpow(X.arg, dX.z_exp) * cpow(Y.arg, dY.z_exp);
  if (zfac == cplx{}) return;

  CoeffKind xek = exponent_kind(X.kind), yek = exponent_kind(Y.kind);
  cplx xz = X.arg, yz = Y.arg;
  int xi = X.i, xj = X.j, yi = Y.i, yj = Y.j;
  ExponentFamily fam = [&P, xek, yek, xi, xj, yi, yj, xz, yz](int r) {
    BosonExpression e = current_coefficient(P, xek, xi, xj, r);
    e *= cpow(xz, -r);
    BosonExpression e2 = current_coefficient(P, yek, yi, yj, r);
    e2 *= cpow(yz, -r);
    e += e2;
    return e;
  };
  std::vector<StateVec> ann = ann_exp_apply(P, fam, s);
  CreationTable ct;
  ct.extend(P.geo, fam, cre_cap);
  for (const auto& level : ann)
    for (const auto& [s1, a1] : level)
      for (int D = 0; D <= cre_cap; ++D)
        for (const auto& [labels, c] : ct.by_deg[D]) {
          FockState w = s1;
          for (auto l : labels) w.insert_osc(l);
          out[w] += zfac * a1 * c;
        }
}

// the three cancellation pairings; `which`: 0 = EE, 1 = FF, 2 = EF
struct CancelSpec {
  CurrentKind xk, yk;
  cplx weight;  // factor on the second term
  cplx point;   // w/z at the cancellation locus
};

inline CancelSpec cancel_spec(const AlgebraParams& P, int which, int i, int l, bool dressed) {
  CancelSpec c;
  switch (which) {
    case 0:
      c.xk = dressed ? CurrentKind::Edr : CurrentKind::E;
      c.yk = dressed ? CurrentKind::Ecdr : CurrentKind::Ec;
      c.weight = 1.0 / (P.q * P.q);
      c.point = ipow(P.q, -P.geo.m + P.geo.n) * ipow(P.q3(), -i) * ipow(P.qc3(), l);
      break;
    case 1:
      c.xk = dressed ? CurrentKind::Fdr : CurrentKind::F;
      c.yk = dressed ? CurrentKind::Fcdr : CurrentKind::Fc;
      c.weight = P.q * P.q;
      c.point = ipow(P.q1(), i) * ipow(P.qc1(), -l);
      break;
    default:
      c.xk = dressed ? CurrentKind::Edr : CurrentKind::E;
      c.yk = dressed ? CurrentKind::Fcdr : CurrentKind::Fc;
      c.weight = 1.0 / (P.q * P.q);
      c.point = ipow(P.q, P.geo.n) * ipow(P.q1(), i) * ipow(P.qc3(), l);
      break;
  }
  return c;
}

// residual of the two-term cancellation identity on state v at w = ratio*z;
// at ratio = spec.point (and in-range or dressed indices) this must vanish
inline double cancel_residual(const AlgebraParams& P, int which, int i, int l, bool dressed,
                              const FockState& v, cplx z, cplx ratio, int cre_cap) {
  CancelSpec c = cancel_spec(P, which, i, l, dressed);
  cplx w = ratio * z;
  // term 1: X^{i,l}(z) Y^{yi1,l}(w); term 2: X^{i,l-1}(z) Y^{yi2,l}(w)
  int yi1 = (which == 2) ? i - 1 : i;
  int yi2 = (which == 2) ? i : i - 1;
  StateVec t1, t2;
  normal_pair_apply(P, primal_factor(P, c.xk, i, l, z, v), dual_factor(P, c.yk, yi1, l, w, v), v,
                    1.0, cre_cap, t1);
  normal_pair_apply(P, primal_factor(P, c.xk, i, l - 1, z, v), dual_factor(P, c.yk, yi2, l, w, v),
                    v, c.weight, cre_cap, t2);
  StateVec sum = t1;
  for (const auto& [s, a] : t2) sum[s] += a;
  double scale = std::max({max_abs(t1), max_abs(t2), 1e-300});
  return max_abs(sum) / scale;
}

}  // namespace toroidal
