#pragma once

#include "params.hpp"
#include "state.hpp"

namespace toroidal {

// a^{i,j}_{-r} |v>, r > 0: plain creation.
inline FockState osc_create(const Geometry& g, int i, int j, int r, const FockState& v) {
  FockState w = v;
  w.insert_osc(osc_label(g.site(i, j), r));
  return w;
}

// a^{i,j}_r |v>, r > 0: contraction against each matching creation mode,
// [a_r, a_{-r}] = [r]^2 / r.
inline void osc_annihilate(const AlgebraParams& P, int site, int r, const FockState& v, cplx amp,
                           StateVec& out) {
  uint32_t lab = osc_label(site, r);
  int k = v.count_osc(lab);
  if (k == 0) return;
  cplx br = qnum(P.q, r);
  FockState w = v;
  w.remove_osc(lab);
  out[w] += amp * double(k) * br * br / double(r);
}

// sign of e^{\pm eps_{i,j}} on lattice part m:
// (-1)^{sum_{s<i, all t} m_{s,t} + sum_{t<j} m_{i,t}}, evaluated before the shift.
inline int lattice_sign(const Geometry& g, int i, int j, const FockState& v) {
  long s = 0;
  for (int a = 0; a < i; ++a)
    for (int t = 0; t < g.n; ++t) s += v.lat[g.site(a, t)];
  for (int t = 0; t < j; ++t) s += v.lat[g.site(i, t)];
  return (s & 1) ? -1 : 1;
}

// e^{sgn * eps_{i,j}} |v>
inline FockState lattice_shift(const Geometry& g, int i, int j, int sgn, const FockState& v,
                               int& sign_out) {
  sign_out = lattice_sign(g, i, j, v);
  FockState w = v;
  w.lat[g.site(i, j)] = int8_t(w.lat[g.site(i, j)] + sgn);
  return w;
}

}  // namespace toroidal
