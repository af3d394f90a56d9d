#pragma once

#include <unordered_map>
#include <utility>

#include "vertex.hpp"

namespace toroidal {

// Construction of the level-2 action on F_{m,2} out of two level-1 tensor
// slots, via the coproduct
//   D(E_i(z)) = E_i(C_2 z) (x) Kminus_i(z) + 1 (x) E_i(z),
//   D(F_i(z)) = F_i(z) (x) 1 + Kplus_i(z) (x) F_i(C_1 z),
//   D(H_{i,r}) = H_{i,r} (x) C_2^{min(r,0)} + C_1^{-max(r,0)} (x) H_{i,r},
// followed by the identification of slot-j bosons with d-check-twisted
// column-j bosons, a Koszul sign on lattice states, and a diagonal gauge.

// parameter set of tensor slot j (an n=1 module with weight u_j)
inline AlgebraParams slot_params(const AlgebraParams& P, int j) {
  AlgebraParams S = P;
  S.geo = Geometry{P.geo.m, 1};
  S.u = {P.u_at(j)};
  S.uc.assign(P.geo.m, 1.0);
  return S;
}

// sign relating the two orderings of lattice zero modes
inline int fuse_sign(const Geometry& g, const FockState& s) {
  int e = 0;
  for (int i = 0; i < g.m; ++i)
    for (int i2 = i + 1; i2 < g.m; ++i2) e += s.lat[g.site(i, 1)] * s.lat[g.site(i2, 0)];
  return ((e % 2) + 2) % 2 == 0 ? 1 : -1;
}

// diagonal gauge exponent: d^Z with Z = -sum_i (i + 1/2) m_{i,0} m_{i,1}
inline double fuse_gauge(const Geometry& g, const FockState& s) {
  double z = 0.0;
  for (int i = 0; i < g.m; ++i) z += -(i + 0.5) * s.lat[g.site(i, 0)] * s.lat[g.site(i, 1)];
  return z;
}

// slot pair -> total-space basis state; returns the scalar factor of the
// identification (d-check twist per slot-1 oscillator, Koszul sign)
inline cplx fuse_state(const AlgebraParams& P, const FockState& v0, const FockState& v1,
                       FockState& out) {
  const Geometry& g = P.geo;
  out = FockState{};
  cplx amp = 1.0;
  for (int i = 0; i < g.m; ++i) {
    out.lat[g.site(i, 0)] = v0.lat[i];
    out.lat[g.site(i, 1)] = v1.lat[i];
  }
  for (auto l : v0.osc) out.insert_osc(osc_label(g.site(label_site(l), 0), label_r(l)));
  for (auto l : v1.osc) {
    out.insert_osc(osc_label(g.site(label_site(l), 1), label_r(l)));
    amp *= ipow(P.dc, -label_r(l));
  }
  amp *= double(fuse_sign(g, out));
  return amp;
}

struct SlotPairHash {
  std::size_t operator()(const std::pair<FockState, FockState>& p) const {
    return FockStateHash{}(p.first) * 1000003u + FockStateHash{}(p.second);
  }
};

using SlotVec = std::unordered_map<std::pair<FockState, FockState>, cplx, SlotPairHash>;

// coproduct action of the level-2 generators on a slot pair
class CoproductLevel2 {
 public:
  explicit CoproductLevel2(const AlgebraParams& params)
      : P(params), S0(slot_params(params, 0)), S1(slot_params(params, 1)) {
    for (int i = 0; i < P.geo.m; ++i) {
      e0.emplace_back(S0, CurrentKind::E, i);
      e1.emplace_back(S1, CurrentKind::E, i);
      f0.emplace_back(S0, CurrentKind::F, i);
      f1.emplace_back(S1, CurrentKind::F, i);
    }
  }

  void e_mode(int i, int k, const FockState& v0, const FockState& v1, cplx amp, SlotVec& out) {
    StateVec o2;
    e1[i].apply_mode(k, v1, amp, o2);
    for (auto& [w1, a1] : o2) out[{v0, w1}] += a1;
    int smax = v0.half_degree() / 2 - k;
    for (int s = 0; s >= 0 && s <= smax; ++s) {
      StateVec o1;
      e0[i].apply_mode(k + s, v0, amp * ipow(P.q, -(k + s)), o1);
      if (o1.empty()) continue;
      StateVec kv;
      cartan_exp_apply(S1, false, i, false, s, v1, 1.0, kv);
      for (auto& [w0, a0] : o1)
        for (auto& [w1, a1] : kv) out[{w0, w1}] += a0 * a1;
    }
  }

  void f_mode(int i, int k, const FockState& v0, const FockState& v1, cplx amp, SlotVec& out) {
    StateVec o1;
    f0[i].apply_mode(k, v0, amp, o1);
    for (auto& [w0, a0] : o1) out[{w0, v1}] += a0;
    int smax = v0.half_degree() / 2;
    for (int s = 0; s <= smax; ++s) {
      StateVec kv;
      cartan_exp_apply(S0, false, i, true, s, v0, amp, kv);
      if (kv.empty()) continue;
      StateVec o2;
      f1[i].apply_mode(k - s, v1, ipow(P.q, -(k - s)), o2);
      for (auto& [w0, a0] : kv)
        for (auto& [w1, a1] : o2) out[{w0, w1}] += a0 * a1;
    }
  }

  void h_mode(int i, int r, const FockState& v0, const FockState& v1, cplx amp, SlotVec& out) {
    cplx c0 = ipow(P.q, r < 0 ? -r : 0);
    cplx c1 = ipow(P.q, r > 0 ? -r : 0);
    StateVec o1;
    cartan_apply(S0, false, i, r, v0, amp * c0, o1);
    for (auto& [w0, a0] : o1) out[{w0, v1}] += a0;
    StateVec o2;
    cartan_apply(S1, false, i, r, v1, amp * c1, o2);
    for (auto& [w1, a1] : o2) out[{v0, w1}] += a1;
  }

  // gauge-transformed, fused matrix column of the coproduct operator:
  //   out[w] = d^{Z(w)-Z(v)} phi_w / phi_v * (slot amplitude)
  template <typename Gen>
  void fused_column(Gen&& gen, const FockState& v0, const FockState& v1, StateVec& out) {
    FockState vf;
    cplx phiV = fuse_state(P, v0, v1, vf);
    SlotVec sv;
    gen(v0, v1, sv);
    double zv = fuse_gauge(P.geo, vf);
    for (auto& [pr, amp] : sv) {
      FockState wf;
      cplx phiW = fuse_state(P, pr.first, pr.second, wf);
      out[wf] += cpow(P.d, fuse_gauge(P.geo, wf) - zv) * phiW / phiV * amp;
    }
  }

  const AlgebraParams& params() const { return P; }

 private:
  AlgebraParams P, S0, S1;
  std::vector<Current> e0, e1, f0, f1;
};

}  // namespace toroidal
