#pragma once

#include <array>
#include <functional>
#include <map>

#include "bosons.hpp"
#include "fock.hpp"

namespace toroidal {

// ---- zero mode factors --------------------------------------------------

// Result of applying a lattice zero mode operator: a single basis state,
// a scalar and the power of z carried by the (c z)^{...} factor.
struct ZeroModeResult {
  FockState state;
  cplx coeff{1.0, 0.0};
  int z_exp = 0;
};

enum class ZmKind { U, V, Uc, Vc };

// Diagonal part (scalar and z power) of the zero mode of component (i,j),
// evaluated on the lattice configuration of v.
inline ZeroModeResult zero_mode_diag(const AlgebraParams& P, ZmKind kind, int i, int j,
                                     const FockState& v) {
  const Geometry& g = P.geo;
  const int m = g.m, n = g.n;
  auto dd = [&](int a, int b) { return (int)v.lat[g.site(a, b)]; };
  auto erow = [&](int a) { return v.row_sum(g, imod(a, m)); };
  auto ecol = [&](int b) { return -v.col_sum(g, imod(b, n)); };
  ZeroModeResult out;
  out.state = v;
  switch (kind) {
    case ZmKind::U: {
      int a = (i >= 1) ? dd(i - 1, j) : dd(m - 1, j);
      int b = dd(i, j);
      out.z_exp = a - b + 1;
      double dexp, qpow;
      if (i >= 1) {
        dexp = (0.5 - i) * erow(i - 1) + (0.5 + i) * erow(i) + i * (a - b);
        qpow = 0;
        for (int t = j + 1; t < n; ++t) qpow -= dd(i - 1, t) - dd(i, t);
      } else {
        dexp = (0.5 - m) * erow(m - 1) + 0.5 * erow(0) + m * a;
        qpow = 0;
        for (int t = j + 1; t < n; ++t) qpow -= dd(m - 1, t) - dd(0, t);
      }
      out.coeff = ipow(P.q, (n - 1 - j) * out.z_exp) * cpow(P.d, dexp) * cpow(P.q, qpow);
      break;
    }
    case ZmKind::V: {
      int a = (i >= 1) ? dd(i - 1, j) : dd(m - 1, j);
      int b = dd(i, j);
      out.z_exp = -a + b + 1;
      double dexp, qpow;
      if (i >= 1) {
        dexp = -((0.5 - i) * erow(i - 1) + (0.5 + i) * erow(i) + i * (a - b));
        qpow = 0;
        for (int t = 0; t < j; ++t) qpow += dd(i - 1, t) - dd(i, t);
      } else {
        dexp = -((0.5 - m) * erow(m - 1) + 0.5 * erow(0) + m * a);
        qpow = 0;
        for (int t = 0; t < j; ++t) qpow += dd(m - 1, t) - dd(0, t);
      }
      out.coeff = ipow(P.q, j * out.z_exp) * cpow(P.d, dexp) * cpow(P.q, qpow);
      break;
    }
    case ZmKind::Uc: {
      int a = (j >= 1) ? dd(i, j - 1) : dd(i, n - 1);
      int b = dd(i, j);
      out.z_exp = -a + b + 1;
      double dexp, qpow;
      if (j >= 1) {
        dexp = (0.5 - j) * ecol(j - 1) + (0.5 + j) * ecol(j) - j * (a - b);
        qpow = 0;
        for (int s = i + 1; s < m; ++s) qpow += dd(s, j - 1) - dd(s, j);
      } else {
        dexp = (0.5 - n) * ecol(n - 1) + 0.5 * ecol(0) - n * a;
        qpow = 0;
        for (int s = i + 1; s < m; ++s) qpow += dd(s, n - 1) - dd(s, 0);
      }
      out.coeff = ipow(P.q, (m - 1 - i) * out.z_exp) * cpow(P.dc, dexp) * cpow(P.q, qpow);
      break;
    }
    case ZmKind::Vc: {
      int a = (j >= 1) ? dd(i, j - 1) : dd(i, n - 1);
      int b = dd(i, j);
      out.z_exp = a - b + 1;
      double dexp, qpow;
      if (j >= 1) {
        dexp = -((0.5 - j) * ecol(j - 1) + (0.5 + j) * ecol(j) - j * (a - b));
        qpow = 0;
        for (int s = 0; s < i; ++s) qpow -= dd(s, j - 1) - dd(s, j);
      } else {
        dexp = -((0.5 - n) * ecol(n - 1) + 0.5 * ecol(0)) + n * a;
        qpow = 0;
        for (int s = 0; s < i; ++s) qpow -= dd(s, n - 1) - dd(s, 0);
      }
      out.coeff = ipow(P.q, i * out.z_exp) * cpow(P.dc, dexp) * cpow(P.q, qpow);
      break;
    }
  }
  return out;
}

struct ZmShift {
  int i, j, sgn;
};

// The two lattice shifts of the zero mode, in application order
// (rightmost factor first).
inline std::array<ZmShift, 2> zero_mode_shifts(const Geometry& g, ZmKind kind, int i, int j) {
  const int m = g.m, n = g.n;
  switch (kind) {
    case ZmKind::U: return {{{imod(i - 1, m), j, +1}, {i, j, -1}}};
    case ZmKind::V: return {{{i, j, +1}, {imod(i - 1, m), j, -1}}};
    case ZmKind::Uc: return {{{i, imod(j - 1, n), -1}, {i, j, +1}}};
    case ZmKind::Vc: return {{{i, j, -1}, {i, imod(j - 1, n), +1}}};
  }
  return {{{0, 0, 0}, {0, 0, 0}}};
}

// Full zero mode: diagonal factors on the incoming state, then the shifts.
inline ZeroModeResult zero_mode_apply(const AlgebraParams& P, ZmKind kind, int i, int j,
                                      const FockState& v) {
  ZeroModeResult out = zero_mode_diag(P, kind, i, j, v);
  int s = 1;
  for (auto sh : zero_mode_shifts(P.geo, kind, i, j)) {
    int s0 = 1;
    out.state = lattice_shift(P.geo, sh.i, sh.j, sh.sgn, out.state, s0);
    s *= s0;
  }
  out.coeff *= double(s);
  return out;
}

// Transpose of the zero mode with respect to the graded pairing in which
// basis states are orthogonal: shifts are undone in reverse order and the
// diagonal factors are evaluated on the resulting (pre-shift) state.
inline ZeroModeResult zero_mode_transpose(const AlgebraParams& P, ZmKind kind, int i, int j,
                                          const FockState& w) {
  auto sh = zero_mode_shifts(P.geo, kind, i, j);
  ZeroModeResult out;
  out.state = w;
  int sgn = 1;
  for (int t = 1; t >= 0; --t) {
    int s0 = 1;
    out.state = lattice_shift(P.geo, sh[t].i, sh[t].j, -sh[t].sgn, out.state, s0);
    sgn *= s0;
  }
  ZeroModeResult d = zero_mode_diag(P, kind, i, j, out.state);
  out.coeff = d.coeff * double(sgn);
  out.z_exp = d.z_exp;
  return out;
}

// ---- exponential of boson families --------------------------------------

using ExponentFamily = std::function<BosonExpression(int r)>;

// exp(sum_{r>0} X_{-r} z^r) expanded by total created degree:
// per degree D a list of creation label multisets with coefficients.
struct CreationTable {
  std::vector<std::vector<std::pair<std::vector<std::uint32_t>, cplx>>> by_deg;

  void extend(const Geometry& g, const ExponentFamily& fam, int D) {
    if (by_deg.empty()) by_deg.push_back({{{}, cplx(1.0)}});
    using Mono = std::map<std::vector<std::uint32_t>, cplx>;
    while ((int)by_deg.size() <= D) {
      int d = (int)by_deg.size();
      Mono acc;
      // d E_d = sum_{r=1}^{d} r X_{-r} E_{d-r}
      for (int r = 1; r <= d; ++r) {
        BosonExpression X = fam(-r);
        for (auto& [labels, c] : by_deg[d - r])
          for (int site = 0; site < g.sites(); ++site) {
            if (X.coeff[site] == cplx{}) continue;
            std::vector<std::uint32_t> nl = labels;
            std::uint32_t l = osc_label(site, r);
            nl.insert(std::upper_bound(nl.begin(), nl.end(), l), l);
            acc[nl] += double(r) * X.coeff[site] * c;
          }
      }
      std::vector<std::pair<std::vector<std::uint32_t>, cplx>> row;
      row.reserve(acc.size());
      for (auto& [labels, c] : acc) row.emplace_back(labels, c / double(d));
      by_deg.push_back(std::move(row));
    }
  }
};

// exp(sum_{r>0} X_r z^{-r}) applied to a state: outcomes grouped by the
// total degree annihilated (= power of z^{-1} picked up).
inline std::vector<StateVec> ann_exp_apply(const AlgebraParams& P, const ExponentFamily& fam,
                                           const FockState& v) {
  int maxdeg = v.osc_half_degree() / 2;
  std::vector<StateVec> by_deg(maxdeg + 1);
  by_deg[0][v] = 1.0;
  for (int r = 1; r <= maxdeg; ++r) {
    BosonExpression X = fam(r);
    // multiply by exp(X_r): layers X_r^c / c!
    std::vector<StateVec> add(maxdeg + 1);
    for (int base = 0; base + r <= maxdeg; ++base) {
      // start from current content at degree `base`
      StateVec layer = by_deg[base];
      int c = 0;
      while (!layer.empty()) {
        ++c;
        int deg = base + c * r;
        if (deg > maxdeg) break;
        StateVec next;
        for (auto& [s, amp] : layer)
          for (int site = 0; site < P.geo.sites(); ++site) {
            if (X.coeff[site] == cplx{}) continue;
            osc_annihilate(P, site, r, s, amp * X.coeff[site] / double(c), next);
          }
        layer = std::move(next);
        for (auto& [s, amp] : layer) add[deg][s] += amp;
      }
    }
    for (int d = 0; d <= maxdeg; ++d)
      for (auto& [s, amp] : add[d]) by_deg[d][s] += amp;
  }
  return by_deg;
}

// ---- currents ------------------------------------------------------------

enum class CurrentKind { E, F, Ec, Fc, Edr, Fdr, Ecdr, Fcdr };

inline CoeffKind exponent_kind(CurrentKind k) {
  switch (k) {
    case CurrentKind::E: return CoeffKind::A;
    case CurrentKind::F: return CoeffKind::B;
    case CurrentKind::Ec: return CoeffKind::Ac;
    case CurrentKind::Fc: return CoeffKind::Bc;
    case CurrentKind::Edr: return CoeffKind::Adr;
    case CurrentKind::Fdr: return CoeffKind::Bdr;
    case CurrentKind::Ecdr: return CoeffKind::Acdr;
    case CurrentKind::Fcdr: return CoeffKind::Bcdr;
  }
  return CoeffKind::A;
}

inline ZmKind zero_mode_kind(CurrentKind k) {
  switch (k) {
    case CurrentKind::E:
    case CurrentKind::Edr: return ZmKind::U;
    case CurrentKind::F:
    case CurrentKind::Fdr: return ZmKind::V;
    case CurrentKind::Ec:
    case CurrentKind::Ecdr: return ZmKind::Uc;
    case CurrentKind::Fc:
    case CurrentKind::Fcdr: return ZmKind::Vc;
  }
  return ZmKind::U;
}

// One current component X^{i,j}(z) with cached creation data.
struct CurrentComponent {
  const AlgebraParams* P = nullptr;
  CurrentKind kind{};
  int i = 0, j = 0;
  CreationTable cre;

  CurrentComponent() = default;
  CurrentComponent(const AlgebraParams& params, CurrentKind k, int ii, int jj)
      : P(&params), kind(k), i(ii), j(jj) {}

  ExponentFamily family() const {
    const AlgebraParams& Q = *P;
    CoeffKind ck = exponent_kind(kind);
    int a = i, b = j;
    return [&Q, ck, a, b](int r) { return current_coefficient(Q, ck, a, b, r); };
  }

  // Apply the coefficient of z^{-k} to v; contributions whose oscillator
  // degree would exceed deg_cap (half degree units) are skipped when
  // deg_cap >= 0.
  void apply_mode(int k, const FockState& v, cplx amp, StateVec& out, int deg_cap = -1) {
    ZeroModeResult zm = zero_mode_apply(*P, zero_mode_kind(kind), i, j, v);
    if (zm.coeff == cplx{}) return;
    auto fam = family();
    std::vector<StateVec> ann = ann_exp_apply(*P, fam, zm.state);
    for (int zA = 0; zA < (int)ann.size(); ++zA) {
      if (ann[zA].empty()) continue;
      int D = zA - zm.z_exp - k;  // z^{D - zA + z_exp} -> z^{-k}
      if (D < 0) continue;
      if (deg_cap >= 0) {
        // final osc half degree: 2*(deg of ann result + D)
        // lattice part bounded separately by the caller's basis
        int base = zm.state.osc_half_degree() - 2 * zA;
        if (base + 2 * D > deg_cap) continue;
      }
      cre.extend(P->geo, fam, D);
      for (auto& [s, a0] : ann[zA])
        for (auto& [labels, c] : cre.by_deg[D]) {
          FockState w = s;
          for (auto l : labels) w.insert_osc(l);
          out[w] += amp * zm.coeff * a0 * c;
        }
    }
  }

  // Mode range with nonzero action on v: D >= 0 constrains k <= zA - z_exp,
  // and deg caps bound from below through the caller.
  int max_mode(const FockState& v) const {
    ZeroModeResult zm = zero_mode_apply(*P, zero_mode_kind(kind), i, j, v);
    return v.osc_half_degree() / 2 - zm.z_exp;
  }

  CreationTable creT;

  // Transpose of the mode-k coefficient: out picks up v with
  // <w| X_k |v> = out[v] * N(v) / N(w) for the pairing in which a_{-r}
  // transposes to a_r.  Creation and annihilation coefficient roles swap.
  void apply_mode_transpose(int k, const FockState& w, cplx amp, StateVec& out) {
    ZeroModeResult zm = zero_mode_transpose(*P, zero_mode_kind(kind), i, j, w);
    auto fam = family();
    ExponentFamily famS = [fam](int r) {
      BosonExpression e = fam(-r);
      e.r = r;
      return e;
    };
    std::vector<StateVec> ann = ann_exp_apply(*P, famS, zm.state);
    for (int zA = 0; zA < (int)ann.size(); ++zA) {
      if (ann[zA].empty()) continue;
      int D = zA + zm.z_exp + k;  // z^{zA - D + z_exp} -> z^{-k}
      if (D < 0) continue;
      creT.extend(P->geo, famS, D);
      for (auto& [s, a0] : ann[zA])
        for (auto& [labels, c] : creT.by_deg[D]) {
          FockState v = s;
          for (auto l : labels) v.insert_osc(l);
          out[v] += amp * zm.coeff * a0 * c;
        }
    }
  }
};

// Full current: sum over components with boundary u factors.
// Primal currents (E, F): X_i(z) = sum_j u_j^{-+delta_{i,0}} X^{i,j}(z).
// Dual currents (Ec, Fc): X_j(z) = sum_i uc_i^{-+delta_{j,0}} X^{i,j}(z).
struct Current {
  const AlgebraParams* P = nullptr;
  CurrentKind kind{};
  int index = 0;
  std::vector<CurrentComponent> comp;
  std::vector<cplx> weight;

  Current() = default;
  Current(const AlgebraParams& params, CurrentKind k, int idx)
      : P(&params), kind(k), index(idx) {
    const Geometry& g = params.geo;
    bool dual = (k == CurrentKind::Ec || k == CurrentKind::Fc || k == CurrentKind::Ecdr ||
                 k == CurrentKind::Fcdr);
    bool lowering = (k == CurrentKind::F || k == CurrentKind::Fdr || k == CurrentKind::Fc ||
                     k == CurrentKind::Fcdr);
    if (!dual) {
      for (int j = 0; j < g.n; ++j) {
        comp.emplace_back(params, k, index, j);
        cplx u = (index == 0) ? params.u_at(j) : cplx(1.0);
        weight.push_back(index == 0 ? (lowering ? u : 1.0 / u) : cplx(1.0));
      }
    } else {
      for (int i = 0; i < g.m; ++i) {
        comp.emplace_back(params, k, i, index);
        cplx u = (index == 0) ? params.uc_at(i) : cplx(1.0);
        weight.push_back(index == 0 ? (lowering ? u : 1.0 / u) : cplx(1.0));
      }
    }
  }

  void apply_mode(int k, const FockState& v, cplx amp, StateVec& out, int deg_cap = -1) {
    for (std::size_t c = 0; c < comp.size(); ++c)
      comp[c].apply_mode(k, v, amp * weight[c], out, deg_cap);
  }

  void apply_mode_transpose(int k, const FockState& w, cplx amp, StateVec& out) {
    for (std::size_t c = 0; c < comp.size(); ++c)
      comp[c].apply_mode_transpose(k, w, amp * weight[c], out);
  }

  StateVec apply_mode(int k, const StateVec& in, int deg_cap = -1) {
    StateVec out;
    for (auto& [v, amp] : in)
      if (amp != cplx{}) apply_mode(k, v, amp, out, deg_cap);
    return out;
  }
};

// ---- Cartan generators ----------------------------------------------------

// H_{i,r} (primal, r != 0) or Hc_{j,r} applied to a state.
inline void cartan_apply(const AlgebraParams& P, bool dual, int idx, int r, const FockState& v,
                         cplx amp, StateVec& out) {
  BosonExpression X = dual ? Hc_expr(P, idx, r) : H_expr(P, idx, r);
  if (r > 0) {
    for (int site = 0; site < P.geo.sites(); ++site) {
      if (X.coeff[site] == cplx{}) continue;
      osc_annihilate(P, site, r, v, amp * X.coeff[site], out);
    }
  } else {
    for (int site = 0; site < P.geo.sites(); ++site) {
      if (X.coeff[site] == cplx{}) continue;
      FockState w = v;
      w.insert_osc(osc_label(site, -r));
      out[w] += amp * X.coeff[site];
    }
  }
}

// Transpose of H_{i,r} under the contravariant pairing: same site
// coefficients, opposite oscillator mode.
inline void cartan_apply_transpose(const AlgebraParams& P, bool dual, int idx, int r,
                                   const FockState& w, cplx amp, StateVec& out) {
  BosonExpression X = dual ? Hc_expr(P, idx, r) : H_expr(P, idx, r);
  if (r > 0) {
    for (int site = 0; site < P.geo.sites(); ++site) {
      if (X.coeff[site] == cplx{}) continue;
      FockState s = w;
      s.insert_osc(osc_label(site, r));
      out[s] += amp * X.coeff[site];
    }
  } else {
    for (int site = 0; site < P.geo.sites(); ++site) {
      if (X.coeff[site] == cplx{}) continue;
      osc_annihilate(P, site, -r, w, amp * X.coeff[site], out);
    }
  }
}

// K^{+-}_i modes.  K^+_i(z) = K_i exp((q-q^-1) sum_{r>0} H_{i,r} z^{-r}),
// K^-_i(z) = K_i^{-1} exp(-(q-q^-1) sum_{r>0} H_{i,-r} z^{r}),
// K_i = q^{e_{i-1} - e_i} (primal) resp. q^{ec_{j-1} - ec_j} (dual).
// `mode` indexes z^{-mode} for plus and z^{+mode} for minus, mode >= 0.
inline void cartan_exp_apply(const AlgebraParams& P, bool dual, int idx, bool plus, int mode,
                             const FockState& v, cplx amp, StateVec& out) {
  const Geometry& g = P.geo;
  double kexp;
  if (!dual) {
    kexp = v.row_sum(g, imod(idx - 1, g.m)) - v.row_sum(g, idx);
  } else {
    kexp = -v.col_sum(g, imod(idx - 1, g.n)) + v.col_sum(g, idx);
  }
  cplx qq = P.q - 1.0 / P.q;
  cplx scale = cpow(P.q, plus ? kexp : -kexp);
  if (plus) {
    ExponentFamily fam = [&P, dual, idx, qq](int r) {
      BosonExpression e = dual ? Hc_expr(P, idx, r) : H_expr(P, idx, r);
      e *= qq;
      return e;
    };
    std::vector<StateVec> ann = ann_exp_apply(P, fam, v);
    if (mode < (int)ann.size())
      for (auto& [s, a0] : ann[mode]) out[s] += amp * scale * a0;
  } else {
    ExponentFamily fam = [&P, dual, idx, qq](int r) {
      BosonExpression e = dual ? Hc_expr(P, idx, r) : H_expr(P, idx, r);
      e *= -qq;
      return e;
    };
    CreationTable ct;
    ct.extend(g, fam, mode);
    for (auto& [labels, c] : ct.by_deg[mode]) {
      FockState w = v;
      for (auto l : labels) w.insert_osc(l);
      out[w] += amp * scale * c;
    }
  }
}

}  // namespace toroidal
