#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "vertex.hpp"

namespace toroidal {

// ---- contravariant pairing ------------------------------------------------

// <v, v> for a basis state: product over oscillator labels of
// ([r]^2/r)^mult * mult!.  Distinct basis states are orthogonal.
inline cplx state_norm(const AlgebraParams& P, const FockState& v) {
  cplx out = 1.0;
  for (std::size_t i = 0; i < v.osc.size();) {
    std::size_t j = i;
    while (j < v.osc.size() && v.osc[j] == v.osc[i]) ++j;
    int c = static_cast<int>(j - i);
    int r = label_r(v.osc[i]);
    cplx unit = qnum(P.q, r) * qnum(P.q, r) / double(r);
    out *= ipow(unit, c);
    for (int t = 2; t <= c; ++t) out *= double(t);
    i = j;
  }
  return out;
}

// ---- graded weight blocks -------------------------------------------------

struct BlockKey {
  int h = 0;
  std::vector<int> rows, cols;
  bool operator<(const BlockKey& o) const {
    if (h != o.h) return h < o.h;
    if (rows != o.rows) return rows < o.rows;
    return cols < o.cols;
  }
  bool operator==(const BlockKey& o) const {
    return h == o.h && rows == o.rows && cols == o.cols;
  }
};

inline BlockKey block_key(const Geometry& g, const FockState& v) {
  BlockKey k;
  k.h = v.half_degree();
  k.rows.resize(g.m);
  k.cols.resize(g.n);
  for (int i = 0; i < g.m; ++i) k.rows[i] = v.row_sum(g, i);
  for (int j = 0; j < g.n; ++j) k.cols[j] = v.col_sum(g, j);
  return k;
}

// all block keys met by the states of a box truncation
inline std::set<BlockKey> box_blocks(const Geometry& g, int D_max, int L_max) {
  Basis b = make_basis_box(g, D_max, L_max);
  std::set<BlockKey> keys;
  for (const auto& v : b.states) keys.insert(block_key(g, v));
  return keys;
}

// ---- operator handles -----------------------------------------------------

struct OpRef {
  enum Tag { Cur, Car, Kp, Km };
  Tag tag = Cur;
  CurrentKind kind = CurrentKind::E;
  bool dual = false;  // for Car / Kp / Km
  int idx = 0;
  int mode = 0;
};

inline OpRef op_current(CurrentKind k, int idx, int mode) {
  OpRef o;
  o.tag = OpRef::Cur;
  o.kind = k;
  o.idx = idx;
  o.mode = mode;
  return o;
}
inline OpRef op_cartan(bool dual, int idx, int r) {
  OpRef o;
  o.tag = OpRef::Car;
  o.dual = dual;
  o.idx = idx;
  o.mode = r;
  return o;
}
inline OpRef op_kexp(bool dual, bool plus, int idx, int mode) {
  OpRef o;
  o.tag = plus ? OpRef::Kp : OpRef::Km;
  o.dual = dual;
  o.idx = idx;
  o.mode = mode;
  return o;
}

// block reached by applying op to a block
inline BlockKey op_target(const Geometry& g, const OpRef& op, BlockKey k) {
  int s = (op.tag == OpRef::Km) ? op.mode : -op.mode;
  k.h += 2 * s;
  if (op.tag == OpRef::Cur) {
    int i = op.idx;
    switch (op.kind) {
      case CurrentKind::E:
      case CurrentKind::Edr:
        k.rows[imod(i - 1, g.m)] += 1;
        k.rows[i] -= 1;
        break;
      case CurrentKind::F:
      case CurrentKind::Fdr:
        k.rows[imod(i - 1, g.m)] -= 1;
        k.rows[i] += 1;
        break;
      case CurrentKind::Ec:
      case CurrentKind::Ecdr:
        k.cols[i] += 1;
        k.cols[imod(i - 1, g.n)] -= 1;
        break;
      case CurrentKind::Fc:
      case CurrentKind::Fcdr:
        k.cols[i] -= 1;
        k.cols[imod(i - 1, g.n)] += 1;
        break;
    }
  }
  return k;
}

// ---- dense block matrices -------------------------------------------------

struct Mat {
  int nr = 0, nc = 0;
  std::vector<cplx> a;
  Mat() = default;
  Mat(int r, int c) : nr(r), nc(c), a(std::size_t(r) * c) {}
  cplx& at(int r, int c) { return a[std::size_t(r) * nc + c]; }
  cplx at(int r, int c) const { return a[std::size_t(r) * nc + c]; }
  void axpy(cplx s, const Mat& o) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += s * o.a[k];
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& z : a) m = std::max(m, std::abs(z));
    return m;
  }
};

// ---- block calculus context -----------------------------------------------

class BlockContext {
 public:
  explicit BlockContext(const AlgebraParams& params) : P(params) {}
  const AlgebraParams& P;

  const Basis& block(const BlockKey& k) {
    auto it = bases.find(k);
    if (it == bases.end())
      it = bases.emplace(k, make_basis_sector(P.geo, k.h, k.rows, k.cols)).first;
    return it->second;
  }

  const std::vector<cplx>& norms(const BlockKey& k) {
    auto it = norm_cache.find(k);
    if (it == norm_cache.end()) {
      const Basis& b = block(k);
      std::vector<cplx> ns(b.states.size());
      for (std::size_t i = 0; i < b.states.size(); ++i) ns[i] = state_norm(P, b.states[i]);
      it = norm_cache.emplace(k, std::move(ns)).first;
    }
    return it->second;
  }

  void apply(const OpRef& op, const FockState& v, cplx amp, StateVec& out) {
    switch (op.tag) {
      case OpRef::Cur:
        current(op.kind, op.idx).apply_mode(op.mode, v, amp, out);
        break;
      case OpRef::Car:
        cartan_apply(P, op.dual, op.idx, op.mode, v, amp, out);
        break;
      case OpRef::Kp:
        cartan_exp_apply(P, op.dual, op.idx, true, op.mode, v, amp, out);
        break;
      case OpRef::Km:
        cartan_exp_apply(P, op.dual, op.idx, false, op.mode, v, amp, out);
        break;
    }
  }

  void apply_T(const OpRef& op, const FockState& w, cplx amp, StateVec& out) {
    switch (op.tag) {
      case OpRef::Cur:
        current(op.kind, op.idx).apply_mode_transpose(op.mode, w, amp, out);
        break;
      case OpRef::Car:
        cartan_apply_transpose(P, op.dual, op.idx, op.mode, w, amp, out);
        break;
      default:
        throw std::logic_error("no transpose rule for this operator");
    }
  }

  // matrix of op from block dom_key into its target block, by direct
  // application; throws if any image component leaves the target block
  Mat forward_matrix(const OpRef& op, const BlockKey& dom_key) {
    const Basis& dom = block(dom_key);
    BlockKey cod_key = op_target(P.geo, op, dom_key);
    const Basis& cod = block(cod_key);
    Mat M(static_cast<int>(cod.states.size()), static_cast<int>(dom.states.size()));
    for (int c = 0; c < M.nc; ++c) {
      StateVec out;
      apply(op, dom.states[c], 1.0, out);
      for (const auto& [s, a0] : out) {
        if (std::abs(a0) == 0.0) continue;
        auto it = cod.index.find(s);
        if (it == cod.index.end()) throw std::logic_error("state escaped its weight block");
        M.at(it->second, c) += a0;
      }
    }
    return M;
  }

  // <w| A B |v> over blocks: pair the forward image of B against the
  // transpose image of A through the full intermediate level,
  //   M[w,v] = sum_mid (A^T w)_mid (B v)_mid N(mid) / N(w).
  // `mag` accumulates the same sum with absolute values; its maximum is
  // the natural scale against which cancellation in M is measured.
  struct Prod {
    Mat m;
    double mag = 0.0;
  };
  const Prod& product(const OpRef& A, const OpRef& B, const BlockKey& dom_key) {
    ProdKey pk{op_key(A), op_key(B), dom_key};
    auto it = prod_cache.find(pk);
    if (it != prod_cache.end()) return it->second;

    const Basis& dom = block(dom_key);
    const FwdTab& ft = fwd_table(B, dom_key);
    BlockKey fin_key = op_target(P.geo, A, ft.mid_key);
    const Basis& fin = block(fin_key);
    const auto& Nw = norms(fin_key);
    Prod pr;
    pr.m = Mat(static_cast<int>(fin.states.size()), static_cast<int>(dom.states.size()));
    Mat& M = pr.m;
    if (M.nr > 0 && M.nc > 0) {
      std::vector<double> mag(M.a.size(), 0.0);
      const auto& bt = bwd_table(A, fin_key);
      for (int r = 0; r < M.nr; ++r) {
        for (const auto& [s, aT] : bt[r]) {
          auto mit = ft.mid.find(s);
          if (mit == ft.mid.end()) continue;
          cplx f = aT * mit->second.first / Nw[r];
          for (const auto& [c, a0] : mit->second.second) {
            M.at(r, c) += f * a0;
            mag[std::size_t(r) * M.nc + c] += std::abs(f) * std::abs(a0);
          }
        }
      }
      for (double v : mag) pr.mag = std::max(pr.mag, v);
    }
    return prod_cache.emplace(std::move(pk), std::move(pr)).first->second;
  }

  // drop per-block product data (call between domain blocks to bound memory)
  void clear_products() {
    prod_cache.clear();
    fwd_cache.clear();
    bwd_cache.clear();
  }

 private:
  using OpKey = std::tuple<int, int, int, int, int>;
  static OpKey op_key(const OpRef& o) {
    return {int(o.tag), int(o.kind), int(o.dual), o.idx, o.mode};
  }

  struct FwdTab {
    BlockKey mid_key;
    // intermediate state -> (its norm, list of (domain column, amplitude))
    std::unordered_map<FockState, std::pair<cplx, std::vector<std::pair<int, cplx>>>,
                       FockStateHash>
        mid;
  };

  Current& current(CurrentKind kind, int idx) {
    auto key = std::make_pair(int(kind), idx);
    auto it = currents.find(key);
    if (it == currents.end()) it = currents.emplace(key, Current(P, kind, idx)).first;
    return it->second;
  }

  const FwdTab& fwd_table(const OpRef& op, const BlockKey& dom_key) {
    auto key = std::make_pair(op_key(op), dom_key);
    auto it = fwd_cache.find(key);
    if (it != fwd_cache.end()) return it->second;
    FwdTab tab;
    tab.mid_key = op_target(P.geo, op, dom_key);
    const Basis& dom = block(dom_key);
    for (int c = 0; c < static_cast<int>(dom.states.size()); ++c) {
      StateVec out;
      apply(op, dom.states[c], 1.0, out);
      for (const auto& [s, a0] : out) {
        if (std::abs(a0) == 0.0) continue;
        auto& cell = tab.mid[s];
        if (cell.second.empty()) cell.first = state_norm(P, s);
        cell.second.emplace_back(c, a0);
      }
    }
    return fwd_cache.emplace(std::move(key), std::move(tab)).first->second;
  }

  const std::vector<StateVec>& bwd_table(const OpRef& op, const BlockKey& fin_key) {
    auto key = std::make_pair(op_key(op), fin_key);
    auto it = bwd_cache.find(key);
    if (it != bwd_cache.end()) return it->second;
    const Basis& fin = block(fin_key);
    std::vector<StateVec> rows(fin.states.size());
    for (std::size_t r = 0; r < fin.states.size(); ++r)
      apply_T(op, fin.states[r], 1.0, rows[r]);
    return bwd_cache.emplace(std::move(key), std::move(rows)).first->second;
  }

  using ProdKey = std::tuple<OpKey, OpKey, BlockKey>;

  std::map<BlockKey, Basis> bases;
  std::map<BlockKey, std::vector<cplx>> norm_cache;
  std::map<std::pair<int, int>, Current> currents;
  std::map<std::pair<OpKey, BlockKey>, FwdTab> fwd_cache;
  std::map<std::pair<OpKey, BlockKey>, std::vector<StateVec>> bwd_cache;
  std::map<ProdKey, Prod> prod_cache;
};

// ---- structure functions --------------------------------------------------

// g_{i,j}(x, y) as a list of (coefficient, power of x, power of y)
inline std::vector<std::tuple<cplx, int, int>> g_poly(const AlgebraParams& P, bool dual, int i,
                                                      int j) {
  int m = dual ? P.geo.n : P.geo.m;
  cplx t1 = dual ? P.qc1() : P.q1();
  cplx t2 = P.q2();
  cplx t3 = dual ? P.qc3() : P.q3();
  auto lin = [](cplx c) {
    return std::vector<std::tuple<cplx, int, int>>{{1.0, 1, 0}, {-c, 0, 1}};
  };
  if (m >= 3) {
    if (delta_mod(i, j - 1, m)) return lin(t1);
    if (delta_mod(i, j, m)) return lin(t2);
    if (delta_mod(i, j + 1, m)) return lin(t3);
    return lin(1.0);
  }
  if (m == 2) {
    if (delta_mod(i, j, m)) return lin(t2);
    return {{1.0, 2, 0}, {-(t1 + t3), 1, 1}, {t1 * t3, 0, 2}};
  }
  return {{1.0, 3, 0},
          {-(t1 + t2 + t3), 2, 1},
          {t1 * t2 + t1 * t3 + t2 * t3, 1, 2},
          {-(t1 * t2 * t3), 0, 3}};
}

inline cplx d_factor(const AlgebraParams& P, bool dual, int i, int j) {
  int m = dual ? P.geo.n : P.geo.m;
  cplx dd = dual ? P.dc : P.d;
  if (m >= 3) {
    if (delta_mod(i, j - 1, m)) return 1.0 / dd;
    if (delta_mod(i, j + 1, m)) return dd;
    return 1.0;
  }
  if (m == 2 && !delta_mod(i, j, m)) return -1.0;
  return 1.0;
}

// central element of the algebra acting on the lattice Fock module
inline cplx central(const AlgebraParams& P, bool dual) {
  return ipow(P.q, dual ? P.geo.m : P.geo.n);
}

// ---- relation residuals ---------------------------------------------------

struct ResidualStats {
  double max_rel = 0.0;
  long checked = 0;
  long skipped = 0;
  void add(double r) {
    max_rel = std::max(max_rel, r);
    ++checked;
  }
  void merge(const ResidualStats& o) {
    max_rel = std::max(max_rel, o.max_rel);
    checked += o.checked;
    skipped += o.skipped;
  }
};

namespace detail {

struct TermSum {
  Mat lhs;
  double scale = 0.0;
  void add(BlockContext& ctx, cplx c, const OpRef& A, const OpRef& B, const BlockKey& dom) {
    const BlockContext::Prod& pr = ctx.product(A, B, dom);
    if (lhs.a.empty()) lhs = Mat(pr.m.nr, pr.m.nc);
    lhs.axpy(c, pr.m);
    scale = std::max(scale, std::abs(c) * pr.mag);
  }
  void finish(ResidualStats& st) const {
    if (scale > 0.0 && !lhs.a.empty())
      st.add(lhs.max_abs() / scale);
    else
      st.add(0.0);
  }
};

}  // namespace detail

// d_{i,j} g_{i,j}(z,w) E_i(z) E_j(w) + g_{j,i}(w,z) E_j(w) E_i(z) = 0,
// coefficient of z^{-k} w^{-l}
inline void relation_EE(BlockContext& ctx, bool dual, int i, int j, const BlockKey& dom, int W,
                        const std::set<BlockKey>& family, ResidualStats& st) {
  const Geometry& g = ctx.P.geo;
  CurrentKind ck = dual ? CurrentKind::Ec : CurrentKind::E;
  auto gij = g_poly(ctx.P, dual, i, j);
  auto gji = g_poly(ctx.P, dual, j, i);
  cplx dij = d_factor(ctx.P, dual, i, j);
  int deg = std::get<1>(gij[0]) + std::get<2>(gij[0]);
  for (int k = -W; k <= W; ++k)
    for (int l = -W; l <= W; ++l) {
      BlockKey fin =
          op_target(g, op_current(ck, i, k + deg), op_target(g, op_current(ck, j, l), dom));
      if (!family.count(fin)) {
        ++st.skipped;
        continue;
      }
      detail::TermSum ts;
      for (const auto& [c, az, aw] : gij)
        ts.add(ctx, dij * c, op_current(ck, i, k + az), op_current(ck, j, l + aw), dom);
      for (const auto& [c, aw, az] : gji)
        ts.add(ctx, c, op_current(ck, j, l + aw), op_current(ck, i, k + az), dom);
      ts.finish(st);
    }
}

// d_{j,i} g_{j,i}(w,z) F_i(z) F_j(w) + g_{i,j}(z,w) F_j(w) F_i(z) = 0
inline void relation_FF(BlockContext& ctx, bool dual, int i, int j, const BlockKey& dom, int W,
                        const std::set<BlockKey>& family, ResidualStats& st) {
  const Geometry& g = ctx.P.geo;
  CurrentKind ck = dual ? CurrentKind::Fc : CurrentKind::F;
  auto gij = g_poly(ctx.P, dual, i, j);
  auto gji = g_poly(ctx.P, dual, j, i);
  cplx dji = d_factor(ctx.P, dual, j, i);
  int deg = std::get<1>(gij[0]) + std::get<2>(gij[0]);
  for (int k = -W; k <= W; ++k)
    for (int l = -W; l <= W; ++l) {
      BlockKey fin =
          op_target(g, op_current(ck, i, k + deg), op_target(g, op_current(ck, j, l), dom));
      if (!family.count(fin)) {
        ++st.skipped;
        continue;
      }
      detail::TermSum ts;
      for (const auto& [c, a1, a2] : gji)
        ts.add(ctx, dji * c, op_current(ck, i, k + a2), op_current(ck, j, l + a1), dom);
      for (const auto& [c, a1, a2] : gij)
        ts.add(ctx, c, op_current(ck, j, l + a2), op_current(ck, i, k + a1), dom);
      ts.finish(st);
    }
}

// [E_{i,k}, F_{j,l}] = delta_{ij}/(q - q^-1) (C^k K^+_{i,k+l} [k+l>=0]
//                                             - C^l K^-_{i,-(k+l)} [k+l<=0])
inline void relation_EF(BlockContext& ctx, bool dual, int i, int j, const BlockKey& dom, int W,
                        const std::set<BlockKey>& family, ResidualStats& st) {
  const Geometry& g = ctx.P.geo;
  CurrentKind ek = dual ? CurrentKind::Ec : CurrentKind::E;
  CurrentKind fk = dual ? CurrentKind::Fc : CurrentKind::F;
  cplx C = central(ctx.P, dual);
  cplx qq = ctx.P.q - 1.0 / ctx.P.q;
  for (int k = -W; k <= W; ++k)
    for (int l = -W; l <= W; ++l) {
      BlockKey fin = op_target(g, op_current(ek, i, k), op_target(g, op_current(fk, j, l), dom));
      if (!family.count(fin)) {
        ++st.skipped;
        continue;
      }
      const auto& EF = ctx.product(op_current(ek, i, k), op_current(fk, j, l), dom);
      const auto& FE = ctx.product(op_current(fk, j, l), op_current(ek, i, k), dom);
      Mat R(EF.m.nr, EF.m.nc);
      R.axpy(1.0, EF.m);
      R.axpy(-1.0, FE.m);
      double scale = std::max(EF.mag, FE.mag);
      if (i == j) {
        int s = k + l;
        if (s >= 0) {
          Mat Kp = ctx.forward_matrix(op_kexp(dual, true, i, s), dom);
          R.axpy(-ipow(C, k) / qq, Kp);
          scale = std::max(scale, std::abs(ipow(C, k) / qq) * Kp.max_abs());
        }
        if (s <= 0) {
          Mat Km = ctx.forward_matrix(op_kexp(dual, false, i, -s), dom);
          R.axpy(ipow(C, l) / qq, Km);
          scale = std::max(scale, std::abs(ipow(C, l) / qq) * Km.max_abs());
        }
      }
      if (scale > 0.0)
        st.add(R.max_abs() / scale);
      else
        st.add(0.0);
    }
}

// [H_{i,r}, E_{j,k}] = a_{i,j}(r) C^{-(r+|r|)/2} E_{j,k+r}
// [H_{i,r}, F_{j,k}] = -a_{i,j}(r) C^{-(r-|r|)/2} F_{j,k+r}
inline void relation_HX(BlockContext& ctx, bool dual, bool toF, int i, int j, const BlockKey& dom,
                        int W, int Rmax, const std::set<BlockKey>& family, ResidualStats& st) {
  const Geometry& g = ctx.P.geo;
  CurrentKind ck = dual ? (toF ? CurrentKind::Fc : CurrentKind::Ec)
                        : (toF ? CurrentKind::F : CurrentKind::E);
  cplx C = central(ctx.P, dual);
  for (int r = -Rmax; r <= Rmax; ++r) {
    if (r == 0) continue;
    cplx av = dual ? ac_pair(ctx.P, i, j, r) : a_pair(ctx.P, i, j, r);
    cplx coef = toF ? -av * ipow(C, -(r - std::abs(r)) / 2) : av * ipow(C, -(r + std::abs(r)) / 2);
    for (int k = -W; k <= W; ++k) {
      BlockKey fin = op_target(g, op_current(ck, j, k + r), dom);
      if (!family.count(fin)) {
        ++st.skipped;
        continue;
      }
      const auto& HX = ctx.product(op_cartan(dual, i, r), op_current(ck, j, k), dom);
      const auto& XH = ctx.product(op_current(ck, j, k), op_cartan(dual, i, r), dom);
      Mat RHS = ctx.forward_matrix(op_current(ck, j, k + r), dom);
      Mat R(HX.m.nr, HX.m.nc);
      R.axpy(1.0, HX.m);
      R.axpy(-1.0, XH.m);
      R.axpy(-coef, RHS);
      double scale = std::max({HX.mag, XH.mag, std::abs(coef) * RHS.max_abs()});
      if (scale > 0.0)
        st.add(R.max_abs() / scale);
      else
        st.add(0.0);
    }
  }
}

// [H_{i,r}, H_{j,s}] = delta_{r+s,0} a_{i,j}(r) (C^r - C^{-r}) / (q - q^-1)
inline void relation_HH(BlockContext& ctx, bool dual, int i, int j, const BlockKey& dom, int Rmax,
                        const std::set<BlockKey>& family, ResidualStats& st) {
  const Geometry& g = ctx.P.geo;
  cplx C = central(ctx.P, dual);
  cplx qq = ctx.P.q - 1.0 / ctx.P.q;
  for (int r = -Rmax; r <= Rmax; ++r) {
    if (r == 0) continue;
    for (int s = -Rmax; s <= Rmax; ++s) {
      if (s == 0) continue;
      BlockKey fin = op_target(g, op_cartan(dual, i, r), op_target(g, op_cartan(dual, j, s), dom));
      if (!family.count(fin)) {
        ++st.skipped;
        continue;
      }
      const auto& HH = ctx.product(op_cartan(dual, i, r), op_cartan(dual, j, s), dom);
      const auto& HHr = ctx.product(op_cartan(dual, j, s), op_cartan(dual, i, r), dom);
      Mat R(HH.m.nr, HH.m.nc);
      R.axpy(1.0, HH.m);
      R.axpy(-1.0, HHr.m);
      double scale = std::max(HH.mag, HHr.mag);
      if (r + s == 0) {
        cplx av = dual ? ac_pair(ctx.P, i, j, r) : a_pair(ctx.P, i, j, r);
        cplx rhs = av * (ipow(C, r) - ipow(C, -r)) / qq;
        for (int t = 0; t < std::min(R.nr, R.nc); ++t) R.at(t, t) -= rhs;
        scale = std::max(scale, std::abs(rhs));
      }
      if (scale > 0.0)
        st.add(R.max_abs() / scale);
      else
        st.add(0.0);
    }
  }
}

// ---- full sweep over a block family ----------------------------------------

struct RelationReport {
  ResidualStats ee, ff, ef, he, hf, hh;
  double max_rel() const {
    return std::max({ee.max_rel, ff.max_rel, ef.max_rel, he.max_rel, hf.max_rel, hh.max_rel});
  }
  long checked() const {
    return ee.checked + ff.checked + ef.checked + he.checked + hf.checked + hh.checked;
  }
};

// all defining relations of both algebras, every index pair, every domain
// block of the family whose half-degree is <= h_cap (h_cap < 0: no cap)
inline RelationReport check_defining_relations(BlockContext& ctx, const std::set<BlockKey>& family,
                                               int W, int Rmax, int h_cap = -1) {
  const Geometry& g = ctx.P.geo;
  RelationReport rep;
  for (const auto& dom : family) {
    if (h_cap >= 0 && dom.h > h_cap) continue;
    if (ctx.block(dom).states.empty()) continue;
    for (int dual = 0; dual < 2; ++dual) {
      int M = dual ? g.n : g.m;
      for (int i = 0; i < M; ++i)
        for (int j = 0; j < M; ++j) {
          relation_EE(ctx, dual, i, j, dom, W, family, rep.ee);
          relation_FF(ctx, dual, i, j, dom, W, family, rep.ff);
          relation_EF(ctx, dual, i, j, dom, W, family, rep.ef);
          relation_HX(ctx, dual, false, i, j, dom, W, Rmax, family, rep.he);
          relation_HX(ctx, dual, true, i, j, dom, W, Rmax, family, rep.hf);
          relation_HH(ctx, dual, i, j, dom, Rmax, family, rep.hh);
        }
    }
    ctx.clear_products();
  }
  return rep;
}

}  // namespace toroidal
