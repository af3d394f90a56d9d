#pragma once

#include <algorithm>

#include "cancellation.hpp"
#include "relations.hpp"

namespace toroidal {

// ---- numeric special functions -------------------------------------------

// (a; p)_infty
inline cplx pochhammer_inf(cplx a, cplx p) {
  cplx out{1.0, 0.0};
  cplx f = a;
  for (int k = 0; k < 512 && std::abs(f) > 1e-18; ++k) {
    out *= cplx{1.0, 0.0} - f;
    f *= p;
  }
  return out;
}

// (a; p) keeping the factors of p-order <= D
inline cplx pochhammer_trunc(cplx a, cplx p, int D) {
  cplx out{1.0, 0.0};
  cplx f = a;
  for (int k = 0; k <= D && std::abs(f) > 1e-18; ++k) {
    out *= cplx{1.0, 0.0} - f;
    f *= p;
  }
  return out;
}

// odd theta function (x; p)(p/x; p)(p; p)
inline cplx theta_fn(cplx x, cplx p) {
  return pochhammer_inf(x, p) * pochhammer_inf(p / x, p) * pochhammer_inf(p, p);
}

// theta truncated at p-order D
inline cplx theta_trunc(cplx x, cplx p, int D) {
  return pochhammer_trunc(x, p, D) * pochhammer_trunc(p / x, p, D - 1) *
         pochhammer_trunc(p, p, D - 1);
}

// rank-one lattice theta with one weight parameter, overall constants
// dropped: sum_c nome^{c(c+mu)} pw^c s^{2c+mu}
inline cplx theta_rank1(int mu, cplx s, cplx nome, cplx pw) {
  cplx acc{};
  for (int c = -24; c <= 24; ++c) {
    cplx t = cpow(nome, double(c) * double(c + mu)) * cpow(pw, double(c));
    if (t == cplx{}) continue;
    acc += t * cpow(s, double(2 * c + mu));
  }
  return acc;
}

// numeric value of a closed-form contraction at ratio t
inline cplx contraction_value(const ContractionFactors& cf, cplx t) {
  cplx v{1.0, 0.0};
  for (const auto& f : cf.fac) {
    cplx base = f.pshift ? pochhammer_inf(f.c * cpow(t, double(f.e)), cf.nome)
                         : cplx{1.0, 0.0} - f.c * cpow(t, double(f.e));
    v *= (f.sign > 0) ? base : cplx{1.0, 0.0} / base;
  }
  return v;
}

// contraction with every product tower cut at nome-order D; the order of a
// factor counts the nome power carried by its constant
inline cplx contraction_trunc(const ContractionFactors& cf, cplx t, int D) {
  cplx v{1.0, 0.0};
  for (const auto& f : cf.fac) {
    if (f.plead > D) continue;
    cplx arg = f.c * cpow(t, double(f.e));
    cplx base = f.pshift ? pochhammer_trunc(arg, cf.nome, D - f.plead)
                         : cplx{1.0, 0.0} - arg;
    v *= (f.sign > 0) ? base : cplx{1.0, 0.0} / base;
  }
  return v;
}

// ---- integrals of motion, two-current case ---------------------------------

// One of the four commuting families at M = 1: first or second kind, on the
// primal or the dual algebra.  pw is the weight parameter of the lattice
// theta in the kernel.
struct IomSide {
  bool dual = false;
  bool star = false;
  cplx pw{1.0, 0.0};
};

inline cplx iom_nome(const AlgebraParams& P, const IomSide& S) {
  return S.dual ? (S.star ? P.pcstar() : P.pc()) : (S.star ? P.pstar() : P.p());
}

// kernel weight parameter on a weight block: the base ratio of consecutive
// boundary weights times q to the difference of the block's lattice line
// sums; the exponent flips orientation between the two algebras and inverts
// for the second kind
inline cplx iom_pw(const AlgebraParams& P, const IomSide& S, const BlockKey& key) {
  cplx base = S.dual ? P.u_at(1) / P.u_at(0) : P.uc_at(1) / P.uc_at(0);
  int e = S.dual ? key.cols[0] - key.cols[1] : key.rows[1] - key.rows[0];
  if (S.star) e = -e;
  return base * cpow(P.q, double(e));
}

// kernel of the double integral, reduced to the ratio t of the two
// integration variables (exact value; used by the quasi-periodicity checks)
inline cplx iom_kernel(const AlgebraParams& P, const IomSide& S, int mu, cplx t) {
  cplx q1v = S.dual ? P.qc1() : P.q1();
  cplx q3v = S.dual ? P.qc3() : P.q3();
  cplx nome = iom_nome(P, S);
  cplx s = S.star ? cplx{1.0, 0.0} / t : t;
  return theta_rank1(mu, s, nome, S.pw) /
         (theta_fn(t / q3v, nome) * theta_fn(q1v / t, nome));
}

// Tower depth so that the dropped tail of this family's scalar prefactor is
// comparable to ref^{K+1}, where ref is the nome of the first-kind family on
// the same algebra (the second-kind nome has larger modulus).
inline int iom_tower_depth(const AlgebraParams& P, const IomSide& S, int K) {
  double ref = std::abs(S.dual ? P.pc() : P.p());
  double nm = std::abs(iom_nome(P, S));
  int d = int(std::ceil((K + 1) * std::log(ref) / std::log(nm) - 1e-9));
  return std::max(K, d) + 2;
}

// Matrix of the integral of motion on one weight block for mu = 0 and 1,
// with all infinite products in the scalar prefactor cut at nome-order
// iom_tower_depth(K).
//
// The two-current product is reduced to the ratio variable t; the overall
// scale integral is realised by the block projection.  The t-contour
// separates the two pole ladders of the integrand: a circle in the modulus
// gap below the smallest outside pole, plus small circles around the inside
// poles beyond it.  For the first kind the gap circle alone encloses the
// whole inside ladder; for the second kind the ladders interleave in
// modulus and a few explicit pole circles are needed.
inline std::array<Mat, 2> iom_matrix(const AlgebraParams& P, const Basis& bas,
                                     const IomSide& S, int K, int quad_gap = 192,
                                     int quad_pole = 64) {
  const Geometry& g = P.geo;
  const int rank = S.dual ? g.n : g.m;
  if (rank != 2) throw std::runtime_error("iom_matrix: two-current case only");
  const int nb = bas.size();

  cplx q1v = S.dual ? P.qc1() : P.q1();
  cplx q3v = S.dual ? P.qc3() : P.q3();
  cplx nome = iom_nome(P, S);
  const int depth = iom_tower_depth(P, S, K);
  CurrentKind ck = S.dual ? (S.star ? CurrentKind::Ecdr : CurrentKind::Fcdr)
                          : (S.star ? CurrentKind::Edr : CurrentKind::Fdr);
  TableId tid = S.dual ? (S.star ? TableId::EcEc_dr : TableId::FcFc_dr)
                       : (S.star ? TableId::EE_dr : TableId::FF_dr);
  // first kind: X_1(x1) X_0(x2); second kind: X_0(x2) X_1(x1), with x1 = 1
  // and x2 = t
  const int idxL = S.star ? 0 : 1;
  const int idxR = S.star ? 1 : 0;
  Current curL(P, ck, idxL), curR(P, ck, idxR);
  const int ncomp = int(curL.comp.size());
  ZmKind zk = zero_mode_kind(ck);

  int cre_cap = 0;
  for (const auto& v : bas.states) {
    int d = 0;
    for (auto l : v.osc) d += label_r(l);
    cre_cap = std::max(cre_cap, d);
  }

  // normal_pair_apply evaluates the left diagonal on the incoming state; the
  // operator product needs it on the right-shifted one
  struct ZmFix {
    cplx ratio;
    int dz;
  };
  std::vector<ZmFix> fix(std::size_t(ncomp) * ncomp * nb);
  std::vector<ContractionFactors> cfs(std::size_t(ncomp) * ncomp);
  std::vector<cplx> cwt(std::size_t(ncomp) * ncomp);
  for (int cl = 0; cl < ncomp; ++cl)
    for (int cr = 0; cr < ncomp; ++cr) {
      const CurrentComponent& L = curL.comp[cl];
      const CurrentComponent& R = curR.comp[cr];
      cfs[std::size_t(cl * ncomp + cr)] = table_closed_form(P, tid, L.i, L.j, R.i, R.j);
      cwt[std::size_t(cl * ncomp + cr)] = curL.weight[cl] * curR.weight[cr];
      for (int col = 0; col < nb; ++col) {
        const FockState& v = bas.states[col];
        ZeroModeResult dv = zero_mode_diag(P, zk, L.i, L.j, v);
        FockState sv = v;
        int s0 = 1;
        for (auto sh : zero_mode_shifts(g, zk, R.i, R.j))
          sv = lattice_shift(g, sh.i, sh.j, sh.sgn, sv, s0);
        ZeroModeResult ds = zero_mode_diag(P, zk, L.i, L.j, sv);
        fix[std::size_t((cl * ncomp + cr) * nb) + col] = {ds.coeff / dv.coeff,
                                                          ds.z_exp - dv.z_exp};
      }
    }

  // ---- contour circles -------------------------------------------------
  std::vector<cplx> inside, outside;
  for (int k = 0; k <= 10; ++k) {
    cplx pk = cpow(nome, double(k));
    if (S.star) {
      inside.push_back(pk / q1v);
      inside.push_back(pk / q3v);
    } else {
      inside.push_back(pk * q1v);
      inside.push_back(pk * q3v);
    }
    if (k <= 4) {
      if (S.star) {
        outside.push_back(q1v / pk);
        outside.push_back(q3v / pk);
      } else {
        outside.push_back(1.0 / (pk * q1v));
        outside.push_back(1.0 / (pk * q3v));
      }
    }
  }
  double min_out = 1e300;
  for (cplx c : outside) min_out = std::min(min_out, std::abs(c));
  double m_in = 0;
  for (cplx c : inside)
    if (std::abs(c) < 0.9 * min_out) m_in = std::max(m_in, std::abs(c));
  struct Circle {
    cplx t0;
    double rho;
    int Q;
  };
  std::vector<Circle> circles;
  circles.push_back({cplx{}, std::sqrt(m_in * min_out), quad_gap});
  std::vector<cplx> allp = inside;
  allp.insert(allp.end(), outside.begin(), outside.end());
  for (cplx t0 : inside) {
    if (std::abs(t0) <= circles[0].rho) continue;
    double dmin = 1e300;
    for (cplx c : allp) {
      double d = std::abs(t0 - c);
      if (d > 1e-9 * std::abs(t0)) dmin = std::min(dmin, d);
    }
    circles.push_back({t0, 0.25 * dmin, quad_pole});
  }

  std::array<Mat, 2> out{Mat(nb, nb), Mat(nb, nb)};
  const double PI2 = 2.0 * 3.14159265358979323846;
  for (const Circle& c : circles)
    for (int qn = 0; qn < c.Q; ++qn) {
      double ph = PI2 * qn / c.Q;
      cplx t = c.t0 + c.rho * cplx{std::cos(ph), std::sin(ph)};
      cplx wq = (t - c.t0) / (t * double(c.Q));
      cplx ratio = S.star ? cplx{1.0, 0.0} / t : t;
      cplx s = ratio;
      cplx den = theta_trunc(t / q3v, nome, depth) * theta_trunc(q1v / t, nome, depth);
      std::array<cplx, 2> kern;
      for (int mu = 0; mu < 2; ++mu)
        kern[std::size_t(mu)] = theta_rank1(mu, s, nome, S.pw) / den;
      for (int cl = 0; cl < ncomp; ++cl)
        for (int cr = 0; cr < ncomp; ++cr) {
          cplx sc = cwt[std::size_t(cl * ncomp + cr)] *
                    contraction_trunc(cfs[std::size_t(cl * ncomp + cr)], ratio, depth);
          const CurrentComponent& L = curL.comp[cl];
          const CurrentComponent& R = curR.comp[cr];
          cplx argL = S.star ? t : cplx{1.0, 0.0};
          cplx argR = S.star ? cplx{1.0, 0.0} : t;
          PairFactor X{ck, L.i, L.j, argL, {1.0, 0.0}};
          PairFactor Y{ck, R.i, R.j, argR, {1.0, 0.0}};
          for (int col = 0; col < nb; ++col) {
            const ZmFix& zf = fix[std::size_t((cl * ncomp + cr) * nb) + col];
            StateVec o;
            normal_pair_apply(P, X, Y, bas.states[col],
                              zf.ratio * cpow(argL, double(zf.dz)), cre_cap, o);
            for (const auto& [w, a] : o) {
              int row = bas.find(w);
              if (row < 0) continue;
              cplx v = wq * a * sc;
              out[0].at(row, col) += v * kern[0];
              out[1].at(row, col) += v * kern[1];
            }
          }
        }
    }
  return out;
}

// max |[A,B]| entry over the max entry of |A||B| + |B||A|
inline double comm_residual(const Mat& A, const Mat& B) {
  const int nb = A.nr;
  double num = 0, den = 0;
  for (int r = 0; r < nb; ++r)
    for (int c = 0; c < nb; ++c) {
      cplx s{};
      double sm = 0;
      for (int j = 0; j < nb; ++j) {
        s += A.at(r, j) * B.at(j, c) - B.at(r, j) * A.at(j, c);
        sm += std::abs(A.at(r, j)) * std::abs(B.at(j, c)) +
              std::abs(B.at(r, j)) * std::abs(A.at(j, c));
      }
      num = std::max(num, std::abs(s));
      den = std::max(den, sm);
    }
  return den > 0 ? num / den : 0.0;
}

}  // namespace toroidal
