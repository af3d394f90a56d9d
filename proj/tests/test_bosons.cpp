#include <catch2/catch_amalgamated.hpp>

#include "toroidal/bosons.hpp"

using namespace toroidal;

namespace {

const std::vector<Geometry> kShapes = {{2, 2}, {2, 3}, {3, 2}};

double coeff_diff(const BosonExpression& a, const BosonExpression& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.coeff.size(); ++k)
    m = std::max(m, std::abs(a.coeff[k] - b.coeff[k]));
  return m;
}

}  // namespace

TEST_CASE("auxiliary boson commutators") {
  for (auto g : kShapes) {
    AlgebraParams P = sample_params(g, 7);
    cplx q = P.q, q1 = P.q1(), q2 = P.q2(), q3 = P.q3();
    cplx qc1 = P.qc1(), qc3 = P.qc3();
    for (int r = 1; r <= 6; ++r) {
      cplx pref = qnum(q, r) * qnum(q, r) / double(r) * ipow(q, r);
      for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.n; ++j)
          for (int k = 0; k < g.m; ++k)
            for (int l = 0; l < g.n; ++l) {
              auto dm = [&](int a, int b) { return delta_mod(a, b, g.m) ? 1.0 : 0.0; };
              auto dn = [&](int a, int b) { return delta_mod(a, b, g.n) ? 1.0 : 0.0; };
              cplx bb1 = pair_commutator(P, b_boson(P, i, j, r), b_boson(P, k, l, -r));
              cplx want1 = pref *
                           ((1.0 + ipow(q2, -r)) * dm(i, k) - ipow(q1, r) * dm(i + 1, k) -
                            ipow(q3, r) * dm(i - 1, k)) *
                           dn(j, l);
              REQUIRE(std::abs(bb1 - want1) <= 1e-10 * (1.0 + std::abs(want1)));

              cplx bb2 = pair_commutator(P, bc_boson(P, i, j, r), bc_boson(P, k, l, -r));
              cplx want2 = pref * dm(i, k) *
                           ((1.0 + ipow(q2, -r)) * dn(j, l) - ipow(qc1, r) * dn(j, l - 1) -
                            ipow(qc3, r) * dn(j, l + 1));
              REQUIRE(std::abs(bb2 - want2) <= 1e-10 * (1.0 + std::abs(want2)));

              cplx bb3 = pair_commutator(P, b_boson(P, i, j, r), bc_boson(P, k, l, -r));
              cplx want3 = -pref * (ipow(q3, r) * dm(i - 1, k) - dm(i, k)) *
                           (ipow(qc1, r) * dn(j, l - 1) - dn(j, l));
              REQUIRE(std::abs(bb3 - want3) <= 1e-10 * (1.0 + std::abs(want3)));

              cplx bb4 = pair_commutator(P, bc_boson(P, k, l, r), b_boson(P, i, j, -r));
              cplx want4 = -pref * (ipow(q1, r) * dm(i - 1, k) - dm(i, k)) *
                           (ipow(qc3, r) * dn(j, l - 1) - dn(j, l));
              REQUIRE(std::abs(bb4 - want4) <= 1e-10 * (1.0 + std::abs(want4)));
            }
    }
  }
}

TEST_CASE("linear relations between the two boson families") {
  for (auto g : kShapes) {
    AlgebraParams P = sample_params(g, 11);
    for (int r = 1; r <= 6; ++r)
      for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.n; ++j) {
          BosonExpression lhs = b_boson(P, i, j, r);
          lhs += bc_boson(P, i, j, r);
          BosonExpression rhs = b_boson(P, i, j - 1, r);
          rhs *= ipow(P.qc3(), r);
          BosonExpression t = bc_boson(P, i - 1, j, r);
          t *= ipow(P.q3(), r);
          rhs += t;
          REQUIRE(coeff_diff(lhs, rhs) < 1e-10 * std::max(1.0, lhs.max_abs()));

          BosonExpression lhs2 = b_boson(P, i, j, -r);
          lhs2 += bc_boson(P, i, j, -r);
          BosonExpression rhs2 = b_boson(P, i, j - 1, -r);
          rhs2 *= ipow(P.qc1(), r);
          BosonExpression t2 = bc_boson(P, i - 1, j, -r);
          t2 *= ipow(P.q1(), r);
          rhs2 += t2;
          REQUIRE(coeff_diff(lhs2, rhs2) < 1e-10 * std::max(1.0, lhs2.max_abs()));
        }
  }
}

TEST_CASE("cross family contractions with Cartan currents vanish") {
  for (auto g : kShapes) {
    AlgebraParams P = sample_params(g, 13);
    for (int r = 1; r <= 6; ++r) {
      // rows 1..m-1 of the first family, columns 1..n-1 of the second
      for (int i = 1; i < g.m; ++i)
        for (int t = 0; t < g.n; ++t)
          for (int tp = 0; tp < g.n; ++tp) {
            REQUIRE(std::abs(pair_commutator(P, b_boson(P, i, t, r), Hc_expr(P, tp, -r))) <
                    1e-10);
            REQUIRE(std::abs(pair_commutator(P, Hc_expr(P, tp, r), b_boson(P, i, t, -r))) <
                    1e-10);
          }
      for (int s = 0; s < g.m; ++s)
        for (int sp = 0; sp < g.m; ++sp)
          for (int l = 1; l < g.n; ++l) {
            REQUIRE(std::abs(pair_commutator(P, H_expr(P, s, r), bc_boson(P, sp, l, -r))) <
                    1e-10);
            REQUIRE(std::abs(pair_commutator(P, bc_boson(P, sp, l, r), H_expr(P, s, -r))) <
                    1e-10);
          }
      // dual statement: H against checked bosons in columns 1..n-1 only;
      // the column-0 commutator is generically nonzero
      bool some_nonzero = false;
      for (int s = 0; s < g.m; ++s)
        for (int sp = 0; sp < g.m; ++sp)
          some_nonzero |=
              std::abs(pair_commutator(P, H_expr(P, s, r), bc_boson(P, sp, 0, -r))) > 1e-6;
      REQUIRE(some_nonzero);
    }
  }
}

TEST_CASE("dressed coefficients differ from plain ones by Cartan multiples") {
  for (auto g : kShapes) {
    AlgebraParams P = sample_params(g, 17);
    cplx qq = P.q - 1.0 / P.q;
    for (int r = 1; r <= 6; ++r)
      for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.n; ++j) {
          // A_r = dressed A_r
          REQUIRE(coeff_diff(current_coefficient(P, CoeffKind::A, i, j, r),
                             current_coefficient(P, CoeffKind::Adr, i, j, r)) < 1e-12);
          REQUIRE(coeff_diff(current_coefficient(P, CoeffKind::B, i, j, -r),
                             current_coefficient(P, CoeffKind::Bdr, i, j, -r)) < 1e-12);
          // A_{-r} = dressed A_{-r} - (q - 1/q)/(1 - p*^r) H_{i,-r}
          BosonExpression rhs = current_coefficient(P, CoeffKind::Adr, i, j, -r);
          BosonExpression h = H_expr(P, i, -r);
          h *= -qq / (1.0 - ipow(P.pstar(), r));
          rhs += h;
          REQUIRE(coeff_diff(current_coefficient(P, CoeffKind::A, i, j, -r), rhs) < 1e-10);
          // B_r = dressed B_r + (q - 1/q)/(1 - p^r) H_{i,r}
          BosonExpression rhs2 = current_coefficient(P, CoeffKind::Bdr, i, j, r);
          BosonExpression h2 = H_expr(P, i, r);
          h2 *= qq / (1.0 - ipow(P.p(), r));
          rhs2 += h2;
          REQUIRE(coeff_diff(current_coefficient(P, CoeffKind::B, i, j, r), rhs2) < 1e-10);
          // checked family
          BosonExpression rhs3 = current_coefficient(P, CoeffKind::Acdr, i, j, -r);
          BosonExpression h3 = Hc_expr(P, j, -r);
          h3 *= -qq / (1.0 - ipow(P.pcstar(), r));
          rhs3 += h3;
          REQUIRE(coeff_diff(current_coefficient(P, CoeffKind::Ac, i, j, -r), rhs3) < 1e-10);
          BosonExpression rhs4 = current_coefficient(P, CoeffKind::Bcdr, i, j, r);
          BosonExpression h4 = Hc_expr(P, j, r);
          h4 *= qq / (1.0 - ipow(P.pc(), r));
          rhs4 += h4;
          REQUIRE(coeff_diff(current_coefficient(P, CoeffKind::Bc, i, j, r), rhs4) < 1e-10);
        }
  }
}

TEST_CASE("dressed coefficients are quasi-periodic in the column index") {
  for (auto g : kShapes) {
    AlgebraParams P = sample_params(g, 19);
    for (int r : {-4, -3, -2, -1, 1, 2, 3, 4})
      for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.n; ++j) {
          // X^{i,j-n}(z) = X^{i,j}(c z) means X^{i,j-n}_r = c^{-r} X^{i,j}_r
          BosonExpression a = current_coefficient(P, CoeffKind::Adr, i, j - g.n, r);
          BosonExpression b = current_coefficient(P, CoeffKind::Adr, i, j, r);
          b *= ipow(P.pstar(), -r);
          REQUIRE(coeff_diff(a, b) < 1e-10 * std::max(1.0, b.max_abs()));
          BosonExpression c = current_coefficient(P, CoeffKind::Bdr, i, j - g.n, r);
          BosonExpression e = current_coefficient(P, CoeffKind::Bdr, i, j, r);
          e *= ipow(P.p(), -r);
          REQUIRE(coeff_diff(c, e) < 1e-10 * std::max(1.0, e.max_abs()));
          BosonExpression f = current_coefficient(P, CoeffKind::Acdr, i - g.m, j, r);
          BosonExpression h = current_coefficient(P, CoeffKind::Acdr, i, j, r);
          h *= ipow(P.pcstar(), -r);
          REQUIRE(coeff_diff(f, h) < 1e-10 * std::max(1.0, h.max_abs()));
          BosonExpression x = current_coefficient(P, CoeffKind::Bcdr, i - g.m, j, r);
          BosonExpression y = current_coefficient(P, CoeffKind::Bcdr, i, j, r);
          y *= ipow(P.pc(), -r);
          REQUIRE(coeff_diff(x, y) < 1e-10 * std::max(1.0, y.max_abs()));
        }
  }
}

TEST_CASE("closed form contraction tables match first principles") {
  for (auto g : kShapes) {
    AlgebraParams P = sample_params(g, 23);
    for (int id = 1; id <= 16; ++id)
      for (int i = 0; i < g.m; ++i)
        for (int j = 0; j < g.n; ++j)
          for (int k = 0; k < g.m; ++k)
            for (int l = 0; l < g.n; ++l) {
              double res = table_residual(P, TableId(id), i, j, k, l, 8, 80);
              INFO("table " << id << " i=" << i << " j=" << j << " k=" << k << " l=" << l
                            << " m=" << g.m << " n=" << g.n);
              REQUIRE(res < 1e-8);
            }
  }
}
