#include <catch2/catch_amalgamated.hpp>

#include "toroidal/iom.hpp"

using namespace toroidal;

namespace {

// the four commuting families at (m,n) = (2,2), M = N = 1
struct FamilySet {
  std::array<Mat, 2> G, Gs, Gc, Gcs;
};

FamilySet build_families(const AlgebraParams& P, const Basis& bas, const BlockKey& key,
                         int K, cplx break_pw = {1.0, 0.0}) {
  FamilySet f;
  IomSide sG{false, false, {}}, sGs{false, true, {}};
  IomSide sGc{true, false, {}}, sGcs{true, true, {}};
  sG.pw = iom_pw(P, sG, key) * break_pw;
  sGs.pw = iom_pw(P, sGs, key);
  sGc.pw = iom_pw(P, sGc, key);
  sGcs.pw = iom_pw(P, sGcs, key);
  f.G = iom_matrix(P, bas, sG, K);
  f.Gs = iom_matrix(P, bas, sGs, K);
  f.Gc = iom_matrix(P, bas, sGc, K);
  f.Gcs = iom_matrix(P, bas, sGcs, K);
  return f;
}

double pair_residual(const std::array<Mat, 2>& A, const std::array<Mat, 2>& B) {
  double r = 0;
  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu)
      r = std::max(r, comm_residual(A[std::size_t(mu)], B[std::size_t(nu)]));
  return r;
}

}  // namespace

TEST_CASE("kernel quasi-periodicity in the ratio variable") {
  AlgebraParams P = sample_params({2, 2}, 42);
  const cplx t{0.83, 0.42};
  const cplx pw{1.31, -0.27};
  for (bool dual : {false, true})
    for (bool star : {false, true}) {
      IomSide S{dual, star, pw};
      cplx nome = iom_nome(P, S);
      for (int mu = 0; mu < 2; ++mu) {
        cplx h0 = iom_kernel(P, S, mu, t);
        cplx up = iom_kernel(P, S, mu, nome * t) / h0;
        cplx dn = iom_kernel(P, S, mu, t / nome) / h0;
        cplx eu = star ? pw * P.q2() : P.q2() / pw;
        cplx ed = star ? 1.0 / (pw * P.q2()) : pw / P.q2();
        INFO("dual=" << dual << " star=" << star << " mu=" << mu);
        REQUIRE(std::abs(up - eu) < 1e-10 * std::abs(eu));
        REQUIRE(std::abs(dn - ed) < 1e-10 * std::abs(ed));
      }
    }
}

TEST_CASE("integrals of motion: commutativity and duality on all weight blocks") {
  AlgebraParams P = sample_params({2, 2}, 42);
  Geometry g{2, 2};
  const double ap = std::abs(P.p()), apc = std::abs(P.pc());
  REQUIRE(ap <= 0.1);
  REQUIRE(apc <= 0.1);

  BlockContext ctx(P);
  auto keys = box_blocks(g, 2, 1);

  // residual maxima per truncation depth: the four duality families, then
  // same-side first-first, first-second and second-second
  constexpr int KMAX = 4;
  std::array<std::array<double, 7>, KMAX + 1> rmax{};
  double broken = 0, intact_at_top = 0;

  for (const auto& key : keys) {
    const Basis& bas = ctx.block(key);
    if (bas.size() < 2) continue;
    for (int K = 1; K <= KMAX; ++K) {
      FamilySet f = build_families(P, bas, key, K);
      auto& r = rmax[std::size_t(K)];
      r[0] = std::max(r[0], pair_residual(f.G, f.Gc));
      r[1] = std::max(r[1], pair_residual(f.G, f.Gcs));
      r[2] = std::max(r[2], pair_residual(f.Gs, f.Gc));
      r[3] = std::max(r[3], pair_residual(f.Gs, f.Gcs));
      r[4] = std::max(r[4], comm_residual(f.G[0], f.G[1]));
      r[5] = std::max(r[5], pair_residual(f.G, f.Gs));
      r[6] = std::max(r[6], comm_residual(f.Gs[0], f.Gs[1]));
      if (K == KMAX) {
        intact_at_top = std::max(intact_at_top, pair_residual(f.G, f.Gc));
        FamilySet b = build_families(P, bas, key, K, cplx{1.7, 0.3});
        broken = std::max(broken, pair_residual(b.G, b.Gc));
      }
    }
  }

  const char* names[7] = {"[G,Gv]",  "[G,Gv*]", "[G*,Gv]", "[G*,Gv*]",
                          "[G,G]",   "[G,G*]",  "[G*,G*]"};
  for (int K = 1; K <= KMAX; ++K) {
    double bound = std::max(1e-6, 10.0 * (std::pow(ap, K + 1) + std::pow(apc, K + 1)));
    for (int fam = 0; fam < 7; ++fam) {
      INFO("family " << names[fam] << " K=" << K << " residual "
                     << rmax[std::size_t(K)][std::size_t(fam)]);
      if (K == KMAX) REQUIRE(rmax[std::size_t(K)][std::size_t(fam)] < bound);
      // decrease along the ladder, allowing a factor-2 margin
      if (K > 1)
        REQUIRE(rmax[std::size_t(K)][std::size_t(fam)] <=
                2.0 * rmax[std::size_t(K - 1)][std::size_t(fam)]);
    }
  }

  INFO("broken-constraint control " << broken << " vs intact " << intact_at_top);
  REQUIRE(broken >= 1e2 * intact_at_top);
}
