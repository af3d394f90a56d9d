#include <catch2/catch_amalgamated.hpp>

#include "toroidal/coproduct.hpp"

using namespace toroidal;

namespace {

double column_diff(const StateVec& a, const StateVec& b) {
  double m = 0.0;
  for (const auto& [s, v] : a) {
    auto it = b.find(s);
    m = std::max(m, std::abs(v - (it == b.end() ? cplx{} : it->second)));
  }
  for (const auto& [s, v] : b)
    if (!a.count(s)) m = std::max(m, std::abs(v));
  return m;
}

double column_scale(const StateVec& a, const StateVec& b) {
  return std::max({max_abs(a), max_abs(b), 1e-30});
}

}  // namespace

TEST_CASE("level-2 action matches the gauged tensor coproduct construction") {
  Geometry g{2, 2};
  AlgebraParams P = sample_params(g, 11);
  CoproductLevel2 cp(P);

  Basis slots = make_basis_box(Geometry{g.m, 1}, 2, 1);
  std::vector<std::pair<FockState, FockState>> pairs;
  for (const auto& v0 : slots.states)
    for (const auto& v1 : slots.states)
      if (v0.osc_half_degree() + v1.osc_half_degree() <= 4) pairs.push_back({v0, v1});
  REQUIRE(pairs.size() > 1000);

  std::vector<Current> etot, ftot;
  for (int i = 0; i < g.m; ++i) {
    etot.emplace_back(P, CurrentKind::E, i);
    ftot.emplace_back(P, CurrentKind::F, i);
  }

  double worst = 0.0;
  for (const auto& [v0, v1] : pairs) {
    FockState vf;
    fuse_state(P, v0, v1, vf);
    for (int i = 0; i < g.m; ++i) {
      for (int k = -2; k <= 2; ++k) {
        StateVec closedE, closedF, deltaE, deltaF;
        etot[i].apply_mode(k, vf, 1.0, closedE);
        ftot[i].apply_mode(k, vf, 1.0, closedF);
        cp.fused_column(
            [&](const FockState& a, const FockState& b, SlotVec& o) { cp.e_mode(i, k, a, b, 1.0, o); },
            v0, v1, deltaE);
        cp.fused_column(
            [&](const FockState& a, const FockState& b, SlotVec& o) { cp.f_mode(i, k, a, b, 1.0, o); },
            v0, v1, deltaF);
        worst = std::max(worst, column_diff(closedE, deltaE) / column_scale(closedE, deltaE));
        worst = std::max(worst, column_diff(closedF, deltaF) / column_scale(closedF, deltaF));
      }
      for (int r : {-2, -1, 1, 2}) {
        StateVec closedH, deltaH;
        cartan_apply(P, false, i, r, vf, 1.0, closedH);
        cp.fused_column(
            [&](const FockState& a, const FockState& b, SlotVec& o) { cp.h_mode(i, r, a, b, 1.0, o); },
            v0, v1, deltaH);
        worst = std::max(worst, column_diff(closedH, deltaH) / column_scale(closedH, deltaH));
      }
    }
  }
  CAPTURE(worst, pairs.size());
  CHECK(worst < 1e-10);
}
