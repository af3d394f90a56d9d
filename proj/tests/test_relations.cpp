#include <catch2/catch_amalgamated.hpp>

#include "toroidal/relations.hpp"

using namespace toroidal;

namespace {

double mat_diff(const Mat& a, const Mat& b) {
  REQUIRE(a.nr == b.nr);
  REQUIRE(a.nc == b.nc);
  double m = 0.0;
  for (std::size_t k = 0; k < a.a.size(); ++k) m = std::max(m, std::abs(a.a[k] - b.a[k]));
  return m;
}

// matrix of op built purely from the transpose application and the pairing:
// M[r,c] = (op^T w_r)_{v_c} * N(v_c) / N(w_r)
Mat transpose_matrix(BlockContext& ctx, const OpRef& op, const BlockKey& dom_key) {
  const Basis& dom = ctx.block(dom_key);
  BlockKey cod_key = op_target(ctx.P.geo, op, dom_key);
  const Basis& cod = ctx.block(cod_key);
  const auto& Nv = ctx.norms(dom_key);
  const auto& Nw = ctx.norms(cod_key);
  Mat M(static_cast<int>(cod.states.size()), static_cast<int>(dom.states.size()));
  for (int r = 0; r < M.nr; ++r) {
    StateVec out;
    ctx.apply_T(op, cod.states[r], 1.0, out);
    for (const auto& [s, a0] : out) {
      auto it = dom.index.find(s);
      if (it == dom.index.end()) continue;
      M.at(r, it->second) += a0 * Nv[it->second] / Nw[r];
    }
  }
  return M;
}

}  // namespace

TEST_CASE("transpose application reproduces forward block matrices") {
  for (Geometry g : {Geometry{2, 2}, Geometry{3, 2}}) {
    AlgebraParams P = sample_params(g, 13);
    BlockContext ctx(P);
    BlockKey dom;
    dom.h = 4;
    dom.rows.assign(g.m, 0);
    dom.cols.assign(g.n, 0);
    dom.rows[0] = 1;
    dom.rows[1] = -1;
    std::vector<OpRef> ops = {
        op_current(CurrentKind::E, 0, 1),  op_current(CurrentKind::E, 1, -2),
        op_current(CurrentKind::F, 0, 0),  op_current(CurrentKind::Ec, 0, 1),
        op_current(CurrentKind::Fc, 1, -1), op_cartan(false, 0, 2),
        op_cartan(false, 1, -1),           op_cartan(true, 0, -3),
    };
    for (const auto& op : ops) {
      Mat fwd = ctx.forward_matrix(op, dom);
      Mat trn = transpose_matrix(ctx, op, dom);
      double scale = std::max(fwd.max_abs(), 1e-30);
      INFO("m=" << g.m << " n=" << g.n << " tag=" << int(op.tag) << " kind=" << int(op.kind)
                << " idx=" << op.idx << " mode=" << op.mode);
      CHECK(mat_diff(fwd, trn) / scale < 1e-11);
    }
  }
}

TEST_CASE("meet products agree with composed forward matrices") {
  Geometry g{2, 2};
  AlgebraParams P = sample_params(g, 29);
  BlockContext ctx(P);
  BlockKey dom;
  dom.h = 3;
  dom.rows = {1, 0};
  dom.cols = {1, 0};
  std::vector<std::pair<OpRef, OpRef>> pairs = {
      {op_current(CurrentKind::E, 0, 1), op_current(CurrentKind::F, 0, -1)},
      {op_current(CurrentKind::F, 1, -2), op_current(CurrentKind::E, 1, 0)},
      {op_current(CurrentKind::E, 0, -1), op_current(CurrentKind::E, 1, 2)},
      {op_current(CurrentKind::Ec, 0, 0), op_current(CurrentKind::Fc, 0, 1)},
      {op_cartan(false, 0, 1), op_current(CurrentKind::E, 1, -1)},
      {op_current(CurrentKind::F, 0, 2), op_cartan(true, 1, -2)},
      {op_cartan(false, 1, -2), op_cartan(false, 0, 2)},
  };
  for (const auto& [A, B] : pairs) {
    BlockKey mid = op_target(g, B, dom);
    Mat MB = ctx.forward_matrix(B, dom);
    Mat MA = ctx.forward_matrix(A, mid);
    Mat direct(MA.nr, MB.nc);
    for (int r = 0; r < MA.nr; ++r)
      for (int c = 0; c < MB.nc; ++c) {
        cplx s = 0.0;
        for (int t = 0; t < MA.nc; ++t) s += MA.at(r, t) * MB.at(t, c);
        direct.at(r, c) = s;
      }
    const Mat& meet = ctx.product(A, B, dom).m;
    double scale = std::max(direct.max_abs(), 1e-30);
    INFO("A mode=" << A.mode << " B mode=" << B.mode);
    CHECK(mat_diff(direct, meet) / scale < 1e-11);
  }
}

TEST_CASE("defining relations hold on exact blocks") {
  Geometry g{2, 2};
  AlgebraParams P = sample_params(g, 7);
  std::set<BlockKey> family = box_blocks(g, 3, 1);
  BlockContext ctx(P);
  RelationReport rep = check_defining_relations(ctx, family, 3, 3);
  CAPTURE(rep.ee.max_rel, rep.ff.max_rel, rep.ef.max_rel, rep.he.max_rel, rep.hf.max_rel,
          rep.hh.max_rel, rep.checked());
  REQUIRE(rep.checked() > 0);
  CHECK(rep.ee.max_rel < 1e-7);
  CHECK(rep.ff.max_rel < 1e-7);
  CHECK(rep.ef.max_rel < 1e-7);
  CHECK(rep.he.max_rel < 1e-7);
  CHECK(rep.hf.max_rel < 1e-7);
  CHECK(rep.hh.max_rel < 1e-7);
}
