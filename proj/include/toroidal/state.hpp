#pragma once

#include <array>
#include <cstring>
#include <unordered_map>
#include <vector>

#include "core.hpp"

namespace toroidal {

// Oscillator label: packed (site, r) with r >= 1 the mode of a creation
// quantum a^{site}_{-r} present in the monomial.
inline std::uint32_t osc_label(int site, int r) {
  return (static_cast<std::uint32_t>(site) << 16) | static_cast<std::uint32_t>(r);
}
inline int label_site(std::uint32_t l) { return static_cast<int>(l >> 16); }
inline int label_r(std::uint32_t l) { return static_cast<int>(l & 0xffffu); }

constexpr int kMaxSites = 16;

// Basis vector of the boson + lattice Fock space: a sorted oscillator
// monomial over a lattice point.  Degree is kept in half-integer units:
// half_degree = 2*sum(r) + sum(m^2).
struct FockState {
  std::array<std::int8_t, kMaxSites> lat{};
  std::vector<std::uint32_t> osc;  // kept sorted ascending

  bool operator==(const FockState& o) const { return lat == o.lat && osc == o.osc; }

  int half_degree() const {
    int h = 0;
    for (auto l : osc) h += 2 * label_r(l);
    for (auto m : lat) h += int(m) * int(m);
    return h;
  }
  int osc_half_degree() const {
    int h = 0;
    for (auto l : osc) h += 2 * label_r(l);
    return h;
  }
  int row_sum(const Geometry& g, int i) const {
    int s = 0;
    for (int j = 0; j < g.n; ++j) s += lat[g.site(i, j)];
    return s;
  }
  int col_sum(const Geometry& g, int j) const {
    int s = 0;
    for (int i = 0; i < g.m; ++i) s += lat[g.site(i, j)];
    return s;
  }
  void insert_osc(std::uint32_t l) {
    osc.insert(std::upper_bound(osc.begin(), osc.end(), l), l);
  }
  // number of copies of a label
  int count_osc(std::uint32_t l) const {
    auto r = std::equal_range(osc.begin(), osc.end(), l);
    return static_cast<int>(r.second - r.first);
  }
  void remove_osc(std::uint32_t l) {
    auto it = std::lower_bound(osc.begin(), osc.end(), l);
    osc.erase(it);
  }
};

struct FockStateHash {
  std::size_t operator()(const FockState& s) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    for (auto m : s.lat) mix(static_cast<std::uint64_t>(static_cast<std::uint8_t>(m)));
    for (auto l : s.osc) mix(l);
    return static_cast<std::size_t>(h);
  }
};

using StateVec = std::unordered_map<FockState, cplx, FockStateHash>;

inline void axpy(StateVec& y, cplx a, const StateVec& x) {
  if (a == cplx{}) return;
  for (auto& [s, c] : x) y[s] += a * c;
}
inline double max_abs(const StateVec& v) {
  double m = 0.0;
  for (auto& [s, c] : v) m = std::max(m, std::abs(c));
  return m;
}

// all oscillator monomials of exact degree deg over the given sites
inline void osc_monomials_exact(const Geometry& g, int deg,
                                std::vector<std::vector<std::uint32_t>>& out) {
  std::vector<std::uint32_t> cur;
  // choose labels in nonincreasing pack order to produce each multiset once
  auto rec = [&](auto&& self, int remaining, std::uint32_t maxlabel) -> void {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (int site = 0; site < g.sites(); ++site)
      for (int r = 1; r <= remaining; ++r) {
        std::uint32_t l = osc_label(site, r);
        if (l > maxlabel) continue;
        cur.push_back(l);
        self(self, remaining - r, l);
        cur.pop_back();
      }
  };
  rec(rec, deg, 0xffffffffu);
  for (auto& m : out) std::sort(m.begin(), m.end());
}

// Enumerated graded basis with an index lookup.  Deterministic order:
// lattice (lexicographic) outer, oscillator content inner by degree.
struct Basis {
  Geometry geo;
  std::vector<FockState> states;
  std::unordered_map<FockState, int, FockStateHash> index;

  int size() const { return static_cast<int>(states.size()); }
  int find(const FockState& s) const {
    auto it = index.find(s);
    return it == index.end() ? -1 : it->second;
  }
  void push(FockState s) {
    index.emplace(s, static_cast<int>(states.size()));
    states.push_back(std::move(s));
  }
};

// box truncation: oscillator degree <= D_max, |lattice entries| <= L_max
inline Basis make_basis_box(const Geometry& g, int D_max, int L_max) {
  Basis b;
  b.geo = g;
  std::vector<std::vector<std::vector<std::uint32_t>>> by_deg(D_max + 1);
  for (int d = 0; d <= D_max; ++d) osc_monomials_exact(g, d, by_deg[d]);
  std::vector<int> lat(g.sites(), -L_max);
  for (;;) {
    FockState s;
    for (int k = 0; k < g.sites(); ++k) s.lat[k] = static_cast<std::int8_t>(lat[k]);
    for (int d = 0; d <= D_max; ++d)
      for (auto& m : by_deg[d]) {
        s.osc = m;
        b.push(s);
      }
    int k = g.sites() - 1;
    while (k >= 0 && lat[k] == L_max) lat[k--] = -L_max;
    if (k < 0) break;
    ++lat[k];
  }
  return b;
}

// All states of a fixed (degree, weight) sector: given half-degree,
// row sums and column sums.  This is the exact invariant block of any
// operator that preserves degree and the lattice weights.
inline Basis make_basis_sector(const Geometry& g, int half_deg, const std::vector<int>& row_sums,
                               const std::vector<int>& col_sums) {
  Basis b;
  b.geo = g;
  int B = 0;
  while ((B + 1) * (B + 1) <= half_deg) ++B;
  // rows compatible with the row sums
  std::vector<std::vector<std::vector<int>>> rows(g.m);
  for (int i = 0; i < g.m; ++i) {
    std::vector<int> row(g.n);
    auto rec = [&](auto&& self, int j, int sum, int sq) -> void {
      if (j == g.n) {
        if (sum == row_sums[i]) rows[i].push_back(row);
        return;
      }
      for (int e = -B; e <= B; ++e) {
        if (sq + e * e > half_deg) continue;
        if (std::abs(sum + e - row_sums[i]) > (g.n - 1 - j) * B) continue;
        row[j] = e;
        self(self, j + 1, sum + e, sq + e * e);
      }
    };
    rec(rec, 0, 0, 0);
  }
  std::vector<const std::vector<int>*> pick(g.m);
  std::unordered_map<int, std::vector<std::vector<std::uint32_t>>> osc_cache;
  auto rec2 = [&](auto&& self, int i, int sq) -> void {
    if (i == g.m) {
      for (int j = 0; j < g.n; ++j) {
        int cs = 0;
        for (int ii = 0; ii < g.m; ++ii) cs += (*pick[ii])[j];
        if (cs != col_sums[j]) return;
      }
      int rem = half_deg - sq;
      if (rem < 0 || rem % 2) return;
      int d = rem / 2;
      auto it = osc_cache.find(d);
      if (it == osc_cache.end()) {
        std::vector<std::vector<std::uint32_t>> ms;
        osc_monomials_exact(g, d, ms);
        it = osc_cache.emplace(d, std::move(ms)).first;
      }
      FockState s;
      for (int ii = 0; ii < g.m; ++ii)
        for (int j = 0; j < g.n; ++j) s.lat[g.site(ii, j)] = static_cast<std::int8_t>((*pick[ii])[j]);
      for (auto& m : it->second) {
        s.osc = m;
        b.push(s);
      }
      return;
    }
    for (auto& row : rows[i]) {
      int rsq = 0;
      for (int e : row) rsq += e * e;
      if (sq + rsq > half_deg) continue;
      pick[i] = &row;
      self(self, i + 1, sq + rsq);
    }
  };
  rec2(rec2, 0, 0);
  return b;
}

}  // namespace toroidal
