#pragma once

// Seeded random instances for property testing: abstract ALDs (biased 50%
// toward uniform random spanning trees so both verdict branches are
// exercised) and pipeline-mode flat augmented diagrams built by inserting
// crossing circles into a growing planar diagram.

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "augfiber/ald.hpp"
#include "augfiber/classify.hpp"
#include "augfiber/pd.hpp"
#include "augfiber/twist.hpp"

namespace augfiber {

// mt19937 is fully specified; keep draws portable by avoiding
// std::uniform_int_distribution.
class Rng {
 public:
  explicit Rng(unsigned seed) : state_(seed) {}
  unsigned next(unsigned bound) {  // uniform-ish in [0, bound)
    return bound == 0 ? 0 : static_cast<unsigned>(raw() % bound);
  }
  bool coin() { return next(2) == 1; }

 private:
  unsigned long raw() {
    // xorshift64*, deterministic across platforms
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    state_ = state_ * 0x2545F4914F6CDD1DULL;
    return state_ >> 16;
  }
  unsigned long long state_;
};

// ---------------------------------------------------------------------------
// abstract ALD generator

struct RandomAldOptions {
  bool force_tree = false;
  bool force_non_tree = false;
  bool bridge_components = true;  // add A-circles joining stray components to C0's
  int max_a_circles = 3;
};

inline Ald random_ald(unsigned seed, int size, RandomAldOptions opt = {}) {
  Rng rng(seed * 2654435761u + 97);
  int n = 2 + static_cast<int>(rng.next(static_cast<unsigned>(std::max(1, size - 1))));
  Ald ald;
  for (int i = 0; i < n; ++i) ald.c_regions.push_back({"c" + std::to_string(i), {}});
  ald.unbounded = "c0";

  bool tree = opt.force_tree || (!opt.force_non_tree && rng.coin());
  std::vector<std::pair<int, int>> edges;
  if (tree) {
    if (n == 2) {
      edges.push_back({0, 1});
    } else {
      // uniform random tree via a Pruefer sequence
      std::vector<int> prufer(n - 2);
      for (auto& x : prufer) x = static_cast<int>(rng.next(n));
      std::vector<int> degree(n, 1);
      for (int x : prufer) degree[x]++;
      std::set<int> leaves;
      for (int i = 0; i < n; ++i)
        if (degree[i] == 1) leaves.insert(i);
      for (int x : prufer) {
        int leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        edges.push_back({leaf, x});
        if (--degree[x] == 1) leaves.insert(x);
      }
      int a = *leaves.begin(), b = *std::next(leaves.begin());
      edges.push_back({a, b});
    }
  } else {
    int m = 1 + static_cast<int>(rng.next(static_cast<unsigned>(n + 3)));
    for (int i = 0; i < m; ++i) {
      int u = static_cast<int>(rng.next(n)), v = static_cast<int>(rng.next(n));
      edges.push_back({u, v});  // self-loops and parallels allowed
    }
  }

  int bi = 0;
  for (auto [u, v] : edges) {
    std::string id = "b" + std::to_string(++bi);
    if (rng.coin()) std::swap(u, v);
    ald.b_circles.push_back({id, "c" + std::to_string(u), "c" + std::to_string(v), false});
  }

  int ai = 0;
  int ka = static_cast<int>(rng.next(static_cast<unsigned>(opt.max_a_circles + 1)));
  for (int i = 0; i < ka; ++i) {
    int u = static_cast<int>(rng.next(n)), v = static_cast<int>(rng.next(n));
    ald.a_circles.push_back(
        {"a" + std::to_string(++ai), "c" + std::to_string(u), "c" + std::to_string(v), false});
  }
  if (opt.bridge_components) {
    // ensure every G_B component is A-bridged to C0's, so the lift's join
    // step always has material to work with
    detail::UnionFind uf(n);
    for (auto [u, v] : edges) uf.unite(u, v);
    for (const auto& a : ald.a_circles)
      uf.unite(std::stoi(a.side1.substr(1)), std::stoi(a.side2.substr(1)));
    for (int i = 1; i < n; ++i)
      if (uf.find(i) != uf.find(0)) {
        ald.a_circles.push_back({"a" + std::to_string(++ai), "c" + std::to_string(i), "c0", false});
        uf.unite(i, 0);
      }
  }

  // cyclic incidence lists: shuffle each region's incidences
  std::map<std::string, std::vector<Incidence>> inc;
  for (const auto& b : ald.b_circles) {
    inc[b.m_side].push_back({b.id, "m"});
    inc[b.n_side].push_back({b.id, "n"});
  }
  for (const auto& a : ald.a_circles) {
    inc[a.side1].push_back({a.id, "1"});
    inc[a.side2].push_back({a.id, "2"});
  }
  for (auto& r : ald.c_regions) {
    auto& v = inc[r.id];
    for (size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.next(static_cast<unsigned>(i))]);
    r.boundary = v;
  }
  return ald;
}

// ---------------------------------------------------------------------------
// pipeline-mode diagram generator

struct GeneratedDiagram {
  PlanarDiagram diagram;
  int unbounded_face = 0;
};

namespace detail {

// two fresh loops pierced by one crossing circle
inline PlanarDiagram seed_island() {
  PlanarDiagram d;
  EdgeId e1m = 1, e1o = 2, e2m = 3, e2o = 4, n = 5, r = 6, s = 7, w = 8;
  d.crossings.push_back({e1m, n, e1o, w});
  d.crossings.push_back({s, e1m, w, e1o});
  d.crossings.push_back({e2o, n, e2m, r});
  d.crossings.push_back({r, e2m, s, e2o});
  d.circle_marks.insert(n);
  return d;
}

}  // namespace detail

// A random flat augmented diagram: all crossings are circle crossings.  The
// instance is rejection-sampled until diagram-level deplumbing succeeds, so
// chi bookkeeping can be cross-checked on it.
inline GeneratedDiagram random_flat_augmented_diagram(unsigned seed, int size) {
  for (unsigned attempt = 0;; ++attempt) {
    Rng rng(seed * 1099511627u + attempt * 7919u + 13);
    PlanarDiagram d = detail::seed_island();
    std::set<Half> forbidden;  // interiors of inserted circles
    {
      CircleInsertion seed_ins{5, {0, 1, 2, 3}};
      for (Half h : insertion_interior_halfs(seed_ins)) forbidden.insert(h);
    }
    int extra = static_cast<int>(rng.next(static_cast<unsigned>(std::max(1, size))));
    bool ok = true;
    for (int k = 0; k < extra && ok; ++k) {
      FaceSet fs = trace_faces(d);
      Components comps = link_components(d);
      // candidate faces: not interior to any circle
      std::vector<int> faces;
      for (const auto& f : fs.faces) {
        bool interior = false;
        for (Half h : f.boundary)
          if (forbidden.count(h)) interior = true;
        if (!interior) faces.push_back(f.id);
      }
      const Face& f = fs.faces[faces[rng.next(static_cast<unsigned>(faces.size()))]];
      // grabbable strand half-edges on this face
      std::vector<Half> strand;
      for (Half h : f.boundary)
        if (!comps.circle_comps.count(comps.comp_of_edge_slot[h])) strand.push_back(h);
      if (strand.empty()) continue;
      Half h1 = strand[rng.next(static_cast<unsigned>(strand.size()))];
      std::vector<Half> other;
      for (Half h : strand)
        if (d.edge_at(h) != d.edge_at(h1)) other.push_back(h);
      bool fresh = other.empty() || rng.next(5) < 2;
      CircleInsertion ins;
      if (fresh)
        ins = insert_circle(d, h1, std::nullopt);
      else
        ins = insert_circle(d, h1, other[rng.next(static_cast<unsigned>(other.size()))]);
      for (Half h : insertion_interior_halfs(ins)) forbidden.insert(h);
    }
    if (!ok) continue;
    validate(d);
    // unbounded: any non-interior face
    FaceSet fs = trace_faces(d);
    std::vector<int> candidates;
    for (const auto& f : fs.faces) {
      bool interior = false;
      for (Half h : f.boundary)
        if (forbidden.count(h)) interior = true;
      if (!interior) candidates.push_back(f.id);
    }
    int unb = candidates[rng.next(static_cast<unsigned>(candidates.size()))];
    // keep only instances whose deplumbing is representable
    try {
      classify(d, unb);
      deplumb_diagram(d, unb);
    } catch (const error&) {
      continue;
    }
    return {d, unb};
  }
}

}  // namespace augfiber
