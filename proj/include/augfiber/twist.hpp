#pragma once

// Twist-region detection, augmentation (crossing-circle insertion) and
// flattening (full-twist removal with 1/n filling bookkeeping).
//
// Circle insertion surgery.  Given two half-edges h1, h2 on a common face
// with distinct edges e1, e2, a crossing circle is inserted around the two
// strands.  With e1 drawn upward (tail = crossing(h1)) and e2 downward
// (tail = crossing(h2)), the face between them on the right of travel, the
// circle meets e1 at crossings Ca (upper) and Cb (lower) and e2 at Cc
// (upper), Cd (lower).  Slot tables (ccw, slot 0 = incoming under), flat
// style = circle over both strands at the upper pair:
//   Ca = [e1m, n, e1b, w]    Cb = [s, e1m, w, e1a]
//   Cc = [e2a, n, e2m, r]    Cd = [r, e2m, s, e2b]
// where e1a/e1m/e1b split e1 (tail piece, encircled piece, head piece),
// likewise e2, and n, r, s, w are the four circle arcs.  The locally
// alternating style flips the two crossings on e2:
//   Cc = [n, e2m, r, e2a]    Cd = [e2m, s, e2b, r]

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "augfiber/pd.hpp"

namespace augfiber {

struct TwistRegion {
  std::vector<int> crossings;  // sorted
  std::vector<int> chain;      // bigon order when the region is a chain; else empty
  bool cyclic = false;
  int crossing_count() const { return static_cast<int>(crossings.size()); }
  int parity() const { return crossing_count() % 2; }
};

// Maximal strings of bigon-adjacent crossings; a crossing with no bigons is
// a singleton region.  Face degree counts crossing incidences with
// multiplicity, so a kink's degree-2 face joins its crossing to itself.
inline std::vector<TwistRegion> find_twist_regions(const PlanarDiagram& d) {
  std::vector<TwistRegion> out;
  int n = d.crossing_count();
  if (n == 0) return out;
  FaceSet fs = trace_faces(d);
  detail::UnionFind uf(n);
  std::map<int, std::set<int>> partners;  // crossing -> distinct bigon partners
  for (const auto& f : fs.faces) {
    if (f.degree() != 2) continue;
    int a = half_crossing(f.boundary[0]);
    int b = half_crossing(f.boundary[1]);
    uf.unite(a, b);
    if (a != b) {
      partners[a].insert(b);
      partners[b].insert(a);
    }
  }
  std::map<int, TwistRegion> by_root;
  for (int c = 0; c < n; ++c) by_root[uf.find(c)].crossings.push_back(c);
  for (auto& [root, region] : by_root) {
    (void)root;
    // Order the chain when every crossing has at most two partners.
    bool chainlike = true;
    for (int c : region.crossings)
      if (partners.count(c) && partners[c].size() > 2) chainlike = false;
    if (chainlike && region.crossings.size() > 1) {
      std::vector<int> ends;
      for (int c : region.crossings)
        if (partners[c].size() == 1) ends.push_back(c);
      region.cyclic = ends.empty();
      int start = region.cyclic ? region.crossings.front() : ends.front();
      std::vector<int> chain{start};
      std::set<int> used{start};
      while (chain.size() < region.crossings.size()) {
        bool advanced = false;
        for (int nb : partners[chain.back()])
          if (!used.count(nb)) {
            chain.push_back(nb);
            used.insert(nb);
            advanced = true;
            break;
          }
        if (!advanced) break;
      }
      if (chain.size() == region.crossings.size()) region.chain = chain;
    } else if (region.crossings.size() == 1) {
      region.chain = region.crossings;
    }
    out.push_back(region);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.crossings.front() < b.crossings.front(); });
  return out;
}

// ---------------------------------------------------------------------------
// circle insertion

struct CircleInsertion {
  EdgeId rep;  // representative circle edge (the marked one)
  std::array<int, 4> new_crossings;
};

namespace detail {

// Face-side occurrence check: h1 and h2 must lie on one face orbit.
inline void require_common_face(const PlanarDiagram& d, Half h1, Half h2) {
  FaceSet fs = trace_faces(d);
  require(fs.face_of_half[h1] == fs.face_of_half[h2], errc::bad_input,
          "insertion half-edges do not co-bound a face");
}

}  // namespace detail

// strand2_loop: the second strand is a fresh crossingless loop placed in the
// face, instead of an existing edge (h2 ignored).
inline CircleInsertion insert_circle(PlanarDiagram& d, Half h1, std::optional<Half> h2,
                                     bool alternating = false) {
  EdgeIndex idx = EdgeIndex::build(d);
  EdgeId e1 = d.edge_at(h1);
  Half t1 = h1, g1 = idx.mate(d, h1);
  EdgeId base = d.max_label() + 1;
  EdgeId e1a = base, e1m = base + 1, e1b = base + 2;
  EdgeId e2a, e2m, e2b;
  EdgeId n = base + 6, r = base + 7, s = base + 8, w = base + 9;
  std::optional<std::pair<Half, Half>> t2g2;
  if (h2) {
    require(d.edge_at(*h2) != e1, errc::bad_input, "insertion needs two distinct edges");
    detail::require_common_face(d, h1, *h2);
    t2g2 = {*h2, idx.mate(d, *h2)};
    e2a = base + 3;
    e2m = base + 4;
    e2b = base + 5;
  } else {
    e2a = e2b = base + 3;  // outer arc of the fresh loop
    e2m = base + 4;
  }

  auto set_slot = [&](Half h, EdgeId e) { d.crossings[half_crossing(h)][half_pos(h)] = e; };
  set_slot(t1, e1a);
  set_slot(g1, e1b);
  if (t2g2) {
    set_slot(t2g2->first, e2a);
    set_slot(t2g2->second, e2b);
  }

  int ca = d.crossing_count();
  d.crossings.push_back({e1m, n, e1b, w});
  d.crossings.push_back({s, e1m, w, e1a});
  if (!alternating) {
    d.crossings.push_back({e2a, n, e2m, r});
    d.crossings.push_back({r, e2m, s, e2b});
  } else {
    d.crossings.push_back({n, e2m, r, e2a});
    d.crossings.push_back({e2m, s, e2b, r});
  }
  d.circle_marks.insert(n);
  return {n, {ca, ca + 1, ca + 2, ca + 3}};
}

// Interior half-edges of a circle inserted by insert_circle: the two caps
// and the middle face.  Used by the random generator to keep later
// insertions out of circle interiors.
inline std::vector<Half> insertion_interior_halfs(const CircleInsertion& ins, bool alternating = false) {
  auto [ca, cb, cc, cd] = ins.new_crossings;
  std::vector<Half> hs{make_half(ca, 0), make_half(cb, 2),                  // west cap
                       make_half(ca, 1), make_half(cb, 1)};                 // middle (e1 side)
  if (!alternating) {
    hs.push_back(make_half(cc, 2));  // middle
    hs.push_back(make_half(cd, 2));
    hs.push_back(make_half(cc, 3));  // east cap
    hs.push_back(make_half(cd, 1));
  } else {
    hs.push_back(make_half(cc, 1));
    hs.push_back(make_half(cd, 1));
    hs.push_back(make_half(cc, 2));
    hs.push_back(make_half(cd, 0));
  }
  return hs;
}

// ---------------------------------------------------------------------------
// augmentation

namespace detail {

// Insertion site for a twist region: two half-edge occurrences on a common
// face such that all the region's crossings end up on one side of the circle.
// Linear chains are encircled past one end, cyclic chains at a bigon.
inline std::pair<Half, Half> choose_site(const PlanarDiagram& d, const FaceSet& fs,
                                         const TwistRegion& region) {
  EdgeIndex idx = EdgeIndex::build(d);
  std::set<int> in_region(region.crossings.begin(), region.crossings.end());

  auto bigon_between = [&](int c) -> std::optional<Half> {
    // a bigon-face half at crossing c whose partner is also in the region
    for (int p = 0; p < 4; ++p) {
      const Face& f = fs.face_of(make_half(c, p));
      if (f.degree() != 2) continue;
      int other = half_crossing(f.boundary[0]) == c && half_pos(f.boundary[0]) == p
                      ? half_crossing(f.boundary[1])
                      : half_crossing(f.boundary[0]);
      if (in_region.count(other)) return make_half(c, p);
    }
    return std::nullopt;
  };

  if (region.crossing_count() == 1 && !bigon_between(region.crossings[0])) {
    int c = region.crossings[0];
    for (int p = 0; p < 4; ++p) {
      EdgeId a = d.crossings[c][p], b = d.crossings[c][(p + 1) % 4];
      if (a != b) return {idx.mate(d, make_half(c, p)), make_half(c, (p + 1) % 4)};
    }
    fail(errc::unsupported_region, "no corner with two distinct edges at the crossing");
  }

  if (region.cyclic || region.chain.empty()) {
    // Cut the ring (or an unordered tangle) at some bigon of the region.
    for (int c : region.crossings) {
      if (auto hb = bigon_between(c)) {
        const Face& f = fs.face_of(*hb);
        if (d.edge_at(f.boundary[0]) != d.edge_at(f.boundary[1]))
          return {f.boundary[0], f.boundary[1]};
      }
    }
    fail(errc::unsupported_region, "no usable bigon in region");
  }

  // Linear chain: encircle beyond an end, at the corner opposite the
  // terminal bigon.
  for (int end : {region.chain.front(), region.chain.back()}) {
    auto hb = bigon_between(end);
    if (!hb) continue;
    int q = half_pos(*hb);  // bigon at corner (q-1, q)
    int p1 = (q + 1) % 4, p2 = (q + 2) % 4;
    if (d.crossings[end][p1] != d.crossings[end][p2])
      return {idx.mate(d, make_half(end, p1)), make_half(end, p2)};
  }
  fail(errc::unsupported_region, "both chain ends are kinked");
}

}  // namespace detail

// Encircle each selected twist region (all regions when selection is empty)
// with a crossing circle: four new crossings per circle.
inline PlanarDiagram augment(const PlanarDiagram& d, const std::vector<TwistRegion>& regions,
                             std::optional<std::vector<int>> selection = std::nullopt) {
  PlanarDiagram out = d;
  std::vector<int> picks;
  if (selection) {
    picks = *selection;
    std::sort(picks.begin(), picks.end());
    for (int i : picks)
      require(i >= 0 && i < static_cast<int>(regions.size()), errc::bad_input,
              "region index out of range");
  } else {
    picks.resize(regions.size());
    std::iota(picks.begin(), picks.end(), 0);
  }
  for (int i : picks) {
    FaceSet fs = trace_faces(out);
    auto [h1, h2] = detail::choose_site(out, fs, regions[i]);
    insert_circle(out, h1, h2);
  }
  validate(out);
  return out;
}

// ---------------------------------------------------------------------------
// flattening

struct FillingInstruction {
  EdgeId circle;  // representative edge of the crossing circle
  long n = 0;     // slope 1/n restores the removed twists; n = 0 erases the circle
};

namespace detail {

// Handedness of a crossing relative to a bigon at corner (s, s+1): +1 when
// the under-strand slot is the ccw-first of the corner.  Two bigon-adjacent
// crossings form a full twist iff their signs agree; opposite signs are a
// reducible pair contributing no twist.
inline int corner_sign(int corner_first_pos) { return corner_first_pos % 2 == 0 ? +1 : -1; }

struct PairRemoval {
  int net_twist = 0;  // +1 per right-handed full twist
  bool removed = false;
};

// Smooth away two bigon-adjacent crossings, reconnecting the strands.
// h_ca and h_cb are the bigon face's two boundary half-edges.
inline PairRemoval remove_full_twist(PlanarDiagram& d, Half h_ca, Half h_cb) {
  int ca = half_crossing(h_ca), cb = half_crossing(h_cb);
  int qa = half_pos(h_ca), qb = half_pos(h_cb);
  int sa = (qa + 3) % 4, sb = (qb + 3) % 4;  // bigon corners (sa,qa), (sb,qb)

  PairRemoval res;
  int sign_a = corner_sign(sa), sign_b = corner_sign(sb);
  if (sign_a == sign_b) res.net_twist = sign_a;  // else reducible pair, net 0

  // Strand through ca: outer slot (sa+2) continues into bigon slot sa, then
  // enters cb and leaves at the opposite slot.
  auto far_outer = [&](EdgeId bigon_edge) {
    if (d.crossings[cb][sb] == bigon_edge) return make_half(cb, (sb + 2) % 4);
    if (d.crossings[cb][qb] == bigon_edge) return make_half(cb, (qb + 2) % 4);
    fail(errc::bad_input, "bigon edge missing at partner crossing");
  };
  Half outA_ca = make_half(ca, (sa + 2) % 4), outA_cb = far_outer(d.crossings[ca][sa]);
  Half outB_ca = make_half(ca, (qa + 2) % 4), outB_cb = far_outer(d.crossings[ca][qa]);

  // Merge the outer edges pairwise; merges may chain through a shared edge.
  std::map<EdgeId, EdgeId> parent;
  auto find = [&](EdgeId e) {
    while (parent.count(e)) e = parent.at(e);
    return e;
  };
  for (auto [h_ca, h_cb] : {std::pair{outA_ca, outA_cb}, std::pair{outB_ca, outB_cb}}) {
    EdgeId u = find(d.edge_at(h_ca)), v = find(d.edge_at(h_cb));
    require(u != v, errc::unaligned_circle, "twist removal would close a crossingless loop");
    parent[std::max(u, v)] = std::min(u, v);
  }

  PlanarDiagram next;
  next.free_loops = d.free_loops;
  for (int c = 0; c < d.crossing_count(); ++c) {
    if (c == ca || c == cb) continue;
    auto slots = d.crossings[c];
    for (auto& e : slots) e = find(e);
    next.crossings.push_back(slots);
  }
  for (EdgeId e : d.circle_marks) next.circle_marks.insert(find(e));
  d = std::move(next);
  res.removed = true;
  return res;
}

struct CircleGeometry {
  EdgeId rep;
  std::vector<int> crossings;      // the four circle crossings
  std::vector<EdgeId> arcs;        // the four circle edges
  std::set<int> region_crossings;  // encircled strand-strand crossings
};

// Identify a circle's crossings and the twist crossings it encircles: a side
// whose two strand stubs share a far crossing contributes that crossing's
// twist region (restricted to non-circle crossings).
inline CircleGeometry circle_geometry(const PlanarDiagram& d, EdgeId rep) {
  Components comps = link_components(d);
  int comp = comps.comp_of_edge.at(rep);
  CircleGeometry g;
  g.rep = rep;
  std::set<int> xset;
  for (int c = 0; c < d.crossing_count(); ++c)
    for (int p = 0; p < 4; ++p)
      if (comps.comp_of_edge.at(d.crossings[c][p]) == comp) {
        xset.insert(c);
        break;
      }
  g.crossings.assign(xset.begin(), xset.end());
  require(g.crossings.size() == 4, errc::not_flat,
          "crossing circle must cross the diagram in exactly 4 points");
  std::set<EdgeId> arcset;
  for (auto& [e, cc] : comps.comp_of_edge)
    if (cc == comp) arcset.insert(e);
  g.arcs.assign(arcset.begin(), arcset.end());
  require(g.arcs.size() == 4, errc::not_flat, "crossing circle must consist of 4 arcs");

  std::set<int> circle_crossings_all;
  for (EdgeId e : d.circle_marks) {
    int cm = comps.comp_of_edge.at(e);
    for (int c = 0; c < d.crossing_count(); ++c)
      for (int p = 0; p < 4; ++p)
        if (comps.comp_of_edge.at(d.crossings[c][p]) == cm) circle_crossings_all.insert(c);
  }

  // Strand stubs grouped by the exterior faces across the two middle arcs.
  std::vector<EdgeId> middles;
  std::map<EdgeId, std::vector<int>> edge_ends;
  EdgeIndex idx = EdgeIndex::build(d);
  for (auto& [e, pr] : idx.at)
    if (!arcset.count(e))
      edge_ends[e] = {half_crossing(pr.first), half_crossing(pr.second)};
  for (auto& [e, ends] : edge_ends)
    if (xset.count(ends[0]) && xset.count(ends[1])) middles.push_back(e);

  // At each circle crossing, split the two strand slots into the middle edge
  // and the outward stub.
  std::map<int, EdgeId> stub_at, middle_at;
  for (int c : g.crossings) {
    std::vector<EdgeId> strand;
    for (int p = 0; p < 4; ++p)
      if (!arcset.count(d.crossings[c][p])) strand.push_back(d.crossings[c][p]);
    for (EdgeId e : strand) {
      bool mid = std::find(middles.begin(), middles.end(), e) != middles.end();
      if (mid && !middle_at.count(c))
        middle_at[c] = e;
      else if (!mid)
        stub_at[c] = e;
    }
  }
  // The encircled region lies beyond the arcs flanking the middle face,
  // i.e. the arcs whose endpoint crossings sit on different strands.
  std::set<int> found;
  for (EdgeId a : g.arcs) {
    auto pr = idx.at.at(a);
    int u = half_crossing(pr.first), v = half_crossing(pr.second);
    if (!stub_at.count(u) || !stub_at.count(v)) continue;
    if (!middle_at.count(u) || !middle_at.count(v) || middle_at[u] == middle_at[v]) continue;
    EdgeId su = stub_at[u], sv = stub_at[v];
    if (su == sv) continue;  // strand closing directly around this side
    auto eu = edge_ends[su], ev = edge_ends[sv];
    for (int fu : eu)
      for (int fv : ev)
        if (fu == fv && !xset.count(fu) && !circle_crossings_all.count(fu)) found.insert(fu);
  }
  if (!found.empty()) {
    // Twist regions among strand-strand crossings only.
    std::vector<TwistRegion> regions;
    for (auto& tr : find_twist_regions(d)) {
      bool strandonly = true;
      for (int c : tr.crossings)
        if (circle_crossings_all.count(c)) strandonly = false;
      if (strandonly) regions.push_back(tr);
    }
    for (int z : found)
      for (const auto& tr : regions)
        if (std::find(tr.crossings.begin(), tr.crossings.end(), z) != tr.crossings.end())
          g.region_crossings.insert(tr.crossings.begin(), tr.crossings.end());
  }
  return g;
}

}  // namespace detail

struct FlattenResult {
  PlanarDiagram diagram;
  std::vector<FillingInstruction> instructions;
};

// Remove all full twists from every encircled twist region.  A removed
// right-handed full twist contributes n = -1 (flip with right_negative).
inline FlattenResult flatten(const PlanarDiagram& d, bool right_negative = true) {
  FlattenResult out;
  out.diagram = d;
  std::vector<EdgeId> reps(d.circle_marks.begin(), d.circle_marks.end());
  for (EdgeId rep0 : reps) {
    // The representative label survives all removals (only strand edges merge).
    detail::CircleGeometry g = detail::circle_geometry(out.diagram, rep0);
    if (g.region_crossings.empty()) continue;
    if (g.region_crossings.size() % 2 != 0)
      fail(errc::odd_twist_region, "encircled twist region has odd crossing count (" +
                                       std::to_string(g.region_crossings.size()) + ")");
    long net = 0;
    std::set<int> todo = g.region_crossings;
    while (!todo.empty()) {
      // Find a bigon pair inside the remaining set.
      FaceSet fs = trace_faces(out.diagram);
      bool progressed = false;
      for (const auto& f : fs.faces) {
        if (f.degree() != 2) continue;
        int a = half_crossing(f.boundary[0]), b = half_crossing(f.boundary[1]);
        if (a == b || !todo.count(a) || !todo.count(b)) continue;
        if (out.diagram.edge_at(f.boundary[0]) == out.diagram.edge_at(f.boundary[1]))
          continue;  // kink-style degree-2 face
        auto res = detail::remove_full_twist(out.diagram, f.boundary[0], f.boundary[1]);
        net += res.net_twist;
        // Crossing indices shifted: recompute the remaining set by position.
        std::set<int> next;
        for (int c : todo) {
          if (c == a || c == b) continue;
          int shift = (c > a) + (c > b);
          next.insert(c - shift);
        }
        todo = std::move(next);
        progressed = true;
        break;
      }
      if (!progressed)
        fail(errc::unaligned_circle,
             "crossing circle splits its twist region with odd parts on both sides");
    }
    out.instructions.push_back({rep0, right_negative ? -net : net});
  }
  validate(out.diagram);
  return out;
}

}  // namespace augfiber
