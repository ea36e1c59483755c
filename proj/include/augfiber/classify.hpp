#pragma once

// Classifier: read the abstract flat-augmented-link structure off a flat
// augmented diagram.  A crossing circle's type is decided by the middle-face
// rule: among the three faces interior to the circle (two degree-2 caps and
// one degree-4 middle), a white middle makes the circle a B-circle (that
// face is its B-region); a black middle makes it an A-circle (the two white
// caps are its A-regions).  C-regions are the remaining white faces, C0 the
// unbounded one.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "augfiber/ald.hpp"
#include "augfiber/pd.hpp"
#include "augfiber/twist.hpp"

namespace augfiber {

struct CircleInfo {
  EdgeId rep;                 // smallest edge label on the circle
  std::vector<int> crossings; // sorted, exactly 4
  std::set<EdgeId> arcs;      // the 4 circle edges
  int middle_face = -1;
  std::array<int, 2> cap_faces{-1, -1};
  std::array<EdgeId, 2> cap_arcs{-1, -1};     // arc co-bounding each cap
  std::array<EdgeId, 2> middle_arcs{-1, -1};  // arcs flanking the middle face
  std::array<EdgeId, 2> middle_edges{-1, -1}; // strand edges through the circle
  bool alternating = false;
  bool type_a = false;  // filled in once colors are known
  // exterior faces: for B-circles across the cap arcs, for A-circles across
  // the middle arcs; [0] is the deterministic "first" side
  std::array<int, 2> exterior{-1, -1};
};

namespace detail {

// The two sides of the circle curve: face components after removing the
// adjacencies dual to the four circle arcs.
inline std::vector<std::set<int>> circle_sides(const PlanarDiagram& d, const FaceSet& fs,
                                               const std::set<EdgeId>& arcs) {
  EdgeIndex idx = EdgeIndex::build(d);
  std::map<int, std::set<int>> adj;
  for (const auto& f : fs.faces)
    for (Half h : f.boundary) {
      if (arcs.count(d.edge_at(h))) continue;
      adj[f.id].insert(fs.face_of_half[idx.mate(d, h)]);
    }
  std::set<int> seen;
  std::vector<std::set<int>> comps;
  for (const auto& f : fs.faces) {
    if (seen.count(f.id)) continue;
    std::set<int> comp;
    std::vector<int> stack{f.id};
    seen.insert(f.id);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      comp.insert(u);
      for (int v : adj[u])
        if (seen.insert(v).second) stack.push_back(v);
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

// Check a candidate side for the two-caps-one-middle interior pattern.
inline bool match_interior(const PlanarDiagram& d, const FaceSet& fs, const std::set<int>& side,
                           const std::set<EdgeId>& arcs, const std::set<int>& xset,
                           CircleInfo& out) {
  if (side.size() != 3) return false;
  std::vector<int> caps;
  int middle = -1;
  for (int fid : side) {
    const Face& f = fs.faces[fid];
    for (Half h : f.boundary)
      if (!xset.count(half_crossing(h))) return false;
    if (f.degree() == 2)
      caps.push_back(fid);
    else if (f.degree() == 4)
      middle = fid;
    else
      return false;
  }
  if (caps.size() != 2 || middle < 0) return false;
  // middle face: two arcs and two strand edges
  std::vector<EdgeId> marcs, medges;
  for (Half h : fs.faces[middle].boundary)
    (arcs.count(d.edge_at(h)) ? marcs : medges).push_back(d.edge_at(h));
  if (marcs.size() != 2 || medges.size() != 2) return false;
  // each cap: one arc and one of the middle's strand edges
  std::array<EdgeId, 2> cap_arc{-1, -1};
  for (int i = 0; i < 2; ++i) {
    EdgeId a = -1, m = -1;
    for (Half h : fs.faces[caps[i]].boundary)
      (arcs.count(d.edge_at(h)) ? a : m) = d.edge_at(h);
    if (a < 0 || m < 0) return false;
    if (std::find(medges.begin(), medges.end(), m) == medges.end()) return false;
    cap_arc[i] = a;
  }
  out.middle_face = middle;
  out.cap_faces = {caps[0], caps[1]};
  out.cap_arcs = cap_arc;
  out.middle_arcs = {marcs[0], marcs[1]};
  out.middle_edges = {medges[0], medges[1]};
  return true;
}

}  // namespace detail

// Per-circle structure, independent of coloring.  unbounded_face breaks the
// inside/outside symmetry for circles whose strands close up immediately.
inline std::vector<CircleInfo> analyze_circles(const PlanarDiagram& d, const FaceSet& fs,
                                               int unbounded_face) {
  Components comps = link_components(d);
  std::map<int, CircleInfo> by_comp;
  EdgeIndex idx = EdgeIndex::build(d);
  for (EdgeId rep : d.circle_marks) {
    int comp = comps.comp_of_edge.at(rep);
    if (by_comp.count(comp)) continue;
    CircleInfo info;
    for (auto& [e, cc] : comps.comp_of_edge)
      if (cc == comp) info.arcs.insert(e);
    info.rep = *info.arcs.begin();
    require(info.arcs.size() == 4, errc::not_flat,
            "crossing circle must consist of 4 arcs (circle " + std::to_string(rep) + ")");
    std::set<int> xset;
    for (EdgeId e : info.arcs) {
      auto pr = idx.at.at(e);
      xset.insert(half_crossing(pr.first));
      xset.insert(half_crossing(pr.second));
    }
    require(xset.size() == 4, errc::not_flat, "crossing circle must have 4 distinct crossings");
    info.crossings.assign(xset.begin(), xset.end());
    // The circle runs straight through each of its crossings.
    for (int c : info.crossings) {
      int arc_slots = 0;
      for (int p = 0; p < 4; ++p)
        if (info.arcs.count(d.crossings[c][p])) ++arc_slots;
      require(arc_slots == 2, errc::not_flat, "circle does not pass straight through a crossing");
      bool opposite = (info.arcs.count(d.crossings[c][0]) && info.arcs.count(d.crossings[c][2])) ||
                      (info.arcs.count(d.crossings[c][1]) && info.arcs.count(d.crossings[c][3]));
      require(opposite, errc::not_flat, "circle crosses itself");
    }
    // over/under pattern along the circle: flat = two adjacent overs, two
    // adjacent unders; locally alternating = strictly alternating.
    {
      std::vector<int> order;  // crossings in order along the circle component
      Half at = idx.at.at(*info.arcs.begin()).first;
      for (int step = 0; step < 4; ++step) {
        order.push_back(half_crossing(at));
        at = idx.mate(d, rotate(at, 2));
      }
      std::vector<bool> over;
      for (int c : order) over.push_back(info.arcs.count(d.crossings[c][1]) != 0);
      int changes = 0;
      for (int i = 0; i < 4; ++i) changes += over[i] != over[(i + 1) % 4];
      if (changes == 2)
        info.alternating = false;
      else if (changes == 4)
        info.alternating = true;
      else
        fail(errc::not_flat, "crossing circle is neither flat nor locally alternating");
    }
    // interior pattern; both sides may match for island configurations, in
    // which case the side away from the unbounded face is the interior.
    auto sides = detail::circle_sides(d, fs, info.arcs);
    require(sides.size() == 2, errc::not_flat, "circle arcs do not separate the diagram faces");
    CircleInfo a = info, b = info;
    bool ok0 = detail::match_interior(d, fs, sides[0], info.arcs, xset, a);
    bool ok1 = detail::match_interior(d, fs, sides[1], info.arcs, xset, b);
    bool un0 = sides[0].count(unbounded_face) != 0;
    if (ok0 && ok1)
      info = un0 ? b : a;
    else if (ok0 && !un0)
      info = a;
    else if (ok1 && un0)
      info = b;
    else if (ok0 || ok1)
      fail(errc::unbounded_not_c_region, "unbounded face lies inside a crossing circle");
    else
      fail(errc::not_flat, "crossing circle lacks the two-caps-one-middle interior");
    by_comp[comp] = info;
  }
  std::vector<CircleInfo> out;
  for (auto& [comp, info] : by_comp) {
    (void)comp;
    out.push_back(info);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.crossings[0] < y.crossings[0]; });
  return out;
}

// Faces that lie inside some crossing circle no matter where the unbounded
// face is put: sides matching the interior pattern uniquely.
inline std::set<int> definite_interior_faces(const PlanarDiagram& d, const FaceSet& fs) {
  std::set<int> out;
  Components comps = link_components(d);
  EdgeIndex idx = EdgeIndex::build(d);
  std::set<int> seen_comps;
  for (EdgeId rep : d.circle_marks) {
    int comp = comps.comp_of_edge.at(rep);
    if (!seen_comps.insert(comp).second) continue;
    std::set<EdgeId> arcs;
    for (auto& [e, cc] : comps.comp_of_edge)
      if (cc == comp) arcs.insert(e);
    if (arcs.size() != 4) continue;
    std::set<int> xset;
    for (EdgeId e : arcs) {
      auto pr = idx.at.at(e);
      xset.insert(half_crossing(pr.first));
      xset.insert(half_crossing(pr.second));
    }
    auto sides = detail::circle_sides(d, fs, arcs);
    if (sides.size() != 2) continue;
    CircleInfo scratch;
    bool ok0 = detail::match_interior(d, fs, sides[0], arcs, xset, scratch);
    bool ok1 = detail::match_interior(d, fs, sides[1], arcs, xset, scratch);
    if (ok0 == ok1) continue;  // ambiguous island or malformed
    const auto& interior = ok0 ? sides[0] : sides[1];
    out.insert(interior.begin(), interior.end());
  }
  return out;
}

// Default unbounded face for flat augmented diagrams: the documented corner
// rule, falling back to the lowest face outside every circle interior.
inline int default_unbounded_flat(const PlanarDiagram& d, const FaceSet& fs) {
  int def = default_unbounded(d, fs);
  if (d.circle_marks.empty()) return def;
  std::set<int> interior = definite_interior_faces(d, fs);
  if (!interior.count(def)) return def;
  for (const auto& f : fs.faces)
    if (!interior.count(f.id)) return f.id;
  return def;
}

struct Classified {
  Ald ald;
  std::map<int, std::string> region_of_face;  // white C-region face -> id
  std::vector<CircleInfo> circles;
  std::map<std::string, EdgeId> circle_rep;  // ald circle id -> representative edge
};

inline Classified classify(const PlanarDiagram& d, int unbounded_face = -1) {
  require(d.crossing_count() > 0 || d.free_loops > 0, errc::bad_input, "empty diagram");
  if (d.crossing_count() == 0) {
    require(d.free_loops == 1, errc::not_flat, "split crossingless diagram");
    Classified out;
    out.ald.c_regions.push_back({"c0", {}});
    out.ald.unbounded = "c0";
    return out;
  }
  FaceSet fs = trace_faces(d);
  if (unbounded_face < 0) unbounded_face = default_unbounded_flat(d, fs);
  fs = checkerboard(d, fs, unbounded_face);
  SurfaceStats st = surface_stats(d, fs);
  require(st.orientable, errc::non_orientable_surface,
          "+/- side propagation fails on the black surface");

  Classified out;
  out.circles = analyze_circles(d, fs, unbounded_face);

  std::set<int> interior_faces;
  int bn = 0, an = 0;
  EdgeIndex idx = EdgeIndex::build(d);
  auto across = [&](EdgeId arc) {
    // the exterior face across an arc from the circle interior
    auto pr = idx.at.at(arc);
    int f1 = fs.face_of_half[pr.first], f2 = fs.face_of_half[pr.second];
    return std::pair{f1, f2};
  };

  struct PendingIncidence {
    EdgeId arc;
    std::string side;
  };
  std::map<EdgeId, std::pair<std::string, std::string>> arc_incidence;  // arc -> (circle id, side)

  for (auto& ci : out.circles) {
    interior_faces.insert(ci.middle_face);
    interior_faces.insert(ci.cap_faces[0]);
    interior_faces.insert(ci.cap_faces[1]);
    ci.type_a = fs.faces[ci.middle_face].color == FaceColor::black;
    // caps and middle always get opposite colors
    for (int cf : {ci.cap_faces[0], ci.cap_faces[1]})
      require(fs.faces[cf].color != fs.faces[ci.middle_face].color, errc::not_flat,
              "cap and middle face share a color");
    std::array<EdgeId, 2> outward = ci.type_a ? ci.middle_arcs : ci.cap_arcs;
    // deterministic first side: the arc with the smaller least half-edge
    auto least_half = [&](EdgeId e) {
      auto pr = idx.at.at(e);
      return std::min(pr.first, pr.second);
    };
    if (least_half(outward[1]) < least_half(outward[0])) std::swap(outward[0], outward[1]);
    for (int k = 0; k < 2; ++k) {
      auto [fa, fb] = across(outward[k]);
      int ext = interior_faces.count(fa) && !interior_faces.count(fb) ? fb
                : interior_faces.count(fb) && !interior_faces.count(fa) ? fa
                                                                        : -1;
      // for cap arcs one side is the cap itself
      if (ext < 0) ext = (fa == ci.cap_faces[0] || fa == ci.cap_faces[1] || fa == ci.middle_face) ? fb : fa;
      require(fs.faces[ext].color == FaceColor::white, errc::not_flat,
              "circle side region is not white");
      ci.exterior[k] = ext;
    }
    std::string id = ci.type_a ? ("a" + std::to_string(++an)) : ("b" + std::to_string(++bn));
    out.circle_rep[id] = ci.rep;
    if (ci.type_a) {
      arc_incidence[outward[0]] = {id, "1"};
      arc_incidence[outward[1]] = {id, "2"};
    } else {
      arc_incidence[outward[0]] = {id, "m"};
      arc_incidence[outward[1]] = {id, "n"};
    }
  }

  // C-regions: white faces outside every circle interior.
  require(fs.faces[unbounded_face].color == FaceColor::white, errc::unbounded_not_c_region,
          "unbounded face must be white");
  require(!interior_faces.count(unbounded_face), errc::unbounded_not_c_region,
          "unbounded face must be a C-region");
  int cn = 0;
  for (const auto& f : fs.faces) {
    if (f.color != FaceColor::white || interior_faces.count(f.id)) continue;
    std::string id = f.id == unbounded_face ? "c0" : ("c" + std::to_string(++cn));
    out.region_of_face[f.id] = id;
  }
  out.ald.unbounded = "c0";

  // incidence lists from the face walks
  for (auto& [fid, rid] : out.region_of_face) {
    CRegion r;
    r.id = rid;
    for (Half h : fs.faces[fid].boundary) {
      auto it = arc_incidence.find(d.edge_at(h));
      if (it != arc_incidence.end()) r.boundary.push_back({it->second.first, it->second.second});
    }
    out.ald.c_regions.push_back(std::move(r));
  }

  // circle records
  an = bn = 0;
  for (const auto& ci : out.circles) {
    if (ci.type_a) {
      std::string id = "a" + std::to_string(++an);
      out.ald.a_circles.push_back({id, out.region_of_face.at(ci.exterior[0]),
                                   out.region_of_face.at(ci.exterior[1]), ci.alternating});
    } else {
      std::string id = "b" + std::to_string(++bn);
      out.ald.b_circles.push_back({id, out.region_of_face.at(ci.exterior[0]),
                                   out.region_of_face.at(ci.exterior[1]), ci.alternating});
    }
  }

  auto violations = validate(out.ald);
  if (!violations.empty())
    fail(errc::not_flat, "classifier produced inconsistent ALD: " + violations.front().code +
                             " (" + violations.front().detail + ")");
  return out;
}

struct DeplumbedDiagram {
  PlanarDiagram diagram;
  int unbounded_face = 0;  // tracked through the removals
};

// Diagram-level deplumbing: remove every A-circle, reconnecting each pair of
// strands across where the circle was so that the two adjacent C-regions
// stay separate and the three flanking black regions merge.
inline DeplumbedDiagram deplumb_diagram(const PlanarDiagram& d, int unbounded_face = -1) {
  PlanarDiagram cur = d;
  int unb = unbounded_face;
  for (;;) {
    if (cur.crossing_count() == 0) return {cur, 0};
    FaceSet fs = trace_faces(cur);
    if (unb < 0) unb = default_unbounded(cur, fs);
    fs = checkerboard(cur, fs, unb);
    auto circles = analyze_circles(cur, fs, unb);
    const CircleInfo* target = nullptr;
    for (auto& ci : circles)
      if (fs.faces[ci.middle_face].color == FaceColor::black) {
        target = &ci;
        break;
      }
    if (!target) return {cur, unb};

    EdgeIndex idx = EdgeIndex::build(cur);
    // flanking black faces across the cap arcs must be distinct
    auto far_face = [&](EdgeId arc, int near_face) {
      auto pr = idx.at.at(arc);
      int f1 = fs.face_of_half[pr.first], f2 = fs.face_of_half[pr.second];
      return f1 == near_face ? f2 : f1;
    };
    int fl1 = far_face(target->cap_arcs[0], target->cap_faces[0]);
    int fl2 = far_face(target->cap_arcs[1], target->cap_faces[1]);
    require(fl1 != fl2, errc::unsupported_deplumb,
            "A-circle flanking black regions coincide; deplumbing not representable");

    // stubs pair across the arcs flanking the middle face
    std::set<int> xset(target->crossings.begin(), target->crossings.end());
    auto stub_of = [&](int c) -> EdgeId {
      for (int p = 0; p < 4; ++p) {
        EdgeId e = cur.crossings[c][p];
        if (target->arcs.count(e)) continue;
        if (e == target->middle_edges[0] || e == target->middle_edges[1]) continue;
        return e;
      }
      return -1;
    };
    std::map<EdgeId, EdgeId> parent;
    auto find = [&](EdgeId e) {
      while (parent.count(e)) e = parent.at(e);
      return e;
    };
    std::set<EdgeId> merged_stubs;
    int closures = 0;
    for (EdgeId arc : target->middle_arcs) {
      auto pr = idx.at.at(arc);
      EdgeId su = stub_of(half_crossing(pr.first)), sv = stub_of(half_crossing(pr.second));
      require(su >= 0 && sv >= 0, errc::unsupported_deplumb, "missing strand stub at A-circle");
      merged_stubs.insert(su);
      merged_stubs.insert(sv);
      EdgeId u = find(su), v = find(sv);
      if (u == v)
        ++closures;
      else
        parent[std::max(u, v)] = std::min(u, v);
    }

    PlanarDiagram next;
    for (int c = 0; c < cur.crossing_count(); ++c) {
      if (xset.count(c)) continue;
      auto slots = cur.crossings[c];
      for (auto& e : slots) e = find(e);
      next.crossings.push_back(slots);
    }
    for (EdgeId e : cur.circle_marks)
      if (!target->arcs.count(e)) next.circle_marks.insert(find(e));
    // Closed strands with no surviving crossings become free loops; the
    // encircled middle pieces are cut out and discarded.
    if (closures > 0) {
      std::set<EdgeId> surviving;
      for (const auto& x : next.crossings)
        for (EdgeId e : x) surviving.insert(e);
      std::set<EdgeId> closed_roots;
      for (EdgeId s : merged_stubs)
        if (!surviving.count(find(s))) closed_roots.insert(find(s));
      next.free_loops = cur.free_loops + static_cast<int>(closed_roots.size());
      require(next.crossings.empty() || closed_roots.empty(), errc::unsupported_deplumb,
              "deplumbing disconnects the diagram");
    } else {
      next.free_loops = cur.free_loops;
    }
    if (!next.crossings.empty()) {
      try {
        validate(next);
      } catch (const error&) {
        fail(errc::unsupported_deplumb, "deplumbing disconnects the diagram");
      }
      // track the unbounded face across the surgery: pick a surviving half
      // of the old unbounded face
      int new_unb = -1;
      FaceSet nfs = trace_faces(next);
      for (Half h : fs.faces[unb].boundary) {
        int c = half_crossing(h);
        if (xset.count(c)) continue;
        int shift = 0;
        for (int xc : xset)
          if (xc < c) ++shift;
        new_unb = nfs.face_of_half[make_half(c - shift, half_pos(h))];
        break;
      }
      require(new_unb >= 0, errc::unsupported_deplumb,
              "unbounded region lost track during deplumbing");
      unb = new_unb;
    } else {
      unb = 0;
    }
    cur = std::move(next);
  }
}

}  // namespace augfiber
