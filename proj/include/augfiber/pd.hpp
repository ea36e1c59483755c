#pragma once

// Planar diagram core: PD-code parsing, face tracing via the rotation
// system, checkerboard coloring and black-surface statistics.
//
// A diagram is a 4-valent map on the sphere.  Each crossing has four
// half-edge slots listed counter-clockwise, slot 0 holding the incoming
// under-strand.  An edge label must appear on exactly two slots.  Faces
// are the orbits of h -> rotate(mate(h)); a half-edge (c,p) lies on the
// face occupying the corner between slots p-1 and p of crossing c.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "augfiber/errors.hpp"

namespace augfiber {

using EdgeId = int;

// Half-edge handle: 4*crossing + slot position.
using Half = int;

inline int half_crossing(Half h) { return h / 4; }
inline int half_pos(Half h) { return h % 4; }
inline Half make_half(int crossing, int pos) { return 4 * crossing + pos; }
inline Half rotate(Half h, int by = 1) { return 4 * half_crossing(h) + ((half_pos(h) + by) % 4 + 4) % 4; }

struct PlanarDiagram {
  // crossings[c][p] = edge label at slot p of crossing c (ccw, slot 0 = incoming under).
  std::vector<std::array<EdgeId, 4>> crossings;
  // Crossingless unknot components, all lying side by side in the unbounded
  // region.  Only diagrams without crossings may carry them.
  int free_loops = 0;
  // One representative edge label per crossing-circle component.
  std::set<EdgeId> circle_marks;

  int crossing_count() const { return static_cast<int>(crossings.size()); }
  int edge_count() const { return 2 * crossing_count(); }
  EdgeId edge_at(Half h) const { return crossings[half_crossing(h)][half_pos(h)]; }

  EdgeId max_label() const {
    EdgeId m = -1;
    for (const auto& x : crossings)
      for (EdgeId e : x) m = std::max(m, e);
    return m;
  }
};

// Pairing of the two slot occurrences of every edge.
struct EdgeIndex {
  std::map<EdgeId, std::pair<Half, Half>> at;

  static EdgeIndex build(const PlanarDiagram& d) {
    std::map<EdgeId, std::vector<Half>> occ;
    for (int c = 0; c < d.crossing_count(); ++c)
      for (int p = 0; p < 4; ++p) occ[d.crossings[c][p]].push_back(make_half(c, p));
    EdgeIndex idx;
    for (auto& [e, hs] : occ) {
      if (hs.size() == 1)
        fail(errc::non_closing, "edge " + std::to_string(e) + " appears only once");
      if (hs.size() > 2)
        fail(errc::malformed_code,
             "edge " + std::to_string(e) + " appears " + std::to_string(hs.size()) + " times");
      idx.at[e] = {hs[0], hs[1]};
    }
    return idx;
  }

  Half mate(const PlanarDiagram& d, Half h) const {
    const auto& pr = at.at(d.edge_at(h));
    return pr.first == h ? pr.second : pr.first;
  }
};

enum class FaceColor { unset, white, black };

struct Face {
  int id = -1;
  std::vector<Half> boundary;  // cyclic orbit
  FaceColor color = FaceColor::unset;
  bool unbounded = false;
  int degree() const { return static_cast<int>(boundary.size()); }
};

struct FaceSet {
  std::vector<Face> faces;
  std::vector<int> face_of_half;  // indexed by Half; empty for crossingless diagrams

  const Face& face_of(Half h) const { return faces[face_of_half[h]]; }
  int unbounded_id() const {
    for (const auto& f : faces)
      if (f.unbounded) return f.id;
    return -1;
  }
};

// ---------------------------------------------------------------------------
// parsing

namespace detail {

inline std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace detail

inline void validate(const PlanarDiagram& d);

// Text format, one item per line:
//   X(a,b,c,d)   crossing; edge labels ccw starting at the incoming under-strand
//   circle N     the component through edge N is a crossing circle
//   loop         one crossingless unknot component (crossingless diagrams only)
//   # ...        comment
inline PlanarDiagram parse_pd(const std::string& text) {
  PlanarDiagram d;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = detail::strip(line);
    if (s.empty() || s[0] == '#') continue;
    auto where = [&] { return " (line " + std::to_string(lineno) + ")"; };
    if (s == "loop") {
      d.free_loops++;
      continue;
    }
    if (s.rfind("circle", 0) == 0) {
      std::istringstream ls(s.substr(6));
      EdgeId e;
      if (!(ls >> e)) fail(errc::malformed_code, "bad circle line" + where());
      d.circle_marks.insert(e);
      continue;
    }
    if (s[0] == 'X') {
      size_t open = s.find('('), close = s.rfind(')');
      if (open == std::string::npos || close == std::string::npos || close < open)
        fail(errc::malformed_code, "bad crossing syntax" + where());
      std::string body = s.substr(open + 1, close - open - 1);
      for (char& ch : body)
        if (ch == ',') ch = ' ';
      std::istringstream ls(body);
      std::array<EdgeId, 4> slots{};
      for (int i = 0; i < 4; ++i) {
        if (!(ls >> slots[i]) || slots[i] < 0)
          fail(errc::malformed_code, "expected four edge labels" + where());
      }
      EdgeId trailing;
      if (ls >> trailing) fail(errc::malformed_code, "too many labels" + where());
      d.crossings.push_back(slots);
      continue;
    }
    fail(errc::malformed_code, "unrecognized line" + where());
  }
  if (d.free_loops > 0 && !d.crossings.empty())
    fail(errc::malformed_code, "loop lines are only allowed in crossingless diagrams");
  if (d.crossings.empty() && d.free_loops == 0 && d.circle_marks.empty())
    return d;  // empty diagram
  validate(d);
  return d;
}

inline std::string serialize_pd(const PlanarDiagram& d) {
  std::ostringstream out;
  for (const auto& x : d.crossings)
    out << "X(" << x[0] << "," << x[1] << "," << x[2] << "," << x[3] << ")\n";
  for (EdgeId e : d.circle_marks) out << "circle " << e << "\n";
  for (int i = 0; i < d.free_loops; ++i) out << "loop\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// faces

inline FaceSet trace_faces(const PlanarDiagram& d) {
  FaceSet fs;
  if (d.crossing_count() == 0) {
    // k side-by-side loops: the outside plus one disk per loop.
    for (int i = 0; i <= d.free_loops; ++i) {
      Face f;
      f.id = i;
      fs.faces.push_back(f);
    }
    if (d.free_loops == 0 && !fs.faces.empty()) fs.faces.resize(1);
    return fs;
  }
  EdgeIndex idx = EdgeIndex::build(d);
  int n = 4 * d.crossing_count();
  fs.face_of_half.assign(n, -1);
  for (Half h0 = 0; h0 < n; ++h0) {
    if (fs.face_of_half[h0] >= 0) continue;
    Face f;
    f.id = static_cast<int>(fs.faces.size());
    Half h = h0;
    do {
      fs.face_of_half[h] = f.id;
      f.boundary.push_back(h);
      h = rotate(idx.mate(d, h));
    } while (h != h0);
    fs.faces.push_back(std::move(f));
  }
  return fs;
}

inline void validate(const PlanarDiagram& d) {
  if (d.crossing_count() == 0) return;
  FaceSet fs = trace_faces(d);
  int v = d.crossing_count(), e = d.edge_count(), f = static_cast<int>(fs.faces.size());
  if (v - e + f != 2)
    fail(errc::not_sphere, "V-E+F = " + std::to_string(v - e + f) +
                               "; diagram is disconnected or not planar");
  EdgeIndex idx = EdgeIndex::build(d);
  for (EdgeId e2 : d.circle_marks)
    if (!idx.at.count(e2))
      fail(errc::malformed_code, "circle tag references missing edge " + std::to_string(e2));
}

// Default unbounded face: the one at the corner clockwise of the incoming
// under-strand of the first crossing.
inline int default_unbounded(const PlanarDiagram& d, const FaceSet& fs) {
  if (d.crossing_count() == 0) return 0;
  return fs.face_of_half[make_half(0, 0)];
}

inline FaceSet checkerboard(const PlanarDiagram& d, FaceSet fs, int unbounded_id,
                            FaceColor unbounded_color = FaceColor::white) {
  require(unbounded_id >= 0 && unbounded_id < static_cast<int>(fs.faces.size()),
          errc::bad_input, "unbounded face id out of range");
  for (auto& f : fs.faces) {
    f.color = FaceColor::unset;
    f.unbounded = false;
  }
  fs.faces[unbounded_id].unbounded = true;
  if (d.crossing_count() == 0) {
    for (auto& f : fs.faces)
      f.color = (f.id == unbounded_id) ? unbounded_color
                : (unbounded_color == FaceColor::white ? FaceColor::black : FaceColor::white);
    return fs;
  }
  EdgeIndex idx = EdgeIndex::build(d);
  std::vector<int> stack{unbounded_id};
  fs.faces[unbounded_id].color = unbounded_color;
  while (!stack.empty()) {
    int fid = stack.back();
    stack.pop_back();
    FaceColor next = fs.faces[fid].color == FaceColor::white ? FaceColor::black : FaceColor::white;
    for (Half h : fs.faces[fid].boundary) {
      int g = fs.face_of_half[idx.mate(d, h)];
      if (fs.faces[g].color == FaceColor::unset) {
        fs.faces[g].color = next;
        stack.push_back(g);
      } else if (fs.faces[g].color != next) {
        fail(errc::not_two_colorable, "face adjacency graph is not bipartite");
      }
    }
  }
  for (const auto& f : fs.faces)
    if (f.color == FaceColor::unset)
      fail(errc::not_two_colorable, "unreached face in coloring");
  return fs;
}

// ---------------------------------------------------------------------------
// link components

struct Components {
  std::vector<int> comp_of_edge_slot;  // indexed by Half: component id of the strand
  int count = 0;
  std::map<EdgeId, int> comp_of_edge;
  std::set<int> circle_comps;  // component ids tagged as crossing circles
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

}  // namespace detail

inline Components link_components(const PlanarDiagram& d) {
  Components cs;
  int n = 4 * d.crossing_count();
  detail::UnionFind uf(n);
  EdgeIndex idx = EdgeIndex::build(d);
  for (Half h = 0; h < n; ++h) {
    uf.unite(h, idx.mate(d, h));   // same edge
    uf.unite(h, rotate(h, 2));     // strand runs straight through the crossing
  }
  cs.comp_of_edge_slot.assign(n, -1);
  std::map<int, int> renumber;
  for (Half h = 0; h < n; ++h) {
    int r = uf.find(h);
    auto [it, fresh] = renumber.try_emplace(r, static_cast<int>(renumber.size()));
    cs.comp_of_edge_slot[h] = it->second;
    (void)fresh;
  }
  cs.count = static_cast<int>(renumber.size()) + d.free_loops;
  for (auto& [e, pr] : idx.at) cs.comp_of_edge[e] = cs.comp_of_edge_slot[pr.first];
  for (EdgeId e : d.circle_marks) cs.circle_comps.insert(cs.comp_of_edge.at(e));
  return cs;
}

// ---------------------------------------------------------------------------
// black surface statistics

struct SurfaceStats {
  int chi = 0;
  int boundary_count = 0;
  std::optional<int> genus;      // only when connected and orientable
  bool connected = false;
  bool orientable = false;
  std::map<int, int> side_assignment;  // face id -> +1/-1, empty when non-orientable
  std::vector<int> component_chi;      // per black-surface component when disconnected
  int black_faces = 0;
};

// chi = #black faces - #crossings (one disk per black face, one half-twisted
// band per crossing).  Orientable iff black faces can be signed with opposite
// signs across every crossing.
inline SurfaceStats surface_stats(const PlanarDiagram& d, const FaceSet& colored) {
  SurfaceStats st;
  std::vector<int> black_ids;
  for (const auto& f : colored.faces)
    if (f.color == FaceColor::black) black_ids.push_back(f.id);
  st.black_faces = static_cast<int>(black_ids.size());
  st.chi = st.black_faces - d.crossing_count();
  st.boundary_count = d.crossing_count() == 0 ? d.free_loops : link_components(d).count;

  if (d.crossing_count() == 0) {
    st.connected = d.free_loops <= 1;
    st.orientable = true;
    for (int id : black_ids) st.side_assignment[id] = +1;
    if (st.connected && d.free_loops == 1) st.genus = 0;
    for (int id : black_ids) {
      (void)id;
      st.component_chi.push_back(1);
    }
    return st;
  }

  // Crossing-adjacency of black faces: at crossing c the black corners are
  // two opposite corners; a proper 2-signing must alternate across each band.
  std::map<int, int> index_of;
  for (size_t i = 0; i < black_ids.size(); ++i) index_of[black_ids[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> adj(black_ids.size());
  for (int c = 0; c < d.crossing_count(); ++c) {
    std::vector<int> blacks;
    for (int p = 0; p < 4; ++p) {
      int fid = colored.face_of_half[make_half(c, p)];
      if (colored.faces[fid].color == FaceColor::black) blacks.push_back(index_of.at(fid));
    }
    if (blacks.size() != 2) fail(errc::not_two_colorable, "crossing without two black corners");
    adj[blacks[0]].push_back(blacks[1]);
    adj[blacks[1]].push_back(blacks[0]);
  }

  std::vector<int> sign(black_ids.size(), 0);
  int comps = 0;
  bool orientable = true;
  for (size_t s = 0; s < black_ids.size(); ++s) {
    if (sign[s] != 0) continue;
    ++comps;
    int comp_black = 0, comp_cross = 0;
    sign[s] = +1;
    std::vector<size_t> stack{s};
    std::set<size_t> seen{s};
    while (!stack.empty()) {
      size_t u = stack.back();
      stack.pop_back();
      ++comp_black;
      comp_cross += static_cast<int>(adj[u].size());
      for (int vn : adj[u]) {
        size_t v = static_cast<size_t>(vn);
        if (sign[v] == 0) {
          sign[v] = -sign[u];
          stack.push_back(v);
          seen.insert(v);
        } else if (sign[v] == sign[u]) {
          orientable = false;
        }
      }
    }
    st.component_chi.push_back(comp_black - comp_cross / 2);
  }
  st.connected = comps <= 1;
  st.orientable = orientable;
  if (orientable)
    for (size_t i = 0; i < black_ids.size(); ++i) st.side_assignment[black_ids[i]] = sign[i];
  if (st.connected && st.orientable) {
    int g2 = 2 - st.chi - st.boundary_count;
    if (g2 >= 0 && g2 % 2 == 0) st.genus = g2 / 2;
  }
  return st;
}

}  // namespace augfiber
