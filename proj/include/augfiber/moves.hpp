#pragma once

// ALD transformations: deplumbing A-circles (Murasugi-sum bookkeeping),
// ±1 Dehn-filling bookkeeping on A- and B-circles, the locally-alternating
// construction and its lift back to a tree-graph flat augmented link.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "augfiber/ald.hpp"
#include "augfiber/fiber_graph.hpp"
#include "augfiber/stallings.hpp"

namespace augfiber {

struct HopfRecord {
  std::string a_circle;
  int count = 2;                       // bands deplumbed
  std::pair<int, int> handedness{+1, -1};  // flat pair; alternating circles give (+1,+1)
  int chi_delta = +2;                  // chi gain of the deplumbed surface
};

struct DeplumbResult {
  Ald ald;
  std::vector<HopfRecord> records;
};

// Remove every A-circle; C-regions, B-circles and their incidences are
// untouched, so G_B is preserved on the nose.
inline DeplumbResult deplumb(const Ald& ald) {
  DeplumbResult out;
  for (const auto& a : ald.a_circles) {
    HopfRecord rec;
    rec.a_circle = a.id;
    rec.count = 2;
    rec.handedness = a.alternating ? std::pair{+1, +1} : std::pair{+1, -1};
    rec.chi_delta = +2;
    out.records.push_back(rec);
  }
  out.ald = strip_a_circles(ald);
  return out;
}

struct AFillRecord {
  Ald ald;          // the A-circle removed
  std::string circle;
  int sign = +1;
  int bands = 1;    // a single Hopf band is plumbed
  int chi_delta = -1;  // vs the deplumbed surface
};

// ±1 filling on an A-circle: the circle disappears and a single Hopf band
// is plumbed on; fiberedness is preserved in both directions.
inline AFillRecord fill_a_circle(const Ald& ald, const std::string& id, int sign) {
  require(sign == 1 || sign == -1, errc::bad_input, "filling sign must be +1 or -1");
  require(ald.a_circle(id) != nullptr, errc::not_a_circle_of_type_a,
          "circle " + id + " is not an A-circle");
  AFillRecord rec;
  rec.circle = id;
  rec.sign = sign;
  Ald next = ald;
  next.a_circles.erase(std::remove_if(next.a_circles.begin(), next.a_circles.end(),
                                      [&](const ACircle& a) { return a.id == id; }),
                       next.a_circles.end());
  for (auto& r : next.c_regions)
    r.boundary.erase(std::remove_if(r.boundary.begin(), r.boundary.end(),
                                    [&](const Incidence& inc) { return inc.circle == id; }),
                     r.boundary.end());
  rec.ald = std::move(next);
  return rec;
}

// ±1 filling on B-circles of a tree-graph flat ALD: each filled circle is
// replaced by a crossing pair joining its two C-regions; the graph of the
// result is the same tree, leveled from C0.
inline FilledStructure fill_b_circles(const Ald& ald, const std::vector<std::string>& ids,
                                      const std::vector<int>& signs) {
  require(ald.a_circles.empty(), errc::bad_input, "deplumb A-circles before filling B-circles");
  require(ids.size() == signs.size(), errc::bad_input, "one sign per filled circle");
  for (const auto& id : ids) {
    const BCircle* b = ald.b_circle(id);
    require(b != nullptr, errc::bad_input, "unknown B-circle " + id);
    require(!b->alternating, errc::not_flat, "cannot fill a locally alternating circle");
  }
  for (int s : signs) require(s == 1 || s == -1, errc::bad_input, "filling sign must be +1 or -1");

  FiberGraph g = build_gb(ald);
  Verdict v = is_tree(g);
  require(v.outcome == Outcome::fibered, errc::not_a_tree,
          "G_B must be a tree to fill B-circles");

  FilledStructure fs;
  fs.origin = ald;
  for (size_t i = 0; i < ids.size(); ++i) fs.filled.push_back({ids[i], signs[i]});
  std::set<std::string> filled_set(ids.begin(), ids.end());
  for (const auto& b : ald.b_circles)
    if (!filled_set.count(b.id)) fs.remaining.push_back(b.id);
  fs.chi_delta = static_cast<int>(ids.size());

  // leveled tree from C0
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> adj;
  for (const auto& b : ald.b_circles) {
    adj[b.m_side].push_back({b.n_side, b.id});
    adj[b.n_side].push_back({b.m_side, b.id});
  }
  fs.level[ald.unbounded] = 0;
  std::vector<std::string> queue{ald.unbounded};
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    const std::string u = queue[qi];
    for (auto& [w, eid] : adj[u]) {
      if (fs.level.count(w)) continue;
      fs.level[w] = fs.level[u] + 1;
      fs.parent[w] = u;
      fs.parent_edge[w] = eid;
      queue.push_back(w);
    }
  }
  // children in each region's cyclic incidence order
  for (const auto& r : ald.c_regions) {
    std::vector<std::pair<std::string, std::string>> kids;
    for (const auto& inc : r.boundary) {
      const BCircle* b = ald.b_circle(inc.circle);
      if (!b) continue;
      const std::string other = inc.side == "m" ? b->n_side : b->m_side;
      if (fs.parent.count(other) && fs.parent.at(other) == r.id && fs.parent_edge.at(other) == b->id) {
        if (std::find(kids.begin(), kids.end(), std::pair{other, b->id}) == kids.end())
          kids.push_back({other, b->id});
      }
    }
    if (!kids.empty()) fs.children[r.id] = kids;
  }
  return fs;
}

// All circles become locally alternating; incidences are untouched.
inline Ald make_locally_alternating(const Ald& ald) {
  Ald out = ald;
  for (auto& b : out.b_circles) b.alternating = true;
  for (auto& a : out.a_circles) a.alternating = true;
  return out;
}

// ---------------------------------------------------------------------------
// lift of a locally alternating ALD to a tree-graph flat ALD

struct ProgramStep {
  std::string circle;  // the circle being filled on replay
  char kind = 'B';     // 'A' | 'B' | 'P' (pair)
  int sign = +1;
  // replay data
  std::string partner;      // P: circle whose style flips back to alternating
  std::string leaf_region;  // P: leaf C-region to drop
  std::string via_region;   // A: subdivision vertex to dissolve
  std::string merge_edge;   // A: the truncated edge to extend
  std::string result_circle;  // A: id of the restored circle
};

using FillingProgram = std::vector<ProgramStep>;

struct LiftResult {
  Ald lifted;  // flat, tree graph
  FillingProgram program;
};

namespace detail {

inline void add_incidence(Ald& ald, const std::string& region, const std::string& circle,
                          const std::string& side) {
  CRegion* r = ald.region(region);
  require(r != nullptr, errc::bad_input, "missing region " + region);
  r->boundary.push_back({circle, side});
}

inline void drop_incidences(Ald& ald, const std::string& circle) {
  for (auto& r : ald.c_regions)
    r.boundary.erase(std::remove_if(r.boundary.begin(), r.boundary.end(),
                                    [&](const Incidence& i) { return i.circle == circle; }),
                     r.boundary.end());
}

}  // namespace detail

// Lift per the three-step construction: break every fundamental cycle by
// truncating an edge at a new leaf vertex (undone by an A-circle filling),
// bridge components through an A-circle by a new flat B-circle (undone by a
// B-circle filling), then replace every remaining alternating circle by a
// flat one plus a flat leaf circle (undone by a pair filling).
inline LiftResult lift_alternating(const Ald& ald_a, int default_sign = +1) {
  {
    auto violations = validate(ald_a);
    require(violations.empty(), errc::bad_input,
            "invalid ALD: " + (violations.empty() ? "" : violations.front().code));
  }
  bool all_alt = !ald_a.b_circles.empty() || !ald_a.a_circles.empty();
  for (const auto& b : ald_a.b_circles) all_alt = all_alt && b.alternating;
  for (const auto& a : ald_a.a_circles) all_alt = all_alt && a.alternating;
  require(all_alt || (ald_a.b_circles.empty() && ald_a.a_circles.empty()),
          errc::not_locally_alternating, "input must have all circles locally alternating");

  Ald w = ald_a;
  FillingProgram steps_a, steps_b, steps_p;

  // Step 1: eliminate nontrivial loops, lexicographically smallest edge on
  // the lexicographically smallest fundamental cycle first.
  for (;;) {
    Verdict v = is_tree(build_gb(w));
    const CycleCert* best = nullptr;
    for (const auto& cert : v.certificates)
      if (const auto* c = std::get_if<CycleCert>(&cert)) {
        if (!best) {
          best = c;
          continue;
        }
        auto se = [](const CycleCert& cc) {
          auto e = cc.edges;
          std::sort(e.begin(), e.end());
          return e;
        };
        if (se(*c) < se(*best)) best = c;
      }
    if (!best) break;
    std::string eid = *std::min_element(best->edges.begin(), best->edges.end());
    BCircle broken = *w.b_circle(eid);
    std::string v3 = eid + ":v", e1 = eid + ":1", alpha = eid + ":a";
    require(w.region(v3) == nullptr && w.b_circle(e1) == nullptr && w.a_circle(alpha) == nullptr,
            errc::bad_input, "reserved id collision during lift");
    // truncate: eid (C1-C2) becomes e1 (C1-v3); the A-circle alpha sits
    // between v3 and the lost endpoint C2
    detail::drop_incidences(w, eid);
    w.b_circles.erase(std::remove_if(w.b_circles.begin(), w.b_circles.end(),
                                     [&](const BCircle& b) { return b.id == eid; }),
                      w.b_circles.end());
    w.c_regions.push_back({v3, {}});
    w.b_circles.push_back({e1, broken.m_side, v3, broken.alternating});
    detail::add_incidence(w, broken.m_side, e1, "m");
    detail::add_incidence(w, v3, e1, "n");
    w.a_circles.push_back({alpha, v3, broken.n_side, false});
    detail::add_incidence(w, v3, alpha, "1");
    detail::add_incidence(w, broken.n_side, alpha, "2");

    ProgramStep st;
    st.circle = alpha;
    st.kind = 'A';
    st.sign = default_sign;
    st.via_region = v3;
    st.merge_edge = e1;
    st.result_circle = eid;
    steps_a.push_back(st);
  }

  // Step 2: join components through bridging A-circles.
  for (;;) {
    Verdict v = is_tree(build_gb(w));
    const DisconnectedCert* dis = nullptr;
    for (const auto& cert : v.certificates)
      if (const auto* dc = std::get_if<DisconnectedCert>(&cert)) dis = dc;
    if (!dis) break;
    std::map<std::string, int> comp_of;
    for (size_t i = 0; i < dis->components.size(); ++i)
      for (const auto& vert : dis->components[i]) comp_of[vert] = static_cast<int>(i);
    const ACircle* bridge = nullptr;
    for (const auto& a : w.a_circles) {
      if (comp_of.at(a.side1) == comp_of.at(a.side2)) continue;
      if (!bridge || a.id < bridge->id) bridge = &a;
    }
    require(bridge != nullptr, errc::no_bridging_a_circle,
            "disconnected G_B without an A-circle joining two components");
    std::string estar = bridge->id + ":bridge";
    require(w.b_circle(estar) == nullptr, errc::bad_input, "reserved id collision during lift");
    w.b_circles.push_back({estar, bridge->side1, bridge->side2, false});
    detail::add_incidence(w, bridge->side1, estar, "m");
    detail::add_incidence(w, bridge->side2, estar, "n");

    ProgramStep st;
    st.circle = estar;
    st.kind = 'B';
    st.sign = default_sign;
    steps_b.push_back(st);
  }

  // Final phase: replace every alternating circle by a flat one plus a flat
  // leaf circle.
  std::vector<std::string> alt_b, alt_a;
  for (const auto& b : w.b_circles)
    if (b.alternating) alt_b.push_back(b.id);
  for (const auto& a : w.a_circles)
    if (a.alternating) alt_a.push_back(a.id);
  std::sort(alt_b.begin(), alt_b.end());
  std::sort(alt_a.begin(), alt_a.end());
  auto add_pair = [&](const std::string& beta, const std::string& attach) {
    std::string leaf = beta + ":leaf", lambda = beta + ":pair";
    require(w.region(leaf) == nullptr && w.b_circle(lambda) == nullptr, errc::bad_input,
            "reserved id collision during lift");
    w.c_regions.push_back({leaf, {}});
    w.b_circles.push_back({lambda, attach, leaf, false});
    detail::add_incidence(w, attach, lambda, "m");
    detail::add_incidence(w, leaf, lambda, "n");
    ProgramStep st;
    st.circle = lambda;
    st.kind = 'P';
    st.sign = default_sign;
    st.partner = beta;
    st.leaf_region = leaf;
    steps_p.push_back(st);
  };
  for (const auto& id : alt_b) {
    BCircle* b = nullptr;
    for (auto& bc : w.b_circles)
      if (bc.id == id) b = &bc;
    b->alternating = false;
    add_pair(id, b->m_side);
  }
  for (const auto& id : alt_a) {
    ACircle* a = nullptr;
    for (auto& ac : w.a_circles)
      if (ac.id == id) a = &ac;
    a->alternating = false;
    add_pair(id, a->side1);
  }

  LiftResult out;
  out.lifted = std::move(w);
  // replay order: pairs first, then bridges, then cycle merges
  out.program = steps_p;
  out.program.insert(out.program.end(), steps_b.begin(), steps_b.end());
  out.program.insert(out.program.end(), steps_a.begin(), steps_a.end());

  Verdict final_check = is_tree(build_gb(out.lifted));
  require(final_check.outcome == Outcome::fibered, errc::oracle_inconclusive,
          "lift did not produce a tree");
  require(!out.lifted.any_alternating(), errc::oracle_inconclusive,
          "lift left an alternating circle");
  return out;
}

// Apply a filling program at the bookkeeping level.
inline Ald replay_program(const Ald& lifted, const FillingProgram& program) {
  Ald w = lifted;
  for (const auto& st : program) {
    if (st.kind == 'P') {
      const BCircle* lam = w.b_circle(st.circle);
      require(lam != nullptr, errc::bad_input, "pair step references missing circle " + st.circle);
      std::string leaf = st.leaf_region.empty() ? lam->n_side : st.leaf_region;
      detail::drop_incidences(w, st.circle);
      w.b_circles.erase(std::remove_if(w.b_circles.begin(), w.b_circles.end(),
                                       [&](const BCircle& b) { return b.id == st.circle; }),
                        w.b_circles.end());
      w.c_regions.erase(std::remove_if(w.c_regions.begin(), w.c_regions.end(),
                                       [&](const CRegion& r) { return r.id == leaf; }),
                        w.c_regions.end());
      bool flipped = false;
      for (auto& b : w.b_circles)
        if (b.id == st.partner) {
          b.alternating = true;
          flipped = true;
        }
      for (auto& a : w.a_circles)
        if (a.id == st.partner) {
          a.alternating = true;
          flipped = true;
        }
      require(flipped, errc::bad_input, "pair step references missing partner " + st.partner);
    } else if (st.kind == 'B') {
      require(w.b_circle(st.circle) != nullptr, errc::bad_input,
              "B step references missing circle " + st.circle);
      detail::drop_incidences(w, st.circle);
      w.b_circles.erase(std::remove_if(w.b_circles.begin(), w.b_circles.end(),
                                       [&](const BCircle& b) { return b.id == st.circle; }),
                        w.b_circles.end());
    } else if (st.kind == 'A') {
      const ACircle* alpha = w.a_circle(st.circle);
      require(alpha != nullptr, errc::bad_input, "A step references missing circle " + st.circle);
      std::string v3 = st.via_region, far = alpha->side1 == v3 ? alpha->side2 : alpha->side1;
      BCircle* e1 = nullptr;
      for (auto& b : w.b_circles)
        if (b.id == st.merge_edge) e1 = &b;
      require(e1 != nullptr, errc::bad_input, "A step references missing edge " + st.merge_edge);
      std::string alpha_id = st.circle;
      detail::drop_incidences(w, alpha_id);
      w.a_circles.erase(std::remove_if(w.a_circles.begin(), w.a_circles.end(),
                                       [&](const ACircle& a) { return a.id == alpha_id; }),
                        w.a_circles.end());
      // extend e1 (C1 - v3) to the restored circle (C1 - far)
      std::string near = e1->m_side == v3 ? e1->n_side : e1->m_side;
      std::string near_side = e1->m_side == v3 ? "n" : "m";
      bool alt = e1->alternating;
      detail::drop_incidences(w, e1->id);
      std::string old_id = e1->id;
      w.b_circles.erase(std::remove_if(w.b_circles.begin(), w.b_circles.end(),
                                       [&](const BCircle& b) { return b.id == old_id; }),
                        w.b_circles.end());
      w.c_regions.erase(std::remove_if(w.c_regions.begin(), w.c_regions.end(),
                                       [&](const CRegion& r) { return r.id == v3; }),
                        w.c_regions.end());
      if (near_side == "n")
        w.b_circles.push_back({st.result_circle, far, near, alt});
      else
        w.b_circles.push_back({st.result_circle, near, far, alt});
      detail::add_incidence(w, near, st.result_circle, near_side);
      detail::add_incidence(w, far, st.result_circle, near_side == "m" ? "n" : "m");
    } else {
      fail(errc::bad_input, std::string("unknown program step kind '") + st.kind + "'");
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const FillingProgram& program) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& st : program) {
    nlohmann::json js;
    js["circle"] = st.circle;
    js["kind"] = st.kind == 'A' ? "A" : st.kind == 'B' ? "B" : "pair";
    js["sign"] = st.sign;
    if (!st.partner.empty()) js["partner"] = st.partner;
    if (!st.leaf_region.empty()) js["leaf_region"] = st.leaf_region;
    if (!st.via_region.empty()) js["via_region"] = st.via_region;
    if (!st.merge_edge.empty()) js["merge_edge"] = st.merge_edge;
    if (!st.result_circle.empty()) js["result_circle"] = st.result_circle;
    j.push_back(js);
  }
  return j;
}

inline FillingProgram program_from_json(const nlohmann::json& j) {
  FillingProgram p;
  try {
    for (const auto& js : j) {
      ProgramStep st;
      st.circle = js.at("circle").get<std::string>();
      std::string k = js.at("kind").get<std::string>();
      st.kind = k == "A" ? 'A' : k == "B" ? 'B' : 'P';
      if (k != "A" && k != "B" && k != "pair") fail(errc::bad_input, "bad step kind " + k);
      st.sign = js.value("sign", 1);
      st.partner = js.value("partner", "");
      st.leaf_region = js.value("leaf_region", "");
      st.via_region = js.value("via_region", "");
      st.merge_edge = js.value("merge_edge", "");
      st.result_circle = js.value("result_circle", "");
      p.push_back(st);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(errc::bad_input, std::string("bad program JSON: ") + e.what());
  }
  return p;
}

}  // namespace augfiber
