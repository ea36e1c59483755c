#pragma once

// Abstract combinatorial model of a flat (or locally alternating) augmented
// link: C-regions with cyclic incidence lists, A- and B-circles, and the
// distinguished unbounded region C0.  Hand-written instances are accepted
// after local consistency checks only; no planar-embedding verification.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "augfiber/errors.hpp"

namespace augfiber {

// side labels: "m"/"n" for B-circles, "1"/"2" for A-circles
struct Incidence {
  std::string circle;
  std::string side;
  bool operator==(const Incidence&) const = default;
  auto operator<=>(const Incidence&) const = default;
};

struct CRegion {
  std::string id;
  std::vector<Incidence> boundary;  // cyclic
};

struct BCircle {
  std::string id;
  std::string m_side;
  std::string n_side;
  bool alternating = false;
};

struct ACircle {
  std::string id;
  std::string side1;
  std::string side2;
  bool alternating = false;
};

struct Ald {
  std::vector<CRegion> c_regions;
  std::vector<BCircle> b_circles;
  std::vector<ACircle> a_circles;
  std::string unbounded;

  const CRegion* region(const std::string& id) const {
    for (const auto& r : c_regions)
      if (r.id == id) return &r;
    return nullptr;
  }
  CRegion* region(const std::string& id) {
    for (auto& r : c_regions)
      if (r.id == id) return &r;
    return nullptr;
  }
  const BCircle* b_circle(const std::string& id) const {
    for (const auto& b : b_circles)
      if (b.id == id) return &b;
    return nullptr;
  }
  const ACircle* a_circle(const std::string& id) const {
    for (const auto& a : a_circles)
      if (a.id == id) return &a;
    return nullptr;
  }
  bool any_alternating() const {
    for (const auto& b : b_circles)
      if (b.alternating) return true;
    for (const auto& a : a_circles)
      if (a.alternating) return true;
    return false;
  }
};

struct Violation {
  std::string code;  // DanglingIncidence | InconsistentCyclicOrder | ...
  std::string detail;
};

inline std::vector<Violation> validate(const Ald& ald) {
  std::vector<Violation> out;
  std::set<std::string> regions, circles;
  for (const auto& r : ald.c_regions)
    if (!regions.insert(r.id).second) out.push_back({"DuplicateId", "region " + r.id});
  for (const auto& b : ald.b_circles)
    if (!circles.insert(b.id).second) out.push_back({"DuplicateId", "circle " + b.id});
  for (const auto& a : ald.a_circles)
    if (!circles.insert(a.id).second) out.push_back({"DuplicateId", "circle " + a.id});
  if (ald.c_regions.empty()) {
    out.push_back({"EmptyRegions", "no C-regions"});
    return out;
  }
  if (!regions.count(ald.unbounded))
    out.push_back({"MissingUnbounded", "unbounded region '" + ald.unbounded + "' not present"});

  // Count (circle, side) occurrences over all region boundaries.
  std::map<std::pair<std::string, std::string>, std::map<std::string, int>> seen;
  for (const auto& r : ald.c_regions)
    for (const auto& inc : r.boundary) {
      if (!circles.count(inc.circle))
        out.push_back({"DanglingIncidence", "region " + r.id + " lists unknown circle " + inc.circle});
      seen[{inc.circle, inc.side}][r.id]++;
    }

  auto expect = [&](const std::string& circle, const std::string& side, const std::string& region) {
    if (!regions.count(region)) {
      out.push_back({"DanglingIncidence", "circle " + circle + " references missing region " + region});
      return;
    }
    auto it = seen.find({circle, side});
    bool ok = it != seen.end() && it->second.size() == 1 && it->second.count(region) &&
              it->second.at(region) == 1;
    if (!ok)
      out.push_back({"InconsistentCyclicOrder",
                     "circle " + circle + " side " + side + " must appear exactly once in region " +
                         region + "'s boundary"});
  };
  for (const auto& b : ald.b_circles) {
    expect(b.id, "m", b.m_side);
    expect(b.id, "n", b.n_side);
  }
  for (const auto& a : ald.a_circles) {
    expect(a.id, "1", a.side1);
    expect(a.id, "2", a.side2);
  }
  // No stray incidence sides.
  for (const auto& [key, whom] : seen) {
    const auto& [cid, side] = key;
    bool known = false;
    if (const BCircle* b = ald.b_circle(cid)) known = (side == "m" || side == "n");
    if (const ACircle* a = ald.a_circle(cid)) known = (side == "1" || side == "2");
    if (!known && circles.count(cid))
      out.push_back({"InconsistentCyclicOrder", "circle " + cid + " has unexpected side '" + side + "'"});
    (void)whom;
  }
  return out;
}

struct RankCounts {
  int q = 0;  // B-circles
  int r = 0;  // C-regions minus C0
};

inline RankCounts rank_counts(const Ald& ald) {
  RankCounts rc;
  rc.q = static_cast<int>(ald.b_circles.size());
  rc.r = static_cast<int>(ald.c_regions.size()) - 1;
  return rc;
}

// Drop all A-circles and their incidences; everything else untouched.
inline Ald strip_a_circles(const Ald& ald) {
  Ald out = ald;
  std::set<std::string> a_ids;
  for (const auto& a : out.a_circles) a_ids.insert(a.id);
  out.a_circles.clear();
  for (auto& r : out.c_regions) {
    std::vector<Incidence> kept;
    for (const auto& inc : r.boundary)
      if (!a_ids.count(inc.circle)) kept.push_back(inc);
    r.boundary = std::move(kept);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON (schema per repo docs; ids sorted and cyclic lists rotated to their
// lexicographically least rotation on serialization)

namespace detail {

inline std::vector<Incidence> canonical_rotation(std::vector<Incidence> v) {
  if (v.size() < 2) return v;
  std::vector<Incidence> best = v;
  for (size_t k = 1; k < v.size(); ++k) {
    std::rotate(v.begin(), v.begin() + 1, v.end());
    if (v < best) best = v;
  }
  return best;
}

}  // namespace detail

inline nlohmann::json to_json(const Ald& ald) {
  nlohmann::json j;
  Ald s = ald;
  std::sort(s.c_regions.begin(), s.c_regions.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(s.b_circles.begin(), s.b_circles.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(s.a_circles.begin(), s.a_circles.end(),
            [](const auto& a, const auto& b) { return a.id < b.id; });
  j["c_regions"] = nlohmann::json::array();
  for (const auto& r : s.c_regions) {
    nlohmann::json jr;
    jr["id"] = r.id;
    jr["boundary"] = nlohmann::json::array();
    for (const auto& inc : detail::canonical_rotation(r.boundary))
      jr["boundary"].push_back({{"circle", inc.circle}, {"side", inc.side}});
    j["c_regions"].push_back(jr);
  }
  j["b_circles"] = nlohmann::json::array();
  for (const auto& b : s.b_circles)
    j["b_circles"].push_back({{"id", b.id},
                              {"m_side", b.m_side},
                              {"n_side", b.n_side},
                              {"style", b.alternating ? "alternating" : "flat"}});
  j["a_circles"] = nlohmann::json::array();
  for (const auto& a : s.a_circles)
    j["a_circles"].push_back({{"id", a.id},
                              {"side1", a.side1},
                              {"side2", a.side2},
                              {"style", a.alternating ? "alternating" : "flat"}});
  j["unbounded"] = s.unbounded;
  return j;
}

inline Ald ald_from_json(const nlohmann::json& j) {
  Ald ald;
  try {
    for (const auto& jr : j.at("c_regions")) {
      CRegion r;
      r.id = jr.at("id").get<std::string>();
      if (jr.contains("boundary"))
        for (const auto& ji : jr.at("boundary"))
          r.boundary.push_back({ji.at("circle").get<std::string>(), ji.at("side").get<std::string>()});
      ald.c_regions.push_back(std::move(r));
    }
    auto style = [](const nlohmann::json& je) {
      std::string s = je.value("style", "flat");
      if (s != "flat" && s != "alternating")
        fail(errc::bad_input, "bad style '" + s + "'");
      return s == "alternating";
    };
    if (j.contains("b_circles"))
      for (const auto& jb : j.at("b_circles"))
        ald.b_circles.push_back({jb.at("id").get<std::string>(), jb.at("m_side").get<std::string>(),
                                 jb.at("n_side").get<std::string>(), style(jb)});
    if (j.contains("a_circles"))
      for (const auto& ja : j.at("a_circles"))
        ald.a_circles.push_back({ja.at("id").get<std::string>(), ja.at("side1").get<std::string>(),
                                 ja.at("side2").get<std::string>(), style(ja)});
    ald.unbounded = j.at("unbounded").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    fail(errc::bad_input, std::string("bad ALD JSON: ") + e.what());
  }
  return ald;
}

// Structural equality used by move replays: circles (endpoints, type, style),
// region id set and unbounded marker; cyclic boundary rotations are not
// compared.
inline bool same_structure(const Ald& x, const Ald& y) {
  auto key = [](const Ald& a) {
    std::set<std::string> regions;
    for (const auto& r : a.c_regions) regions.insert(r.id);
    std::set<std::vector<std::string>> circles;
    for (const auto& b : a.b_circles) {
      auto lo = std::min(b.m_side, b.n_side), hi = std::max(b.m_side, b.n_side);
      circles.insert({"B", b.id, lo, hi, b.alternating ? "alt" : "flat"});
    }
    for (const auto& c : a.a_circles) {
      auto lo = std::min(c.side1, c.side2), hi = std::max(c.side1, c.side2);
      circles.insert({"A", c.id, lo, hi, c.alternating ? "alt" : "flat"});
    }
    return std::make_tuple(regions, circles, a.unbounded);
  };
  return key(x) == key(y);
}

}  // namespace augfiber
