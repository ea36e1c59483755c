#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "augfiber/fiber_graph.hpp"
#include "augfiber/random_gen.hpp"

using namespace augfiber;

namespace {

Ald load(const std::string& name) {
  std::ifstream in(std::string(AUGFIBER_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return ald_from_json(nlohmann::json::parse(os.str()));
}

const SpanningTreeCert* tree_cert(const Verdict& v) {
  for (const auto& c : v.certificates)
    if (const auto* t = std::get_if<SpanningTreeCert>(&c)) return t;
  return nullptr;
}
const DisconnectedCert* disc_cert(const Verdict& v) {
  for (const auto& c : v.certificates)
    if (const auto* t = std::get_if<DisconnectedCert>(&c)) return t;
  return nullptr;
}
const CycleCert* cycle_cert(const Verdict& v) {
  for (const auto& c : v.certificates)
    if (const auto* t = std::get_if<CycleCert>(&c)) return t;
  return nullptr;
}

}  // namespace

TEST_CASE("single edge graph") {
  Ald ald = load("path_tree.json");
  FiberGraph g = build_gb(ald);
  CHECK(g.vertices.size() == 3);
  CHECK(g.edges.size() == 2);
}

TEST_CASE("self-loop from a split configuration") {
  Ald ald;
  ald.c_regions.push_back({"c0", {{"b1", "m"}, {"b1", "n"}}});
  ald.b_circles.push_back({"b1", "c0", "c0", false});
  ald.unbounded = "c0";
  REQUIRE(validate(ald).empty());
  FiberGraph g = build_gb(ald);
  REQUIRE(g.edges.size() == 1);
  CHECK(g.edges[0].u == g.edges[0].v);
  Verdict v = is_tree(g);
  CHECK(v.outcome == Outcome::not_fibered);
  REQUIRE(cycle_cert(v) != nullptr);
  CHECK(cycle_cert(v)->edges == std::vector<std::string>{"b1"});
}

TEST_CASE("A-circles contribute no edges") {
  Ald ald = load("path_tree.json");
  ald.a_circles.push_back({"a1", "c0", "c2", false});
  ald.region("c0")->boundary.push_back({"a1", "1"});
  ald.region("c2")->boundary.push_back({"a1", "2"});
  FiberGraph g = build_gb(ald);
  CHECK(g.edges.size() == 2);
  CHECK(analyze(ald).outcome == Outcome::fibered);
}

TEST_CASE("path is fibered with a spanning tree certificate") {
  Verdict v = analyze(load("path_tree.json"));
  REQUIRE(v.outcome == Outcome::fibered);
  const auto* cert = tree_cert(v);
  REQUIRE(cert != nullptr);
  CHECK(cert->edges == std::vector<std::string>{"b1", "b2"});
}

TEST_CASE("triangle is not fibered with a cycle certificate") {
  Verdict v = analyze(load("triangle.json"));
  REQUIRE(v.outcome == Outcome::not_fibered);
  const auto* cyc = cycle_cert(v);
  REQUIRE(cyc != nullptr);
  std::multiset<std::string> edges(cyc->edges.begin(), cyc->edges.end());
  CHECK(edges == std::multiset<std::string>{"b1", "b2", "b3"});
}

TEST_CASE("disconnected graph certificate lists components") {
  Ald ald;
  ald.c_regions.push_back({"c0", {}});
  ald.c_regions.push_back({"c1", {{"b1", "m"}}});
  ald.c_regions.push_back({"c2", {{"b1", "n"}}});
  ald.b_circles.push_back({"b1", "c1", "c2", false});
  ald.unbounded = "c0";
  REQUIRE(validate(ald).empty());
  Verdict v = analyze(ald);
  REQUIRE(v.outcome == Outcome::not_fibered);
  const auto* dc = disc_cert(v);
  REQUIRE(dc != nullptr);
  REQUIRE(dc->components.size() == 2);
}

TEST_CASE("both defects are certified together") {
  Ald ald;
  ald.c_regions.push_back({"c0", {}});
  ald.c_regions.push_back({"c1", {{"b1", "m"}, {"b1", "n"}}});
  ald.b_circles.push_back({"b1", "c1", "c1", false});
  ald.unbounded = "c0";
  REQUIRE(validate(ald).empty());
  Verdict v = analyze(ald);
  REQUIRE(v.outcome == Outcome::not_fibered);
  CHECK(disc_cert(v) != nullptr);
  CHECK(cycle_cert(v) != nullptr);
}

TEST_CASE("fibered implies edge count is vertex count minus one") {
  for (unsigned seed = 1; seed <= 60; ++seed) {
    Ald ald = random_ald(seed, 9);
    Verdict v = analyze(ald);
    if (v.outcome == Outcome::fibered)
      CHECK(ald.b_circles.size() == ald.c_regions.size() - 1);
  }
}

TEST_CASE("alternating circles make analyze inapplicable") {
  Ald ald = load("path_tree.json");
  ald.b_circles[0].alternating = true;
  Verdict v = analyze(ald);
  CHECK(v.outcome == Outcome::inapplicable);
}

TEST_CASE("invalid ALD is inapplicable with a reason") {
  Ald ald = load("path_tree.json");
  ald.b_circles[0].n_side = "cX";
  Verdict v = analyze(ald);
  REQUIRE(v.outcome == Outcome::inapplicable);
  REQUIRE(v.certificates.size() == 1);
  CHECK(std::holds_alternative<ReasonCert>(v.certificates[0]));
}

TEST_CASE("verdict is invariant under relabeling, role swaps and A-circles") {
  for (unsigned seed = 1; seed <= 40; ++seed) {
    Ald ald = random_ald(seed, 8);
    Outcome base = analyze(ald).outcome;

    Ald relabeled = ald;
    auto rename = [](std::string& s) {
      if (!s.empty() && s != "c0") s = s.substr(0, 1) + "x" + s.substr(1);
    };
    for (auto& r : relabeled.c_regions) {
      rename(r.id);
      for (auto& inc : r.boundary) rename(inc.circle);
    }
    for (auto& b : relabeled.b_circles) {
      rename(b.id);
      rename(b.m_side);
      rename(b.n_side);
    }
    for (auto& a : relabeled.a_circles) {
      rename(a.id);
      rename(a.side1);
      rename(a.side2);
    }
    CHECK(analyze(relabeled).outcome == base);

    Ald swapped = ald;
    if (!swapped.b_circles.empty()) {
      auto& b = swapped.b_circles[seed % swapped.b_circles.size()];
      std::swap(b.m_side, b.n_side);
      for (auto& r : swapped.c_regions)
        for (auto& inc : r.boundary)
          if (inc.circle == b.id) inc.side = inc.side == "m" ? "n" : "m";
      CHECK(analyze(swapped).outcome == base);
    }

    Ald with_a = ald;
    with_a.a_circles.push_back({"a99", "c0", "c0", false});
    with_a.region("c0")->boundary.push_back({"a99", "1"});
    with_a.region("c0")->boundary.push_back({"a99", "2"});
    CHECK(analyze(with_a).outcome == base);

    Ald without_a = strip_a_circles(ald);
    CHECK(analyze(without_a).outcome == base);
  }
}

TEST_CASE("DOT export mentions every vertex and edge") {
  Ald ald = load("triangle.json");
  std::string dot = to_dot(build_gb(ald));
  for (const char* s : {"c0", "c1", "c2", "b1", "b2", "b3"})
    CHECK(dot.find(s) != std::string::npos);
}
