#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "augfiber/moves.hpp"
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

Ald path_with_a_circle() {
  Ald ald = load("path_tree.json");
  ald.a_circles.push_back({"a1", "c0", "c2", false});
  ald.region("c0")->boundary.push_back({"a1", "1"});
  ald.region("c2")->boundary.push_back({"a1", "2"});
  return ald;
}

// The worked tree: c0 with children c11 and c12, c2 under c12.
Ald example_tree() {
  Ald ald;
  ald.c_regions.push_back({"c0", {{"e11", "n"}, {"e12", "n"}}});
  ald.c_regions.push_back({"c11", {{"e11", "m"}}});
  ald.c_regions.push_back({"c12", {{"e12", "m"}, {"e2", "n"}}});
  ald.c_regions.push_back({"c2", {{"e2", "m"}}});
  ald.b_circles.push_back({"e11", "c11", "c0", false});
  ald.b_circles.push_back({"e12", "c12", "c0", false});
  ald.b_circles.push_back({"e2", "c2", "c12", false});
  ald.unbounded = "c0";
  return ald;
}

std::string render(const GeneratorMap& gm, const std::string& u) {
  for (size_t i = 0; i < gm.domain.size(); ++i)
    if (gm.domain[i] == u) return gm.images[i].str(&gm.codomain);
  FAIL("no generator " + u);
  return "";
}

bool graphs_equal(const FiberGraph& a, const FiberGraph& b) {
  if (a.vertices != b.vertices || a.edges.size() != b.edges.size()) return false;
  for (size_t i = 0; i < a.edges.size(); ++i)
    if (a.edges[i].id != b.edges[i].id || a.edges[i].u != b.edges[i].u ||
        a.edges[i].v != b.edges[i].v)
      return false;
  return true;
}

}  // namespace

TEST_CASE("deplumb with no A-circles is the identity") {
  Ald ald = load("path_tree.json");
  DeplumbResult res = deplumb(ald);
  CHECK(res.records.empty());
  CHECK(to_json(res.ald) == to_json(ald));
}

TEST_CASE("deplumb strips A-circles, preserves the graph, books chi") {
  Ald ald = path_with_a_circle();
  DeplumbResult res = deplumb(ald);
  REQUIRE(res.records.size() == 1);
  CHECK(res.records[0].count == 2);
  CHECK(res.records[0].chi_delta == 2);
  CHECK(res.ald.a_circles.empty());
  CHECK(graphs_equal(build_gb(res.ald), build_gb(ald)));
}

TEST_CASE("chi ledger is additive over deplumbing") {
  Ald ald = path_with_a_circle();
  ald.a_circles.push_back({"a2", "c1", "c1", false});
  ald.region("c1")->boundary.push_back({"a2", "1"});
  ald.region("c1")->boundary.push_back({"a2", "2"});
  ald.a_circles.push_back({"a3", "c0", "c1", false});
  ald.region("c0")->boundary.push_back({"a3", "1"});
  ald.region("c1")->boundary.push_back({"a3", "2"});
  DeplumbResult res = deplumb(ald);
  REQUIRE(res.records.size() == 3);
  int total = 0;
  for (const auto& r : res.records) total += r.chi_delta;
  CHECK(total == 6);
}

TEST_CASE("fill_a_circle removes the circle and keeps the verdict") {
  Ald ald = path_with_a_circle();
  REQUIRE(analyze(ald).outcome == Outcome::fibered);
  AFillRecord rec = fill_a_circle(ald, "a1", +1);
  CHECK(rec.chi_delta == -1);
  CHECK(rec.bands == 1);
  CHECK(rec.ald.a_circles.empty());
  CHECK(analyze(rec.ald).outcome == Outcome::fibered);
  AFillRecord rec2 = fill_a_circle(ald, "a1", -1);
  CHECK(to_json(rec2.ald) == to_json(rec.ald));
  CHECK(rec2.sign == -1);
}

TEST_CASE("fill_a_circle refuses B-circles") {
  Ald ald = load("path_tree.json");
  try {
    fill_a_circle(ald, "b1", +1);
    FAIL("expected error");
  } catch (const error& e) {
    REQUIRE(e.code() == errc::not_a_circle_of_type_a);
  }
}

TEST_CASE("fill_b_circles refuses non-trees") {
  Ald ald = load("triangle.json");
  try {
    fill_b_circles(ald, {"b1", "b2", "b3"}, {1, 1, 1});
    FAIL("expected error");
  } catch (const error& e) {
    REQUIRE(e.code() == errc::not_a_tree);
  }
}

TEST_CASE("fill_b_circles levels the tree from C0") {
  Ald ald = example_tree();
  FilledStructure fs = fill_b_circles(ald, {"e11", "e12", "e2"}, {1, 1, -1});
  CHECK(fs.remaining.empty());
  CHECK(fs.level.at("c0") == 0);
  CHECK(fs.level.at("c11") == 1);
  CHECK(fs.level.at("c12") == 1);
  CHECK(fs.level.at("c2") == 2);
  CHECK(fs.parent.at("c2") == "c12");
  CHECK(fs.parent_edge.at("c2") == "e2");
  CHECK(fs.chi_delta == 3);
  CHECK(graphs_equal(build_gb(fs.origin), build_gb(ald)));
}

TEST_CASE("worked example: the three filled images") {
  Ald ald = example_tree();
  FilledStructure fs = fill_b_circles(ald, {"e11", "e12", "e2"}, {+1, +1, -1});
  GeneratorMap gm = build_fstar_filled(fs);
  CHECK(render(gm, "c11") == "c11");
  CHECK(render(gm, "c12") == "c12*c2*c12^-1");
  CHECK(render(gm, "c2") == "c12*c2^-1");
  NielsenResult nr = nielsen_generates(gm.images, gm.rank());
  CHECK(nr.generates);
}

TEST_CASE("single edge filled gives a one-letter image") {
  Ald ald;
  ald.c_regions.push_back({"c0", {{"b1", "m"}}});
  ald.c_regions.push_back({"c1", {{"b1", "n"}}});
  ald.b_circles.push_back({"b1", "c0", "c1", false});
  ald.unbounded = "c0";
  for (int sign : {+1, -1}) {
    FilledStructure fs = fill_b_circles(ald, {"b1"}, {sign});
    GeneratorMap gm = build_fstar_filled(fs);
    REQUIRE(gm.rank() == 1);
    CHECK(gm.images[0].length() == 1);
    CHECK(nielsen_generates(gm.images, 1).generates);
  }
}

TEST_CASE("path filled gives the terminal two-letter form") {
  Ald ald = load("path_tree.json");
  for (int s2 : {+1, -1}) {
    FilledStructure fs = fill_b_circles(ald, {"b1", "b2"}, {+1, s2});
    GeneratorMap gm = build_fstar_filled(fs);
    std::string img = render(gm, "c2");
    CHECK((img == "c2*c1^-1" || img == "c1*c2^-1"));
    CHECK(nielsen_generates(gm.images, gm.rank()).generates);
  }
}

TEST_CASE("make_locally_alternating flips every style and is idempotent") {
  Ald ald = path_with_a_circle();
  Ald alt = make_locally_alternating(ald);
  for (const auto& b : alt.b_circles) CHECK(b.alternating);
  for (const auto& a : alt.a_circles) CHECK(a.alternating);
  CHECK(to_json(make_locally_alternating(alt)) == to_json(alt));
  CHECK(graphs_equal(build_gb(alt), build_gb(ald)));
}

TEST_CASE("lift of a tree adds one leaf per circle") {
  Ald alt = make_locally_alternating(load("path_tree.json"));
  LiftResult res = lift_alternating(alt);
  CHECK(analyze(res.lifted).outcome == Outcome::fibered);
  // 2 original circles -> 2 extra leaf vertices and 2 extra edges
  CHECK(res.lifted.c_regions.size() == 5);
  CHECK(res.lifted.b_circles.size() == 4);
  Ald back = replay_program(res.lifted, res.program);
  CHECK(same_structure(back, alt));
}

TEST_CASE("lift breaks a cycle with a subdivision vertex") {
  Ald alt = make_locally_alternating(load("triangle.json"));
  LiftResult res = lift_alternating(alt);
  CHECK(analyze(res.lifted).outcome == Outcome::fibered);
  bool has_a_step = false;
  for (const auto& st : res.program) has_a_step = has_a_step || st.kind == 'A';
  CHECK(has_a_step);
  Ald back = replay_program(res.lifted, res.program);
  CHECK(same_structure(back, alt));
}

TEST_CASE("lift joins components through a bridging A-circle") {
  Ald ald;
  ald.c_regions.push_back({"c0", {{"b1", "m"}}});
  ald.c_regions.push_back({"c1", {{"b1", "n"}, {"a1", "1"}}});
  ald.c_regions.push_back({"c2", {{"a1", "2"}, {"b2", "m"}}});
  ald.c_regions.push_back({"c3", {{"b2", "n"}}});
  ald.b_circles.push_back({"b1", "c0", "c1", false});
  ald.b_circles.push_back({"b2", "c2", "c3", false});
  ald.a_circles.push_back({"a1", "c1", "c2", false});
  ald.unbounded = "c0";
  REQUIRE(validate(ald).empty());
  REQUIRE(analyze(ald).outcome == Outcome::not_fibered);
  Ald alt = make_locally_alternating(ald);
  LiftResult res = lift_alternating(alt);
  CHECK(analyze(res.lifted).outcome == Outcome::fibered);
  bool has_b_step = false;
  for (const auto& st : res.program) has_b_step = has_b_step || st.kind == 'B';
  CHECK(has_b_step);
  Ald back = replay_program(res.lifted, res.program);
  CHECK(same_structure(back, alt));
}

TEST_CASE("lift without a bridging A-circle is refused") {
  Ald ald;
  ald.c_regions.push_back({"c0", {{"b1", "m"}}});
  ald.c_regions.push_back({"c1", {{"b1", "n"}}});
  ald.c_regions.push_back({"c2", {{"b2", "m"}}});
  ald.c_regions.push_back({"c3", {{"b2", "n"}}});
  ald.b_circles.push_back({"b1", "c0", "c1", false});
  ald.b_circles.push_back({"b2", "c2", "c3", false});
  ald.unbounded = "c0";
  Ald alt = make_locally_alternating(ald);
  try {
    lift_alternating(alt);
    FAIL("expected error");
  } catch (const error& e) {
    REQUIRE(e.code() == errc::no_bridging_a_circle);
  }
}

TEST_CASE("lift refuses mixed-style input") {
  Ald ald = load("path_tree.json");
  ald.b_circles[0].alternating = true;  // b2 stays flat
  try {
    lift_alternating(ald);
    FAIL("expected error");
  } catch (const error& e) {
    REQUIRE(e.code() == errc::not_locally_alternating);
  }
}

TEST_CASE("program JSON round trip") {
  Ald alt = make_locally_alternating(load("triangle.json"));
  LiftResult res = lift_alternating(alt);
  nlohmann::json j = to_json(res.program);
  FillingProgram back = program_from_json(j);
  CHECK(to_json(back) == j);
  Ald replayed = replay_program(res.lifted, back);
  CHECK(same_structure(replayed, alt));
}
