#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <set>
#include <sstream>

#include "augfiber/classify.hpp"
#include "augfiber/pd.hpp"
#include "augfiber/random_gen.hpp"
#include "augfiber/twist.hpp"

using namespace augfiber;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(AUGFIBER_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("trefoil has one cyclic twist region of 3 crossings") {
  PlanarDiagram d = parse_pd(slurp("trefoil.pd"));
  auto regions = find_twist_regions(d);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].crossing_count() == 3);
  CHECK(regions[0].cyclic);
}

TEST_CASE("figure-eight has two twist regions of 2 crossings") {
  PlanarDiagram d = parse_pd(slurp("figure8.pd"));
  auto regions = find_twist_regions(d);
  REQUIRE(regions.size() == 2);
  CHECK(regions[0].crossing_count() == 2);
  CHECK(regions[1].crossing_count() == 2);
}

TEST_CASE("regions partition the crossings") {
  for (const char* name : {"trefoil.pd", "figure8.pd", "kink.pd"}) {
    PlanarDiagram d = parse_pd(slurp(name));
    auto regions = find_twist_regions(d);
    std::set<int> seen;
    for (const auto& r : regions)
      for (int c : r.crossings) REQUIRE(seen.insert(c).second);
    REQUIRE(static_cast<int>(seen.size()) == d.crossing_count());
  }
}

TEST_CASE("kink forms a single one-crossing region") {
  PlanarDiagram d = parse_pd(slurp("kink.pd"));
  auto regions = find_twist_regions(d);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].crossing_count() == 1);
}

TEST_CASE("augment adds four crossings per circle") {
  PlanarDiagram d = parse_pd(slurp("figure8.pd"));
  auto regions = find_twist_regions(d);
  PlanarDiagram a = augment(d, regions);
  CHECK(a.crossing_count() == 12);
  CHECK(a.circle_marks.size() == 2);
  CHECK(link_components(a).count == link_components(d).count + 2);

  PlanarDiagram t = parse_pd(slurp("trefoil.pd"));
  PlanarDiagram ta = augment(t, find_twist_regions(t));
  CHECK(ta.crossing_count() == 7);
}

TEST_CASE("empty selection leaves the diagram unchanged") {
  PlanarDiagram d = parse_pd(slurp("figure8.pd"));
  auto regions = find_twist_regions(d);
  PlanarDiagram a = augment(d, regions, std::vector<int>{});
  CHECK(a.crossings == d.crossings);
}

TEST_CASE("flatten removes encircled twists and records 1/n instructions") {
  PlanarDiagram d = parse_pd(slurp("figure8.pd"));
  PlanarDiagram a = augment(d, find_twist_regions(d));
  FlattenResult fr = flatten(a);
  CHECK(fr.diagram.crossing_count() == 8);  // 4 per circle
  REQUIRE(fr.instructions.size() == 2);
  for (const auto& ins : fr.instructions) CHECK(std::abs(ins.n) == 1);
  // all remaining crossings lie on crossing circles
  Components comps = link_components(fr.diagram);
  for (int c = 0; c < fr.diagram.crossing_count(); ++c) {
    bool on_circle = false;
    for (int p = 0; p < 4; ++p)
      if (comps.circle_comps.count(comps.comp_of_edge.at(fr.diagram.crossings[c][p])))
        on_circle = true;
    CHECK(on_circle);
  }
}

TEST_CASE("flatten sign convention flips with right_negative") {
  PlanarDiagram d = parse_pd(slurp("figure8.pd"));
  PlanarDiagram a = augment(d, find_twist_regions(d));
  auto neg = flatten(a, true), pos = flatten(a, false);
  REQUIRE(neg.instructions.size() == pos.instructions.size());
  for (size_t i = 0; i < neg.instructions.size(); ++i)
    CHECK(neg.instructions[i].n == -pos.instructions[i].n);
}

TEST_CASE("odd encircled region is refused") {
  PlanarDiagram t = parse_pd(slurp("trefoil.pd"));
  PlanarDiagram ta = augment(t, find_twist_regions(t));
  try {
    flatten(ta);
    FAIL("expected OddTwistRegion");
  } catch (const error& e) {
    REQUIRE(e.code() == errc::odd_twist_region);
  }
}

TEST_CASE("circle with no adjacent twists yields no instruction") {
  GeneratedDiagram g = random_flat_augmented_diagram(11, 4);
  FlattenResult fr = flatten(g.diagram);
  CHECK(fr.instructions.empty());
  CHECK(fr.diagram.crossings == g.diagram.crossings);
}

TEST_CASE("crossing-count bookkeeping after partial augmentation") {
  // #crossings = 4 * #circles + crossings in unselected regions
  PlanarDiagram d = parse_pd(slurp("figure8.pd"));
  auto regions = find_twist_regions(d);
  PlanarDiagram a = augment(d, regions, std::vector<int>{0});
  FlattenResult fr = flatten(a);
  CHECK(fr.diagram.crossing_count() ==
        4 * static_cast<int>(fr.diagram.circle_marks.size()) + regions[1].crossing_count());
}

TEST_CASE("augment then flatten preserves non-circle component count") {
  PlanarDiagram d = parse_pd(slurp("figure8.pd"));
  int before = link_components(d).count;
  PlanarDiagram a = augment(d, find_twist_regions(d));
  FlattenResult fr = flatten(a);
  Components comps = link_components(fr.diagram);
  int strands = comps.count - static_cast<int>(comps.circle_comps.size());
  CHECK(strands == before);
}

TEST_CASE("twist reinsertion round trip at the bookkeeping level") {
  // each removed full twist was a pair of crossings
  PlanarDiagram d = parse_pd(slurp("figure8.pd"));
  auto regions = find_twist_regions(d);
  PlanarDiagram a = augment(d, regions);
  FlattenResult fr = flatten(a);
  int removed = 0;
  for (const auto& ins : fr.instructions) removed += 2 * static_cast<int>(std::abs(ins.n));
  CHECK(a.crossing_count() - fr.diagram.crossing_count() == removed);
}

TEST_CASE("Hopf-style two-crossing ring augments and flattens") {
  // two edges doubled between two crossings: every face is a bigon
  PlanarDiagram d = parse_pd("X(1,2,3,4)\nX(3,2,1,4)\n");
  REQUIRE(d.crossing_count() == 2);
  auto regions = find_twist_regions(d);
  REQUIRE(regions.size() == 1);
  CHECK(regions[0].crossing_count() == 2);
  PlanarDiagram a = augment(d, regions);
  CHECK(a.crossing_count() == 6);
  FlattenResult fr = flatten(a);
  CHECK(fr.diagram.crossing_count() == 4);
  REQUIRE(fr.instructions.size() == 1);
  CHECK(std::abs(fr.instructions[0].n) <= 1);
}
