#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(AUGFIBER_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult res;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) res.out.append(buf.data(), n);
  int status = pclose(p);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string data(const std::string& name) { return std::string(AUGFIBER_DATA_DIR) + "/" + name; }

}  // namespace

TEST_CASE("analyze a tree ALD exits 0 with a Fibered verdict") {
  RunResult r = run("analyze " + data("path_tree.json"));
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["verdict"]["outcome"] == "Fibered");
  CHECK(j["ald"]["rank"]["q"] == 2);
}

TEST_CASE("analyze a triangle ALD exits 1 with a cycle certificate") {
  RunResult r = run("analyze " + data("triangle.json"));
  CHECK(r.exit_code == 1);
  json j = json::parse(r.out);
  CHECK(j["verdict"]["outcome"] == "NotFibered");
  bool has_cycle = false;
  for (const auto& c : j["verdict"]["certificates"]) has_cycle |= c["type"] == "cycle";
  CHECK(has_cycle);
}

TEST_CASE("analyze --verify reports oracle agreement") {
  RunResult r = run("analyze --verify " + data("triangle.json"));
  CHECK(r.exit_code == 1);
  json j = json::parse(r.out);
  REQUIRE(j.contains("oracle"));
  CHECK(j["oracle"]["agrees"] == true);
  CHECK(j["oracle"]["witness"]["kind"] == "cycle");
}

TEST_CASE("analyze a PD file runs the full pipeline") {
  RunResult r = run("analyze --verify " + data("figure8_flat.pd"));
  json j = json::parse(r.out);
  CHECK(j["kind"] == "pd");
  CHECK(j.contains("surface"));
  CHECK(j["oracle"]["agrees"] == true);
}

TEST_CASE("plain diagrams are inapplicable") {
  RunResult r = run("analyze " + data("trefoil.pd"));
  CHECK(r.exit_code == 2);
}

TEST_CASE("augment and flatten round trip through text") {
  std::string aug_path = "/tmp/augfiber_test_aug.pd";
  RunResult r = run("augment " + data("figure8.pd") + " > " + aug_path + "; cat " + aug_path);
  // popen already shell-interprets; the redirect above wrote the file
  std::ifstream in(aug_path);
  REQUIRE(in.good());
  RunResult fl = run("flatten " + aug_path);
  CHECK(fl.exit_code == 0);
  json j = json::parse(fl.out);
  REQUIRE(j["instructions"].size() == 2);
  for (const auto& ins : j["instructions"]) {
    long n = ins["n"].get<long>();
    CHECK(std::abs(n) == 1);
  }
}

TEST_CASE("flatten sign convention flag") {
  std::string aug_path = "/tmp/augfiber_test_aug2.pd";
  run("augment " + data("figure8.pd") + " > " + aug_path);
  json neg = json::parse(run("flatten " + aug_path).out);
  json pos = json::parse(run("flatten --sign-convention right-pos " + aug_path).out);
  REQUIRE(neg["instructions"].size() == pos["instructions"].size());
  for (size_t i = 0; i < neg["instructions"].size(); ++i)
    CHECK(neg["instructions"][i]["n"].get<long>() == -pos["instructions"][i]["n"].get<long>());
}

TEST_CASE("random is deterministic and analyzable") {
  RunResult a = run("random --seed 7 --size 5");
  RunResult b = run("random --seed 7 --size 5");
  CHECK(a.out == b.out);
  CHECK(a.exit_code == 0);
  std::ofstream("/tmp/augfiber_rand.json") << a.out;
  RunResult an = run("analyze /tmp/augfiber_rand.json");
  CHECK((an.exit_code == 0 || an.exit_code == 1));
  RunResult d1 = run("random --seed 3 --size 5 --kind diagram");
  RunResult d2 = run("random --seed 3 --size 5 --kind diagram");
  CHECK(d1.out == d2.out);
}

TEST_CASE("verify emits a trace file") {
  std::string trace = "/tmp/augfiber_trace.json";
  RunResult r = run("verify --emit-trace " + trace + " " + data("path_tree.json"));
  CHECK(r.exit_code == 0);
  json j = json::parse(r.out);
  CHECK(j["outcome"] == "Fibered");
  std::ifstream tf(trace);
  REQUIRE(tf.good());
  json tj = json::parse(tf);
  CHECK(tj.contains("moves"));
}

TEST_CASE("deplumb, lift and fill cooperate") {
  RunResult lift = run("lift /tmp/augfiber_alt.json");
  // build the alternating input first
  std::ifstream in(data("triangle.json"));
  json j = json::parse(in);
  for (auto& b : j["b_circles"]) b["style"] = "alternating";
  std::ofstream("/tmp/augfiber_alt.json") << j.dump();
  lift = run("lift /tmp/augfiber_alt.json");
  CHECK(lift.exit_code == 0);
  json lj = json::parse(lift.out);
  CHECK(lj["verdict"]["outcome"] == "Fibered");
  std::ofstream("/tmp/augfiber_lifted.json") << lj["ald"].dump();
  std::ofstream("/tmp/augfiber_prog.json") << lj["program"].dump();
  RunResult fill = run("fill /tmp/augfiber_lifted.json /tmp/augfiber_prog.json");
  json fj = json::parse(fill.out);
  // replaying restores the alternating triangle: inapplicable until lifted
  CHECK(fj["verdict"]["outcome"] == "Inapplicable");
}

TEST_CASE("export-dot prints a graph") {
  RunResult r = run("export-dot " + data("triangle.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("graph GB") != std::string::npos);
  CHECK(r.out.find("\"c0\" -- \"c1\"") != std::string::npos);
}

TEST_CASE("missing file is a usage error") {
  RunResult r = run("analyze /nonexistent.json");
  CHECK(r.exit_code == 3);
}
