// augfiber: decide whether the standard surface of a flat augmented link is
// a fiber, with independently checkable certificates.
//
// JSON reports go to stdout, a human summary to stderr.  Exit codes:
// 0 = Fibered, 1 = NotFibered, 2 = Inapplicable, 3 = domain error,
// 4 = usage/IO error.

#include <chrono>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "augfiber/ald.hpp"
#include "augfiber/classify.hpp"
#include "augfiber/fiber_graph.hpp"
#include "augfiber/moves.hpp"
#include "augfiber/pd.hpp"
#include "augfiber/random_gen.hpp"
#include "augfiber/stallings.hpp"
#include "augfiber/twist.hpp"

namespace {

using namespace augfiber;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::bad_input, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool looks_like_json(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{' || c == '[';
  }
  return false;
}

std::string digest(const std::string& bytes) {
  // FNV-1a
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::fibered: return 0;
    case Outcome::not_fibered: return 1;
    case Outcome::inapplicable: return 2;
  }
  return 3;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
};

json ald_summary(const Ald& ald) {
  json j = to_json(ald);
  auto rc = rank_counts(ald);
  j["rank"] = {{"q", rc.q}, {"r", rc.r}};
  return j;
}

struct AnalyzeOptions {
  bool run_verify = false;
  std::string trace_path;
  int unbounded = -1;
  bool flatten_first = true;
};

// Full pipeline for one input file: parse -> (flatten) -> classify ->
// analyze [-> verify].
json analyze_file(const std::string& path, const AnalyzeOptions& opt, Outcome& outcome) {
  json report;
  std::string text = read_file(path);
  report["input"] = path;
  report["digest"] = digest(text);
  json timings;
  Ald ald;
  if (looks_like_json(text)) {
    report["kind"] = "ald";
    ald = ald_from_json(json::parse(text, nullptr, true, true));
  } else {
    report["kind"] = "pd";
    Timer t;
    PlanarDiagram d = parse_pd(text);
    FaceSet fs = trace_faces(d);
    int unb = opt.unbounded >= 0 ? opt.unbounded : default_unbounded(d, fs);
    fs = checkerboard(d, fs, unb);
    SurfaceStats st = surface_stats(d, fs);
    report["diagram"] = {{"crossings", d.crossing_count()},
                         {"edges", d.edge_count()},
                         {"faces", fs.faces.size()},
                         {"components", d.crossing_count() ? link_components(d).count : d.free_loops},
                         {"unbounded_face", unb}};
    report["surface"] = {{"chi", st.chi},
                         {"boundary_count", st.boundary_count},
                         {"connected", st.connected},
                         {"orientable", st.orientable}};
    if (st.genus) report["surface"]["genus"] = *st.genus;
    timings["diagram_ms"] = t.ms();

    // plain diagrams (strand-strand crossings outside circles) are not flat
    // augmented; flatten removes encircled twists, anything else is refused
    Timer t2;
    if (opt.flatten_first && !d.circle_marks.empty()) {
      FlattenResult fr = flatten(d);
      d = fr.diagram;
      if (!fr.instructions.empty()) {
        json ji = json::array();
        for (const auto& ins : fr.instructions) ji.push_back({{"circle", ins.circle}, {"n", ins.n}});
        report["flatten_instructions"] = ji;
      }
      fs = trace_faces(d);
      unb = opt.unbounded >= 0 ? opt.unbounded : default_unbounded(d, fs);
    }
    Classified cl = classify(d, unb);
    ald = cl.ald;
    timings["classify_ms"] = t2.ms();
  }
  report["ald"] = ald_summary(ald);

  Timer t3;
  Verdict v = analyze(ald);
  timings["analyze_ms"] = t3.ms();
  report["graph"] = json::object();
  {
    FiberGraph g = build_gb(ald);
    report["graph"]["vertices"] = g.vertices;
    json je = json::array();
    for (const auto& e : g.edges) je.push_back({{"id", e.id}, {"u", e.u}, {"v", e.v}});
    report["graph"]["edges"] = je;
  }
  report["verdict"] = to_json(v);
  outcome = v.outcome;

  if (opt.run_verify && v.outcome != Outcome::inapplicable) {
    Timer t4;
    OracleVerdict ov = verify(ald);
    timings["verify_ms"] = t4.ms();
    json jo;
    jo["outcome"] = outcome_name(ov.outcome);
    jo["agrees"] = ov.outcome == v.outcome;
    if (ov.witness) {
      json jw;
      jw["kind"] = ov.witness->kind == HomologyWitness::disconnection ? "disconnection" : "cycle";
      jw["coefficients"] = ov.witness->coefficients;
      jw["description"] = ov.witness->description;
      jo["witness"] = jw;
    }
    if (ov.trace) {
      GeneratorMap gm = build_fstar(strip_a_circles(ald));
      jo["trace_moves"] = ov.trace->moves.size();
      if (!opt.trace_path.empty()) {
        std::ofstream tf(opt.trace_path);
        tf << to_json(*ov.trace, gm.codomain).dump(2) << "\n";
        jo["trace_file"] = opt.trace_path;
      }
    }
    report["oracle"] = jo;
  }
  report["timings_ms"] = timings;
  return report;
}

void print_report(const json& report) { std::cout << report.dump(2) << std::endl; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fiberedness of flat augmented links via the G_B tree criterion"};
  app.require_subcommand(1);

  std::vector<std::string> paths;
  std::string trace_path, program_path, out_path, kind = "ald", sign_convention = "right-neg";
  bool do_verify = false;
  int unbounded = -1;
  unsigned seed = 1;
  int size = 6;

  auto* analyze_cmd = app.add_subcommand("analyze", "full pipeline: parse, flatten, classify, decide");
  analyze_cmd->add_option("paths", paths, "input files (.pd or ALD .json)")->required();
  analyze_cmd->add_flag("--verify", do_verify, "run the Stallings oracle and report agreement");
  analyze_cmd->add_option("--emit-trace", trace_path, "write the Nielsen trace JSON here");
  analyze_cmd->add_option("--unbounded", unbounded, "unbounded face id for PD inputs");

  auto* augment_cmd = app.add_subcommand("augment", "encircle twist regions with crossing circles");
  augment_cmd->add_option("paths", paths, "input PD file")->required()->expected(1);
  std::vector<int> region_sel;
  augment_cmd->add_option("--regions", region_sel, "indices of twist regions (default: all)");

  auto* flatten_cmd = app.add_subcommand("flatten", "remove full twists from encircled regions");
  flatten_cmd->add_option("paths", paths, "input PD file")->required()->expected(1);
  flatten_cmd->add_option("--sign-convention", sign_convention,
                          "right-neg (default) or right-pos");

  auto* fill_cmd = app.add_subcommand("fill", "apply a filling program to an ALD");
  fill_cmd->add_option("paths", paths, "input ALD file")->required()->expected(1);
  fill_cmd->add_option("program", program_path, "filling program JSON")->required();
  fill_cmd->add_flag("--verify", do_verify, "check the filled structure with Nielsen reduction");

  auto* deplumb_cmd = app.add_subcommand("deplumb", "remove A-circles (Hopf band bookkeeping)");
  deplumb_cmd->add_option("paths", paths, "input ALD file")->required()->expected(1);

  auto* lift_cmd = app.add_subcommand("lift", "lift a locally alternating ALD to a flat tree ALD");
  lift_cmd->add_option("paths", paths, "input ALD file")->required()->expected(1);

  auto* verify_cmd = app.add_subcommand("verify", "Stallings oracle only");
  verify_cmd->add_option("paths", paths, "input ALD file")->required()->expected(1);
  verify_cmd->add_option("--emit-trace", trace_path, "write the Nielsen trace JSON here");

  auto* random_cmd = app.add_subcommand("random", "emit a seeded random instance");
  random_cmd->add_option("--seed", seed, "random seed");
  random_cmd->add_option("--size", size, "size bound");
  random_cmd->add_option("--kind", kind, "ald (default) or diagram");

  auto* dot_cmd = app.add_subcommand("export-dot", "emit G_B in DOT format");
  dot_cmd->add_option("paths", paths, "input ALD file")->required()->expected(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*analyze_cmd) {
      AnalyzeOptions opt;
      opt.run_verify = do_verify;
      opt.trace_path = trace_path;
      opt.unbounded = unbounded;
      Outcome worst = Outcome::fibered;
      json reports = json::array();
      std::vector<std::future<std::pair<json, Outcome>>> futures;
      for (const auto& p : paths)
        futures.push_back(std::async(std::launch::async, [p, opt] {
          Outcome o;
          json r = analyze_file(p, opt, o);
          return std::pair{r, o};
        }));
      for (auto& f : futures) {
        auto [r, o] = f.get();
        reports.push_back(r);
        if (exit_code(o) > exit_code(worst)) worst = o;
        std::cerr << r["input"].get<std::string>() << ": "
                  << r["verdict"]["outcome"].get<std::string>() << "\n";
      }
      print_report(paths.size() == 1 ? reports[0] : reports);
      return exit_code(worst);
    }

    if (*augment_cmd) {
      PlanarDiagram d = parse_pd(read_file(paths[0]));
      auto regions = find_twist_regions(d);
      std::optional<std::vector<int>> sel;
      if (!region_sel.empty()) sel = region_sel;
      PlanarDiagram out = augment(d, regions, sel);
      std::cout << serialize_pd(out);
      std::cerr << "augmented " << (sel ? sel->size() : regions.size()) << " twist region(s), "
                << out.crossing_count() << " crossings\n";
      return 0;
    }

    if (*flatten_cmd) {
      PlanarDiagram d = parse_pd(read_file(paths[0]));
      FlattenResult fr = flatten(d, sign_convention != "right-pos");
      json j;
      j["diagram"] = serialize_pd(fr.diagram);
      j["instructions"] = json::array();
      for (const auto& ins : fr.instructions)
        j["instructions"].push_back({{"circle", ins.circle}, {"n", ins.n}});
      print_report(j);
      std::cerr << "flat diagram with " << fr.diagram.crossing_count() << " crossings\n";
      return 0;
    }

    if (*fill_cmd) {
      Ald ald = ald_from_json(json::parse(read_file(paths[0]), nullptr, true, true));
      FillingProgram program = program_from_json(json::parse(read_file(program_path)));
      bool structural = false;
      for (const auto& st : program)
        if (st.kind == 'P' || !st.via_region.empty()) structural = true;
      json j;
      if (structural) {
        Ald replayed = replay_program(ald, program);
        j["result"] = ald_summary(replayed);
        j["verdict"] = to_json(analyze(replayed));
        print_report(j);
        return exit_code(analyze(replayed).outcome);
      }
      // bookkeeping fills: A-circles first, then B-circles
      int chi_delta = 0;
      Ald cur = ald;
      std::vector<std::string> b_ids;
      std::vector<int> b_signs;
      for (const auto& st : program) {
        if (st.kind == 'A') {
          AFillRecord rec = fill_a_circle(cur, st.circle, st.sign);
          cur = rec.ald;
          chi_delta += rec.chi_delta;
        } else {
          b_ids.push_back(st.circle);
          b_signs.push_back(st.sign);
        }
      }
      j["chi_delta_a"] = chi_delta;
      Outcome outcome = analyze(cur).outcome;
      if (!b_ids.empty()) {
        Ald flat = strip_a_circles(cur);
        if (flat.a_circles.size() != cur.a_circles.size())
          fail(errc::bad_input, "fill remaining A-circles before B-circles");
        FilledStructure fs = fill_b_circles(cur, b_ids, b_signs);
        j["chi_delta_b"] = fs.chi_delta;
        j["remaining_b_circles"] = fs.remaining;
        if (do_verify && fs.remaining.empty()) {
          GeneratorMap gm = build_fstar_filled(fs);
          NielsenResult nr = nielsen_generates(gm.images, gm.rank());
          j["filled_fibered"] = nr.generates;
          outcome = nr.generates ? Outcome::fibered : Outcome::not_fibered;
        }
      }
      j["verdict"] = json{{"outcome", outcome_name(outcome)}};
      print_report(j);
      return exit_code(outcome);
    }

    if (*deplumb_cmd) {
      Ald ald = ald_from_json(json::parse(read_file(paths[0]), nullptr, true, true));
      DeplumbResult res = deplumb(ald);
      json j;
      j["ald"] = ald_summary(res.ald);
      j["hopf_records"] = json::array();
      for (const auto& rec : res.records)
        j["hopf_records"].push_back({{"a_circle", rec.a_circle},
                                     {"bands", rec.count},
                                     {"handedness", {rec.handedness.first, rec.handedness.second}},
                                     {"chi_delta", rec.chi_delta}});
      print_report(j);
      return 0;
    }

    if (*lift_cmd) {
      Ald ald = ald_from_json(json::parse(read_file(paths[0]), nullptr, true, true));
      LiftResult res = lift_alternating(ald);
      json j;
      j["ald"] = ald_summary(res.lifted);
      j["program"] = to_json(res.program);
      j["verdict"] = to_json(analyze(res.lifted));
      print_report(j);
      return 0;
    }

    if (*verify_cmd) {
      Ald ald = ald_from_json(json::parse(read_file(paths[0]), nullptr, true, true));
      OracleVerdict ov = verify(ald);
      json j;
      j["outcome"] = outcome_name(ov.outcome);
      if (ov.trace) {
        GeneratorMap gm = build_fstar(strip_a_circles(ald));
        j["trace_moves"] = ov.trace->moves.size();
        if (!trace_path.empty()) {
          std::ofstream tf(trace_path);
          tf << to_json(*ov.trace, gm.codomain).dump(2) << "\n";
          j["trace_file"] = trace_path;
        }
      }
      if (ov.witness) {
        j["witness"] = {{"kind", ov.witness->kind == HomologyWitness::disconnection
                                     ? "disconnection"
                                     : "cycle"},
                        {"coefficients", ov.witness->coefficients},
                        {"description", ov.witness->description}};
      }
      print_report(j);
      return exit_code(ov.outcome);
    }

    if (*random_cmd) {
      if (kind == "diagram") {
        GeneratedDiagram g = random_flat_augmented_diagram(seed, size);
        std::cout << "# unbounded face " << g.unbounded_face << "\n" << serialize_pd(g.diagram);
      } else {
        Ald ald = random_ald(seed, size);
        std::cout << to_json(ald).dump(2) << std::endl;
      }
      return 0;
    }

    if (*dot_cmd) {
      Ald ald = ald_from_json(json::parse(read_file(paths[0]), nullptr, true, true));
      std::cout << to_dot(build_gb(ald));
      return 0;
    }
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 4;
}
