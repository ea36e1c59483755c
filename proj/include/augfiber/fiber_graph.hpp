#pragma once

// G_B(L): vertices are the C-regions, edges the B-circles.  The standard
// surface is a fiber exactly when this multigraph is a tree; non-tree inputs
// get disconnection and cycle certificates.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "augfiber/ald.hpp"

namespace augfiber {

struct FiberGraph {
  struct Edge {
    std::string id, u, v;  // u = m_side, v = n_side
  };
  std::vector<std::string> vertices;  // sorted
  std::vector<Edge> edges;            // sorted by id
};

inline FiberGraph build_gb(const Ald& ald) {
  FiberGraph g;
  for (const auto& r : ald.c_regions) g.vertices.push_back(r.id);
  std::sort(g.vertices.begin(), g.vertices.end());
  for (const auto& b : ald.b_circles) g.edges.push_back({b.id, b.m_side, b.n_side});
  std::sort(g.edges.begin(), g.edges.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return g;
}

enum class Outcome { fibered, not_fibered, inapplicable };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::fibered: return "Fibered";
    case Outcome::not_fibered: return "NotFibered";
    case Outcome::inapplicable: return "Inapplicable";
  }
  return "?";
}

struct SpanningTreeCert {
  std::vector<std::string> edges;
};
struct DisconnectedCert {
  std::vector<std::vector<std::string>> components;  // vertex lists
};
struct CycleCert {
  std::vector<std::string> edges;
  std::vector<std::string> vertices;  // cycle vertex walk, |vertices| == |edges|
  std::vector<int> directions;        // +1 when the edge is traversed n_side -> m_side
};
struct ReasonCert {
  std::string text;
};
using Certificate = std::variant<SpanningTreeCert, DisconnectedCert, CycleCert, ReasonCert>;

struct Verdict {
  Outcome outcome = Outcome::inapplicable;
  std::vector<Certificate> certificates;
};

namespace detail {

struct GraphIndex {
  std::map<std::string, int> vid;
  std::vector<std::vector<std::pair<int, int>>> adj;  // vertex -> [(neighbor, edge idx)]
};

inline GraphIndex index_graph(const FiberGraph& g) {
  GraphIndex ix;
  for (const auto& v : g.vertices) ix.vid.emplace(v, static_cast<int>(ix.vid.size()));
  ix.adj.resize(ix.vid.size());
  for (size_t e = 0; e < g.edges.size(); ++e) {
    int u = ix.vid.at(g.edges[e].u), v = ix.vid.at(g.edges[e].v);
    ix.adj[u].push_back({v, static_cast<int>(e)});
    if (u != v) ix.adj[v].push_back({u, static_cast<int>(e)});
  }
  return ix;
}

}  // namespace detail

inline Verdict is_tree(const FiberGraph& g) {
  Verdict out;
  if (g.vertices.empty()) {
    out.outcome = Outcome::inapplicable;
    out.certificates.push_back(ReasonCert{"graph has no vertices"});
    return out;
  }
  auto ix = detail::index_graph(g);
  int n = static_cast<int>(g.vertices.size());

  // BFS forest; roots in sorted vertex order.
  std::vector<int> parent(n, -1), parent_edge(n, -1), comp(n, -1);
  std::vector<std::vector<std::string>> components;
  std::vector<int> tree_edges;
  std::set<int> in_forest;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    int cid = static_cast<int>(components.size());
    components.push_back({});
    std::vector<int> queue{s};
    comp[s] = cid;
    for (size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      components[cid].push_back(g.vertices[u]);
      for (auto [v, e] : ix.adj[u])
        if (comp[v] < 0) {
          comp[v] = cid;
          parent[v] = u;
          parent_edge[v] = e;
          in_forest.insert(e);
          queue.push_back(v);
        }
    }
    std::sort(components[cid].begin(), components[cid].end());
  }

  bool connected = components.size() == 1;
  // fundamental cycles, one per non-forest edge
  std::vector<CycleCert> cycles;
  for (size_t e = 0; e < g.edges.size(); ++e) {
    if (in_forest.count(static_cast<int>(e))) continue;
    int u = ix.vid.at(g.edges[e].u), v = ix.vid.at(g.edges[e].v);
    CycleCert cyc;
    if (u == v) {
      cyc.edges = {g.edges[e].id};
      cyc.vertices = {g.vertices[u]};
      cyc.directions = {+1};
    } else {
      // forest paths from u and v to their join
      auto path_to_root = [&](int x) {
        std::vector<int> p{x};
        while (parent[p.back()] >= 0) p.push_back(parent[p.back()]);
        return p;
      };
      std::vector<int> pu = path_to_root(u), pv = path_to_root(v);
      std::set<int> onu(pu.begin(), pu.end());
      int join = -1;
      for (int x : pv)
        if (onu.count(x)) {
          join = x;
          break;
        }
      // walk: v -> ... -> join -> ... -> u, then close with e (u -> v)
      std::vector<int> walk_v;  // v up to join
      for (int x : pv) {
        walk_v.push_back(x);
        if (x == join) break;
      }
      std::vector<int> walk_u;
      for (int x : pu) {
        walk_u.push_back(x);
        if (x == join) break;
      }
      // cycle vertex sequence: u, ..., join, ..., v  then edge e closes v->u
      std::vector<int> seq(walk_u.begin(), walk_u.end());
      for (auto it = walk_v.rbegin() + 1; it != walk_v.rend(); ++it) seq.push_back(*it);
      for (size_t i = 0; i + 1 < seq.size(); ++i) {
        int a = seq[i], b = seq[i + 1];
        // the forest edge between a and b
        int fe = parent[a] == b ? parent_edge[a] : parent_edge[b];
        cyc.edges.push_back(g.edges[fe].id);
        cyc.vertices.push_back(g.vertices[a]);
        cyc.directions.push_back(g.edges[fe].u == g.vertices[b] ? +1 : -1);
      }
      cyc.edges.push_back(g.edges[e].id);
      cyc.vertices.push_back(g.vertices[seq.back()]);
      cyc.directions.push_back(g.edges[e].u == g.vertices[u] ? +1 : -1);
    }
    cycles.push_back(std::move(cyc));
  }

  if (connected && cycles.empty()) {
    out.outcome = Outcome::fibered;
    SpanningTreeCert cert;
    for (const auto& e : g.edges) cert.edges.push_back(e.id);
    out.certificates.push_back(std::move(cert));
    return out;
  }
  out.outcome = Outcome::not_fibered;
  if (!connected) out.certificates.push_back(DisconnectedCert{components});
  for (auto& c : cycles) out.certificates.push_back(std::move(c));
  return out;
}

// Orchestrator: Inapplicable when the ALD is inconsistent or still carries
// locally alternating circles (lift first); otherwise Theorem main.
inline Verdict analyze(const Ald& ald) {
  auto violations = validate(ald);
  if (!violations.empty()) {
    Verdict v;
    v.outcome = Outcome::inapplicable;
    std::string text = "validation failed:";
    for (const auto& viol : violations) text += " " + viol.code + "(" + viol.detail + ")";
    v.certificates.push_back(ReasonCert{text});
    return v;
  }
  if (ald.any_alternating()) {
    Verdict v;
    v.outcome = Outcome::inapplicable;
    v.certificates.push_back(
        ReasonCert{"locally alternating circles present; apply lift_alternating first"});
    return v;
  }
  return is_tree(build_gb(ald));
}

inline std::string to_dot(const FiberGraph& g) {
  std::ostringstream os;
  os << "graph GB {\n";
  for (const auto& v : g.vertices) os << "  \"" << v << "\";\n";
  for (const auto& e : g.edges)
    os << "  \"" << e.u << "\" -- \"" << e.v << "\" [label=\"" << e.id << "\"];\n";
  os << "}\n";
  return os.str();
}

inline nlohmann::json to_json(const Verdict& v) {
  nlohmann::json j;
  j["outcome"] = outcome_name(v.outcome);
  j["certificates"] = nlohmann::json::array();
  for (const auto& cert : v.certificates) {
    nlohmann::json jc;
    if (auto* t = std::get_if<SpanningTreeCert>(&cert)) {
      jc["type"] = "spanning_tree";
      jc["edges"] = t->edges;
    } else if (auto* dcert = std::get_if<DisconnectedCert>(&cert)) {
      jc["type"] = "disconnected";
      jc["components"] = dcert->components;
    } else if (auto* c = std::get_if<CycleCert>(&cert)) {
      jc["type"] = "cycle";
      jc["edges"] = c->edges;
      jc["vertices"] = c->vertices;
      jc["directions"] = c->directions;
    } else if (auto* rc = std::get_if<ReasonCert>(&cert)) {
      jc["type"] = "reason";
      jc["text"] = rc->text;
    }
    j["certificates"].push_back(jc);
  }
  return j;
}

}  // namespace augfiber
