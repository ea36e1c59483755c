#pragma once

// Independent fibration check via Stallings' criterion.  The push-off map
// f_* is written on free generators: one u/x pair per B-circle and per
// bounded C-region.  Images follow the two-letter edge rule
//   u_b  ->  x_{c_m} x_{c_n}^-1
// and the cyclic region product with per-incidence factors
//   (b, m-role) -> x_b x_c^-1       (b, n-role) -> x_c x_b^-1
// with every C0 letter omitted.  Surjectivity is decided by Nielsen
// reduction (free groups are Hopfian); non-tree inputs carry exact integer
// homology witnesses instead.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "augfiber/ald.hpp"
#include "augfiber/fiber_graph.hpp"
#include "augfiber/free_group.hpp"

namespace augfiber {

struct GeneratorMap {
  std::vector<std::string> domain;    // u-generator names: B-circles then C-regions (sorted)
  std::vector<std::string> codomain;  // x-generator names, same index scheme
  std::vector<Word> images;           // images[i] = f_*(u_domain[i]) over codomain letters

  int rank() const { return static_cast<int>(domain.size()); }
  int codomain_index(const std::string& name) const {
    for (int i = 0; i < static_cast<int>(codomain.size()); ++i)
      if (codomain[i] == name) return i;
    return -1;
  }
};

namespace detail {

// Rotate a cyclic incidence list so the lexicographically least (circle,
// side) pair comes first.
inline std::vector<Incidence> canonical_start(std::vector<Incidence> v) {
  if (v.size() < 2) return v;
  size_t best = 0;
  for (size_t i = 1; i < v.size(); ++i)
    if (std::pair(v[i].circle, v[i].side) < std::pair(v[best].circle, v[best].side)) best = i;
  std::rotate(v.begin(), v.begin() + best, v.end());
  return v;
}

}  // namespace detail

// keep_c0: retain x_{c0} letters (an extra codomain slot) instead of
// omitting them; used by shape checks.
inline GeneratorMap build_fstar(const Ald& ald, bool keep_c0 = false) {
  require(ald.a_circles.empty(), errc::has_a_circles, "deplumb A-circles before building f_*");
  require(!ald.c_regions.empty(), errc::empty_diagram, "no C-regions");

  GeneratorMap m;
  std::vector<std::string> bs, cs;
  for (const auto& b : ald.b_circles) bs.push_back(b.id);
  for (const auto& r : ald.c_regions)
    if (r.id != ald.unbounded) cs.push_back(r.id);
  std::sort(bs.begin(), bs.end());
  std::sort(cs.begin(), cs.end());
  m.domain = bs;
  m.domain.insert(m.domain.end(), cs.begin(), cs.end());
  m.codomain = m.domain;
  if (keep_c0) m.codomain.push_back(ald.unbounded);

  std::map<std::string, int> xidx;
  for (int i = 0; i < static_cast<int>(m.codomain.size()); ++i) xidx[m.codomain[i]] = i;
  auto letter = [&](const std::string& name, int sign) -> std::optional<Letter> {
    auto it = xidx.find(name);
    if (it == xidx.end()) return std::nullopt;  // omitted C0 letter
    return Letter{it->second, sign};
  };

  for (const auto& bid : bs) {
    const BCircle* b = ald.b_circle(bid);
    Word w;
    if (auto l = letter(b->m_side, +1)) w.push(*l);
    if (auto l = letter(b->n_side, -1)) w.push(*l);
    m.images.push_back(w);
  }
  for (const auto& cid : cs) {
    const CRegion* r = ald.region(cid);
    Word w;
    for (const auto& inc : detail::canonical_start(r->boundary)) {
      if (inc.side == "m") {
        if (auto l = letter(inc.circle, +1)) w.push(*l);
        if (auto l = letter(cid, -1)) w.push(*l);
      } else if (inc.side == "n") {
        if (auto l = letter(cid, +1)) w.push(*l);
        if (auto l = letter(inc.circle, -1)) w.push(*l);
      }
    }
    m.images.push_back(w);
  }
  return m;
}

// ---------------------------------------------------------------------------
// filled structures (Theorem surgery bookkeeping)

struct FilledStructure {
  Ald origin;                                        // before filling, no A-circles
  std::vector<std::pair<std::string, int>> filled;   // (B-circle id, sign)
  std::vector<std::string> remaining;                // unfilled B-circles
  std::map<std::string, std::string> parent;         // region -> parent region (root c0 absent)
  std::map<std::string, std::string> parent_edge;    // region -> B-circle to parent
  std::map<std::string, int> level;                  // root at level 0
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> children;
  int chi_delta = 0;                                 // vs the origin surface: +1 per filled circle
};

// f_* for the link obtained by ±1 filling every B-circle of a tree ALD.
// Edge word for region v with parent p and filling sign e:
//   W(v) = (x_v x_p^-1)^e   (x_{c0} omitted)
// and the image of u_v is W(v) times the product of W(u)^-1 over the
// children u of v in cyclic order.
inline GeneratorMap build_fstar_filled(const FilledStructure& fs) {
  require(fs.remaining.empty(), errc::bad_input, "all B-circles must be filled");
  const Ald& ald = fs.origin;
  GeneratorMap m;
  std::vector<std::string> cs;
  for (const auto& r : ald.c_regions)
    if (r.id != ald.unbounded) cs.push_back(r.id);
  std::sort(cs.begin(), cs.end());
  m.domain = cs;
  m.codomain = cs;
  std::map<std::string, int> xidx;
  for (int i = 0; i < static_cast<int>(cs.size()); ++i) xidx[cs[i]] = i;
  std::map<std::string, int> sign_of;
  for (const auto& [id, sgn] : fs.filled) sign_of[id] = sgn;

  auto edge_word = [&](const std::string& v) -> Word {
    auto pit = fs.parent.find(v);
    require(pit != fs.parent.end(), errc::not_a_tree, "region outside the leveled tree: " + v);
    const std::string& p = pit->second;
    int sgn = sign_of.at(fs.parent_edge.at(v));
    Word w;
    w.push({xidx.at(v), +1});
    if (xidx.count(p)) w.push({xidx.at(p), -1});
    return sgn > 0 ? w : w.inverse();
  };

  for (const auto& v : cs) {
    Word w = edge_word(v);
    auto cit = fs.children.find(v);
    if (cit != fs.children.end())
      for (const auto& [child, edge] : cit->second) {
        (void)edge;
        w = w * edge_word(child).inverse();
      }
    m.images.push_back(w);
  }
  return m;
}

// ---------------------------------------------------------------------------
// homology

struct HomologyMatrix {
  std::vector<std::string> row_labels;  // u-generators
  std::vector<std::string> col_labels;  // x-generators
  std::vector<std::vector<int64_t>> m;  // exponent sums
};

inline HomologyMatrix abelianize(const GeneratorMap& gm) {
  HomologyMatrix h;
  h.row_labels = gm.domain;
  h.col_labels = gm.codomain;
  h.m.assign(gm.domain.size(), std::vector<int64_t>(gm.codomain.size(), 0));
  for (size_t i = 0; i < gm.images.size(); ++i)
    for (const Letter& l : gm.images[i].letters()) h.m[i][l.gen] += l.sign;
  return h;
}

// Exact determinant by fraction-free Bareiss elimination; intermediates are
// minors, checked for 64-bit overflow through 128-bit products.
inline int64_t det_exact(std::vector<std::vector<int64_t>> a) {
  int n = static_cast<int>(a.size());
  if (n == 0) return 1;
  for (const auto& row : a)
    require(static_cast<int>(row.size()) == n, errc::bad_input, "determinant needs a square matrix");
  int64_t prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int piv = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      std::swap(a[k], a[piv]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        __int128 num = static_cast<__int128>(a[i][j]) * a[k][k] -
                       static_cast<__int128>(a[i][k]) * a[k][j];
        __int128 q = num / prev;  // divides exactly (Bareiss)
        require(q <= INT64_MAX && q >= INT64_MIN, errc::overflow, "determinant overflow");
        a[i][j] = static_cast<int64_t>(q);
      }
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

struct HomologyWitness {
  enum Kind { disconnection, cycle };
  Kind kind = cycle;
  // Coefficient per row label; the product vector * matrix is zero.
  std::map<std::string, int64_t> coefficients;
  std::string description;
};

namespace detail {

inline std::vector<int64_t> left_multiply(const HomologyMatrix& h,
                                          const std::map<std::string, int64_t>& coeff) {
  std::vector<int64_t> out(h.col_labels.size(), 0);
  for (size_t i = 0; i < h.row_labels.size(); ++i) {
    auto it = coeff.find(h.row_labels[i]);
    if (it == coeff.end() || it->second == 0) continue;
    for (size_t j = 0; j < out.size(); ++j) out[j] += it->second * h.m[i][j];
  }
  return out;
}

}  // namespace detail

// Case 1 (disconnected): the boundary class of a component not containing
// C0 maps to zero.  Case 2 (cycle): the signed sum of the cycle's B-circle
// classes maps to zero, each edge counted +1 when traversed n-side to
// m-side.  none iff the matrix is unimodular.
inline std::optional<HomologyWitness> homology_obstruction(const FiberGraph& g,
                                                           const HomologyMatrix& h,
                                                           const std::string& unbounded) {
  // consistency: rows must be exactly the edges plus the bounded vertices
  {
    std::set<std::string> rows(h.row_labels.begin(), h.row_labels.end());
    std::set<std::string> expect;
    for (const auto& e : g.edges) expect.insert(e.id);
    for (const auto& v : g.vertices)
      if (v != unbounded) expect.insert(v);
    require(rows == expect, errc::bad_input,
            "graph and homology matrix come from different structures");
  }
  Verdict v = is_tree(g);
  if (v.outcome == Outcome::fibered) {
    int64_t det = det_exact(h.m);
    require(det == 1 || det == -1, errc::oracle_inconclusive,
            "tree instance with non-unimodular abelianization");
    return std::nullopt;
  }
  for (const auto& cert : v.certificates) {
    if (const auto* dis = std::get_if<DisconnectedCert>(&cert)) {
      for (const auto& comp : dis->components) {
        if (std::find(comp.begin(), comp.end(), unbounded) != comp.end()) continue;
        HomologyWitness w;
        w.kind = HomologyWitness::disconnection;
        std::set<std::string> verts(comp.begin(), comp.end());
        for (const auto& vert : verts) w.coefficients[vert] = 1;
        for (const auto& e : g.edges)
          if (verts.count(e.u) && verts.count(e.v)) w.coefficients[e.id] = 1;
        w.description = "boundary class of component {" + comp.front() + ", ...} maps to zero";
        auto img = detail::left_multiply(h, w.coefficients);
        for (int64_t x : img)
          require(x == 0, errc::oracle_inconclusive, "disconnection witness has nonzero image");
        return w;
      }
    }
    if (const auto* cyc = std::get_if<CycleCert>(&cert)) {
      HomologyWitness w;
      w.kind = HomologyWitness::cycle;
      for (size_t i = 0; i < cyc->edges.size(); ++i) w.coefficients[cyc->edges[i]] += cyc->directions[i];
      w.description = "signed cycle class over B-circles maps to zero";
      auto img = detail::left_multiply(h, w.coefficients);
      for (int64_t x : img)
        require(x == 0, errc::oracle_inconclusive, "cycle witness has nonzero image");
      return w;
    }
  }
  fail(errc::oracle_inconclusive, "non-tree graph without a certificate");
}

// ---------------------------------------------------------------------------
// the oracle

struct OracleVerdict {
  Outcome outcome = Outcome::inapplicable;
  std::optional<NielsenTrace> trace;       // Fibered
  std::optional<HomologyWitness> witness;  // NotFibered
};

// Decides fiberedness by Stallings' criterion alone: Nielsen reduction for
// surjectivity (Hopfian: surjective implies isomorphism), homology witnesses
// otherwise.  A-circles are deplumbed internally; agreement with the G_B
// tree test is this module's reason to exist.
inline OracleVerdict verify(const Ald& ald, long budget = default_step_budget()) {
  {
    auto violations = validate(ald);
    require(violations.empty(), errc::bad_input,
            "invalid ALD: " + (violations.empty() ? "" : violations.front().code));
  }
  require(!ald.any_alternating(), errc::not_flat,
          "oracle applies to flat ALDs; lift alternating circles first");
  Ald flat = strip_a_circles(ald);

  GeneratorMap gm = build_fstar(flat);
  NielsenResult nr = nielsen_generates(gm.images, gm.rank(), budget);
  OracleVerdict out;
  if (nr.generates) {
    out.outcome = Outcome::fibered;
    out.trace = nr.trace;
    return out;
  }
  auto witness = homology_obstruction(build_gb(flat), abelianize(gm), flat.unbounded);
  require(witness.has_value(), errc::oracle_inconclusive,
          "Nielsen reduction failed but the abelianization is unimodular");
  out.outcome = Outcome::not_fibered;
  out.witness = witness;
  return out;
}

// ---------------------------------------------------------------------------
// trace serialization

inline nlohmann::json to_json(const NielsenTrace& tr, const std::vector<std::string>& names) {
  nlohmann::json j;
  auto words = [&](const std::vector<Word>& t) {
    nlohmann::json a = nlohmann::json::array();
    for (const Word& w : t) {
      nlohmann::json jw = nlohmann::json::array();
      for (const Letter& l : w.letters()) jw.push_back({{"gen", names[l.gen]}, {"exp", l.sign}});
      a.push_back(jw);
    }
    return a;
  };
  j["initial"] = words(tr.initial);
  j["moves"] = nlohmann::json::array();
  static const char* kind_names[] = {"swap", "invert", "mult_left", "mult_right"};
  for (size_t k = 0; k < tr.moves.size(); ++k) {
    const auto& m = tr.moves[k];
    nlohmann::json jm;
    jm["op"] = kind_names[m.kind];
    jm["i"] = m.i;
    jm["j"] = m.j;
    jm["sign"] = m.sign;
    jm["after"] = words(tr.snapshots[k]);
    j["moves"].push_back(jm);
  }
  return j;
}

}  // namespace augfiber
