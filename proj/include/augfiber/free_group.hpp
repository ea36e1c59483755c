#pragma once

// Freely reduced words and Nielsen reduction.  A square tuple generates the
// free group iff greedy length reduction (with a bounded exhaustive fallback
// for short plateaus) carries it to the standard basis up to permutation and
// inversion; the move sequence is recorded as a replayable trace.

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "augfiber/errors.hpp"

namespace augfiber {

struct Letter {
  int gen = 0;
  int sign = +1;
  bool operator==(const Letter&) const = default;
  auto operator<=>(const Letter&) const = default;
};

// Invariant: freely reduced (no adjacent g g^-1).
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters) {
    for (const Letter& l : letters) push(l);
  }
  static Word generator(int g, int sign = +1) { return Word({Letter{g, sign}}); }

  void push(Letter l) {
    if (!ls_.empty() && ls_.back().gen == l.gen && ls_.back().sign == -l.sign)
      ls_.pop_back();
    else
      ls_.push_back(l);
  }
  Word inverse() const {
    Word w;
    for (auto it = ls_.rbegin(); it != ls_.rend(); ++it) w.ls_.push_back({it->gen, -it->sign});
    return w;
  }
  friend Word operator*(const Word& a, const Word& b) {
    Word w = a;
    for (const Letter& l : b.ls_) w.push(l);
    return w;
  }
  size_t length() const { return ls_.size(); }
  bool empty() const { return ls_.empty(); }
  const std::vector<Letter>& letters() const { return ls_; }
  bool operator==(const Word&) const = default;
  auto operator<=>(const Word&) const = default;

  std::string str(const std::vector<std::string>* names = nullptr) const {
    if (ls_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const Letter& l : ls_) {
      if (!first) os << "*";
      first = false;
      if (names && l.gen >= 0 && l.gen < static_cast<int>(names->size()))
        os << (*names)[l.gen];
      else
        os << "x" << l.gen;
      if (l.sign < 0) os << "^-1";
    }
    return os.str();
  }

 private:
  std::vector<Letter> ls_;
};

// ---------------------------------------------------------------------------
// Nielsen moves

struct NielsenMove {
  enum Kind { swap_slots, invert, mult_left, mult_right };
  Kind kind = mult_right;
  int i = 0, j = 0;
  int sign = +1;

  NielsenMove inverted() const {
    NielsenMove m = *this;
    if (kind == mult_left || kind == mult_right) m.sign = -sign;
    return m;
  }
};

inline void apply_move(std::vector<Word>& tuple, const NielsenMove& m) {
  switch (m.kind) {
    case NielsenMove::swap_slots: std::swap(tuple[m.i], tuple[m.j]); break;
    case NielsenMove::invert: tuple[m.i] = tuple[m.i].inverse(); break;
    case NielsenMove::mult_left: {
      Word f = m.sign > 0 ? tuple[m.j] : tuple[m.j].inverse();
      tuple[m.i] = f * tuple[m.i];
      break;
    }
    case NielsenMove::mult_right: {
      Word f = m.sign > 0 ? tuple[m.j] : tuple[m.j].inverse();
      tuple[m.i] = tuple[m.i] * f;
      break;
    }
  }
}

struct NielsenTrace {
  std::vector<Word> initial;
  std::vector<NielsenMove> moves;
  std::vector<std::vector<Word>> snapshots;  // tuple after each move

  std::vector<Word> replay() const {
    std::vector<Word> t = initial;
    for (const auto& m : moves) apply_move(t, m);
    return t;
  }
  // Undo from the final tuple back to the initial one.
  std::vector<Word> replay_inverse() const {
    std::vector<Word> t = snapshots.empty() ? initial : snapshots.back();
    for (auto it = moves.rbegin(); it != moves.rend(); ++it) apply_move(t, it->inverted());
    return t;
  }
};

struct NielsenResult {
  bool generates = false;
  NielsenTrace trace;
  std::vector<Word> reduced;  // final tuple
};

inline long default_step_budget() {
  if (const char* s = std::getenv("AUGFIBER_STEP_BUDGET")) {
    long v = std::atol(s);
    if (v > 0) return v;
  }
  return 2'000'000;
}

namespace detail {

inline bool is_standard_basis(const std::vector<Word>& tuple, int rank) {
  if (static_cast<int>(tuple.size()) != rank) return false;
  std::set<int> seen;
  for (const Word& w : tuple) {
    if (w.length() != 1) return false;
    seen.insert(w.letters()[0].gen);
  }
  return static_cast<int>(seen.size()) == rank;
}

inline size_t total_length(const std::vector<Word>& t) {
  size_t n = 0;
  for (const Word& w : t) n += w.length();
  return n;
}

inline std::string tuple_key(const std::vector<Word>& t) {
  std::ostringstream os;
  for (const Word& w : t) {
    for (const Letter& l : w.letters()) os << (l.sign > 0 ? '+' : '-') << l.gen << ',';
    os << '|';
  }
  return os.str();
}

}  // namespace detail

// Greedy total-length reduction; on a plateau short of the basis, bounded
// breadth-first search through non-increasing moves (total length < 16).
inline NielsenResult nielsen_generates(const std::vector<Word>& images, int rank,
                                       long budget = default_step_budget()) {
  require(static_cast<int>(images.size()) == rank, errc::rank_mismatch,
          "need exactly rank words, got " + std::to_string(images.size()) + " for rank " +
              std::to_string(rank));
  NielsenResult res;
  res.trace.initial = images;
  std::vector<Word> t = images;
  long steps = 0;

  auto record = [&](const NielsenMove& m) {
    apply_move(t, m);
    res.trace.moves.push_back(m);
    res.trace.snapshots.push_back(t);
  };

  for (;;) {
    if (++steps > budget) fail(errc::step_budget_exceeded, "Nielsen search exceeded step budget");
    long best_gain = 0;
    NielsenMove best{};
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) {
        if (i == j || t[j].empty()) continue;
        for (int sign : {+1, -1}) {
          Word f = sign > 0 ? t[j] : t[j].inverse();
          long gl = static_cast<long>(t[i].length()) - static_cast<long>((f * t[i]).length());
          if (gl > best_gain) {
            best_gain = gl;
            best = {NielsenMove::mult_left, i, j, sign};
          }
          long gr = static_cast<long>(t[i].length()) - static_cast<long>((t[i] * f).length());
          if (gr > best_gain) {
            best_gain = gr;
            best = {NielsenMove::mult_right, i, j, sign};
          }
        }
      }
    if (best_gain <= 0) break;
    record(best);
  }

  if (detail::is_standard_basis(t, rank)) {
    res.generates = true;
    res.reduced = t;
    return res;
  }

  // Plateau fallback: bounded BFS over non-increasing moves.
  size_t total = detail::total_length(t);
  if (total < 16 && rank > 0) {
    struct Node {
      std::vector<Word> tuple;
      int parent = -1;
      NielsenMove via{};
    };
    std::vector<Node> nodes{{t, -1, {}}};
    std::map<std::string, int> seen{{detail::tuple_key(t), 0}};
    std::optional<int> goal;
    for (size_t qi = 0; qi < nodes.size() && !goal; ++qi) {
      if (++steps > budget) fail(errc::step_budget_exceeded, "Nielsen search exceeded step budget");
      std::vector<Word> cur = nodes[qi].tuple;  // copy: nodes may reallocate
      for (int i = 0; i < rank && !goal; ++i)
        for (int j = 0; j < rank && !goal; ++j) {
          if (i == j || cur[j].empty()) continue;
          for (auto kind : {NielsenMove::mult_left, NielsenMove::mult_right}) {
            for (int sign : {+1, -1}) {
              NielsenMove m{kind, i, j, sign};
              std::vector<Word> next = cur;
              apply_move(next, m);
              if (detail::total_length(next) > total) continue;
              auto key = detail::tuple_key(next);
              if (seen.count(key)) continue;
              seen[key] = static_cast<int>(nodes.size());
              nodes.push_back({next, static_cast<int>(qi), m});
              if (++steps > budget)
                fail(errc::step_budget_exceeded, "Nielsen search exceeded step budget");
              if (detail::is_standard_basis(next, rank)) {
                goal = static_cast<int>(nodes.size()) - 1;
                break;
              }
            }
            if (goal) break;
          }
        }
    }
    if (goal) {
      std::vector<NielsenMove> path;
      for (int at = *goal; nodes[at].parent >= 0; at = nodes[at].parent) path.push_back(nodes[at].via);
      std::reverse(path.begin(), path.end());
      for (const auto& m : path) record(m);
      res.generates = true;
      res.reduced = t;
      return res;
    }
  }

  res.generates = detail::is_standard_basis(t, rank);
  res.reduced = t;
  return res;
}

}  // namespace augfiber
