#pragma once

// Breadth-first search in the subset automaton of a dense transition table.

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "digits.hpp"

namespace autseq {

using StateSet = std::vector<std::uint32_t>; // sorted, duplicate free

struct StateSetHash {
  std::size_t operator()(const StateSet& s) const noexcept
  {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto v : s)
      h = (h ^ v) * 0x100000001b3ull + (h >> 29);
    return h;
  }
};

/// A dense (state, digit) -> state table.
struct TransitionTable {
  std::size_t n = 0;
  unsigned k = 2;
  std::vector<std::uint32_t> next; // next[q * k + a]

  std::uint32_t operator()(std::uint32_t q, Digit a) const { return next[q * k + a]; }
};

inline StateSet image(const TransitionTable& t, const StateSet& s, Digit a)
{
  std::vector<bool> mark(t.n, false);
  for (auto q : s)
    mark[t(q, a)] = true;
  StateSet r;
  for (std::uint32_t q = 0; q < t.n; ++q)
    if (mark[q])
      r.push_back(q);
  return r;
}

struct SubsetSearch {
  std::vector<StateSet> sets;        // discovery order
  std::vector<std::size_t> depth;    // BFS depth of each set
  std::vector<std::int64_t> parent;  // index of the parent set, -1 for the root
  std::vector<Digit> via;            // digit read from the parent

  Word word_to(std::size_t idx) const
  {
    Word w;
    for (auto i = static_cast<std::int64_t>(idx); parent[i] >= 0; i = parent[i])
      w.push_back(via[i]);
    return Word(w.rbegin(), w.rend());
  }
};

/// All subsets reachable from `start`, breadth first.
inline SubsetSearch subset_bfs(const TransitionTable& t, const StateSet& start,
                               std::size_t cap = std::size_t{1} << 20)
{
  SubsetSearch out;
  std::unordered_map<StateSet, std::size_t, StateSetHash> seen;
  out.sets.push_back(start);
  out.depth.push_back(0);
  out.parent.push_back(-1);
  out.via.push_back(0);
  seen.emplace(start, 0);
  for (std::size_t head = 0; head < out.sets.size(); ++head) {
    for (Digit a = 0; a < t.k; ++a) {
      StateSet img = image(t, out.sets[head], a);
      if (seen.count(img))
        continue;
      if (out.sets.size() >= cap)
        throw std::runtime_error("subset search exceeded cap of " + std::to_string(cap) +
                                 " subsets");
      seen.emplace(img, out.sets.size());
      out.sets.push_back(std::move(img));
      out.depth.push_back(out.depth[head] + 1);
      out.parent.push_back(static_cast<std::int64_t>(head));
      out.via.push_back(a);
    }
  }
  return out;
}

inline StateSet full_set(std::size_t n)
{
  StateSet s(n);
  for (std::uint32_t i = 0; i < n; ++i)
    s[i] = i;
  return s;
}

/// Shortest word w with |delta(Q, w)| = 1, if any.
inline std::optional<Word> shortest_sync_word(const TransitionTable& t,
                                              std::size_t cap = std::size_t{1} << 20)
{
  if (t.n == 0)
    return std::nullopt;
  // Stop as soon as a singleton appears; BFS order makes it shortest.
  std::unordered_map<StateSet, std::size_t, StateSetHash> seen;
  std::vector<StateSet> sets{full_set(t.n)};
  std::vector<std::int64_t> parent{-1};
  std::vector<Digit> via{0};
  seen.emplace(sets[0], 0);
  auto word = [&](std::size_t idx) {
    Word w;
    for (auto i = static_cast<std::int64_t>(idx); parent[i] >= 0; i = parent[i])
      w.push_back(via[i]);
    return Word(w.rbegin(), w.rend());
  };
  if (sets[0].size() == 1)
    return Word{};
  for (std::size_t head = 0; head < sets.size(); ++head) {
    for (Digit a = 0; a < t.k; ++a) {
      StateSet img = image(t, sets[head], a);
      if (seen.count(img))
        continue;
      if (sets.size() >= cap)
        throw std::runtime_error("subset search exceeded cap of " + std::to_string(cap) +
                                 " subsets");
      seen.emplace(img, sets.size());
      sets.push_back(std::move(img));
      parent.push_back(static_cast<std::int64_t>(head));
      via.push_back(a);
      if (sets.back().size() == 1)
        return word(sets.size() - 1);
    }
  }
  return std::nullopt;
}

} // namespace autseq
