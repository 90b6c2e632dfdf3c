#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "automaton.hpp"
#include "perm.hpp"

namespace autseq {

/// Synchronizing transducer on n0-tuples of automaton states with permutation outputs.
struct Transducer {
  unsigned k = 2;
  std::size_t n0 = 1;
  std::vector<std::vector<State>> states; // tuples of automaton state indices
  std::vector<std::uint32_t> delta;       // delta[q * k + a]
  std::vector<Perm> lambda;               // lambda[q * k + a]
  std::uint32_t initial = 0;

  std::size_t size() const { return states.size(); }
  std::uint32_t next(std::uint32_t q, Digit a) const { return delta[q * k + a]; }
  const Perm& weight(std::uint32_t q, Digit a) const { return lambda[q * k + a]; }
  TransitionTable table() const { return TransitionTable{size(), k, delta}; }
};

struct MinSets {
  std::size_t n0 = 0;
  std::vector<StateSet> sets; // BFS discovery order
};

inline void require_strongly_connected(const Dfao& a)
{
  if (!strongly_connected(a.table()))
    throw std::invalid_argument("automaton is not strongly connected");
}

inline MinSets reachable_min_sets(const Dfao& a, std::size_t cap = std::size_t{1} << 20)
{
  require_strongly_connected(a);
  auto search = subset_bfs(a.table(), full_set(a.size()), cap);
  MinSets r;
  r.n0 = a.size();
  for (auto& s : search.sets)
    r.n0 = std::min(r.n0, s.size());
  for (auto& s : search.sets)
    if (s.size() == r.n0)
      r.sets.push_back(s);
  return r;
}

/// Canonical naturally induced transducer: tuples sorted by state index with the
/// initial automaton state first; the transducer's initial state is listed first.
inline Transducer build_naturally_induced(const Dfao& a, std::size_t cap = std::size_t{1} << 20)
{
  auto ms = reachable_min_sets(a, cap);
  auto rank = [&](State q) { return q == a.initial ? 0u : q + 1u; };

  std::size_t init_set = ms.sets.size();
  for (std::size_t i = 0; i < ms.sets.size(); ++i)
    if (std::find(ms.sets[i].begin(), ms.sets[i].end(), a.initial) != ms.sets[i].end()) {
      init_set = i;
      break;
    }
  if (init_set == ms.sets.size())
    throw std::logic_error("no minimal set contains the initial state");

  std::vector<std::size_t> order{init_set};
  for (std::size_t i = 0; i < ms.sets.size(); ++i)
    if (i != init_set)
      order.push_back(i);

  Transducer t;
  t.k = a.k;
  t.n0 = ms.n0;
  std::unordered_map<StateSet, std::uint32_t, StateSetHash> index;
  for (auto i : order) {
    auto tuple = ms.sets[i];
    std::sort(tuple.begin(), tuple.end(), [&](State x, State y) { return rank(x) < rank(y); });
    index.emplace(ms.sets[i], static_cast<std::uint32_t>(t.states.size()));
    t.states.push_back(std::move(tuple));
  }

  for (std::uint32_t q = 0; q < t.size(); ++q) {
    for (Digit d = 0; d < a.k; ++d) {
      std::vector<State> y(t.n0);
      for (std::size_t i = 0; i < t.n0; ++i)
        y[i] = a.next(t.states[q][i], d);
      StateSet key(y);
      std::sort(key.begin(), key.end());
      auto it = index.find(key);
      if (it == index.end())
        throw std::logic_error("image of a minimal set is not minimal");
      const auto& z = t.states[it->second];
      // lambda with lambda.z = y, i.e. lambda(position of y_i in z) = i.
      std::vector<std::uint32_t> m(t.n0);
      for (std::size_t i = 0; i < t.n0; ++i) {
        auto pos = std::find(z.begin(), z.end(), y[i]) - z.begin();
        m[pos] = static_cast<std::uint32_t>(i);
      }
      t.delta.push_back(it->second);
      t.lambda.emplace_back(std::move(m));
    }
  }
  t.initial = 0;
  return t;
}

struct Transduction {
  Perm weight;
  std::uint32_t end;
};

/// T(q, w) and delta(q, w).
inline Transduction transduce(const Transducer& t, std::uint32_t q, const Word& w)
{
  Perm g = Perm::identity(t.n0);
  for (Digit d : w) {
    if (d >= t.k)
      throw std::invalid_argument("digit out of range");
    g = g * t.weight(q, d);
    q = t.next(q, d);
  }
  return {std::move(g), q};
}

/// pi_1(T(q0, (n)_k) . delta(q0, (n)_k)).
inline State reconstruct_output(const Transducer& t, std::uint64_t n)
{
  auto r = transduce(t, t.initial, digits_of(n, t.k));
  return t.states[r.end][r.weight.inverse()(0)];
}

/// Re-order every tuple: q -> sigma_q.q, lambda -> sigma_q * lambda * sigma_{delta}^-1.
inline Transducer reorder(const Transducer& t, const std::vector<Perm>& sigma)
{
  if (sigma.size() != t.size())
    throw std::invalid_argument("need one permutation per transducer state");
  Transducer r = t;
  for (std::uint32_t q = 0; q < t.size(); ++q)
    r.states[q] = sigma[q].act(t.states[q]);
  if (r.states[t.initial][0] != t.states[t.initial][0])
    throw std::invalid_argument("reordering moves the initial automaton state off coordinate 1");
  for (std::uint32_t q = 0; q < t.size(); ++q)
    for (Digit d = 0; d < t.k; ++d)
      r.lambda[q * t.k + d] = sigma[q] * t.weight(q, d) * sigma[t.next(q, d)].inverse();
  return r;
}

struct InducedDiagnostics {
  static constexpr std::array<const char*, 8> names = {
      "tuple width",          "initial coordinate",  "weights are permutations",
      "action compatibility", "distinct coordinates", "no permuted duplicates",
      "strongly connected",   "synchronizing"};
  std::array<bool, 8> pass{};
  std::vector<std::string> messages;

  bool all() const
  {
    return std::all_of(pass.begin(), pass.end(), [](bool b) { return b; });
  }
};

/// Checks the eight defining properties of a naturally induced transducer.
inline InducedDiagnostics verify_induced(const Transducer& t, const Dfao& a)
{
  InducedDiagnostics r;
  r.pass.fill(true);
  auto fail = [&](int i, std::string msg) {
    r.pass[i] = false;
    r.messages.push_back(std::string(InducedDiagnostics::names[i]) + ": " + msg);
  };
  const bool shape_ok = t.size() > 0 && t.delta.size() == t.size() * t.k &&
                        t.lambda.size() == t.size() * t.k && t.initial < t.size() && t.k == a.k;
  if (!shape_ok) {
    for (int i = 0; i < 8; ++i)
      fail(i, "malformed transducer tables");
    return r;
  }
  for (std::size_t q = 0; q < t.size(); ++q) {
    if (t.states[q].size() != t.n0)
      fail(0, "state " + std::to_string(q) + " has wrong width");
    for (auto s : t.states[q])
      if (s >= a.size())
        fail(0, "state " + std::to_string(q) + " references unknown automaton state");
  }
  if (!r.pass[0]) {
    for (int i = 1; i < 8; ++i)
      fail(i, "skipped after width failure");
    return r;
  }
  if (t.states[t.initial][0] != a.initial)
    fail(1, "first coordinate of the initial state is not the automaton's initial state");
  for (auto& p : t.lambda)
    if (p.size() != t.n0)
      fail(2, "weight of wrong degree");
  if (!r.pass[2]) {
    fail(3, "skipped after weight failure");
  } else {
    for (std::uint32_t q = 0; q < t.size(); ++q)
      for (Digit d = 0; d < t.k; ++d) {
        std::vector<State> img(t.n0);
        for (std::size_t i = 0; i < t.n0; ++i)
          img[i] = a.next(t.states[q][i], d);
        if (img != t.weight(q, d).act(t.states[t.next(q, d)]))
          fail(3, "delta'(q,a) != lambda(q,a).delta(q,a) at state " + std::to_string(q) +
                      ", digit " + std::to_string(d));
      }
  }
  std::set<StateSet> seen;
  for (std::size_t q = 0; q < t.size(); ++q) {
    StateSet s(t.states[q]);
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end())
      fail(4, "state " + std::to_string(q) + " repeats a coordinate");
    if (!seen.insert(s).second)
      fail(5, "state " + std::to_string(q) + " is a permutation of an earlier state");
  }
  if (!strongly_connected(t.table()))
    fail(6, "transducer graph is not strongly connected");
  if (!shortest_sync_word(t.table()))
    fail(7, "no synchronizing word");
  return r;
}

inline std::optional<Word> find_sync_word(const Transducer& t,
                                          std::size_t cap = std::size_t{1} << 20)
{
  return shortest_sync_word(t.table(), cap);
}

/// The trivial transducer of an automaton: singleton tuples, identity weights.
inline Transducer trivial_transducer(const Dfao& a)
{
  Transducer t;
  t.k = a.k;
  t.n0 = 1;
  for (State q = 0; q < a.size(); ++q)
    t.states.push_back({q});
  t.delta = a.delta;
  t.lambda.assign(a.delta.size(), Perm::identity(1));
  t.initial = a.initial;
  return t;
}

/// Output reconstruction for automata that need not be strongly connected: the
/// digits are read on the automaton until a final component is entered, the rest
/// goes through that component's induced transducer (one per entry state).
class ComponentReconstructor {
public:
  explicit ComponentReconstructor(Dfao a) : a_(std::move(a)), scc_(scc_decompose(a_)) {}

  State operator()(std::uint64_t n)
  {
    Word w = digits_of(n, a_.k);
    State q = a_.initial;
    std::size_t i = 0;
    while (i < w.size() && !scc_.final_flags[scc_.component_of[q]])
      q = a_.next(q, w[i++]);
    if (!scc_.final_flags[scc_.component_of[q]])
      return q;
    auto& entry = lookup(q);
    auto r = transduce(entry.t, entry.t.initial, Word(w.begin() + static_cast<long>(i), w.end()));
    return entry.global[entry.t.states[r.end][r.weight.inverse()(0)]];
  }

  std::size_t transducers_built() const { return cache_.size(); }

private:
  struct Entry {
    Transducer t;
    std::vector<State> global;
  };

  Entry& lookup(State q)
  {
    auto it = cache_.find(q);
    if (it != cache_.end())
      return it->second;
    const auto& comp = scc_.components[scc_.component_of[q]];
    Entry e{build_naturally_induced(restrict_to(a_, comp, q)), comp};
    return cache_.emplace(q, std::move(e)).first->second;
  }

  Dfao a_;
  SccReport scc_;
  std::map<State, Entry> cache_;
};

} // namespace autseq
