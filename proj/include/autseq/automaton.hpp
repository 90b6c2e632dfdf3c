#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "digits.hpp"
#include "subset.hpp"

namespace autseq {

using State = std::uint32_t;

/// Deterministic finite automaton with output over digits 0..k-1.
struct Dfao {
  unsigned k = 2;
  std::vector<std::string> state_names;
  std::vector<State> delta; // delta[q * k + a]
  State initial = 0;
  std::vector<std::uint32_t> output;                           // label index per state
  std::vector<std::string> labels;                             // distinct output symbols
  std::vector<std::optional<std::complex<double>>> embedding;  // per label, may be empty

  std::size_t size() const { return state_names.size(); }
  State next(State q, Digit a) const { return delta[q * k + a]; }
  const std::string& label_of(State q) const { return labels[output[q]]; }

  bool has_embedding() const
  {
    if (embedding.size() != labels.size())
      return false;
    return std::all_of(embedding.begin(), embedding.end(), [](auto& e) { return e.has_value(); });
  }

  TransitionTable table() const { return TransitionTable{size(), k, delta}; }

  State index_of(const std::string& name) const
  {
    auto it = std::find(state_names.begin(), state_names.end(), name);
    if (it == state_names.end())
      throw std::invalid_argument("unknown state '" + name + "'");
    return static_cast<State>(it - state_names.begin());
  }

  /// Structural checks: table dimensions, index ranges.
  void validate() const
  {
    check_base(k);
    if (state_names.empty())
      throw std::invalid_argument("automaton has no states");
    if (delta.size() != size() * k)
      throw std::invalid_argument("transition table has wrong size");
    for (auto t : delta)
      if (t >= size())
        throw std::invalid_argument("transition target out of range");
    if (initial >= size())
      throw std::invalid_argument("initial state out of range");
    if (output.size() != size())
      throw std::invalid_argument("output table has wrong size");
    for (auto o : output)
      if (o >= labels.size())
        throw std::invalid_argument("output label out of range");
    for (auto& e : embedding)
      if (e && (!std::isfinite(e->real()) || !std::isfinite(e->imag())))
        throw std::invalid_argument("embedding must be finite");
  }
};

/// Convenience builder; labels are collected in order of first appearance.
inline Dfao make_dfao(unsigned k, std::vector<std::string> names,
                      const std::vector<std::vector<std::string>>& transitions,
                      const std::vector<std::string>& outputs, const std::string& initial)
{
  Dfao a;
  a.k = k;
  a.state_names = std::move(names);
  if (transitions.size() != a.size() || outputs.size() != a.size())
    throw std::invalid_argument("table sizes do not match state count");
  for (std::size_t q = 0; q < a.size(); ++q) {
    if (transitions[q].size() != k)
      throw std::invalid_argument("state '" + a.state_names[q] + "' needs exactly " +
                                  std::to_string(k) + " transitions");
    for (auto& t : transitions[q])
      a.delta.push_back(a.index_of(t));
  }
  for (auto& o : outputs) {
    auto it = std::find(a.labels.begin(), a.labels.end(), o);
    if (it == a.labels.end()) {
      a.output.push_back(static_cast<std::uint32_t>(a.labels.size()));
      a.labels.push_back(o);
    } else {
      a.output.push_back(static_cast<std::uint32_t>(it - a.labels.begin()));
    }
  }
  a.initial = a.index_of(initial);
  a.validate();
  return a;
}

inline State run(const Dfao& a, State q, const Word& w)
{
  for (Digit d : w) {
    if (d >= a.k)
      throw std::invalid_argument("digit out of range");
    q = a.next(q, d);
  }
  return q;
}

inline State state_at(const Dfao& a, std::uint64_t n)
{
  return run(a, a.initial, digits_of(n, a.k));
}

inline const std::string& sequence_term(const Dfao& a, std::uint64_t n)
{
  return a.label_of(state_at(a, n));
}

/// End states delta(q0, (n)_k) for all n < count, using (n)_k = (n div k)_k followed by n mod k.
inline std::vector<State> state_sequence(const Dfao& a, std::uint64_t count)
{
  std::vector<State> s(count);
  if (count == 0)
    return s;
  s[0] = a.initial;
  for (std::uint64_t n = 1; n < count; ++n)
    s[n] = a.next(s[n / a.k], static_cast<Digit>(n % a.k));
  return s;
}

struct SccReport {
  std::vector<std::vector<State>> components; // sorted by smallest member
  std::vector<bool> final_flags;
  std::vector<std::uint64_t> periods;         // 0 for a component without cycles
  std::vector<std::size_t> component_of;      // per state

  std::vector<std::size_t> final_components() const
  {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < components.size(); ++i)
      if (final_flags[i])
        r.push_back(i);
    return r;
  }
};

/// Tarjan SCC over a dense table, with a period per component.
inline SccReport scc_decompose(const TransitionTable& t)
{
  const std::size_t n = t.n;
  std::vector<std::int64_t> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<State> stack;
  std::vector<std::vector<State>> comps;
  std::int64_t counter = 0;

  struct Frame {
    State v;
    Digit next_digit;
  };
  for (State root = 0; root < n; ++root) {
    if (index[root] >= 0)
      continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next_digit < t.k) {
        State w = t(f.v, f.next_digit++);
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      State v = f.v;
      call.pop_back();
      if (!call.empty())
        low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<State> c;
        State w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          c.push_back(w);
        } while (w != v);
        std::sort(c.begin(), c.end());
        comps.push_back(std::move(c));
      }
    }
  }
  std::sort(comps.begin(), comps.end(), [](auto& x, auto& y) { return x.front() < y.front(); });

  SccReport r;
  r.components = comps;
  r.component_of.assign(n, 0);
  for (std::size_t c = 0; c < comps.size(); ++c)
    for (auto q : comps[c])
      r.component_of[q] = c;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    bool closed = true;
    for (auto q : comps[c])
      for (Digit a = 0; a < t.k; ++a)
        if (r.component_of[t(q, a)] != c)
          closed = false;
    r.final_flags.push_back(closed);

    // Period: gcd of level(u) + 1 - level(v) over internal edges.
    std::vector<std::int64_t> level(n, -1);
    std::vector<State> queue{comps[c].front()};
    level[comps[c].front()] = 0;
    std::uint64_t g = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      State u = queue[h];
      for (Digit a = 0; a < t.k; ++a) {
        State v = t(u, a);
        if (r.component_of[v] != c)
          continue;
        if (level[v] < 0) {
          level[v] = level[u] + 1;
          queue.push_back(v);
        } else {
          auto diff = level[u] + 1 - level[v];
          g = std::gcd(g, static_cast<std::uint64_t>(diff < 0 ? -diff : diff));
        }
      }
    }
    r.periods.push_back(g);
  }
  return r;
}

inline SccReport scc_decompose(const Dfao& a) { return scc_decompose(a.table()); }

inline bool strongly_connected(const TransitionTable& t)
{
  return scc_decompose(t).components.size() == 1;
}

inline std::optional<Word> find_sync_word(const Dfao& a, std::size_t cap = std::size_t{1} << 20)
{
  return shortest_sync_word(a.table(), cap);
}

/// Same states and outputs, alphabet {0,...,k^p-1}, one step per p-digit block.
inline Dfao power_automaton(const Dfao& a, unsigned p)
{
  if (p == 0)
    throw std::invalid_argument("power must be positive");
  const std::uint64_t base = checked_pow(a.k, p);
  if (base > (1u << 24))
    throw std::invalid_argument("power automaton alphabet too large");
  Dfao r = a;
  r.k = static_cast<unsigned>(base);
  r.delta.assign(a.size() * base, 0);
  for (State q = 0; q < a.size(); ++q)
    for (std::uint64_t d = 0; d < base; ++d)
      r.delta[q * base + d] = run(a, q, fixed_digits(d, a.k, p));
  return r;
}

/// States reachable from the initial state.
inline std::vector<bool> reachable_states(const Dfao& a)
{
  std::vector<bool> seen(a.size(), false);
  std::vector<State> queue{a.initial};
  seen[a.initial] = true;
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (Digit d = 0; d < a.k; ++d) {
      State v = a.next(queue[h], d);
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  return seen;
}

/// Sub-automaton on a closed set of states with the given initial state.
inline Dfao restrict_to(const Dfao& a, const std::vector<State>& states, State initial)
{
  std::vector<std::int64_t> local(a.size(), -1);
  for (std::size_t i = 0; i < states.size(); ++i)
    local[states[i]] = static_cast<std::int64_t>(i);
  if (local[initial] < 0)
    throw std::invalid_argument("initial state not in the selected component");
  Dfao r;
  r.k = a.k;
  r.labels = a.labels;
  r.embedding = a.embedding;
  for (auto q : states) {
    r.state_names.push_back(a.state_names[q]);
    r.output.push_back(a.output[q]);
    for (Digit d = 0; d < a.k; ++d) {
      auto t = local[a.next(q, d)];
      if (t < 0)
        throw std::invalid_argument("state set is not closed under transitions");
      r.delta.push_back(static_cast<State>(t));
    }
  }
  r.initial = static_cast<State>(local[initial]);
  return r;
}

/// First state of a component met by a shortest path from the initial state.
inline State entry_state(const Dfao& a, const std::vector<State>& component)
{
  std::vector<bool> in(a.size(), false);
  for (auto q : component)
    in[q] = true;
  std::vector<bool> seen(a.size(), false);
  std::vector<State> queue{a.initial};
  seen[a.initial] = true;
  for (std::size_t h = 0; h < queue.size(); ++h) {
    State u = queue[h];
    if (in[u])
      return u;
    for (Digit d = 0; d < a.k; ++d) {
      State v = a.next(u, d);
      if (!seen[v]) {
        seen[v] = true;
        queue.push_back(v);
      }
    }
  }
  throw std::invalid_argument("component not reachable from the initial state");
}

/// Final component number `which` (in SCC report order) as a standalone automaton.
inline Dfao final_component(const Dfao& a, std::size_t which)
{
  auto scc = scc_decompose(a);
  auto finals = scc.final_components();
  if (which >= finals.size())
    throw std::invalid_argument("automaton has only " + std::to_string(finals.size()) +
                                " final components");
  const auto& comp = scc.components[finals[which]];
  return restrict_to(a, comp, entry_state(a, comp));
}

} // namespace autseq
