#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "group.hpp"
#include "transducer.hpp"

namespace autseq {

/// Nodes (q, g) for q a transducer state and g in Delta, the group generated by
/// the weights; reading a moves (q, g) to (delta(q,a), g * lambda(q,a)).
class ProductGraph {
public:
  explicit ProductGraph(Transducer t, std::size_t cap = default_group_cap) : t_(std::move(t))
  {
    delta_ = GroupTable::generate(t_.lambda, t_.n0, cap);
    std::vector<Perm> gens;
    for (auto& l : t_.lambda) {
      auto it = std::find(gens.begin(), gens.end(), l);
      gen_of_.push_back(static_cast<std::uint32_t>(it - gens.begin()));
      if (it == gens.end())
        gens.push_back(l);
    }
    right_.resize(gens.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
      right_[i].resize(delta_.order());
      for (std::size_t g = 0; g < delta_.order(); ++g)
        right_[i][g] = static_cast<std::uint32_t>(delta_.index(delta_[g] * gens[i]));
    }
  }

  const Transducer& transducer() const { return t_; }
  const GroupTable& delta() const { return delta_; }
  std::size_t order() const { return delta_.order(); }
  std::size_t size() const { return t_.size() * delta_.order(); }

  /// Delta index of g * lambda(q, a).
  std::uint32_t step_weight(std::uint32_t q, Digit a, std::uint32_t g) const
  {
    return right_[gen_of_[q * t_.k + a]][g];
  }

  std::size_t node(std::uint32_t q, std::uint32_t g) const { return q * delta_.order() + g; }

  /// BFS levels from (q, id); -1 for unreached nodes.
  std::vector<std::int64_t> levels_from(std::uint32_t q) const
  {
    std::vector<std::int64_t> level(size(), -1);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> queue{{q, 0}};
    level[node(q, 0)] = 0;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      auto [p, g] = queue[h];
      for (Digit a = 0; a < t_.k; ++a) {
        auto p2 = t_.next(p, a);
        auto g2 = step_weight(p, a, g);
        auto& l = level[node(p2, g2)];
        if (l < 0) {
          l = level[node(p, g)] + 1;
          queue.emplace_back(p2, g2);
        }
      }
    }
    return level;
  }

  /// Period of the component reached from (q, id).
  std::size_t period_from(std::uint32_t q) const
  {
    auto level = levels_from(q);
    std::uint64_t d = 0;
    for (std::uint32_t p = 0; p < t_.size(); ++p)
      for (std::uint32_t g = 0; g < order(); ++g) {
        auto lu = level[node(p, g)];
        if (lu < 0)
          continue;
        for (Digit a = 0; a < t_.k; ++a) {
          auto lv = level[node(t_.next(p, a), step_weight(p, a, g))];
          auto diff = lu + 1 - lv;
          d = std::gcd(d, static_cast<std::uint64_t>(diff < 0 ? -diff : diff));
        }
      }
    return static_cast<std::size_t>(d);
  }

  /// sets[qbar][l] = sorted Delta indices of G_{q qbar}(l), l < d.
  std::vector<std::vector<std::vector<std::uint32_t>>> cosets_from(std::uint32_t q,
                                                                  std::size_t d) const
  {
    auto level = levels_from(q);
    std::vector<std::vector<std::vector<std::uint32_t>>> sets(
        t_.size(), std::vector<std::vector<std::uint32_t>>(d));
    for (std::uint32_t p = 0; p < t_.size(); ++p)
      for (std::uint32_t g = 0; g < order(); ++g)
        if (auto l = level[node(p, g)]; l >= 0)
          sets[p][static_cast<std::size_t>(l) % d].push_back(g);
    return sets;
  }

  std::vector<Perm> to_perms(const std::vector<std::uint32_t>& idx) const
  {
    std::vector<Perm> r;
    for (auto i : idx)
      r.push_back(delta_[i]);
    return r;
  }

private:
  Transducer t_;
  GroupTable delta_;
  std::vector<std::uint32_t> gen_of_;
  std::vector<std::vector<std::uint32_t>> right_;
};

/// A word w' with delta(q, w w') = q and T(q, w w') = id.
inline Word inverse_path(const ProductGraph& pg, std::uint32_t q, const Word& w)
{
  const auto& t = pg.transducer();
  auto tr = transduce(t, q, w);
  const std::size_t start = pg.node(tr.end, static_cast<std::uint32_t>(pg.delta().index(tr.weight)));
  const std::size_t goal = pg.node(q, 0);
  std::vector<std::int64_t> parent(pg.size(), -2);
  std::vector<Digit> via(pg.size(), 0);
  std::vector<std::size_t> queue{start};
  parent[start] = -1;
  const auto ord = pg.order();
  for (std::size_t h = 0; h < queue.size() && parent[goal] == -2; ++h) {
    auto u = queue[h];
    auto p = static_cast<std::uint32_t>(u / ord);
    auto g = static_cast<std::uint32_t>(u % ord);
    for (Digit a = 0; a < t.k; ++a) {
      auto v = pg.node(t.next(p, a), pg.step_weight(p, a, g));
      if (parent[v] == -2) {
        parent[v] = static_cast<std::int64_t>(u);
        via[v] = a;
        queue.push_back(v);
      }
    }
  }
  if (parent[goal] == -2)
    throw std::logic_error("no inverse path; transducer is not naturally induced");
  Word r;
  for (auto v = static_cast<std::int64_t>(goal); parent[v] >= 0; v = parent[v])
    r.push_back(via[v]);
  return Word(r.rbegin(), r.rend());
}

struct PeriodResult {
  std::size_t d = 1;
  std::size_t m0 = 0; // observed stabilization index
};

/// d and the first m from which every exact length n*d+l (n >= m) realizes all of
/// G_{q qbar}(l), for all pairs.
inline PeriodResult compute_d(const ProductGraph& pg, std::size_t max_length = 100000)
{
  const auto& t = pg.transducer();
  const std::size_t nq = t.size(), ord = pg.order();
  PeriodResult r;
  r.d = pg.period_from(t.initial);
  if (r.d == 0)
    throw std::logic_error("product graph has no cycles");

  // expected[l] over (q, qbar, g)
  std::vector<std::vector<std::uint8_t>> expected(r.d, std::vector<std::uint8_t>(nq * nq * ord, 0));
  for (std::uint32_t q = 0; q < nq; ++q) {
    auto sets = pg.cosets_from(q, r.d);
    for (std::uint32_t qb = 0; qb < nq; ++qb)
      for (std::size_t l = 0; l < r.d; ++l)
        for (auto g : sets[qb][l])
          expected[l][(q * nq + qb) * ord + g] = 1;
  }
  std::vector<std::uint8_t> cur(nq * nq * ord, 0), nxt;
  for (std::uint32_t q = 0; q < nq; ++q)
    cur[(q * nq + q) * ord] = 1;
  for (std::size_t len = 0; len <= max_length; ++len) {
    if (cur == expected[len % r.d]) {
      r.m0 = (len + r.d - 1) / r.d;
      return r;
    }
    nxt.assign(cur.size(), 0);
    for (std::uint32_t q = 0; q < nq; ++q)
      for (std::uint32_t qb = 0; qb < nq; ++qb)
        for (std::uint32_t g = 0; g < ord; ++g) {
          if (!cur[(q * nq + qb) * ord + g])
            continue;
          for (Digit a = 0; a < t.k; ++a)
            nxt[(q * nq + t.next(qb, a)) * ord + pg.step_weight(qb, a, g)] = 1;
        }
    cur.swap(nxt);
  }
  throw std::runtime_error("walk sets did not stabilize within " + std::to_string(max_length) +
                           " steps");
}

inline PeriodResult compute_d(const Transducer& t, std::size_t cap = default_group_cap)
{
  return compute_d(ProductGraph(t, cap));
}

struct GroupResult {
  GroupTable G;
  Perm g0;
  std::vector<std::vector<Perm>> cosets; // cosets[l] = G_{q0 q0}(l)
};

inline GroupResult compute_G_g0(const ProductGraph& pg, std::size_t d)
{
  const auto& t = pg.transducer();
  auto sets = pg.cosets_from(t.initial, d);
  GroupResult r;
  r.G = GroupTable::from_elements(pg.to_perms(sets[t.initial][0]), t.n0);
  const auto& one = sets[t.initial][1 % d];
  if (one.empty())
    throw std::logic_error("no closed walk of length 1 mod d");
  r.g0 = pg.delta()[one.front()];
  for (std::size_t l = 0; l < d; ++l)
    r.cosets.push_back(pg.to_perms(sets[t.initial][l]));
  return r;
}

/// Reorder so that id lies in G_{q0 q}(0) for every q.
inline Transducer normalize_id_cosets(const Transducer& t, std::size_t cap = default_group_cap)
{
  ProductGraph pg(t, cap);
  auto d = pg.period_from(t.initial);
  auto sets = pg.cosets_from(t.initial, d);
  std::vector<Perm> sigma;
  for (std::uint32_t q = 0; q < t.size(); ++q) {
    if (sets[q][0].empty())
      throw std::logic_error("state unreachable with length 0 mod d");
    sigma.push_back(q == t.initial ? Perm::identity(t.n0) : pg.delta()[sets[q][0].front()]);
  }
  return reorder(t, sigma);
}

/// Max over targets q of the length of a shortest word sending all of Q to q.
inline std::size_t compute_l0(const Transducer& t, std::size_t cap = std::size_t{1} << 20)
{
  auto search = subset_bfs(t.table(), full_set(t.size()), cap);
  std::vector<std::int64_t> best(t.size(), -1);
  for (std::size_t i = 0; i < search.sets.size(); ++i)
    if (search.sets[i].size() == 1 && best[search.sets[i][0]] < 0)
      best[search.sets[i][0]] = static_cast<std::int64_t>(search.depth[i]);
  std::size_t l0 = 0;
  for (std::uint32_t q = 0; q < t.size(); ++q) {
    if (best[q] < 0)
      throw std::invalid_argument("state " + std::to_string(q) + " is not a synchronization target");
    l0 = std::max(l0, static_cast<std::size_t>(best[q]));
  }
  return l0;
}

/// Splits x into (coprime-to-k part, part built from primes of k).
inline std::pair<std::uint64_t, std::uint64_t> split_by_base(std::uint64_t x, std::uint64_t k)
{
  std::uint64_t dd = 1, g;
  while ((g = std::gcd(x, k)) > 1) {
    x /= g;
    dd *= g;
  }
  return {x, dd};
}

struct ArithmeticResult {
  std::uint64_t K = 1;
  std::uint64_t d_prime = 1;
  std::vector<std::vector<std::uint64_t>> d_pair;   // d(q, qbar)
  std::vector<std::vector<std::uint64_t>> d_dprime; // d''(q, qbar)
  std::uint64_t c = 0;                              // per-d-step increment of s(id)
  std::size_t k0 = 1;
  std::size_t m0_prime = 0;
  std::size_t s_length = 1;                         // s0 read off at length d * s_length
  std::vector<std::uint64_t> s0;                    // per element of G (G's order)
  GroupTable G0;
  std::optional<Perm> g0_prime;
  bool s_equal = true;                              // s^{q qbar} agrees with s^{q0 q0}
  std::vector<std::string> issues;
  // walk data at length d * s_length: residue of one walk q0 -> q of weight g, or none
  std::vector<std::vector<std::int64_t>> rep_from_q0; // [q][Delta index]
};

namespace detail {

/// Exact-length walk sets over (q, qbar, g, [w] mod K), sampled every d steps.
class ResidueWalks {
public:
  ResidueWalks(const ProductGraph& pg, std::size_t d, std::uint64_t K)
      : pg_(pg), d_(d), K_(K), nq_(pg.transducer().size()), ord_(pg.order())
  {
    const std::size_t n = nq_ * nq_ * ord_ * K_;
    if (n > (std::size_t{1} << 28))
      throw std::runtime_error("residue walk table too large (" + std::to_string(n) + " cells)");
    cur_.assign(n, 0);
    for (std::uint32_t q = 0; q < nq_; ++q)
      cur_[cell(q, q, 0, 0)] = 1;
  }

  std::size_t cell(std::size_t q, std::size_t qb, std::size_t g, std::uint64_t r) const
  {
    return ((q * nq_ + qb) * ord_ + g) * K_ + r;
  }

  void advance_block()
  {
    const auto& t = pg_.transducer();
    std::vector<std::uint8_t> nxt;
    for (std::size_t s = 0; s < d_; ++s) {
      nxt.assign(cur_.size(), 0);
      for (std::uint32_t q = 0; q < nq_; ++q)
        for (std::uint32_t qb = 0; qb < nq_; ++qb)
          for (std::uint32_t g = 0; g < ord_; ++g)
            for (std::uint64_t r = 0; r < K_; ++r) {
              if (!cur_[cell(q, qb, g, r)])
                continue;
              for (Digit a = 0; a < t.k; ++a)
                nxt[cell(q, t.next(qb, a), pg_.step_weight(qb, a, g), (r * t.k + a) % K_)] = 1;
            }
      cur_.swap(nxt);
    }
  }

  /// (gcd(K, differences), representative) per (q, qbar, g); gcd 0 marks an empty set.
  std::vector<std::pair<std::uint64_t, std::int64_t>> summary() const
  {
    std::vector<std::pair<std::uint64_t, std::int64_t>> out(nq_ * nq_ * ord_, {0, -1});
    for (std::size_t i = 0; i < out.size(); ++i) {
      std::int64_t rep = -1;
      std::uint64_t g = K_;
      for (std::uint64_t r = 0; r < K_; ++r) {
        if (!cur_[i * K_ + r])
          continue;
        if (rep < 0)
          rep = static_cast<std::int64_t>(r);
        else
          g = std::gcd(g, (r + K_ - static_cast<std::uint64_t>(rep)) % K_);
      }
      if (rep >= 0)
        out[i] = {g, rep};
    }
    return out;
  }

  std::vector<std::uint64_t> packed() const
  {
    std::vector<std::uint64_t> p((cur_.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < cur_.size(); ++i)
      if (cur_[i])
        p[i / 64] |= std::uint64_t{1} << (i % 64);
    return p;
  }

private:
  const ProductGraph& pg_;
  std::size_t d_;
  std::uint64_t K_;
  std::size_t nq_, ord_;
  std::vector<std::uint8_t> cur_;
};

struct PackedHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept
  {
    std::size_t h = 0x9e3779b97f4a7c15ull;
    for (auto x : v)
      h = (h ^ x) * 0x100000001b3ull + (h >> 31);
    return h;
  }
};

} // namespace detail

/// d', d''(q,qbar), s0, k0, m0', G0 and g0' from walk residues modulo K = k^l0 (k^d - 1).
inline ArithmeticResult compute_arithmetic(const ProductGraph& pg, std::size_t d, const GroupTable& G,
                                           std::size_t l0, std::size_t max_samples = 20000)
{
  const auto& t = pg.transducer();
  const std::size_t nq = t.size(), ord = pg.order();
  ArithmeticResult r;
  r.K = checked_pow(t.k, l0);
  const std::uint64_t kd1 = checked_pow(t.k, d) - 1;
  if (kd1 != 0 && r.K > UINT64_MAX / kd1)
    throw std::overflow_error("modulus K overflows");
  r.K *= kd1;

  // Iterate until the sampled state repeats; everything after that is periodic.
  detail::ResidueWalks walks(pg, d, r.K);
  std::vector<std::vector<std::pair<std::uint64_t, std::int64_t>>> samples;
  std::unordered_map<std::vector<std::uint64_t>, std::size_t, detail::PackedHash> seen;
  std::size_t cycle_start = 0, cycle_end = 0;
  for (std::size_t l = 0;; ++l) {
    if (l > max_samples)
      throw std::runtime_error("residue gcds did not become periodic within " +
                               std::to_string(max_samples) + " samples");
    auto key = walks.packed();
    auto [it, fresh] = seen.emplace(std::move(key), l);
    if (!fresh) {
      cycle_start = it->second;
      cycle_end = l;
      break;
    }
    samples.push_back(walks.summary());
    walks.advance_block();
  }
  const std::size_t period = cycle_end - cycle_start;
  auto at = [&](std::size_t l) -> const auto& {
    if (l >= cycle_end)
      l = cycle_start + (l - cycle_start) % period;
    return samples[l];
  };
  auto idx = [&](std::size_t q, std::size_t qb, std::size_t g) { return (q * nq + qb) * ord + g; };

  // Limit gcds; constant on the cycle by the divisor lemma.
  r.d_pair.assign(nq, std::vector<std::uint64_t>(nq, 0));
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t qb = 0; qb < nq; ++qb) {
      auto v = samples[cycle_start][idx(q, qb, 0)].first;
      for (std::size_t l = cycle_start; l < cycle_end; ++l)
        if (samples[l][idx(q, qb, 0)].first != v)
          throw std::runtime_error("gcd of identity-weight walk values oscillates");
      if (v == 0)
        throw std::runtime_error("no identity-weight walks between some pair of states");
      r.d_pair[q][qb] = v;
    }

  // m0': all weights occurring on the cycle carry the limit gcd from here on.
  std::vector<bool> live(nq * nq * ord, false);
  for (std::size_t l = cycle_start; l < cycle_end; ++l)
    for (std::size_t i = 0; i < live.size(); ++i)
      if (samples[l][i].first != 0)
        live[i] = true;
  auto stable = [&](std::size_t l) {
    for (std::size_t q = 0; q < nq; ++q)
      for (std::size_t qb = 0; qb < nq; ++qb)
        for (std::size_t g = 0; g < ord; ++g)
          if (live[idx(q, qb, g)] && samples[l][idx(q, qb, g)].first != r.d_pair[q][qb])
            return false;
    return true;
  };
  r.m0_prime = cycle_end;
  while (r.m0_prime > 0 && stable(r.m0_prime - 1))
    --r.m0_prime;

  // Coprime split.
  r.d_dprime.assign(nq, std::vector<std::uint64_t>(nq, 1));
  r.d_prime = split_by_base(r.d_pair[t.initial][t.initial], t.k).first;
  const std::uint64_t kl0 = checked_pow(t.k, l0);
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t qb = 0; qb < nq; ++qb) {
      auto [dp, ddp] = split_by_base(r.d_pair[q][qb], t.k);
      r.d_dprime[q][qb] = ddp;
      if (dp != r.d_prime)
        r.issues.push_back("d' differs between state pairs");
      if (kl0 % ddp != 0)
        r.issues.push_back("d'' does not divide k^l0");
    }
  if (kd1 % r.d_prime != 0)
    r.issues.push_back("d' does not divide k^d - 1");

  const std::uint64_t dp = r.d_prime;
  const auto q0 = t.initial;
  auto s_of = [&](std::size_t l, std::size_t g) {
    auto rep = at(l)[idx(q0, q0, g)].second;
    return rep < 0 ? std::optional<std::uint64_t>{}
                   : std::optional<std::uint64_t>{static_cast<std::uint64_t>(rep) % dp};
  };
  const std::size_t ml = std::max<std::size_t>(r.m0_prime, 1);
  auto s_id0 = s_of(ml, 0), s_id1 = s_of(ml + 1, 0);
  if (!s_id0 || !s_id1)
    throw std::runtime_error("no identity-weight closed walk at stabilized length");
  r.c = (*s_id1 + dp - *s_id0) % dp;
  r.k0 = static_cast<std::size_t>(dp / std::gcd(r.c, dp));
  for (std::size_t l = ml; l < std::max(cycle_end, ml) + period + 1; ++l) {
    auto s = s_of(l, 0);
    if (!s || *s != (static_cast<std::uint64_t>(l % dp) * r.c) % dp) {
      r.issues.push_back("s(id) is not linear in the walk length");
      break;
    }
  }

  r.s_length = r.k0 * ((ml + r.k0 - 1) / r.k0);
  std::vector<Perm> kernel;
  for (auto& g : G.elements()) {
    auto gi = pg.delta().index(g);
    auto s = s_of(r.s_length, gi);
    if (!s)
      throw std::runtime_error("element " + g.cycles() + " of G is not realized by a closed walk");
    r.s0.push_back(*s);
    if (*s == 0)
      kernel.push_back(g);
    if (!r.g0_prime && *s == 1 % dp)
      r.g0_prime = g;
    for (std::size_t q = 0; q < nq; ++q)
      for (std::size_t qb = 0; qb < nq; ++qb) {
        auto rep = at(r.s_length)[idx(q, qb, gi)].second;
        if (rep < 0 || static_cast<std::uint64_t>(rep) % dp != *s)
          r.s_equal = false;
      }
  }
  r.G0 = GroupTable::from_elements(std::move(kernel), t.n0);
  r.rep_from_q0.assign(nq, std::vector<std::int64_t>(ord, -1));
  for (std::size_t q = 0; q < nq; ++q)
    for (std::size_t g = 0; g < ord; ++g)
      r.rep_from_q0[q][g] = at(r.s_length)[idx(q0, q, g)].second;
  return r;
}

/// Reorder with sigma_q = T(q0, w), |w| = d * s_length, [w] = 0 mod d', delta(q0, w) = q.
inline Transducer normalize_s(const ProductGraph& pg, const ArithmeticResult& ar)
{
  const auto& t = pg.transducer();
  std::vector<Perm> sigma;
  for (std::uint32_t q = 0; q < t.size(); ++q) {
    if (q == t.initial) {
      sigma.push_back(Perm::identity(t.n0));
      continue;
    }
    std::optional<Perm> pick;
    for (std::size_t g = 0; g < pg.order() && !pick; ++g) {
      auto rep = ar.rep_from_q0[q][g];
      if (rep >= 0 && static_cast<std::uint64_t>(rep) % ar.d_prime == 0)
        pick = pg.delta()[g];
    }
    if (!pick)
      throw std::runtime_error("no walk with value 0 mod d' reaches state " + std::to_string(q));
    sigma.push_back(*pick);
  }
  return reorder(t, sigma);
}

struct StructureReport {
  std::size_t d = 1;
  std::size_t m0 = 0;
  std::size_t delta_order = 1;
  GroupTable G;
  Perm g0;
  std::vector<std::vector<Perm>> cosets;
  std::size_t l0 = 0;
  std::uint64_t K = 1;
  std::uint64_t d_prime = 1;
  std::vector<std::vector<std::uint64_t>> d_pair;
  std::vector<std::vector<std::uint64_t>> d_dprime;
  std::uint64_t c = 0;
  std::size_t k0 = 1;
  std::size_t m0_prime = 0;
  std::vector<std::uint64_t> s0;
  GroupTable G0;
  std::optional<Perm> g0_prime;
  bool s_equal = true;
  std::vector<std::string> issues;

  std::uint64_t s0_of(const Perm& g) const { return s0.at(G.index(g)); }
};

struct Structure {
  Transducer normalized; // id- and s-normalized
  StructureReport report;
};

/// Full pipeline: normalize id cosets, compute d, G, l0 and the arithmetic data,
/// normalize s, and report everything for the final transducer.
inline Structure analyze_structure(const Transducer& t, std::size_t cap = default_group_cap)
{
  Transducer t1 = normalize_id_cosets(t, cap);
  ProductGraph pg1(t1, cap);
  auto per = compute_d(pg1);
  auto gr1 = compute_G_g0(pg1, per.d);
  auto l0 = compute_l0(t1);
  auto ar1 = compute_arithmetic(pg1, per.d, gr1.G, l0);

  Structure s;
  s.normalized = normalize_s(pg1, ar1);
  ProductGraph pg2(s.normalized, cap);
  auto per2 = compute_d(pg2);
  auto gr2 = compute_G_g0(pg2, per2.d);
  auto ar2 = compute_arithmetic(pg2, per2.d, gr2.G, l0);

  auto& r = s.report;
  r.d = per2.d;
  r.m0 = per2.m0;
  r.delta_order = pg2.order();
  r.G = gr2.G;
  r.g0 = gr2.g0;
  r.cosets = gr2.cosets;
  r.l0 = l0;
  r.K = ar2.K;
  r.d_prime = ar2.d_prime;
  r.d_pair = ar2.d_pair;
  r.d_dprime = ar2.d_dprime;
  r.c = ar2.c;
  r.k0 = ar2.k0;
  r.m0_prime = ar2.m0_prime;
  r.s0 = ar2.s0;
  r.G0 = ar2.G0;
  r.g0_prime = ar2.g0_prime;
  r.s_equal = ar2.s_equal;
  r.issues = ar2.issues;
  if (!r.s_equal)
    r.issues.push_back("s-values differ between state pairs after normalization");
  if (!r.G0.is_closed())
    r.issues.push_back("kernel of s0 is not a subgroup");
  if (r.d_prime % r.k0 != 0)
    r.issues.push_back("k0 does not divide d'");
  if (left_translate(r.g0, r.G.elements()) != right_translate(r.G.elements(), r.g0))
    r.issues.push_back("g0 G != G g0");
  return s;
}

struct ReduceResult {
  unsigned p = 1;
  Dfao reduced;
  std::vector<std::pair<std::size_t, std::size_t>> component_d_k0; // before reduction
  bool sequence_preserved = true; // delta'(q0', 0) = q0'
};

/// p = lcm over final components of d * k0 and the p-th power automaton.
inline ReduceResult reduce_to_special(const Dfao& a, std::size_t cap = default_group_cap)
{
  auto scc = scc_decompose(a);
  ReduceResult r;
  std::uint64_t p = 1;
  for (auto c : scc.final_components()) {
    const auto& comp = scc.components[c];
    auto sub = restrict_to(a, comp, std::find(comp.begin(), comp.end(), a.initial) != comp.end()
                                        ? a.initial
                                        : entry_state(a, comp));
    auto st = analyze_structure(build_naturally_induced(sub), cap);
    r.component_d_k0.emplace_back(st.report.d, st.report.k0);
    p = std::lcm(p, static_cast<std::uint64_t>(st.report.d * st.report.k0));
  }
  r.p = static_cast<unsigned>(p);
  r.reduced = p == 1 ? a : power_automaton(a, r.p);
  r.sequence_preserved = a.next(a.initial, 0) == a.initial;
  return r;
}

struct StructureCheck {
  std::size_t lengths_checked_G = 0;  // lengths compared against g0^l G
  std::size_t lengths_checked_G0 = 0; // lengths compared against g0'^l G0
  std::vector<std::string> mismatches;
  bool ok() const { return mismatches.empty(); }
};

/// Exhaustive enumeration of all words up to `depth` from every state.
inline StructureCheck verify_structure(const Transducer& t, const StructureReport& rep,
                                       std::size_t depth)
{
  const std::size_t nq = t.size();
  const std::uint64_t dp = rep.d_prime;
  // sets[q][qb][len][residue mod d']
  using Bucket = std::set<Perm>;
  std::vector<std::vector<std::vector<std::vector<Bucket>>>> sets(
      nq, std::vector<std::vector<std::vector<Bucket>>>(
              nq, std::vector<std::vector<Bucket>>(depth + 1, std::vector<Bucket>(dp))));
  struct Frame {
    std::uint32_t q;
    Perm g;
    std::uint64_t v;
    std::size_t len;
  };
  for (std::uint32_t q = 0; q < nq; ++q) {
    std::vector<Frame> stack{{q, Perm::identity(t.n0), 0, 0}};
    while (!stack.empty()) {
      Frame f = std::move(stack.back());
      stack.pop_back();
      sets[q][f.q][f.len][f.v].insert(f.g);
      if (f.len == depth)
        continue;
      for (Digit a = 0; a < t.k; ++a)
        stack.push_back({t.next(f.q, a), f.g * t.weight(f.q, a), (f.v * t.k + a) % dp, f.len + 1});
    }
  }
  auto norm = [](const Bucket& b) { return std::vector<Perm>(b.begin(), b.end()); };

  StructureCheck out;
  const auto& G = rep.G.elements();
  const std::size_t stab = rep.m0 * rep.d;
  const std::size_t stab_arith = std::max(rep.m0, rep.m0_prime) * rep.d;
  for (std::size_t len = 0; len <= depth; ++len) {
    auto expected = left_translate(power(rep.g0, len % rep.d), G);
    bool counted = false;
    for (std::uint32_t q = 0; q < nq; ++q)
      for (std::uint32_t qb = 0; qb < nq; ++qb) {
        Bucket merged;
        for (auto& part : sets[q][qb][len])
          merged.insert(part.begin(), part.end());
        auto all = norm(merged);
        if (len >= stab) {
          counted = true;
          if (all != expected)
            out.mismatches.push_back("length " + std::to_string(len) + ", states " +
                                     std::to_string(q) + "->" + std::to_string(qb) +
                                     ": weight set differs from g0^l G");
        } else if (!std::includes(expected.begin(), expected.end(), all.begin(), all.end())) {
          out.mismatches.push_back("length " + std::to_string(len) +
                                   ": weights outside the coset g0^l G");
        }
      }
    if (counted)
      ++out.lengths_checked_G;

    if (len < stab_arith || len % (rep.d * rep.k0) != 0)
      continue;
    if (dp > 1 && !rep.g0_prime) {
      out.mismatches.push_back("g0' missing although d' > 1");
      continue;
    }
    ++out.lengths_checked_G0;
    for (std::uint64_t l = 0; l < dp; ++l) {
      auto exp0 = left_translate(power(rep.g0_prime.value_or(Perm::identity(t.n0)), l),
                                 rep.G0.elements());
      for (std::uint32_t q = 0; q < nq; ++q)
        for (std::uint32_t qb = 0; qb < nq; ++qb)
          if (norm(sets[q][qb][len][l]) != exp0)
            out.mismatches.push_back("length " + std::to_string(len) + ", residue " +
                                     std::to_string(l) + ", states " + std::to_string(q) + "->" +
                                     std::to_string(qb) + ": weight set differs from g0'^l G0");
    }
  }
  return out;
}

} // namespace autseq
