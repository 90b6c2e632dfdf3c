#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "structure.hpp"

namespace autseq {

using Rational = boost::rational<std::int64_t>;

inline std::complex<double> unit(double x) // e(x) = exp(2 pi i x)
{
  const double a = 2.0 * std::numbers::pi * x;
  return {std::cos(a), std::sin(a)};
}

inline std::uint64_t euler_phi(std::uint64_t n)
{
  std::uint64_t r = n;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p)
      continue;
    while (n % p == 0)
      n /= p;
    r -= r / p;
  }
  if (n > 1)
    r -= r / n;
  return r;
}

inline std::vector<std::uint32_t> primes_up_to(std::uint64_t n)
{
  std::vector<bool> comp(n + 1, false);
  std::vector<std::uint32_t> ps;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (comp[i])
      continue;
    ps.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i)
      comp[j] = true;
  }
  return ps;
}

inline constexpr std::size_t default_segment = std::size_t{1} << 20;

/// Calls f(lo, mu, is_prime) for consecutive segments covering [lo, hi).
template <class F>
void sieve_segments(std::uint64_t lo, std::uint64_t hi, F&& f, std::size_t segment = default_segment)
{
  if (hi <= lo)
    return;
  const auto base = primes_up_to(static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi))) + 1);
  std::vector<std::int8_t> mu;
  std::vector<std::uint8_t> prime;
  std::vector<std::uint64_t> rem;
  for (std::uint64_t s = lo; s < hi; s += segment) {
    const std::uint64_t e = std::min<std::uint64_t>(hi, s + segment);
    const std::size_t len = e - s;
    mu.assign(len, 1);
    prime.assign(len, 1);
    rem.resize(len);
    for (std::size_t i = 0; i < len; ++i)
      rem[i] = s + i;
    for (std::uint64_t p : base) {
      if (p >= e)
        break;
      for (std::uint64_t m = (s + p - 1) / p * p; m < e; m += p) {
        mu[m - s] = static_cast<std::int8_t>(-mu[m - s]);
        rem[m - s] /= p;
        if (m != p)
          prime[m - s] = 0;
      }
      const std::uint64_t pp = p * p;
      for (std::uint64_t m = (s + pp - 1) / pp * pp; m < e; m += pp)
        mu[m - s] = 0;
    }
    for (std::size_t i = 0; i < len; ++i) {
      if (rem[i] > 1)
        mu[i] = static_cast<std::int8_t>(-mu[i]);
      if (s + i < 2)
        prime[i] = 0;
    }
    if (s == 0)
      mu[0] = 0;
    f(s, std::as_const(mu), std::as_const(prime));
  }
}

template <class F>
void for_each_prime(std::uint64_t lo, std::uint64_t hi, F&& f)
{
  sieve_segments(lo, hi, [&](std::uint64_t s, const auto&, const auto& prime) {
    for (std::size_t i = 0; i < prime.size(); ++i)
      if (prime[i])
        f(s + i);
  });
}

struct SieveTables {
  std::uint64_t limit = 0;
  std::vector<std::int8_t> mobius;     // index n, n <= limit; mobius[0] = 0
  std::vector<std::uint8_t> prime_flags;

  bool is_prime(std::uint64_t n) const { return prime_flags.at(n) != 0; }
  int mu(std::uint64_t n) const { return mobius.at(n); }
};

inline constexpr std::uint64_t default_sieve_cap = 500'000'000;

inline SieveTables sieve(std::uint64_t N, std::uint64_t cap = default_sieve_cap)
{
  if (N < 2)
    throw std::invalid_argument("sieve limit must be at least 2");
  if (N > cap)
    throw std::runtime_error("sieve limit " + std::to_string(N) + " exceeds memory cap " +
                             std::to_string(cap));
  SieveTables t;
  t.limit = N;
  t.mobius.resize(N + 1);
  t.prime_flags.resize(N + 1);
  sieve_segments(0, N + 1, [&](std::uint64_t s, const auto& mu, const auto& pr) {
    std::copy(mu.begin(), mu.end(), t.mobius.begin() + static_cast<long>(s));
    std::copy(pr.begin(), pr.end(), t.prime_flags.begin() + static_cast<long>(s));
  });
  return t;
}

inline std::int64_t mod_inverse(std::int64_t x, std::int64_t m)
{
  std::int64_t g = m, r = x % m, s0 = 0, s1 = 1;
  if (r < 0)
    r += m;
  while (r != 0) {
    auto q = g / r;
    std::tie(g, r) = std::make_pair(r, g - q * r);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  if (g != 1)
    throw std::invalid_argument("not invertible");
  return ((s0 % m) + m) % m;
}

/// S(a, b; c) = sum over units x mod c of e((a x + b x^-1) / c); for c = 1 the single term is 1.
inline std::complex<double> kloosterman(std::int64_t a, std::int64_t b, std::int64_t c)
{
  if (c < 1)
    throw std::invalid_argument("modulus must be positive");
  if (c == 1)
    return 1.0;
  std::complex<double> s = 0.0;
  for (std::int64_t x = 1; x < c; ++x) {
    if (std::gcd(x, c) != 1)
      continue;
    auto xi = mod_inverse(x, c);
    auto num = ((a % c + c) % c * x + (b % c + c) % c * xi) % c;
    s += unit(static_cast<double>(num) / static_cast<double>(c));
  }
  return s;
}

struct PrimePrediction {
  unsigned p = 1;              // power used by the reduction
  std::uint64_t base = 2;      // k^p
  Transducer transducer;       // normalized transducer of the reduced automaton
  StructureReport structure;
  std::vector<Rational> f_g;   // per element of structure.G
  std::vector<double> pi;      // stationary state distribution
  std::vector<double> f_q;     // per transducer state
  std::vector<std::vector<double>> f_qb; // [q][label]
  std::vector<double> freq;    // per label
  std::vector<std::string> labels;
};

/// Stationary distribution of the uniform-digit walk on a transition table.
inline std::vector<double> stationary_distribution(const TransitionTable& t, double tol = 1e-13,
                                                   std::size_t max_iter = 100000)
{
  std::vector<double> pi(t.n, 1.0 / static_cast<double>(t.n)), nxt(t.n);
  for (std::size_t it = 0; it < max_iter; ++it) {
    std::fill(nxt.begin(), nxt.end(), 0.0);
    for (std::uint32_t q = 0; q < t.n; ++q)
      for (Digit a = 0; a < t.k; ++a)
        nxt[t(q, a)] += pi[q] / t.k;
    double diff = 0;
    for (std::size_t q = 0; q < t.n; ++q)
      diff += std::abs(nxt[q] - pi[q]);
    pi.swap(nxt);
    if (diff < tol)
      return pi;
  }
  throw std::runtime_error("stationary distribution did not converge");
}

/// Letter frequencies along primes for a strongly connected automaton with delta'(q0', 0) = q0'.
inline PrimePrediction predict_prime_frequencies(const Dfao& a, std::size_t cap = default_group_cap)
{
  require_strongly_connected(a);
  if (a.next(a.initial, 0) != a.initial)
    throw std::invalid_argument("prediction needs delta(q0, 0) = q0");
  PrimePrediction out;
  auto red = reduce_to_special(a, cap);
  require_strongly_connected(red.reduced);
  out.p = red.p;
  out.base = red.reduced.k;
  out.labels = a.labels;
  auto st = analyze_structure(build_naturally_induced(red.reduced, cap), cap);
  out.transducer = st.normalized;
  out.structure = st.report;
  const auto& rep = out.structure;
  if (rep.d != 1 || rep.k0 != 1)
    throw std::logic_error("reduction did not reach d = k0 = 1");

  const std::uint64_t dp = rep.d_prime;
  const auto order = static_cast<std::int64_t>(rep.G.order());
  const Rational weight(static_cast<std::int64_t>(dp),
                        static_cast<std::int64_t>(euler_phi(dp)) * order);
  for (auto s : rep.s0)
    out.f_g.push_back(std::gcd(s, dp) == 1 ? weight : Rational(0));

  const auto& t = out.transducer;
  out.pi = stationary_distribution(t.table());
  const std::uint64_t K = t.k;
  out.f_q.assign(t.size(), 0.0);
  for (std::uint64_t a0 = 1; a0 < K; ++a0) {
    if (std::gcd(a0, K) != 1)
      continue;
    for (std::uint32_t q = 0; q < t.size(); ++q)
      out.f_q[t.next(q, static_cast<Digit>(a0))] += out.pi[q];
  }
  const double phiK = static_cast<double>(euler_phi(K));
  for (auto& f : out.f_q)
    f /= phiK;

  out.f_qb.assign(t.size(), std::vector<double>(a.labels.size(), 0.0));
  for (std::uint32_t q = 0; q < t.size(); ++q)
    for (std::size_t gi = 0; gi < rep.G.order(); ++gi) {
      const Perm& g = rep.G[gi];
      State first = t.states[q][g.inverse()(0)];
      out.f_qb[q][red.reduced.output[first]] += boost::rational_cast<double>(out.f_g[gi]);
    }
  out.freq.assign(a.labels.size(), 0.0);
  for (std::uint32_t q = 0; q < t.size(); ++q)
    for (std::size_t b = 0; b < a.labels.size(); ++b)
      out.freq[b] += out.f_q[q] * out.f_qb[q][b];
  return out;
}

struct PrimeFilter {
  std::uint64_t lo = 0;  // inclusive
  std::uint64_t hi = 0;  // exclusive
  std::optional<std::uint64_t> modulus;
  std::uint64_t residue = 0;
};

struct EmpiricalFrequencies {
  std::uint64_t primes = 0;             // primes counted (p not dividing k)
  std::vector<std::uint64_t> counts;    // per label
  std::vector<double> freq;             // per label
};

/// Label frequencies over primes in [lo, hi) not dividing k, optionally p = residue mod modulus.
inline EmpiricalFrequencies empirical_prime_frequencies(const Dfao& a, const PrimeFilter& f)
{
  EmpiricalFrequencies r;
  r.counts.assign(a.labels.size(), 0);
  for_each_prime(f.lo, f.hi, [&](std::uint64_t p) {
    if (a.k % p == 0)
      return;
    if (f.modulus && p % *f.modulus != f.residue)
      return;
    ++r.primes;
    ++r.counts[a.output[state_at(a, p)]];
  });
  for (auto c : r.counts)
    r.freq.push_back(r.primes ? static_cast<double>(c) / static_cast<double>(r.primes) : 0.0);
  return r;
}

inline EmpiricalFrequencies empirical_prime_frequencies(const Dfao& a, std::uint64_t N)
{
  return empirical_prime_frequencies(a, PrimeFilter{0, N + 1, std::nullopt, 0});
}

/// Transducer states and Delta indices of T(q0, (n)_k) for all n < count.
struct WeightSequence {
  std::vector<std::uint32_t> state;
  std::vector<std::uint32_t> weight;
};

inline WeightSequence weight_sequence(const ProductGraph& pg, std::uint64_t count)
{
  const auto& t = pg.transducer();
  WeightSequence w;
  w.state.resize(count);
  w.weight.resize(count);
  if (count == 0)
    return w;
  w.state[0] = t.initial;
  w.weight[0] = 0;
  for (std::uint64_t n = 1; n < count; ++n) {
    const auto parent = n / t.k;
    const auto d = static_cast<Digit>(n % t.k);
    w.state[n] = t.next(w.state[parent], d);
    w.weight[n] = pg.step_weight(w.state[parent], d, w.weight[parent]);
  }
  return w;
}

/// Counts of T(q0, (p)_k) over primes p < N not dividing k, per Delta index.
inline std::vector<std::uint64_t> empirical_weight_distribution(const ProductGraph& pg, std::uint64_t N)
{
  auto ws = weight_sequence(pg, N);
  std::vector<std::uint64_t> counts(pg.order(), 0);
  for_each_prime(0, N, [&](std::uint64_t p) {
    if (pg.transducer().k % p != 0)
      ++counts[ws.weight[p]];
  });
  return counts;
}

struct MobiusPoint {
  std::uint64_t N = 0;
  double mertens_over_N = 0;                 // (1/N) sum_{1<=n<N} mu(n)
  std::vector<double> per_label;             // (1/N) sum mu(n) 1[a_{n+r} = b]
  std::vector<double> label_mean;            // (1/N) sum 1[a_{n+r} = b]
  std::vector<double> centered;              // per_label - label_mean * mertens_over_N
  std::optional<std::complex<double>> embedded; // (1/N) sum mu(n) embed(a_{n+r})
};

/// Mobius correlations at each checkpoint N (ascending), sums over 1 <= n < N.
inline std::vector<MobiusPoint> mobius_correlation_series(const Dfao& a, std::vector<std::uint64_t> checkpoints,
                                                          std::uint64_t r)
{
  std::sort(checkpoints.begin(), checkpoints.end());
  if (checkpoints.empty())
    return {};
  const std::uint64_t N = checkpoints.back();
  auto states = state_sequence(a, N + r);
  const std::size_t L = a.labels.size();
  std::vector<std::int64_t> mu_sum(L, 0), cnt(L, 0);
  std::int64_t mertens = 0;
  std::complex<double> emb = 0;
  const bool has_emb = a.has_embedding();
  std::vector<MobiusPoint> out;
  std::size_t next_cp = 0;
  auto emit = [&](std::uint64_t n_excl) {
    MobiusPoint p;
    p.N = n_excl;
    const double inv = 1.0 / static_cast<double>(n_excl);
    p.mertens_over_N = static_cast<double>(mertens) * inv;
    for (std::size_t b = 0; b < L; ++b) {
      p.per_label.push_back(static_cast<double>(mu_sum[b]) * inv);
      p.label_mean.push_back(static_cast<double>(cnt[b]) * inv);
      p.centered.push_back(p.per_label[b] - p.label_mean[b] * p.mertens_over_N);
    }
    if (has_emb)
      p.embedded = emb * inv;
    out.push_back(std::move(p));
  };
  while (next_cp < checkpoints.size() && checkpoints[next_cp] <= 1)
    emit(checkpoints[next_cp++]);
  sieve_segments(1, N, [&](std::uint64_t s, const auto& mu, const auto&) {
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const std::uint64_t n = s + i;
      const auto lab = a.output[states[n + r]];
      ++cnt[lab];
      if (mu[i] != 0) {
        mertens += mu[i];
        mu_sum[lab] += mu[i];
        if (has_emb)
          emb += static_cast<double>(mu[i]) * *a.embedding[lab];
      }
      while (next_cp < checkpoints.size() && checkpoints[next_cp] == n + 1)
        emit(checkpoints[next_cp++]);
    }
  });
  while (next_cp < checkpoints.size())
    emit(checkpoints[next_cp++]);
  return out;
}

inline MobiusPoint mobius_correlation(const Dfao& a, std::uint64_t N, std::uint64_t r)
{
  return mobius_correlation_series(a, {N}, r).back();
}

struct WindowedSum {
  std::vector<double> vec;    // per Delta element, divided by N
  double norm = 0;            // Euclidean norm of vec
  std::vector<std::complex<double>> d_ell; // <vec, D_l> components (d = 1 only)
  unsigned nu = 0;
};

/// (1/N) sum_{n<N, n = m mod k^l2} chi(n) mu(n) e_{T(q0,(n+r)_k)}, where chi selects n whose
/// top l1 digits of (n + r) mod k^nu equal b.
inline WindowedSum windowed_mobius_sum(const ProductGraph& pg, const StructureReport& rep,
                                       std::uint64_t N, unsigned l1, unsigned l2, std::uint64_t b,
                                       std::uint64_t m, std::uint64_t r)
{
  const auto& t = pg.transducer();
  if (N < 1)
    throw std::invalid_argument("N must be positive");
  unsigned nu = 0;
  std::uint64_t knu = 1;
  while (knu <= N) {
    knu *= t.k;
    ++nu;
  }
  if (l1 + l2 >= nu)
    throw std::invalid_argument("need lambda1 + lambda2 < nu");
  const std::uint64_t kl1 = checked_pow(t.k, l1), kl2 = checked_pow(t.k, l2);
  if (b >= kl1)
    throw std::invalid_argument("window digit block b must be below k^lambda1");
  if (m >= kl2)
    throw std::invalid_argument("residue m must be below k^lambda2");
  const std::uint64_t shift = checked_pow(t.k, nu - l1);

  auto ws = weight_sequence(pg, N + r);
  std::vector<std::int64_t> acc(pg.order(), 0);
  sieve_segments(1, N, [&](std::uint64_t s, const auto& mu, const auto&) {
    for (std::size_t i = 0; i < mu.size(); ++i) {
      if (mu[i] == 0)
        continue;
      const std::uint64_t n = s + i;
      if (n % kl2 != m)
        continue;
      if (((n + r) % knu) / shift != b)
        continue;
      acc[ws.weight[n + r]] += mu[i];
    }
  });
  WindowedSum out;
  out.nu = nu;
  double sq = 0;
  for (auto v : acc) {
    out.vec.push_back(static_cast<double>(v) / static_cast<double>(N));
    sq += out.vec.back() * out.vec.back();
  }
  out.norm = std::sqrt(sq);
  if (rep.d == 1 && pg.order() == rep.G.order()) {
    for (std::uint64_t l = 0; l < rep.d_prime; ++l) {
      std::complex<double> c = 0;
      for (std::size_t g = 0; g < pg.order(); ++g)
        c += out.vec[g] * std::conj(unit(static_cast<double>(l * rep.s0_of(pg.delta()[g])) /
                                          static_cast<double>(rep.d_prime)));
      out.d_ell.push_back(c);
    }
  }
  return out;
}

} // namespace autseq
