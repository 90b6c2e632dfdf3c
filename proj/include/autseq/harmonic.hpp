#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "numbertheory.hpp"
#include "structure.hpp"

namespace autseq {

using cvec = std::vector<std::complex<double>>;

inline double euclid(const cvec& v)
{
  double s = 0;
  for (auto& z : v)
    s += std::norm(z);
  return std::sqrt(s);
}

struct RepresentationSpec {
  enum class Kind { d_ell, character, regular_indicator };
  Kind kind = Kind::regular_indicator;
  std::uint64_t ell = 0;
  std::vector<std::complex<double>> table; // character values in Delta order

  static RepresentationSpec d_ell_rep(std::uint64_t l) { return {Kind::d_ell, l, {}}; }
  static RepresentationSpec character(std::vector<std::complex<double>> values)
  {
    return {Kind::character, 0, std::move(values)};
  }
  static RepresentationSpec regular() { return {Kind::regular_indicator, 0, {}}; }
};

/// The normalized transducer of an automaton with d = 1 together with its weight
/// group; Delta coincides with G in that case.
class HarmonicContext {
public:
  explicit HarmonicContext(const Transducer& t, std::size_t cap = default_group_cap)
      : st_(analyze_structure(t, cap)), pg_(st_.normalized, cap)
  {
    if (st_.report.d != 1)
      throw std::invalid_argument("Fourier terms need d = 1; reduce the automaton first");
    if (pg_.order() != st_.report.G.order())
      throw std::logic_error("weight group differs from G although d = 1");
    const auto& tt = pg_.transducer();
    left_.resize(tt.lambda.size());
    for (std::size_t i = 0; i < tt.lambda.size(); ++i)
      for (std::size_t h = 0; h < pg_.order(); ++h)
        left_[i].push_back(static_cast<std::uint32_t>(pg_.delta().index(tt.lambda[i] * pg_.delta()[h])));
    for (std::size_t h = 0; h < pg_.order(); ++h)
      s0_.push_back(st_.report.s0_of(pg_.delta()[h]));
  }

  const Transducer& transducer() const { return pg_.transducer(); }
  const StructureReport& report() const { return st_.report; }
  const ProductGraph& graph() const { return pg_; }
  std::size_t order() const { return pg_.order(); }
  std::uint64_t s0(std::size_t h) const { return s0_[h]; }

  /// Delta index of lambda(q,a) * Delta[h].
  std::uint32_t left(std::uint32_t q, Digit a, std::uint32_t h) const
  {
    return left_[q * transducer().k + a][h];
  }

  std::complex<double> d_ell(std::uint64_t l, std::size_t h) const
  {
    const auto dp = report().d_prime;
    return unit(static_cast<double>((l * s0_[h]) % dp) / static_cast<double>(dp));
  }

  /// Values of the sign character in Delta order.
  std::vector<std::complex<double>> sign_character() const
  {
    std::vector<std::complex<double>> v;
    for (auto& g : pg_.delta().elements())
      v.emplace_back(static_cast<double>(g.sign()), 0.0);
    return v;
  }

  std::size_t dim(const RepresentationSpec& rep) const
  {
    return rep.kind == RepresentationSpec::Kind::regular_indicator ? order() : 1;
  }

  std::complex<double> scalar(const RepresentationSpec& rep, std::size_t h) const
  {
    if (rep.kind == RepresentationSpec::Kind::d_ell)
      return d_ell(rep.ell, h);
    return rep.table.at(h);
  }

  /// D(Delta[h]) applied to the base vector (1 or e_id).
  cvec embed(const RepresentationSpec& rep, std::size_t h) const
  {
    if (rep.kind == RepresentationSpec::Kind::regular_indicator) {
      cvec v(order(), 0.0);
      v[h] = 1.0;
      return v;
    }
    return {scalar(rep, h)};
  }

  /// out += c * D(lambda(q,a)) v
  void apply_add(const RepresentationSpec& rep, std::uint32_t q, Digit a, const cvec& v,
                 std::complex<double> c, cvec& out) const
  {
    const auto& lam = transducer().lambda[q * transducer().k + a];
    if (rep.kind == RepresentationSpec::Kind::regular_indicator) {
      for (std::size_t h = 0; h < v.size(); ++h)
        out[left(q, a, static_cast<std::uint32_t>(h))] += c * v[h];
    } else {
      out[0] += c * scalar(rep, pg_.delta().index(lam)) * v[0];
    }
  }

  /// Remove the D_l components (regular realization only).
  cvec residual(const RepresentationSpec& rep, const cvec& v) const
  {
    if (rep.kind != RepresentationSpec::Kind::regular_indicator)
      return v;
    cvec r = v;
    const double norm = 1.0 / std::sqrt(static_cast<double>(order()));
    for (std::uint64_t l = 0; l < report().d_prime; ++l) {
      std::complex<double> c = 0;
      for (std::size_t h = 0; h < order(); ++h)
        c += v[h] * std::conj(d_ell(l, h)) * norm;
      for (std::size_t h = 0; h < order(); ++h)
        r[h] -= c * d_ell(l, h) * norm;
    }
    return r;
  }

  /// Rejects representations equal to some D_l.
  void require_non_exceptional(const RepresentationSpec& rep) const
  {
    if (rep.kind == RepresentationSpec::Kind::d_ell)
      throw std::invalid_argument("D_l representations have no Fourier decay");
    if (rep.kind == RepresentationSpec::Kind::character) {
      if (rep.table.size() != order())
        throw std::invalid_argument("character table has wrong size");
      for (std::uint64_t l = 0; l < report().d_prime; ++l) {
        std::complex<double> c = 0;
        for (std::size_t h = 0; h < order(); ++h)
          c += rep.table[h] * std::conj(d_ell(l, h));
        if (std::abs(c) / static_cast<double>(order()) > 1 - 1e-9)
          throw std::invalid_argument("character coincides with D_" + std::to_string(l));
      }
    }
  }

private:
  Structure st_;
  ProductGraph pg_;
  std::vector<std::vector<std::uint32_t>> left_;
  std::vector<std::uint64_t> s0_;
};

struct FourierValue {
  cvec value;            // D applied to the base vector, averaged
  double norm2 = 0;      // Euclidean norm of value
  double residual2 = 0;  // norm after removing D_l components (= norm2 for characters)
};

inline FourierValue make_value(const HarmonicContext& ctx, const RepresentationSpec& rep, cvec v)
{
  FourierValue f;
  f.norm2 = euclid(v);
  f.residual2 = rep.kind == RepresentationSpec::Kind::regular_indicator ? euclid(ctx.residual(rep, v))
                                                                          : f.norm2;
  f.value = std::move(v);
  return f;
}

/// frac(k^e t) computed in extended precision.
inline double phase(std::uint64_t k, unsigned e, double t)
{
  long double x = static_cast<long double>(t);
  for (unsigned i = 0; i < e; ++i)
    x = std::fmod(x * static_cast<long double>(k), 1.0L);
  return static_cast<double>(x);
}

/// psi_{l,alpha}^q(t, r) for all l <= lmax and all q: levels[l][q].
inline std::vector<std::vector<cvec>> psi_levels(const HarmonicContext& ctx, const RepresentationSpec& rep,
                                                 unsigned lmax, unsigned alpha, double t, std::uint64_t r)
{
  const auto& tr = ctx.transducer();
  if (r >= checked_pow(tr.k, alpha))
    throw std::invalid_argument("r must be below k^alpha");
  const Word tail = fixed_digits(r, tr.k, alpha);
  std::vector<std::vector<cvec>> lv(lmax + 1);
  for (std::uint32_t q = 0; q < tr.size(); ++q) {
    auto w = transduce(tr, q, tail).weight;
    lv[0].push_back(ctx.embed(rep, ctx.graph().delta().index(w)));
  }
  const double inv_k = 1.0 / tr.k;
  for (unsigned l = 1; l <= lmax; ++l) {
    const double ph = phase(tr.k, l - 1, t);
    std::vector<std::complex<double>> tw(tr.k);
    for (Digit a = 0; a < tr.k; ++a)
      tw[a] = unit(-static_cast<double>(a) * ph) * inv_k;
    lv[l].assign(tr.size(), cvec(ctx.dim(rep), 0.0));
    for (std::uint32_t q = 0; q < tr.size(); ++q)
      for (Digit a = 0; a < tr.k; ++a)
        ctx.apply_add(rep, q, a, lv[l - 1][tr.next(q, a)], tw[a], lv[l][q]);
  }
  return lv;
}

inline FourierValue psi(const HarmonicContext& ctx, const RepresentationSpec& rep, std::uint32_t q,
                        unsigned lambda, unsigned alpha, double t, std::uint64_t r)
{
  return make_value(ctx, rep, psi_levels(ctx, rep, lambda, alpha, t, r)[lambda][q]);
}

/// psi by summing all k^lambda terms.
inline FourierValue psi_direct(const HarmonicContext& ctx, const RepresentationSpec& rep, std::uint32_t q,
                               unsigned lambda, unsigned alpha, double t, std::uint64_t r)
{
  const auto& tr = ctx.transducer();
  if (r >= checked_pow(tr.k, alpha))
    throw std::invalid_argument("r must be below k^alpha");
  if (lambda > 22)
    throw std::invalid_argument("direct evaluation capped at lambda = 22");
  const std::uint64_t count = checked_pow(tr.k, lambda);
  const Word tail = fixed_digits(r, tr.k, alpha);
  cvec acc(ctx.dim(rep), 0.0);
  for (std::uint64_t u = 0; u < count; ++u) {
    Word w = fixed_digits(u, tr.k, lambda);
    w.insert(w.end(), tail.begin(), tail.end());
    auto h = ctx.graph().delta().index(transduce(tr, q, w).weight);
    auto e = unit(-static_cast<double>(u) * t);
    auto v = ctx.embed(rep, h);
    for (std::size_t i = 0; i < acc.size(); ++i)
      acc[i] += e * v[i];
  }
  for (auto& z : acc)
    z /= static_cast<double>(count);
  return make_value(ctx, rep, std::move(acc));
}

/// phi_{lambda,alpha}^q(t, r) = k^-lambda sum_u D(T(q, (u k^alpha + r)_k)) e(-u t), direct.
inline FourierValue phi(const HarmonicContext& ctx, const RepresentationSpec& rep, std::uint32_t q,
                        unsigned lambda, unsigned alpha, double t, std::uint64_t r)
{
  const auto& tr = ctx.transducer();
  if (lambda > 22)
    throw std::invalid_argument("direct evaluation capped at lambda = 22");
  const std::uint64_t count = checked_pow(tr.k, lambda), ka = checked_pow(tr.k, alpha);
  cvec acc(ctx.dim(rep), 0.0);
  for (std::uint64_t u = 0; u < count; ++u) {
    auto h = ctx.graph().delta().index(transduce(tr, q, digits_of(u * ka + r, tr.k)).weight);
    auto e = unit(-static_cast<double>(u) * t);
    auto v = ctx.embed(rep, h);
    for (std::size_t i = 0; i < acc.size(); ++i)
      acc[i] += e * v[i];
  }
  for (auto& z : acc)
    z /= static_cast<double>(count);
  return make_value(ctx, rep, std::move(acc));
}

struct PhiBound {
  double with_digit_factor = 0; // sum_j (k-1) k^-j max_q |psi_{lambda-j}| + k^-lambda
  double without_factor = 0;    // same with k^-j in place of (k-1) k^-j
};

inline PhiBound phi_bound(const HarmonicContext& ctx, const RepresentationSpec& rep, unsigned lambda,
                          unsigned alpha, double t, std::uint64_t r)
{
  const auto& tr = ctx.transducer();
  auto lv = psi_levels(ctx, rep, lambda, alpha, t, r % checked_pow(tr.k, alpha));
  PhiBound b;
  double kj = 1;
  for (unsigned j = 1; j <= lambda; ++j) {
    kj *= tr.k;
    double m = 0;
    for (auto& v : lv[lambda - j])
      m = std::max(m, euclid(v));
    b.with_digit_factor += (tr.k - 1) * m / kj;
    b.without_factor += m / kj;
  }
  b.with_digit_factor += 1.0 / kj;
  b.without_factor += 1.0 / kj;
  return b;
}

struct DecayFit {
  std::vector<unsigned> lambdas;
  std::vector<double> sup_norms;
  std::vector<double> argmax_t;
  unsigned fit_from = 8;
  double slope = 0, intercept = 0;
  double eta_hat = 0;
  double r2 = 0;
  std::size_t grid = 0;
};

struct LinearFit {
  double slope = 0, intercept = 0, r2 = 0;
};

inline LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
  const double n = static_cast<double>(x.size());
  if (x.size() < 2)
    throw std::invalid_argument("need at least two points for a fit");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  double ss_tot = 0, ss_res = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    ss_tot += (y[i] - sy / n) * (y[i] - sy / n);
    const double e = y[i] - f.intercept - f.slope * x[i];
    ss_res += e * e;
  }
  f.r2 = ss_tot > 0 ? 1 - ss_res / ss_tot : 1.0;
  return f;
}

namespace detail {

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f)
{
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i)
      f(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads)
        f(i);
    });
  for (auto& th : pool)
    th.join();
}

/// Local maximizer of f near c: nested uniform zoom, then golden-section search.
inline std::pair<double, double> refine_max(const std::function<double(double)>& f, double c, double h)
{
  double best_t = c, best = f(c);
  for (int level = 0; level < 8; ++level) {
    const int pts = 32;
    double lo = best_t - h;
    for (int i = 0; i <= pts; ++i) {
      double t = lo + 2 * h * i / pts;
      double v = f(t);
      if (v > best) {
        best = v;
        best_t = t;
      }
    }
    h /= 8;
  }
  const double gr = (std::sqrt(5.0) - 1) / 2;
  double a = best_t - 8 * h, b = best_t + 8 * h;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a), f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 60; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  if (std::max(f1, f2) > best)
    return f1 > f2 ? std::pair{x1, f1} : std::pair{x2, f2};
  return {best_t, best};
}

} // namespace detail

/// sup_t max_q of the (residual) norm of psi for each lambda in [lambda_lo, lambda_hi];
/// the fit fields are left empty.
inline DecayFit sup_norm_profile(const HarmonicContext& ctx, const RepresentationSpec& rep,
                                 unsigned lambda_lo, unsigned lambda_hi, std::size_t grid = 4096,
                                 unsigned alpha = 0, std::uint64_t r = 0, unsigned threads = 1)
{
  if (lambda_hi < lambda_lo || grid == 0)
    throw std::invalid_argument("bad lambda range or grid");
  auto level_norms = [&](double t, unsigned lmax) {
    auto lv = psi_levels(ctx, rep, lmax, alpha, t, r);
    std::vector<double> m(lmax + 1, 0.0);
    for (unsigned l = 0; l <= lmax; ++l)
      for (auto& v : lv[l])
        m[l] = std::max(m[l], rep.kind == RepresentationSpec::Kind::regular_indicator
                                  ? euclid(ctx.residual(rep, v))
                                  : euclid(v));
    return m;
  };

  // an irrational offset keeps grid points away from k-adic rationals, where psi often vanishes
  const double offset = (std::sqrt(5.0) - 1) / 2;
  auto grid_t = [&](std::size_t j) { return (static_cast<double>(j) + offset) / static_cast<double>(grid); };
  std::vector<std::vector<double>> at(grid);
  detail::parallel_for(grid, threads, [&](std::size_t j) { at[j] = level_norms(grid_t(j), lambda_hi); });

  DecayFit fit;
  fit.grid = grid;
  const unsigned nl = lambda_hi - lambda_lo + 1;
  fit.lambdas.resize(nl);
  fit.sup_norms.assign(nl, 0.0);
  fit.argmax_t.assign(nl, 0.0);
  const std::size_t top = std::min<std::size_t>(4, grid);
  std::vector<std::size_t> order(grid);
  for (unsigned i = 0; i < nl; ++i) {
    const unsigned l = lambda_lo + i;
    for (std::size_t j = 0; j < grid; ++j)
      order[j] = j;
    std::partial_sort(order.begin(), order.begin() + static_cast<long>(top), order.end(),
                      [&](auto x, auto y) { return at[x][l] > at[y][l]; });
    std::vector<double> seeds;
    for (std::size_t c = 0; c < top; ++c)
      seeds.push_back(grid_t(order[c]));
    if (i > 0)
      seeds.push_back(fit.argmax_t[i - 1]);
    double best = at[order[0]][l], best_t = grid_t(order[0]);
    auto f = [&](double t) { return level_norms(t, l)[l]; };
    for (double c : seeds) {
      auto [t, v] = detail::refine_max(f, c, 1.0 / static_cast<double>(grid));
      if (v > best) {
        best = v;
        best_t = t - std::floor(t);
      }
    }
    fit.lambdas[i] = l;
    fit.sup_norms[i] = best;
    fit.argmax_t[i] = best_t;
  }
  return fit;
}

/// Sup-norm profile plus a least-squares fit of log_k(sup) against lambda >= fit_from.
inline DecayFit decay_fit(const HarmonicContext& ctx, const RepresentationSpec& rep, unsigned lambda_lo,
                          unsigned lambda_hi, std::size_t grid = 4096, unsigned alpha = 0,
                          std::uint64_t r = 0, unsigned threads = 1, unsigned fit_from = 8)
{
  ctx.require_non_exceptional(rep);
  auto fit = sup_norm_profile(ctx, rep, lambda_lo, lambda_hi, grid, alpha, r, threads);
  fit.fit_from = fit_from;
  const auto& tr = ctx.transducer();
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < fit.lambdas.size(); ++i) {
    if (fit.lambdas[i] < fit_from)
      continue;
    xs.push_back(fit.lambdas[i]);
    ys.push_back(std::log(std::max(fit.sup_norms[i], 1e-300)) / std::log(static_cast<double>(tr.k)));
  }
  auto lf = least_squares(xs, ys);
  fit.slope = lf.slope;
  fit.intercept = lf.intercept;
  fit.r2 = lf.r2;
  fit.eta_hat = -lf.slope;
  return fit;
}

/// eta = log(k^l0 / (k^l0 - 1)) / log(k^l0); 1 when l0 = 0 (every word synchronizes).
inline double carry_eta(unsigned k, std::size_t l0)
{
  if (l0 == 0)
    return 1.0;
  const double kl = std::pow(static_cast<double>(k), static_cast<double>(l0));
  return std::log(kl / (kl - 1)) / std::log(kl);
}

inline constexpr std::uint64_t carry_feasibility_cap = 100'000'000;

/// Number of l < k^lambda for which some n1, n2 < k^alpha give
/// f(x)^-1 f(y) != f_{alpha+rho}(x)^-1 f_{alpha+rho}(y), x = l k^alpha + n1 + n2,
/// y = l k^alpha + n1, f(n) = T(q0, (n + r)_k) and f_m(n) = T(q0, w) with w the
/// last m digits of n + r, leading zeros kept.
inline std::uint64_t carry_violation_count(const ProductGraph& pg, unsigned lambda, unsigned alpha,
                                           unsigned rho, std::uint64_t r)
{
  const auto& t = pg.transducer();
  if (rho >= lambda)
    throw std::invalid_argument("need rho < lambda");
  if (checked_pow(t.k, lambda + 2 * alpha) > carry_feasibility_cap)
    throw std::invalid_argument("k^(lambda + 2 alpha) exceeds the brute-force cap");
  const std::uint64_t kl = checked_pow(t.k, lambda), ka = checked_pow(t.k, alpha),
                      km = checked_pow(t.k, alpha + rho);
  const std::uint64_t top = kl * ka + 2 * ka + r + 1;
  auto ws = weight_sequence(pg, top);
  const auto& G = pg.delta();
  std::vector<std::uint32_t> inv(G.order());
  for (std::size_t i = 0; i < G.order(); ++i)
    inv[i] = static_cast<std::uint32_t>(G.index(G[i].inverse()));
  std::vector<std::uint32_t> table;
  const bool use_table = G.order() <= 2048;
  if (use_table) {
    table.resize(G.order() * G.order());
    for (std::size_t i = 0; i < G.order(); ++i)
      for (std::size_t j = 0; j < G.order(); ++j)
        table[i * G.order() + j] = static_cast<std::uint32_t>(G.mul(i, j));
  }
  auto mul = [&](std::uint32_t i, std::uint32_t j) {
    return use_table ? table[i * G.order() + j] : static_cast<std::uint32_t>(G.mul(i, j));
  };
  // fixed-width weights: fw[v] = T(q0, v written with exactly alpha + rho digits)
  std::vector<std::uint32_t> fs{t.initial}, fw{0};
  for (unsigned j = 0; j < alpha + rho; ++j) {
    std::vector<std::uint32_t> ns(fs.size() * t.k), nw(fw.size() * t.k);
    for (std::size_t v = 0; v < fs.size(); ++v)
      for (Digit a = 0; a < t.k; ++a) {
        ns[v * t.k + a] = t.next(fs[v], a);
        nw[v * t.k + a] = pg.step_weight(fs[v], a, fw[v]);
      }
    fs.swap(ns);
    fw.swap(nw);
  }
  auto f = [&](std::uint64_t n) { return ws.weight[n + r]; };
  auto ft = [&](std::uint64_t n) { return fw[(n + r) % km]; };
  std::uint64_t count = 0;
  for (std::uint64_t l = 0; l < kl; ++l) {
    bool bad = false;
    for (std::uint64_t n1 = 0; n1 < ka && !bad; ++n1)
      for (std::uint64_t n2 = 0; n2 < ka && !bad; ++n2) {
        const std::uint64_t x = l * ka + n1 + n2, y = l * ka + n1;
        if (mul(inv[f(x)], f(y)) != mul(inv[ft(x)], ft(y)))
          bad = true;
      }
    if (bad)
      ++count;
  }
  return count;
}

struct PrimeFourierRow {
  unsigned nu = 0;
  std::uint64_t primes = 0;
  double sup_residual = 0;
  double t_at_sup = 0;
  double at_zero = 0;
};

/// sup over t = j / grid of the D_l-free part of k^-nu sum_{p < k^nu, p not dividing k} e_{T(q0,(p)_k)} e(-p t).
inline std::vector<PrimeFourierRow> prime_fourier_residual(const HarmonicContext& ctx,
                                                           const std::vector<unsigned>& nus,
                                                           std::size_t grid = 1024)
{
  const auto& tr = ctx.transducer();
  const auto rep = RepresentationSpec::regular();
  unsigned numax = 0;
  for (auto v : nus)
    numax = std::max(numax, v);
  const std::uint64_t top = checked_pow(tr.k, numax);
  if (top > carry_feasibility_cap)
    throw std::invalid_argument("k^nu exceeds the feasibility cap");
  auto ws = weight_sequence(ctx.graph(), top);
  std::vector<std::uint64_t> primes;
  for_each_prime(0, top, [&](std::uint64_t p) {
    if (tr.k % p != 0)
      primes.push_back(p);
  });
  std::vector<std::complex<double>> roots(grid);
  for (std::size_t c = 0; c < grid; ++c)
    roots[c] = unit(-static_cast<double>(c) / static_cast<double>(grid));

  std::vector<PrimeFourierRow> out;
  for (auto nu : nus) {
    const std::uint64_t lim = checked_pow(tr.k, nu);
    std::vector<std::vector<std::uint64_t>> cnt(ctx.order(), std::vector<std::uint64_t>(grid, 0));
    PrimeFourierRow row;
    row.nu = nu;
    for (auto p : primes) {
      if (p >= lim)
        break;
      ++cnt[ws.weight[p]][p % grid];
      ++row.primes;
    }
    const double scale = 1.0 / static_cast<double>(lim);
    for (std::size_t j = 0; j < grid; ++j) {
      cvec v(ctx.order(), 0.0);
      for (std::size_t h = 0; h < ctx.order(); ++h)
        for (std::size_t c = 0; c < grid; ++c)
          if (cnt[h][c])
            v[h] += static_cast<double>(cnt[h][c]) * roots[(c * j) % grid];
      for (auto& z : v)
        z *= scale;
      const double res = euclid(ctx.residual(rep, v));
      if (j == 0)
        row.at_zero = res;
      if (res > row.sup_residual) {
        row.sup_residual = res;
        row.t_at_sup = static_cast<double>(j) / static_cast<double>(grid);
      }
    }
    out.push_back(row);
  }
  return out;
}

} // namespace autseq
