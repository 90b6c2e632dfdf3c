// autseq: command-line front end for the automatic-sequence toolkit.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <autseq/autseq.hpp>

using namespace autseq;
namespace fs = std::filesystem;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string out_dir;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  bool json_stdout = false;
};

struct Report {
  json doc = json::object();
  std::string csv;
  std::ostringstream text;
  bool ok = true;

  void fail(const std::string& why)
  {
    ok = false;
    doc["failures"].push_back(why);
    text << "FAILED: " << why << "\n";
  }
};

void emit(const Common& c, const std::string& name, Report& r)
{
  r.doc["ok"] = r.ok;
  if (c.json_stdout)
    std::cout << r.doc.dump(2) << "\n";
  else
    std::cout << r.text.str();
  if (!c.out_dir.empty()) {
    fs::create_directories(c.out_dir);
    std::ofstream(fs::path(c.out_dir) / (name + ".json")) << r.doc.dump(2) << "\n";
    if (!r.csv.empty())
      std::ofstream(fs::path(c.out_dir) / (name + ".csv")) << r.csv;
  }
}

std::string num(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::string word_string(const Word& w)
{
  if (w.empty())
    return "(empty)";
  std::string s;
  for (auto d : w)
    s += d < 10 ? std::to_string(d) : "[" + std::to_string(d) + "]";
  return s;
}

std::pair<unsigned, unsigned> parse_range(const std::string& s)
{
  auto pos = s.find("..");
  try {
    if (pos == std::string::npos) {
      unsigned v = static_cast<unsigned>(std::stoul(s));
      return {v, v};
    }
    return {static_cast<unsigned>(std::stoul(s.substr(0, pos))),
            static_cast<unsigned>(std::stoul(s.substr(pos + 2)))};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("expected a range like 8..20, got '" + s + "'");
  }
}

std::vector<std::uint64_t> parse_list(const std::string& s)
{
  std::vector<std::uint64_t> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    try {
      v.push_back(std::stoull(item));
    } catch (const std::logic_error&) {
      throw std::invalid_argument("expected a comma-separated list of integers, got '" + s + "'");
    }
  return v;
}

void require_connected(const Dfao& a)
{
  if (!strongly_connected(a.table()))
    throw std::invalid_argument("automaton is not strongly connected; pick a final component with --component");
}

Dfao select(const Dfao& a, int component)
{
  if (component < 0) {
    require_connected(a);
    return a;
  }
  return final_component(a, static_cast<std::size_t>(component));
}

std::vector<std::uint64_t> checkpoints(std::uint64_t limit)
{
  std::vector<std::uint64_t> v;
  for (std::uint64_t p = 1000; p < limit; p *= 10)
    v.push_back(p);
  v.push_back(limit);
  return v;
}

// ---------------------------------------------------------------------------

void cmd_inspect(const Common& c, const std::string& path)
{
  auto a = load_automaton(path);
  Report r;
  r.doc["automaton"] = to_json(a);
  auto scc = scc_decompose(a);
  json comps = json::array();
  r.text << "base k = " << a.k << ", " << a.size() << " states, initial " << a.state_names[a.initial] << "\n";
  r.text << "components:\n";
  for (std::size_t i = 0; i < scc.components.size(); ++i) {
    json names = json::array();
    std::string list;
    for (auto q : scc.components[i]) {
      names.push_back(a.state_names[q]);
      list += (list.empty() ? "" : " ") + a.state_names[q];
    }
    comps.push_back({{"states", names}, {"final", static_cast<bool>(scc.final_flags[i])},
                     {"period", scc.periods[i]}});
    r.text << "  {" << list << "}" << (scc.final_flags[i] ? " final" : "") << ", period " << scc.periods[i]
           << "\n";
  }
  r.doc["components"] = comps;
  const bool sc = scc.components.size() == 1;
  r.doc["strongly_connected"] = sc;
  r.doc["period"] = sc ? json(scc.periods[0]) : json(nullptr);
  if (sc)
    r.text << "strongly connected, period " << scc.periods[0] << "\n";
  auto w = find_sync_word(a);
  r.doc["sync_word"] = w ? json(*w) : json(nullptr);
  r.text << "synchronizing word: " << (w ? word_string(*w) : "none") << "\n";
  std::string prefix;
  json terms = json::array();
  bool single_chars = true;
  for (auto& l : a.labels)
    single_chars = single_chars && l.size() == 1;
  for (std::uint64_t n = 0; n < 60; ++n) {
    const auto& t = sequence_term(a, n);
    terms.push_back(t);
    prefix += single_chars ? t : (n ? " " : "") + t;
  }
  r.doc["prefix"] = terms;
  r.text << "prefix: " << prefix << "\n";
  emit(c, "inspect", r);
}

void cmd_transduce(const Common& c, const std::string& path, int component)
{
  auto full = load_automaton(path);
  auto a = select(full, component);
  auto t = build_naturally_induced(a);
  Report r;
  r.doc["transducer"] = to_json(t, a);
  r.text << "n0 = " << t.n0 << ", " << t.size() << " transducer states\n";
  for (std::uint32_t q = 0; q < t.size(); ++q) {
    std::string tup;
    for (auto s : t.states[q])
      tup += (tup.empty() ? "" : ",") + a.state_names[s];
    r.text << "  " << q << " (" << tup << "):";
    for (Digit d = 0; d < t.k; ++d)
      r.text << "  " << d << " -> " << t.next(q, d) << " | " << t.weight(q, d).cycles();
    r.text << "\n";
  }
  auto diag = verify_induced(t, a);
  r.doc["diagnostics"] = to_json(diag);
  for (std::size_t i = 0; i < diag.pass.size(); ++i) {
    r.text << "  [" << (diag.pass[i] ? "ok" : "FAIL") << "] " << InducedDiagnostics::names[i] << "\n";
    if (!diag.pass[i])
      r.fail(std::string("property '") + InducedDiagnostics::names[i] + "'");
  }

  const std::uint64_t N = 10000;
  std::uint64_t bad = 0;
  for (std::uint64_t n = 0; n < N; ++n)
    bad += reconstruct_output(t, n) != state_at(a, n);
  // random large n, reproducible from the seed
  std::mt19937_64 rng(c.seed);
  std::uint64_t bad_random = 0;
  const int samples = 1000;
  for (int i = 0; i < samples; ++i) {
    const std::uint64_t n = rng() >> (rng() % 40);
    bad_random += reconstruct_output(t, n) != state_at(a, n);
  }
  if (component >= 0) {
    ComponentReconstructor rec(full);
    for (std::uint64_t n = 0; n < N; ++n)
      bad += rec(n) != state_at(full, n);
  }
  r.doc["oracle"] = {{"range", N}, {"mismatches", bad}, {"random_samples", samples},
                     {"random_mismatches", bad_random}, {"seed", c.seed}};
  r.text << "reconstruction oracle: n < " << N << ": " << bad << " mismatches; " << samples
         << " random n: " << bad_random << " mismatches\n";
  if (bad || bad_random)
    r.fail("reconstruction oracle mismatch");
  emit(c, "transduce", r);
  if (!r.ok)
    throw Failure("transducer verification failed");
}

void structure_text(Report& r, const StructureReport& s)
{
  r.text << "d = " << s.d << ", |Delta| = " << s.delta_order << ", |G| = " << s.G.order() << "\n";
  r.text << "G = {";
  for (std::size_t i = 0; i < s.G.order(); ++i)
    r.text << (i ? ", " : "") << s.G[i].cycles();
  r.text << "}, g0 = " << s.g0.cycles() << "\n";
  for (std::size_t l = 0; l < s.cosets.size(); ++l) {
    r.text << "  length = " << l << " mod d: {";
    for (std::size_t i = 0; i < s.cosets[l].size(); ++i)
      r.text << (i ? ", " : "") << s.cosets[l][i].cycles();
    r.text << "}\n";
  }
  r.text << "l0 = " << s.l0 << ", d' = " << s.d_prime << ", k0 = " << s.k0 << ", |G0| = " << s.G0.order()
         << "\n";
  r.text << "d'' =";
  for (auto& row : s.d_dprime)
    for (auto v : row)
      r.text << " " << v;
  r.text << "\n";
  for (auto& i : s.issues)
    r.fail("structure: " + i);
}

void cmd_structure(const Common& c, const std::string& path, int component, std::size_t depth)
{
  auto a = select(load_automaton(path), component);
  auto st = analyze_structure(build_naturally_induced(a));
  Report r;
  r.doc["structure"] = to_json(st.report);
  r.doc["transducer"] = to_json(st.normalized, a);
  structure_text(r, st.report);
  if (depth > 0) {
    auto chk = verify_structure(st.normalized, st.report, depth);
    r.doc["enumeration"] = {{"depth", depth},
                            {"lengths_checked_G", chk.lengths_checked_G},
                            {"lengths_checked_G0", chk.lengths_checked_G0},
                            {"mismatches", chk.mismatches}};
    r.text << "enumeration to length " << depth << ": " << chk.lengths_checked_G << " + "
           << chk.lengths_checked_G0 << " lengths, " << chk.mismatches.size() << " mismatches\n";
    for (auto& m : chk.mismatches)
      r.fail(m);
  }
  emit(c, "structure", r);
  if (!r.ok)
    throw Failure("structure invariants failed");
}

void cmd_reduce(const Common& c, const std::string& path)
{
  auto a = load_automaton(path);
  auto red = reduce_to_special(a);
  Report r;
  r.doc["power"] = red.p;
  r.doc["automaton"] = to_json(red.reduced);
  r.doc["sequence_preserved"] = red.sequence_preserved;
  json before = json::array();
  for (auto [d, k0] : red.component_d_k0)
    before.push_back({{"d", d}, {"k0", k0}});
  r.doc["components_before"] = before;
  r.text << "power p = " << red.p << ", new base " << red.reduced.k << ", "
         << (red.sequence_preserved ? "same sequence" : "sequence NOT preserved (delta(q0,0) != q0)") << "\n";
  auto scc = scc_decompose(red.reduced);
  json after = json::array();
  for (auto ci : scc.final_components()) {
    const auto& comp = scc.components[ci];
    auto sub = restrict_to(red.reduced, comp, comp.front());
    auto rep = analyze_structure(build_naturally_induced(sub)).report;
    after.push_back({{"d", rep.d}, {"k0", rep.k0}});
    r.text << "  final component of size " << comp.size() << ": d = " << rep.d << ", k0 = " << rep.k0 << "\n";
    if (rep.d != 1 || rep.k0 != 1)
      r.fail("reduced component has d = " + std::to_string(rep.d) + ", k0 = " + std::to_string(rep.k0));
  }
  r.doc["components_after"] = after;
  emit(c, "reduce", r);
  if (!r.ok)
    throw Failure("reduction did not reach d = k0 = 1");
}

void prediction_text(Report& r, const PrimePrediction& p)
{
  r.text << "power p = " << p.p << ", base " << p.base << ", |G| = " << p.structure.G.order()
         << ", d' = " << p.structure.d_prime << "\n";
  for (std::size_t i = 0; i < p.f_g.size(); ++i)
    r.text << "  f(" << p.structure.G[i].cycles() << ") = " << p.f_g[i].numerator() << "/"
           << p.f_g[i].denominator() << "\n";
  r.text << "predicted frequencies along primes:\n";
  for (std::size_t b = 0; b < p.labels.size(); ++b)
    r.text << "  " << p.labels[b] << ": " << num(p.freq[b]) << "\n";
}

void cmd_predict(const Common& c, const std::string& path)
{
  auto a = load_automaton(path);
  auto p = predict_prime_frequencies(a);
  Report r;
  r.doc["prediction"] = to_json(p);
  prediction_text(r, p);
  emit(c, "predict-primes", r);
}

void cmd_verify(const Common& c, const std::string& path, std::uint64_t limit, std::optional<std::uint64_t> mod,
                std::uint64_t res, std::optional<double> tolerance)
{
  auto a = load_automaton(path);
  if (mod && (*mod == 0 || res >= *mod))
    throw std::invalid_argument("need 0 <= res < mod");
  Report r;
  std::optional<PrimePrediction> p;
  if (!mod) {
    p = predict_prime_frequencies(a);
    r.doc["prediction"] = to_json(*p);
  }
  r.csv = "N";
  for (auto& l : a.labels)
    r.csv += "," + l;
  r.csv += "\n";
  json series = json::array();
  EmpiricalFrequencies last;
  for (auto N : checkpoints(limit)) {
    last = empirical_prime_frequencies(a, PrimeFilter{0, N + 1, mod, res});
    r.csv += std::to_string(N);
    json row = {{"N", N}, {"primes", last.primes}};
    for (std::size_t b = 0; b < a.labels.size(); ++b) {
      r.csv += "," + num(last.freq[b]);
      row["freq"][a.labels[b]] = last.freq[b];
    }
    r.csv += "\n";
    series.push_back(row);
  }
  r.doc["series"] = series;
  r.doc["excluded"] = "primes dividing k";
  r.text << "primes p <= " << limit << (mod ? ", p = " + std::to_string(res) + " mod " + std::to_string(*mod) : "")
         << ": " << last.primes << " counted\n";
  double worst = 0;
  for (std::size_t b = 0; b < a.labels.size(); ++b) {
    r.text << "  " << a.labels[b] << ": empirical " << num(last.freq[b]);
    if (p) {
      const double err = std::abs(last.freq[b] - p->freq[b]);
      worst = std::max(worst, err);
      r.text << ", predicted " << num(p->freq[b]) << ", |diff| " << num(err);
    }
    r.text << "\n";
  }
  if (p)
    r.doc["max_abs_error"] = worst;
  if (tolerance) {
    if (!p)
      throw std::invalid_argument("--tolerance needs the unrestricted prediction (omit --mod)");
    r.doc["tolerance"] = *tolerance;
    if (worst > *tolerance)
      r.fail("max |empirical - predicted| = " + num(worst) + " exceeds " + num(*tolerance));
  }
  emit(c, "verify-primes", r);
  if (!r.ok)
    throw Failure("prediction outside tolerance");
}

void cmd_mobius(const Common& c, const std::string& path, std::uint64_t limit, const std::string& shifts)
{
  auto a = load_automaton(path);
  Report r;
  r.csv = "N,r";
  for (auto& l : a.labels)
    r.csv += "," + l;
  if (a.has_embedding())
    r.csv += ",embedded_re,embedded_im";
  r.csv += "\n";
  json out = json::array();
  for (auto shift : parse_list(shifts)) {
    auto pts = mobius_correlation_series(a, checkpoints(limit), shift);
    json rows = json::array();
    for (auto& pt : pts) {
      r.csv += std::to_string(pt.N) + "," + std::to_string(shift);
      json row = {{"N", pt.N}, {"mertens_over_N", pt.mertens_over_N}};
      for (std::size_t b = 0; b < a.labels.size(); ++b) {
        r.csv += "," + num(pt.centered[b]);
        row["centered"][a.labels[b]] = pt.centered[b];
        row["raw"][a.labels[b]] = pt.per_label[b];
      }
      if (pt.embedded) {
        r.csv += "," + num(pt.embedded->real()) + "," + num(pt.embedded->imag());
        row["embedded"] = {pt.embedded->real(), pt.embedded->imag()};
      }
      r.csv += "\n";
      rows.push_back(row);
    }
    out.push_back({{"r", shift}, {"series", rows}});
    const auto& fin = pts.back();
    r.text << "r = " << shift << ", N = " << fin.N << ":";
    for (std::size_t b = 0; b < a.labels.size(); ++b)
      r.text << "  " << a.labels[b] << " " << num(fin.centered[b]);
    if (fin.embedded)
      r.text << "  embedded |" << num(std::abs(*fin.embedded)) << "|";
    r.text << "\n";
  }
  r.doc["shifts"] = out;
  r.doc["value"] = "(1/N) sum_{1<=n<N} mu(n) 1[a(n+r)=b] minus label mean times Mertens/N";
  emit(c, "mobius", r);
}

void cmd_windowed(const Common& c, const std::string& path, std::uint64_t limit, unsigned l1, unsigned l2,
                  std::uint64_t b, std::uint64_t m, std::uint64_t shift)
{
  auto a = load_automaton(path);
  require_connected(a);
  auto st = analyze_structure(build_naturally_induced(a));
  ProductGraph pg(st.normalized);
  auto w = windowed_mobius_sum(pg, st.report, limit, l1, l2, b, m, shift);
  Report r;
  r.doc["nu"] = w.nu;
  r.doc["norm"] = w.norm;
  json vec = json::object();
  r.csv = "g,value\n";
  for (std::size_t g = 0; g < w.vec.size(); ++g) {
    vec[pg.delta()[g].cycles()] = w.vec[g];
    r.csv += pg.delta()[g].cycles() + "," + num(w.vec[g]) + "\n";
  }
  r.doc["vector"] = vec;
  json dl = json::array();
  for (auto& z : w.d_ell)
    dl.push_back({z.real(), z.imag()});
  r.doc["d_ell"] = dl;
  r.text << "nu = " << w.nu << ", |sum| = " << num(w.norm) << "\n";
  for (std::size_t l = 0; l < w.d_ell.size(); ++l)
    r.text << "  <sum, D_" << l << "> = " << num(w.d_ell[l].real()) << " + " << num(w.d_ell[l].imag()) << "i\n";
  emit(c, "windowed-mobius", r);
}

struct Harmonic {
  unsigned power = 1;
  std::unique_ptr<HarmonicContext> ctx;
};

Harmonic harmonic_for(const Dfao& a)
{
  require_connected(a);
  Harmonic h;
  auto t = build_naturally_induced(a);
  if (compute_d(t).d != 1) {
    auto red = reduce_to_special(a);
    h.power = red.p;
    t = build_naturally_induced(red.reduced);
  }
  h.ctx = std::make_unique<HarmonicContext>(t);
  return h;
}

void cmd_fourier(const Common& c, const std::string& path, const std::string& rep_s, const std::string& range,
                 std::size_t grid, unsigned alpha, std::uint64_t shift, unsigned fit_from)
{
  auto a = load_automaton(path);
  auto h = harmonic_for(a);
  const auto& ctx = *h.ctx;
  auto [lo, hi] = parse_range(range);
  RepresentationSpec rep;
  if (rep_s == "regular")
    rep = RepresentationSpec::regular();
  else if (rep_s == "char")
    rep = RepresentationSpec::character(ctx.sign_character());
  else if (rep_s.rfind("dl:", 0) == 0) {
    rep = RepresentationSpec::d_ell_rep(std::stoull(rep_s.substr(3)));
    if (rep.ell >= ctx.report().d_prime)
      throw std::invalid_argument("need l < d' = " + std::to_string(ctx.report().d_prime));
  } else
    throw std::invalid_argument("--rep must be dl:<l>, char or regular");

  Report r;
  r.doc["power"] = h.power;
  r.doc["base"] = ctx.transducer().k;
  r.doc["representation"] = rep_s;
  r.doc["realization"] = rep.kind == RepresentationSpec::Kind::regular_indicator
                             ? "regular indicator vector with the D_l components removed"
                             : "one-dimensional";
  const bool fit = rep.kind != RepresentationSpec::Kind::d_ell;
  auto res = fit ? decay_fit(ctx, rep, lo, hi, grid, alpha, shift, c.threads, fit_from)
                 : sup_norm_profile(ctx, rep, lo, hi, grid, alpha, shift, c.threads);
  r.csv = "lambda,sup_norm,argmax_t\n";
  json rows = json::array();
  for (std::size_t i = 0; i < res.lambdas.size(); ++i) {
    r.csv += std::to_string(res.lambdas[i]) + "," + num(res.sup_norms[i]) + "," + num(res.argmax_t[i]) + "\n";
    rows.push_back({{"lambda", res.lambdas[i]}, {"sup_norm", res.sup_norms[i]}, {"argmax_t", res.argmax_t[i]}});
    r.text << "  lambda " << res.lambdas[i] << ": sup " << num(res.sup_norms[i]) << " at t = "
           << num(res.argmax_t[i]) << "\n";
  }
  r.doc["profile"] = rows;
  r.doc["grid"] = grid;
  r.doc["refinement"] = "nested zoom (8 levels, 33 points) and golden section around the best grid points";
  if (fit) {
    r.doc["fit"] = {{"fit_from", res.fit_from}, {"slope", res.slope}, {"intercept", res.intercept},
                    {"eta_hat", res.eta_hat}, {"r2", res.r2}};
    r.text << "eta_hat = " << num(res.eta_hat) << ", r2 = " << num(res.r2) << " (lambda >= " << res.fit_from
           << ", logs base " << ctx.transducer().k << ")\n";
  } else {
    r.doc["fit"] = nullptr;
    r.text << "D_l has no decay; profile only\n";
  }
  if (h.power != 1)
    r.text << "(evaluated on the power automaton, p = " << h.power << ", base " << ctx.transducer().k << ")\n";
  emit(c, "fourier", r);
}

void cmd_carry(const Common& c, const std::string& path, unsigned lambda, unsigned alpha, unsigned rho,
               std::uint64_t shift)
{
  auto a = load_automaton(path);
  require_connected(a);
  auto st = analyze_structure(build_naturally_induced(a));
  ProductGraph pg(st.normalized);
  const auto k = st.normalized.k;
  const std::uint64_t count = carry_violation_count(pg, lambda, alpha, rho, shift);
  const double eta = carry_eta(k, st.report.l0);
  const double scale = std::pow(static_cast<double>(k), lambda - eta * rho);
  Report r;
  r.doc = {{"lambda", lambda}, {"alpha", alpha}, {"rho", rho},      {"r", shift},
           {"l0", st.report.l0}, {"eta", eta},   {"count", count}, {"k_pow", scale},
           {"ratio", count / scale}};
  r.csv = "lambda,alpha,rho,r,count,k_pow,ratio\n" + std::to_string(lambda) + "," + std::to_string(alpha) + "," +
          std::to_string(rho) + "," + std::to_string(shift) + "," + std::to_string(count) + "," + num(scale) +
          "," + num(count / scale) + "\n";
  r.text << "violations: " << count << " of " << checked_pow(k, lambda) << " windows; l0 = " << st.report.l0
         << ", eta = " << num(eta) << ", count / k^(lambda - eta rho) = " << num(count / scale) << "\n";
  emit(c, "carry", r);
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Automatic sequences: induced transducers, weight groups, primes and Mobius sums"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--out", common.out_dir, "Write <command>.json and <command>.csv here");
  app.add_option("--threads", common.threads, "Worker threads for the Fourier t-grid")->check(CLI::Range(1u, 256u));
  app.add_option("--seed", common.seed, "Seed for randomized checks");
  app.add_flag("--json", common.json_stdout, "Print the JSON report instead of text");

  std::string path;
  int component = -1;
  std::size_t depth = 8;
  std::uint64_t limit = 1'000'000, res = 0, b = 0, m = 0, shift = 0;
  std::optional<std::uint64_t> mod;
  std::optional<double> tolerance;
  std::string shifts = "0", rep = "regular", lambda_range = "8..20";
  std::size_t grid = 4096;
  unsigned alpha = 0, rho = 1, lambda = 8, l1 = 0, l2 = 0, fit_from = 8;

  auto file_arg = [&](CLI::App* s) { s->add_option("automaton", path, "Automaton JSON file")->required(); };

  auto* inspect = app.add_subcommand("inspect", "Components, period, synchronizing word and a prefix");
  file_arg(inspect);
  auto* transduce = app.add_subcommand("transduce", "Naturally induced transducer with property checks");
  file_arg(transduce);
  transduce->add_option("--component", component, "Use final component number i");
  auto* structure = app.add_subcommand("structure", "Period d, group G, cosets and the arithmetic data");
  file_arg(structure);
  structure->add_option("--component", component, "Use final component number i");
  structure->add_option("--depth", depth, "Exhaustive word length for the coset check (0 = skip)")
      ->check(CLI::Range(0, 16));
  auto* reduce = app.add_subcommand("reduce", "Power automaton with d = k0 = 1");
  file_arg(reduce);
  auto* predict = app.add_subcommand("predict-primes", "Letter frequencies along primes");
  file_arg(predict);
  auto* verify = app.add_subcommand("verify-primes", "Empirical prime frequencies against the prediction");
  file_arg(verify);
  verify->add_option("--limit", limit, "Count primes p <= limit")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{10'000'000'000}));
  verify->add_option("--mod", mod, "Restrict to p = res mod this");
  verify->add_option("--res", res, "Residue for --mod");
  verify->add_option("--tolerance", tolerance, "Fail when max |empirical - predicted| exceeds this");
  auto* mobius = app.add_subcommand("mobius", "Mobius correlations per label");
  file_arg(mobius);
  mobius->add_option("--limit", limit, "Sum over n < limit")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{2'000'000'000}));
  mobius->add_option("--shifts", shifts, "Comma-separated shifts r");
  auto* windowed = app.add_subcommand("windowed-mobius", "Windowed Mobius sum of the weight vector");
  file_arg(windowed);
  windowed->add_option("--limit", limit, "N")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{2'000'000'000}));
  windowed->add_option("--lambda1", l1, "Window digits");
  windowed->add_option("--lambda2", l2, "Residue digits");
  windowed->add_option("--b", b, "Window digit block");
  windowed->add_option("--m", m, "Residue class mod k^lambda2");
  windowed->add_option("--r", shift, "Shift");
  auto* fourier = app.add_subcommand("fourier", "Sup norms of the Fourier terms psi and a decay fit");
  file_arg(fourier);
  fourier->add_option("--rep", rep, "dl:<l>, char (sign character) or regular");
  fourier->add_option("--lambda", lambda_range, "Range a..b");
  fourier->add_option("--grid", grid, "t-grid size")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 22));
  fourier->add_option("--alpha", alpha, "Fixed low digits");
  fourier->add_option("--r", shift, "Low digit block, below k^alpha");
  fourier->add_option("--fit-from", fit_from, "Smallest lambda used in the fit");
  auto* carry = app.add_subcommand("carry", "Carry-property violation count");
  file_arg(carry);
  carry->add_option("--lambda", lambda, "Window digits")->check(CLI::Range(1u, 40u));
  carry->add_option("--alpha", alpha, "Low digits");
  carry->add_option("--rho", rho, "Truncation offset, below lambda");
  carry->add_option("--r", shift, "Shift");

  CLI11_PARSE(app, argc, argv);

  try {
    if (inspect->parsed())
      cmd_inspect(common, path);
    else if (transduce->parsed())
      cmd_transduce(common, path, component);
    else if (structure->parsed())
      cmd_structure(common, path, component, depth);
    else if (reduce->parsed())
      cmd_reduce(common, path);
    else if (predict->parsed())
      cmd_predict(common, path);
    else if (verify->parsed())
      cmd_verify(common, path, limit, mod, res, tolerance);
    else if (mobius->parsed())
      cmd_mobius(common, path, limit, shifts);
    else if (windowed->parsed())
      cmd_windowed(common, path, limit, l1, l2, b, m, shift);
    else if (fourier->parsed())
      cmd_fourier(common, path, rep, lambda_range, grid, alpha, shift, fit_from);
    else if (carry->parsed())
      cmd_carry(common, path, lambda, alpha, rho, shift);
  } catch (const Failure& e) {
    std::cerr << "autseq: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "autseq: error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
