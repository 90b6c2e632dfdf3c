#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "numbertheory.hpp"
#include "structure.hpp"
#include "transducer.hpp"

namespace autseq {

using json = nlohmann::ordered_json;

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw SchemaError(where + ": unknown key '" + it.key() + "'");
}

inline const json& field(const json& obj, const std::string& key, const std::string& where)
{
  auto it = obj.find(key);
  if (it == obj.end())
    throw SchemaError(where + ": missing field '" + key + "'");
  return *it;
}

inline std::string as_name(const json& v, const std::string& where)
{
  if (!v.is_string())
    throw SchemaError(where + ": expected a string");
  return v.get<std::string>();
}

} // namespace detail

/// Parses the automaton schema; every violation names the offending field.
inline Dfao parse_automaton(const json& doc)
{
  using detail::field;
  if (!doc.is_object())
    throw SchemaError("automaton: top level must be an object");
  detail::reject_unknown(doc, {"k", "states", "initial", "transitions", "output", "embedding"}, "automaton");

  const auto& kj = field(doc, "k", "automaton");
  if (!kj.is_number_unsigned() || kj.get<std::uint64_t>() < 2 || kj.get<std::uint64_t>() > (1u << 24))
    throw SchemaError("field 'k': expected an integer base >= 2");
  const auto k = kj.get<unsigned>();

  const auto& sj = field(doc, "states", "automaton");
  if (!sj.is_array() || sj.empty())
    throw SchemaError("field 'states': expected a non-empty array of names");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < sj.size(); ++i)
    names.push_back(detail::as_name(sj[i], "states[" + std::to_string(i) + "]"));
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size())
    throw SchemaError("field 'states': duplicate state name");
  auto known = [&](const std::string& n, const std::string& where) {
    if (std::find(names.begin(), names.end(), n) == names.end())
      throw SchemaError(where + ": unknown state '" + n + "'");
  };

  const auto init = detail::as_name(field(doc, "initial", "automaton"), "field 'initial'");
  known(init, "field 'initial'");

  const auto& tj = field(doc, "transitions", "automaton");
  if (!tj.is_object())
    throw SchemaError("field 'transitions': expected an object keyed by state");
  for (auto it = tj.begin(); it != tj.end(); ++it)
    known(it.key(), "field 'transitions'");
  std::vector<std::vector<std::string>> rows;
  for (auto& n : names) {
    auto it = tj.find(n);
    if (it == tj.end())
      throw SchemaError("field 'transitions': state '" + n + "' has no row");
    if (!it->is_array() || it->size() != k)
      throw SchemaError("field 'transitions': state '" + n + "' needs exactly " + std::to_string(k) +
                        " targets, got " + (it->is_array() ? std::to_string(it->size()) : "a non-array"));
    std::vector<std::string> row;
    for (std::size_t a = 0; a < k; ++a) {
      const auto where = "transitions." + n + "[" + std::to_string(a) + "]";
      row.push_back(detail::as_name((*it)[a], where));
      known(row.back(), where);
    }
    rows.push_back(std::move(row));
  }

  const auto& oj = field(doc, "output", "automaton");
  if (!oj.is_object())
    throw SchemaError("field 'output': expected an object keyed by state");
  for (auto it = oj.begin(); it != oj.end(); ++it)
    known(it.key(), "field 'output'");
  std::vector<std::string> outs;
  for (auto& n : names) {
    auto it = oj.find(n);
    if (it == oj.end())
      throw SchemaError("field 'output': state '" + n + "' has no output");
    outs.push_back(detail::as_name(*it, "output." + n));
  }

  Dfao a = make_dfao(k, names, rows, outs, init);
  if (auto ej = doc.find("embedding"); ej != doc.end()) {
    if (!ej->is_object())
      throw SchemaError("field 'embedding': expected an object keyed by label");
    a.embedding.assign(a.labels.size(), std::nullopt);
    for (auto it = ej->begin(); it != ej->end(); ++it) {
      auto pos = std::find(a.labels.begin(), a.labels.end(), it.key());
      if (pos == a.labels.end())
        throw SchemaError("field 'embedding': unknown label '" + it.key() + "'");
      const auto& v = it.value();
      if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw SchemaError("embedding." + it.key() + ": expected [re, im]");
      a.embedding[pos - a.labels.begin()] = std::complex<double>(v[0].get<double>(), v[1].get<double>());
    }
    if (!a.has_embedding())
      throw SchemaError("field 'embedding': every label needs a value");
  }
  a.validate();
  return a;
}

inline Dfao parse_automaton_text(const std::string& text)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return parse_automaton(doc);
}

inline Dfao load_automaton(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_automaton_text(ss.str());
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

inline json to_json(const Dfao& a)
{
  json j;
  j["k"] = a.k;
  j["states"] = a.state_names;
  j["initial"] = a.state_names[a.initial];
  json tr = json::object(), out = json::object();
  for (State q = 0; q < a.size(); ++q) {
    json row = json::array();
    for (Digit d = 0; d < a.k; ++d)
      row.push_back(a.state_names[a.next(q, d)]);
    tr[a.state_names[q]] = row;
    out[a.state_names[q]] = a.label_of(q);
  }
  j["transitions"] = tr;
  j["output"] = out;
  if (a.has_embedding()) {
    json e = json::object();
    for (std::size_t i = 0; i < a.labels.size(); ++i)
      e[a.labels[i]] = {a.embedding[i]->real(), a.embedding[i]->imag()};
    j["embedding"] = e;
  }
  return j;
}

inline json perm_json(const Perm& p) { return {{"map", p.map()}, {"cycles", p.cycles()}}; }

inline json perms_json(const std::vector<Perm>& ps)
{
  json a = json::array();
  for (auto& p : ps)
    a.push_back(p.cycles());
  return a;
}

inline json to_json(const Transducer& t, const Dfao& a)
{
  json j;
  j["k"] = t.k;
  j["n0"] = t.n0;
  json states = json::array();
  for (auto& tup : t.states) {
    json s = json::array();
    for (auto q : tup)
      s.push_back(a.state_names.at(q));
    states.push_back(s);
  }
  j["states"] = states;
  j["initial"] = t.initial;
  json delta = json::array(), lambda = json::array();
  for (std::uint32_t q = 0; q < t.size(); ++q) {
    json dr = json::array(), lr = json::array();
    for (Digit d = 0; d < t.k; ++d) {
      dr.push_back(t.next(q, d));
      lr.push_back(perm_json(t.weight(q, d)));
    }
    delta.push_back(dr);
    lambda.push_back(lr);
  }
  j["delta"] = delta;
  j["lambda"] = lambda;
  return j;
}

inline json to_json(const InducedDiagnostics& d)
{
  json j = json::object();
  for (std::size_t i = 0; i < d.pass.size(); ++i)
    j[InducedDiagnostics::names[i]] = static_cast<bool>(d.pass[i]);
  j["messages"] = d.messages;
  return j;
}

inline json to_json(const StructureReport& r)
{
  json j;
  j["d"] = r.d;
  j["m0_observed"] = r.m0;
  j["delta_order"] = r.delta_order;
  j["G"] = perms_json(r.G.elements());
  json gmaps = json::array();
  for (auto& g : r.G.elements())
    gmaps.push_back(g.map());
  j["G_maps"] = gmaps;
  j["g0"] = perm_json(r.g0);
  json cos = json::array();
  for (auto& c : r.cosets)
    cos.push_back(perms_json(c));
  j["cosets"] = cos;
  j["l0"] = r.l0;
  j["K"] = r.K;
  j["d_prime"] = r.d_prime;
  j["d_pair"] = r.d_pair;
  j["d_dprime"] = r.d_dprime;
  j["c"] = r.c;
  j["k0"] = r.k0;
  j["m0_prime_observed"] = r.m0_prime;
  json s0 = json::object();
  for (std::size_t i = 0; i < r.G.order(); ++i)
    s0[r.G[i].cycles()] = r.s0[i];
  j["s0"] = s0;
  j["G0"] = perms_json(r.G0.elements());
  j["g0_prime"] = r.g0_prime ? perm_json(*r.g0_prime) : json(nullptr);
  j["s_equal"] = r.s_equal;
  j["issues"] = r.issues;
  return j;
}

inline json rational_json(const Rational& x)
{
  return {{"num", x.numerator()}, {"den", x.denominator()},
          {"value", boost::rational_cast<double>(x)}};
}

inline json to_json(const PrimePrediction& p)
{
  json j;
  j["power"] = p.p;
  j["base"] = p.base;
  j["structure"] = to_json(p.structure);
  json fg = json::object();
  for (std::size_t i = 0; i < p.f_g.size(); ++i)
    fg[p.structure.G[i].cycles()] = rational_json(p.f_g[i]);
  j["f_g"] = fg;
  j["pi"] = p.pi;
  j["f_q"] = p.f_q;
  j["f_qb"] = p.f_qb;
  json fr = json::object();
  for (std::size_t i = 0; i < p.labels.size(); ++i)
    fr[p.labels[i]] = p.freq[i];
  j["frequencies"] = fr;
  return j;
}

} // namespace autseq
