#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace autseq {

/// Permutation of {0,...,n-1} stored as a forward map: map[i] = sigma(i).
///
/// The action on tuples is sigma.x = (x_{sigma^-1(1)}, ...), i.e. the entry at
/// position i moves to position sigma(i). Products are ordinary composition,
/// (a*b)(i) = a(b(i)), which makes (a*b).x = a.(b.x).
class Perm {
public:
  Perm() = default;

  explicit Perm(std::vector<std::uint32_t> map) : map_(std::move(map))
  {
    std::vector<bool> seen(map_.size(), false);
    for (auto v : map_) {
      if (v >= map_.size() || seen[v])
        throw std::invalid_argument("not a permutation");
      seen[v] = true;
    }
  }

  static Perm identity(std::size_t n)
  {
    std::vector<std::uint32_t> m(n);
    std::iota(m.begin(), m.end(), 0u);
    Perm p;
    p.map_ = std::move(m);
    return p;
  }

  /// Build from 1-based cycles, e.g. {{1,2,3}} for (123).
  static Perm from_cycles(std::size_t n, const std::vector<std::vector<std::uint32_t>>& cycles)
  {
    Perm p = identity(n);
    for (const auto& c : cycles) {
      for (std::size_t i = 0; i < c.size(); ++i) {
        auto from = c[i] - 1, to = c[(i + 1) % c.size()] - 1;
        if (from >= n || to >= n)
          throw std::invalid_argument("cycle point out of range");
        p.map_[from] = to;
      }
    }
    return Perm(p.map_);
  }

  std::size_t size() const { return map_.size(); }
  std::uint32_t operator()(std::size_t i) const { return map_[i]; }
  const std::vector<std::uint32_t>& map() const { return map_; }

  bool is_identity() const
  {
    for (std::size_t i = 0; i < map_.size(); ++i)
      if (map_[i] != i)
        return false;
    return true;
  }

  Perm inverse() const
  {
    Perm r;
    r.map_.resize(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i)
      r.map_[map_[i]] = static_cast<std::uint32_t>(i);
    return r;
  }

  /// sigma.x: result[sigma(i)] = x[i].
  template <class T>
  std::vector<T> act(const std::vector<T>& x) const
  {
    if (x.size() != map_.size())
      throw std::invalid_argument("tuple width does not match permutation degree");
    std::vector<T> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      r[map_[i]] = x[i];
    return r;
  }

  /// Sign as +1 or -1.
  int sign() const
  {
    std::vector<bool> seen(map_.size(), false);
    int s = 1;
    for (std::size_t i = 0; i < map_.size(); ++i) {
      if (seen[i])
        continue;
      std::size_t len = 0;
      for (std::size_t j = i; !seen[j]; j = map_[j]) {
        seen[j] = true;
        ++len;
      }
      if (len % 2 == 0)
        s = -s;
    }
    return s;
  }

  /// Cycle notation with 1-based points, "id" for the identity. Points are
  /// written without separators when the degree is below 10, e.g. "(123)".
  std::string cycles() const
  {
    std::string out;
    std::vector<bool> seen(map_.size(), false);
    const bool compact = map_.size() < 10;
    for (std::size_t i = 0; i < map_.size(); ++i) {
      if (seen[i] || map_[i] == i)
        continue;
      out += '(';
      bool first = true;
      for (std::size_t j = i; !seen[j]; j = map_[j]) {
        seen[j] = true;
        if (!first && !compact)
          out += ' ';
        out += std::to_string(j + 1);
        first = false;
      }
      out += ')';
    }
    return out.empty() ? "id" : out;
  }

  friend Perm operator*(const Perm& a, const Perm& b)
  {
    if (a.size() != b.size())
      throw std::invalid_argument("permutation degrees differ");
    Perm r;
    r.map_.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      r.map_[i] = a.map_[b.map_[i]];
    return r;
  }

  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm& a, const Perm& b) { return a.map_ <=> b.map_; }

private:
  std::vector<std::uint32_t> map_;
};

struct PermHash {
  std::size_t operator()(const Perm& p) const noexcept
  {
    std::size_t h = 0xcbf29ce484222325ull;
    for (auto v : p.map())
      h = (h ^ v) * 0x100000001b3ull;
    return h;
  }
};

/// Parse cycle notation such as "(12)(34)", "(1 2 10)" or "id" (1-based points).
inline Perm parse_cycles(std::size_t n, const std::string& s)
{
  if (s == "id" || s.empty())
    return Perm::identity(n);
  std::vector<std::vector<std::uint32_t>> cycles;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '(')
      throw std::invalid_argument("bad cycle notation: " + s);
    auto close = s.find(')', i);
    if (close == std::string::npos)
      throw std::invalid_argument("bad cycle notation: " + s);
    std::string body = s.substr(i + 1, close - i - 1);
    std::vector<std::uint32_t> cyc;
    if (body.find(' ') != std::string::npos) {
      std::size_t pos = 0;
      while (pos < body.size()) {
        auto sp = body.find(' ', pos);
        if (sp == std::string::npos)
          sp = body.size();
        if (sp > pos)
          cyc.push_back(static_cast<std::uint32_t>(std::stoul(body.substr(pos, sp - pos))));
        pos = sp + 1;
      }
    } else {
      for (char c : body)
        cyc.push_back(static_cast<std::uint32_t>(c - '0'));
    }
    cycles.push_back(std::move(cyc));
    i = close + 1;
  }
  return Perm::from_cycles(n, cycles);
}

} // namespace autseq
