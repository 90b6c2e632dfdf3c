#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "perm.hpp"

namespace autseq {

inline constexpr std::size_t default_group_cap = 1'000'000;

/// Finite permutation group as a sorted element list. The identity is the
/// lexicographically least forward map, so it always sits at index 0.
class GroupTable {
public:
  GroupTable() = default;

  /// Subgroup generated by `gens` (the identity of the given degree if empty).
  static GroupTable generate(const std::vector<Perm>& gens, std::size_t degree,
                             std::size_t cap = default_group_cap)
  {
    std::vector<Perm> elems{Perm::identity(degree)};
    std::unordered_map<Perm, std::size_t, PermHash> seen{{elems[0], 0}};
    std::vector<Perm> uniq;
    for (auto& g : gens) {
      if (g.size() != degree)
        throw std::invalid_argument("generator of wrong degree");
      if (std::find(uniq.begin(), uniq.end(), g) == uniq.end())
        uniq.push_back(g);
    }
    for (std::size_t h = 0; h < elems.size(); ++h) {
      for (auto& g : uniq) {
        Perm x = elems[h] * g;
        if (seen.count(x))
          continue;
        if (elems.size() >= cap)
          throw std::runtime_error("group order exceeds cap of " + std::to_string(cap));
        seen.emplace(x, elems.size());
        elems.push_back(std::move(x));
      }
    }
    return from_elements(std::move(elems), degree);
  }

  /// Wraps an explicit element list; closure is the caller's responsibility (see is_closed).
  static GroupTable from_elements(std::vector<Perm> elems, std::size_t degree)
  {
    GroupTable t;
    t.degree_ = degree;
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    t.elements_ = std::move(elems);
    for (std::size_t i = 0; i < t.elements_.size(); ++i)
      t.index_.emplace(t.elements_[i], i);
    return t;
  }

  std::size_t order() const { return elements_.size(); }
  std::size_t degree() const { return degree_; }
  const std::vector<Perm>& elements() const { return elements_; }
  const Perm& operator[](std::size_t i) const { return elements_[i]; }

  std::optional<std::size_t> find(const Perm& p) const
  {
    auto it = index_.find(p);
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  std::size_t index(const Perm& p) const
  {
    auto i = find(p);
    if (!i)
      throw std::out_of_range("permutation " + p.cycles() + " not in group");
    return *i;
  }

  bool contains(const Perm& p) const { return index_.count(p) > 0; }

  std::size_t mul(std::size_t i, std::size_t j) const { return index(elements_[i] * elements_[j]); }

  bool is_closed() const
  {
    if (elements_.empty() || !elements_[0].is_identity())
      return false;
    for (auto& a : elements_) {
      if (!contains(a.inverse()))
        return false;
      for (auto& b : elements_)
        if (!contains(a * b))
          return false;
    }
    return true;
  }

private:
  std::size_t degree_ = 0;
  std::vector<Perm> elements_;
  std::unordered_map<Perm, std::size_t, PermHash> index_;
};

/// Sorted set x*S.
inline std::vector<Perm> left_translate(const Perm& x, const std::vector<Perm>& s)
{
  std::vector<Perm> r;
  for (auto& g : s)
    r.push_back(x * g);
  std::sort(r.begin(), r.end());
  return r;
}

/// Sorted set S*x.
inline std::vector<Perm> right_translate(const std::vector<Perm>& s, const Perm& x)
{
  std::vector<Perm> r;
  for (auto& g : s)
    r.push_back(g * x);
  std::sort(r.begin(), r.end());
  return r;
}

inline Perm power(const Perm& g, std::size_t e)
{
  Perm r = Perm::identity(g.size());
  for (std::size_t i = 0; i < e; ++i)
    r = r * g;
  return r;
}

} // namespace autseq
