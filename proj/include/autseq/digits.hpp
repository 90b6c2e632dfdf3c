#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace autseq {

using Digit = std::uint32_t;

/// Digits in base k, most significant first. The empty word encodes 0.
using Word = std::vector<Digit>;

inline void check_base(std::uint64_t k)
{
  if (k < 2)
    throw std::invalid_argument("base must be at least 2, got " + std::to_string(k));
}

/// (n)_k without leading zeros; (0)_k is the empty word.
inline Word digits_of(std::uint64_t n, std::uint64_t k)
{
  check_base(k);
  Word w;
  while (n > 0) {
    w.push_back(static_cast<Digit>(n % k));
    n /= k;
  }
  return Word(w.rbegin(), w.rend());
}

/// The unique word of length t whose value is congruent to n mod k^t.
inline Word fixed_digits(std::uint64_t n, std::uint64_t k, std::size_t t)
{
  check_base(k);
  Word w(t, 0);
  for (std::size_t i = t; i-- > 0;) {
    w[i] = static_cast<Digit>(n % k);
    n /= k;
  }
  return w;
}

/// [w]_k. Wraps modulo 2^64 for words too long to fit.
inline std::uint64_t value_of(const Word& w, std::uint64_t k)
{
  check_base(k);
  std::uint64_t v = 0;
  for (Digit d : w) {
    if (d >= k)
      throw std::invalid_argument("digit " + std::to_string(d) + " out of range for base " +
                                  std::to_string(k));
    v = v * k + d;
  }
  return v;
}

/// [w]_k mod m.
inline std::uint64_t value_mod(const Word& w, std::uint64_t k, std::uint64_t m)
{
  std::uint64_t v = 0;
  for (Digit d : w)
    v = static_cast<std::uint64_t>((static_cast<unsigned __int128>(v) * k + d) % m);
  return v;
}

/// k^e, throwing on overflow.
inline std::uint64_t checked_pow(std::uint64_t k, std::uint64_t e)
{
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (r > UINT64_MAX / k)
      throw std::overflow_error("k^e overflows 64 bits");
    r *= k;
  }
  return r;
}

inline std::string to_string(const Word& w)
{
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i)
      s += ',';
    s += std::to_string(w[i]);
  }
  return "[" + s + "]";
}

} // namespace autseq
