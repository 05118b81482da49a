#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "sforge/error.hpp"

namespace sforge {

using MzvFloat = boost::multiprecision::cpp_bin_float_50;

inline std::string index_string(const std::vector<int>& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out;
}

namespace detail {

// Li_{s_1..s_r}(x) = sum_{n_1 > ... > n_r >= 1} x^{n_1} / (n_1^{s_1} ... n_r^{s_r}).
inline MzvFloat multiple_polylog(const std::vector<int>& s, const MzvFloat& x, int terms) {
  if (s.empty()) return 1;
  const int r = static_cast<int>(s.size());
  // inner[n] = sum over n > n_2 > ... of the inner factors, built from the innermost index out
  std::vector<MzvFloat> inner(terms + 1, MzvFloat(1));
  for (int level = r - 1; level >= 1; --level) {
    std::vector<MzvFloat> next(terms + 1, MzvFloat(0));
    MzvFloat acc = 0;
    for (int n = 1; n <= terms; ++n) {
      next[n] = acc;  // strictly smaller indices
      acc += inner[n] / boost::multiprecision::pow(MzvFloat(n), s[level]);
    }
    inner = std::move(next);
  }
  MzvFloat sum = 0, xn = 1;
  for (int n = 1; n <= terms; ++n) {
    xn *= x;
    if (r == 1)
      sum += xn / boost::multiprecision::pow(MzvFloat(n), s[0]);
    else
      sum += xn * inner[n] / boost::multiprecision::pow(MzvFloat(n), s[0]);
  }
  return sum;
}

// I(0; a_1..a_n; 1/2) for a 0/1 word starting with 1 (or empty).
inline MzvFloat half_integral(const std::vector<int>& a, int terms) {
  if (a.empty()) return 1;
  if (a.front() != 1) throw domain_error("iterated integral word must start with 1");
  std::vector<int> blocks;  // m_1, m_2, ...: each 1 followed by m-1 zeros
  for (int letter : a) {
    if (letter == 1)
      blocks.push_back(1);
    else
      ++blocks.back();
  }
  std::vector<int> s(blocks.rbegin(), blocks.rend());
  MzvFloat v = multiple_polylog(s, MzvFloat(1) / 2, terms);
  return blocks.size() % 2 ? MzvFloat(-v) : v;
}

}  // namespace detail

// zeta(s_1, ..., s_k) = sum_{n_1 > ... > n_k >= 1} prod n_j^{-s_j}, to about 50 digits.
inline MzvFloat mzv_mp(const std::vector<int>& s) {
  if (s.empty()) throw domain_error("divergent: empty index");
  for (int v : s)
    if (v < 1) throw domain_error("divergent: index entries must be positive (" + index_string(s) + ")");
  if (s.front() < 2) throw domain_error("divergent: first index must be at least 2 (" + index_string(s) + ")");
  // word 1 0^{s_k - 1} ... 1 0^{s_1 - 1}; zeta = (-1)^k I(0; w; 1), split at 1/2 and the
  // upper half reflected by t -> 1 - t
  std::vector<int> w;
  for (auto it = s.rbegin(); it != s.rend(); ++it) {
    w.push_back(1);
    w.insert(w.end(), *it - 1, 0);
  }
  const int n = static_cast<int>(w.size());
  const int terms = 200 + 4 * n;
  MzvFloat total = 0;
  for (int j = 0; j <= n; ++j) {
    std::vector<int> head(w.begin(), w.begin() + j), tail;
    for (int i = n - 1; i >= j; --i) tail.push_back(1 - w[i]);
    MzvFloat term = detail::half_integral(head, terms) * detail::half_integral(tail, terms);
    total += (n - j) % 2 ? MzvFloat(-term) : term;
  }
  return s.size() % 2 ? MzvFloat(-total) : total;
}

inline double mzv(const std::vector<int>& s) { return static_cast<double>(mzv_mp(s)); }

// "2,1" -> {2, 1}
inline std::vector<int> parse_mzv_index(const std::string& text) {
  std::vector<int> s;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      s.push_back(v);
    } catch (const std::exception&) {
      throw input_error("bad zeta index list: " + text);
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return s;
}

}  // namespace sforge
