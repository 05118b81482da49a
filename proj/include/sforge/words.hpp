#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sforge/error.hpp"

namespace sforge {

// Word in the free generators: letter +k / -k means gamma_k^{+1} / gamma_k^{-1} (1-based).
// The word (w_0, ..., w_m) denotes the product gamma_{w_0} ... gamma_{w_m}.
using Word = std::vector<int>;

inline std::vector<int> letter_order(int g) {
  std::vector<int> out;
  for (int k = 1; k <= g; ++k) {
    out.push_back(k);
    out.push_back(-k);
  }
  return out;
}

inline std::size_t reduced_word_count(int g, int L) {
  std::size_t total = 1, layer = 2 * static_cast<std::size_t>(g);
  for (int l = 1; l <= L; ++l) {
    total += layer;
    layer *= 2 * static_cast<std::size_t>(g) - 1;
  }
  return total;
}

// Depth-first enumeration of reduced words of length <= L accepted by `keep`.
// `keep` filters complete words.
inline std::vector<Word> enumerate_words_if(int g, int L, const std::function<bool(const Word&)>& keep) {
  if (g < 0 || L < 0) throw input_error("negative genus or word length");
  std::vector<Word> out;
  Word w;
  auto letters = letter_order(g);
  std::function<void()> visit = [&] {
    if (keep(w)) out.push_back(w);
    if (static_cast<int>(w.size()) == L) return;
    for (int a : letters) {
      if (!w.empty() && w.back() == -a) continue;
      w.push_back(a);
      visit();
      w.pop_back();
    }
  };
  visit();
  return out;
}

inline std::vector<Word> enumerate_reduced_words(int g, int L) {
  return enumerate_words_if(g, L, [](const Word&) { return true; });
}

inline void check_generator_index(int g, int i) {
  if (i < 1 || i > g) throw input_error("generator index out of range: " + std::to_string(i));
}

// Representatives of Gamma / <gamma_i>: words not ending in gamma_i^{+-1}.
inline std::vector<Word> coset_reps(int g, int i, int L) {
  check_generator_index(g, i);
  return enumerate_words_if(g, L, [i](const Word& w) { return w.empty() || (w.back() != i && w.back() != -i); });
}

// Representatives of <gamma_i> \ Gamma / <gamma_j>.
inline std::vector<Word> double_coset_reps(int g, int i, int j, int L) {
  check_generator_index(g, i);
  check_generator_index(g, j);
  return enumerate_words_if(g, L, [i, j](const Word& w) {
    if (w.empty()) return true;
    return w.front() != i && w.front() != -i && w.back() != j && w.back() != -j;
  });
}

inline Word inverse_word(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (int& a : r) a = -a;
  return r;
}

inline Word reduce_word(const Word& w) {
  Word r;
  for (int a : w) {
    if (!r.empty() && r.back() == -a)
      r.pop_back();
    else
      r.push_back(a);
  }
  return r;
}

inline Word concat(const Word& a, const Word& b) {
  Word r = a;
  r.insert(r.end(), b.begin(), b.end());
  return reduce_word(r);
}

inline std::string word_to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s += " ";
    s += "g" + std::to_string(w[k] > 0 ? w[k] : -w[k]);
    if (w[k] < 0) s += "^-1";
  }
  return s;
}

}  // namespace sforge
