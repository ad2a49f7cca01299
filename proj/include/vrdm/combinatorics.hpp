#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace vrdm {

inline std::int64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t c = 1;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

// Lexicographic enumeration of ordered index pairs i<j over [0,n).
// Pair (i,j) <-> flat index; all two-index objects use this layout.
class PairIndexer {
public:
  PairIndexer() = default;
  explicit PairIndexer(int n) : n_(n) {
    pairs_.reserve(static_cast<std::size_t>(binomial(n, 2)));
    lookup_.assign(static_cast<std::size_t>(n) * n, -1);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        lookup_[static_cast<std::size_t>(i) * n + j] =
            static_cast<int>(pairs_.size());
        lookup_[static_cast<std::size_t>(j) * n + i] =
            static_cast<int>(pairs_.size());
        pairs_.push_back({i, j});
      }
  }

  int n() const { return n_; }
  int size() const { return static_cast<int>(pairs_.size()); }

  // flat index of the unordered pair {i,j}; i != j required
  int operator()(int i, int j) const {
    return lookup_[static_cast<std::size_t>(i) * n_ + j];
  }
  const std::array<int, 2>& pair(int idx) const { return pairs_[idx]; }

private:
  int n_ = 0;
  std::vector<std::array<int, 2>> pairs_;
  std::vector<int> lookup_;
};

// Same for ordered triples i<j<k.
class TripleIndexer {
public:
  TripleIndexer() = default;
  explicit TripleIndexer(int n) : n_(n) {
    triples_.reserve(static_cast<std::size_t>(binomial(n, 3)));
    lookup_.assign(static_cast<std::size_t>(n) * n * n, -1);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) {
          const int t = static_cast<int>(triples_.size());
          const int perms[6][3] = {{i, j, k}, {i, k, j}, {j, i, k},
                                   {j, k, i}, {k, i, j}, {k, j, i}};
          for (auto& p : perms)
            lookup_[(static_cast<std::size_t>(p[0]) * n + p[1]) * n + p[2]] = t;
          triples_.push_back({i, j, k});
        }
  }

  int n() const { return n_; }
  int size() const { return static_cast<int>(triples_.size()); }
  int operator()(int i, int j, int k) const {
    return lookup_[(static_cast<std::size_t>(i) * n_ + j) * n_ + k];
  }
  const std::array<int, 3>& triple(int idx) const { return triples_[idx]; }

private:
  int n_ = 0;
  std::vector<std::array<int, 3>> triples_;
  std::vector<int> lookup_;
};

// Sorts `idx` ascending in place and returns the permutation parity
// (+1/-1), or 0 if two entries coincide.
inline int sort_with_parity(std::vector<int>& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i) {
    int v = idx[i];
    std::size_t j = i;
    while (j > 0 && idx[j - 1] > v) {
      idx[j] = idx[j - 1];
      sign = -sign;
      --j;
    }
    idx[j] = v;
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

// Enumerates all k-subsets of [0,n) in lexicographic order.
inline std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

} // namespace vrdm
