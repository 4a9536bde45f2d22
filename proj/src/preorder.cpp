#include "prefgame/preorder.hpp"

#include <algorithm>

namespace prefgame {

Preorder::Preorder(int size) : n_(size), rel_(size * size, 0) {}

void Preorder::make_reflexive() {
  for (int i = 0; i < n_; ++i) rel_[idx(i, i)] = 1;
}

void Preorder::transitive_closure() {
  for (int k = 0; k < n_; ++k)
    for (int i = 0; i < n_; ++i) {
      if (!rel_[idx(i, k)]) continue;
      for (int j = 0; j < n_; ++j)
        if (rel_[idx(k, j)]) rel_[idx(i, j)] = 1;
    }
}

bool Preorder::is_reflexive() const {
  for (int i = 0; i < n_; ++i)
    if (!rel_[idx(i, i)]) return false;
  return true;
}

bool Preorder::is_transitive() const {
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      if (!rel_[idx(i, k)]) continue;
      for (int j = 0; j < n_; ++j)
        if (rel_[idx(k, j)] && !rel_[idx(i, j)]) return false;
    }
  return true;
}

Preorder Preorder::inverse() const {
  Preorder out(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (geq(i, j)) out.add(j, i);
  return out;
}

std::vector<int> maximal(const std::vector<int>& universe, const Preorder& r) {
  std::vector<int> out;
  for (int u : universe) {
    bool dominated = false;
    for (int v : universe)
      if (r.gt(v, u)) {
        dominated = true;
        break;
      }
    if (!dominated) out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> minimal(const std::vector<int>& universe, const Preorder& r) {
  std::vector<int> out;
  for (int u : universe) {
    bool dominates = false;
    for (int v : universe)
      if (r.gt(u, v)) {
        dominates = true;
        break;
      }
    if (!dominates) out.push_back(u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

RankMap rank_map(const Preorder& r) {
  std::vector<int> universe(r.size());
  for (int i = 0; i < r.size(); ++i) universe[i] = i;
  return rank_map_subset(universe, r);
}

RankMap rank_map_subset(const std::vector<int>& universe, const Preorder& r) {
  RankMap out;
  out.rank.assign(r.size(), -1);
  std::vector<int> remaining = universe;
  std::sort(remaining.begin(), remaining.end());
  int k = 0;
  while (!remaining.empty()) {
    std::vector<int> layer = maximal(remaining, r);
    for (int v : layer) out.rank[v] = k;
    std::vector<int> rest;
    std::set_difference(remaining.begin(), remaining.end(), layer.begin(),
                        layer.end(), std::back_inserter(rest));
    remaining = std::move(rest);
    out.kmax = k;
    ++k;
  }
  return out;
}

}  // namespace prefgame
