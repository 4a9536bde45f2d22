#pragma once

#include <cstdint>
#include <vector>

namespace prefgame {

/// A reflexive, transitive binary relation on a finite indexed carrier
/// {0, ..., size-1}.  Incomparable pairs (neither direction related) are
/// allowed.  The relation is stored densely; all query results are sorted
/// by carrier index.
class Preorder {
public:
  Preorder() = default;
  explicit Preorder(int size);

  int size() const { return n_; }

  /// Weak preference: i is at least as good as j.
  bool geq(int i, int j) const { return rel_[idx(i, j)] != 0; }
  /// Strict preference: i better than j and not conversely.
  bool gt(int i, int j) const { return geq(i, j) && !geq(j, i); }
  bool indifferent(int i, int j) const { return geq(i, j) && geq(j, i); }
  bool incomparable(int i, int j) const { return !geq(i, j) && !geq(j, i); }

  void add(int i, int j) { rel_[idx(i, j)] = 1; }

  /// Adds (i,i) for every carrier element.
  void make_reflexive();
  /// Warshall closure in place.
  void transitive_closure();

  bool is_reflexive() const;
  bool is_transitive() const;

  /// The inverse relation (swap of every pair); inverts a preorder into a
  /// preorder.
  Preorder inverse() const;

  bool operator==(const Preorder& o) const = default;

private:
  int idx(int i, int j) const { return i * n_ + j; }
  int n_ = 0;
  std::vector<uint8_t> rel_;
};

/// Maximal elements of U: those not strictly dominated by another element
/// of U.  Nonempty whenever U is nonempty; result sorted.
std::vector<int> maximal(const std::vector<int>& universe, const Preorder& r);

/// Dual of maximal: elements that do not strictly dominate anything in U.
std::vector<int> minimal(const std::vector<int>& universe, const Preorder& r);

struct RankMap {
  std::vector<int> rank;  // carrier index -> rank
  int kmax = 0;
};

/// Iteratively peels maximal layers Z_0, Z_1, ... until the carrier is
/// exhausted.  Rank 0 is exactly the maximal set of the full carrier.
RankMap rank_map(const Preorder& r);

/// rank_map restricted to a sub-carrier; entries outside `universe` get -1.
RankMap rank_map_subset(const std::vector<int>& universe, const Preorder& r);

}  // namespace prefgame
