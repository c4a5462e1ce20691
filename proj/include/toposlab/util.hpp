#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace toposlab {

/// Base class for all engine errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A law or well-formedness check failed on user-supplied data.
struct ValidationError : Error {
  explicit ValidationError(const std::string& what) : Error(what) {}
};

/// A brute-force search exceeded its configured budget.
struct BoundError : Error {
  explicit BoundError(const std::string& what) : Error(what) {}
};

/// Budgets for exhaustive searches. `max_nodes` counts candidate
/// assignments visited by a backtracking enumeration, not the naive
/// product of carrier sizes (constraint propagation prunes almost all
/// of that product away).
struct EnumLimits {
  long long max_nodes = 1'000'000;
};

template <typename It>
std::string join(It begin, It end, const std::string& sep) {
  std::ostringstream out;
  bool first = true;
  for (It it = begin; it != end; ++it) {
    if (!first) out << sep;
    out << *it;
    first = false;
  }
  return out.str();
}

template <typename C>
std::string join(const C& items, const std::string& sep) {
  return join(items.begin(), items.end(), sep);
}

/// Disjoint-set forest used for connected components and quotients.
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    // keep the smaller index as representative so that class reps are
    // the least member in enumeration order
    if (a < b)
      parent_[b] = a;
    else
      parent_[a] = b;
  }
  int size() const { return static_cast<int>(parent_.size()); }

 private:
  std::vector<int> parent_;
};

}  // namespace toposlab
