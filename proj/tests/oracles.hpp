// Test-only oracles: independent brute-force routes used to freeze expected
// values before trusting the engine's optimized paths. Everything here is
// deliberately naive.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "toposlab/presheaf.hpp"
#include "toposlab/sublattice.hpp"

namespace oracles {

using namespace toposlab;

/// All natural transformations X -> Y by filtering the full product of
/// componentwise functions. Exponential cost; only for tiny carriers.
inline std::vector<std::vector<std::vector<int>>> naive_nat(const Presheaf& x, const Presheaf& y) {
  const FinCategory& c = x.site();
  int nobj = c.num_objects();
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> comp(nobj);
  for (int o = 0; o < nobj; ++o) comp[o].assign(x.size(o), 0);

  auto natural = [&]() {
    for (int f = 0; f < c.num_morphisms(); ++f) {
      int t = c.tgt(f), s = c.src(f);
      for (int i = 0; i < x.size(t); ++i)
        if (comp[s][x.apply(f, i)] != y.apply(f, comp[t][i])) return false;
    }
    return true;
  };

  // odometer over all assignments
  while (true) {
    if (natural()) out.push_back(comp);
    int o = nobj - 1, i = -1;
    for (; o >= 0; --o) {
      bool moved = false;
      for (i = x.size(o) - 1; i >= 0; --i) {
        if (y.size(o) == 0) continue;
        if (comp[o][i] + 1 < y.size(o)) {
          ++comp[o][i];
          moved = true;
          break;
        }
        comp[o][i] = 0;
      }
      if (moved) break;
    }
    if (o < 0) break;
  }
  // empty-product corner: if some carrier of X is nonempty while Y's is empty
  for (int o = 0; o < nobj; ++o)
    if (x.size(o) > 0 && y.size(o) == 0) return {};
  return out;
}

/// All sieves on `obj` by filtering every subset of the morphisms into it.
inline std::vector<std::vector<int>> naive_sieves(const FinCategory& c, int obj) {
  const auto& in = c.into(obj);
  int n = static_cast<int>(in.size());
  std::vector<std::vector<int>> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::set<int> s;
    for (int k = 0; k < n; ++k)
      if (mask & (1 << k)) s.insert(in[k]);
    bool closed = true;
    for (int f : s)
      for (int g : c.into(c.src(f)))
        if (!s.count(c.compose(f, g))) closed = false;
    if (closed) out.emplace_back(s.begin(), s.end());
  }
  return out;
}

/// Connected components of the category of elements by breadth-first search
/// over element pairs (independent of the union-find route).
inline int naive_pi0(const Presheaf& x) {
  const FinCategory& c = x.site();
  std::vector<std::pair<int, int>> nodes;
  std::map<std::pair<int, int>, int> id;
  for (int o = 0; o < c.num_objects(); ++o)
    for (int i = 0; i < x.size(o); ++i) {
      id[{o, i}] = static_cast<int>(nodes.size());
      nodes.push_back({o, i});
    }
  std::vector<std::vector<int>> adj(nodes.size());
  for (int f = 0; f < c.num_morphisms(); ++f)
    for (int i = 0; i < x.size(c.tgt(f)); ++i) {
      int a = id[{c.tgt(f), i}], b = id[{c.src(f), x.apply(f, i)}];
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  std::vector<char> seen(nodes.size(), 0);
  int comps = 0;
  for (size_t start = 0; start < nodes.size(); ++start) {
    if (seen[start]) continue;
    ++comps;
    std::vector<int> stack{(int)start};
    seen[start] = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back(w);
        }
    }
  }
  return comps;
}

/// One application of the plus construction: elements at c are matching
/// families on covering sieves, modulo agreement on a smaller cover.
/// Entirely independent of the quotient-then-close sheafification route.
inline Sheafification plus_once(const Presheaf& x, const LTTopology& top) {
  const FinCategory& c = x.site();
  auto site = x.site_ptr();
  int nobj = c.num_objects();

  struct Entry {
    int sieve_ix;
    std::vector<int> values;
  };
  std::vector<std::vector<Entry>> entries(nobj);
  for (int o = 0; o < nobj; ++o)
    for (int six : top.covering_sieves(o))
      for (const MatchingFamily& f : matching_families(x, o, top.omega.sieves[o][six]))
        entries[o].push_back({six, f.values});

  // agreement sieve of two entries must itself cover
  auto equivalent = [&](int o, const Entry& a, const Entry& b) {
    const Sieve& sa = top.omega.sieves[o][a.sieve_ix];
    const Sieve& sb = top.omega.sieves[o][b.sieve_ix];
    Sieve agree;
    for (size_t i = 0; i < sa.size(); ++i) {
      auto it = std::find(sb.begin(), sb.end(), sa[i]);
      if (it != sb.end() && b.values[it - sb.begin()] == a.values[i]) agree.push_back(sa[i]);
    }
    return top.covers(o, top.omega.sieve_index(o, agree));
  };

  std::vector<std::vector<int>> cls(nobj);
  std::vector<std::vector<int>> reps(nobj);
  for (int o = 0; o < nobj; ++o) {
    int n = (int)entries[o].size();
    UnionFind uf(n);
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k)
        if (equivalent(o, entries[o][i], entries[o][k])) uf.unite(i, k);
    cls[o].assign(n, -1);
    for (int i = 0; i < n; ++i) {
      int r = uf.find(i);
      if (cls[o][r] < 0) {
        cls[o][r] = (int)reps[o].size();
        reps[o].push_back(r);
      }
      cls[o][i] = cls[o][r];
    }
  }

  std::vector<std::vector<std::string>> elems(nobj);
  for (int o = 0; o < nobj; ++o)
    for (int r : reps[o]) {
      std::string nm = "[" + std::to_string(entries[o][r].sieve_ix);
      for (int v : entries[o][r].values) nm += "," + std::to_string(v);
      elems[o].push_back(nm + "]");
    }

  auto find_class = [&](int o, int six, const std::vector<int>& vals) {
    for (int i = 0; i < (int)entries[o].size(); ++i)
      if (entries[o][i].sieve_ix == six && entries[o][i].values == vals) return cls[o][i];
    throw ValidationError("plus_once: family not found");
  };

  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int f = 0; f < c.num_morphisms(); ++f) {
    int t = c.tgt(f), s = c.src(f);
    for (int r : reps[t]) {
      const Entry& e = entries[t][r];
      const Sieve& se = top.omega.sieves[t][e.sieve_ix];
      // pull the family back along f
      int pulled_ix = top.omega.omega.apply(f, e.sieve_ix);
      const Sieve& sp = top.omega.sieves[s][pulled_ix];
      std::vector<int> vals(sp.size());
      for (size_t k = 0; k < sp.size(); ++k) {
        int fg = c.compose(f, sp[k]);
        auto it = std::find(se.begin(), se.end(), fg);
        vals[k] = e.values[it - se.begin()];
      }
      action[f].push_back(find_class(s, pulled_ix, vals));
    }
  }
  Presheaf plus(site, std::move(elems), std::move(action));

  std::vector<std::vector<int>> ucomp(nobj);
  for (int o = 0; o < nobj; ++o) {
    Sieve maximal = c.into(o);
    int six = top.omega.sieve_index(o, maximal);
    for (int i = 0; i < x.size(o); ++i) {
      std::vector<int> vals(maximal.size());
      for (size_t k = 0; k < maximal.size(); ++k) vals[k] = x.apply(maximal[k], i);
      ucomp[o].push_back(find_class(o, six, vals));
    }
  }
  PresheafMap unit(x, plus, std::move(ucomp));
  return Sheafification{std::move(plus), std::move(unit)};
}

/// Sheafification by applying plus twice.
inline Sheafification double_plus(const Presheaf& x, const LTTopology& top) {
  Sheafification once = plus_once(x, top);
  Sheafification twice = plus_once(once.sheaf, top);
  return Sheafification{twice.sheaf, compose(twice.unit, once.unit)};
}

}  // namespace oracles
