#include "toposlab/sublattice.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace toposlab {

Subobject::Subobject(Presheaf ambient, std::vector<std::vector<char>> mask)
    : ambient_(std::move(ambient)), mask_(std::move(mask)) {
  const FinCategory& c = ambient_.site();
  if ((int)mask_.size() != c.num_objects()) throw ValidationError("subobject mask has wrong length");
  for (int o = 0; o < c.num_objects(); ++o)
    if ((int)mask_[o].size() != ambient_.size(o))
      throw ValidationError("subobject mask has wrong size at " + c.object_name(o));
  for (int f = 0; f < c.num_morphisms(); ++f) {
    int t = c.tgt(f), s = c.src(f);
    for (int i = 0; i < ambient_.size(t); ++i)
      if (mask_[t][i] && !mask_[s][ambient_.apply(f, i)])
        throw ValidationError("family is not closed under the action of " + c.morphism_name(f) +
                              " at element " + ambient_.elem_name(t, i));
  }
}

Subobject Subobject::full(const Presheaf& x) {
  std::vector<std::vector<char>> mask(x.site().num_objects());
  for (int o = 0; o < x.site().num_objects(); ++o) mask[o].assign(x.size(o), 1);
  return Subobject(x, std::move(mask));
}

Subobject Subobject::empty_in(const Presheaf& x) {
  std::vector<std::vector<char>> mask(x.site().num_objects());
  for (int o = 0; o < x.site().num_objects(); ++o) mask[o].assign(x.size(o), 0);
  return Subobject(x, std::move(mask));
}

int Subobject::count(int obj) const {
  return (int)std::count(mask_[obj].begin(), mask_[obj].end(), 1);
}

int Subobject::count() const {
  int n = 0;
  for (int o = 0; o < (int)mask_.size(); ++o) n += count(o);
  return n;
}

bool Subobject::is_full() const { return count() == ambient_.total_size(); }

bool Subobject::subset_of(const Subobject& other) const {
  for (int o = 0; o < (int)mask_.size(); ++o)
    for (int i = 0; i < (int)mask_[o].size(); ++i)
      if (mask_[o][i] && !other.mask_[o][i]) return false;
  return true;
}

bool Subobject::operator==(const Subobject& other) const {
  return ambient_ == other.ambient_ && mask_ == other.mask_;
}

Presheaf Subobject::domain() const {
  const FinCategory& c = ambient_.site();
  std::vector<std::vector<std::string>> elems(c.num_objects());
  std::vector<std::vector<int>> reindex(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    reindex[o].assign(ambient_.size(o), -1);
    for (int i = 0; i < ambient_.size(o); ++i)
      if (mask_[o][i]) {
        reindex[o][i] = (int)elems[o].size();
        elems[o].push_back(ambient_.elem_name(o, i));
      }
  }
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int f = 0; f < c.num_morphisms(); ++f) {
    int t = c.tgt(f), s = c.src(f);
    for (int i = 0; i < ambient_.size(t); ++i)
      if (mask_[t][i]) action[f].push_back(reindex[s][ambient_.apply(f, i)]);
  }
  return Presheaf(ambient_.site_ptr(), std::move(elems), std::move(action));
}

PresheafMap Subobject::inclusion() const {
  Presheaf dom = domain();
  const FinCategory& c = ambient_.site();
  std::vector<std::vector<int>> comp(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o)
    for (int i = 0; i < dom.size(o); ++i)
      comp[o].push_back(ambient_.elem_index(o, dom.elem_name(o, i)));
  return PresheafMap(std::move(dom), ambient_, std::move(comp));
}

std::string Subobject::describe() const {
  const FinCategory& c = ambient_.site();
  std::vector<std::string> parts;
  for (int o = 0; o < c.num_objects(); ++o) {
    std::vector<std::string> in;
    for (int i = 0; i < ambient_.size(o); ++i)
      if (mask_[o][i]) in.push_back(ambient_.elem_name(o, i));
    parts.push_back(c.object_name(o) + ":{" + join(in, ",") + "}");
  }
  return join(parts, " ");
}

namespace {

void require_same_ambient(const Subobject& u, const Subobject& v, const char* what) {
  if (!(u.ambient() == v.ambient()))
    throw ValidationError(std::string(what) + ": subobjects of different presheaves");
}

}  // namespace

Subobject sub_meet(const Subobject& u, const Subobject& v) {
  require_same_ambient(u, v, "meet");
  auto mask = u.mask();
  for (size_t o = 0; o < mask.size(); ++o)
    for (size_t i = 0; i < mask[o].size(); ++i) mask[o][i] = mask[o][i] && v.mask()[o][i];
  return Subobject(u.ambient(), std::move(mask));
}

Subobject sub_join(const Subobject& u, const Subobject& v) {
  require_same_ambient(u, v, "join");
  auto mask = u.mask();
  for (size_t o = 0; o < mask.size(); ++o)
    for (size_t i = 0; i < mask[o].size(); ++i) mask[o][i] = mask[o][i] || v.mask()[o][i];
  return Subobject(u.ambient(), std::move(mask));
}

Subobject sub_implies(const Subobject& u, const Subobject& v) {
  require_same_ambient(u, v, "implies");
  const Presheaf& x = u.ambient();
  const FinCategory& c = x.site();
  std::vector<std::vector<char>> mask(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    mask[o].assign(x.size(o), 0);
    for (int i = 0; i < x.size(o); ++i) {
      bool ok = true;
      for (int f : c.into(o)) {
        int moved = x.apply(f, i);
        if (u.contains(c.src(f), moved) && !v.contains(c.src(f), moved)) ok = false;
      }
      mask[o][i] = ok;
    }
  }
  return Subobject(x, std::move(mask));
}

Subobject sub_not(const Subobject& u) { return sub_implies(u, Subobject::empty_in(u.ambient())); }

bool is_complemented(const Subobject& u, Subobject* complement_out) {
  Subobject nu = sub_not(u);
  if (complement_out) *complement_out = nu;
  return sub_join(u, nu).is_full();
}

std::vector<Subobject> subobjects_of(const Presheaf& x, const EnumLimits& lim) {
  const FinCategory& c = x.site();
  int nobj = c.num_objects();
  // downward closure of a single element
  auto principal = [&](int o, int i) {
    std::vector<std::vector<char>> m(nobj);
    for (int k = 0; k < nobj; ++k) m[k].assign(x.size(k), 0);
    std::vector<std::pair<int, int>> stack{{o, i}};
    m[o][i] = 1;
    while (!stack.empty()) {
      auto [oo, ii] = stack.back();
      stack.pop_back();
      for (int f : c.into(oo)) {
        int s = c.src(f), moved = x.apply(f, ii);
        if (!m[s][moved]) {
          m[s][moved] = 1;
          stack.push_back({s, moved});
        }
      }
    }
    return m;
  };

  std::set<std::vector<std::vector<char>>> all;
  std::vector<std::vector<std::vector<char>>> frontier;
  std::vector<std::vector<char>> empty(nobj);
  for (int k = 0; k < nobj; ++k) empty[k].assign(x.size(k), 0);
  all.insert(empty);
  frontier.push_back(empty);
  while (!frontier.empty()) {
    auto m = frontier.back();
    frontier.pop_back();
    for (int o = 0; o < nobj; ++o)
      for (int i = 0; i < x.size(o); ++i) {
        if (m[o][i]) continue;
        auto bigger = m;
        auto p = principal(o, i);
        for (int k = 0; k < nobj; ++k)
          for (int t = 0; t < x.size(k); ++t) bigger[k][t] = bigger[k][t] || p[k][t];
        if ((long long)all.size() > lim.max_nodes)
          throw BoundError("subobjects_of: more than " + std::to_string(lim.max_nodes) + " subobjects");
        if (all.insert(bigger).second) frontier.push_back(bigger);
      }
  }
  std::vector<Subobject> out;
  for (const auto& m : all) out.emplace_back(x, m);
  std::sort(out.begin(), out.end(), [](const Subobject& a, const Subobject& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    return a.mask() < b.mask();
  });
  return out;
}

Subobject image(const PresheafMap& f) {
  const Presheaf& y = f.cod();
  std::vector<std::vector<char>> mask(y.site().num_objects());
  for (int o = 0; o < y.site().num_objects(); ++o) {
    mask[o].assign(y.size(o), 0);
    for (int i = 0; i < f.dom().size(o); ++i) mask[o][f.at(o, i)] = 1;
  }
  return Subobject(y, std::move(mask));
}

Subobject preimage(const Subobject& v, const PresheafMap& f) {
  if (!(v.ambient() == f.cod())) throw ValidationError("preimage: subobject not of the codomain");
  const Presheaf& x = f.dom();
  std::vector<std::vector<char>> mask(x.site().num_objects());
  for (int o = 0; o < x.site().num_objects(); ++o) {
    mask[o].assign(x.size(o), 0);
    for (int i = 0; i < x.size(o); ++i) mask[o][i] = v.contains(o, f.at(o, i));
  }
  return Subobject(x, std::move(mask));
}

PresheafMap classify(const Subobject& u, const OmegaData& od) {
  const Presheaf& x = u.ambient();
  const FinCategory& c = x.site();
  std::vector<std::vector<int>> comp(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    comp[o].resize(x.size(o));
    for (int i = 0; i < x.size(o); ++i) {
      Sieve s;
      for (int f : c.into(o))
        if (u.contains(c.src(f), x.apply(f, i))) s.push_back(f);
      comp[o][i] = od.sieve_index(o, s);
    }
  }
  return PresheafMap(x, od.omega, std::move(comp));
}

Subobject pullback_truth(const PresheafMap& chi, const OmegaData& od) {
  const Presheaf& x = chi.dom();
  const FinCategory& c = x.site();
  std::vector<std::vector<char>> mask(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    int top = od.truth.at(o, 0);
    mask[o].assign(x.size(o), 0);
    for (int i = 0; i < x.size(o); ++i) mask[o][i] = (chi.at(o, i) == top);
  }
  return Subobject(x, std::move(mask));
}

LTTopology make_topology(OmegaData od, PresheafMap j) {
  const FinCategory& c = od.omega.site();
  if (!(j.dom() == od.omega) || !(j.cod() == od.omega))
    throw ValidationError("topology operator must be an endomap of Omega");
  if (!(compose(j, od.truth) == od.truth)) throw ValidationError("topology law j . top = top fails");
  if (!(compose(j, j) == j)) throw ValidationError("topology law j . j = j fails");
  PresheafMap jxj = od.square.mediate(
      {od.square.apex, {compose(j, od.square.projections[0]), compose(j, od.square.projections[1])}});
  if (!(compose(j, od.meet) == compose(od.meet, jxj)))
    throw ValidationError("topology law j . meet = meet . (j x j) fails");
  LTTopology top{std::move(od), std::move(j), {}};
  top.covering.resize(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    int tix = top.omega.truth.at(o, 0);
    top.covering[o].assign(top.omega.omega.size(o), 0);
    for (int i = 0; i < top.omega.omega.size(o); ++i) top.covering[o][i] = (top.j.at(o, i) == tix);
  }
  return top;
}

LTTopology negneg_topology(OmegaData od) {
  PresheafMap j = compose(od.negation, od.negation);
  return make_topology(std::move(od), std::move(j));
}

LTTopology negneg_topology(std::shared_ptr<const FinCategory> site) {
  return negneg_topology(compute_omega(std::move(site)));
}

std::vector<int> LTTopology::covering_sieves(int obj) const {
  std::vector<int> out;
  for (int i = 0; i < (int)covering[obj].size(); ++i)
    if (covering[obj][i]) out.push_back(i);
  return out;
}

Subobject closure(const Subobject& u, const LTTopology& top) {
  return pullback_truth(compose(top.j, classify(u, top.omega)), top.omega);
}

bool is_dense(const Subobject& u, const LTTopology& top) { return closure(u, top).is_full(); }

// ---------------------------------------------------------------------------
// matching families

std::vector<MatchingFamily> matching_families(const Presheaf& x, int obj, const Sieve& sieve,
                                              const EnumLimits& lim) {
  const FinCategory& c = x.site();
  int n = (int)sieve.size();
  std::vector<int> pos(c.num_morphisms(), -1);
  for (int k = 0; k < n; ++k) pos[sieve[k]] = k;

  std::vector<int> values(n, -1);
  std::vector<MatchingFamily> out;
  long long nodes = 0;

  std::function<void(int)> rec = [&](int from) {
    int k = from;
    while (k < n && values[k] >= 0) ++k;
    if (k == n) {
      out.push_back({sieve, values});
      return;
    }
    int f = sieve[k];
    int d = c.src(f);
    for (int v = 0; v < x.size(d); ++v) {
      if (++nodes > lim.max_nodes) throw BoundError("matching_families: search too large");
      std::vector<std::pair<int, int>> queue{{k, v}};
      std::vector<int> touched;
      bool ok = true;
      while (!queue.empty() && ok) {
        auto [slot, val] = queue.back();
        queue.pop_back();
        if (values[slot] >= 0) {
          if (values[slot] != val) ok = false;
          continue;
        }
        values[slot] = val;
        touched.push_back(slot);
        int ff = sieve[slot];
        for (int g : c.into(c.src(ff))) {
          int fg = c.compose(ff, g);
          if (pos[fg] < 0) {
            ok = false;  // not a sieve
            break;
          }
          queue.push_back({pos[fg], x.apply(g, val)});
        }
      }
      if (ok) rec(k + 1);
      for (int slot : touched) values[slot] = -1;
    }
  };
  rec(0);
  return out;
}

std::vector<int> amalgamations(const Presheaf& x, int obj, const MatchingFamily& fam) {
  const FinCategory& c = x.site();
  std::vector<int> out;
  for (int i = 0; i < x.size(obj); ++i) {
    bool ok = true;
    for (size_t k = 0; k < fam.sieve.size() && ok; ++k)
      if (x.apply(fam.sieve[k], i) != fam.values[k]) ok = false;
    if (ok) out.push_back(i);
  }
  return out;
}

SheafStatus sheaf_status(const Presheaf& x, const LTTopology& top, const EnumLimits& lim) {
  SheafStatus st;
  const FinCategory& c = x.site();

  DiagonalResult dr = diagonal(x);
  Subobject diag = image(dr.diag);
  Subobject cl = closure(diag, top);
  st.separated = (cl == diag);
  if (!st.separated) {
    // first pair in the closure but not in the diagonal
    for (int o = 0; o < c.num_objects() && st.witness.empty(); ++o)
      for (int i = 0; i < dr.square.apex.size(o); ++i)
        if (cl.contains(o, i) && !diag.contains(o, i)) {
          st.witness = "diagonal not closed: " + dr.square.apex.elem_name(o, i) + " at " +
                       c.object_name(o);
          break;
        }
  }

  st.sheaf = st.separated;
  for (int o = 0; o < c.num_objects() && st.sheaf; ++o) {
    for (int six : top.covering_sieves(o)) {
      const Sieve& s = top.omega.sieves[o][six];
      for (const MatchingFamily& fam : matching_families(x, o, s, lim)) {
        auto am = amalgamations(x, o, fam);
        if (am.size() != 1) {
          st.sheaf = false;
          st.witness = "matching family on covering sieve " + top.omega.omega.elem_name(o, six) +
                       " at " + c.object_name(o) + " has " + std::to_string(am.size()) +
                       " amalgamations";
          break;
        }
      }
      if (!st.sheaf) break;
    }
  }
  return st;
}

bool dense_extension_check(const Presheaf& x, const LTTopology& top,
                           const std::vector<Presheaf>& test_objects, const EnumLimits& lim,
                           std::string* witness) {
  for (const Presheaf& y : test_objects) {
    for (const Subobject& u : subobjects_of(y, lim)) {
      if (!is_dense(u, top)) continue;
      PresheafMap inc = u.inclusion();
      auto from_y = hom_enumerate(y, x, lim);
      auto from_u = hom_enumerate(u.domain(), x, lim);
      std::set<std::string> restricted;
      for (const auto& h : from_y) restricted.insert(compose(h, inc).serialize());
      if (restricted.size() != from_y.size() || restricted.size() != from_u.size()) {
        if (witness)
          *witness = "dense mono " + u.describe() + " in " + y.serialize() + ": restriction " +
                     std::to_string(from_y.size()) + " -> " + std::to_string(from_u.size()) +
                     " maps is not a bijection";
        return false;
      }
    }
  }
  return true;
}

OmegaJ omega_j_of(const LTTopology& top) {
  const Presheaf& om = top.omega.omega;
  const FinCategory& c = om.site();
  std::vector<std::vector<std::string>> elems(c.num_objects());
  std::vector<std::vector<int>> fwd(c.num_objects());  // omega_j idx -> omega idx
  std::vector<std::vector<int>> back(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    back[o].assign(om.size(o), -1);
    for (int i = 0; i < om.size(o); ++i)
      if (top.j.at(o, i) == i) {
        back[o][i] = (int)elems[o].size();
        fwd[o].push_back(i);
        elems[o].push_back(om.elem_name(o, i));
      }
  }
  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int f = 0; f < c.num_morphisms(); ++f) {
    int t = c.tgt(f), s = c.src(f);
    for (int k = 0; k < (int)fwd[t].size(); ++k) {
      int moved = om.apply(f, fwd[t][k]);
      if (back[s][moved] < 0)
        throw ValidationError("Omega_j is not closed under the Omega action");
      action[f].push_back(back[s][moved]);
    }
  }
  Presheaf oj(om.site_ptr(), std::move(elems), std::move(action));
  std::vector<std::vector<int>> inc(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) inc[o] = fwd[o];
  PresheafMap include(oj, om, std::move(inc));
  return OmegaJ{std::move(oj), std::move(include), std::move(back)};
}

Sheafification sheafify(const Presheaf& x, const LTTopology& top, const EnumLimits& lim) {
  const FinCategory& c = x.site();
  auto site = x.site_ptr();

  // stage 1: separated reflection, quotient by the closure of the diagonal
  DiagonalResult dr = diagonal(x);
  Subobject rel = closure(image(dr.diag), top);
  std::vector<std::vector<int>> cls(c.num_objects());
  std::vector<std::vector<int>> reps(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    UnionFind uf(x.size(o));
    for (int p = 0; p < dr.square.apex.size(o); ++p)
      if (rel.contains(o, p)) uf.unite(dr.square.tuples[o][p][0], dr.square.tuples[o][p][1]);
    cls[o].assign(x.size(o), -1);
    for (int i = 0; i < x.size(o); ++i) {
      int r = uf.find(i);
      if (cls[o][r] < 0) {
        cls[o][r] = (int)reps[o].size();
        reps[o].push_back(r);
      }
      cls[o][i] = cls[o][r];
    }
  }
  std::vector<std::vector<std::string>> selems(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o)
    for (int r : reps[o]) selems[o].push_back(x.elem_name(o, r));
  std::vector<std::vector<int>> saction(c.num_morphisms());
  for (int f = 0; f < c.num_morphisms(); ++f) {
    int t = c.tgt(f), s = c.src(f);
    for (int k = 0; k < (int)reps[t].size(); ++k) saction[f].push_back(cls[s][x.apply(f, reps[t][k])]);
  }
  Presheaf sep(site, std::move(selems), std::move(saction));
  PresheafMap quot(x, sep, cls);

  // stage 2: singleton embedding of the separated quotient into Omega_j^S
  OmegaJ oj = omega_j_of(top);
  DiagonalResult sdr = diagonal(sep);
  Subobject sdiag_cl = closure(image(sdr.diag), top);
  PresheafMap chi = classify(sdiag_cl, top.omega);
  // corestrict chi to Omega_j (its values are j-closed sieves)
  std::vector<std::vector<int>> chij(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    chij[o].resize(sdr.square.apex.size(o));
    for (int i = 0; i < sdr.square.apex.size(o); ++i) {
      int v = oj.back[o][chi.at(o, i)];
      if (v < 0) throw ValidationError("sheafify: classifying map of a closed subobject left Omega_j");
      chij[o][i] = v;
    }
  }
  PresheafMap chi_j(sdr.square.apex, oj.omega_j, std::move(chij));
  ExponentialResult e = exponential(sep, oj.omega_j, lim);
  PresheafMap singleton = curry(e, sdr.square, chi_j);

  Subobject img = image(singleton);
  Subobject closed = closure(img, top);
  Presheaf sheaf = closed.domain();

  // unit: x -> sep -> sheaf (corestriction of the singleton map)
  std::vector<std::vector<int>> ucomp(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    ucomp[o].resize(x.size(o));
    for (int i = 0; i < x.size(o); ++i) {
      int in_exp = singleton.at(o, quot.at(o, i));
      int idx = sheaf.elem_index(o, e.exp.elem_name(o, in_exp));
      if (idx < 0) throw ValidationError("sheafify: unit misses the closed image");
      ucomp[o][i] = idx;
    }
  }
  PresheafMap unit(x, sheaf, std::move(ucomp));
  return Sheafification{std::move(sheaf), std::move(unit)};
}

}  // namespace toposlab
