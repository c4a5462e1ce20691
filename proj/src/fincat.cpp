#include "toposlab/fincat.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace toposlab {

FinCategory FinCategory::build(const CategorySpec& spec) {
  FinCategory c;
  c.objects_ = spec.objects;
  std::sort(c.objects_.begin(), c.objects_.end());
  if (std::adjacent_find(c.objects_.begin(), c.objects_.end()) != c.objects_.end())
    throw ValidationError("duplicate object name");
  if (c.objects_.empty()) throw ValidationError("a category needs at least one object");
  for (int i = 0; i < (int)c.objects_.size(); ++i) c.obj_index_[c.objects_[i]] = i;

  c.morphisms_ = spec.morphisms;
  std::sort(c.morphisms_.begin(), c.morphisms_.end(),
            [](const MorphismSpec& a, const MorphismSpec& b) { return a.name < b.name; });
  for (int i = 0; i < (int)c.morphisms_.size(); ++i) {
    const auto& m = c.morphisms_[i];
    if (c.mor_index_.count(m.name)) throw ValidationError("duplicate morphism name: " + m.name);
    c.mor_index_[m.name] = i;
    if (!c.obj_index_.count(m.src)) throw ValidationError("morphism " + m.name + " has unknown source " + m.src);
    if (!c.obj_index_.count(m.tgt)) throw ValidationError("morphism " + m.name + " has unknown target " + m.tgt);
    c.src_.push_back(c.obj_index_.at(m.src));
    c.tgt_.push_back(c.obj_index_.at(m.tgt));
  }

  c.identity_.assign(c.objects_.size(), -1);
  for (const auto& [obj, mor] : spec.identities) {
    if (!c.obj_index_.count(obj)) throw ValidationError("identity declared for unknown object " + obj);
    if (!c.mor_index_.count(mor)) throw ValidationError("unknown identity morphism " + mor);
    int o = c.obj_index_.at(obj), m = c.mor_index_.at(mor);
    if (c.src_[m] != o || c.tgt_[m] != o)
      throw ValidationError("identity of " + obj + " must be an endomorphism of it: " + mor);
    c.identity_[o] = m;
  }
  for (int o = 0; o < c.num_objects(); ++o)
    if (c.identity_[o] < 0) throw ValidationError("missing identity for object " + c.objects_[o]);

  int n = c.num_morphisms();
  c.compose_.assign(n, std::vector<int>(n, -1));
  for (const auto& [gname, fname, gfname] : spec.compose) {
    if (!c.mor_index_.count(gname) || !c.mor_index_.count(fname) || !c.mor_index_.count(gfname))
      throw ValidationError("compose entry names unknown morphism: [" + gname + "," + fname + "," + gfname + "]");
    int g = c.mor_index_.at(gname), f = c.mor_index_.at(fname), gf = c.mor_index_.at(gfname);
    if (c.tgt_[f] != c.src_[g])
      throw ValidationError("compose(" + gname + "," + fname + ") declared but " + gname +
                            " is not composable with " + fname);
    if (c.compose_[g][f] >= 0 && c.compose_[g][f] != gf)
      throw ValidationError("conflicting compose entries for (" + gname + "," + fname + ")");
    if (c.src_[gf] != c.src_[f] || c.tgt_[gf] != c.tgt_[g])
      throw ValidationError("composite " + gfname + " of (" + gname + "," + fname + ") has wrong endpoints");
    c.compose_[g][f] = gf;
  }

  // identity composites may be omitted from the spec
  for (int m = 0; m < n; ++m) {
    int is = c.identity_[c.src_[m]], it = c.identity_[c.tgt_[m]];
    if (c.compose_[m][is] < 0) c.compose_[m][is] = m;
    if (c.compose_[it][m] < 0) c.compose_[it][m] = m;
  }

  c.into_.assign(c.num_objects(), {});
  c.out_.assign(c.num_objects(), {});
  for (int m = 0; m < n; ++m) {
    c.into_[c.tgt_[m]].push_back(m);
    c.out_[c.src_[m]].push_back(m);
  }

  c.validate();
  return c;
}

std::shared_ptr<const FinCategory> FinCategory::build_shared(const CategorySpec& spec) {
  return std::make_shared<const FinCategory>(build(spec));
}

void FinCategory::validate() const {
  int n = num_morphisms();
  for (int g = 0; g < n; ++g)
    for (int f = 0; f < n; ++f) {
      if (src_[g] == tgt_[f]) {
        if (compose_[g][f] < 0)
          throw ValidationError("composition table missing entry for (" + morphisms_[g].name + "," +
                                morphisms_[f].name + ")");
      } else if (compose_[g][f] >= 0) {
        throw ValidationError("composition declared on non-composable pair (" + morphisms_[g].name + "," +
                              morphisms_[f].name + ")");
      }
    }
  for (int m = 0; m < n; ++m) {
    if (compose_[m][identity_[src_[m]]] != m)
      throw ValidationError("right identity law fails for " + morphisms_[m].name);
    if (compose_[identity_[tgt_[m]]][m] != m)
      throw ValidationError("left identity law fails for " + morphisms_[m].name);
  }
  // brute-force recheck of all composable triples
  for (int h = 0; h < n; ++h)
    for (int g = 0; g < n; ++g) {
      if (src_[h] != tgt_[g]) continue;
      int hg = compose_[h][g];
      for (int f = 0; f < n; ++f) {
        if (src_[g] != tgt_[f]) continue;
        int gf = compose_[g][f];
        if (compose_[h][gf] != compose_[hg][f])
          throw ValidationError("associativity fails on (" + morphisms_[h].name + "," + morphisms_[g].name +
                                "," + morphisms_[f].name + ")");
      }
    }
}

int FinCategory::object_index(const std::string& name) const {
  auto it = obj_index_.find(name);
  if (it == obj_index_.end()) throw ValidationError("unknown object " + name);
  return it->second;
}

int FinCategory::morphism_index(const std::string& name) const {
  auto it = mor_index_.find(name);
  if (it == mor_index_.end()) throw ValidationError("unknown morphism " + name);
  return it->second;
}

int FinCategory::compose(int g, int f) const {
  int r = compose_[g][f];
  if (r < 0)
    throw ValidationError("compose(" + morphisms_[g].name + "," + morphisms_[f].name + ") on non-composable pair");
  return r;
}

bool FinCategory::connected() const {
  return connected_components(*this).size() <= 1;
}

bool FinCategory::operator==(const FinCategory& other) const {
  return objects_ == other.objects_ && src_ == other.src_ && tgt_ == other.tgt_ &&
         identity_ == other.identity_ && compose_ == other.compose_ &&
         [&] {
           for (int m = 0; m < num_morphisms(); ++m)
             if (morphisms_[m].name != other.morphisms_[m].name) return false;
           return true;
         }();
}

nlohmann::json FinCategory::to_json() const {
  nlohmann::json j;
  j["objects"] = objects_;
  auto& ms = j["morphisms"] = nlohmann::json::array();
  for (const auto& m : morphisms_)
    ms.push_back({{"name", m.name}, {"src", m.src}, {"tgt", m.tgt}});
  auto& ids = j["identities"] = nlohmann::json::object();
  for (int o = 0; o < num_objects(); ++o) ids[objects_[o]] = morphisms_[identity_[o]].name;
  auto& comp = j["compose"] = nlohmann::json::array();
  for (int g = 0; g < num_morphisms(); ++g)
    for (int f = 0; f < num_morphisms(); ++f)
      if (compose_[g][f] >= 0 && !is_identity(g) && !is_identity(f))
        comp.push_back({morphisms_[g].name, morphisms_[f].name, morphisms_[compose_[g][f]].name});
  return j;
}

FinCategory FinCategory::from_json(const nlohmann::json& j) {
  CategorySpec spec;
  for (const auto& o : j.at("objects")) spec.objects.push_back(o.get<std::string>());
  for (const auto& m : j.at("morphisms"))
    spec.morphisms.push_back({m.at("name").get<std::string>(), m.at("src").get<std::string>(),
                              m.at("tgt").get<std::string>()});
  for (auto it = j.at("identities").begin(); it != j.at("identities").end(); ++it)
    spec.identities[it.key()] = it.value().get<std::string>();
  if (j.contains("compose"))
    for (const auto& e : j.at("compose"))
      spec.compose.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>(), e.at(2).get<std::string>()});
  return build(spec);
}

namespace {

CategorySpec terminal_spec() {
  CategorySpec s;
  s.objects = {"*"};
  s.morphisms = {{"id", "*", "*"}};
  s.identities = {{"*", "id"}};
  return s;
}

CategorySpec parallel_pair_spec() {
  CategorySpec s;
  s.objects = {"V", "E"};
  s.morphisms = {{"idV", "V", "V"}, {"idE", "E", "E"}, {"s", "V", "E"}, {"t", "V", "E"}};
  s.identities = {{"V", "idV"}, {"E", "idE"}};
  return s;
}

CategorySpec reflexive_graph_spec() {
  // free category on d0, d1 : V -> E and s0 : E -> V modulo s0.d0 = s0.d1 = idV;
  // the closure adds the idempotents d0.s0, d1.s0 : E -> E.
  CategorySpec s;
  s.objects = {"V", "E"};
  s.morphisms = {{"idV", "V", "V"}, {"idE", "E", "E"}, {"d0", "V", "E"}, {"d1", "V", "E"},
                 {"s0", "E", "V"},  {"d0s0", "E", "E"}, {"d1s0", "E", "E"}};
  s.identities = {{"V", "idV"}, {"E", "idE"}};
  auto add = [&](const std::string& g, const std::string& f, const std::string& gf) {
    s.compose.push_back({g, f, gf});
  };
  add("s0", "d0", "idV");
  add("s0", "d1", "idV");
  add("d0", "s0", "d0s0");
  add("d1", "s0", "d1s0");
  add("s0", "d0s0", "s0");
  add("s0", "d1s0", "s0");
  add("d0s0", "d0", "d0");
  add("d0s0", "d1", "d0");
  add("d1s0", "d0", "d1");
  add("d1s0", "d1", "d1");
  add("d0s0", "d0s0", "d0s0");
  add("d0s0", "d1s0", "d0s0");
  add("d1s0", "d0s0", "d1s0");
  add("d1s0", "d1s0", "d1s0");
  return s;
}

}  // namespace

std::shared_ptr<const FinCategory> monoid_site(const std::vector<std::string>& elements,
                                               const std::vector<std::vector<int>>& table,
                                               int unit) {
  int n = static_cast<int>(elements.size());
  if (n == 0 || unit < 0 || unit >= n) throw ValidationError("monoid table needs a unit element");
  for (int i = 0; i < n; ++i) {
    if ((int)table[i].size() != n) throw ValidationError("monoid table is not square");
    if (table[unit][i] != i || table[i][unit] != i)
      throw ValidationError("monoid unit law fails at " + elements[i]);
  }
  CategorySpec s;
  s.objects = {"*"};
  for (int i = 0; i < n; ++i) s.morphisms.push_back({elements[i], "*", "*"});
  s.identities = {{"*", elements[unit]}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int ij = table[i][j];
      if (ij < 0 || ij >= n) throw ValidationError("monoid table entry out of range");
      s.compose.push_back({elements[i], elements[j], elements[ij]});
    }
  // associativity is rechecked by FinCategory::build
  return FinCategory::build_shared(s);
}

std::shared_ptr<const FinCategory> delta_truncated(int n) {
  if (n < 0 || n > 2) throw ValidationError("delta_truncated supports n in 0..2");
  // objects [0]..[n]; morphisms are all order-preserving maps, named by
  // their image tuples, e.g. a12_02 : [1] -> [2] sends 0,1 to 0,2.
  CategorySpec s;
  struct Map {
    int src, tgt;
    std::vector<int> img;
    std::string name;
  };
  std::vector<Map> maps;
  auto name_of = [](int src, int tgt, const std::vector<int>& img) {
    std::string nm = "a" + std::to_string(src) + std::to_string(tgt) + "_";
    for (int v : img) nm += std::to_string(v);
    return nm;
  };
  for (int a = 0; a <= n; ++a) s.objects.push_back("[" + std::to_string(a) + "]");
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      std::vector<int> img(a + 1, 0);
      while (true) {
        bool mono_ok = true;
        for (int i = 0; i + 1 <= a; ++i)
          if (img[i] > img[i + 1]) mono_ok = false;
        if (mono_ok) {
          Map m{a, b, img, name_of(a, b, img)};
          maps.push_back(m);
          s.morphisms.push_back({m.name, "[" + std::to_string(a) + "]", "[" + std::to_string(b) + "]"});
        }
        int k = a;
        while (k >= 0 && img[k] == b) img[k--] = 0;
        if (k < 0) break;
        ++img[k];
      }
    }
  for (int a = 0; a <= n; ++a) {
    std::vector<int> id(a + 1);
    std::iota(id.begin(), id.end(), 0);
    s.identities["[" + std::to_string(a) + "]"] = name_of(a, a, id);
  }
  for (const auto& g : maps)
    for (const auto& f : maps) {
      if (f.tgt != g.src) continue;
      std::vector<int> img(f.src + 1);
      for (int i = 0; i <= f.src; ++i) img[i] = g.img[f.img[i]];
      s.compose.push_back({g.name, f.name, name_of(f.src, g.tgt, img)});
    }
  return FinCategory::build_shared(s);
}

std::shared_ptr<const FinCategory> standard_site(const std::string& name) {
  if (name == "terminal") return FinCategory::build_shared(terminal_spec());
  if (name == "parallel_pair") return FinCategory::build_shared(parallel_pair_spec());
  if (name == "reflexive_graph") return FinCategory::build_shared(reflexive_graph_spec());
  if (name == "delta0") return delta_truncated(0);
  if (name == "delta1") return delta_truncated(1);
  if (name == "delta2") return delta_truncated(2);
  if (name == "zmod2") return monoid_site({"1", "g"}, {{0, 1}, {1, 0}}, 0);
  if (name == "zmod3") return monoid_site({"1", "g", "gg"}, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}, 0);
  if (name == "idem")  // {1, e} with e.e = e
    return monoid_site({"1", "e"}, {{0, 1}, {1, 1}}, 0);
  if (name == "rzero")  // {1, e, f} with e, f right zeros: x.e = e, x.f = f
    return monoid_site({"1", "e", "f"}, {{0, 1, 2}, {1, 1, 2}, {2, 1, 2}}, 0);
  throw ValidationError("unknown site name: " + name);
}

FinFunctor::FinFunctor(std::shared_ptr<const FinCategory> d, std::shared_ptr<const FinCategory> c,
                       std::vector<int> ob_map, std::vector<int> mor_map)
    : dom(std::move(d)), cod(std::move(c)), ob(std::move(ob_map)), mor(std::move(mor_map)) {
  if ((int)ob.size() != dom->num_objects() || (int)mor.size() != dom->num_morphisms())
    throw ValidationError("functor tables have wrong size");
  for (int m = 0; m < dom->num_morphisms(); ++m) {
    if (cod->src(mor[m]) != ob[dom->src(m)] || cod->tgt(mor[m]) != ob[dom->tgt(m)])
      throw ValidationError("functor breaks endpoints at " + dom->morphism_name(m));
  }
  for (int o = 0; o < dom->num_objects(); ++o)
    if (mor[dom->identity(o)] != cod->identity(ob[o]))
      throw ValidationError("functor breaks identity at " + dom->object_name(o));
  for (int g = 0; g < dom->num_morphisms(); ++g)
    for (int f = 0; f < dom->num_morphisms(); ++f)
      if (dom->composable(g, f) && mor[dom->compose(g, f)] != cod->compose(mor[g], mor[f]))
        throw ValidationError("functor breaks composition at (" + dom->morphism_name(g) + "," +
                              dom->morphism_name(f) + ")");
}

std::vector<std::vector<int>> connected_components(const FinCategory& c) {
  UnionFind uf(c.num_objects());
  for (int m = 0; m < c.num_morphisms(); ++m) uf.unite(c.src(m), c.tgt(m));
  std::map<int, std::vector<int>> blocks;
  for (int o = 0; o < c.num_objects(); ++o) blocks[uf.find(o)].push_back(o);
  std::vector<std::vector<int>> out;
  for (auto& [rep, block] : blocks) out.push_back(std::move(block));
  return out;
}

namespace {

bool iso_extend(const FinCategory& a, const FinCategory& b, std::vector<int>& obm,
                std::vector<int>& morm, int next) {
  int n = a.num_morphisms();
  if (next == n) {
    // everything assigned; composition already checked incrementally
    return true;
  }
  for (int cand = 0; cand < n; ++cand) {
    if (b.src(cand) != obm[a.src(next)] || b.tgt(cand) != obm[a.tgt(next)]) continue;
    bool used = false;
    for (int k = 0; k < next; ++k)
      if (morm[k] == cand) used = true;
    if (used) continue;
    if (a.is_identity(next) != b.is_identity(cand)) continue;
    morm[next] = cand;
    bool ok = true;
    for (int k = 0; k <= next && ok; ++k) {
      if (a.composable(next, k)) {
        int ab = a.compose(next, k);
        if (ab <= next && b.compose(morm[next], morm[k]) != morm[ab]) ok = false;
        if (ab > next && !b.composable(morm[next], morm[k])) ok = false;
      }
      if (ok && a.composable(k, next)) {
        int ab = a.compose(k, next);
        if (ab <= next && b.compose(morm[k], morm[next]) != morm[ab]) ok = false;
      }
    }
    if (ok && iso_extend(a, b, obm, morm, next + 1)) return true;
    morm[next] = -1;
  }
  return false;
}

}  // namespace

bool categories_isomorphic(const FinCategory& a, const FinCategory& b) {
  if (a == b) return true;
  if (a.num_objects() != b.num_objects() || a.num_morphisms() != b.num_morphisms()) return false;
  if (a.num_objects() > 8) return false;  // identity-of-data only above this size
  // try all object bijections compatible with endo/hom counts
  std::vector<int> perm(a.num_objects());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool degree_ok = true;
    for (int o = 0; o < a.num_objects() && degree_ok; ++o)
      if (a.into(o).size() != b.into(perm[o]).size() || a.out_of(o).size() != b.out_of(perm[o]).size())
        degree_ok = false;
    if (!degree_ok) continue;
    std::vector<int> morm(a.num_morphisms(), -1);
    std::vector<int> obm = perm;
    if (iso_extend(a, b, obm, morm, 0)) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace toposlab
