#include "toposlab/presheaf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace toposlab {

namespace {

bool same_site(const Presheaf& a, const Presheaf& b) {
  return a.site_ptr() == b.site_ptr() || a.site() == b.site();
}

void require_same_site(const Presheaf& a, const Presheaf& b, const char* what) {
  if (!same_site(a, b)) throw ValidationError(std::string(what) + ": presheaves live on different sites");
}

}  // namespace

Presheaf::Presheaf(std::shared_ptr<const FinCategory> site, std::vector<std::vector<std::string>> elems,
                   std::vector<std::vector<int>> action)
    : site_(std::move(site)), elems_(std::move(elems)), action_(std::move(action)) {
  validate();
}

void Presheaf::validate() const {
  if (!site_) throw ValidationError("presheaf without a site");
  if ((int)elems_.size() != site_->num_objects()) throw ValidationError("carrier list has wrong length");
  if ((int)action_.size() != site_->num_morphisms()) throw ValidationError("action list has wrong length");
  for (int o = 0; o < site_->num_objects(); ++o) {
    std::set<std::string> seen(elems_[o].begin(), elems_[o].end());
    if (seen.size() != elems_[o].size())
      throw ValidationError("duplicate element name in carrier at " + site_->object_name(o));
  }
  for (int m = 0; m < site_->num_morphisms(); ++m) {
    int nt = size(site_->tgt(m)), ns = size(site_->src(m));
    if ((int)action_[m].size() != nt)
      throw ValidationError("action of " + site_->morphism_name(m) + " has wrong domain size");
    for (int v : action_[m])
      if (v < 0 || v >= ns)
        throw ValidationError("action of " + site_->morphism_name(m) + " is out of range");
  }
  for (int o = 0; o < site_->num_objects(); ++o) {
    int id = site_->identity(o);
    for (int i = 0; i < size(o); ++i)
      if (action_[id][i] != i)
        throw ValidationError("identity action at " + site_->object_name(o) + " moves element " +
                              elems_[o][i]);
  }
  for (int g = 0; g < site_->num_morphisms(); ++g)
    for (int f = 0; f < site_->num_morphisms(); ++f) {
      if (!site_->composable(g, f)) continue;
      int gf = site_->compose(g, f);
      for (int i = 0; i < size(site_->tgt(g)); ++i)
        if (action_[gf][i] != action_[f][action_[g][i]])
          throw ValidationError("functoriality fails on square (" + site_->morphism_name(g) + "," +
                                site_->morphism_name(f) + ") at element " +
                                elems_[site_->tgt(g)][i]);
    }
}

int Presheaf::total_size() const {
  int n = 0;
  for (const auto& e : elems_) n += (int)e.size();
  return n;
}

int Presheaf::max_fiber() const {
  int n = 0;
  for (const auto& e : elems_) n = std::max<int>(n, (int)e.size());
  return n;
}

int Presheaf::elem_index(int obj, const std::string& name) const {
  const auto& v = elems_[obj];
  for (int i = 0; i < (int)v.size(); ++i)
    if (v[i] == name) return i;
  return -1;
}

bool Presheaf::operator==(const Presheaf& other) const {
  if (site_ != other.site_ && !(*site_ == *other.site_)) return false;
  return elems_ == other.elems_ && action_ == other.action_;
}

std::string Presheaf::serialize() const {
  std::ostringstream out;
  for (int o = 0; o < site_->num_objects(); ++o) out << "|" << join(elems_[o], ",");
  for (int m = 0; m < site_->num_morphisms(); ++m) {
    out << "/";
    for (size_t i = 0; i < action_[m].size(); ++i) {
      if (i) out << ",";
      out << action_[m][i];
    }
  }
  return out.str();
}

nlohmann::json Presheaf::to_json() const {
  nlohmann::json j;
  auto& carrier = j["carrier"] = nlohmann::json::object();
  for (int o = 0; o < site_->num_objects(); ++o) carrier[site_->object_name(o)] = elems_[o];
  auto& action = j["action"] = nlohmann::json::object();
  for (int m = 0; m < site_->num_morphisms(); ++m) {
    if (site_->is_identity(m)) continue;
    auto& table = action[site_->morphism_name(m)] = nlohmann::json::object();
    int t = site_->tgt(m), s = site_->src(m);
    for (int i = 0; i < size(t); ++i) table[elems_[t][i]] = elems_[s][action_[m][i]];
  }
  return j;
}

Presheaf Presheaf::from_json(
    const nlohmann::json& j,
    const std::function<std::shared_ptr<const FinCategory>(const std::string&)>& resolve_site) {
  std::shared_ptr<const FinCategory> site;
  if (j.contains("site")) {
    if (j.at("site").is_string())
      site = resolve_site(j.at("site").get<std::string>());
    else
      site = std::make_shared<const FinCategory>(FinCategory::from_json(j.at("site")));
  } else {
    throw ValidationError("presheaf JSON needs a \"site\" field");
  }
  std::vector<std::vector<std::string>> elems(site->num_objects());
  const auto& carrier = j.at("carrier");
  for (int o = 0; o < site->num_objects(); ++o) {
    const std::string& oname = site->object_name(o);
    if (carrier.contains(oname))
      for (const auto& e : carrier.at(oname)) elems[o].push_back(e.get<std::string>());
  }
  std::vector<std::vector<int>> action(site->num_morphisms());
  for (int o = 0; o < site->num_objects(); ++o) {
    int id = site->identity(o);
    action[id].resize(elems[o].size());
    std::iota(action[id].begin(), action[id].end(), 0);
  }
  Presheaf lookup_helper;  // build index maps locally
  auto index_in = [&](int obj, const std::string& name) {
    const auto& v = elems[obj];
    for (int i = 0; i < (int)v.size(); ++i)
      if (v[i] == name) return i;
    throw ValidationError("unknown element " + name + " at " + site->object_name(obj));
  };
  const auto& act = j.contains("action") ? j.at("action") : nlohmann::json::object();
  for (int m = 0; m < site->num_morphisms(); ++m) {
    if (site->is_identity(m)) continue;
    const std::string& mname = site->morphism_name(m);
    int t = site->tgt(m), s = site->src(m);
    action[m].assign(elems[t].size(), -1);
    if (act.contains(mname)) {
      const auto& table = act.at(mname);
      for (auto it = table.begin(); it != table.end(); ++it)
        action[m][index_in(t, it.key())] = index_in(s, it.value().get<std::string>());
    }
    for (int i = 0; i < (int)elems[t].size(); ++i)
      if (action[m][i] < 0)
        throw ValidationError("action of " + mname + " missing entry for element " + elems[t][i]);
  }
  (void)lookup_helper;
  return Presheaf(site, std::move(elems), std::move(action));
}

Presheaf terminal_presheaf(std::shared_ptr<const FinCategory> site) {
  std::vector<std::vector<std::string>> elems(site->num_objects(), {"*"});
  std::vector<std::vector<int>> action(site->num_morphisms(), {0});
  return Presheaf(std::move(site), std::move(elems), std::move(action));
}

Presheaf initial_presheaf(std::shared_ptr<const FinCategory> site) {
  std::vector<std::vector<std::string>> elems(site->num_objects());
  std::vector<std::vector<int>> action(site->num_morphisms());
  return Presheaf(std::move(site), std::move(elems), std::move(action));
}

Presheaf constant_presheaf(std::shared_ptr<const FinCategory> site, std::vector<std::string> names) {
  std::vector<std::vector<std::string>> elems(site->num_objects(), names);
  std::vector<int> id(names.size());
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<int>> action(site->num_morphisms(), id);
  return Presheaf(std::move(site), std::move(elems), std::move(action));
}

Presheaf yoneda(std::shared_ptr<const FinCategory> site, int obj) {
  if (obj < 0 || obj >= site->num_objects()) throw ValidationError("yoneda: unknown object");
  int nobj = site->num_objects();
  std::vector<std::vector<std::string>> elems(nobj);
  std::vector<std::vector<int>> homs(nobj);  // morphism ids d -> obj, ascending
  for (int d = 0; d < nobj; ++d)
    for (int m : site->into(obj))
      if (site->src(m) == d) {
        homs[d].push_back(m);
        elems[d].push_back(site->morphism_name(m));
      }
  std::vector<std::vector<int>> action(site->num_morphisms());
  for (int f = 0; f < site->num_morphisms(); ++f) {
    int t = site->tgt(f), s = site->src(f);
    action[f].resize(homs[t].size());
    for (int i = 0; i < (int)homs[t].size(); ++i) {
      int composed = site->compose(homs[t][i], f);  // (h : t -> obj) . (f : s -> t)
      auto it = std::find(homs[s].begin(), homs[s].end(), composed);
      action[f][i] = (int)(it - homs[s].begin());
    }
  }
  return Presheaf(std::move(site), std::move(elems), std::move(action));
}

// ---------------------------------------------------------------------------

PresheafMap::PresheafMap(Presheaf dom, Presheaf cod, std::vector<std::vector<int>> component)
    : dom_(std::move(dom)), cod_(std::move(cod)), component_(std::move(component)) {
  require_same_site(dom_, cod_, "presheaf map");
  const FinCategory& c = dom_.site();
  if ((int)component_.size() != c.num_objects()) throw ValidationError("component list has wrong length");
  for (int o = 0; o < c.num_objects(); ++o) {
    if ((int)component_[o].size() != dom_.size(o))
      throw ValidationError("component at " + c.object_name(o) + " has wrong domain size");
    for (int v : component_[o])
      if (v < 0 || v >= cod_.size(o))
        throw ValidationError("component at " + c.object_name(o) + " is out of range");
  }
  for (int f = 0; f < c.num_morphisms(); ++f) {
    int t = c.tgt(f), s = c.src(f);
    for (int i = 0; i < dom_.size(t); ++i)
      if (component_[s][dom_.apply(f, i)] != cod_.apply(f, component_[t][i]))
        throw ValidationError("naturality fails at " + c.morphism_name(f) + " on element " +
                              dom_.elem_name(t, i));
  }
}

PresheafMap PresheafMap::identity(const Presheaf& x) {
  std::vector<std::vector<int>> comp(x.site().num_objects());
  for (int o = 0; o < x.site().num_objects(); ++o) {
    comp[o].resize(x.size(o));
    std::iota(comp[o].begin(), comp[o].end(), 0);
  }
  return PresheafMap(x, x, std::move(comp));
}

bool PresheafMap::monic() const {
  for (int o = 0; o < dom_.site().num_objects(); ++o) {
    std::vector<char> hit(cod_.size(o), 0);
    for (int v : component_[o]) {
      if (hit[v]) return false;
      hit[v] = 1;
    }
  }
  return true;
}

bool PresheafMap::epic() const {
  for (int o = 0; o < dom_.site().num_objects(); ++o) {
    std::vector<char> hit(cod_.size(o), 0);
    for (int v : component_[o]) hit[v] = 1;
    for (char h : hit)
      if (!h) return false;
  }
  return true;
}

bool PresheafMap::is_iso() const {
  for (int o = 0; o < dom_.site().num_objects(); ++o)
    if (dom_.size(o) != cod_.size(o)) return false;
  return monic() && epic();
}

PresheafMap PresheafMap::inverse() const {
  if (!is_iso()) throw ValidationError("inverse of a non-isomorphism");
  std::vector<std::vector<int>> comp(dom_.site().num_objects());
  for (int o = 0; o < dom_.site().num_objects(); ++o) {
    comp[o].resize(cod_.size(o));
    for (int i = 0; i < dom_.size(o); ++i) comp[o][component_[o][i]] = i;
  }
  return PresheafMap(cod_, dom_, std::move(comp));
}

bool PresheafMap::operator==(const PresheafMap& other) const {
  return dom_ == other.dom_ && cod_ == other.cod_ && component_ == other.component_;
}

std::string PresheafMap::serialize() const {
  std::ostringstream out;
  for (const auto& c : component_) {
    out << "|";
    for (size_t i = 0; i < c.size(); ++i) {
      if (i) out << ",";
      out << c[i];
    }
  }
  return out.str();
}

PresheafMap compose(const PresheafMap& g, const PresheafMap& f) {
  if (!(f.cod() == g.dom())) throw ValidationError("compose: codomain/domain mismatch");
  std::vector<std::vector<int>> comp(f.dom().site().num_objects());
  for (int o = 0; o < f.dom().site().num_objects(); ++o) {
    comp[o].resize(f.dom().size(o));
    for (int i = 0; i < f.dom().size(o); ++i) comp[o][i] = g.at(o, f.at(o, i));
  }
  return PresheafMap(f.dom(), g.cod(), std::move(comp));
}

PresheafMap terminal_map(const Presheaf& x) {
  std::vector<std::vector<int>> comp(x.site().num_objects());
  for (int o = 0; o < x.site().num_objects(); ++o) comp[o].assign(x.size(o), 0);
  return PresheafMap(x, terminal_presheaf(x.site_ptr()), std::move(comp));
}

PresheafMap yoneda_map(std::shared_ptr<const FinCategory> site, int mor) {
  const FinCategory& c = *site;
  Presheaf ys = yoneda(site, c.src(mor));
  Presheaf yt = yoneda(site, c.tgt(mor));
  std::vector<std::vector<int>> comp(c.num_objects());
  for (int d = 0; d < c.num_objects(); ++d) {
    comp[d].resize(ys.size(d));
    for (int i = 0; i < ys.size(d); ++i) {
      int h = c.morphism_index(ys.elem_name(d, i));
      int composed = c.compose(mor, h);
      comp[d][i] = yt.elem_index(d, c.morphism_name(composed));
    }
  }
  return PresheafMap(std::move(ys), std::move(yt), std::move(comp));
}

PresheafMap yoneda_element(const Presheaf& x, int obj, int elem) {
  Presheaf yc = yoneda(x.site_ptr(), obj);
  const FinCategory& c = x.site();
  std::vector<std::vector<int>> comp(c.num_objects());
  for (int d = 0; d < c.num_objects(); ++d) {
    comp[d].resize(yc.size(d));
    for (int i = 0; i < yc.size(d); ++i) {
      int f = c.morphism_index(yc.elem_name(d, i));  // f : d -> obj
      comp[d][i] = x.apply(f, elem);
    }
  }
  return PresheafMap(std::move(yc), x, std::move(comp));
}

// ---------------------------------------------------------------------------
// limits

LimitResult limit(const Diagram& d, std::shared_ptr<const FinCategory> site) {
  const FinCategory& c = *site;
  for (const auto& n : d.nodes)
    if (!(n.site_ptr() == site || n.site() == c)) throw ValidationError("limit: node on a different site");
  int nn = (int)d.nodes.size();

  std::vector<std::vector<std::string>> elems(c.num_objects());
  std::vector<std::vector<std::vector<int>>> tuples(c.num_objects());
  std::vector<std::map<std::vector<int>, int>> index_of(c.num_objects());

  for (int o = 0; o < c.num_objects(); ++o) {
    std::vector<int> tup(nn, 0);
    // row-major enumeration of all candidate tuples
    bool done = false;
    if (nn == 0) {
      elems[o].push_back("*");
      tuples[o].push_back({});
      index_of[o][{}] = 0;
      continue;
    }
    for (const auto& n : d.nodes)
      if (n.size(o) == 0) done = true;
    while (!done) {
      bool ok = true;
      for (const auto& e : d.edges)
        if (e.map.at(o, tup[e.src]) != tup[e.tgt]) ok = false;
      if (ok) {
        std::vector<std::string> parts;
        for (int k = 0; k < nn; ++k) parts.push_back(d.nodes[k].elem_name(o, tup[k]));
        index_of[o][tup] = (int)elems[o].size();
        elems[o].push_back("(" + join(parts, ";") + ")");
        tuples[o].push_back(tup);
      }
      int k = nn - 1;
      while (k >= 0 && tup[k] + 1 == d.nodes[k].size(o)) tup[k--] = 0;
      if (k < 0) break;
      ++tup[k];
    }
  }

  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int f = 0; f < c.num_morphisms(); ++f) {
    int t = c.tgt(f), s = c.src(f);
    action[f].resize(tuples[t].size());
    for (int i = 0; i < (int)tuples[t].size(); ++i) {
      std::vector<int> img(nn);
      for (int k = 0; k < nn; ++k) img[k] = d.nodes[k].apply(f, tuples[t][i][k]);
      auto it = index_of[s].find(img);
      if (it == index_of[s].end()) throw ValidationError("limit: restriction left the limit set");
      action[f][i] = it->second;
    }
  }

  LimitResult res;
  res.apex = Presheaf(site, std::move(elems), std::move(action));
  res.tuples = std::move(tuples);
  res.index_of = std::move(index_of);
  for (int k = 0; k < nn; ++k) {
    std::vector<std::vector<int>> comp(c.num_objects());
    for (int o = 0; o < c.num_objects(); ++o) {
      comp[o].resize(res.tuples[o].size());
      for (int i = 0; i < (int)res.tuples[o].size(); ++i) comp[o][i] = res.tuples[o][i][k];
    }
    res.projections.emplace_back(res.apex, d.nodes[k], std::move(comp));
  }
  return res;
}

PresheafMap LimitResult::mediate(const Cone& cone) const {
  const FinCategory& c = apex.site();
  std::vector<std::vector<int>> comp(c.num_objects());
  int nn = (int)projections.size();
  for (int o = 0; o < c.num_objects(); ++o) {
    comp[o].resize(cone.apex.size(o));
    for (int i = 0; i < cone.apex.size(o); ++i) {
      std::vector<int> tup(nn);
      for (int k = 0; k < nn; ++k) tup[k] = cone.legs[k].at(o, i);
      auto it = index_of[o].find(tup);
      if (it == index_of[o].end()) throw ValidationError("mediate: cone does not factor through the limit");
      comp[o][i] = it->second;
    }
  }
  return PresheafMap(cone.apex, apex, std::move(comp));
}

ColimitResult colimit(const Diagram& d, std::shared_ptr<const FinCategory> site) {
  const FinCategory& c = *site;
  int nn = (int)d.nodes.size();
  ColimitResult res;
  res.offsets.assign(c.num_objects(), std::vector<int>(nn + 1, 0));

  std::vector<std::vector<std::string>> elems(c.num_objects());
  std::vector<std::vector<int>> class_of(c.num_objects());
  std::vector<std::vector<int>> reps(c.num_objects());  // class -> least tagged index

  for (int o = 0; o < c.num_objects(); ++o) {
    int total = 0;
    for (int k = 0; k < nn; ++k) {
      res.offsets[o][k] = total;
      total += d.nodes[k].size(o);
    }
    res.offsets[o][nn] = total;
    UnionFind uf(total);
    for (const auto& e : d.edges)
      for (int i = 0; i < d.nodes[e.src].size(o); ++i)
        uf.unite(res.offsets[o][e.src] + i, res.offsets[o][e.tgt] + e.map.at(o, i));
    class_of[o].assign(total, -1);
    for (int t = 0; t < total; ++t) {
      int r = uf.find(t);
      if (class_of[o][r] < 0) {
        class_of[o][r] = (int)reps[o].size();
        reps[o].push_back(r);
      }
      class_of[o][t] = class_of[o][r];
    }
    for (int r : reps[o]) {
      int k = 0;
      while (res.offsets[o][k + 1] <= r) ++k;
      elems[o].push_back(std::to_string(k) + ":" + d.nodes[k].elem_name(o, r - res.offsets[o][k]));
    }
  }

  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int f = 0; f < c.num_morphisms(); ++f) {
    int t = c.tgt(f), s = c.src(f);
    action[f].resize(reps[t].size());
    for (int cl = 0; cl < (int)reps[t].size(); ++cl) {
      int r = reps[t][cl];
      int k = 0;
      while (res.offsets[t][k + 1] <= r) ++k;
      int moved = d.nodes[k].apply(f, r - res.offsets[t][k]);
      action[f][cl] = class_of[s][res.offsets[s][k] + moved];
    }
  }

  res.apex = Presheaf(site, std::move(elems), std::move(action));
  res.class_of = std::move(class_of);
  for (int k = 0; k < nn; ++k) {
    std::vector<std::vector<int>> comp(c.num_objects());
    for (int o = 0; o < c.num_objects(); ++o) {
      comp[o].resize(d.nodes[k].size(o));
      for (int i = 0; i < d.nodes[k].size(o); ++i) comp[o][i] = res.class_of[o][res.offsets[o][k] + i];
    }
    res.injections.emplace_back(d.nodes[k], res.apex, std::move(comp));
  }
  return res;
}

PresheafMap ColimitResult::mediate(const Cone& cocone) const {
  const FinCategory& c = apex.site();
  int nn = (int)injections.size();
  std::vector<std::vector<int>> comp(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    comp[o].assign(apex.size(o), -1);
    for (int k = 0; k < nn; ++k)
      for (int i = 0; i < injections[k].dom().size(o); ++i) {
        int cl = injections[k].at(o, i);
        int v = cocone.legs[k].at(o, i);
        if (comp[o][cl] >= 0 && comp[o][cl] != v)
          throw ValidationError("mediate: cocone legs disagree on a glued element");
        comp[o][cl] = v;
      }
    for (int v : comp[o])
      if (v < 0) throw ValidationError("mediate: colimit class not covered by any injection");
  }
  return PresheafMap(apex, cocone.apex, std::move(comp));
}

LimitResult product(const Presheaf& x, const Presheaf& y) {
  require_same_site(x, y, "product");
  Diagram d;
  d.nodes = {x, y};
  return limit(d, x.site_ptr());
}

LimitResult pullback(const PresheafMap& f, const PresheafMap& g) {
  if (!(f.cod() == g.cod())) throw ValidationError("pullback: cospan legs have different codomains");
  Diagram d;
  d.nodes = {f.dom(), g.dom(), f.cod()};
  d.edges.push_back({0, 2, f});
  d.edges.push_back({1, 2, g});
  LimitResult full = limit(d, f.dom().site_ptr());
  full.projections.pop_back();  // keep the two legs of the span
  return full;
}

LimitResult equalizer(const PresheafMap& f, const PresheafMap& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod()))
    throw ValidationError("equalizer: maps are not parallel");
  Diagram d;
  d.nodes = {f.dom(), f.cod()};
  d.edges.push_back({0, 1, f});
  d.edges.push_back({0, 1, g});
  LimitResult full = limit(d, f.dom().site_ptr());
  full.projections.pop_back();
  return full;
}

ColimitResult coproduct(const Presheaf& x, const Presheaf& y) {
  require_same_site(x, y, "coproduct");
  Diagram d;
  d.nodes = {x, y};
  return colimit(d, x.site_ptr());
}

ColimitResult coequalizer(const PresheafMap& f, const PresheafMap& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod()))
    throw ValidationError("coequalizer: maps are not parallel");
  Diagram d;
  d.nodes = {f.dom(), f.cod()};
  d.edges.push_back({0, 1, f});
  d.edges.push_back({0, 1, g});
  ColimitResult full = colimit(d, f.dom().site_ptr());
  full.injections.erase(full.injections.begin());  // keep the quotient leg
  return full;
}

DiagonalResult diagonal(const Presheaf& x) {
  DiagonalResult r{product(x, x), {}};
  PresheafMap id = PresheafMap::identity(x);
  r.diag = r.square.mediate({x, {id, id}});
  return r;
}

// ---------------------------------------------------------------------------
// hom-set enumeration

std::vector<PresheafMap> hom_enumerate(const Presheaf& x, const Presheaf& y, const EnumLimits& lim) {
  require_same_site(x, y, "hom_enumerate");
  const FinCategory& c = x.site();
  int nobj = c.num_objects();

  // global slot ids
  std::vector<int> slot_obj, slot_elem;
  std::vector<std::vector<int>> slot_of(nobj);
  for (int o = 0; o < nobj; ++o) {
    slot_of[o].resize(x.size(o));
    for (int i = 0; i < x.size(o); ++i) {
      slot_of[o][i] = (int)slot_obj.size();
      slot_obj.push_back(o);
      slot_elem.push_back(i);
    }
  }
  int nslots = (int)slot_obj.size();

  // propagation targets: assigning slot (tgt f, i) forces (src f, x.apply(f, i))
  struct Forced {
    int slot;
    int mor;
  };
  std::vector<std::vector<Forced>> forces(nslots);
  for (int f = 0; f < c.num_morphisms(); ++f) {
    if (c.is_identity(f)) continue;
    int t = c.tgt(f), s = c.src(f);
    for (int i = 0; i < x.size(t); ++i)
      forces[slot_of[t][i]].push_back({slot_of[s][x.apply(f, i)], f});
  }

  std::vector<int> assign(nslots, -1);
  std::vector<PresheafMap> out;
  long long nodes = 0;

  std::function<void(int)> rec = [&](int fromSlot) {
    int slot = fromSlot;
    while (slot < nslots && assign[slot] >= 0) ++slot;
    if (slot == nslots) {
      std::vector<std::vector<int>> comp(nobj);
      for (int o = 0; o < nobj; ++o) {
        comp[o].resize(x.size(o));
        for (int i = 0; i < x.size(o); ++i) comp[o][i] = assign[slot_of[o][i]];
      }
      out.emplace_back(x, y, std::move(comp));
      return;
    }
    int o = slot_obj[slot];
    for (int v = 0; v < y.size(o); ++v) {
      if (++nodes > lim.max_nodes)
        throw BoundError("hom_enumerate: search too large (budget " + std::to_string(lim.max_nodes) +
                         " nodes)");
      // propagate
      std::vector<int> touched;
      bool ok = true;
      std::vector<std::pair<int, int>> queue{{slot, v}};
      while (!queue.empty() && ok) {
        auto [sl, val] = queue.back();
        queue.pop_back();
        if (assign[sl] >= 0) {
          if (assign[sl] != val) ok = false;
          continue;
        }
        assign[sl] = val;
        touched.push_back(sl);
        for (const auto& fc : forces[sl]) {
          int forced_val = y.apply(fc.mor, val);
          queue.push_back({fc.slot, forced_val});
        }
      }
      if (ok) rec(slot + 1);
      for (int sl : touched) assign[sl] = -1;
    }
  };
  rec(0);
  return out;
}

// ---------------------------------------------------------------------------
// isomorphism search / canonical forms

std::string canonical_form(const Presheaf& x) {
  const FinCategory& c = x.site();
  int nobj = c.num_objects();
  std::vector<std::vector<int>> perm(nobj);  // perm[o][old index] = new index
  for (int o = 0; o < nobj; ++o) {
    perm[o].resize(x.size(o));
    std::iota(perm[o].begin(), perm[o].end(), 0);
  }
  std::string best;
  auto render = [&]() {
    std::ostringstream out;
    for (int o = 0; o < nobj; ++o) out << x.size(o) << ";";
    for (int m = 0; m < c.num_morphisms(); ++m) {
      int t = c.tgt(m), s = c.src(m);
      std::vector<int> table(x.size(t));
      for (int i = 0; i < x.size(t); ++i) table[perm[t][i]] = perm[s][x.apply(m, i)];
      out << "/";
      for (size_t i = 0; i < table.size(); ++i) {
        if (i) out << ",";
        out << table[i];
      }
    }
    return out.str();
  };
  std::function<void(int)> rec = [&](int o) {
    if (o == nobj) {
      std::string s = render();
      if (best.empty() || s < best) best = s;
      return;
    }
    std::sort(perm[o].begin(), perm[o].end());
    do {
      rec(o + 1);
    } while (std::next_permutation(perm[o].begin(), perm[o].end()));
  };
  rec(0);
  return best;
}

namespace {

bool iso_rec(const Presheaf& x, const Presheaf& y, std::vector<std::vector<int>>& map,
             std::vector<std::vector<char>>& used, int o, int i) {
  const FinCategory& c = x.site();
  while (o < c.num_objects() && i >= x.size(o)) {
    ++o;
    i = 0;
  }
  if (o == c.num_objects()) return true;
  if (map[o][i] >= 0) return iso_rec(x, y, map, used, o, i + 1);
  for (int v = 0; v < y.size(o); ++v) {
    if (used[o][v]) continue;
    map[o][i] = v;
    used[o][v] = 1;
    bool ok = true;
    for (int f = 0; f < c.num_morphisms() && ok; ++f) {
      int t = c.tgt(f), s = c.src(f);
      for (int k = 0; k < x.size(t) && ok; ++k) {
        if (map[t][k] < 0) continue;
        int xk = x.apply(f, k);
        if (map[s][xk] >= 0 && map[s][xk] != y.apply(f, map[t][k])) ok = false;
      }
    }
    if (ok && iso_rec(x, y, map, used, o, i + 1)) return true;
    map[o][i] = -1;
    used[o][v] = 0;
  }
  return false;
}

}  // namespace

namespace {

/// Iso-invariant fingerprint by color refinement over the action graph;
/// equal fingerprints are necessary (not sufficient) for isomorphism.
std::string iso_fingerprint(const Presheaf& x) {
  const FinCategory& c = x.site();
  int nobj = c.num_objects();
  std::vector<std::vector<int>> color(nobj);
  for (int o = 0; o < nobj; ++o) color[o].assign(x.size(o), o);
  for (int round = 0; round < 3; ++round) {
    std::map<std::string, int> palette;
    std::vector<std::vector<std::string>> sig(nobj);
    for (int o = 0; o < nobj; ++o) {
      sig[o].resize(x.size(o));
      for (int i = 0; i < x.size(o); ++i) {
        std::ostringstream s;
        s << color[o][i];
        for (int f : c.into(o)) s << "|" << f << ":" << color[c.src(f)][x.apply(f, i)];
        for (int f : c.out_of(o)) {
          std::vector<int> pre;
          for (int k = 0; k < x.size(c.tgt(f)); ++k)
            if (x.apply(f, k) == i) pre.push_back(color[c.tgt(f)][k]);
          std::sort(pre.begin(), pre.end());
          s << "/" << f << ":";
          for (int p : pre) s << p << ",";
        }
        sig[o][i] = s.str();
      }
    }
    for (int o = 0; o < nobj; ++o)
      for (const std::string& s : sig[o]) palette.emplace(s, 0);
    int rank = 0;
    for (auto& [s, r] : palette) r = rank++;  // ranks in signature order, label independent
    for (int o = 0; o < nobj; ++o)
      for (int i = 0; i < x.size(o); ++i) color[o][i] = palette.at(sig[o][i]);
  }
  std::ostringstream out;
  for (int o = 0; o < nobj; ++o) {
    std::vector<int> sorted = color[o];
    std::sort(sorted.begin(), sorted.end());
    out << x.size(o) << "[";
    for (int cc : sorted) out << cc << ",";
    out << "]";
  }
  return out.str();
}

}  // namespace

std::optional<PresheafMap> find_iso(const Presheaf& x, const Presheaf& y) {
  if (!same_site(x, y)) return std::nullopt;
  const FinCategory& c = x.site();
  for (int o = 0; o < c.num_objects(); ++o)
    if (x.size(o) != y.size(o)) return std::nullopt;
  std::vector<std::vector<int>> map(c.num_objects());
  std::vector<std::vector<char>> used(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    map[o].assign(x.size(o), -1);
    used[o].assign(y.size(o), 0);
  }
  if (!iso_rec(x, y, map, used, 0, 0)) return std::nullopt;
  return PresheafMap(x, y, std::move(map));
}

bool isomorphic(const Presheaf& x, const Presheaf& y) { return find_iso(x, y).has_value(); }

std::vector<Presheaf> enumerate_presheaves(std::shared_ptr<const FinCategory> site, int max_per_object,
                                           const EnumLimits& lim) {
  const FinCategory& c = *site;
  int nobj = c.num_objects(), nmor = c.num_morphisms();
  std::vector<Presheaf> out;
  std::map<std::string, std::vector<int>> classes_by_fingerprint;
  long long nodes = 0;

  std::vector<int> sizes(nobj, 0);

  // generator order: repeatedly pick the unknown morphism whose assignment
  // (a) forces the most consistency checks against already-known actions
  // and (b) derives the most composites, so that backtracking branches on
  // a small generating set and prunes early
  std::vector<int> generator_order;
  {
    std::vector<char> known(nmor, 0);
    for (int o = 0; o < nobj; ++o) known[c.identity(o)] = 1;
    auto closure_of = [&](int m) {
      std::vector<char> k = known;
      k[m] = 1;
      bool changed = true;
      while (changed) {
        changed = false;
        for (int g = 0; g < nmor; ++g)
          for (int f = 0; f < nmor; ++f)
            if (k[g] && k[f] && c.composable(g, f) && !k[c.compose(g, f)]) {
              k[c.compose(g, f)] = 1;
              changed = true;
            }
      }
      return k;
    };
    auto score_of = [&](int m) {
      std::vector<char> k = closure_of(m);
      int gain = 0, checks = 0;
      for (int i = 0; i < nmor; ++i)
        if (k[i] && !known[i]) ++gain;
      for (int g = 0; g < nmor; ++g)
        for (int f = 0; f < nmor; ++f) {
          if (!k[g] || !k[f] || !c.composable(g, f)) continue;
          if (known[g] && known[f]) continue;  // already checked earlier
          if (known[c.compose(g, f)] || (c.compose(g, f) == g && known[f]) ||
              (c.compose(g, f) == f && known[g]))
            ++checks;
        }
      return std::pair<int, int>(checks, gain);
    };
    while (true) {
      int best = -1;
      std::pair<int, int> best_score{-1, -1};
      for (int m = 0; m < nmor; ++m) {
        if (known[m]) continue;
        auto s = score_of(m);
        if (s > best_score) {
          best_score = s;
          best = m;
        }
      }
      if (best < 0) break;
      generator_order.push_back(best);
      known = closure_of(best);
    }
  }

  std::function<void()> try_sizes = [&]() {
    std::vector<std::vector<int>> action(nmor);
    std::vector<char> known(nmor, 0);
    for (int o = 0; o < nobj; ++o) {
      int id = c.identity(o);
      action[id].resize(sizes[o]);
      std::iota(action[id].begin(), action[id].end(), 0);
      known[id] = 1;
    }

    // derive composites of known actions and check consistency; returns
    // false on a contradiction, records derived morphisms on the trail
    auto close_known = [&](std::vector<int>& trail) -> bool {
      bool changed = true;
      while (changed) {
        changed = false;
        for (int g = 0; g < nmor; ++g) {
          if (!known[g]) continue;
          for (int f = 0; f < nmor; ++f) {
            if (!known[f] || !c.composable(g, f)) continue;
            int gf = c.compose(g, f);
            std::vector<int> derived(sizes[c.tgt(g)]);
            for (int i = 0; i < sizes[c.tgt(g)]; ++i) derived[i] = action[f][action[g][i]];
            if (!known[gf]) {
              action[gf] = std::move(derived);
              known[gf] = 1;
              trail.push_back(gf);
              changed = true;
            } else if (action[gf] != derived) {
              return false;
            }
          }
        }
      }
      return true;
    };

    std::function<void()> assign_next = [&]() {
      int m = -1;
      for (int cand : generator_order)
        if (!known[cand]) {
          m = cand;
          break;
        }
      if (m < 0) {
        std::vector<std::vector<std::string>> elems(nobj);
        for (int o = 0; o < nobj; ++o)
          for (int i = 0; i < sizes[o]; ++i)
            elems[o].push_back(c.object_name(o) + std::to_string(i));
        Presheaf p(site, std::move(elems), action);
        std::string key = iso_fingerprint(p);
        auto& bucket = classes_by_fingerprint[key];
        for (int idx : bucket)
          if (isomorphic(out[idx], p)) return;
        bucket.push_back((int)out.size());
        out.push_back(std::move(p));
        return;
      }
      int nt = sizes[c.tgt(m)], ns = sizes[c.src(m)];
      if (nt > 0 && ns == 0) return;  // no function into an empty set
      std::vector<int> fn(nt, 0);
      while (true) {
        if (++nodes > lim.max_nodes)
          throw BoundError("enumerate_presheaves: search too large (budget " +
                           std::to_string(lim.max_nodes) + " nodes)");
        action[m] = fn;
        known[m] = 1;
        std::vector<int> trail;
        if (close_known(trail)) assign_next();
        for (int d : trail) {
          known[d] = 0;
          action[d].clear();
        }
        known[m] = 0;
        action[m].clear();
        if (nt == 0) break;  // the empty function is the only candidate
        int i = nt - 1;
        while (i >= 0 && fn[i] + 1 == ns) fn[i--] = 0;
        if (i < 0) break;
        ++fn[i];
      }
    };
    assign_next();
  };

  std::function<void(int)> pick_sizes = [&](int o) {
    if (o == nobj) {
      try_sizes();
      return;
    }
    for (int n = 0; n <= max_per_object; ++n) {
      sizes[o] = n;
      pick_sizes(o + 1);
    }
  };
  pick_sizes(0);

  std::stable_sort(out.begin(), out.end(), [](const Presheaf& a, const Presheaf& b) {
    if (a.total_size() != b.total_size()) return a.total_size() < b.total_size();
    return canonical_form(a) < canonical_form(b);
  });
  return out;
}

// ---------------------------------------------------------------------------
// exponentials

ExponentialResult exponential(const Presheaf& x, const Presheaf& y, const EnumLimits& lim) {
  require_same_site(x, y, "exponential");
  auto site = x.site_ptr();
  const FinCategory& c = *site;
  int nobj = c.num_objects();

  // carrier at c: natural maps y(c) x X -> Y, realized through the product
  std::vector<LimitResult> yprod(nobj);
  std::vector<std::vector<PresheafMap>> families(nobj);
  std::vector<std::vector<std::string>> elems(nobj);
  for (int o = 0; o < nobj; ++o) {
    yprod[o] = product(yoneda(site, o), x);
    families[o] = hom_enumerate(yprod[o].apex, y, lim);
    for (size_t i = 0; i < families[o].size(); ++i)
      elems[o].push_back("f" + std::to_string(i));
  }

  auto family_index = [&](int o, const PresheafMap& fam) {
    for (int i = 0; i < (int)families[o].size(); ++i)
      if (families[o][i] == fam) return i;
    throw ValidationError("exponential: restricted family not found");
  };

  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int f = 0; f < c.num_morphisms(); ++f) {
    int t = c.tgt(f), s = c.src(f);
    action[f].resize(families[t].size());
    if (c.is_identity(f)) {
      std::iota(action[f].begin(), action[f].end(), 0);
      continue;
    }
    // y(f) x id : y(s) x X -> y(t) x X, then postcompose with the family
    PresheafMap yf = yoneda_map(site, f);
    PresheafMap move = yprod[t].mediate(
        {yprod[s].apex, {compose(yf, yprod[s].projections[0]), yprod[s].projections[1]}});
    for (int i = 0; i < (int)families[t].size(); ++i)
      action[f][i] = family_index(s, compose(families[t][i], move));
  }

  ExponentialResult res;
  res.base = x;
  res.target = y;
  res.exp = Presheaf(site, std::move(elems), std::move(action));
  res.prod = product(res.exp, x);

  std::vector<std::vector<int>> evcomp(nobj);
  for (int o = 0; o < nobj; ++o) {
    evcomp[o].resize(res.prod.apex.size(o));
    int id_pos = yprod[o].projections[0].cod().elem_index(o, c.morphism_name(c.identity(o)));
    for (int i = 0; i < res.prod.apex.size(o); ++i) {
      int phi = res.prod.tuples[o][i][0];
      int xe = res.prod.tuples[o][i][1];
      auto it = yprod[o].index_of[o].find({id_pos, xe});
      if (it == yprod[o].index_of[o].end()) throw ValidationError("exponential: missing identity pair");
      evcomp[o][i] = families[o][phi].at(o, it->second);
    }
  }
  res.ev = PresheafMap(res.prod.apex, y, std::move(evcomp));
  res.families = std::move(families);
  res.yprod = std::move(yprod);
  return res;
}

PresheafMap curry(const ExponentialResult& e, const LimitResult& zx, const PresheafMap& u) {
  const Presheaf& z = zx.projections[0].cod();
  auto site = z.site_ptr();
  const FinCategory& c = *site;
  std::vector<std::vector<int>> comp(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    comp[o].resize(z.size(o));
    for (int zi = 0; zi < z.size(o); ++zi) {
      // family at d: (f : d -> o, x) |-> u_d(z.f, x)
      const LimitResult& yp = e.yprod[o];
      Presheaf yo = yoneda(site, o);
      std::vector<std::vector<int>> fam(c.num_objects());
      for (int d = 0; d < c.num_objects(); ++d) {
        fam[d].resize(yp.apex.size(d));
        for (int k = 0; k < yp.apex.size(d); ++k) {
          int f = c.morphism_index(yo.elem_name(d, yp.tuples[d][k][0]));
          int xe = yp.tuples[d][k][1];
          auto it = zx.index_of[d].find({z.apply(f, zi), xe});
          if (it == zx.index_of[d].end()) throw ValidationError("curry: pair not in product");
          fam[d][k] = u.at(d, it->second);
        }
      }
      PresheafMap family(yp.apex, e.target, std::move(fam));
      int idx = -1;
      for (int i = 0; i < (int)e.families[o].size(); ++i)
        if (e.families[o][i] == family) idx = i;
      if (idx < 0) throw ValidationError("curry: transposed family not found in exponential carrier");
      comp[o][zi] = idx;
    }
  }
  return PresheafMap(z, e.exp, std::move(comp));
}

PresheafMap uncurry(const ExponentialResult& e, const LimitResult& zx, const PresheafMap& m) {
  const Presheaf& z = m.dom();
  auto site = z.site_ptr();
  const FinCategory& c = *site;
  std::vector<std::vector<int>> comp(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    comp[o].resize(zx.apex.size(o));
    for (int i = 0; i < zx.apex.size(o); ++i) {
      int zi = zx.tuples[o][i][0], xe = zx.tuples[o][i][1];
      const PresheafMap& family = e.families[o][m.at(o, zi)];
      Presheaf yo = yoneda(site, o);
      auto it = e.yprod[o].index_of[o].find({yo.elem_index(o, c.morphism_name(c.identity(o))), xe});
      if (it == e.yprod[o].index_of[o].end()) throw ValidationError("uncurry: missing identity pair");
      comp[o][i] = family.at(o, it->second);
    }
  }
  return PresheafMap(zx.apex, e.target, std::move(comp));
}

// ---------------------------------------------------------------------------
// category of elements

ElementsCategory category_of_elements(const Presheaf& x) {
  const FinCategory& c = x.site();
  CategorySpec spec;
  auto obj_name = [&](int o, int i) { return "(" + c.object_name(o) + ";" + x.elem_name(o, i) + ")"; };
  auto mor_name = [&](int f, int y) {
    return "(" + c.morphism_name(f) + ";" + x.elem_name(c.tgt(f), y) + ")";
  };
  for (int o = 0; o < c.num_objects(); ++o)
    for (int i = 0; i < x.size(o); ++i) spec.objects.push_back(obj_name(o, i));
  // one morphism (f; y) : (src f, X(f)(y)) -> (tgt f, y) per pair
  for (int f = 0; f < c.num_morphisms(); ++f)
    for (int y = 0; y < x.size(c.tgt(f)); ++y)
      spec.morphisms.push_back({mor_name(f, y), obj_name(c.src(f), x.apply(f, y)), obj_name(c.tgt(f), y)});
  for (int o = 0; o < c.num_objects(); ++o)
    for (int i = 0; i < x.size(o); ++i)
      spec.identities[obj_name(o, i)] = mor_name(c.identity(o), i);
  for (int g = 0; g < c.num_morphisms(); ++g)
    for (int f = 0; f < c.num_morphisms(); ++f) {
      if (!c.composable(g, f)) continue;
      // (g; z) . (f; y) with y = X(g)(z) is (g.f; z)
      for (int z = 0; z < x.size(c.tgt(g)); ++z)
        spec.compose.push_back({mor_name(g, z), mor_name(f, x.apply(g, z)), mor_name(c.compose(g, f), z)});
    }
  auto cat = FinCategory::build_shared(spec);
  std::vector<std::pair<int, int>> objects(cat->num_objects());
  std::vector<int> ob(cat->num_objects()), mor(cat->num_morphisms());
  for (int o = 0; o < c.num_objects(); ++o)
    for (int i = 0; i < x.size(o); ++i) {
      int k = cat->object_index(obj_name(o, i));
      objects[k] = {o, i};
      ob[k] = o;
    }
  for (int f = 0; f < c.num_morphisms(); ++f)
    for (int y = 0; y < x.size(c.tgt(f)); ++y) mor[cat->morphism_index(mor_name(f, y))] = f;
  FinFunctor proj(cat, x.site_ptr(), std::move(ob), std::move(mor));
  return ElementsCategory{std::move(cat), std::move(objects), std::move(proj)};
}

std::vector<std::vector<std::pair<int, int>>> element_components(const Presheaf& x) {
  const FinCategory& c = x.site();
  std::vector<int> offset(c.num_objects() + 1, 0);
  for (int o = 0; o < c.num_objects(); ++o) offset[o + 1] = offset[o] + x.size(o);
  UnionFind uf(offset.back());
  for (int f = 0; f < c.num_morphisms(); ++f)
    for (int y = 0; y < x.size(c.tgt(f)); ++y)
      uf.unite(offset[c.tgt(f)] + y, offset[c.src(f)] + x.apply(f, y));
  std::map<int, std::vector<std::pair<int, int>>> blocks;
  for (int o = 0; o < c.num_objects(); ++o)
    for (int i = 0; i < x.size(o); ++i) blocks[uf.find(offset[o] + i)].push_back({o, i});
  std::vector<std::vector<std::pair<int, int>>> out;
  for (auto& [rep, block] : blocks) out.push_back(std::move(block));
  return out;
}

// ---------------------------------------------------------------------------
// subobject classifier

namespace {

std::string sieve_name(const FinCategory& c, const Sieve& s) {
  std::vector<std::string> names;
  for (int m : s) names.push_back(c.morphism_name(m));
  std::sort(names.begin(), names.end());
  return "{" + join(names, ",") + "}";
}

bool sieve_contains(const Sieve& s, int m) {
  return std::binary_search(s.begin(), s.end(), m);
}

Sieve close_down(const FinCategory& c, int obj, Sieve gen) {
  std::set<int> s(gen.begin(), gen.end());
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> cur(s.begin(), s.end());
    for (int f : cur)
      for (int g : c.into(c.src(f)))
        if (s.insert(c.compose(f, g)).second) changed = true;
  }
  (void)obj;
  return Sieve(s.begin(), s.end());
}

}  // namespace

int OmegaData::sieve_index(int obj, const Sieve& s) const {
  for (int i = 0; i < (int)sieves[obj].size(); ++i)
    if (sieves[obj][i] == s) return i;
  throw ValidationError("sieve_index: not a sieve of the classifier");
}

OmegaData compute_omega(std::shared_ptr<const FinCategory> site) {
  const FinCategory& c = *site;
  int nobj = c.num_objects();
  OmegaData od;
  od.sieves.resize(nobj);

  std::vector<std::vector<std::string>> elems(nobj);
  for (int o = 0; o < nobj; ++o) {
    // grow the set of sieves from the empty sieve by adding one generator
    // and closing downward; this touches each sieve once per generator
    std::set<Sieve> all;
    std::vector<Sieve> frontier{Sieve{}};
    all.insert(Sieve{});
    while (!frontier.empty()) {
      Sieve s = frontier.back();
      frontier.pop_back();
      for (int m : c.into(o)) {
        if (sieve_contains(s, m)) continue;
        Sieve bigger = s;
        bigger.push_back(m);
        std::sort(bigger.begin(), bigger.end());
        bigger = close_down(c, o, bigger);
        if (all.insert(bigger).second) frontier.push_back(bigger);
      }
    }
    od.sieves[o].assign(all.begin(), all.end());
    // deterministic order: by size then by content
    std::sort(od.sieves[o].begin(), od.sieves[o].end(), [](const Sieve& a, const Sieve& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    for (const Sieve& s : od.sieves[o]) elems[o].push_back(sieve_name(c, s));
  }

  std::vector<std::vector<int>> action(c.num_morphisms());
  for (int f = 0; f < c.num_morphisms(); ++f) {
    int t = c.tgt(f), s = c.src(f);
    action[f].resize(od.sieves[t].size());
    for (int i = 0; i < (int)od.sieves[t].size(); ++i) {
      Sieve pulled;
      for (int g : c.into(s))
        if (sieve_contains(od.sieves[t][i], c.compose(f, g))) pulled.push_back(g);
      action[f][i] = od.sieve_index(s, pulled);
    }
  }
  od.omega = Presheaf(site, std::move(elems), std::move(action));
  od.unit = terminal_presheaf(site);

  std::vector<std::vector<int>> topc(nobj), botc(nobj);
  for (int o = 0; o < nobj; ++o) {
    Sieve maximal = c.into(o);
    topc[o] = {od.sieve_index(o, maximal)};
    botc[o] = {od.sieve_index(o, Sieve{})};
  }
  od.truth = PresheafMap(od.unit, od.omega, std::move(topc));
  od.falsity = PresheafMap(od.unit, od.omega, std::move(botc));

  std::vector<std::vector<int>> negc(nobj);
  for (int o = 0; o < nobj; ++o) {
    negc[o].resize(od.sieves[o].size());
    for (int i = 0; i < (int)od.sieves[o].size(); ++i) {
      Sieve ns;
      for (int f : c.into(o)) {
        bool meets = false;
        for (int g : c.into(c.src(f)))
          if (sieve_contains(od.sieves[o][i], c.compose(f, g))) meets = true;
        if (!meets) ns.push_back(f);
      }
      negc[o][i] = od.sieve_index(o, ns);
    }
  }
  od.negation = PresheafMap(od.omega, od.omega, std::move(negc));

  od.square = product(od.omega, od.omega);
  std::vector<std::vector<int>> meetc(nobj);
  for (int o = 0; o < nobj; ++o) {
    meetc[o].resize(od.square.apex.size(o));
    for (int i = 0; i < od.square.apex.size(o); ++i) {
      const Sieve& a = od.sieves[o][od.square.tuples[o][i][0]];
      const Sieve& b = od.sieves[o][od.square.tuples[o][i][1]];
      Sieve inter;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
      meetc[o][i] = od.sieve_index(o, inter);
    }
  }
  od.meet = PresheafMap(od.square.apex, od.omega, std::move(meetc));
  return od;
}

}  // namespace toposlab
