#include "toposlab/geom.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace toposlab {

namespace {
void install_codiscrete(GeomMorphism& p, int bound, const EnumLimits& lim);
}

// ---------------------------------------------------------------------------
// Topos

std::shared_ptr<Topos> Topos::presheaves_on(std::shared_ptr<const FinCategory> site,
                                            std::string label) {
  auto t = std::make_shared<Topos>();
  t->kind_ = Kind::presheaves;
  t->label_ = std::move(label);
  t->site_ = std::move(site);
  return t;
}

std::shared_ptr<Topos> Topos::subcategory_of(std::shared_ptr<const FinCategory> site,
                                             std::vector<Presheaf> objects, std::string label,
                                             std::function<bool(const Presheaf&)> member) {
  auto t = std::make_shared<Topos>();
  t->kind_ = Kind::subcategory;
  t->label_ = std::move(label);
  t->site_ = std::move(site);
  t->subcat_objects_ = std::move(objects);
  t->member_ = std::move(member);
  return t;
}

std::vector<Presheaf> Topos::objects(int max_per_object) const {
  auto it = objects_cache_.find(max_per_object);
  if (it != objects_cache_.end()) return it->second;
  std::vector<Presheaf> out;
  if (kind_ == Kind::presheaves) {
    out = enumerate_presheaves(site_, max_per_object);
  } else {
    for (const Presheaf& x : subcat_objects_)
      if (x.max_fiber() <= max_per_object) out.push_back(x);
  }
  objects_cache_[max_per_object] = out;
  return out;
}

bool Topos::contains(const Presheaf& x) const {
  if (kind_ == Kind::presheaves) return true;
  return member_ ? member_(x) : false;
}

const OmegaData& Topos::omega() const {
  if (!omega_cache_) omega_cache_ = compute_omega(site_);
  return *omega_cache_;
}

const LTTopology& Topos::negneg() const {
  if (!negneg_cache_) negneg_cache_ = negneg_topology(omega());
  return *negneg_cache_;
}

bool Topos::has_classifier() const {
  return kind_ == Kind::presheaves || classifier_.has_value();
}

const Topos::Classifier& Topos::classifier() const {
  if (kind_ == Kind::presheaves && !classifier_) {
    const OmegaData& od = omega();
    const_cast<Topos*>(this)->classifier_ = Classifier{od.omega, od.truth, od.negation, od.falsity};
  }
  if (!classifier_) throw ValidationError(label_ + ": no subobject classifier installed");
  return *classifier_;
}

PresheafMap Topos::classify_sub(const Subobject& u) const {
  PresheafMap ambient = classify(u, omega());
  if (kind_ == Kind::presheaves) return ambient;
  const Classifier& cl = classifier();
  const FinCategory& c = *site_;
  std::vector<std::vector<int>> comp(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    comp[o].resize(u.ambient().size(o));
    for (int i = 0; i < u.ambient().size(o); ++i) {
      int v = cl.object.elem_index(o, omega().omega.elem_name(o, ambient.at(o, i)));
      if (v < 0)
        throw ValidationError(label_ + ": classifying map leaves the subcategory classifier at " +
                              u.ambient().elem_name(o, i));
      comp[o][i] = v;
    }
  }
  return PresheafMap(u.ambient(), cl.object, std::move(comp));
}

bool Topos::boolean() const {
  if (kind_ == Kind::presheaves) return negneg().j == PresheafMap::identity(omega().omega);
  const Classifier& cl = classifier();
  return compose(cl.negation, cl.negation) == PresheafMap::identity(cl.object);
}

// ---------------------------------------------------------------------------
// sections (global elements) of a presheaf

namespace {

struct SectionsData {
  Presheaf as_set;                       // over the terminal site
  std::vector<std::vector<int>> tuples;  // per section: element index per site object
  std::map<std::vector<int>, int> index_of;
};

SectionsData compute_sections(const Presheaf& x, std::shared_ptr<const FinCategory> point_site) {
  const FinCategory& c = x.site();
  int nobj = c.num_objects();
  SectionsData sd;
  std::vector<std::string> names;
  std::vector<int> tup(nobj, 0);
  bool any_empty = false;
  for (int o = 0; o < nobj; ++o)
    if (x.size(o) == 0) any_empty = true;
  bool done = any_empty;
  while (!done) {
    bool ok = true;
    for (int f = 0; f < c.num_morphisms() && ok; ++f)
      if (x.apply(f, tup[c.tgt(f)]) != tup[c.src(f)]) ok = false;
    if (ok) {
      std::vector<std::string> parts;
      for (int o = 0; o < nobj; ++o) parts.push_back(x.elem_name(o, tup[o]));
      sd.index_of[tup] = (int)names.size();
      names.push_back("(" + join(parts, ";") + ")");
      sd.tuples.push_back(tup);
    }
    int k = nobj - 1;
    while (k >= 0 && tup[k] + 1 >= x.size(k)) tup[k--] = 0;
    if (k < 0) break;
    ++tup[k];
  }
  std::vector<int> id(names.size());
  std::iota(id.begin(), id.end(), 0);
  sd.as_set = Presheaf(point_site, {names}, {id});
  return sd;
}

int component_index(const std::vector<std::vector<std::pair<int, int>>>& comps, int o, int i) {
  for (int k = 0; k < (int)comps.size(); ++k)
    for (const auto& [oo, ii] : comps[k])
      if (oo == o && ii == i) return k;
  throw ValidationError("component lookup failed");
}

}  // namespace

std::vector<PresheafMap> sections_of(const Presheaf& x) {
  SectionsData sd = compute_sections(x, standard_site("terminal"));
  std::vector<PresheafMap> out;
  const FinCategory& c = x.site();
  Presheaf one = terminal_presheaf(x.site_ptr());
  for (const auto& tup : sd.tuples) {
    std::vector<std::vector<int>> comp(c.num_objects());
    for (int o = 0; o < c.num_objects(); ++o) comp[o] = {tup[o]};
    out.emplace_back(one, x, std::move(comp));
  }
  return out;
}

bool subterminal(const Presheaf& x) {
  for (int o = 0; o < x.site().num_objects(); ++o)
    if (x.size(o) > 1) return false;
  return true;
}

// ---------------------------------------------------------------------------
// the canonical morphism PSh(C) -> Sets

namespace {

struct CanonicalCtx {
  std::shared_ptr<const FinCategory> site;
  std::shared_ptr<const FinCategory> point;
  mutable std::map<std::string, SectionsData> sections_cache;

  const SectionsData& sections(const Presheaf& x) const {
    std::string key = x.serialize();
    auto it = sections_cache.find(key);
    if (it == sections_cache.end())
      it = sections_cache.emplace(key, compute_sections(x, point)).first;
    return it->second;
  }
};

}  // namespace

GeomMorphism canonical_to_sets(std::shared_ptr<const FinCategory> site, int bound,
                               const EnumLimits& lim) {
  auto ctx = std::make_shared<CanonicalCtx>();
  ctx->site = site;
  ctx->point = standard_site("terminal");

  GeomMorphism p;
  p.source = Topos::presheaves_on(site, "PSh");
  p.target = Topos::presheaves_on(ctx->point, "sets");

  p.discrete.dom = p.target;
  p.discrete.cod = p.source;
  p.discrete.on_obj = [ctx](const Presheaf& a) { return constant_presheaf(ctx->site, a.carrier(0)); };
  p.discrete.on_map = [ctx](const PresheafMap& g) {
    Presheaf da = constant_presheaf(ctx->site, g.dom().carrier(0));
    Presheaf db = constant_presheaf(ctx->site, g.cod().carrier(0));
    std::vector<std::vector<int>> comp(ctx->site->num_objects(), g.component(0));
    return PresheafMap(std::move(da), std::move(db), std::move(comp));
  };

  p.points.dom = p.source;
  p.points.cod = p.target;
  p.points.on_obj = [ctx](const Presheaf& x) { return ctx->sections(x).as_set; };
  p.points.on_map = [ctx](const PresheafMap& h) {
    const SectionsData& sx = ctx->sections(h.dom());
    const SectionsData& sy = ctx->sections(h.cod());
    std::vector<int> comp;
    for (const auto& tup : sx.tuples) {
      std::vector<int> img(tup.size());
      for (size_t o = 0; o < tup.size(); ++o) img[o] = h.at((int)o, tup[o]);
      auto it = sy.index_of.find(img);
      if (it == sy.index_of.end())
        throw ValidationError("points: image of a section is not a section");
      comp.push_back(it->second);
    }
    return PresheafMap(sx.as_set, sy.as_set, {comp});
  };

  Functor pieces;
  pieces.dom = p.source;
  pieces.cod = p.target;
  pieces.on_obj = [ctx](const Presheaf& x) {
    auto comps = element_components(x);
    std::vector<std::string> names;
    for (const auto& block : comps) {
      auto [o, i] = block.front();
      names.push_back(ctx->site->object_name(o) + ":" + x.elem_name(o, i));
    }
    std::vector<int> id(names.size());
    std::iota(id.begin(), id.end(), 0);
    return Presheaf(ctx->point, {names}, {id});
  };
  pieces.on_map = [ctx, pieces_obj = pieces.on_obj](const PresheafMap& h) {
    auto cx = element_components(h.dom());
    auto cy = element_components(h.cod());
    std::vector<int> comp(cx.size());
    for (int k = 0; k < (int)cx.size(); ++k) {
      auto [o, i] = cx[k].front();
      comp[k] = component_index(cy, o, h.at(o, i));
    }
    return PresheafMap(pieces_obj(h.dom()), pieces_obj(h.cod()), {comp});
  };
  p.pieces = pieces;

  auto discrete_obj = p.discrete.on_obj;
  auto pieces_obj = pieces.on_obj;

  p.unit_points = [ctx, discrete_obj](const Presheaf& a) {
    Presheaf da = discrete_obj(a);
    const SectionsData& sd = ctx->sections(da);
    std::vector<int> comp(a.size(0));
    for (int i = 0; i < a.size(0); ++i) {
      std::vector<int> tup(ctx->site->num_objects(), i);
      auto it = sd.index_of.find(tup);
      if (it == sd.index_of.end()) throw ValidationError("unit: constant tuple is not a section");
      comp[i] = it->second;
    }
    return PresheafMap(a, sd.as_set, {comp});
  };
  p.counit_points = [ctx, discrete_obj](const Presheaf& x) {
    const SectionsData& sd = ctx->sections(x);
    Presheaf dom = discrete_obj(sd.as_set);
    std::vector<std::vector<int>> comp(ctx->site->num_objects());
    for (int o = 0; o < ctx->site->num_objects(); ++o) {
      comp[o].resize(sd.tuples.size());
      for (int s = 0; s < (int)sd.tuples.size(); ++s) comp[o][s] = sd.tuples[s][o];
    }
    return PresheafMap(std::move(dom), x, std::move(comp));
  };
  p.unit_pieces = [ctx, discrete_obj, pieces_obj](const Presheaf& x) {
    auto comps = element_components(x);
    Presheaf codom = discrete_obj(pieces_obj(x));
    std::vector<std::vector<int>> comp(ctx->site->num_objects());
    for (int o = 0; o < ctx->site->num_objects(); ++o) {
      comp[o].resize(x.size(o));
      for (int i = 0; i < x.size(o); ++i) comp[o][i] = component_index(comps, o, i);
    }
    return PresheafMap(x, std::move(codom), std::move(comp));
  };
  p.counit_pieces = [discrete_obj, pieces_obj](const Presheaf& a) {
    Presheaf da = discrete_obj(a);
    auto comps = element_components(da);
    std::vector<int> comp(comps.size());
    for (int k = 0; k < (int)comps.size(); ++k) comp[k] = comps[k].front().second;
    return PresheafMap(pieces_obj(da), a, {comp});
  };

  install_codiscrete(p, bound, lim);
  return p;
}

// ---------------------------------------------------------------------------
// generic codiscrete construction, forced by adjointness:
// p^! A at c = Hom_target(p_*(y c), A)

namespace {

struct CodiscreteCtx {
  std::shared_ptr<const FinCategory> site;
  std::vector<Presheaf> rep_core;         // p_*(y c) per site object
  std::vector<PresheafMap> rep_core_map;  // p_*(y f) per site morphism
  std::function<Presheaf(const Presheaf&)> points_obj;
  std::function<PresheafMap(const PresheafMap&)> points_map;
  mutable std::map<std::string, std::vector<PresheafMap>> hom_cache;

  const std::vector<PresheafMap>& homs(const Presheaf& from, const Presheaf& to) const {
    std::string key = from.serialize() + "=>" + to.serialize();
    auto it = hom_cache.find(key);
    if (it == hom_cache.end()) it = hom_cache.emplace(key, hom_enumerate(from, to)).first;
    return it->second;
  }

  Presheaf on_obj(const Presheaf& a) const {
    const FinCategory& cc = *site;
    std::vector<std::vector<std::string>> elems(cc.num_objects());
    for (int o = 0; o < cc.num_objects(); ++o) {
      size_t n = homs(rep_core[o], a).size();
      for (size_t i = 0; i < n; ++i) elems[o].push_back("h" + std::to_string(i));
    }
    std::vector<std::vector<int>> action(cc.num_morphisms());
    for (int f = 0; f < cc.num_morphisms(); ++f) {
      int t = cc.tgt(f), s = cc.src(f);
      const auto& ht = homs(rep_core[t], a);
      const auto& hs = homs(rep_core[s], a);
      action[f].resize(ht.size());
      for (size_t i = 0; i < ht.size(); ++i) {
        PresheafMap moved = compose(ht[i], rep_core_map[f]);
        int found = -1;
        for (size_t k = 0; k < hs.size(); ++k)
          if (hs[k] == moved) found = (int)k;
        if (found < 0) throw ValidationError("codiscrete: restricted map not found");
        action[f][i] = found;
      }
    }
    return Presheaf(site, std::move(elems), std::move(action));
  }

  PresheafMap on_map(const PresheafMap& g) const {
    const FinCategory& cc = *site;
    Presheaf da = on_obj(g.dom()), db = on_obj(g.cod());
    std::vector<std::vector<int>> comp(cc.num_objects());
    for (int o = 0; o < cc.num_objects(); ++o) {
      const auto& ha = homs(rep_core[o], g.dom());
      const auto& hb = homs(rep_core[o], g.cod());
      comp[o].resize(ha.size());
      for (size_t i = 0; i < ha.size(); ++i) {
        PresheafMap moved = compose(g, ha[i]);
        int found = -1;
        for (size_t k = 0; k < hb.size(); ++k)
          if (hb[k] == moved) found = (int)k;
        if (found < 0) throw ValidationError("codiscrete: pushed map not found");
        comp[o][i] = found;
      }
    }
    return PresheafMap(std::move(da), std::move(db), std::move(comp));
  }

  // transpose Hom_S(p_* X, A) -> Hom_E(X, p^! A)
  PresheafMap transpose(const PresheafMap& phi, const Presheaf& x) const {
    const FinCategory& cc = *site;
    Presheaf codisc = on_obj(phi.cod());
    std::vector<std::vector<int>> comp(cc.num_objects());
    for (int o = 0; o < cc.num_objects(); ++o) {
      const auto& hs = homs(rep_core[o], phi.cod());
      comp[o].resize(x.size(o));
      for (int i = 0; i < x.size(o); ++i) {
        PresheafMap along = points_map(yoneda_element(x, o, i));
        PresheafMap cand = compose(phi, along);
        int found = -1;
        for (size_t k = 0; k < hs.size(); ++k)
          if (hs[k] == cand) found = (int)k;
        if (found < 0) throw ValidationError("codiscrete transpose: map not found");
        comp[o][i] = found;
      }
    }
    return PresheafMap(x, std::move(codisc), std::move(comp));
  }
};

void install_codiscrete(GeomMorphism& p, int bound, const EnumLimits& lim) {
  auto site = p.source->site_ptr();
  const FinCategory& c = *site;
  auto ctx = std::make_shared<CodiscreteCtx>();
  ctx->site = site;
  ctx->points_obj = p.points.on_obj;
  ctx->points_map = p.points.on_map;
  for (int o = 0; o < c.num_objects(); ++o)
    ctx->rep_core.push_back(p.points.on_obj(yoneda(site, o)));
  for (int m = 0; m < c.num_morphisms(); ++m)
    ctx->rep_core_map.push_back(p.points.on_map(yoneda_map(site, m)));

  // verify the adjunction on all objects at the bound
  for (const Presheaf& x : p.source->objects(bound)) {
    Presheaf px = p.points.on_obj(x);
    for (const Presheaf& a : p.target->objects(bound)) {
      std::vector<PresheafMap> outer = hom_enumerate(px, a, lim);
      std::vector<PresheafMap> inner = hom_enumerate(x, ctx->on_obj(a), lim);
      std::set<std::string> images;
      for (const PresheafMap& phi : outer) images.insert(ctx->transpose(phi, x).serialize());
      if (images.size() != outer.size() || images.size() != inner.size()) {
        p.codiscrete_failure = "adjunction refuted at X=" + x.serialize() + " A=" + a.serialize() +
                               ": " + std::to_string(outer.size()) + " maps p_*X -> A vs " +
                               std::to_string(inner.size()) + " maps X -> p^!A";
        return;
      }
    }
  }

  Functor codisc;
  codisc.dom = p.target;
  codisc.cod = p.source;
  codisc.on_obj = [ctx](const Presheaf& a) { return ctx->on_obj(a); };
  codisc.on_map = [ctx](const PresheafMap& g) { return ctx->on_map(g); };
  p.codiscrete = codisc;
  auto points_obj = p.points.on_obj;
  p.unit_codiscrete = [ctx, points_obj](const Presheaf& x) {
    return ctx->transpose(PresheafMap::identity(points_obj(x)), x);
  };
  p.counit_codiscrete = [ctx, points_obj](const Presheaf& a) {
    Presheaf pa = ctx->on_obj(a);
    Presheaf ppa = points_obj(pa);
    PresheafMap want = PresheafMap::identity(pa);
    for (const PresheafMap& phi : hom_enumerate(ppa, a))
      if (ctx->transpose(phi, pa) == want) return phi;
    throw ValidationError("codiscrete counit: no transpose-inverse of the identity");
  };
}

}  // namespace

// ---------------------------------------------------------------------------
// the coreflection morphism E -> Dec(E)

DecMorphismOutcome from_dec_coreflection(std::shared_ptr<const FinCategory> site, int bound,
                                         const EnumLimits& lim) {
  DecMorphismOutcome out;
  auto source = Topos::presheaves_on(site, "PSh");

  for (const Presheaf& x : source->objects(bound)) {
    CoreflectionOutcome c = dec_coreflection(x, bound, lim);
    if (c.status != CoreflectionOutcome::Status::ok) {
      out.failure = "no right adjoint up to bound: " + c.witness;
      return out;
    }
  }

  GeomMorphism p;
  p.source = source;
  std::vector<Presheaf> dec = dec_objects(site, bound, lim);
  p.target = Topos::subcategory_of(site, dec, "Dec", [lim](const Presheaf& x) {
    return is_decidable(x, lim).decidable;
  });

  p.discrete.dom = p.target;
  p.discrete.cod = p.source;
  p.discrete.on_obj = [](const Presheaf& a) { return a; };
  p.discrete.on_map = [](const PresheafMap& g) { return g; };

  auto core_of = [lim](const Presheaf& x) {
    std::string w;
    auto c = largest_decidable_subobject(x, &w, lim);
    if (!c) throw ValidationError("coreflection missing: " + w);
    return *c;
  };
  p.points.dom = p.source;
  p.points.cod = p.target;
  p.points.on_obj = [core_of](const Presheaf& x) { return core_of(x).domain(); };
  p.points.on_map = [core_of](const PresheafMap& h) {
    Subobject cu = core_of(h.dom()), cv = core_of(h.cod());
    Presheaf du = cu.domain(), dv = cv.domain();
    const FinCategory& c = h.dom().site();
    std::vector<std::vector<int>> comp(c.num_objects());
    for (int o = 0; o < c.num_objects(); ++o) {
      comp[o].resize(du.size(o));
      for (int i = 0; i < du.size(o); ++i) {
        int amb = h.dom().elem_index(o, du.elem_name(o, i));
        int img = h.at(o, amb);
        int in_dv = dv.elem_index(o, h.cod().elem_name(o, img));
        if (in_dv < 0)
          throw ValidationError("coreflection is not functorial: image of " + du.elem_name(o, i) +
                                " leaves the decidable core");
        comp[o][i] = in_dv;
      }
    }
    return PresheafMap(std::move(du), std::move(dv), std::move(comp));
  };

  auto points_obj = p.points.on_obj;
  p.unit_points = [points_obj](const Presheaf& a) {
    Presheaf ca = points_obj(a);
    if (!(ca == a)) throw ValidationError("coreflection of a decidable object is not itself");
    return PresheafMap::identity(a);
  };
  p.counit_points = [core_of](const Presheaf& x) { return core_of(x).inclusion(); };

  // classifier of the bounded Dec: the decidable core of Omega with the
  // corestricted truth point
  const OmegaData& od = source->omega();
  Presheaf w = p.points.on_obj(od.omega);
  const FinCategory& c = *site;
  std::vector<std::vector<int>> ptcomp(c.num_objects());
  std::vector<std::vector<char>> zmask(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o) {
    int tix = w.elem_index(o, od.omega.elem_name(o, od.truth.at(o, 0)));
    int fix = w.elem_index(o, od.omega.elem_name(o, od.falsity.at(o, 0)));
    if (tix < 0 || fix < 0) {
      out.failure = "the truth or zero point is not in the decidable part of Omega";
      return out;
    }
    ptcomp[o] = {tix};
    zmask[o].assign(w.size(o), 0);
    zmask[o][fix] = 1;
  }
  PresheafMap w_point(terminal_presheaf(site), w, std::move(ptcomp));
  Subobject zero_sub(w, std::move(zmask));
  std::vector<std::vector<int>> zcomp(c.num_objects());
  for (int o = 0; o < c.num_objects(); ++o)
    for (int i = 0; i < w.size(o); ++i)
      if (zero_sub.contains(o, i)) zcomp[o] = {i};
  PresheafMap w_zero(terminal_presheaf(site), w, std::move(zcomp));
  p.target->install_classifier({w, w_point, PresheafMap::identity(w), w_zero});
  PresheafMap w_neg = p.target->classify_sub(zero_sub);
  p.target->install_classifier({w, w_point, w_neg, w_zero});

  install_codiscrete(p, bound, lim);
  out.morphism = std::move(p);
  return out;
}

// ---------------------------------------------------------------------------
// bounded reflection search into a subcategory target

bool install_subcategory_pieces(GeomMorphism& q, int bound, std::string* witness,
                                const EnumLimits& lim) {
  auto targets = q.target->objects(bound);

  struct Reflection {
    Presheaf to;
    PresheafMap unit;
  };
  auto cache = std::make_shared<std::map<std::string, Reflection>>();
  auto lim_copy = lim;
  auto targets_copy = targets;

  auto reflect = [cache, targets_copy, lim_copy](const Presheaf& x) -> const Reflection& {
    std::string key = x.serialize();
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    for (const Presheaf& d : targets_copy) {
      for (const PresheafMap& e : hom_enumerate(x, d, lim_copy)) {
        if (!e.epic()) continue;
        bool universal = true;
        for (const Presheaf& d2 : targets_copy) {
          for (const PresheafMap& g : hom_enumerate(x, d2, lim_copy)) {
            int factorizations = 0;
            for (const PresheafMap& h : hom_enumerate(d, d2, lim_copy))
              if (compose(h, e) == g) ++factorizations;
            if (factorizations != 1) universal = false;
          }
          if (!universal) break;
        }
        if (universal) return cache->emplace(key, Reflection{d, e}).first->second;
      }
    }
    throw BoundError("no verified reflection of " + x.serialize() + " at the bound");
  };

  // precompute on the bounded corpus so failures surface here
  try {
    for (const Presheaf& x : q.source->objects(bound)) reflect(x);
  } catch (const BoundError& e) {
    if (witness) *witness = e.what();
    return false;
  }

  Functor pieces;
  pieces.dom = q.source;
  pieces.cod = q.target;
  pieces.on_obj = [reflect](const Presheaf& x) { return reflect(x).to; };
  pieces.on_map = [reflect, lim_copy](const PresheafMap& h) {
    const Reflection& rx = reflect(h.dom());
    const Reflection& ry = reflect(h.cod());
    auto m = unique_factor(rx.to, ry.to, rx.unit, compose(ry.unit, h), lim_copy);
    if (!m) throw ValidationError("reflection is not functorial");
    return *m;
  };
  q.pieces = pieces;
  q.unit_pieces = [reflect](const Presheaf& x) { return reflect(x).unit; };
  q.counit_pieces = [reflect, lim_copy](const Presheaf& a) {
    const Reflection& ra = reflect(a);
    auto m = unique_factor(ra.to, a, ra.unit, PresheafMap::identity(a), lim_copy);
    if (!m) throw ValidationError("reflection counit missing at a subcategory object");
    return *m;
  };
  return true;
}

// ---------------------------------------------------------------------------
// functor-level checks

Flag preserves_terminal(const Functor& f) {
  Flag r;
  Presheaf img = f.on_obj(f.dom->terminal());
  r.value = Tri::yes;
  for (int o = 0; o < img.site().num_objects(); ++o)
    if (img.size(o) != 1) r.value = Tri::no;
  if (r.value == Tri::no) r.witness = "image of 1 is " + img.serialize();
  return r;
}

Flag preserves_binary_products(const Functor& f, int bound, const EnumLimits& lim) {
  Flag r;
  r.value = Tri::yes;
  auto objs = f.dom->objects(bound);
  for (const Presheaf& x : objs) {
    for (const Presheaf& y : objs) {
      LimitResult src_prod = product(x, y);
      LimitResult tgt_prod = product(f.on_obj(x), f.on_obj(y));
      PresheafMap cmp = tgt_prod.mediate({f.on_obj(src_prod.apex),
                                          {f.on_map(src_prod.projections[0]),
                                           f.on_map(src_prod.projections[1])}});
      if (!cmp.is_iso()) {
        r.value = Tri::no;
        r.witness =
            "comparison F(XxY) -> FX x FY not iso at X=" + x.serialize() + " Y=" + y.serialize();
        return r;
      }
    }
  }
  return r;
}

Flag preserves_binary_coproducts(const Functor& f, int bound, const EnumLimits& lim) {
  Flag r;
  r.value = Tri::yes;
  auto objs = f.dom->objects(bound);
  for (const Presheaf& x : objs) {
    for (const Presheaf& y : objs) {
      ColimitResult src_cop = coproduct(x, y);
      ColimitResult tgt_cop = coproduct(f.on_obj(x), f.on_obj(y));
      PresheafMap cmp = tgt_cop.mediate({f.on_obj(src_cop.apex),
                                         {f.on_map(src_cop.injections[0]),
                                          f.on_map(src_cop.injections[1])}});
      if (!cmp.is_iso()) {
        r.value = Tri::no;
        r.witness =
            "comparison FX + FY -> F(X+Y) not iso at X=" + x.serialize() + " Y=" + y.serialize();
        return r;
      }
    }
  }
  return r;
}

Flag reflects_initial(const Functor& f, int bound, const EnumLimits& lim) {
  Flag r;
  r.value = Tri::yes;
  for (const Presheaf& x : f.dom->objects(bound)) {
    if (f.on_obj(x).total_size() == 0 && x.total_size() != 0) {
      r.value = Tri::no;
      r.witness = "F collapses a nonzero object to 0: " + x.serialize();
      return r;
    }
  }
  return r;
}

Flag fully_faithful(const Functor& f, int bound, const EnumLimits& lim) {
  Flag r;
  r.value = Tri::yes;
  auto objs = f.dom->objects(bound);
  for (const Presheaf& a : objs) {
    for (const Presheaf& b : objs) {
      auto before = hom_enumerate(a, b, lim);
      auto after = hom_enumerate(f.on_obj(a), f.on_obj(b), lim);
      std::set<std::string> images;
      for (const PresheafMap& h : before) images.insert(f.on_map(h).serialize());
      if (images.size() != before.size() || images.size() != after.size()) {
        r.value = Tri::no;
        r.witness = "hom(" + a.serialize() + "," + b.serialize() + "): " +
                    std::to_string(before.size()) + " maps vs " + std::to_string(after.size()) +
                    " in the image";
        return r;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// flags and comparisons

OmegaComparison omega_comparison(const GeomMorphism& p) {
  OmegaComparison oc;
  const OmegaData& od = p.source->omega();
  PresheafMap ptop = p.points.on_map(od.truth);  // p_* 1 -> p_* Omega
  Subobject im = image(ptop);

  if (p.target->kind() == Topos::Kind::presheaves) {
    oc.tau = p.target->classify_sub(im);
    oc.iso = oc.tau.is_iso();
    Subobject back = pullback_truth(oc.tau, p.target->omega());
    if (!(back == im)) {
      oc.iso = false;
      oc.witness = "tau does not classify the image of p_* top";
    } else if (!oc.iso) {
      oc.witness = "tau not iso: p_* Omega has " + std::to_string(oc.tau.dom().total_size()) +
                   " elements vs " + std::to_string(oc.tau.cod().total_size()) +
                   " in the target classifier";
    }
    return oc;
  }

  // subcategory target: tau is the identity on the installed classifier and
  // being iso means the classifier property holds at the bound
  const Topos::Classifier& cl = p.target->classifier();
  if (!(p.points.on_obj(od.omega) == cl.object)) {
    oc.iso = false;
    oc.witness = "p_* Omega differs from the installed classifier";
    oc.tau = PresheafMap::identity(cl.object);
    return oc;
  }
  oc.tau = PresheafMap::identity(cl.object);
  oc.iso = true;
  for (const Presheaf& d : p.target->objects(std::numeric_limits<int>::max())) {
    auto subs = subobjects_of(d);
    std::set<std::string> chis;
    for (const Subobject& u : subs) {
      PresheafMap chi;
      try {
        chi = p.target->classify_sub(u);
      } catch (const ValidationError& e) {
        oc.iso = false;
        oc.witness = e.what();
        return oc;
      }
      std::vector<std::vector<char>> mask(d.site().num_objects());
      for (int o = 0; o < d.site().num_objects(); ++o) {
        mask[o].assign(d.size(o), 0);
        for (int i = 0; i < d.size(o); ++i) mask[o][i] = (chi.at(o, i) == cl.point.at(o, 0));
      }
      if (!(Subobject(d, mask) == u)) {
        oc.iso = false;
        oc.witness = "classifier fails to recover " + u.describe();
        return oc;
      }
      chis.insert(chi.serialize());
    }
    size_t maps = hom_enumerate(d, cl.object).size();
    if (chis.size() != subs.size() || maps != subs.size()) {
      oc.iso = false;
      oc.witness = "Sub(" + d.serialize() + ") has " + std::to_string(subs.size()) +
                   " elements vs " + std::to_string(maps) + " maps into the classifier";
      return oc;
    }
  }
  return oc;
}

PresheafMap points_to_pieces(const GeomMorphism& p, const Presheaf& x) {
  if (!p.has_pieces()) throw ValidationError("points_to_pieces needs an essential morphism");
  Presheaf px = p.points.on_obj(x);
  PresheafMap tau_at = p.counit_pieces(px);  // p_! p^* p_* X -> p_* X
  if (!tau_at.is_iso())
    throw ValidationError("points_to_pieces needs a connected morphism (pieces counit not iso)");
  PresheafMap beta = p.counit_points(x);  // p^* p_* X -> X
  return compose(p.pieces->on_map(beta), tau_at.inverse());
}

Flag nullstellensatz(const GeomMorphism& p, int bound, const EnumLimits& lim) {
  Flag r;
  r.value = Tri::yes;
  for (const Presheaf& x : p.source->objects(bound)) {
    PresheafMap theta = points_to_pieces(p, x);
    if (!theta.epic()) {
      r.value = Tri::no;
      r.witness = "theta not epic at X=" + x.serialize() + " (points " +
                  std::to_string(theta.dom().total_size()) + ", pieces " +
                  std::to_string(theta.cod().total_size()) + ")";
      return r;
    }
  }
  return r;
}

bool direct_image_preserves_zero(const GeomMorphism& p) {
  return p.points.on_obj(p.source->initial()).total_size() == 0;
}

bool direct_image_reflects_zero(const GeomMorphism& p, int bound, std::string* witness,
                                const EnumLimits& lim) {
  for (const Presheaf& x : p.source->objects(bound)) {
    if (x.total_size() != 0 && p.points.on_obj(x).total_size() == 0) {
      if (witness) *witness = "nonzero object with zero points: " + x.serialize();
      return false;
    }
  }
  return true;
}

ShriekZeroReport shriek_preserves_zero(const GeomMorphism& p) {
  if (!p.has_codiscrete()) throw ValidationError("shriek_preserves_zero needs a local morphism");
  ShriekZeroReport r;
  Presheaf z = p.codiscrete->on_obj(p.target->initial());
  r.subterminal = subterminal(z);
  r.initial = (z.total_size() == 0);
  return r;
}

namespace {

bool discrete_subobject_closed(const GeomMorphism& p, int bound, std::string* witness,
                               const EnumLimits& lim) {
  for (const Presheaf& a : p.target->objects(bound)) {
    Presheaf da = p.discrete.on_obj(a);
    auto target_subs = subobjects_of(a, lim);
    for (const Subobject& u : subobjects_of(da, lim)) {
      bool found = false;
      for (const Subobject& v : target_subs)
        if (image(p.discrete.on_map(v.inclusion())) == u) found = true;
      if (!found) {
        if (witness)
          *witness = "subobject " + u.describe() + " of the discrete of " + a.serialize() +
                     " is not discrete";
        return false;
      }
    }
  }
  return true;
}

bool adjunction_pieces_verified(const GeomMorphism& p, int bound, std::string* witness,
                                const EnumLimits& lim) {
  for (const Presheaf& x : p.source->objects(bound)) {
    Presheaf px = p.pieces->on_obj(x);
    for (const Presheaf& a : p.target->objects(bound)) {
      auto outer = hom_enumerate(px, a, lim);
      auto inner = hom_enumerate(x, p.discrete.on_obj(a), lim);
      std::set<std::string> images;
      for (const PresheafMap& g : outer)
        images.insert(compose(p.discrete.on_map(g), p.unit_pieces(x)).serialize());
      if (images.size() != outer.size() || images.size() != inner.size()) {
        if (witness)
          *witness = "pieces adjunction fails at X=" + x.serialize() + " A=" + a.serialize();
        return false;
      }
      for (const PresheafMap& h : inner) {
        PresheafMap back = compose(p.counit_pieces(a), p.pieces->on_map(h));
        if (compose(p.discrete.on_map(back), p.unit_pieces(x)) != h) {
          if (witness)
            *witness = "pieces transposes are not mutually inverse at X=" + x.serialize();
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

MorphismFlags classify_morphism(const GeomMorphism& p, int bound, const EnumLimits& lim) {
  MorphismFlags fl;
  fl.bound = bound;

  auto guard = [](Flag& into, auto&& fn) {
    try {
      fn();
    } catch (const BoundError& e) {
      into.value = Tri::unknown;
      into.witness = e.what();
    }
  };

  guard(fl.connected, [&] { fl.connected = fully_faithful(p.discrete, bound, lim); });

  guard(fl.hyperconnected, [&] {
    std::string w;
    bool beta_monic = true;
    for (const Presheaf& x : p.source->objects(bound))
      if (!p.counit_points(x).monic()) {
        beta_monic = false;
        w = "counit not monic at X=" + x.serialize();
        break;
      }
    bool closed = beta_monic && discrete_subobject_closed(p, bound, &w, lim);
    OmegaComparison oc = omega_comparison(p);
    bool via_parts = (fl.connected.value == Tri::yes) && beta_monic && closed;
    if (via_parts != oc.iso) {
      fl.hyperconnected.value = Tri::unknown;
      fl.hyperconnected.witness = "criterion mismatch: counit/subobject route says " +
                                  std::string(via_parts ? "yes" : "no") +
                                  " but the Omega comparison says " + (oc.iso ? "yes" : "no") +
                                  " (" + oc.witness + ")";
    } else {
      fl.hyperconnected.value = via_parts ? Tri::yes : Tri::no;
      fl.hyperconnected.witness = via_parts ? "" : (w.empty() ? oc.witness : w);
    }
  });

  guard(fl.essential, [&] {
    if (!p.has_pieces()) {
      fl.essential.value = Tri::no;
      fl.essential.witness = "no pieces functor";
      return;
    }
    std::string w;
    bool ok = adjunction_pieces_verified(p, bound, &w, lim);
    fl.essential.value = ok ? Tri::yes : Tri::no;
    fl.essential.witness = w;
  });

  guard(fl.pressential, [&] {
    if (fl.essential.value != Tri::yes) {
      fl.pressential.value = fl.essential.value;
      fl.pressential.witness = "not essential";
      return;
    }
    Flag t = preserves_terminal(*p.pieces);
    Flag pr = preserves_binary_products(*p.pieces, bound, lim);
    if (t.value == Tri::yes && pr.value == Tri::yes) {
      fl.pressential.value = Tri::yes;
    } else {
      fl.pressential.value = Tri::no;
      fl.pressential.witness = t.value != Tri::yes ? t.witness : pr.witness;
    }
  });

  guard(fl.local, [&] {
    if (!p.has_codiscrete()) {
      fl.local.value = Tri::no;
      fl.local.witness =
          p.codiscrete_failure.empty() ? "no codiscrete functor" : p.codiscrete_failure;
      return;
    }
    Flag ff = fully_faithful(*p.codiscrete, bound, lim);
    fl.local.value = ff.value;
    fl.local.witness = ff.witness;
  });

  guard(fl.nullstellensatz, [&] {
    if (fl.connected.value != Tri::yes || fl.essential.value != Tri::yes) {
      fl.nullstellensatz.value = Tri::unknown;
      fl.nullstellensatz.witness = "needs a connected essential morphism";
      return;
    }
    fl.nullstellensatz = nullstellensatz(p, bound, lim);
  });

  guard(fl.stably_pressential, [&] {
    if (fl.pressential.value != Tri::yes) {
      fl.stably_pressential.value = fl.pressential.value;
      fl.stably_pressential.witness = "not pressential";
      return;
    }
    if (p.target->kind() != Topos::Kind::presheaves) {
      fl.stably_pressential.value = Tri::unknown;
      fl.stably_pressential.witness = "slicing is sampled over presheaf targets only";
      return;
    }
    for (const Presheaf& b : p.target->objects(2)) {
      if (b.total_size() > 2) continue;
      Flag f = slice_pieces_preserves_products(p, b, 2, 64, lim);
      if (f.value == Tri::no) {
        fl.stably_pressential = f;
        return;
      }
    }
    fl.stably_pressential.value = Tri::yes;
  });

  return fl;
}

// ---------------------------------------------------------------------------
// cartesian closedness of the inverse image

Flag cartesian_closed_check(const GeomMorphism& p, int bound, const EnumLimits& lim) {
  Flag r;
  r.value = Tri::yes;
  bool sets_target = p.target->kind() == Topos::Kind::presheaves;
  // for the canonical morphism the target site is the point; for the
  // subcategory targets the ambient site is shared with the source
  auto target_object_of = [&](int o) { return sets_target ? 0 : o; };

  auto objs = p.target->objects(bound);
  for (const Presheaf& a : objs) {
    for (const Presheaf& b : objs) {
      ExponentialResult ambient = exponential(a, b, lim);
      Presheaf exp_target;
      if (sets_target) {
        exp_target = ambient.exp;
      } else {
        // the subcategory exponential is the coreflection of the ambient
        // one, so the comparison (an inclusion) is iso exactly when the
        // ambient exponential already lies in the subcategory
        if (!p.target->contains(ambient.exp)) {
          r.value = Tri::no;
          r.witness = "exponential of A=" + a.serialize() + ", B=" + b.serialize() +
                      " leaves the subcategory";
          return r;
        }
        exp_target = ambient.exp;
        for (const Presheaf& z : objs) {
          size_t lhs = hom_enumerate(product(z, a).apex, b, lim).size();
          size_t rhs = hom_enumerate(z, exp_target, lim).size();
          if (lhs != rhs) {
            r.value = Tri::no;
            r.witness = "subcategory exponential fails at Z=" + z.serialize() +
                        " A=" + a.serialize() + " B=" + b.serialize();
            return r;
          }
        }
      }

      Presheaf da = p.discrete.on_obj(a);
      Presheaf db = p.discrete.on_obj(b);
      Presheaf dexp = p.discrete.on_obj(exp_target);
      ExponentialResult es = exponential(da, db, lim);
      LimitResult zx = product(dexp, da);

      // u : p^*(B^A) x p^*A -> p^*B evaluates through the target
      const FinCategory& csrc = p.source->site();
      std::vector<std::vector<int>> ucomp(csrc.num_objects());
      for (int o = 0; o < csrc.num_objects(); ++o) {
        int to = target_object_of(o);
        ucomp[o].resize(zx.apex.size(o));
        for (int i = 0; i < zx.apex.size(o); ++i) {
          int g = zx.tuples[o][i][0], xa = zx.tuples[o][i][1];
          int amb_g = sets_target
                          ? g
                          : ambient.exp.elem_index(to, exp_target.elem_name(to, g));
          int pair = ambient.prod.index_of[to].at({amb_g, xa});
          ucomp[o][i] = ambient.ev.at(to, pair);
        }
      }
      PresheafMap u(zx.apex, db, std::move(ucomp));
      PresheafMap cmp = curry(es, zx, u);
      if (!cmp.is_iso()) {
        r.value = Tri::no;
        r.witness = "comparison not iso at A=" + a.serialize() + " B=" + b.serialize();
        return r;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// slices

SliceObject SlicedMorphism::star(const SliceObject& a) const {
  return SliceObject{base->discrete.on_map(a.down)};
}

SliceObject SlicedMorphism::direct(const SliceObject& x) const {
  return SliceObject{compose(unit_inv, base->points.on_map(x.down))};
}

SliceObject SlicedMorphism::pieces_of(const SliceObject& x) const {
  return SliceObject{compose(pieces_counit, base->pieces->on_map(x.down))};
}

SlicedMorphism slice(const GeomMorphism& p, const Presheaf& b) {
  SlicedMorphism s{&p, b, p.discrete.on_obj(b), {}, {}};
  PresheafMap alpha = p.unit_points(b);
  if (!alpha.is_iso()) throw ValidationError("slice: not connected (unit at the base is not iso)");
  s.unit_inv = alpha.inverse();
  if (!p.has_pieces()) throw ValidationError("slice: pieces leg missing");
  s.pieces_counit = p.counit_pieces(b);
  return s;
}

std::vector<SliceObject> slice_objects(const ToposPtr& topos, const Presheaf& base, int bound,
                                       const EnumLimits& lim) {
  std::vector<SliceObject> out;
  for (const Presheaf& x : topos->objects(bound))
    for (const PresheafMap& h : hom_enumerate(x, base, lim)) out.push_back({h});
  return out;
}

std::vector<PresheafMap> slice_hom(const SliceObject& a, const SliceObject& b,
                                   const EnumLimits& lim) {
  std::vector<PresheafMap> out;
  for (const PresheafMap& h : hom_enumerate(a.down.dom(), b.down.dom(), lim))
    if (compose(b.down, h) == a.down) out.push_back(h);
  return out;
}

Flag slice_hyperconnected(const GeomMorphism& p, const Presheaf& b, int bound,
                          const EnumLimits& lim) {
  Flag r;
  SlicedMorphism s = slice(p, b);

  auto tgt_objs = slice_objects(p.target, b, bound, lim);
  for (const SliceObject& a1 : tgt_objs)
    for (const SliceObject& a2 : tgt_objs) {
      auto before = slice_hom(a1, a2, lim);
      auto after = slice_hom(s.star(a1), s.star(a2), lim);
      std::set<std::string> images;
      for (const PresheafMap& h : before) images.insert(p.discrete.on_map(h).serialize());
      if (images.size() != before.size() || images.size() != after.size()) {
        r.value = Tri::no;
        r.witness = "(p/B)^* not fully faithful at " + a1.down.serialize();
        return r;
      }
    }

  auto src_objs = slice_objects(p.source, s.pb, bound, lim);
  for (const SliceObject& x : src_objs) {
    PresheafMap beta = p.counit_points(x.down.dom());
    PresheafMap lhs = compose(x.down, beta);
    PresheafMap rhs = p.discrete.on_map(s.direct(x).down);
    if (lhs != rhs) {
      r.value = Tri::no;
      r.witness = "sliced counit square does not commute";
      return r;
    }
    if (!beta.monic()) {
      r.value = Tri::no;
      r.witness = "sliced counit not monic at " + x.down.dom().serialize();
      return r;
    }
  }

  std::string w;
  if (!discrete_subobject_closed(p, bound, &w, lim)) {
    r.value = Tri::no;
    r.witness = w;
    return r;
  }
  r.value = Tri::yes;
  return r;
}

/// Pairs in growing-square order: (0,0), (0,1), (1,0), (1,1), (0,2), ... so
/// that a bounded sample always contains the diagonal of a prefix.
std::vector<std::pair<int, int>> sample_pairs(int n, int max_pairs) {
  std::vector<std::pair<int, int>> out;
  for (int k = 0; k < n && (int)out.size() < max_pairs; ++k) {
    for (int i = 0; i <= k && (int)out.size() < max_pairs; ++i) {
      out.push_back({i, k});
      if (i != k && (int)out.size() < max_pairs) out.push_back({k, i});
    }
  }
  return out;
}

Flag slice_pieces_preserves_products(const GeomMorphism& p, const Presheaf& b, int bound,
                                     int max_pairs, const EnumLimits& lim) {
  Flag r;
  SlicedMorphism s = slice(p, b);
  auto objs = slice_objects(p.source, s.pb, bound, lim);
  bool sampled = (int)objs.size() * (int)objs.size() > max_pairs;
  {
    for (auto [xi, yi] : sample_pairs((int)objs.size(), max_pairs)) {
      const SliceObject& x = objs[xi];
      const SliceObject& y = objs[yi];
      LimitResult pbk = pullback(x.down, y.down);
      SliceObject prod{compose(x.down, pbk.projections[0])};
      SliceObject lhs = s.pieces_of(prod);
      SliceObject px = s.pieces_of(x), py = s.pieces_of(y);
      Diagram d;
      d.nodes = {px.down.dom(), py.down.dom(), b};
      d.edges.push_back({0, 2, px.down});
      d.edges.push_back({1, 2, py.down});
      LimitResult q = limit(d, b.site_ptr());
      PresheafMap cmp = q.mediate({lhs.down.dom(),
                                   {p.pieces->on_map(pbk.projections[0]),
                                    p.pieces->on_map(pbk.projections[1]), lhs.down}});
      if (!cmp.is_iso()) {
        r.value = Tri::no;
        r.witness = "(p/B)_! breaks the product of " + x.down.serialize() + " and " +
                    y.down.serialize();
        return r;
      }
    }
  }
  if (!s.pieces_counit.is_iso()) {
    r.value = Tri::no;
    r.witness = "(p/B)_! does not preserve the terminal object";
    return r;
  }
  r.value = Tri::yes;
  if (sampled) r.witness = "verified on a sample of " + std::to_string(max_pairs) + " pairs";
  return r;
}

Flag slice_adjunctions(const GeomMorphism& p, const Presheaf& b, int bound,
                       const EnumLimits& lim) {
  Flag r;
  SlicedMorphism s = slice(p, b);
  auto src_objs = slice_objects(p.source, s.pb, bound, lim);
  auto tgt_objs = slice_objects(p.target, b, bound, lim);
  for (const SliceObject& x : src_objs)
    for (const SliceObject& a : tgt_objs) {
      // (p/B)_! -| (p/B)^*
      auto outer = slice_hom(s.pieces_of(x), a, lim);
      auto inner = slice_hom(x, s.star(a), lim);
      std::set<std::string> images;
      for (const PresheafMap& g : outer)
        images.insert(compose(p.discrete.on_map(g), p.unit_pieces(x.down.dom())).serialize());
      if (images.size() != outer.size() || images.size() != inner.size()) {
        r.value = Tri::no;
        r.witness = "sliced pieces adjunction fails at " + x.down.serialize();
        return r;
      }
      // (p/B)^* -| (p/B)_*
      auto outer2 = slice_hom(s.star(a), x, lim);
      auto inner2 = slice_hom(a, s.direct(x), lim);
      std::set<std::string> images2;
      for (const PresheafMap& h : outer2)
        images2.insert(compose(p.points.on_map(h), p.unit_points(a.down.dom())).serialize());
      if (images2.size() != outer2.size() || images2.size() != inner2.size()) {
        r.value = Tri::no;
        r.witness = "sliced direct-image adjunction fails at " + a.down.serialize();
        return r;
      }
    }
  r.value = Tri::yes;
  return r;
}

// ---------------------------------------------------------------------------
// sheaf subtopos and UIAO

SheafSubtopos sheaf_subtopos(const ToposPtr& source, int bound, const EnumLimits& lim) {
  SheafSubtopos st;
  auto site = source->site_ptr();
  auto topology = std::make_shared<LTTopology>(source->negneg());

  auto cache = std::make_shared<std::map<std::string, Sheafification>>();
  auto sheafify_cached = [cache, topology, lim](const Presheaf& x) -> const Sheafification& {
    std::string key = x.serialize();
    auto it = cache->find(key);
    if (it == cache->end()) it = cache->emplace(key, sheafify(x, *topology, lim)).first;
    return it->second;
  };

  std::vector<Presheaf> objs;
  std::set<std::string> seen;
  for (const Presheaf& x : source->objects(bound)) {
    const Sheafification& sh = sheafify_cached(x);
    std::string key = canonical_form(sh.sheaf);
    if (seen.insert(key).second) objs.push_back(sh.sheaf);
  }
  st.sheaves = Topos::subcategory_of(site, objs, "Sh", [topology, lim](const Presheaf& x) {
    return sheaf_status(x, *topology, lim).sheaf;
  });

  st.include.dom = st.sheaves;
  st.include.cod = source;
  st.include.on_obj = [](const Presheaf& x) { return x; };
  st.include.on_map = [](const PresheafMap& h) { return h; };

  st.reflect.dom = source;
  st.reflect.cod = st.sheaves;
  st.reflect.on_obj = [sheafify_cached](const Presheaf& x) { return sheafify_cached(x).sheaf; };
  st.reflect.on_map = [sheafify_cached, lim](const PresheafMap& h) {
    const Sheafification& sx = sheafify_cached(h.dom());
    const Sheafification& sy = sheafify_cached(h.cod());
    auto m = unique_factor(sx.sheaf, sy.sheaf, sx.unit, compose(sy.unit, h), lim);
    if (!m) throw ValidationError("sheafification is not functorial on " + h.serialize());
    return *m;
  };
  st.unit = [sheafify_cached](const Presheaf& x) { return sheafify_cached(x).unit; };
  return st;
}

std::optional<PresheafMap> unique_factor(const Presheaf& from, const Presheaf& to,
                                         const PresheafMap& before, const PresheafMap& after,
                                         const EnumLimits& lim) {
  std::optional<PresheafMap> found;
  for (const PresheafMap& h : hom_enumerate(from, to, lim)) {
    if (compose(h, before) == after) {
      if (found) return std::nullopt;
      found = h;
    }
  }
  return found;
}

Subobject points_of_subobject(const GeomMorphism& p, const Subobject& u) {
  return image(p.points.on_map(u.inclusion()));
}

UiaoReport uiao_verify(std::shared_ptr<const FinCategory> site, int bound, const EnumLimits& lim) {
  UiaoReport rep;
  GeomMorphism p = canonical_to_sets(site, bound, lim);

  if (!p.has_codiscrete()) {
    std::string refl;
    direct_image_reflects_zero(p, bound, &refl, lim);
    rep.failure = "no codiscrete right adjoint: " + p.codiscrete_failure +
                  (refl.empty() ? "" : "; points does not reflect 0: " + refl);
    return rep;
  }

  auto sets = p.target->objects(bound);
  auto objs = p.source->objects(bound);

  for (const Presheaf& a : sets) {
    if (!p.unit_points(a).is_iso()) {
      rep.failure = "points . discrete not iso at " + a.serialize();
      return rep;
    }
    if (!p.counit_codiscrete(a).is_iso()) {
      rep.failure = "points . codiscrete not iso at " + a.serialize();
      return rep;
    }
  }
  if (fully_faithful(p.discrete, bound, lim).value != Tri::yes) {
    rep.failure = "discrete inclusion not fully faithful";
    return rep;
  }
  if (fully_faithful(*p.codiscrete, bound, lim).value != Tri::yes) {
    rep.failure = "codiscrete inclusion not fully faithful";
    return rep;
  }
  rep.details.push_back("sections discrete/codiscrete with common retraction points");

  for (const Presheaf& a : sets) {
    Presheaf da = p.discrete.on_obj(a);
    if (compose(p.counit_points(da), p.discrete.on_map(p.unit_points(a))) !=
        PresheafMap::identity(da)) {
      rep.failure = "triangle (discrete -| points) fails at the discrete leg, A=" + a.serialize();
      return rep;
    }
    Presheaf ca = p.codiscrete->on_obj(a);
    if (compose(p.codiscrete->on_map(p.counit_codiscrete(a)), p.unit_codiscrete(ca)) !=
        PresheafMap::identity(ca)) {
      rep.failure = "triangle (points -| codiscrete) fails at the codiscrete leg, A=" + a.serialize();
      return rep;
    }
  }
  for (const Presheaf& x : objs) {
    Presheaf px = p.points.on_obj(x);
    if (compose(p.points.on_map(p.counit_points(x)), p.unit_points(px)) !=
        PresheafMap::identity(px)) {
      rep.failure = "triangle (discrete -| points) fails at the points leg, X=" + x.serialize();
      return rep;
    }
    if (compose(p.counit_codiscrete(px), p.points.on_map(p.unit_codiscrete(x))) !=
        PresheafMap::identity(px)) {
      rep.failure = "triangle (points -| codiscrete) fails at the points leg, X=" + x.serialize();
      return rep;
    }
  }
  rep.details.push_back("all triangle identities exact on the bounded corpus");

  for (const Presheaf& a : sets)
    if (!is_decidable(p.discrete.on_obj(a), lim).decidable) {
      rep.failure = "discrete of " + a.serialize() + " is not decidable";
      return rep;
    }
  for (const Presheaf& d : dec_objects(site, bound, lim)) {
    bool hit = false;
    for (const Presheaf& a : sets)
      if (isomorphic(p.discrete.on_obj(a), d)) hit = true;
    if (!hit) {
      rep.failure = "decidable object not in the discrete image: " + d.serialize();
      return rep;
    }
  }
  rep.details.push_back("discrete image = decidable objects at the bound");

  const LTTopology& top = p.source->negneg();
  for (const Presheaf& a : sets) {
    if (!sheaf_status(p.codiscrete->on_obj(a), top, lim).sheaf) {
      rep.failure = "codiscrete of " + a.serialize() + " is not a sheaf";
      return rep;
    }
  }
  for (const Presheaf& x : objs) {
    Presheaf shx = sheafify(x, top, lim).sheaf;
    if (!p.unit_codiscrete(shx).is_iso()) {
      rep.failure = "sheaf " + shx.serialize() + " is not codiscrete";
      return rep;
    }
  }
  rep.details.push_back("codiscrete image = double-negation sheaves at the bound");

  DecMorphismOutcome dm = from_dec_coreflection(site, bound, lim);
  if (!dm.morphism) {
    rep.failure = "no decidable coreflection: " + dm.failure;
    return rep;
  }
  const GeomMorphism& q = *dm.morphism;
  SheafSubtopos f = sheaf_subtopos(p.source, bound, lim);
  for (const Presheaf& d : q.target->objects(bound)) {
    PresheafMap unit = compose(q.points.on_map(f.unit(d)), q.unit_points(d));
    if (!unit.is_iso()) {
      rep.failure = "composite unit not iso at decidable " + d.serialize();
      return rep;
    }
  }
  for (const Presheaf& sh : f.sheaves->objects(bound)) {
    PresheafMap step = f.reflect.on_map(q.counit_points(sh));  // sh(C F) -> sh(F)
    PresheafMap eps = f.unit(sh);                              // F -> sh(F), iso on sheaves
    if (!eps.is_iso()) {
      rep.failure = "sheafification unit not iso on a sheaf";
      return rep;
    }
    PresheafMap counit = compose(eps.inverse(), step);
    if (!counit.is_iso()) {
      rep.failure = "composite counit not iso at sheaf " + sh.serialize();
      return rep;
    }
  }
  rep.details.push_back("Dec(E) ~ E_negneg via the composite adjoint equivalence");

  rep.ok = true;
  return rep;
}

}  // namespace toposlab
