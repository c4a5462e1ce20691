#include "toposlab/theorems.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace toposlab {

std::string to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::pass: return "pass";
    case VerdictStatus::fail: return "fail";
    case VerdictStatus::vacuous: return "vacuous";
    case VerdictStatus::unknown: return "unknown-at-bound";
  }
  return "?";
}

nlohmann::json Verdict::to_json() const {
  return {{"id", id},       {"topos", topos},   {"status", to_string(status)},
          {"witness", witness}, {"bound", bound}, {"millis", millis}};
}

const std::vector<StatementCheck>& list_statements() {
  static const std::vector<StatementCheck> inventory = {
      {"slice-hyperconnected", "hyperconnected morphisms are stable under slicing"},
      {"dec-coreflection-hyperconnected",
       "a decidable coreflection is the direct image of a hyperconnected morphism"},
      {"extensive-folk",
       "product/coproduct-preserving 0-reflecting functors reflect subterminality of decidables"},
      {"decidable-subterminal", "decidable objects with subterminal pieces are subterminal"},
      {"connected-iff-ccc",
       "a pressential morphism is connected iff its inverse image is cartesian closed"},
      {"unit-monic-on-decidables", "the pieces unit is monic on decidable objects"},
      {"decidable-eq-discrete",
       "decidable = discrete for stably pressential hyperconnected morphisms over a Boolean base"},
      {"uiao", "the points functor is a unity and identity of adjointly opposite subcategories"},
      {"stably-locc-equivalences", "equivalent formulations of stable local connectedness"},
      {"nullstellensatz-chain", "no points implies no pieces implies empty"},
      {"faithful-on-discrete", "the direct image is faithful on maps out of discrete objects"},
      {"shriek-zero", "the codiscrete functor preserves 0; the converse holds over a Boolean base"},
      {"composite-equivalence",
       "the coreflection and the sheaf reflection compose to an adjoint equivalence"},
      {"connected-implies-local",
       "iso unit/counit conditions force a right adjoint whose center is the sheaf subtopos"},
      {"tau-negation", "a hyperconnected direct image preserves Heyting complements"},
      {"dense-lemma", "subobjects with invertible points are double-negation dense"},
      {"local-characterization",
       "local iff points reflects 0 and discretes are separated, over a Boolean base"},
      {"mclarty-corollary", "the coreflection morphism is local iff its direct image reflects 0"},
  };
  return inventory;
}

const std::vector<CorpusTopos>& corpus() {
  static const std::vector<CorpusTopos> all = [] {
    std::vector<CorpusTopos> v;
    auto add = [&](const char* name, const char* site) {
      v.push_back({name, site, standard_site(site)});
    };
    add("sets", "terminal");
    add("graphs", "parallel_pair");
    add("rgraphs", "reflexive_graph");
    add("zmod2", "zmod2");
    add("zmod3", "zmod3");
    add("idem", "idem");
    add("rzero", "rzero");
    add("delta1", "delta1");
    return v;
  }();
  return all;
}

const CorpusTopos* corpus_lookup(const std::string& name) {
  for (const CorpusTopos& t : corpus())
    if (t.name == name || t.site_name == name) return &t;
  return nullptr;
}

Presheaf shrink_witness(const Presheaf& x, const std::function<bool(const Presheaf&)>& still_fails) {
  try {
    for (const Subobject& u : subobjects_of(x)) {  // ascending by size
      Presheaf candidate = u.domain();
      if (still_fails(candidate)) return candidate;
    }
  } catch (const BoundError&) {
  }
  return x;
}

// ---------------------------------------------------------------------------
// per-topos context with lazy morphism caches

namespace {

struct Ctx {
  const CorpusTopos& info;
  int bound;
  EnumLimits lim;

  std::optional<GeomMorphism> canonical_;
  std::optional<MorphismFlags> canonical_flags_;
  bool dec_built_ = false;
  DecMorphismOutcome dec_;
  std::optional<MorphismFlags> dec_flags_;
  bool dec_pieces_tried_ = false;
  std::string dec_pieces_failure_;
  std::optional<SheafSubtopos> sheaves_;

  Ctx(const CorpusTopos& t, int b, const EnumLimits& l) : info(t), bound(b), lim(l) {}

  const GeomMorphism& canonical() {
    if (!canonical_) canonical_ = canonical_to_sets(info.site, bound, lim);
    return *canonical_;
  }
  const MorphismFlags& canonical_flags() {
    if (!canonical_flags_) canonical_flags_ = classify_morphism(canonical(), bound, lim);
    return *canonical_flags_;
  }
  const DecMorphismOutcome& dec() {
    if (!dec_built_) {
      dec_ = from_dec_coreflection(info.site, bound, lim);
      dec_built_ = true;
    }
    return dec_;
  }
  GeomMorphism& dec_morphism() { return *const_cast<DecMorphismOutcome&>(dec()).morphism; }
  const MorphismFlags& dec_flags() {
    if (!dec_flags_) dec_flags_ = classify_morphism(*dec().morphism, bound, lim);
    return *dec_flags_;
  }
  bool dec_pieces() {
    if (!dec_pieces_tried_) {
      dec_pieces_tried_ = true;
      if (dec().morphism && !dec_morphism().has_pieces())
        install_subcategory_pieces(dec_morphism(), bound, &dec_pieces_failure_, lim);
      dec_flags_.reset();  // flags depend on the pieces leg
    }
    return dec().morphism && dec_morphism().has_pieces();
  }
  const SheafSubtopos& sheaves() {
    if (!sheaves_) sheaves_ = sheaf_subtopos(canonical().source, bound, lim);
    return *sheaves_;
  }
};

struct Outcome {
  VerdictStatus status = VerdictStatus::vacuous;
  std::string witness;
};

Outcome merge(const std::vector<Outcome>& parts) {
  Outcome out;
  std::vector<std::string> notes;
  bool any_pass = false, any_unknown = false;
  for (const Outcome& p : parts) {
    if (p.status == VerdictStatus::fail) return p;
    if (p.status == VerdictStatus::pass) any_pass = true;
    if (p.status == VerdictStatus::unknown) any_unknown = true;
    if (!p.witness.empty()) notes.push_back(p.witness);
  }
  out.status = any_pass ? VerdictStatus::pass
                        : (any_unknown ? VerdictStatus::unknown : VerdictStatus::vacuous);
  out.witness = join(notes, " | ");
  return out;
}

std::string flag_note(const char* name, const Flag& f) {
  std::string s = std::string(name) + "=" + (f.value == Tri::yes ? "yes" : f.value == Tri::no ? "no" : "?");
  if (!f.witness.empty() && f.value != Tri::yes) s += " (" + f.witness + ")";
  return s;
}

// negation of a subobject computed lattice-theoretically, independent of
// the pointwise formula: the join of all subobjects disjoint from u
Subobject pseudocomplement_by_enumeration(const Subobject& u, const EnumLimits& lim) {
  Subobject best = Subobject::empty_in(u.ambient());
  for (const Subobject& w : subobjects_of(u.ambient(), lim))
    if (sub_meet(w, u).is_empty()) best = sub_join(best, w);
  return best;
}

// ---------------------------------------------------------------------------
// the checks

Outcome check_slice_hyperconnected(Ctx& c) {
  const GeomMorphism& p = c.canonical();
  const MorphismFlags& fl = c.canonical_flags();
  if (fl.hyperconnected.value != Tri::yes)
    return {VerdictStatus::vacuous, "hypothesis hyperconnected fails: " + fl.hyperconnected.witness};
  for (const Presheaf& b : p.target->objects(2)) {
    if (b.total_size() > 2) continue;
    Flag f = slice_hyperconnected(p, b, 2, c.lim);
    if (f.value == Tri::no)
      return {VerdictStatus::fail, "slice over " + b.serialize() + ": " + f.witness};
    if (f.value == Tri::unknown) return {VerdictStatus::unknown, f.witness};
  }
  return {VerdictStatus::pass, "all slices over bases with at most 2 elements are hyperconnected"};
}

Outcome check_dec_coreflection_hyperconnected(Ctx& c) {
  if (!c.dec().morphism)
    return {VerdictStatus::vacuous, "no decidable coreflection at the bound: " + c.dec().failure};
  const MorphismFlags& fl = c.dec_flags();
  if (fl.hyperconnected.value == Tri::yes)
    return {VerdictStatus::pass,
            "coreflection direct image is hyperconnected (counit monic, classifier verified)"};
  if (fl.hyperconnected.value == Tri::no)
    return {VerdictStatus::fail, fl.hyperconnected.witness};
  return {VerdictStatus::unknown, fl.hyperconnected.witness};
}

Outcome check_extensive_folk(Ctx& c) {
  struct Candidate {
    std::string name;
    const Functor* f;
  };
  std::vector<Candidate> candidates;
  const GeomMorphism& p = c.canonical();
  candidates.push_back({"points", &p.points});
  if (p.has_pieces()) candidates.push_back({"pieces", &*p.pieces});
  if (c.dec().morphism) candidates.push_back({"dec-points", &c.dec().morphism->points});

  int qualified = 0;
  std::vector<std::string> notes;
  for (const Candidate& cand : candidates) {
    Flag t = preserves_terminal(*cand.f);
    Flag pr = preserves_binary_products(*cand.f, c.bound, c.lim);
    Flag cp = preserves_binary_coproducts(*cand.f, c.bound, c.lim);
    Flag rz = reflects_initial(*cand.f, c.bound, c.lim);
    bool products = t.value == Tri::yes && pr.value == Tri::yes;
    if (products && cp.value == Tri::yes && rz.value == Tri::yes) {
      ++qualified;
      for (const Presheaf& x : cand.f->dom->objects(c.bound)) {
        if (!is_decidable(x, c.lim).decidable) continue;
        if (subterminal(cand.f->on_obj(x)) && !subterminal(x)) {
          auto still = [&](const Presheaf& y) {
            return is_decidable(y, c.lim).decidable && subterminal(cand.f->on_obj(y)) &&
                   !subterminal(y);
          };
          return {VerdictStatus::fail,
                  cand.name + " violates the conclusion at X=" + shrink_witness(x, still).serialize()};
        }
      }
      notes.push_back(cand.name + ": hypotheses verified, conclusion holds");
    } else if (products && cp.value == Tri::yes && rz.value == Tri::no) {
      // necessity probe, reported separately from the pass
      for (const Presheaf& x : cand.f->dom->objects(c.bound)) {
        if (is_decidable(x, c.lim).decidable && subterminal(cand.f->on_obj(x)) && !subterminal(x)) {
          auto still = [&](const Presheaf& y) {
            return is_decidable(y, c.lim).decidable && subterminal(cand.f->on_obj(y)) &&
                   !subterminal(y);
          };
          notes.push_back("necessity probe: " + cand.name +
                          " preserves finite products and coproducts but fails to reflect 0, and "
                          "the conclusion fails at X=" +
                          shrink_witness(x, still).serialize());
          break;
        }
      }
    }
  }
  if (qualified == 0)
    return {VerdictStatus::vacuous, "no corpus functor satisfies all three hypotheses at the bound"};
  return {VerdictStatus::pass, join(notes, "; ")};
}

Outcome check_decidable_subterminal(Ctx& c) {
  const GeomMorphism& p = c.canonical();
  const MorphismFlags& fl = c.canonical_flags();
  if (fl.pressential.value != Tri::yes)
    return {VerdictStatus::vacuous, "hypothesis pressential fails: " + fl.pressential.witness};
  for (const Presheaf& x : p.source->objects(c.bound)) {
    if (!is_decidable(x, c.lim).decidable) continue;
    if (subterminal(p.pieces->on_obj(x)) && !subterminal(x)) {
      auto still = [&](const Presheaf& y) {
        return is_decidable(y, c.lim).decidable && subterminal(p.pieces->on_obj(y)) &&
               !subterminal(y);
      };
      return {VerdictStatus::fail, "X=" + shrink_witness(x, still).serialize()};
    }
  }
  return {VerdictStatus::pass, ""};
}

Outcome check_connected_iff_ccc(Ctx& c) {
  auto instance = [&](const GeomMorphism& p, const MorphismFlags& fl,
                      const std::string& tag) -> Outcome {
    if (fl.pressential.value != Tri::yes)
      return {VerdictStatus::vacuous, tag + ": hypothesis pressential fails"};
    Flag ccc = cartesian_closed_check(p, c.bound, c.lim);
    if (ccc.value == Tri::unknown || fl.connected.value == Tri::unknown)
      return {VerdictStatus::unknown, tag + ": " + ccc.witness};
    bool lhs = fl.connected.value == Tri::yes;
    bool rhs = ccc.value == Tri::yes;
    if (lhs != rhs)
      return {VerdictStatus::unknown,
              tag + ": bounded evidence disagrees (connected=" + (lhs ? "yes" : "no") +
                  ", cartesian closed=" + (rhs ? "yes" : "no") + "); enlarge the bound"};
    return {VerdictStatus::pass, tag + ": connected=ccc=" + (lhs ? "yes" : "no")};
  };
  std::vector<Outcome> parts;
  parts.push_back(instance(c.canonical(), c.canonical_flags(), "canonical"));
  if (c.dec().morphism && c.dec_pieces()) parts.push_back(instance(*c.dec().morphism, c.dec_flags(), "dec"));
  return merge(parts);
}

Outcome check_unit_monic_on_decidables(Ctx& c) {
  const GeomMorphism& p = c.canonical();
  const MorphismFlags& fl = c.canonical_flags();
  if (fl.stably_pressential.value != Tri::yes)
    return {VerdictStatus::vacuous,
            "hypothesis stably pressential fails: " + fl.stably_pressential.witness};
  for (const Presheaf& x : p.source->objects(c.bound)) {
    if (!is_decidable(x, c.lim).decidable) continue;
    if (!p.unit_pieces(x).monic())
      return {VerdictStatus::fail, "pieces unit not monic at decidable X=" + x.serialize()};
  }
  return {VerdictStatus::pass, ""};
}

Outcome check_decidable_eq_discrete(Ctx& c) {
  const GeomMorphism& p = c.canonical();
  const MorphismFlags& fl = c.canonical_flags();
  if (fl.stably_pressential.value != Tri::yes || fl.hyperconnected.value != Tri::yes)
    return {VerdictStatus::vacuous,
            "hypotheses fail: " + flag_note("stably-pressential", fl.stably_pressential) + ", " +
                flag_note("hyperconnected", fl.hyperconnected)};
  bool boolean = p.target->boolean();
  for (const Presheaf& x : p.source->objects(c.bound)) {
    bool dec = is_decidable(x, c.lim).decidable;
    bool discrete = p.counit_points(x).is_iso();
    if (dec && !discrete)
      return {VerdictStatus::fail, "decidable but not discrete: " + x.serialize()};
    if (boolean && discrete && !dec)
      return {VerdictStatus::fail, "discrete but not decidable over a Boolean base: " + x.serialize()};
  }
  return {VerdictStatus::pass, boolean ? "both directions verified (Boolean base)"
                                       : "forward direction verified (base not Boolean)"};
}

Outcome check_uiao(Ctx& c) {
  const MorphismFlags& fl = c.canonical_flags();
  bool boolean = c.canonical().target->boolean();
  auto hyp = [&]() -> std::string {
    std::vector<std::string> bad;
    if (!boolean) bad.push_back("base not Boolean");
    if (fl.local.value != Tri::yes) bad.push_back(flag_note("local", fl.local));
    if (fl.hyperconnected.value != Tri::yes) bad.push_back(flag_note("hyperconnected", fl.hyperconnected));
    if (fl.pressential.value != Tri::yes) bad.push_back(flag_note("pressential", fl.pressential));
    if (fl.stably_pressential.value != Tri::yes)
      bad.push_back(flag_note("stably-pressential", fl.stably_pressential));
    return join(bad, ", ");
  }();
  if (!hyp.empty())
    return {VerdictStatus::vacuous, "not stably pre-cohesive over a Boolean base: " + hyp};
  UiaoReport rep = uiao_verify(c.info.site, c.bound, c.lim);
  if (!rep.ok) return {VerdictStatus::fail, rep.failure};
  return {VerdictStatus::pass, join(rep.details, "; ")};
}

Outcome check_stably_locc(Ctx& c) {
  const GeomMorphism& p = c.canonical();
  const MorphismFlags& fl = c.canonical_flags();
  if (fl.connected.value != Tri::yes || fl.essential.value != Tri::yes)
    return {VerdictStatus::vacuous, "hypothesis connected essential fails"};

  // stable units: pieces sends pullbacks over discrete bases to pullbacks
  Tri stable_units = Tri::yes;
  std::string su_witness;
  for (const Presheaf& b : p.target->objects(2)) {
    if (b.total_size() > 2) continue;
    Presheaf pb = p.discrete.on_obj(b);
    auto objs = slice_objects(p.source, pb, c.bound, c.lim);
    for (auto [xi, yi] : sample_pairs((int)objs.size(), 48)) {
      const SliceObject& x = objs[xi];
      const SliceObject& y = objs[yi];
      {
        LimitResult pbk = pullback(x.down, y.down);
        Presheaf px = p.pieces->on_obj(x.down.dom());
        Presheaf py = p.pieces->on_obj(y.down.dom());
        Diagram d;
        d.nodes = {px, py, p.pieces->on_obj(pb)};
        d.edges.push_back({0, 2, p.pieces->on_map(x.down)});
        d.edges.push_back({1, 2, p.pieces->on_map(y.down)});
        LimitResult q = limit(d, px.site_ptr());
        PresheafMap cmp = q.mediate({p.pieces->on_obj(pbk.apex),
                                     {p.pieces->on_map(pbk.projections[0]),
                                      p.pieces->on_map(pbk.projections[1]),
                                      p.pieces->on_map(compose(x.down, pbk.projections[0]))}});
        if (!cmp.is_iso()) {
          stable_units = Tri::no;
          su_witness = "pullback of " + x.down.serialize() + ", " + y.down.serialize() +
                       " over " + b.serialize();
          break;
        }
      }
      if (stable_units == Tri::no) break;
    }
    if (stable_units == Tri::no) break;
  }

  // sliced pieces preserve finite products
  Tri sliced_products = Tri::yes;
  std::string sp_witness;
  for (const Presheaf& b : p.target->objects(2)) {
    if (b.total_size() > 2) continue;
    Flag f = slice_pieces_preserves_products(p, b, c.bound, 48, c.lim);
    if (f.value == Tri::no) {
      sliced_products = Tri::no;
      sp_witness = "over " + b.serialize() + ": " + f.witness;
      break;
    }
  }

  // connected and stably pressential, with all quantifiers at the same bound
  Tri stably = Tri::unknown;
  {
    Flag pr = preserves_binary_products(*p.pieces, c.bound, c.lim);
    Flag t = preserves_terminal(*p.pieces);
    if (pr.value != Tri::unknown && sliced_products != Tri::unknown)
      stably = (fl.connected.value == Tri::yes && pr.value == Tri::yes && t.value == Tri::yes &&
                sliced_products == Tri::yes)
                   ? Tri::yes
                   : Tri::no;
  }

  auto show = [](Tri t) { return t == Tri::yes ? "yes" : t == Tri::no ? "no" : "?"; };
  std::string values = std::string("stable-units=") + show(stable_units) +
                       ", sliced-products=" + show(sliced_products) +
                       ", stably-pressential=" + show(stably);
  if (stable_units == Tri::unknown || sliced_products == Tri::unknown || stably == Tri::unknown)
    return {VerdictStatus::unknown, values};
  if (stable_units == sliced_products && sliced_products == stably)
    return {VerdictStatus::pass, "consistent with the equivalence at the bound: " + values};
  return {VerdictStatus::unknown,
          "bounded evidence disagrees: " + values + (su_witness.empty() ? "" : "; " + su_witness) +
              (sp_witness.empty() ? "" : "; " + sp_witness)};
}

Outcome check_nss_chain(Ctx& c) {
  const GeomMorphism& p = c.canonical();
  const MorphismFlags& fl = c.canonical_flags();
  if (fl.nullstellensatz.value != Tri::yes) {
    std::string note = "hypothesis fails: " + flag_note("nullstellensatz", fl.nullstellensatz);
    std::string refl;
    if (fl.hyperconnected.value == Tri::yes &&
        !direct_image_reflects_zero(p, c.bound, &refl, c.lim))
      note += "; finite analogue of the monoid-action remark: hyperconnected yet points does not "
              "reflect 0 (" + refl + ")";
    return {VerdictStatus::vacuous, note};
  }
  for (const Presheaf& x : p.source->objects(c.bound)) {
    bool no_points = p.points.on_obj(x).total_size() == 0;
    bool no_pieces = p.pieces->on_obj(x).total_size() == 0;
    bool empty = x.total_size() == 0;
    if (no_points && !no_pieces) {
      auto still = [&](const Presheaf& y) {
        return p.points.on_obj(y).total_size() == 0 && p.pieces->on_obj(y).total_size() != 0;
      };
      return {VerdictStatus::fail, "no points but some pieces: " + shrink_witness(x, still).serialize()};
    }
    if (no_pieces && !empty) {
      auto still = [&](const Presheaf& y) {
        return p.pieces->on_obj(y).total_size() == 0 && y.total_size() != 0;
      };
      return {VerdictStatus::fail, "no pieces but nonempty: " + shrink_witness(x, still).serialize()};
    }
  }
  std::string note = "chain verified";
  if (direct_image_preserves_zero(p)) note += "; points preserves 0, so the three items are equivalent";
  return {VerdictStatus::pass, note};
}

Outcome check_faithful_on_discrete(Ctx& c) {
  auto instance = [&](const GeomMorphism& p, const MorphismFlags& fl,
                      const std::string& tag) -> Outcome {
    if (fl.hyperconnected.value != Tri::yes)
      return {VerdictStatus::vacuous, tag + ": hypothesis hyperconnected fails"};
    for (const Presheaf& a : p.target->objects(c.bound)) {
      Presheaf da = p.discrete.on_obj(a);
      for (const Presheaf& x : p.source->objects(c.bound)) {
        auto maps = hom_enumerate(da, x, c.lim);
        std::set<std::string> images;
        for (const PresheafMap& h : maps) images.insert(p.points.on_map(h).serialize());
        if (images.size() != maps.size())
          return {VerdictStatus::fail, tag + ": points not injective on maps " + da.serialize() +
                                           " -> " + x.serialize()};
      }
    }
    return {VerdictStatus::pass, ""};
  };
  std::vector<Outcome> parts;
  parts.push_back(instance(c.canonical(), c.canonical_flags(), "canonical"));
  if (c.dec().morphism) parts.push_back(instance(*c.dec().morphism, c.dec_flags(), "dec"));
  return merge(parts);
}

Outcome check_shriek_zero(Ctx& c) {
  auto instance = [&](const GeomMorphism& p, const MorphismFlags& fl,
                      const std::string& tag) -> Outcome {
    if (fl.local.value != Tri::yes)
      return {VerdictStatus::vacuous, tag + ": hypothesis local fails: " + fl.local.witness};
    ShriekZeroReport rep = shriek_preserves_zero(p);
    if (!rep.subterminal)
      return {VerdictStatus::fail, tag + ": codiscrete of 0 is not subterminal"};
    bool hyper = fl.hyperconnected.value == Tri::yes;
    if (hyper && !rep.initial)
      return {VerdictStatus::fail, tag + ": hyperconnected but codiscrete of 0 is not initial"};
    if (p.target->boolean() && rep.initial && !hyper)
      return {VerdictStatus::fail,
              tag + ": Boolean base, codiscrete preserves 0, but not hyperconnected"};
    return {VerdictStatus::pass,
            tag + (hyper ? ": forward and converse directions verified" : ": subterminal pre-check verified")};
  };
  std::vector<Outcome> parts;
  parts.push_back(instance(c.canonical(), c.canonical_flags(), "canonical"));
  if (c.dec().morphism) parts.push_back(instance(*c.dec().morphism, c.dec_flags(), "dec"));
  return merge(parts);
}

Outcome check_composite_equivalence(Ctx& c) {
  if (!c.dec().morphism)
    return {VerdictStatus::vacuous, "no decidable coreflection at the bound: " + c.dec().failure};
  const GeomMorphism& q = *c.dec().morphism;
  const SheafSubtopos& f = c.sheaves();

  // hypotheses: the two whiskered natural maps are isos
  for (const Presheaf& sh : f.sheaves->objects(1 << 20)) {
    if (!f.reflect.on_map(q.counit_points(sh)).is_iso())
      return {VerdictStatus::vacuous,
              "hypothesis fails: sheafified coreflection counit not iso at " + sh.serialize()};
  }
  for (const Presheaf& d : q.target->objects(c.bound)) {
    if (!q.points.on_map(f.unit(d)).is_iso())
      return {VerdictStatus::vacuous,
              "hypothesis fails: coreflected sheafification unit not iso at " + d.serialize()};
  }

  // conclusion: the composite adjunction is an adjoint equivalence
  for (const Presheaf& d : q.target->objects(c.bound)) {
    PresheafMap unit = compose(q.points.on_map(f.unit(d)), q.unit_points(d));
    if (!unit.is_iso())
      return {VerdictStatus::fail, "composite unit not iso at " + d.serialize()};
    // triangle: counit at Phi(d) composed with Phi(unit) is the identity
    Presheaf phid = f.reflect.on_obj(d);
    PresheafMap phi_unit = f.reflect.on_map(unit);
    PresheafMap eps = f.unit(phid);
    PresheafMap counit_phid = compose(eps.inverse(), f.reflect.on_map(q.counit_points(phid)));
    if (compose(counit_phid, phi_unit) != PresheafMap::identity(phid))
      return {VerdictStatus::fail, "composite triangle identity fails at " + d.serialize()};
  }
  for (const Presheaf& sh : f.sheaves->objects(1 << 20)) {
    PresheafMap eps = f.unit(sh);
    if (!eps.is_iso()) return {VerdictStatus::fail, "reflection unit not iso on a sheaf"};
    PresheafMap counit = compose(eps.inverse(), f.reflect.on_map(q.counit_points(sh)));
    if (!counit.is_iso())
      return {VerdictStatus::fail, "composite counit not iso at " + sh.serialize()};
  }
  return {VerdictStatus::pass, "composite adjunction verified as an adjoint equivalence"};
}

Outcome check_connected_implies_local(Ctx& c) {
  if (!c.dec().morphism)
    return {VerdictStatus::vacuous, "no decidable coreflection at the bound: " + c.dec().failure};
  const GeomMorphism& q = *c.dec().morphism;
  const SheafSubtopos& f = c.sheaves();

  // hypotheses: f^* beta iso on every object, and q_* eta at discretes iso
  for (const Presheaf& x : q.source->objects(c.bound)) {
    if (!f.reflect.on_map(q.counit_points(x)).is_iso())
      return {VerdictStatus::vacuous,
              "hypothesis fails: sheafified counit not iso at " + x.serialize()};
  }
  for (const Presheaf& d : q.target->objects(c.bound)) {
    if (!q.points.on_map(f.unit(d)).is_iso())
      return {VerdictStatus::vacuous,
              "hypothesis fails: coreflected unit not iso at " + d.serialize()};
  }

  // conclusion: A |-> sheafify(A) is right adjoint to the coreflection
  for (const Presheaf& x : q.source->objects(c.bound)) {
    Presheaf cx = q.points.on_obj(x);
    PresheafMap to_shx = f.unit(x);
    PresheafMap shbeta = f.reflect.on_map(q.counit_points(x));  // sh(CX) -> sh(X), iso
    PresheafMap unit = compose(shbeta.inverse(), to_shx);       // X -> sh(CX)
    for (const Presheaf& a : q.target->objects(c.bound)) {
      Presheaf sha = f.reflect.on_obj(a);
      auto outer = hom_enumerate(cx, a, c.lim);
      auto inner = hom_enumerate(x, sha, c.lim);
      std::set<std::string> images;
      for (const PresheafMap& g : outer) images.insert(compose(f.reflect.on_map(g), unit).serialize());
      if (images.size() != outer.size() || images.size() != inner.size())
        return {VerdictStatus::fail, "right adjoint fails at X=" + x.serialize() +
                                         " A=" + a.serialize()};
    }
  }
  // the center coincides with the sheaf subtopos
  for (const Presheaf& sh : f.sheaves->objects(1 << 20)) {
    Presheaf back = f.reflect.on_obj(q.points.on_obj(sh));
    if (!isomorphic(back, sh))
      return {VerdictStatus::fail, "center misses the sheaf " + sh.serialize()};
  }
  return {VerdictStatus::pass, "right adjoint constructed; center = sheaf subtopos at the bound"};
}

Outcome check_tau_negation(Ctx& c) {
  auto instance = [&](const GeomMorphism& p, const MorphismFlags& fl,
                      const std::string& tag) -> Outcome {
    OmegaComparison oc = omega_comparison(p);
    const OmegaData& od = p.source->omega();
    const Topos::Classifier& cl = p.target->classifier();

    // left square (needs only: points preserves 0)
    if (direct_image_preserves_zero(p)) {
      Presheaf p1 = p.points.on_obj(terminal_presheaf(p.source->site_ptr()));
      PresheafMap lhs = compose(oc.tau, p.points.on_map(od.falsity));
      PresheafMap rhs = compose(cl.zero, terminal_map(p1));
      if (lhs != rhs)
        return {VerdictStatus::fail, tag + ": tau . points(bottom) differs from bottom"};
    }
    if (fl.hyperconnected.value != Tri::yes)
      return {VerdictStatus::vacuous,
              tag + ": hypothesis hyperconnected fails (left square verified)"};

    PresheafMap left = compose(oc.tau, p.points.on_map(od.negation));
    PresheafMap right = compose(cl.negation, oc.tau);
    if (left != right)
      return {VerdictStatus::fail, tag + ": tau does not commute with negation on the classifier"};

    for (const Presheaf& x : p.source->objects(c.bound)) {
      for (const Subobject& u : subobjects_of(x, c.lim)) {
        Subobject lhs_sub = points_of_subobject(p, sub_not(u));
        Subobject by_formula = sub_not(points_of_subobject(p, u));
        Subobject by_lattice = pseudocomplement_by_enumeration(points_of_subobject(p, u), c.lim);
        if (!(by_formula == by_lattice))
          return {VerdictStatus::fail,
                  tag + ": the two negation routes disagree at " + u.describe()};
        if (!(lhs_sub == by_formula))
          return {VerdictStatus::fail, tag + ": points(not u) != not(points u) at X=" +
                                           x.serialize() + ", u=" + u.describe()};
      }
    }
    return {VerdictStatus::pass, tag + ": exact commutation on the classifier and on all subobjects"};
  };
  std::vector<Outcome> parts;
  parts.push_back(instance(c.canonical(), c.canonical_flags(), "canonical"));
  if (c.dec().morphism) parts.push_back(instance(*c.dec().morphism, c.dec_flags(), "dec"));
  return merge(parts);
}

Outcome check_dense_lemma(Ctx& c) {
  auto instance = [&](const GeomMorphism& p, const std::string& tag) -> Outcome {
    std::string refl;
    if (!direct_image_preserves_zero(p))
      return {VerdictStatus::vacuous, tag + ": points does not preserve 0"};
    if (!direct_image_reflects_zero(p, c.bound, &refl, c.lim))
      return {VerdictStatus::vacuous, tag + ": points does not reflect 0 (" + refl + ")"};
    const LTTopology& top = p.source->negneg();
    for (const Presheaf& x : p.source->objects(c.bound)) {
      for (const Subobject& u : subobjects_of(x, c.lim)) {
        if (!p.points.on_map(u.inclusion()).is_iso()) continue;
        if (!sub_not(u).is_empty())
          return {VerdictStatus::fail,
                  tag + ": points(u) iso but not(u) nonzero at u=" + u.describe()};
        if (!is_dense(u, top))
          return {VerdictStatus::fail, tag + ": points(u) iso but u not dense at u=" + u.describe()};
      }
    }
    return {VerdictStatus::pass, ""};
  };
  std::vector<Outcome> parts;
  parts.push_back(instance(c.canonical(), "canonical"));
  if (c.dec().morphism) parts.push_back(instance(*c.dec().morphism, "dec"));
  return merge(parts);
}

Outcome check_local_characterization(Ctx& c) {
  auto instance = [&](const GeomMorphism& p, const MorphismFlags& fl,
                      const std::string& tag) -> Outcome {
    if (fl.hyperconnected.value != Tri::yes || !p.target->boolean())
      return {VerdictStatus::vacuous, tag + ": needs hyperconnected with Boolean base"};
    bool lhs = fl.local.value == Tri::yes;
    std::string refl;
    bool reflects = direct_image_reflects_zero(p, c.bound, &refl, c.lim);
    const LTTopology& top = p.source->negneg();
    bool separated = true;
    std::string sep_w;
    for (const Presheaf& a : p.target->objects(c.bound)) {
      if (!sheaf_status(p.discrete.on_obj(a), top, c.lim).separated) {
        separated = false;
        sep_w = a.serialize();
        break;
      }
    }
    bool rhs = reflects && separated;
    if (lhs != rhs)
      return {VerdictStatus::unknown,
              tag + ": bounded evidence disagrees (local=" + std::string(lhs ? "yes" : "no") +
                  ", reflects-0=" + (reflects ? "yes" : "no") + ", discretes separated=" +
                  (separated ? "yes" : "no") + "); enlarge the bound"};
    std::string note = tag + ": local <=> (reflects 0 and discretes separated), both " +
                       (lhs ? "true" : "false");
    if (!lhs && !reflects) note += " (" + refl + ")";
    if (lhs) {
      for (const Presheaf& a : p.target->objects(c.bound))
        if (!sheaf_status(p.codiscrete->on_obj(a), top, c.lim).sheaf)
          return {VerdictStatus::fail, tag + ": codiscrete of " + a.serialize() + " not a sheaf"};
      note += "; center contained in the sheaf subtopos";
    }
    return {VerdictStatus::pass, note};
  };
  std::vector<Outcome> parts;
  parts.push_back(instance(c.canonical(), c.canonical_flags(), "canonical"));
  if (c.dec().morphism) parts.push_back(instance(*c.dec().morphism, c.dec_flags(), "dec"));
  return merge(parts);
}

Outcome check_mclarty(Ctx& c) {
  auto instance = [&](const GeomMorphism& p, const MorphismFlags& fl, const std::string& tag,
                      bool pieces_available) -> Outcome {
    if (fl.hyperconnected.value != Tri::yes || !p.target->boolean())
      return {VerdictStatus::vacuous, tag + ": needs a hyperconnected morphism with Boolean base"};
    for (const Presheaf& a : p.target->objects(c.bound))
      if (!is_decidable(p.discrete.on_obj(a), c.lim).decidable)
        return {VerdictStatus::vacuous, tag + ": a discrete object fails decidability"};

    bool local = fl.local.value == Tri::yes;
    std::string refl;
    bool reflects = direct_image_reflects_zero(p, c.bound, &refl, c.lim);
    if (local != reflects)
      return {VerdictStatus::unknown,
              tag + ": bounded evidence disagrees (local=" + std::string(local ? "yes" : "no") +
                  ", reflects-0=" + (reflects ? "yes" : "no") + "); enlarge the bound"};
    std::string note;
    if (local) {
      note = tag + ": positive instance, codiscrete adjoint constructed and verified";
      const LTTopology& top = p.source->negneg();
      for (const Presheaf& a : p.target->objects(c.bound))
        if (!sheaf_status(p.codiscrete->on_obj(a), top, c.lim).sheaf)
          return {VerdictStatus::fail, tag + ": center leaves the sheaf subtopos"};
      note += "; center = sheaf subtopos";
      // pre-cohesive iff the inverse image is cartesian closed
      if (pieces_available) {
        bool precoh = fl.pressential.value == Tri::yes;  // local and hyperconnected already hold
        Flag ccc = cartesian_closed_check(p, c.bound, c.lim);
        if (ccc.value != Tri::unknown && fl.pressential.value != Tri::unknown) {
          bool rhs = ccc.value == Tri::yes;
          if (precoh != rhs)
            return {VerdictStatus::fail, tag + ": pre-cohesive=" + (precoh ? "yes" : "no") +
                                             " but inverse image cartesian closed=" +
                                             (rhs ? "yes" : "no")};
          note += "; pre-cohesive <=> cartesian closed inverse image, both " +
                  std::string(precoh ? "true" : "false");
        }
      } else {
        note += "; pieces leg unverified at the bound, the pre-cohesive clause is skipped";
      }
    } else {
      note = tag + ": negative instance, reflects-0 fails (" + refl +
             ") and the forced codiscrete formula refutes adjointness (" + p.codiscrete_failure + ")";
    }
    return {VerdictStatus::pass, note};
  };
  std::vector<Outcome> parts;
  parts.push_back(instance(c.canonical(), c.canonical_flags(), "canonical", true));
  if (c.dec().morphism) {
    bool pieces = c.dec_pieces();
    parts.push_back(instance(*c.dec().morphism, c.dec_flags(), "dec", pieces));
  }
  return merge(parts);
}

Outcome dispatch(const std::string& id, Ctx& c) {
  if (id == "slice-hyperconnected") return check_slice_hyperconnected(c);
  if (id == "dec-coreflection-hyperconnected") return check_dec_coreflection_hyperconnected(c);
  if (id == "extensive-folk") return check_extensive_folk(c);
  if (id == "decidable-subterminal") return check_decidable_subterminal(c);
  if (id == "connected-iff-ccc") return check_connected_iff_ccc(c);
  if (id == "unit-monic-on-decidables") return check_unit_monic_on_decidables(c);
  if (id == "decidable-eq-discrete") return check_decidable_eq_discrete(c);
  if (id == "uiao") return check_uiao(c);
  if (id == "stably-locc-equivalences") return check_stably_locc(c);
  if (id == "nullstellensatz-chain") return check_nss_chain(c);
  if (id == "faithful-on-discrete") return check_faithful_on_discrete(c);
  if (id == "shriek-zero") return check_shriek_zero(c);
  if (id == "composite-equivalence") return check_composite_equivalence(c);
  if (id == "connected-implies-local") return check_connected_implies_local(c);
  if (id == "tau-negation") return check_tau_negation(c);
  if (id == "dense-lemma") return check_dense_lemma(c);
  if (id == "local-characterization") return check_local_characterization(c);
  if (id == "mclarty-corollary") return check_mclarty(c);
  throw ValidationError("unknown statement id: " + id);
}

}  // namespace

Verdict run_check(const std::string& id, const CorpusTopos& topos, int bound,
                  const EnumLimits& lim) {
  Verdict v;
  v.id = id;
  v.topos = topos.name;
  v.bound = bound;
  auto t0 = std::chrono::steady_clock::now();
  Ctx ctx(topos, bound, lim);
  try {
    Outcome out = dispatch(id, ctx);
    v.status = out.status;
    v.witness = out.witness;
  } catch (const BoundError& e) {
    v.status = VerdictStatus::unknown;
    v.witness = e.what();
  }
  v.millis = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
                 .count();
  return v;
}

bool SuiteReport::any_fail() const {
  for (const Verdict& v : verdicts)
    if (v.status == VerdictStatus::fail) return true;
  return !coverage_gaps.empty();
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json j;
  auto& checks = j["checks"] = nlohmann::json::array();
  for (const Verdict& v : verdicts) checks.push_back(v.to_json());
  j["coverage_gaps"] = coverage_gaps;
  int fails = 0;
  for (const Verdict& v : verdicts)
    if (v.status == VerdictStatus::fail) ++fails;
  j["fail_count"] = fails;
  return j;
}

std::string SuiteReport::to_text() const {
  std::ostringstream out;
  for (const Verdict& v : verdicts) {
    out << (v.status == VerdictStatus::pass      ? "PASS "
            : v.status == VerdictStatus::fail    ? "FAIL "
            : v.status == VerdictStatus::vacuous ? "VAC  "
                                                 : "UNK  ")
        << v.id << " @ " << v.topos << " (" << v.millis << "ms)";
    if (!v.witness.empty()) out << "\n      " << v.witness;
    out << "\n";
  }
  for (const std::string& gap : coverage_gaps)
    out << "FAIL coverage: no non-vacuous instance for " << gap << "\n";
  return out.str();
}

SuiteReport run_suite(const std::vector<CorpusTopos>& toposes, int bound, const EnumLimits& lim) {
  SuiteReport rep;
  std::map<std::string, bool> nonvacuous;
  for (const StatementCheck& st : list_statements()) nonvacuous[st.id] = false;
  for (const CorpusTopos& t : toposes) {
    Ctx ctx(t, bound, lim);
    for (const StatementCheck& st : list_statements()) {
      Verdict v;
      v.id = st.id;
      v.topos = t.name;
      v.bound = bound;
      auto t0 = std::chrono::steady_clock::now();
      try {
        Outcome out = dispatch(st.id, ctx);
        v.status = out.status;
        v.witness = out.witness;
      } catch (const BoundError& e) {
        v.status = VerdictStatus::unknown;
        v.witness = e.what();
      }
      v.millis =
          std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
              .count();
      if (v.status == VerdictStatus::pass || v.status == VerdictStatus::fail)
        nonvacuous[v.id] = true;
      rep.verdicts.push_back(std::move(v));
    }
  }
  for (const auto& [id, hit] : nonvacuous)
    if (!hit) rep.coverage_gaps.push_back(id);
  return rep;
}

}  // namespace toposlab
