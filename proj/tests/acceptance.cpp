// Acceptance suite: one line per criterion, nonzero exit iff any fails.
// All bounds and tolerances are fixed here; every equality is exact.
#include <chrono>
#include <iostream>

#include "oracles.hpp"
#include "toposlab/theorems.hpp"

using namespace toposlab;

namespace {

int failures = 0;

struct Criterion {
  std::string name;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;

  explicit Criterion(std::string n) : name(std::move(n)) {}
  void fail(const std::string& why) {
    ok = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& what) {
    if (detail.empty()) detail = what;
  }
  ~Criterion() {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << " -- " << detail;
    std::cout << " (" << ms << " ms)" << std::endl;
    if (!ok) ++failures;
  }
};

std::vector<Presheaf> probe_family(const CorpusTopos& t) {
  std::vector<Presheaf> fam;
  fam.push_back(initial_presheaf(t.site));
  fam.push_back(terminal_presheaf(t.site));
  for (int o = 0; o < t.site->num_objects(); ++o) fam.push_back(yoneda(t.site, o));
  for (const Presheaf& x : enumerate_presheaves(t.site, 2))
    if (x.total_size() >= 2 && x.total_size() <= 4) {
      fam.push_back(x);
      break;
    }
  return fam;
}

void criterion_kernel() {
  Criterion c("1 kernel soundness at bound 4 (limits, colimits, exponentials, Omega)");
  long long subs_checked = 0, probes = 0;
  for (const CorpusTopos& t : corpus()) {
    OmegaData od = compute_omega(t.site);

    // classify / pullback round-trip on every Sub(X) at bound 4
    for (const Presheaf& x : enumerate_presheaves(t.site, 4)) {
      for (const Subobject& u : subobjects_of(x)) {
        ++subs_checked;
        if (!(pullback_truth(classify(u, od), od) == u)) {
          c.fail(t.name + ": classify/pullback misses a subobject of " + x.serialize());
          return;
        }
      }
    }
    // and the other direction on maps into Omega at bound 2
    for (const Presheaf& x : enumerate_presheaves(t.site, 2)) {
      for (const PresheafMap& chi : hom_enumerate(x, od.omega)) {
        if (!(classify(pullback_truth(chi, od), od) == chi)) {
          c.fail(t.name + ": pullback/classify misses a map into Omega");
          return;
        }
      }
    }

    // universal properties over the frozen probe family
    auto fam = probe_family(t);
    for (const Presheaf& x : fam) {
      for (const Presheaf& y : fam) {
        LimitResult prod = product(x, y);
        ColimitResult cop = coproduct(x, y);
        for (const Presheaf& z : fam) {
          ++probes;
          size_t into_prod = hom_enumerate(z, prod.apex).size();
          size_t legs = hom_enumerate(z, x).size() * hom_enumerate(z, y).size();
          if (into_prod != legs) {
            c.fail(t.name + ": product universal property fails");
            return;
          }
          size_t from_cop = hom_enumerate(cop.apex, z).size();
          size_t colegs = hom_enumerate(x, z).size() * hom_enumerate(y, z).size();
          if (from_cop != colegs) {
            c.fail(t.name + ": coproduct universal property fails");
            return;
          }
        }
        // equalizer and coequalizer of a sampled parallel pair
        auto parallel = hom_enumerate(x, y);
        if (parallel.size() >= 2) {
          const PresheafMap &f = parallel[0], &g = parallel[1];
          LimitResult eq = equalizer(f, g);
          ColimitResult coeq = coequalizer(f, g);
          for (const Presheaf& z : fam) {
            size_t into_eq = hom_enumerate(z, eq.apex).size();
            size_t manual = 0;
            for (const PresheafMap& h : hom_enumerate(z, x))
              if (compose(f, h) == compose(g, h)) ++manual;
            if (into_eq != manual) {
              c.fail(t.name + ": equalizer universal property fails");
              return;
            }
            size_t from_coeq = hom_enumerate(coeq.apex, z).size();
            size_t manual2 = 0;
            for (const PresheafMap& h : hom_enumerate(y, z))
              if (compose(h, f) == compose(h, g)) ++manual2;
            if (from_coeq != manual2) {
              c.fail(t.name + ": coequalizer universal property fails");
              return;
            }
          }
        }
      }
    }

    // exponentials: transpose bijection against the probe family
    std::vector<Presheaf> small;
    for (const Presheaf& x : fam)
      if (x.total_size() <= 3) small.push_back(x);
    for (const Presheaf& x : small) {
      for (const Presheaf& y : small) {
        ExponentialResult e = exponential(x, y);
        for (const Presheaf& z : fam) {
          LimitResult zx = product(z, x);
          auto direct = hom_enumerate(zx.apex, y);
          auto curried = hom_enumerate(z, e.exp);
          if (direct.size() != curried.size()) {
            c.fail(t.name + ": exponential transpose count mismatch");
            return;
          }
          for (const PresheafMap& u : direct)
            if (uncurry(e, zx, curry(e, zx, u)) != u) {
              c.fail(t.name + ": curry/uncurry not mutually inverse");
              return;
            }
        }
      }
    }
  }
  c.note(std::to_string(subs_checked) + " subobjects round-tripped, " + std::to_string(probes) +
         " universal-property probes");
}

void criterion_omega_constants() {
  Criterion c("2 Omega regression constants");
  auto size_at = [](const CorpusTopos& t, const OmegaData& od, const char* obj) {
    return od.omega.size(t.site->object_index(obj));
  };
  {
    const CorpusTopos& t = *corpus_lookup("sets");
    if (compute_omega(t.site).omega.size(0) != 2) c.fail("terminal site Omega size is not 2");
  }
  {
    const CorpusTopos& t = *corpus_lookup("graphs");
    OmegaData od = compute_omega(t.site);
    if (size_at(t, od, "V") != 2 || size_at(t, od, "E") != 5)
      c.fail("graph site Omega sizes are not (2, 5)");
  }
  for (const char* name : {"rgraphs", "delta1"}) {
    const CorpusTopos& t = *corpus_lookup(name);
    OmegaData od = compute_omega(t.site);
    // frozen from the sieve oracle: 2 sieves on the vertex object, 5 on the edge object
    int small = std::min(od.omega.size(0), od.omega.size(1));
    int large = std::max(od.omega.size(0), od.omega.size(1));
    if (small != 2 || large != 5) c.fail(std::string(name) + ": Omega sizes differ from (2, 5)");
    for (int o = 0; o < t.site->num_objects(); ++o)
      if ((int)oracles::naive_sieves(*t.site, o).size() != od.omega.size(o))
        c.fail(std::string(name) + ": sieve oracle disagrees at " + t.site->object_name(o));
  }
}

void criterion_dec_eq_discrete() {
  Criterion c("3 decidable = discrete image over reflexive graphs at bound 4");
  const CorpusTopos& t = *corpus_lookup("rgraphs");
  GeomMorphism p = canonical_to_sets(t.site, 2);
  auto dec = dec_objects(t.site, 4);
  auto sets4 = enumerate_presheaves(standard_site("terminal"), 4);
  int matched = 0;
  for (const Presheaf& d : dec) {
    bool hit = false;
    for (const Presheaf& a : sets4)
      if (isomorphic(p.discrete.on_obj(a), d)) hit = true;
    if (!hit) {
      c.fail("decidable object not in the discrete image: " + d.serialize());
      return;
    }
    ++matched;
  }
  for (const Presheaf& a : sets4) {
    Presheaf da = p.discrete.on_obj(a);
    if (!is_decidable(da).decidable) {
      c.fail("discrete of " + a.serialize() + " is not decidable");
      return;
    }
    bool hit = false;
    for (const Presheaf& d : dec)
      if (isomorphic(da, d)) hit = true;
    if (!hit) {
      c.fail("discrete image misses the enumeration: " + a.serialize());
      return;
    }
  }
  if ((int)dec.size() != (int)sets4.size()) {
    c.fail("class counts differ");
    return;
  }
  c.note(std::to_string(matched) + " classes coincide exactly, zero discrepancies");
}

void criterion_uiao() {
  Criterion c("4 unity and identity of adjointly opposites over reflexive graphs at bound 3");
  UiaoReport rep = uiao_verify(standard_site("reflexive_graph"), 3);
  if (!rep.ok) {
    c.fail(rep.failure);
    return;
  }
  c.note(join(rep.details, "; "));
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                                  c.start)
                .count();
  if (ms >= 120'000) c.fail("runtime exceeded 120 s");
}

void criterion_mclarty() {
  Criterion c("5 local iff points reflects 0, both directions non-vacuous");
  {
    GeomMorphism p = canonical_to_sets(standard_site("idem"), 3);
    MorphismFlags fl = classify_morphism(p, 3);
    if (fl.local.value != Tri::yes) {
      c.fail("idem: codiscrete adjoint not verified: " + fl.local.witness);
      return;
    }
    if (!direct_image_reflects_zero(p, 3)) {
      c.fail("idem: points unexpectedly fails to reflect 0");
      return;
    }
  }
  {
    GeomMorphism p = canonical_to_sets(standard_site("zmod2"), 3);
    std::string swap_witness;
    if (direct_image_reflects_zero(p, 3, &swap_witness)) {
      c.fail("zmod2: points unexpectedly reflects 0");
      return;
    }
    if (swap_witness.empty()) {
      c.fail("zmod2: missing the swap witness");
      return;
    }
    if (p.has_codiscrete() || p.codiscrete_failure.find("adjunction refuted") == std::string::npos) {
      c.fail("zmod2: the forced codiscrete formula was not refuted");
      return;
    }
  }
  Verdict pos = run_check("mclarty-corollary", *corpus_lookup("idem"), 3);
  Verdict neg = run_check("mclarty-corollary", *corpus_lookup("zmod2"), 3);
  if (pos.status != VerdictStatus::pass || pos.witness.find("positive instance") == std::string::npos)
    c.fail("idem verdict lacks the positive direction");
  if (neg.status != VerdictStatus::pass || neg.witness.find("negative instance") == std::string::npos)
    c.fail("zmod2 verdict lacks the negative direction");
  c.note("positive: idem (codiscrete constructed); negative: zmod2 (swap witness, formula refuted)");
}

void criterion_tau_negation() {
  Criterion c("6 direct images preserve Heyting complements, exact equality");
  int nonvacuous = 0;
  for (const CorpusTopos& t : corpus()) {
    Verdict v = run_check("tau-negation", t, 3);
    if (v.status == VerdictStatus::fail) {
      c.fail(t.name + ": " + v.witness);
      return;
    }
    if (v.status == VerdictStatus::pass) ++nonvacuous;
  }
  if (nonvacuous < 7) {
    c.fail("expected 7 hyperconnected corpus members, saw " + std::to_string(nonvacuous));
    return;
  }
  c.note("exact commutation on every subobject over " + std::to_string(nonvacuous) +
         " hyperconnected corpus morphisms");
}

void criterion_nss_chain() {
  Criterion c("7 no-points/no-pieces/empty chain, with the finite analogue probe");
  int nonvacuous = 0;
  bool analogue_seen = false;
  for (const CorpusTopos& t : corpus()) {
    Verdict v = run_check("nullstellensatz-chain", t, 3);
    if (v.status == VerdictStatus::fail) {
      c.fail(t.name + ": " + v.witness);
      return;
    }
    if (v.status == VerdictStatus::pass) ++nonvacuous;
    if (t.name == "zmod2") {
      if (v.status != VerdictStatus::vacuous || v.witness.find("finite analogue") == std::string::npos) {
        c.fail("zmod2 did not report the finite-analogue probe");
        return;
      }
      analogue_seen = true;
    }
  }
  if (nonvacuous == 0) c.fail("no non-vacuous instance");
  if (!analogue_seen) c.fail("probe missing");
  c.note(std::to_string(nonvacuous) +
         " morphisms verified; zmod2 reports hyperconnected without reflecting 0");
}

void criterion_slicing() {
  Criterion c("8 slices of the reflexive-graph morphism stay hyperconnected and pressential");
  GeomMorphism p = canonical_to_sets(standard_site("reflexive_graph"), 2);
  int sliced = 0;
  for (const Presheaf& b : p.target->objects(2)) {
    if (b.total_size() > 2) continue;
    Flag h = slice_hyperconnected(p, b, 2);
    if (h.value != Tri::yes) {
      c.fail("slice over " + b.serialize() + " not hyperconnected: " + h.witness);
      return;
    }
    Flag pr = slice_pieces_preserves_products(p, b, 2, 64);
    if (pr.value != Tri::yes) {
      c.fail("sliced pieces break products over " + b.serialize() + ": " + pr.witness);
      return;
    }
    Flag adj = slice_adjunctions(p, b, 1);
    if (adj.value != Tri::yes) {
      c.fail("sliced adjunctions fail over " + b.serialize());
      return;
    }
    ++sliced;
  }
  c.note(std::to_string(sliced) + " bases checked (all with at most 2 elements)");
}

void criterion_sheafify_oracle() {
  Criterion c("9 sheafification matches the double-plus oracle at bound 3");
  int compared = 0;
  for (const CorpusTopos& t : corpus()) {
    LTTopology top = negneg_topology(t.site);
    for (const Presheaf& x : enumerate_presheaves(t.site, 3)) {
      Sheafification main = sheafify(x, top);
      Sheafification oracle = oracles::double_plus(x, top);
      if (!sheaf_status(oracle.sheaf, top).sheaf) {
        c.fail(t.name + ": oracle output is not a sheaf for " + x.serialize());
        return;
      }
      int commuting = 0;
      bool iso = false;
      for (const PresheafMap& h : hom_enumerate(main.sheaf, oracle.sheaf))
        if (compose(h, main.unit) == oracle.unit) {
          ++commuting;
          iso = h.is_iso();
        }
      if (commuting != 1 || !iso) {
        c.fail(t.name + ": mismatch at " + x.serialize() + " (" + std::to_string(commuting) +
               " commuting maps)");
        return;
      }
      ++compared;
    }
  }
  c.note(std::to_string(compared) + " presheaves compared, zero mismatches");
}

void criterion_full_suite() {
  Criterion c("10 full statement suite over the corpus at bound 3");
  auto t0 = std::chrono::steady_clock::now();
  SuiteReport rep = run_suite(corpus(), 3);
  auto secs =
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::steady_clock::now() - t0).count();
  int pass = 0, vac = 0, unk = 0, fail = 0;
  for (const Verdict& v : rep.verdicts) {
    switch (v.status) {
      case VerdictStatus::pass: ++pass; break;
      case VerdictStatus::vacuous: ++vac; break;
      case VerdictStatus::unknown: ++unk; break;
      case VerdictStatus::fail: ++fail; break;
    }
  }
  if (fail > 0) {
    for (const Verdict& v : rep.verdicts)
      if (v.status == VerdictStatus::fail) c.fail(v.id + " @ " + v.topos + ": " + v.witness);
    return;
  }
  if (!rep.coverage_gaps.empty()) {
    c.fail("statements without a non-vacuous instance: " + join(rep.coverage_gaps, ", "));
    return;
  }
  if (secs >= 300) {
    c.fail("suite exceeded 5 minutes");
    return;
  }
  c.note(std::to_string(pass) + " pass, " + std::to_string(vac) + " vacuous, " +
         std::to_string(unk) + " unknown over " + std::to_string(rep.verdicts.size()) +
         " verdicts in " + std::to_string(secs) + " s; all 18 statements non-vacuous");
}

}  // namespace

int main() {
  criterion_kernel();
  criterion_omega_constants();
  criterion_dec_eq_discrete();
  criterion_uiao();
  criterion_mclarty();
  criterion_tau_negation();
  criterion_nss_chain();
  criterion_slicing();
  criterion_sheafify_oracle();
  criterion_full_suite();
  if (failures) std::cout << failures << " criteria failed" << std::endl;
  return failures == 0 ? 0 : 1;
}
