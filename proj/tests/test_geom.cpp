#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "toposlab/geom.hpp"

using namespace toposlab;

namespace {

Presheaf swap_action() {
  auto z2 = standard_site("zmod2");
  return Presheaf(z2, {{"x", "y"}}, {{0, 1}, {1, 0}});
}

Presheaf one_edge_rgraph(std::shared_ptr<const FinCategory> site) {
  int V = site->object_index("V"), E = site->object_index("E");
  std::vector<std::vector<std::string>> elems(2);
  elems[V] = {"a", "b"};
  elems[E] = {"da", "db", "e"};
  std::vector<std::vector<int>> act(site->num_morphisms());
  act[site->identity(V)] = {0, 1};
  act[site->identity(E)] = {0, 1, 2};
  act[site->morphism_index("d0")] = {0, 1, 0};
  act[site->morphism_index("d1")] = {0, 1, 1};
  act[site->morphism_index("s0")] = {0, 1};
  act[site->morphism_index("d0s0")] = {0, 1, 0};
  act[site->morphism_index("d1s0")] = {0, 1, 1};
  return Presheaf(site, elems, act);
}

}  // namespace

TEST_CASE("canonical morphism over the terminal site: all four adjoints are identities") {
  auto p = canonical_to_sets(standard_site("terminal"), 3);
  REQUIRE(p.has_pieces());
  REQUIRE(p.has_codiscrete());
  Presheaf a(standard_site("terminal"), {{"u", "v"}}, {{0, 1}});
  CHECK(p.discrete.on_obj(a).total_size() == 2);
  CHECK(p.points.on_obj(a).total_size() == 2);
  CHECK(p.pieces->on_obj(a).total_size() == 2);
  CHECK(p.codiscrete->on_obj(a).total_size() == 2);
  CHECK(p.unit_points(a).is_iso());
  auto fl = classify_morphism(p, 3);
  CHECK(fl.connected.value == Tri::yes);
  CHECK(fl.hyperconnected.value == Tri::yes);
  CHECK(fl.local.value == Tri::yes);
  CHECK(fl.nullstellensatz.value == Tri::yes);
}

TEST_CASE("reflexive graphs: points are nodes, pieces are components") {
  auto rg = standard_site("reflexive_graph");
  auto p = canonical_to_sets(rg, 2);
  Presheaf x = one_edge_rgraph(rg);
  CHECK(p.points.on_obj(x).total_size() == 2);   // the two nodes
  CHECK(p.pieces->on_obj(x).total_size() == 1);  // one connected component
  CHECK(p.pieces->on_obj(x).total_size() == (int)oracles::naive_pi0(x));

  // theta: nodes onto components, epic
  PresheafMap theta = points_to_pieces(p, x);
  CHECK(theta.epic());
}

TEST_CASE("reflexive graphs are stably pre-cohesive over Sets") {
  auto rg = standard_site("reflexive_graph");
  auto p = canonical_to_sets(rg, 2);
  REQUIRE(p.has_codiscrete());
  auto fl = classify_morphism(p, 2);
  CHECK(fl.connected.value == Tri::yes);
  CHECK(fl.hyperconnected.value == Tri::yes);
  CHECK(fl.essential.value == Tri::yes);
  CHECK(fl.pressential.value == Tri::yes);
  CHECK(fl.local.value == Tri::yes);
  CHECK(fl.nullstellensatz.value == Tri::yes);
  CHECK(fl.stably_pressential.value == Tri::yes);

  // the codiscrete of a 2-element set is the codiscrete graph: 2 nodes, 4 edges
  Presheaf two(standard_site("terminal"), {{"u", "v"}}, {{0, 1}});
  Presheaf k2 = p.codiscrete->on_obj(two);
  CHECK(k2.size(rg->object_index("V")) == 2);
  CHECK(k2.size(rg->object_index("E")) == 4);

  CHECK(cartesian_closed_check(p, 2).value == Tri::yes);
  CHECK(shriek_preserves_zero(p).initial);
}

TEST_CASE("zmod2: hyperconnected but not local; the swap action is the witness") {
  auto p = canonical_to_sets(standard_site("zmod2"), 2);
  CHECK(p.points.on_obj(swap_action()).total_size() == 0);  // no fixed points

  auto fl = classify_morphism(p, 2);
  CHECK(fl.connected.value == Tri::yes);
  CHECK(fl.hyperconnected.value == Tri::yes);
  CHECK(fl.essential.value == Tri::yes);
  CHECK(fl.pressential.value == Tri::no);  // free orbit squared has two components
  CHECK(fl.local.value == Tri::no);
  CHECK(fl.local.witness.find("adjunction refuted") != std::string::npos);
  CHECK(fl.nullstellensatz.value == Tri::no);  // swap: no points, one piece

  std::string w;
  CHECK(!direct_image_reflects_zero(p, 2, &w));
  CHECK(!w.empty());
  CHECK(direct_image_preserves_zero(p));

  // connected-iff-ccc instance: both sides true here
  CHECK(cartesian_closed_check(p, 2).value == Tri::yes);
}

TEST_CASE("irreflexive graphs: connected but not hyperconnected; tau is 3 -> 2") {
  auto p = canonical_to_sets(standard_site("parallel_pair"), 2);
  auto fl = classify_morphism(p, 2);
  CHECK(fl.connected.value == Tri::yes);
  CHECK(fl.hyperconnected.value == Tri::no);
  OmegaComparison oc = omega_comparison(p);
  CHECK(!oc.iso);
  CHECK(oc.tau.dom().total_size() == 3);  // frozen: three global sieves
  CHECK(oc.tau.cod().total_size() == 2);
}

TEST_CASE("idempotent monoid: local with fixed points as the codiscrete core") {
  auto p = canonical_to_sets(standard_site("idem"), 3);
  REQUIRE(p.has_codiscrete());
  auto fl = classify_morphism(p, 3);
  CHECK(fl.connected.value == Tri::yes);
  CHECK(fl.hyperconnected.value == Tri::yes);
  CHECK(fl.local.value == Tri::yes);
  CHECK(fl.nullstellensatz.value == Tri::yes);
  CHECK(direct_image_reflects_zero(p, 3, nullptr));
  CHECK(shriek_preserves_zero(p).subterminal);
  CHECK(shriek_preserves_zero(p).initial);
}

TEST_CASE("right-zero monoid: hyperconnected, points does not reflect 0, not local") {
  auto rz = standard_site("rzero");
  auto p = canonical_to_sets(rz, 2);
  auto fl = classify_morphism(p, 2);
  CHECK(fl.connected.value == Tri::yes);
  CHECK(fl.hyperconnected.value == Tri::yes);
  CHECK(fl.local.value == Tri::no);
  std::string w;
  CHECK(!direct_image_reflects_zero(p, 2, &w));  // the regular action has no common fixed point
}

TEST_CASE("omega comparison is iso exactly for the hyperconnected corpus morphisms") {
  for (const char* name : {"terminal", "reflexive_graph", "delta1", "zmod2", "idem", "rzero"}) {
    auto p = canonical_to_sets(standard_site(name), 2);
    CHECK(omega_comparison(p).iso);
  }
  CHECK(!omega_comparison(canonical_to_sets(standard_site("parallel_pair"), 2)).iso);
}

TEST_CASE("dec coreflection morphism over the reflexive graph site") {
  auto rg = standard_site("reflexive_graph");
  auto out = from_dec_coreflection(rg, 2);
  REQUIRE(out.morphism.has_value());
  const GeomMorphism& q = *out.morphism;
  Presheaf x = one_edge_rgraph(rg);
  CHECK(q.points.on_obj(x).total_size() == 4);  // node-discrete subgraph
  CHECK(q.counit_points(x).monic());

  auto fl = classify_morphism(q, 2);
  CHECK(fl.connected.value == Tri::yes);
  CHECK(fl.hyperconnected.value == Tri::yes);
  CHECK(fl.local.value == Tri::yes);
  CHECK(cartesian_closed_check(q, 2).value == Tri::yes);  // pre-cohesive over Dec
}

TEST_CASE("dec coreflection morphism over the idempotent monoid") {
  auto out = from_dec_coreflection(standard_site("idem"), 3);
  REQUIRE(out.morphism.has_value());
  const GeomMorphism& q = *out.morphism;
  auto fl = classify_morphism(q, 3);
  CHECK(fl.hyperconnected.value == Tri::yes);
  CHECK(fl.local.value == Tri::yes);
  CHECK(direct_image_reflects_zero(q, 3, nullptr));
}

TEST_CASE("dec coreflection morphism over a group site is the identity") {
  auto out = from_dec_coreflection(standard_site("zmod2"), 2);
  REQUIRE(out.morphism.has_value());
  const GeomMorphism& q = *out.morphism;
  Presheaf s = swap_action();
  CHECK(q.points.on_obj(s) == s);  // everything is decidable
  auto fl = classify_morphism(q, 2);
  CHECK(fl.hyperconnected.value == Tri::yes);
  CHECK(fl.local.value == Tri::yes);
}

TEST_CASE("dec coreflection over the right-zero monoid: not local (reflects-0 fails)") {
  auto out = from_dec_coreflection(standard_site("rzero"), 2);
  REQUIRE(out.morphism.has_value());
  const GeomMorphism& q = *out.morphism;
  auto fl = classify_morphism(q, 2);
  CHECK(fl.hyperconnected.value == Tri::yes);
  CHECK(fl.local.value == Tri::no);
  std::string w;
  CHECK(!direct_image_reflects_zero(q, 2, &w));
}

TEST_CASE("irreflexive graphs have no dec coreflection at the bound") {
  auto out = from_dec_coreflection(standard_site("parallel_pair"), 3);
  CHECK(!out.morphism.has_value());
  CHECK(out.failure.find("no right adjoint") != std::string::npos);
}

TEST_CASE("slicing the reflexive-graph morphism stays hyperconnected") {
  auto rg = standard_site("reflexive_graph");
  auto p = canonical_to_sets(rg, 2);
  for (const Presheaf& b : p.target->objects(2)) {
    if (b.total_size() == 0 || b.total_size() > 2) continue;
    CHECK(slice_hyperconnected(p, b, 2).value == Tri::yes);
    CHECK(slice_pieces_preserves_products(p, b, 2, 40).value != Tri::no);
    CHECK(slice_adjunctions(p, b, 1).value == Tri::yes);
  }
  // B = 1 recovers the morphism itself
  Presheaf one = p.target->terminal();
  CHECK(slice_hyperconnected(p, one, 2).value == Tri::yes);
}

TEST_CASE("pieces functor of the graph site does not preserve products") {
  auto p = canonical_to_sets(standard_site("parallel_pair"), 2);
  REQUIRE(p.has_pieces());
  Flag f = preserves_binary_products(*p.pieces, 2);
  CHECK(f.value == Tri::no);  // a single edge squared falls apart
}

TEST_CASE("functor checks: points of zmod2 preserves limits and coproducts but not 0-reflection") {
  auto p = canonical_to_sets(standard_site("zmod2"), 2);
  CHECK(preserves_terminal(p.points).value == Tri::yes);
  CHECK(preserves_binary_products(p.points, 2).value == Tri::yes);
  CHECK(preserves_binary_coproducts(p.points, 2).value == Tri::yes);
  CHECK(reflects_initial(p.points, 2).value == Tri::no);

  // extensive-folk conclusion fails on the swap action, as the probe expects
  Presheaf s = swap_action();
  CHECK(is_decidable(s).decidable);
  CHECK(subterminal(p.points.on_obj(s)));
  CHECK(!subterminal(s));
}

TEST_CASE("unit of the pieces adjunction is monic on decidable objects") {
  auto rg = standard_site("reflexive_graph");
  auto p = canonical_to_sets(rg, 2);
  for (const Presheaf& x : p.source->objects(2)) {
    if (!is_decidable(x).decidable) continue;
    CHECK(p.unit_pieces(x).monic());
  }
}

TEST_CASE("uiao holds for reflexive graphs and delta1") {
  for (const char* name : {"reflexive_graph", "delta1"}) {
    UiaoReport rep = uiao_verify(standard_site(name), 2);
    INFO(rep.failure);
    CHECK(rep.ok);
    CHECK(rep.details.size() >= 5);
  }
}

TEST_CASE("uiao fails for zmod2 with the no-codiscrete witness") {
  UiaoReport rep = uiao_verify(standard_site("zmod2"), 2);
  CHECK(!rep.ok);
  CHECK(rep.failure.find("no codiscrete right adjoint") != std::string::npos);
  CHECK(rep.failure.find("reflect 0") != std::string::npos);
}

TEST_CASE("uiao holds trivially over the terminal site") {
  UiaoReport rep = uiao_verify(standard_site("terminal"), 3);
  INFO(rep.failure);
  CHECK(rep.ok);
}

TEST_CASE("sheaf subtopos machinery") {
  auto rg = standard_site("reflexive_graph");
  auto source = Topos::presheaves_on(rg, "rgraphs");
  SheafSubtopos f = sheaf_subtopos(source, 2);
  // sheaves at the bound are the codiscrete graphs on 0..2 nodes
  CHECK(f.sheaves->objects(1 << 20).size() == 3);
  for (const Presheaf& sh : f.sheaves->objects(1 << 20)) {
    CHECK(sheaf_status(sh, source->negneg()).sheaf);
    CHECK(f.unit(sh).is_iso());
  }
  // reflect is functorial on a sample map
  Presheaf x = one_edge_rgraph(rg);
  PresheafMap to_terminal = hom_enumerate(x, terminal_presheaf(rg)).front();
  CHECK_NOTHROW(f.reflect.on_map(to_terminal));
}

TEST_CASE("theta epic coincides with hyperconnectedness on essential local corpus morphisms") {
  for (const char* name : {"terminal", "reflexive_graph", "delta1", "idem", "parallel_pair"}) {
    auto p = canonical_to_sets(standard_site(name), 2);
    auto fl = classify_morphism(p, 2);
    if (fl.essential.value != Tri::yes || fl.local.value != Tri::yes) continue;
    CHECK(fl.nullstellensatz.value == fl.hyperconnected.value);
  }
}

TEST_CASE("points of a subobject") {
  auto rg = standard_site("reflexive_graph");
  auto p = canonical_to_sets(rg, 2);
  Presheaf x = one_edge_rgraph(rg);
  for (const Subobject& u : subobjects_of(x)) {
    Subobject pu = points_of_subobject(p, u);
    CHECK(pu.count() == u.count(rg->object_index("V")));  // points = nodes inside u
  }
}
