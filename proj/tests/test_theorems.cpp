#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "toposlab/theorems.hpp"

using namespace toposlab;

TEST_CASE("the statement inventory has 18 stable unique ids") {
  const auto& inv = list_statements();
  CHECK(inv.size() == 18);
  std::set<std::string> ids;
  for (const auto& st : inv) {
    CHECK(!st.id.empty());
    CHECK(!st.title.empty());
    ids.insert(st.id);
  }
  CHECK(ids.size() == inv.size());
  // ids are stable across calls
  CHECK(list_statements()[0].id == inv[0].id);
  CHECK(inv.front().id == "slice-hyperconnected");
  CHECK(inv.back().id == "mclarty-corollary");
}

TEST_CASE("the corpus is frozen") {
  CHECK(corpus().size() == 8);
  CHECK(corpus_lookup("rgraphs") != nullptr);
  CHECK(corpus_lookup("reflexive_graph") != nullptr);  // site-name alias
  CHECK(corpus_lookup("nonsense") == nullptr);
}

TEST_CASE("run_check rejects unknown ids") {
  CHECK_THROWS_AS(run_check("no-such-statement", *corpus_lookup("sets"), 2), ValidationError);
}

TEST_CASE("uiao passes on reflexive graphs and fails hypotheses on zmod2") {
  Verdict v = run_check("uiao", *corpus_lookup("rgraphs"), 2);
  CHECK(v.status == VerdictStatus::pass);
  Verdict w = run_check("uiao", *corpus_lookup("zmod2"), 2);
  CHECK(w.status == VerdictStatus::vacuous);
  CHECK(w.witness.find("local=no") != std::string::npos);
}

TEST_CASE("mclarty on zmod2 passes with the negative direction witnessed by the swap action") {
  Verdict v = run_check("mclarty-corollary", *corpus_lookup("zmod2"), 2);
  CHECK(v.status == VerdictStatus::pass);
  CHECK(v.witness.find("negative instance") != std::string::npos);
  CHECK(v.witness.find("refutes adjointness") != std::string::npos);
}

TEST_CASE("extensive-folk reports the necessity probe on zmod2") {
  Verdict v = run_check("extensive-folk", *corpus_lookup("zmod2"), 2);
  CHECK(v.status == VerdictStatus::pass);
  CHECK(v.witness.find("necessity probe") != std::string::npos);
}

TEST_CASE("nullstellensatz-chain on zmod2 is vacuous with the finite-analogue note") {
  Verdict v = run_check("nullstellensatz-chain", *corpus_lookup("zmod2"), 2);
  CHECK(v.status == VerdictStatus::vacuous);
  CHECK(v.witness.find("finite analogue") != std::string::npos);
}

TEST_CASE("witness shrinking finds a minimal failing subobject") {
  // over zmod2: decidable, fixed-point-free and more than one element;
  // the minimal such sub of swap+fixed is the swap orbit itself
  auto z2 = standard_site("zmod2");
  Presheaf big(z2, {{"x", "y", "f"}}, {{0, 1, 2}, {1, 0, 2}});
  auto fails = [](const Presheaf& p) {
    bool has_fixed = false;
    for (int i = 0; i < p.size(0); ++i)
      if (p.apply(1, i) == i) has_fixed = true;
    return p.total_size() >= 2 && !has_fixed;
  };
  CHECK(fails(big) == false);  // big has the fixed point f
  Presheaf swap(z2, {{"x", "y"}}, {{0, 1}, {1, 0}});
  Presheaf bigger(z2, {{"a", "b", "x", "y"}}, {{0, 1, 2, 3}, {1, 0, 3, 2}});
  Presheaf shrunk = shrink_witness(bigger, fails);
  CHECK(shrunk.total_size() == 2);
  CHECK(isomorphic(shrunk, swap));
}

TEST_CASE("suite on the degenerate corpus") {
  // a single terminal-site topos: everything passes or is vacuous
  std::vector<CorpusTopos> just_sets = {*corpus_lookup("sets")};
  SuiteReport rep = run_suite(just_sets, 2);
  for (const Verdict& v : rep.verdicts)
    CHECK((v.status == VerdictStatus::pass || v.status == VerdictStatus::vacuous));
  // the empty corpus gives an empty report (plus total coverage gaps)
  SuiteReport empty = run_suite({}, 2);
  CHECK(empty.verdicts.empty());
  CHECK(empty.coverage_gaps.size() == list_statements().size());
}

TEST_CASE("verdict and report serialization") {
  Verdict v = run_check("dense-lemma", *corpus_lookup("idem"), 2);
  auto j = v.to_json();
  CHECK(j.at("id") == "dense-lemma");
  CHECK(j.at("topos") == "idem");
  CHECK(j.at("status") == "pass");
  CHECK(j.contains("bound"));
  CHECK(j.contains("millis"));

  std::vector<CorpusTopos> two = {*corpus_lookup("sets"), *corpus_lookup("idem")};
  SuiteReport rep = run_suite(two, 2);
  CHECK(!rep.any_fail());
  auto rj = rep.to_json();
  CHECK(rj.at("fail_count") == 0);
  CHECK(rj.at("checks").size() == 2 * list_statements().size());
  std::string text = rep.to_text();
  CHECK(text.find("PASS") != std::string::npos);
}

TEST_CASE("verdicts are deterministic across runs") {
  Verdict a = run_check("tau-negation", *corpus_lookup("idem"), 2);
  Verdict b = run_check("tau-negation", *corpus_lookup("idem"), 2);
  CHECK(a.status == b.status);
  CHECK(a.witness == b.witness);
}
