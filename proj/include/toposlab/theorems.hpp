#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "toposlab/geom.hpp"

namespace toposlab {

enum class VerdictStatus { pass, fail, vacuous, unknown };

std::string to_string(VerdictStatus s);

/// The outcome of one statement check on one corpus topos. A fail carries
/// a concrete finite counterexample; a vacuous verdict names the failed
/// hypothesis and its witness.
struct Verdict {
  std::string id;
  std::string topos;
  VerdictStatus status = VerdictStatus::unknown;
  std::string witness;
  int bound = 0;
  long long millis = 0;

  nlohmann::json to_json() const;
};

struct StatementCheck {
  std::string id;
  std::string title;
};

/// The statement inventory, one entry per verified statement; ids are
/// stable across runs.
const std::vector<StatementCheck>& list_statements();

struct CorpusTopos {
  std::string name;
  std::string site_name;
  std::shared_ptr<const FinCategory> site;
};

/// The frozen example corpus: Sets, irreflexive graphs, reflexive graphs,
/// four monoid toposes and the 1-truncated simplex site.
const std::vector<CorpusTopos>& corpus();
const CorpusTopos* corpus_lookup(const std::string& name);

Verdict run_check(const std::string& id, const CorpusTopos& topos, int bound,
                  const EnumLimits& lim = {});

struct SuiteReport {
  std::vector<Verdict> verdicts;
  std::vector<std::string> coverage_gaps;  // statements with no non-vacuous instance

  bool any_fail() const;
  nlohmann::json to_json() const;
  std::string to_text() const;
};

SuiteReport run_suite(const std::vector<CorpusTopos>& toposes, int bound,
                      const EnumLimits& lim = {});

/// Smallest subpresheaf (by total size) on which `still_fails` holds;
/// used to shrink counterexample witnesses.
Presheaf shrink_witness(const Presheaf& x, const std::function<bool(const Presheaf&)>& still_fails);

}  // namespace toposlab
