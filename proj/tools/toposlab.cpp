// Command-line front end: list sites, run the statement suite, inspect
// presheaves. Exit codes: 0 = no failing verdicts, 1 = at least one fail,
// 2 = usage or parse error.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "toposlab/theorems.hpp"

using namespace toposlab;

namespace {

int default_bound() {
  if (const char* env = std::getenv("TOPOSLAB_BOUND")) {
    int b = std::atoi(env);
    if (b > 0) return b;
  }
  return 3;
}

std::shared_ptr<const FinCategory> load_site(const std::string& arg, std::string* name) {
  if (const CorpusTopos* t = corpus_lookup(arg)) {
    *name = t->name;
    return t->site;
  }
  // try the standard-site factory, then a JSON file
  try {
    auto s = standard_site(arg);
    *name = arg;
    return s;
  } catch (const ValidationError&) {
  }
  std::ifstream in(arg);
  if (!in) throw ValidationError("unknown site and unreadable file: " + arg);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("parse error in " + arg + ": " + e.what());
  }
  *name = arg;
  return std::make_shared<const FinCategory>(FinCategory::from_json(j));
}

int cmd_sites(const std::string& format) {
  nlohmann::json out = nlohmann::json::array();
  for (const CorpusTopos& t : corpus()) {
    OmegaData od = compute_omega(t.site);
    nlohmann::json entry;
    entry["name"] = t.name;
    entry["site"] = t.site_name;
    entry["objects"] = t.site->num_objects();
    entry["morphisms"] = t.site->num_morphisms();
    auto& omega = entry["omega"] = nlohmann::json::object();
    for (int o = 0; o < t.site->num_objects(); ++o)
      omega[t.site->object_name(o)] = od.omega.size(o);
    out.push_back(entry);
  }
  if (format == "json") {
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& e : out) {
      std::cout << e.at("name").get<std::string>() << " (site " << e.at("site").get<std::string>()
                << "): " << e.at("objects") << " objects, " << e.at("morphisms") << " morphisms, |Omega| =";
      for (auto it = e.at("omega").begin(); it != e.at("omega").end(); ++it)
        std::cout << " " << it.key() << ":" << it.value();
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_check(const std::string& site_arg, const std::string& suite, int bound,
              const std::string& format, long long max_enum) {
  std::string name;
  auto site = load_site(site_arg, &name);
  CorpusTopos topos{name, name, site};
  EnumLimits lim;
  lim.max_nodes = max_enum;

  SuiteReport rep;
  if (suite == "all") {
    rep = run_suite({topos}, bound, lim);
  } else {
    bool known = false;
    for (const auto& st : list_statements())
      if (st.id == suite) known = true;
    if (!known) {
      std::cerr << "unknown statement id: " << suite << "\n";
      return 2;
    }
    rep.verdicts.push_back(run_check(suite, topos, bound, lim));
  }
  if (format == "json")
    std::cout << rep.to_json().dump(2) << "\n";
  else
    std::cout << rep.to_text();
  bool failed = false;
  for (const Verdict& v : rep.verdicts)
    if (v.status == VerdictStatus::fail) failed = true;
  if (suite == "all" && !rep.coverage_gaps.empty()) failed = true;
  return failed ? 1 : 0;
}

int cmd_inspect(const std::string& site_arg, const std::string& presheaf_file,
                const std::string& format, long long max_enum) {
  std::string name;
  auto site = load_site(site_arg, &name);
  std::ifstream in(presheaf_file);
  if (!in) throw ValidationError("unreadable presheaf file: " + presheaf_file);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("parse error in " + presheaf_file + ": " + e.what());
  }
  if (!j.contains("site")) j["site"] = name;
  Presheaf x = Presheaf::from_json(j, [&](const std::string& n) {
    std::string ignored;
    return load_site(n, &ignored);
  });

  EnumLimits lim;
  lim.max_nodes = max_enum;
  nlohmann::json out;
  out["site"] = name;
  auto& carriers = out["carriers"] = nlohmann::json::object();
  for (int o = 0; o < site->num_objects(); ++o) carriers[site->object_name(o)] = x.size(o);

  DecVerdict dv = is_decidable(x, lim);
  out["decidable"] = dv.decidable;
  if (!dv.decidable) out["decidable_witness"] = dv.witness;

  CoreflectionOutcome cor = dec_coreflection(x, x.max_fiber(), lim);
  if (cor.status == CoreflectionOutcome::Status::ok) {
    out["coreflection"] = cor.value->core.describe();
  } else {
    out["coreflection"] = "none: " + cor.witness;
  }

  LTTopology top = negneg_topology(site);
  SheafStatus st = sheaf_status(x, top, lim);
  out["separated"] = st.separated;
  out["sheaf"] = st.sheaf;
  if (!st.witness.empty()) out["sheaf_witness"] = st.witness;

  Sheafification sh = sheafify(x, top, lim);
  auto& shc = out["sheafification_carriers"] = nlohmann::json::object();
  for (int o = 0; o < site->num_objects(); ++o) shc[site->object_name(o)] = sh.sheaf.size(o);
  out["unit_is_iso"] = sh.unit.is_iso();

  if (format == "json") {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "presheaf over " << name << ":";
    for (int o = 0; o < site->num_objects(); ++o)
      std::cout << " " << site->object_name(o) << ":" << x.size(o);
    std::cout << "\n";
    std::cout << (dv.decidable ? "decidable" : "not decidable (" + dv.witness + ")") << "\n";
    std::cout << "coreflection: " << out.at("coreflection").get<std::string>() << "\n";
    std::cout << (st.separated ? "separated" : "not separated") << "; "
              << (st.sheaf ? "a sheaf" : "not a sheaf") << "\n";
    std::cout << "sheafification:";
    for (int o = 0; o < site->num_objects(); ++o)
      std::cout << " " << site->object_name(o) << ":" << sh.sheaf.size(o);
    std::cout << (sh.unit.is_iso() ? " (unit iso)" : "") << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toposlab: finite presheaf toposes, the double-negation topology and adjoint strings"};
  app.require_subcommand(1);

  std::string format = "text";
  int bound = default_bound();
  long long max_enum = 1'000'000;
  int seed = 0;

  auto* sites = app.add_subcommand("sites", "list the corpus toposes with basic statistics");
  sites->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

  std::string check_site, suite = "all";
  auto* check = app.add_subcommand("check", "run statement checks over a topos");
  check->add_option("site", check_site, "corpus name, standard site, or site JSON file")->required();
  check->add_option("--suite", suite, "all or a statement id");
  check->add_option("--bound", bound, "carrier bound per site object")->check(CLI::PositiveNumber);
  check->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  check->add_option("--seed", seed, "seed for sampled checks (sampling is deterministic)");
  check->add_option("--max-enum", max_enum, "search node budget")->check(CLI::PositiveNumber);

  std::string inspect_site, presheaf_file;
  auto* inspect = app.add_subcommand("inspect", "analyze one presheaf");
  inspect->add_option("site", inspect_site)->required();
  inspect->add_option("presheaf", presheaf_file, "presheaf JSON file")->required();
  inspect->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
  inspect->add_option("--max-enum", max_enum)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sites->parsed()) return cmd_sites(format);
    if (check->parsed()) return cmd_check(check_site, suite, bound, format, max_enum);
    if (inspect->parsed()) return cmd_inspect(inspect_site, presheaf_file, format, max_enum);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const BoundError& e) {
    std::cerr << "bound exceeded: " << e.what() << "\n";
    return 0;  // unknown-at-bound is not a failure
  }
  return 2;
}
