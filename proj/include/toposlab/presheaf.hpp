#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "toposlab/fincat.hpp"
#include "toposlab/util.hpp"

namespace toposlab {

/// A finite-set-valued contravariant functor on a finite category.
/// `elems[c]` lists the carrier at object c (names unique per object);
/// for a site morphism f : c -> d, `action[f]` maps indices of the
/// carrier at d to indices of the carrier at c.
class Presheaf {
 public:
  Presheaf() = default;
  Presheaf(std::shared_ptr<const FinCategory> site, std::vector<std::vector<std::string>> elems,
           std::vector<std::vector<int>> action);

  const FinCategory& site() const { return *site_; }
  const std::shared_ptr<const FinCategory>& site_ptr() const { return site_; }

  int size(int obj) const { return static_cast<int>(elems_[obj].size()); }
  int total_size() const;
  int max_fiber() const;
  const std::string& elem_name(int obj, int i) const { return elems_[obj][i]; }
  const std::vector<std::string>& carrier(int obj) const { return elems_[obj]; }
  int elem_index(int obj, const std::string& name) const;  // -1 when absent

  /// X(f) applied to the element with index `i` of the carrier at tgt(f).
  int apply(int mor, int i) const { return action_[mor][i]; }
  const std::vector<int>& action(int mor) const { return action_[mor]; }

  bool operator==(const Presheaf& other) const;
  bool operator!=(const Presheaf& other) const { return !(*this == other); }

  /// Deterministic dump of all data; doubles as a cache key.
  std::string serialize() const;

  nlohmann::json to_json() const;
  static Presheaf from_json(const nlohmann::json& j,
                            const std::function<std::shared_ptr<const FinCategory>(const std::string&)>& resolve_site);

 private:
  std::shared_ptr<const FinCategory> site_;
  std::vector<std::vector<std::string>> elems_;
  std::vector<std::vector<int>> action_;

  void validate() const;
};

Presheaf terminal_presheaf(std::shared_ptr<const FinCategory> site);
Presheaf initial_presheaf(std::shared_ptr<const FinCategory> site);
/// Same carrier at every object, all actions the identity.
Presheaf constant_presheaf(std::shared_ptr<const FinCategory> site, std::vector<std::string> names);
/// Representable at c: carrier at d is Hom(d, c), action by precomposition.
Presheaf yoneda(std::shared_ptr<const FinCategory> site, int obj);

/// A natural transformation, validated on construction.
class PresheafMap {
 public:
  PresheafMap() = default;
  PresheafMap(Presheaf dom, Presheaf cod, std::vector<std::vector<int>> component);

  static PresheafMap identity(const Presheaf& x);

  const Presheaf& dom() const { return dom_; }
  const Presheaf& cod() const { return cod_; }
  int at(int obj, int i) const { return component_[obj][i]; }
  const std::vector<int>& component(int obj) const { return component_[obj]; }

  bool monic() const;  // componentwise injective
  bool epic() const;   // componentwise surjective
  bool is_iso() const;
  PresheafMap inverse() const;

  bool operator==(const PresheafMap& other) const;
  bool operator!=(const PresheafMap& other) const { return !(*this == other); }
  std::string serialize() const;

 private:
  Presheaf dom_, cod_;
  std::vector<std::vector<int>> component_;
};

/// g after f.
PresheafMap compose(const PresheafMap& g, const PresheafMap& f);

/// The unique map X -> 1.
PresheafMap terminal_map(const Presheaf& x);

/// Natural map of representables induced by f : c -> d (postcomposition).
PresheafMap yoneda_map(std::shared_ptr<const FinCategory> site, int mor);
/// The map y(c) -> X picking out x in X(c) (the Yoneda correspondence).
PresheafMap yoneda_element(const Presheaf& x, int obj, int elem);

// ---------------------------------------------------------------------------
// finite limits and colimits

struct Diagram {
  struct Edge {
    int src, tgt;
    PresheafMap map;
  };
  std::vector<Presheaf> nodes;
  std::vector<Edge> edges;
};

struct Cone {
  Presheaf apex;
  std::vector<PresheafMap> legs;  // one per diagram node
};

struct LimitResult {
  Presheaf apex;
  std::vector<PresheafMap> projections;
  std::vector<std::vector<std::vector<int>>> tuples;      // [obj][apex idx] -> node components
  std::vector<std::map<std::vector<int>, int>> index_of;  // [obj] tuple -> apex idx
  /// Mediating map for a commuting cone; universal property holds by
  /// construction, uniqueness is checked by the test suite.
  PresheafMap mediate(const Cone& cone) const;
};

struct ColimitResult {
  Presheaf apex;
  std::vector<PresheafMap> injections;
  std::vector<std::vector<int>> offsets;   // [obj][node] -> first tagged index
  std::vector<std::vector<int>> class_of;  // [obj][tagged index] -> apex idx
  PresheafMap mediate(const Cone& cocone) const;  // legs: node -> apex of cocone
};

LimitResult limit(const Diagram& d, std::shared_ptr<const FinCategory> site);
ColimitResult colimit(const Diagram& d, std::shared_ptr<const FinCategory> site);

LimitResult product(const Presheaf& x, const Presheaf& y);
LimitResult pullback(const PresheafMap& f, const PresheafMap& g);  // cospan f: X->Z <- Y :g
LimitResult equalizer(const PresheafMap& f, const PresheafMap& g);
ColimitResult coproduct(const Presheaf& x, const Presheaf& y);
ColimitResult coequalizer(const PresheafMap& f, const PresheafMap& g);

/// X -> X*X induced by (id, id); the product is returned alongside.
struct DiagonalResult {
  LimitResult square;
  PresheafMap diag;
};
DiagonalResult diagonal(const Presheaf& x);

// ---------------------------------------------------------------------------
// exponentials

struct ExponentialResult {
  Presheaf exp;          // Y^X
  LimitResult prod;      // (Y^X) x X
  PresheafMap ev;        // (Y^X) x X -> Y
  Presheaf base, target; // X, Y
  std::vector<std::vector<PresheafMap>> families;  // carrier families per object
  std::vector<LimitResult> yprod;                  // y(c) x X per object
};

/// Y^X with carrier at c the natural families y(c) x X -> Y.
ExponentialResult exponential(const Presheaf& x, const Presheaf& y, const EnumLimits& lim = {});

/// Transpose of u : Z x X -> Y (with `zx` the product it is defined on).
PresheafMap curry(const ExponentialResult& e, const LimitResult& zx, const PresheafMap& u);
/// Inverse transpose of m : Z -> Y^X along the product `zx` of Z and X.
PresheafMap uncurry(const ExponentialResult& e, const LimitResult& zx, const PresheafMap& m);

// ---------------------------------------------------------------------------
// subobject classifier

/// A sieve is stored as a sorted list of (global) morphism indices with a
/// common target.
using Sieve = std::vector<int>;

struct OmegaData {
  Presheaf omega;
  Presheaf unit;                          // the terminal presheaf used by the points
  std::vector<std::vector<Sieve>> sieves; // [obj][elem index in omega]
  PresheafMap truth;    // 1 -> omega, maximal sieves
  PresheafMap falsity;  // 1 -> omega, empty sieves
  PresheafMap negation; // omega -> omega, Heyting negation
  LimitResult square;   // omega x omega
  PresheafMap meet;     // omega x omega -> omega, sieve intersection

  int sieve_index(int obj, const Sieve& s) const;
};

OmegaData compute_omega(std::shared_ptr<const FinCategory> site);

// ---------------------------------------------------------------------------
// hom-set enumeration

/// All natural transformations X -> Y in deterministic (lexicographic)
/// order. Throws BoundError naming the budget when the backtracking
/// search would visit more than lim.max_nodes assignments.
std::vector<PresheafMap> hom_enumerate(const Presheaf& x, const Presheaf& y, const EnumLimits& lim = {});

/// Lexicographically least serialization over carrier relabelings;
/// equal canonical forms <=> isomorphic presheaves.
std::string canonical_form(const Presheaf& x);
std::optional<PresheafMap> find_iso(const Presheaf& x, const Presheaf& y);
bool isomorphic(const Presheaf& x, const Presheaf& y);

/// All presheaves with at most `max_per_object` elements in each carrier,
/// one representative per isomorphism class, deterministically ordered.
std::vector<Presheaf> enumerate_presheaves(std::shared_ptr<const FinCategory> site, int max_per_object,
                                           const EnumLimits& lim = {});

// ---------------------------------------------------------------------------
// category of elements

/// The category of elements of X: objects are pairs (c, x in X(c)); a
/// morphism (c, x) -> (d, y) is a site morphism f : c -> d with X(f)(y) = x.
/// `objects[k]` gives the (site object, element) pair of the k-th object of
/// `cat`; `projection` forgets the element.
struct ElementsCategory {
  std::shared_ptr<const FinCategory> cat;
  std::vector<std::pair<int, int>> objects;
  FinFunctor projection;
};

ElementsCategory category_of_elements(const Presheaf& x);

/// Connected components of the category of elements, blocks listed by
/// least member in (object, element) order.
std::vector<std::vector<std::pair<int, int>>> element_components(const Presheaf& x);

}  // namespace toposlab
