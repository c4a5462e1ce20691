#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "toposlab/util.hpp"

namespace toposlab {

struct MorphismSpec {
  std::string name;
  std::string src;
  std::string tgt;
};

/// Raw description of a finite category: every morphism (identities
/// included) and a total composition table on composable pairs.
struct CategorySpec {
  std::vector<std::string> objects;
  std::vector<MorphismSpec> morphisms;
  std::map<std::string, std::string> identities;            // object -> morphism
  std::vector<std::array<std::string, 3>> compose;          // {g, f, g.f}
};

/// A finite category as explicit data. Objects and morphisms are kept in
/// lexicographic name order; all queries are index based. Instances are
/// immutable after construction and safe to share.
class FinCategory {
 public:
  /// Validates the spec eagerly: typing of the table, identity laws and
  /// associativity over all composable triples. Throws ValidationError
  /// naming the first offending morphisms.
  static FinCategory build(const CategorySpec& spec);
  static std::shared_ptr<const FinCategory> build_shared(const CategorySpec& spec);

  int num_objects() const { return static_cast<int>(objects_.size()); }
  int num_morphisms() const { return static_cast<int>(morphisms_.size()); }

  const std::string& object_name(int o) const { return objects_[o]; }
  const std::string& morphism_name(int m) const { return morphisms_[m].name; }
  int object_index(const std::string& name) const;
  int morphism_index(const std::string& name) const;

  int src(int m) const { return src_[m]; }
  int tgt(int m) const { return tgt_[m]; }
  int identity(int o) const { return identity_[o]; }
  bool is_identity(int m) const { return identity_[src_[m]] == m && src_[m] == tgt_[m]; }

  bool composable(int g, int f) const { return src_[g] == tgt_[f]; }
  /// g after f; requires src(g) == tgt(f).
  int compose(int g, int f) const;

  /// Morphisms with target `o`, ascending by index.
  const std::vector<int>& into(int o) const { return into_[o]; }
  /// Morphisms with source `o`, ascending by index.
  const std::vector<int>& out_of(int o) const { return out_[o]; }

  /// True when any two objects are linked by a zig-zag of morphisms.
  bool connected() const;

  bool operator==(const FinCategory& other) const;

  nlohmann::json to_json() const;
  static FinCategory from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> objects_;
  std::vector<MorphismSpec> morphisms_;
  std::vector<int> src_, tgt_;
  std::vector<int> identity_;
  std::vector<std::vector<int>> compose_;   // [g][f] or -1
  std::vector<std::vector<int>> into_, out_;
  std::map<std::string, int> obj_index_, mor_index_;

  void validate() const;
};

/// Site factory. Known names: terminal, parallel_pair, reflexive_graph,
/// delta0, delta1, delta2, zmod2, zmod3, idem, rzero. Throws on unknown
/// names.
std::shared_ptr<const FinCategory> standard_site(const std::string& name);

/// One-object site whose endomorphisms are the given monoid.
/// `table[i][j]` is the index of element i * element j; `unit` indexes the
/// neutral element. Element names double as morphism names.
std::shared_ptr<const FinCategory> monoid_site(const std::vector<std::string>& elements,
                                               const std::vector<std::vector<int>>& table,
                                               int unit);

/// Full subcategory of the simplex category on [0..n]; n <= 2.
std::shared_ptr<const FinCategory> delta_truncated(int n);

/// A functor between finite categories, validated on construction.
struct FinFunctor {
  std::shared_ptr<const FinCategory> dom, cod;
  std::vector<int> ob;    // object index -> object index
  std::vector<int> mor;   // morphism index -> morphism index

  FinFunctor(std::shared_ptr<const FinCategory> d, std::shared_ptr<const FinCategory> c,
             std::vector<int> ob_map, std::vector<int> mor_map);
};

/// Partition of the objects of C into connected components. Blocks are
/// listed by least member; each block is ascending.
std::vector<std::vector<int>> connected_components(const FinCategory& c);

/// Isomorphism search between small categories (<= 8 objects); above that
/// only identity of data is attempted.
bool categories_isomorphic(const FinCategory& a, const FinCategory& b);

}  // namespace toposlab
