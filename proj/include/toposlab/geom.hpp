#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "toposlab/decidable.hpp"

namespace toposlab {

/// A topos the engine can quantify over: either all presheaves on a finite
/// site, or an explicit full subcategory of such a topos (the bounded
/// shadow of Dec(E) or of the sheaf subtopos). Objects of a subcategory
/// are presheaves of the ambient topos; hom-sets are ambient hom-sets.
class Topos {
 public:
  enum class Kind { presheaves, subcategory };

  static std::shared_ptr<Topos> presheaves_on(std::shared_ptr<const FinCategory> site,
                                              std::string label);
  static std::shared_ptr<Topos> subcategory_of(std::shared_ptr<const FinCategory> site,
                                               std::vector<Presheaf> objects, std::string label,
                                               std::function<bool(const Presheaf&)> member);

  Kind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  const std::shared_ptr<const FinCategory>& site_ptr() const { return site_; }
  const FinCategory& site() const { return *site_; }

  /// Representatives of the objects to quantify over. For a presheaf topos
  /// this enumerates presheaves up to iso at the bound (cached); for a
  /// subcategory it filters the stored objects by carrier bound.
  std::vector<Presheaf> objects(int max_per_object) const;

  bool contains(const Presheaf& x) const;  // subcategory membership (true for presheaf kind)

  Presheaf terminal() const { return terminal_presheaf(site_); }
  Presheaf initial() const { return initial_presheaf(site_); }

  const OmegaData& omega() const;      // presheaf kind only
  const LTTopology& negneg() const;    // presheaf kind only

  /// Subobject classifier of the topos. For the presheaf kind this is
  /// Omega; for a subcategory it must have been installed (and verified)
  /// by the geometric-morphism constructor.
  struct Classifier {
    Presheaf object;
    PresheafMap point;     // 1 -> object (truth)
    PresheafMap negation;  // object -> object, classifies the zero point
    PresheafMap zero;      // 1 -> object (falsity)
  };
  const Classifier& classifier() const;
  void install_classifier(Classifier c) { classifier_ = std::move(c); }
  bool has_classifier() const;

  /// Classifying map of u inside this topos; for a subcategory this is the
  /// ambient classifying map corestricted to the subcategory classifier.
  PresheafMap classify_sub(const Subobject& u) const;

  /// Internal negation squared equals the identity.
  bool boolean() const;

 private:
  Kind kind_;
  std::string label_;
  std::shared_ptr<const FinCategory> site_;
  std::vector<Presheaf> subcat_objects_;
  std::function<bool(const Presheaf&)> member_;
  std::optional<Classifier> classifier_;
  mutable std::map<int, std::vector<Presheaf>> objects_cache_;
  mutable std::optional<OmegaData> omega_cache_;
  mutable std::optional<LTTopology> negneg_cache_;
};

using ToposPtr = std::shared_ptr<Topos>;

struct Functor {
  ToposPtr dom, cod;
  std::function<Presheaf(const Presheaf&)> on_obj;
  std::function<PresheafMap(const PresheafMap&)> on_map;
  Presheaf operator()(const Presheaf& x) const { return on_obj(x); }
  PresheafMap operator()(const PresheafMap& f) const { return on_map(f); }
};

/// Natural transformation presented by its components.
using Natural = std::function<PresheafMap(const Presheaf&)>;

/// A geometric morphism packaged as its adjoint string. `discrete` is the
/// inverse image, `points` the direct image; `pieces` (leftmost) and
/// `codiscrete` (rightmost) are present when the morphism is essential
/// resp. local. Units and counits are materialized per object.
struct GeomMorphism {
  ToposPtr source, target;

  Functor discrete;  // p^* : target -> source
  Functor points;    // p_* : source -> target
  std::optional<Functor> pieces;      // p_! : source -> target
  std::optional<Functor> codiscrete;  // p^! : target -> source

  Natural unit_points;    // A -> p_*(p^* A)
  Natural counit_points;  // p^*(p_* X) -> X
  Natural unit_pieces;      // X -> p^*(p_! X)        (when essential)
  Natural counit_pieces;    // p_!(p^* A) -> A        (when essential)
  Natural unit_codiscrete;  // X -> p^!(p_* X)        (when local)
  Natural counit_codiscrete;// p_*(p^! A) -> A        (when local)

  /// Witness of the failed forced-formula verification when the codiscrete
  /// leg is absent.
  std::string codiscrete_failure;

  bool has_pieces() const { return pieces.has_value(); }
  bool has_codiscrete() const { return codiscrete.has_value(); }
};

/// The canonical morphism PSh(C) -> Sets: discrete/points/pieces always
/// materialized, codiscrete attempted by the forced formula
/// p^! A at c = Hom(p_*(y c), A) and kept only if the adjunction verifies.
GeomMorphism canonical_to_sets(std::shared_ptr<const FinCategory> site, int bound,
                               const EnumLimits& lim = {});

/// The hyperconnected morphism E -> Dec(E) induced by the decidable
/// coreflection. Throws BoundError-style failure if the coreflection is
/// missing for some object at the bound.
struct DecMorphismOutcome {
  std::optional<GeomMorphism> morphism;
  std::string failure;  // set when the coreflection is missing
};
DecMorphismOutcome from_dec_coreflection(std::shared_ptr<const FinCategory> site, int bound,
                                         const EnumLimits& lim = {});

/// Bounded search for a left adjoint of the inclusion of a subcategory
/// target: for each source object the initial epi onto a target object,
/// verified by counting factorizations. Installs the pieces leg with its
/// unit (the epi) and counit when the search succeeds on every bounded
/// object; otherwise reports a witness and leaves the morphism unchanged.
bool install_subcategory_pieces(GeomMorphism& q, int bound, std::string* witness,
                                const EnumLimits& lim = {});

// ---------------------------------------------------------------------------
// verdicts and flags

enum class Tri { yes, no, unknown };

struct Flag {
  Tri value = Tri::unknown;
  std::string witness;
};

struct MorphismFlags {
  Flag connected, hyperconnected, essential, pressential, local, nullstellensatz,
      stably_pressential;
  int bound = 0;
};

struct OmegaComparison {
  PresheafMap tau;  // p_*(Omega_E) -> Omega_S, the classifying map of p_* top
  bool iso = false;
  std::string witness;
};

/// tau as the classifying map of p_* top; the defining square is re-verified
/// by pulling the target point back along tau.
OmegaComparison omega_comparison(const GeomMorphism& p);

MorphismFlags classify_morphism(const GeomMorphism& p, int bound, const EnumLimits& lim = {});

/// theta_X : p_* X -> p_! X, the composite of the inverse of the pieces
/// counit at p_* X with p_! beta_X; requires p connected essential.
PresheafMap points_to_pieces(const GeomMorphism& p, const Presheaf& x);
/// theta epic for every source object at the bound.
Flag nullstellensatz(const GeomMorphism& p, int bound, const EnumLimits& lim = {});

bool direct_image_reflects_zero(const GeomMorphism& p, int bound, std::string* witness = nullptr,
                                const EnumLimits& lim = {});
bool direct_image_preserves_zero(const GeomMorphism& p);

/// p^!(0) initial, with the subterminality pre-check; requires p local.
struct ShriekZeroReport {
  bool subterminal = false;
  bool initial = false;
};
ShriekZeroReport shriek_preserves_zero(const GeomMorphism& p);

/// Canonical comparison p^*(B^A) -> (p^*B)^(p^*A) is iso for all A, B at
/// the bound.
Flag cartesian_closed_check(const GeomMorphism& p, int bound, const EnumLimits& lim = {});

// ---------------------------------------------------------------------------
// slicing

/// An object of the slice topos over `base`: a presheaf map into it.
struct SliceObject {
  PresheafMap down;
};

/// The sliced geometric morphism p/B : E/p^*B -> S/B, with the direct and
/// pieces images given by postcomposition with the inverted unit resp. the
/// pieces counit.
struct SlicedMorphism {
  const GeomMorphism* base;
  Presheaf b;        // B in the target
  Presheaf pb;       // p^* B in the source
  PresheafMap unit_inv;   // p_*(p^* B) -> B, inverse of the unit (connected)
  PresheafMap pieces_counit;  // p_!(p^* B) -> B (essential)

  SliceObject star(const SliceObject& a) const;    // apply p^* to a : A -> B
  SliceObject direct(const SliceObject& x) const;  // unit_inv . p_* x
  SliceObject pieces_of(const SliceObject& x) const;  // pieces_counit . p_! x
};

SlicedMorphism slice(const GeomMorphism& p, const Presheaf& b);

/// All slice objects over `base` with total carriers at the bound.
std::vector<SliceObject> slice_objects(const ToposPtr& topos, const Presheaf& base, int bound,
                                       const EnumLimits& lim = {});
/// Maps of the slice: underlying maps commuting with the structure maps.
std::vector<PresheafMap> slice_hom(const SliceObject& a, const SliceObject& b,
                                   const EnumLimits& lim = {});

/// Index pairs in growing-square order (diagonal of every prefix first);
/// used to sample object pairs deterministically under a budget.
std::vector<std::pair<int, int>> sample_pairs(int n, int max_pairs);

Flag slice_hyperconnected(const GeomMorphism& p, const Presheaf& b, int bound,
                          const EnumLimits& lim = {});
Flag slice_pieces_preserves_products(const GeomMorphism& p, const Presheaf& b, int bound,
                                     int max_pairs, const EnumLimits& lim = {});
Flag slice_adjunctions(const GeomMorphism& p, const Presheaf& b, int bound,
                       const EnumLimits& lim = {});

// ---------------------------------------------------------------------------
// functor-level checks (shared by the theorem suite)

Flag preserves_terminal(const Functor& f);
Flag preserves_binary_products(const Functor& f, int bound, const EnumLimits& lim = {});
Flag preserves_binary_coproducts(const Functor& f, int bound, const EnumLimits& lim = {});
Flag reflects_initial(const Functor& f, int bound, const EnumLimits& lim = {});
Flag fully_faithful(const Functor& f, int bound, const EnumLimits& lim = {});

bool subterminal(const Presheaf& x);

// ---------------------------------------------------------------------------
// the sheaf subtopos and UIAO

/// The reflective subtopos of negneg-sheaves at a bound: `reflect` is
/// sheafification, `include` the inclusion; `objects` are the sheafified
/// representatives of the bounded enumeration.
struct SheafSubtopos {
  ToposPtr sheaves;  // subcategory handle
  Functor include;   // sheaves -> E (identity on data)
  Functor reflect;   // E -> sheaves (sheafification)
  Natural unit;      // X -> include(reflect X)
};
SheafSubtopos sheaf_subtopos(const ToposPtr& source, int bound, const EnumLimits& lim = {});

struct UiaoReport {
  bool ok = false;
  std::string failure;                // first broken identity, when not ok
  std::vector<std::string> details;   // the verified sections/retraction data
};

/// Verifies the unity-and-identity structure over the canonical morphism:
/// discrete and codiscrete inclusions as the two sections of the points
/// functor, fully faithful ends, exact triangle identities, the image of
/// the discrete leg agreeing with Dec(E) and the codiscrete leg with the
/// negneg-sheaves, and the Dec(E) ~ E_negneg identification through the
/// composite adjoint equivalence.
UiaoReport uiao_verify(std::shared_ptr<const FinCategory> site, int bound,
                       const EnumLimits& lim = {});

// helpers shared with the theorem suite
std::vector<PresheafMap> sections_of(const Presheaf& x);  // used by tests

/// p_* applied to a subobject: the image of p_*(inclusion) in p_* X.
Subobject points_of_subobject(const GeomMorphism& p, const Subobject& u);

/// Search for the unique map commuting with the given pair of maps
/// (h . before = after); used to transport maps along reflections.
std::optional<PresheafMap> unique_factor(const Presheaf& from, const Presheaf& to,
                                         const PresheafMap& before, const PresheafMap& after,
                                         const EnumLimits& lim = {});

}  // namespace toposlab
