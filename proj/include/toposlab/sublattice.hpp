#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toposlab/presheaf.hpp"

namespace toposlab {

/// A restriction-closed family of subsets of the carriers of an ambient
/// presheaf; the elements of the Heyting algebra Sub(X).
class Subobject {
 public:
  Subobject() = default;
  Subobject(Presheaf ambient, std::vector<std::vector<char>> mask);  // validates closure

  static Subobject full(const Presheaf& x);
  static Subobject empty_in(const Presheaf& x);

  const Presheaf& ambient() const { return ambient_; }
  bool contains(int obj, int i) const { return mask_[obj][i] != 0; }
  const std::vector<std::vector<char>>& mask() const { return mask_; }
  int count(int obj) const;
  int count() const;
  bool is_full() const;
  bool is_empty() const { return count() == 0; }
  bool subset_of(const Subobject& other) const;
  bool operator==(const Subobject& other) const;
  bool operator!=(const Subobject& other) const { return !(*this == other); }

  /// The domain as a standalone presheaf (selected elements keep their names).
  Presheaf domain() const;
  /// The inclusion domain() -> ambient.
  PresheafMap inclusion() const;

  std::string describe() const;

 private:
  Presheaf ambient_;
  std::vector<std::vector<char>> mask_;
};

// Heyting operations on Sub(X), computed by the pointwise formulas; no
// lattice enumeration required.
Subobject sub_meet(const Subobject& u, const Subobject& v);
Subobject sub_join(const Subobject& u, const Subobject& v);
/// (u => v)(c) = { x | every restriction of x lying in u lies in v }.
Subobject sub_implies(const Subobject& u, const Subobject& v);
Subobject sub_not(const Subobject& u);

/// True iff u v ~u is all of X; the witness is ~u.
bool is_complemented(const Subobject& u, Subobject* complement_out = nullptr);

/// All subobjects of X, ordered by (size, mask) so that the order is
/// compatible with inclusion.
std::vector<Subobject> subobjects_of(const Presheaf& x, const EnumLimits& lim = {});

/// Pointwise image of f, the least subobject of cod(f) through which f factors.
Subobject image(const PresheafMap& f);
/// Pullback of v along f (inverse image).
Subobject preimage(const Subobject& v, const PresheafMap& f);

/// The classifying map of u: chi_u(x) at c is the sieve of morphisms
/// restricting x into u. Pulling truth back along it recovers u exactly.
PresheafMap classify(const Subobject& u, const OmegaData& od);
/// chi^{-1}(truth) for any map chi : X -> Omega.
Subobject pullback_truth(const PresheafMap& chi, const OmegaData& od);

/// A Lawvere-Tierney topology presented by its operator j on Omega.
/// Construction validates j . truth = truth, j . j = j and commutation
/// with the internal meet.
struct LTTopology {
  OmegaData omega;
  PresheafMap j;
  std::vector<std::vector<char>> covering;  // [obj][sieve index]: j(S) maximal

  bool covers(int obj, int sieve_index) const { return covering[obj][sieve_index] != 0; }
  std::vector<int> covering_sieves(int obj) const;
};

LTTopology make_topology(OmegaData od, PresheafMap j);
/// j = not . not.
LTTopology negneg_topology(std::shared_ptr<const FinCategory> site);
LTTopology negneg_topology(OmegaData od);

/// j-closure of u inside its ambient presheaf: truth pulled back along j . chi_u.
Subobject closure(const Subobject& u, const LTTopology& top);
bool is_dense(const Subobject& u, const LTTopology& top);

struct SheafStatus {
  bool separated = false;
  bool sheaf = false;
  std::string witness;  // set when one of the flags is false
};

/// Separated iff the diagonal is j-closed in X x X. Sheaf additionally
/// requires every matching family on a covering sieve to have exactly one
/// amalgamation; over a finite site this test is exact.
SheafStatus sheaf_status(const Presheaf& x, const LTTopology& top, const EnumLimits& lim = {});

/// Bounded corroboration of sheafhood in its extension form: for every
/// dense mono U >-> Y with Y drawn from `test_objects`, restriction
/// Hom(Y, X) -> Hom(U, X) is a bijection.
bool dense_extension_check(const Presheaf& x, const LTTopology& top,
                           const std::vector<Presheaf>& test_objects, const EnumLimits& lim,
                           std::string* witness = nullptr);

/// The presheaf of j-closed sieves with its inclusion into Omega.
struct OmegaJ {
  Presheaf omega_j;
  PresheafMap include;                 // Omega_j -> Omega
  std::vector<std::vector<int>> back;  // [obj][omega idx] -> omega_j idx or -1
};
OmegaJ omega_j_of(const LTTopology& top);

struct Sheafification {
  Presheaf sheaf;
  PresheafMap unit;  // X -> sheaf
};

/// Two stages: quotient X by the j-closure of its diagonal (separated
/// reflection), then embed the quotient into Omega_j^S by the singleton
/// map and take the j-closure of its image.
Sheafification sheafify(const Presheaf& x, const LTTopology& top, const EnumLimits& lim = {});

// Matching-family machinery, shared with the sheaf tests.
struct MatchingFamily {
  Sieve sieve;                 // morphisms f : d -> c
  std::vector<int> values;     // x_f in X(src f), aligned with `sieve`
};
std::vector<MatchingFamily> matching_families(const Presheaf& x, int obj, const Sieve& sieve,
                                              const EnumLimits& lim = {});
std::vector<int> amalgamations(const Presheaf& x, int obj, const MatchingFamily& fam);

}  // namespace toposlab
