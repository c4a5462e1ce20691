#pragma once

#include <optional>
#include <string>
#include <vector>

#include "toposlab/sublattice.hpp"

namespace toposlab {

struct DecVerdict {
  bool decidable = false;
  std::optional<Subobject> complement;  // K with X x X = diagonal + K
  std::string witness;                  // an element outside diag v ~diag when not decidable
};

/// X is decidable iff its diagonal is a complemented subobject of X x X.
DecVerdict is_decidable(const Presheaf& x, const EnumLimits& lim = {});

/// All decidable presheaves with carriers of at most `max_per_object`
/// elements, one representative per isomorphism class.
std::vector<Presheaf> dec_objects(std::shared_ptr<const FinCategory> site, int max_per_object,
                                  const EnumLimits& lim = {});

struct Coreflection {
  Subobject core;      // CX, the largest decidable subobject
  PresheafMap counit;  // the monic inclusion CX -> X
  int verified_bound;  // size up to which the universal property was checked
};

struct CoreflectionOutcome {
  enum class Status {
    ok,            // candidate found and universal property verified at bound
    no_maximum,    // decidable subobjects have no decidable join: refuted
    not_universal  // a decidable map refuses to factor: refuted
  };
  Status status = Status::ok;
  std::optional<Coreflection> value;
  std::string witness;
};

/// Candidate: join of all decidable subobjects, re-tested for decidability.
/// Then every map D -> X with D decidable of size <= bound must factor
/// (uniquely, since the counit is monic) through the candidate.
CoreflectionOutcome dec_coreflection(const Presheaf& x, int bound, const EnumLimits& lim = {});

/// The coreflection candidate alone: the join of all decidable subobjects
/// when it is itself decidable. No universal-property verification.
std::optional<Subobject> largest_decidable_subobject(const Presheaf& x, std::string* witness = nullptr,
                                                     const EnumLimits& lim = {});

struct McLartyOutcome {
  /// Maximal subobjects with decidable domain through which every global
  /// element factors. A singleton means the characterization applies.
  std::vector<Subobject> candidates;
  std::string note;  // set when the hypothesis degenerates (no global elements)
  bool unique() const { return candidates.size() == 1; }
};

McLartyOutcome mclarty_subobject(const Presheaf& x, const EnumLimits& lim = {});

}  // namespace toposlab
