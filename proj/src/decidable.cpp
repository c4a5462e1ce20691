#include "toposlab/decidable.hpp"

#include <algorithm>

namespace toposlab {

DecVerdict is_decidable(const Presheaf& x, const EnumLimits& lim) {
  (void)lim;
  DecVerdict v;
  DiagonalResult dr = diagonal(x);
  Subobject diag = image(dr.diag);
  Subobject comp = sub_not(diag);
  Subobject join = sub_join(diag, comp);
  v.decidable = join.is_full();
  if (v.decidable) {
    v.complement = comp;
  } else {
    const Presheaf& sq = dr.square.apex;
    for (int o = 0; o < sq.site().num_objects() && v.witness.empty(); ++o)
      for (int i = 0; i < sq.size(o); ++i)
        if (!join.contains(o, i)) {
          v.witness = "pair " + sq.elem_name(o, i) + " at " + sq.site().object_name(o) +
                      " is neither diagonal nor disjoint from it";
          break;
        }
  }
  return v;
}

std::vector<Presheaf> dec_objects(std::shared_ptr<const FinCategory> site, int max_per_object,
                                  const EnumLimits& lim) {
  std::vector<Presheaf> out;
  for (Presheaf& x : enumerate_presheaves(std::move(site), max_per_object, lim))
    if (is_decidable(x, lim).decidable) out.push_back(std::move(x));
  return out;
}

std::optional<Subobject> largest_decidable_subobject(const Presheaf& x, std::string* witness,
                                                     const EnumLimits& lim) {
  std::vector<Subobject> decidable_subs;
  for (const Subobject& u : subobjects_of(x, lim))
    if (is_decidable(u.domain(), lim).decidable) decidable_subs.push_back(u);

  Subobject candidate = Subobject::empty_in(x);
  for (const Subobject& u : decidable_subs) candidate = sub_join(candidate, u);

  if (!is_decidable(candidate.domain(), lim).decidable) {
    if (witness) {
      std::vector<std::string> maximal;
      for (const Subobject& u : decidable_subs) {
        bool is_max = true;
        for (const Subobject& v : decidable_subs)
          if (u != v && u.subset_of(v)) is_max = false;
        if (is_max) maximal.push_back(u.describe());
      }
      *witness = "decidable subobjects have no decidable maximum; maximal antichain: " +
                 join(maximal, " | ");
    }
    return std::nullopt;
  }
  return candidate;
}

CoreflectionOutcome dec_coreflection(const Presheaf& x, int bound, const EnumLimits& lim) {
  CoreflectionOutcome res;

  std::string witness;
  std::optional<Subobject> cand = largest_decidable_subobject(x, &witness, lim);
  if (!cand) {
    res.status = CoreflectionOutcome::Status::no_maximum;
    res.witness = witness;
    return res;
  }
  Subobject candidate = *cand;

  // universal property at the bound
  for (const Presheaf& d : dec_objects(x.site_ptr(), bound, lim)) {
    for (const PresheafMap& h : hom_enumerate(d, x, lim)) {
      if (!image(h).subset_of(candidate)) {
        res.status = CoreflectionOutcome::Status::not_universal;
        res.witness = "map from decidable object " + d.serialize() +
                      " does not factor through the candidate " + candidate.describe();
        return res;
      }
    }
  }

  res.status = CoreflectionOutcome::Status::ok;
  res.value = Coreflection{candidate, candidate.inclusion(), bound};
  return res;
}

McLartyOutcome mclarty_subobject(const Presheaf& x, const EnumLimits& lim) {
  McLartyOutcome res;
  auto globals = hom_enumerate(terminal_presheaf(x.site_ptr()), x, lim);
  if (globals.empty()) res.note = "no global elements: the factoring condition is vacuous";

  std::vector<Subobject> candidates;
  for (const Subobject& u : subobjects_of(x, lim)) {
    if (!is_decidable(u.domain(), lim).decidable) continue;
    bool receives_all = true;
    for (const PresheafMap& g : globals)
      if (!image(g).subset_of(u)) receives_all = false;
    if (receives_all) candidates.push_back(u);
  }
  for (const Subobject& u : candidates) {
    bool is_max = true;
    for (const Subobject& v : candidates)
      if (u != v && u.subset_of(v)) is_max = false;
    if (is_max) res.candidates.push_back(u);
  }
  return res;
}

}  // namespace toposlab
