// Extension axiom sets: ordered, well-founded lists of (variable, body)
// pairs, plus the per-set caches for classification, evaluation support and
// the simulation preorder.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bpw/core.hpp"

namespace bpw {

// Transitive structural flags of a formula relative to an axiom set.
// Extension variables fold in the flags of their bodies.
enum FormulaFlags : uint32_t {
  FF_OR = 1u << 0,
  FF_AND = 1u << 1,
  FF_SORT_E = 1u << 2,
  FF_SORT_U = 1u << 3,
  FF_SORT_X = 1u << 4,
  FF_OR_UNDER_AND = 1u << 5,
  FF_X_UNDER_AND = 1u << 6,
  FF_AND_UNDER_DEC = 1u << 7,
  FF_OR_UNDER_DEC = 1u << 8,
  FF_UNDEF_EVAR = 1u << 9,
};

// Named formula classes used for reporting; checks below are the real gates.
enum class FormulaClass { DT, NDT, eDT, eNDT, CoeNDT, EAFDT, Other };

struct ExtAxiomSet {
  uint32_t sid = 0;
  std::vector<std::pair<EVarId, const Formula*>> defs;  // position = idx
  std::unordered_map<EVarId, uint32_t> index;

  const Formula* def(EVarId v) const {
    auto it = index.find(v);
    return it == index.end() ? nullptr : defs[it->second].second;
  }
  bool has(EVarId v) const { return index.count(v) != 0; }
  int idx(EVarId v) const {
    auto it = index.find(v);
    return it == index.end() ? -1 : static_cast<int>(it->second);
  }

  // Per-set memo tables (keyed by interned node identity).
  mutable std::unordered_map<const Formula*, uint32_t> flags_memo;
  mutable std::unordered_map<const Formula*, std::vector<PVarId>> fv_memo;
  mutable std::unordered_map<uint64_t, int8_t> sim_memo;
  mutable std::unordered_map<const Formula*, const Formula*> unfold_memo;
};

using AxiomSetPtr = std::shared_ptr<const ExtAxiomSet>;

// Append-only builder enforcing define-before-use.
class AxiomSetBuilder {
 public:
  AxiomSetBuilder();
  explicit AxiomSetBuilder(const AxiomSetPtr& base);  // start from a copy

  bool defined(EVarId v) const { return work_->has(v); }
  const Formula* def(EVarId v) const { return work_->def(v); }
  // Defines v := body. Every extension variable in body must already be
  // defined. Redefinition with the same body is a no-op, otherwise an error.
  void define(EVarId v, const Formula* body);
  AxiomSetPtr snapshot() const;  // finalized copy of the current state
  const ExtAxiomSet& view() const { return *work_; }

 private:
  std::shared_ptr<ExtAxiomSet> work_;
};

AxiomSetPtr empty_axioms();

// Validation: well-foundedness (bodies only use earlier variables) and sort
// discipline (e-bodies are at most eNDT over e-vars, u-bodies at most co-eNDT
// over u-vars, x-bodies e-exists-forall-DT over u/x-vars).
struct ValidationReport {
  bool ok = true;
  std::string error;
};
ValidationReport validate_axioms(const ExtAxiomSet& E);

uint32_t formula_flags(const Formula* f, const ExtAxiomSet& E);

bool is_dt(const Formula* f, const ExtAxiomSet& E);
bool is_ndt(const Formula* f, const ExtAxiomSet& E);
bool is_edt(const Formula* f, const ExtAxiomSet& E);
bool is_endt(const Formula* f, const ExtAxiomSet& E);
bool is_coendt(const Formula* f, const ExtAxiomSet& E);
bool is_eafdt(const Formula* f, const ExtAxiomSet& E);
// Boolean combination of eDT formulas: or/and only above the decision tier.
bool is_bool_edt(const Formula* f, const ExtAxiomSet& E);
// Positive {or,and} combination of eNDT formulas: no and below a decision.
bool is_posbool_endt(const Formula* f, const ExtAxiomSet& E);

FormulaClass classify(const Formula* f, const ExtAxiomSet& E);
const char* class_name(FormulaClass c);

// Immediate predecessors in the well-founded order used for E-induction:
// children of a connective or decision, and the body of an extension
// variable.
std::vector<const Formula*> e_predecessors(const Formula* f, const ExtAxiomSet& E);

// Propositional variables occurring in f, following extension definitions.
// Returned sorted ascending; reference stays valid while the set lives.
const std::vector<PVarId>& free_pvars(const Formula* f, const ExtAxiomSet& E);

// Extension variables occurring structurally in f (definitions not followed).
std::vector<EVarId> evars_of(const Formula* f);

}  // namespace bpw
