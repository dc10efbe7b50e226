// Semantics relative to an axiom set: evaluation, truth tables, sequent
// validity by enumeration, unfolding of extension variables, and the
// syntactic simulation preorder.
#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bpw/axioms.hpp"
#include "bpw/core.hpp"
#include "bpw/sequent.hpp"

namespace bpw {

// Enumeration guard, from BPW_MAX_VARS (default 20).
int max_enum_vars();

using Assignment = std::unordered_map<PVarId, bool>;

// Errors on unassigned variables and on undefined extension variables.
bool evaluate(const Formula* f, const ExtAxiomSet& E, const Assignment& alpha);
bool evaluate(const Query* q, const ExtAxiomSet& E, const Assignment& alpha);

// Truth table over the free variables, ascending; assignment index bit i is
// the value of vars[i].
struct TruthTable {
  std::vector<PVarId> vars;
  std::vector<uint64_t> bits;  // 2^vars.size() bits in little-endian words
  bool bit(uint64_t idx) const {
    return (bits[idx >> 6] >> (idx & 63)) & 1;
  }
  uint64_t rows() const { return 1ull << vars.size(); }
  uint64_t count_true() const;
};
TruthTable truth_table(const Formula* f, const ExtAxiomSet& E);

// A sequent is valid when every assignment making all of the left cedent
// true makes some member of the right cedent true. Enumerates the free
// variables of the whole sequent.
bool sequent_valid(const Sequent& s, const ExtAxiomSet& E);
// As above, returning a falsifying assignment when one exists.
std::optional<std::vector<std::pair<PVarId, bool>>> sequent_countermodel(
    const Sequent& s, const ExtAxiomSet& E);

// Replaces extension variables by their definitions, bottom-up. Only defined
// for or/and-free formulas; errors when the result would exceed `cap`
// symbols.
const Formula* unfold(const Formula* f, const ExtAxiomSet& E,
                      uint64_t cap = 1ull << 20);

// Simulation preorder: check_simulation(a, b) holds when b |- a has a
// syntax-directed proof. Closed under reflexivity, splitting a disjunction
// on either side, unfolding an extension variable on either side, and
// decomposing decisions on the same variable componentwise.
bool check_simulation(const Formula* a, const Formula* b, const ExtAxiomSet& E);

}  // namespace bpw
