// Core object model: interned formulas and queries over decision/extension
// syntax, plus the global symbol tables for propositional and extension
// variables. All nodes are hash-consed, so structural equality is pointer
// equality everywhere downstream.
#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace bpw {

using PVarId = uint32_t;
using EVarId = uint32_t;

struct BpwError : std::runtime_error {
  explicit BpwError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Sort : uint8_t { E, U, X };

char sort_letter(Sort s);

enum class FKind : uint8_t { C0, C1, PVar, EVar, Dec, Or, And };

// Immutable interned formula node. `var` holds the propositional variable for
// PVar and Dec nodes and the extension variable for EVar nodes. For Dec, `a`
// is the 0-branch and `b` the 1-branch.
struct Formula {
  FKind kind;
  uint32_t var;
  const Formula* a;
  const Formula* b;
  uint32_t id;
  // Symbol count: leaves are 1 symbol, or/and add 1, a decision contributes
  // only its variable (1) on top of the children. Saturating.
  uint64_t symbols;
};

enum class QKind : uint8_t { Base, Not, QOr, QAnd };

// Query: Boolean combination of formulas. Two-tiered by construction: the
// smart constructors collapse a connective over two Base children into the
// corresponding formula node, so query-tier Or/And only appear when a `not`
// (or a mixed child) forces them.
struct Query {
  QKind kind;
  const Formula* f;  // Base only
  const Query* a;
  const Query* b;
  uint32_t id;
  uint64_t symbols;
};

// Formula constructors (interned).
const Formula* f0();
const Formula* f1();
const Formula* fconst(bool b);
const Formula* fpvar(PVarId p);
const Formula* fevar(EVarId e);
const Formula* fdec(const Formula* a, PVarId p, const Formula* b);
const Formula* f_or(const Formula* a, const Formula* b);
const Formula* f_and(const Formula* a, const Formula* b);

// Query constructors (interned, normalizing).
const Query* qbase(const Formula* f);
const Query* qnot(const Query* q);
const Query* qor(const Query* a, const Query* b);
const Query* qand(const Query* a, const Query* b);

// Propositional variable table. Names are stored without the leading 'p'.
PVarId pvar_id(const std::string& name);
const std::string& pvar_name(PVarId p);
std::string pvar_text(PVarId p);  // "p" + name

// Extension variable registry. A variable is either *named* (came from a
// source file, rendered as written) or *generated* (created by a
// construction, identified by a structural key so that re-running the same
// construction yields the same variable). Generated variables render with a
// reserved "<sort>g<n>" name; axiom-file serialization renames per set.
EVarId evar_named(const std::string& name);  // name includes the sort letter
EVarId evar_generated(Sort s, const std::string& key);
Sort evar_sort(EVarId v);
const std::string& evar_name(EVarId v);
bool evar_is_generated(EVarId v);
const std::string& evar_key(EVarId v);  // empty for named vars
bool evar_name_reserved(const std::string& name);

// Interns a list of formulas; used to key stores on a fixed formula vector.
uint32_t formula_list_id(const std::vector<const Formula*>& fs);

}  // namespace bpw
