// Sequents are pairs of query multisets (cedents). Plain decision systems
// only ever put Base queries in cedents; the LK-style systems also allow
// negations and query-tier connectives. Order matters for the strict
// checker; the multiset checker and the proof store work with the canonical
// form, which sorts each cedent by node id.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bpw/core.hpp"

namespace bpw {

using Cedent = std::vector<const Query*>;

struct Sequent {
  Cedent left, right;
};

bool operator==(const Sequent& x, const Sequent& y);
bool operator!=(const Sequent& x, const Sequent& y);

Sequent canonical(const Sequent& s);
bool same_multiset(const Sequent& x, const Sequent& y);
uint64_t sequent_key(const Sequent& s);  // hash of the canonical form
uint64_t sequent_symbols(const Sequent& s);

// Multiset difference x \ y (by interned identity); empty result means
// y covers x.
Cedent cedent_minus(const Cedent& x, const Cedent& y);
bool cedent_contains(const Cedent& xs, const Query* q);
// Multiset union: one copy of each shared element per max multiplicity.
Cedent cedent_union(const Cedent& x, const Cedent& y);

// Connective views that see through the two-tier representation: a
// disjunction member is either a query-tier Or or a Base over an Or
// formula, and similarly for conjunctions and decisions.
bool q_is_or(const Query* q);
bool q_is_and(const Query* q);
bool q_is_not(const Query* q);
bool q_is_dec(const Query* q);
bool q_is_c0(const Query* q);
bool q_is_c1(const Query* q);
bool q_is_evar(const Query* q);
const Query* q_left(const Query* q);   // or/and components
const Query* q_right(const Query* q);
PVarId q_dec_var(const Query* q);
const Query* q_dec0(const Query* q);
const Query* q_dec1(const Query* q);

}  // namespace bpw
