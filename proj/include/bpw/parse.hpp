// Text format for formulas, queries, sequents and axiom files.
//
//   formula  ::= 0 | 1 | pNAME | eNAME | uNAME | xNAME
//              | dec(formula, pNAME, formula)
//              | or(formula, formula) | and(formula, formula)
//   query    ::= formula | not(query) | or(query, query) | and(query, query)
//   sequent  ::= cedent "|-" cedent        (cedent = comma list, may be empty)
//   axioms   ::= { VAR ":=" formula }      ('#' comments to end of line)
//
// Variable tokens are the sort letter followed by a nonempty identifier
// tail. "<sort>g<digits>" names are reserved for generated variables and
// are rejected by the parser; rendering an axiom set assigns fresh names
// to generated variables instead.
#pragma once

#include <string>
#include <string_view>
#include <unordered_map>

#include "bpw/axioms.hpp"
#include "bpw/core.hpp"
#include "bpw/sequent.hpp"

namespace bpw {

const Formula* parse_formula(std::string_view text);
const Query* parse_query(std::string_view text);
Sequent parse_sequent(std::string_view text);
AxiomSetPtr parse_axioms(std::string_view text);

// Textual names for generated extension variables, chosen per axiom set so
// serialized artifacts never contain reserved names.
struct RenderNames {
  std::unordered_map<EVarId, std::string> map;
};
RenderNames render_names_for(const ExtAxiomSet& E);

std::string render(const Formula* f, const RenderNames* names = nullptr);
std::string render(const Query* q, const RenderNames* names = nullptr);
std::string render(const Sequent& s, const RenderNames* names = nullptr);
std::string render_axioms(const ExtAxiomSet& E);

}  // namespace bpw
