// Sequent calculus systems and their rule inventories. All systems share
// the structural core (identity, cut, exchange, weakening, contraction,
// constant rules, decision rules); they differ in which connective rules
// are available, whether extension lines are allowed, and which formula
// class cedent members must come from.
#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "bpw/axioms.hpp"
#include "bpw/core.hpp"

namespace bpw {

enum class Rule : uint8_t {
  Id, Cut, ExL, ExR, WL, WR, CL, CR,
  ZeroL, ZeroR, OneL, OneR,
  OrL, OrR, DecL, DecR,
  NotL, NotR, AndL, AndR,
  Ext,
};

const char* rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& name);

enum class System : uint8_t {
  LDT, LNDT, eLDT, eLNDT, LK_eLDT, LKpos_eLNDT, co_eLNDT, eL_EA_DT,
};

const char* system_name(System s);
std::optional<System> system_from_name(const std::string& name);

bool system_allows(System s, Rule r);
// Whether a query may appear in a cedent of the system.
bool system_allows_member(System s, const Query* q, const ExtAxiomSet& E);

}  // namespace bpw
