// Turns a successful simulation check into a sequent proof. When
// check_simulation(a, b) holds, the closure derivation is replayed rule by
// rule into a proof of b |- a; the proof lands in the ∨-free system when
// both programs and all reachable definitions are ∨-free.
#pragma once

#include "bpw/builder.hpp"
#include "bpw/core.hpp"
#include "bpw/proof.hpp"

namespace bpw {

// Adds the lines for b |- a to pb and returns the final line. Throws when
// a is not simulated by b over pb's axioms.
uint32_t prove_simulation_line(ProofBuilder& pb, const Formula* a,
                               const Formula* b);

// Standalone proof of b |- a over E.
Proof prove_simulation(const Formula* a, const Formula* b,
                       const AxiomSetPtr& E);

}  // namespace bpw
