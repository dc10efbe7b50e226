// Positive decisions. posdec(A, B, C) is an extension formula equivalent to
// A or (B and C), built by recursion on B so that conjunction never appears:
// the decision structure of B steers between A and A or C. Alongside the
// formula itself, four "truth" sequents relate it to its parts and two
// derived rules introduce it on either side of a sequent; everything is in
// the positive fragment, so this is how conjunction is eliminated.
#pragma once

#include <cstdint>

#include "bpw/builder.hpp"
#include "bpw/core.hpp"

namespace bpw {

// The formula for posdec(a, b, c), defining the extension variables it
// needs into the builder's axiom set. b must be or/and-free above its
// extension variables and e-sorted; conjunction in b is an error.
const Formula* posdec(ProofBuilder& pb, const Formula* a, const Formula* b,
                      const Formula* c);

// Proof lines for the characteristic sequents of P = posdec(a, b, c):
//   t1: P |- a, b      t2: P |- a, c      t3: a |- P      t4: b, c |- P
struct PosTruth {
  const Formula* p = nullptr;
  uint32_t t1 = 0, t2 = 0, t3 = 0, t4 = 0;
};
PosTruth pos_truth_proofs(ProofBuilder& pb, const Formula* a, const Formula* b,
                          const Formula* c);

// Derived introduction rules for P = posdec(a, b, c).
// Left: from Gamma, a |- Delta and Gamma, b, c |- Delta derive
// Gamma, P |- Delta. Right: from Gamma |- Delta, a, b and
// Gamma |- Delta, a, c derive Gamma |- Delta, P. When the premise contexts
// differ the conclusion is over their union.
uint32_t posdec_left(ProofBuilder& pb, const Formula* a, const Formula* b,
                     const Formula* c, uint32_t r1, uint32_t r2);
uint32_t posdec_right(ProofBuilder& pb, const Formula* a, const Formula* b,
                      const Formula* c, uint32_t r1, uint32_t r2);

enum class PosSide { Left, Right };
inline uint32_t derive_posdec_step(ProofBuilder& pb, const Formula* a,
                                   const Formula* b, const Formula* c,
                                   PosSide side, uint32_t r1, uint32_t r2) {
  return side == PosSide::Left ? posdec_left(pb, a, b, c, r1, r2)
                               : posdec_right(pb, a, b, c, r1, r2);
}

}  // namespace bpw
