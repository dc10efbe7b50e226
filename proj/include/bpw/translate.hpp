// Proof translations between the calculi, in three groups.
//
// Boolean compilation: LK(eLDT) proofs become eLDT proofs by compiling
// query-level connectives into decision programs (negation pointwise,
// and/or by sink substitution); LK+(eLNDT) proofs become eLNDT proofs by
// reading conjunction as a positive decision.
//
// Duality: structural negation of or-free formulas, line-by-line
// dualization of co-eLNDT proofs into eLNDT proofs of the flipped
// sequent, and the round trip back to the original sequent when it
// mentions plain decision trees only.
//
// Inductive counting: eL-exists-forall-DT proofs collapse into eLNDT by
// counting true conjunctive parts. For a fixed k, every line is guarded
// by thresholds "at least k true" and "at least k+1 true" over the
// negated parts, conjunctive members swap sides as their negations, and
// other formulas are translated with per-k deciders standing in for the
// conjunctive subformulas; chaining k = 0..N discharges the guards.
#pragma once

#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bpw/builder.hpp"
#include "bpw/core.hpp"
#include "bpw/proof.hpp"

namespace bpw {

// Structural negation: 0 <-> 1, decisions pointwise, and -> or, p to
// dec(1, p, 0), extension variables to fresh "bar" variables over the
// negated bodies. Defined for or-free operands; a disjunction is an
// error, since its negation would leave the class.
const Formula* negate_formula(AxiomSetBuilder& ax, const Formula* f);

// Negation of a conjunctive formula together with the extended axiom
// set carrying the bar definitions.
std::pair<const Formula*, AxiomSetPtr> negate_coendt(const Formula* u,
                                                     AxiomSetPtr E);

// Excluded-middle lines for an or/and-free operand A:
//   negation_right: |- A, bar-A        negation_left: A, bar-A |-
uint32_t negation_right(ProofBuilder& pb, const Formula* f);
uint32_t negation_left(ProofBuilder& pb, const Formula* f);

// Decision-program conjunction and disjunction over eDT operands:
// bp_and(f, g) substitutes g for the 1-sink of f, bp_or(f, g) for the
// 0-sink; fresh extension variables cap the expansion at extension
// variables of f.
const Formula* bp_and(ProofBuilder& pb, const Formula* f, const Formula* g);
const Formula* bp_or(ProofBuilder& pb, const Formula* f, const Formula* g);

// Characteristic lines, M the compiled connective:
//   bp_and_left1: M |- f     bp_and_left2: M |- g    bp_and_right: f, g |- M
//   bp_or_right1: f |- M     bp_or_right2: g |- M    bp_or_left:   M |- f, g
uint32_t bp_and_left1(ProofBuilder& pb, const Formula* f, const Formula* g);
uint32_t bp_and_left2(ProofBuilder& pb, const Formula* f, const Formula* g);
uint32_t bp_and_right(ProofBuilder& pb, const Formula* f, const Formula* g);
uint32_t bp_or_right1(ProofBuilder& pb, const Formula* f, const Formula* g);
uint32_t bp_or_right2(ProofBuilder& pb, const Formula* f, const Formula* g);
uint32_t bp_or_left(ProofBuilder& pb, const Formula* f, const Formula* g);

// LK(eLDT) to eLDT. The input must check and conclude an eDT sequent;
// the output proves the same sequent over an extended axiom set, with
// every query compiled to an eDT formula and every connective rule
// replaced by cuts against the characteristic lines above.
Proof eliminate_bool(const Proof& pf);

// LK+(eLNDT) to eLNDT. Conjunction queries become positive decisions
// posdec(0, ., .); and-steps are replaced by the derived posdec rules,
// the left rule taking its vacuous 0-premise by weakening.
Proof eliminate_pos(const Proof& pf);

// co-eLNDT proof of Gamma |- Delta to an eLNDT proof of
// bar-Delta |- bar-Gamma over the bar axioms. Line-local: each rule
// maps to the rule of the flipped side, decision rules with two extra
// cuts against the excluded-middle lines for the decision variable.
Proof dualize_proof(const Proof& pf);

// co-eLNDT to eLNDT over the same sequent, when every conclusion member
// is a plain decision tree: dualize, then cut each conclusion member
// back across the sequent with its excluded-middle lines.
Proof coelndt_to_elndt(const Proof& pf);

// The conjunctive parts of a proof: every co-eNDT formula reachable
// from some cedent member (following extension definitions) that is not
// an eDT formula, in first-occurrence order. These are the formulas the
// counting collapse replaces by deciders.
std::vector<const Formula*> coendt_parts(const Proof& pf);

// Shared state for the k-indexed translations of one proof: the fixed
// part list, their negations, and the memo tables for the per-k formula
// translations.
struct KCollapse {
  std::vector<const Formula*> parts;
  std::vector<const Formula*> bars;  // negations, same order
  std::unordered_map<const Formula*, int> index;  // position in parts
  // one memo per k: formula -> its k-translation
  std::vector<std::unordered_map<const Formula*, const Formula*>> memo;
};
KCollapse k_context(ProofBuilder& pb, const Proof& pf);

// The k-translation of a formula of the proof: conjunctive parts map to
// deciders dec_k(1, bar-part, 0), eDT formulas are untouched, x-sort
// variables map to fresh per-k e-variables over translated bodies, and
// the map commutes with decision and disjunction.
const Formula* k_translate(ProofBuilder& pb, KCollapse& kc, const Formula* x,
                           int k);

// One slice of the collapse: a line proving
//   thr(bars, k), Sigma |- Pi, thr(bars, k+1)
// for the input's conclusion Sigma |- Pi, built by threading the two
// thresholds through every line of the input and repairing the steps
// that move conjunctive parts across sides.
uint32_t prove_k_sequent(ProofBuilder& pb, KCollapse& kc, const Proof& pf,
                         int k);

// The full collapse of an eL-exists-forall-DT proof of an NDT sequent:
// chain the k-slices for k = 0..N between the two threshold caps.
Proof collapse_eafdt(const Proof& pf);

}  // namespace bpw
