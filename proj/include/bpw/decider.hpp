// Deciders. Given B_0 .. B_{N-1}, a flag index i, a count k and two branch
// formulas A and C, the decider cell D(j, c, b) guesses a size-k subset of
// true members; c counts members already taken below level j and b records
// whether B_i was taken. The root D(0, 0, 0) then satisfies, whenever
// exactly k of the B's are true: D holds iff (B_i ? C : A). The lemma
// proofs derive that equivalence inside the positive calculus, guarded on
// both sides by threshold formulas, which is the proof-theoretic core of
// the inductive-counting (Immerman-Szelepcsenyi) translation.
#pragma once

#include <cstdint>
#include <vector>

#include "bpw/builder.hpp"
#include "bpw/core.hpp"

namespace bpw {

struct DeciderSpec {
  std::vector<const Formula*> B;
  int i = 0;  // flag index, 0 <= i < N
  int k = 0;  // target count, k >= 0
  const Formula* a = nullptr;  // taken when B_i is not in the subset
  const Formula* c = nullptr;  // taken when it is
};

// The cell formula. j in [0, N], b in {0, 1}; b = 1 is only meaningful
// once the flag has been passed (j > i) and is rejected otherwise.
const Formula* decider_cell(ProofBuilder& pb, const DeciderSpec& ds, int j,
                            int c, int b);

struct DeciderBuild {
  const Formula* root = nullptr;
  size_t cells = 0;  // distinct (j, c, b) reachable from the root
};
DeciderBuild build_decider(ProofBuilder& pb, const DeciderSpec& ds);

// Lemma families; each returns a proof line in pb.
//
// low_count, for l + c < k:
//   thr(j,l), D(j,c,b) |- thr(j,l+1)
// after_flag, for l + c = k and i < j <= N, which in 1..4:
//   1: thr(j,l), D(j,c,0) |- A, thr(j,l+1)
//   2: thr(j,l), A |- D(j,c,0), thr(j,l+1)
//   3: thr(j,l), D(j,c,1) |- C, thr(j,l+1)
//   4: thr(j,l), C |- D(j,c,1), thr(j,l+1)
// before_flag, for l + c = k and 0 <= j <= i, which in 1..4:
//   1: thr(j,l), D(j,c,0) |- A, B_i, thr(j,l+1)
//   2: thr(j,l), A |- B_i, D(j,c,0), thr(j,l+1)
//   3: thr(j,l), D(j,c,0), B_i |- C, thr(j,l+1)
//   4: thr(j,l), B_i, C |- D(j,c,0), thr(j,l+1)
uint32_t dec_low_count(ProofBuilder& pb, const DeciderSpec& ds, int j, int c,
                       int b, int l);
uint32_t dec_after_flag(ProofBuilder& pb, const DeciderSpec& ds, int which,
                        int j, int c, int l);
uint32_t dec_before_flag(ProofBuilder& pb, const DeciderSpec& ds, int which,
                         int j, int c, int l);

// The four sequents of before_flag at (j, c, l) = (0, 0, k): with
// dec = D(0,0,0) and thr over the whole list,
//   thr(k), dec |- A, B_i, thr(k+1)        thr(k), A |- B_i, dec, thr(k+1)
//   thr(k), dec, B_i |- C, thr(k+1)        thr(k), B_i, C |- dec, thr(k+1)
struct ImmSzel {
  const Formula* dec = nullptr;
  uint32_t g1 = kNoLine, g2 = kNoLine, g3 = kNoLine, g4 = kNoLine;
};
ImmSzel immszel_proofs(ProofBuilder& pb, const DeciderSpec& ds);

// Oracle over all assignments: fewer than k true members forces the root
// false, and exactly k true members makes it agree with (B_i ? C : A).
bool decider_semantics_check(ProofBuilder& pb, const DeciderSpec& ds);

}  // namespace bpw
