// Threshold formulas over a fixed list B_0 .. B_{N-1}. thr(j, k) holds when
// at least k of the suffix B_j .. B_{N-1} are true; cells are extension
// variables built lazily through posdec, so thr(j, k) decides B_j between
// thr(j+1, k) and thr(j+1, k-1). The lemma proofs are the threshold
// arithmetic used by the counting translations.
#pragma once

#include <cstdint>
#include <vector>

#include "bpw/builder.hpp"
#include "bpw/core.hpp"
#include "bpw/posdec.hpp"

namespace bpw {

// The cell formula; j in [0, N], any k. Cells below j = N are extension
// variables; thr(N, k) is the constant (k <= 0).
const Formula* threshold(ProofBuilder& pb, const std::vector<const Formula*>& B,
                         int j, int k);

// Lemma proofs (line indices in pb). Preconditions as noted.
uint32_t thr_mono_zero(ProofBuilder& pb, const std::vector<const Formula*>& B,
                       int j, int k);  // |- thr(j,k)         for k <= 0
uint32_t thr_mono_big(ProofBuilder& pb, const std::vector<const Formula*>& B,
                      int j, int k);   // thr(j,k) |-          for k > N-j
uint32_t thr_mono_step(ProofBuilder& pb, const std::vector<const Formula*>& B,
                       int j, int k);  // thr(j,k) |- thr(j,k-1)
// The four decision sequents for a cell, j < N:
uint32_t thr_truth1(ProofBuilder& pb, const std::vector<const Formula*>& B,
                    int j, int k);  // B_j, thr(j+1,k) |- thr(j,k+1)
uint32_t thr_truth2(ProofBuilder& pb, const std::vector<const Formula*>& B,
                    int j, int k);  // thr(j+1,k) |- thr(j,k)
uint32_t thr_truth3(ProofBuilder& pb, const std::vector<const Formula*>& B,
                    int j, int k);  // thr(j,k) |- thr(j+1,k), B_j
uint32_t thr_truth4(ProofBuilder& pb, const std::vector<const Formula*>& B,
                    int j, int k);  // thr(j,k) |- thr(j+1,k-1)

// All lemmas applicable at (j, k); inapplicable slots hold kNoLine.
struct ThresholdLemmas {
  uint32_t mono_zero = kNoLine;
  uint32_t mono_big = kNoLine;
  uint32_t mono_step = kNoLine;
  uint32_t truth1 = kNoLine, truth2 = kNoLine, truth3 = kNoLine,
           truth4 = kNoLine;
};
ThresholdLemmas threshold_lemma_proofs(ProofBuilder& pb,
                                       const std::vector<const Formula*>& B,
                                       int j, int k);

// Oracle: compares the cell against direct counting over all assignments.
bool threshold_semantics_check(ProofBuilder& pb,
                               const std::vector<const Formula*>& B, int j,
                               int k);

}  // namespace bpw
