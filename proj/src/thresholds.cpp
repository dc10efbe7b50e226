#include "bpw/thresholds.hpp"

#include <set>
#include <string>

#include "bpw/eval.hpp"

namespace bpw {

namespace {

std::string thr_key(const std::vector<const Formula*>& B, int j, int k) {
  return "thr:" + std::to_string(formula_list_id(B)) + ":" +
         std::to_string(j) + ":" + std::to_string(k);
}

int level_n(const std::vector<const Formula*>& B, int j) {
  int n = static_cast<int>(B.size());
  if (j < 0 || j > n) throw BpwError("threshold: level out of range");
  return n;
}

// Parts of the cell definition thr(j,k) := posdec(a, B_j, c); j < N.
struct Cell {
  const Formula* var;
  const Formula* a;  // thr(j+1, k)
  const Formula* c;  // thr(j+1, k-1)
  const Formula* body;
};

Cell cell_parts(ProofBuilder& pb, const std::vector<const Formula*>& B, int j,
                int k) {
  Cell cl;
  cl.var = threshold(pb, B, j, k);
  cl.a = threshold(pb, B, j + 1, k);
  cl.c = threshold(pb, B, j + 1, k - 1);
  cl.body = posdec(pb, cl.a, B[static_cast<size_t>(j)], cl.c);
  return cl;
}

}  // namespace

const Formula* threshold(ProofBuilder& pb, const std::vector<const Formula*>& B,
                         int j, int k) {
  int n = level_n(B, j);
  if (j == n) return fconst(k <= 0);
  EVarId v = evar_generated(Sort::E, thr_key(B, j, k));
  if (!pb.axioms().defined(v)) {
    const Formula* a = threshold(pb, B, j + 1, k);
    const Formula* c = threshold(pb, B, j + 1, k - 1);
    pb.define_evar(v, posdec(pb, a, B[static_cast<size_t>(j)], c));
  }
  return fevar(v);
}

uint32_t thr_mono_zero(ProofBuilder& pb, const std::vector<const Formula*>& B,
                       int j, int k) {
  if (k > 0) throw BpwError("thr_mono_zero: needs k <= 0");
  int n = level_n(B, j);
  const Formula* t = threshold(pb, B, j, k);
  Sequent target{{}, {qbase(t)}};
  if (uint32_t f = pb.find(target); f != kNoLine) return f;
  if (j == n) return pb.one_r();
  uint32_t ih = thr_mono_zero(pb, B, j + 1, k);
  Cell cl = cell_parts(pb, B, j, k);
  PosTruth pt = pos_truth_proofs(pb, cl.a, B[static_cast<size_t>(j)], cl.c);
  uint32_t p = pb.cut2(ih, pt.t3, qbase(cl.a));  // |- body
  uint32_t rl = pb.ext_line(t->var, false);      // body |- thr(j,k)
  return pb.cut2(p, rl, qbase(cl.body));
}

uint32_t thr_mono_big(ProofBuilder& pb, const std::vector<const Formula*>& B,
                      int j, int k) {
  int n = level_n(B, j);
  if (k <= n - j) throw BpwError("thr_mono_big: needs k > N-j");
  const Formula* t = threshold(pb, B, j, k);
  Sequent target{{qbase(t)}, {}};
  if (uint32_t f = pb.find(target); f != kNoLine) return f;
  if (j == n) return pb.zero_l();
  uint32_t ih1 = thr_mono_big(pb, B, j + 1, k);
  uint32_t ih2 = thr_mono_big(pb, B, j + 1, k - 1);
  Cell cl = cell_parts(pb, B, j, k);
  uint32_t r2 = pb.wl(ih2, qbase(B[static_cast<size_t>(j)]));
  uint32_t pl =
      posdec_left(pb, cl.a, B[static_cast<size_t>(j)], cl.c, ih1, r2);
  uint32_t lr = pb.ext_line(t->var, true);  // thr(j,k) |- body
  return pb.cut2(lr, pl, qbase(cl.body));
}

uint32_t thr_mono_step(ProofBuilder& pb, const std::vector<const Formula*>& B,
                       int j, int k) {
  int n = level_n(B, j);
  const Formula* t = threshold(pb, B, j, k);
  const Formula* tp = threshold(pb, B, j, k - 1);
  Sequent target{{qbase(t)}, {qbase(tp)}};
  if (uint32_t f = pb.find(target); f != kNoLine) return f;
  if (j == n) {
    if (k <= 0) return pb.id_line(qbase(f1()));
    if (k >= 2) return pb.id_line(qbase(f0()));
    return pb.wr(pb.zero_l(), qbase(f1()));  // thr(N,1)=0 |- 1=thr(N,0)
  }
  Cell cl = cell_parts(pb, B, j, k);
  // body = posdec(thr(j+1,k), B_j, thr(j+1,k-1)); push each branch one
  // step down and re-enter the weaker cell.
  uint32_t r1 = pb.cut2(thr_mono_step(pb, B, j + 1, k),
                        thr_truth2(pb, B, j, k - 1), qbase(cl.c));
  uint32_t r2 = pb.cut2(thr_mono_step(pb, B, j + 1, k - 1),
                        thr_truth1(pb, B, j, k - 2),
                        qbase(threshold(pb, B, j + 1, k - 2)));
  uint32_t pl =
      posdec_left(pb, cl.a, B[static_cast<size_t>(j)], cl.c, r1, r2);
  uint32_t lr = pb.ext_line(t->var, true);
  return pb.cut2(lr, pl, qbase(cl.body));
}

uint32_t thr_truth1(ProofBuilder& pb, const std::vector<const Formula*>& B,
                    int j, int k) {
  int n = level_n(B, j);
  if (j >= n) throw BpwError("thr_truth1: needs j < N");
  Cell cl = cell_parts(pb, B, j, k + 1);  // cell thr(j, k+1); its c is thr(j+1,k)
  Sequent target{{qbase(B[static_cast<size_t>(j)]), qbase(cl.c)},
                 {qbase(cl.var)}};
  if (uint32_t f = pb.find(target); f != kNoLine) return f;
  PosTruth pt = pos_truth_proofs(pb, cl.a, B[static_cast<size_t>(j)], cl.c);
  uint32_t rl = pb.ext_line(cl.var->var, false);
  return pb.cut2(pt.t4, rl, qbase(cl.body));
}

uint32_t thr_truth2(ProofBuilder& pb, const std::vector<const Formula*>& B,
                    int j, int k) {
  int n = level_n(B, j);
  if (j >= n) throw BpwError("thr_truth2: needs j < N");
  Cell cl = cell_parts(pb, B, j, k);
  Sequent target{{qbase(cl.a)}, {qbase(cl.var)}};
  if (uint32_t f = pb.find(target); f != kNoLine) return f;
  PosTruth pt = pos_truth_proofs(pb, cl.a, B[static_cast<size_t>(j)], cl.c);
  uint32_t rl = pb.ext_line(cl.var->var, false);
  return pb.cut2(pt.t3, rl, qbase(cl.body));
}

uint32_t thr_truth3(ProofBuilder& pb, const std::vector<const Formula*>& B,
                    int j, int k) {
  int n = level_n(B, j);
  if (j >= n) throw BpwError("thr_truth3: needs j < N");
  Cell cl = cell_parts(pb, B, j, k);
  Sequent target{{qbase(cl.var)},
                 {qbase(cl.a), qbase(B[static_cast<size_t>(j)])}};
  if (uint32_t f = pb.find(target); f != kNoLine) return f;
  PosTruth pt = pos_truth_proofs(pb, cl.a, B[static_cast<size_t>(j)], cl.c);
  uint32_t lr = pb.ext_line(cl.var->var, true);
  return pb.cut2(lr, pt.t1, qbase(cl.body));
}

uint32_t thr_truth4(ProofBuilder& pb, const std::vector<const Formula*>& B,
                    int j, int k) {
  int n = level_n(B, j);
  if (j >= n) throw BpwError("thr_truth4: needs j < N");
  Cell cl = cell_parts(pb, B, j, k);
  Sequent target{{qbase(cl.var)}, {qbase(cl.c)}};
  if (uint32_t f = pb.find(target); f != kNoLine) return f;
  PosTruth pt = pos_truth_proofs(pb, cl.a, B[static_cast<size_t>(j)], cl.c);
  // t2: body |- a, c; cutting a against thr(j+1,k) |- thr(j+1,k-1) merges
  // the two right copies of c.
  uint32_t step = thr_mono_step(pb, B, j + 1, k);
  uint32_t p = pb.cut2(pt.t2, step, qbase(cl.a));  // body |- c
  uint32_t lr = pb.ext_line(cl.var->var, true);
  return pb.cut2(lr, p, qbase(cl.body));
}

ThresholdLemmas threshold_lemma_proofs(ProofBuilder& pb,
                                       const std::vector<const Formula*>& B,
                                       int j, int k) {
  int n = level_n(B, j);
  ThresholdLemmas out;
  if (k <= 0) out.mono_zero = thr_mono_zero(pb, B, j, k);
  if (k > n - j) out.mono_big = thr_mono_big(pb, B, j, k);
  out.mono_step = thr_mono_step(pb, B, j, k);
  if (j < n) {
    out.truth1 = thr_truth1(pb, B, j, k);
    out.truth2 = thr_truth2(pb, B, j, k);
    out.truth3 = thr_truth3(pb, B, j, k);
    out.truth4 = thr_truth4(pb, B, j, k);
  }
  return out;
}

bool threshold_semantics_check(ProofBuilder& pb,
                               const std::vector<const Formula*>& B, int j,
                               int k) {
  int n = level_n(B, j);
  const Formula* t = threshold(pb, B, j, k);
  const ExtAxiomSet& E = pb.aset();
  std::set<PVarId> vs;
  for (const Formula* f : B)
    for (PVarId v : free_pvars(f, E)) vs.insert(v);
  std::vector<PVarId> order(vs.begin(), vs.end());
  if (order.size() > static_cast<size_t>(max_enum_vars()))
    throw BpwError("threshold_semantics_check: too many variables");
  uint64_t rows = 1ull << order.size();
  for (uint64_t row = 0; row < rows; ++row) {
    Assignment alpha;
    for (size_t i = 0; i < order.size(); ++i)
      alpha[order[i]] = (row >> i) & 1;
    int cnt = 0;
    for (int idx = j; idx < n; ++idx)
      if (evaluate(B[static_cast<size_t>(idx)], E, alpha)) ++cnt;
    if (evaluate(t, E, alpha) != (cnt >= k)) return false;
  }
  return true;
}

}  // namespace bpw
