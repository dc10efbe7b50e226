#include "bpw/decider.hpp"

#include <set>
#include <string>
#include <tuple>

#include "bpw/eval.hpp"
#include "bpw/posdec.hpp"
#include "bpw/thresholds.hpp"

namespace bpw {

namespace {

int spec_n(const DeciderSpec& ds) {
  int n = static_cast<int>(ds.B.size());
  if (n == 0) throw BpwError("decider: empty member list");
  if (ds.i < 0 || ds.i >= n) throw BpwError("decider: flag index out of range");
  if (ds.k < 0) throw BpwError("decider: negative count");
  if (!ds.a || !ds.c) throw BpwError("decider: missing branch formula");
  return n;
}

std::string cell_key(const DeciderSpec& ds, int j, int c, int b) {
  return "dcd:" + std::to_string(formula_list_id(ds.B)) + ":" +
         std::to_string(ds.i) + ":" + std::to_string(ds.k) + ":" +
         std::to_string(ds.a->id) + ":" + std::to_string(ds.c->id) + ":" +
         std::to_string(j) + ":" + std::to_string(c) + ":" + std::to_string(b);
}

// Shared state for the lemma derivations.
struct DCtx {
  ProofBuilder& pb;
  const DeciderSpec& ds;
  int n;

  const Formula* bj(int j) const { return ds.B[static_cast<size_t>(j)]; }
  const Formula* thr(int j, int l) { return threshold(pb, ds.B, j, l); }
  const Query* qthr(int j, int l) { return qbase(thr(j, l)); }
  const Query* qcell(int j, int c, int b) {
    return qbase(decider_cell(pb, ds, j, c, b));
  }

  // Definition parts of cell (j, c, b), j < n.
  struct Parts {
    int j;
    const Formula* var;
    const Formula* d1;   // cell(j+1, c, b)
    const Formula* d2;   // cell(j+1, c+1, b'), flag set when j == i
    const Formula* body;
  };
  Parts parts(int j, int c, int b) {
    Parts p;
    p.j = j;
    p.var = decider_cell(pb, ds, j, c, b);
    p.d1 = decider_cell(pb, ds, j + 1, c, b);
    p.d2 = decider_cell(pb, ds, j + 1, c + 1, j == ds.i ? 1 : b);
    p.body = posdec(pb, p.d1, bj(j), p.d2);
    return p;
  }

  // Rewrites thr(j+1,l-1) left / thr(j+1,l) right into thr(j,l) left /
  // thr(j,l+1) right, adding B_j on the left.
  uint32_t lift_left(int j, int l, uint32_t s) {
    uint32_t a = pb.cut2(thr_truth4(pb, ds.B, j, l), s, qthr(j + 1, l - 1));
    return pb.cut2(a, thr_truth1(pb, ds.B, j, l), qthr(j + 1, l));
  }
  // Rewrites thr(j+1,l) left / thr(j+1,l+1) right into thr(j,l) left /
  // thr(j,l+1) right, adding B_j on the right.
  uint32_t lift_right(int j, int l, uint32_t s) {
    uint32_t a = pb.cut2(thr_truth3(pb, ds.B, j, l), s, qthr(j + 1, l));
    return pb.cut2(a, thr_truth2(pb, ds.B, j, l + 1), qthr(j + 1, l + 1));
  }

  // Replaces d1 on the right of s by the cell, through the third truth
  // sequent of its body and the defining axiom.
  uint32_t close_right(const Parts& p, uint32_t s) {
    PosTruth pt = pos_truth_proofs(pb, p.d1, bj(p.j), p.d2);
    uint32_t a = pb.cut2(s, pt.t3, qbase(p.d1));
    return pb.cut2(a, pb.ext_line(p.var->var, false), qbase(p.body));
  }
  // Replaces d2 on the right of s by the cell (s must carry B_j on the
  // left), through the fourth truth sequent and the defining axiom.
  uint32_t close_right4(const Parts& p, uint32_t s) {
    PosTruth pt = pos_truth_proofs(pb, p.d1, bj(p.j), p.d2);
    uint32_t a = pb.cut2(s, pt.t4, qbase(p.d2));
    return pb.cut2(a, pb.ext_line(p.var->var, false), qbase(p.body));
  }
  // From premises Gamma, d1 |- Delta and Gamma, B_j, d2 |- Delta derives
  // the cell on the left.
  uint32_t close_left(const Parts& p, uint32_t r1, uint32_t r2) {
    uint32_t pl = posdec_left(pb, p.d1, bj(p.j), p.d2, r1, r2);
    return pb.cut2(pb.ext_line(p.var->var, true), pl, qbase(p.body));
  }

  // Weakens to the exact target shape; needed when distinct template roles
  // are played by one shared formula and a cut merged their copies.
  uint32_t settle(uint32_t s, const Sequent& target) {
    return pb.weaken_to(s, target);
  }
};

}  // namespace

const Formula* decider_cell(ProofBuilder& pb, const DeciderSpec& ds, int j,
                            int c, int b) {
  int n = spec_n(ds);
  if (j < 0 || j > n) throw BpwError("decider: level out of range");
  if (b != 0 && b != 1) throw BpwError("decider: bad flag value");
  if (b == 1 && j <= ds.i)
    throw BpwError("decider: flag set before the flag index");
  if (j == n) return c == ds.k ? (b ? ds.c : ds.a) : f0();
  EVarId v = evar_generated(Sort::E, cell_key(ds, j, c, b));
  if (!pb.axioms().defined(v)) {
    const Formula* d1 = decider_cell(pb, ds, j + 1, c, b);
    const Formula* d2 = decider_cell(pb, ds, j + 1, c + 1, j == ds.i ? 1 : b);
    pb.define_evar(v, posdec(pb, d1, ds.B[static_cast<size_t>(j)], d2));
  }
  return fevar(v);
}

DeciderBuild build_decider(ProofBuilder& pb, const DeciderSpec& ds) {
  int n = spec_n(ds);
  DeciderBuild out;
  out.root = decider_cell(pb, ds, 0, 0, 0);
  std::set<std::tuple<int, int, int>> seen;
  std::vector<std::tuple<int, int, int>> work{{0, 0, 0}};
  while (!work.empty()) {
    auto [j, c, b] = work.back();
    work.pop_back();
    if (!seen.insert({j, c, b}).second || j == n) continue;
    work.push_back({j + 1, c, b});
    work.push_back({j + 1, c + 1, j == ds.i ? 1 : b});
  }
  out.cells = seen.size();
  return out;
}

uint32_t dec_low_count(ProofBuilder& pb, const DeciderSpec& ds, int j, int c,
                       int b, int l) {
  int n = spec_n(ds);
  if (l + c >= ds.k) throw BpwError("dec_low_count: needs l + c < k");
  DCtx cx{pb, ds, n};
  Sequent target{{cx.qthr(j, l), cx.qcell(j, c, b)}, {cx.qthr(j, l + 1)}};
  if (uint32_t f = pb.find(target); f != kNoLine) return f;
  if (j == n) {
    uint32_t base = c == ds.k ? pb.one_r() : pb.zero_l();
    return pb.weaken_to(base, target);
  }
  int b2 = j == ds.i ? 1 : b;
  DCtx::Parts p = cx.parts(j, c, b);
  uint32_t L1 = cx.lift_right(j, l, dec_low_count(pb, ds, j + 1, c, b, l));
  uint32_t L2 = cx.lift_left(j, l, dec_low_count(pb, ds, j + 1, c, b, l - 1));
  uint32_t L = pb.cut2(L1, L2, qbase(cx.bj(j)));
  uint32_t R =
      cx.lift_left(j, l, dec_low_count(pb, ds, j + 1, c + 1, b2, l - 1));
  return cx.settle(cx.close_left(p, L, R), target);
}

namespace {

// Targets for the flagged families. X is A for which 1,2 and C for 3,4;
// odd puts the cell on the left, even on the right.
Sequent flag_target(DCtx& cx, int which, int j, int c, int l, bool with_flag) {
  const Query* x = qbase(which <= 2 ? cx.ds.a : cx.ds.c);
  int b = with_flag ? 0 : (which <= 2 ? 0 : 1);
  const Query* cell = cx.qcell(j, c, b);
  const Query* bi = qbase(cx.ds.B[static_cast<size_t>(cx.ds.i)]);
  Sequent t{{cx.qthr(j, l)}, {}};
  switch (which) {
    case 1:
      t.left.push_back(cell);
      t.right.push_back(x);
      if (with_flag) t.right.push_back(bi);
      break;
    case 2:
      t.left.push_back(x);
      if (with_flag) t.right.push_back(bi);
      t.right.push_back(cell);
      break;
    case 3:
      t.left.push_back(cell);
      if (with_flag) t.left.push_back(bi);
      t.right.push_back(x);
      break;
    case 4:
      if (with_flag) t.left.push_back(bi);
      t.left.push_back(x);
      t.right.push_back(cell);
      break;
    default:
      throw BpwError("decider lemma: which must be 1..4");
  }
  t.right.push_back(cx.qthr(j, l + 1));
  return t;
}

}  // namespace

uint32_t dec_after_flag(ProofBuilder& pb, const DeciderSpec& ds, int which,
                        int j, int c, int l) {
  int n = spec_n(ds);
  if (l + c != ds.k) throw BpwError("dec_after_flag: needs l + c = k");
  if (j <= ds.i || j > n) throw BpwError("dec_after_flag: needs i < j <= N");
  DCtx cx{pb, ds, n};
  int b = which <= 2 ? 0 : 1;
  const Formula* x = which <= 2 ? ds.a : ds.c;
  Sequent target = flag_target(cx, which, j, c, l, false);
  if (uint32_t f = pb.find(target); f != kNoLine) return f;
  if (j == n) {
    uint32_t base;
    if (c == ds.k) {
      base = pb.id_line(qbase(x));  // the cell is X itself, l = 0
    } else if (which % 2 == 1 || l > 0) {
      base = pb.zero_l();  // cell = 0 on the left, or thr(N,l) = 0
    } else {
      base = pb.one_r();  // l < 0, so thr(N,l+1) = 1
    }
    return pb.weaken_to(base, target);
  }
  DCtx::Parts p = cx.parts(j, c, b);
  uint32_t res;
  if (which % 2 == 1) {
    // Cell on the left: split on B_j, then introduce the body.
    uint32_t x1 =
        cx.lift_right(j, l, dec_after_flag(pb, ds, which, j + 1, c, l));
    uint32_t y1 =
        cx.lift_left(j, l, dec_low_count(pb, ds, j + 1, c, b, l - 1));
    uint32_t r1 = pb.cut2(x1, y1, qbase(cx.bj(j)));
    uint32_t r2 = cx.lift_left(
        j, l, dec_after_flag(pb, ds, which, j + 1, c + 1, l - 1));
    res = cx.close_left(p, r1, r2);
  } else {
    // Cell on the right: each B_j branch rebuilds the cell, then cut.
    uint32_t x1 = cx.lift_right(
        j, l, cx.close_right(p, dec_after_flag(pb, ds, which, j + 1, c, l)));
    uint32_t y1 = cx.close_right4(
        p, cx.lift_left(j, l,
                        dec_after_flag(pb, ds, which, j + 1, c + 1, l - 1)));
    res = pb.cut2(x1, y1, qbase(cx.bj(j)));
  }
  return cx.settle(res, target);
}

uint32_t dec_before_flag(ProofBuilder& pb, const DeciderSpec& ds, int which,
                         int j, int c, int l) {
  int n = spec_n(ds);
  if (l + c != ds.k) throw BpwError("dec_before_flag: needs l + c = k");
  if (j < 0 || j > ds.i) throw BpwError("dec_before_flag: needs j <= i");
  DCtx cx{pb, ds, n};
  Sequent target = flag_target(cx, which, j, c, l, true);
  if (uint32_t f = pb.find(target); f != kNoLine) return f;
  DCtx::Parts p = cx.parts(j, c, 0);
  uint32_t res;
  if (j == ds.i) {
    // Bridge: the decision on B_i both passes the flag and is the
    // threshold step, so one lift settles both roles.
    switch (which) {
      case 1: {
        PosTruth pt = pos_truth_proofs(pb, p.d1, cx.bj(j), p.d2);
        uint32_t v1 =
            pb.cut2(pb.ext_line(p.var->var, true), pt.t1, qbase(p.body));
        uint32_t v2 =
            pb.cut2(v1, dec_after_flag(pb, ds, 1, j + 1, c, l), qbase(p.d1));
        res = cx.lift_right(j, l, v2);
        break;
      }
      case 2:
        res = cx.lift_right(
            j, l, cx.close_right(p, dec_after_flag(pb, ds, 2, j + 1, c, l)));
        break;
      case 3: {
        uint32_t r1 =
            cx.lift_left(j, l, dec_low_count(pb, ds, j + 1, c, 0, l - 1));
        uint32_t r2 = cx.lift_left(
            j, l, dec_after_flag(pb, ds, 3, j + 1, c + 1, l - 1));
        res = cx.close_left(p, r1, r2);
        break;
      }
      case 4:
        res = cx.close_right4(
            p, cx.lift_left(j, l,
                            dec_after_flag(pb, ds, 4, j + 1, c + 1, l - 1)));
        break;
      default:
        throw BpwError("dec_before_flag: which must be 1..4");
    }
  } else if (which % 2 == 1) {
    uint32_t x1 =
        cx.lift_right(j, l, dec_before_flag(pb, ds, which, j + 1, c, l));
    uint32_t y1 = cx.lift_left(j, l, dec_low_count(pb, ds, j + 1, c, 0, l - 1));
    uint32_t r1 = pb.cut2(x1, y1, qbase(cx.bj(j)));
    uint32_t r2 = cx.lift_left(
        j, l, dec_before_flag(pb, ds, which, j + 1, c + 1, l - 1));
    res = cx.close_left(p, r1, r2);
  } else {
    uint32_t x1 = cx.lift_right(
        j, l, cx.close_right(p, dec_before_flag(pb, ds, which, j + 1, c, l)));
    uint32_t y1 = cx.close_right4(
        p, cx.lift_left(j, l,
                        dec_before_flag(pb, ds, which, j + 1, c + 1, l - 1)));
    res = pb.cut2(x1, y1, qbase(cx.bj(j)));
  }
  return cx.settle(res, target);
}

ImmSzel immszel_proofs(ProofBuilder& pb, const DeciderSpec& ds) {
  spec_n(ds);
  ImmSzel out;
  out.dec = decider_cell(pb, ds, 0, 0, 0);
  out.g1 = dec_before_flag(pb, ds, 1, 0, 0, ds.k);
  out.g2 = dec_before_flag(pb, ds, 2, 0, 0, ds.k);
  out.g3 = dec_before_flag(pb, ds, 3, 0, 0, ds.k);
  out.g4 = dec_before_flag(pb, ds, 4, 0, 0, ds.k);
  return out;
}

bool decider_semantics_check(ProofBuilder& pb, const DeciderSpec& ds) {
  spec_n(ds);
  const Formula* root = decider_cell(pb, ds, 0, 0, 0);
  const ExtAxiomSet& E = pb.aset();
  std::set<PVarId> vs;
  for (const Formula* f : ds.B)
    for (PVarId v : free_pvars(f, E)) vs.insert(v);
  for (PVarId v : free_pvars(ds.a, E)) vs.insert(v);
  for (PVarId v : free_pvars(ds.c, E)) vs.insert(v);
  std::vector<PVarId> order(vs.begin(), vs.end());
  if (order.size() > static_cast<size_t>(max_enum_vars()))
    throw BpwError("decider_semantics_check: too many variables");
  uint64_t rows = 1ull << order.size();
  for (uint64_t row = 0; row < rows; ++row) {
    Assignment alpha;
    for (size_t i = 0; i < order.size(); ++i)
      alpha[order[i]] = (row >> i) & 1;
    int cnt = 0;
    for (const Formula* f : ds.B)
      if (evaluate(f, E, alpha)) ++cnt;
    bool d = evaluate(root, E, alpha);
    if (cnt < ds.k && d) return false;
    if (cnt == ds.k) {
      bool flag = evaluate(ds.B[static_cast<size_t>(ds.i)], E, alpha);
      bool want = flag ? evaluate(ds.c, E, alpha) : evaluate(ds.a, E, alpha);
      if (d != want) return false;
    }
  }
  return true;
}

}  // namespace bpw
