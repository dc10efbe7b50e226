#include "bpw/simproof.hpp"

#include "bpw/eval.hpp"
#include "bpw/parse.hpp"

namespace bpw {

namespace {

// Mirrors the closure order of check_simulation so that every recursive
// call is backed by a positive check.
uint32_t sim_line(ProofBuilder& pb, const Formula* a, const Formula* b) {
  const ExtAxiomSet& E = pb.aset();
  Sequent target{{qbase(b)}, {qbase(a)}};
  if (uint32_t f = pb.find(target); f != kNoLine) return f;
  if (a == b) return pb.id_line(qbase(a));
  if (b->kind == FKind::Or && check_simulation(a, b->a, E) &&
      check_simulation(a, b->b, E)) {
    uint32_t p0 = sim_line(pb, a, b->a);
    uint32_t p1 = sim_line(pb, a, b->b);
    return pb.orl(p0, p1, qbase(b));
  }
  if (b->kind == FKind::EVar) {
    const Formula* d = E.def(b->var);
    if (d && check_simulation(a, d, E)) {
      uint32_t p = sim_line(pb, a, d);
      return pb.cut2(pb.ext_line(b->var, true), p, qbase(d));
    }
  }
  if (a->kind == FKind::Dec && b->kind == FKind::Dec && a->var == b->var &&
      check_simulation(a->a, b->a, E) && check_simulation(a->b, b->b, E)) {
    const Query* pq = qbase(fpvar(a->var));
    const Query* qa = qbase(a);
    uint32_t s0 = sim_line(pb, a->a, b->a);  // b0 |- a0
    uint32_t s1 = sim_line(pb, a->b, b->b);  // b1 |- a1
    // Left branch: b0 |- A, p by a right decision inside Delta = {p}.
    uint32_t x0 = pb.wr(pb.wr(s0, pq), pq);  // b0 |- a0, p, p
    uint32_t x1 = pb.wr(pb.wl(pb.id_line(pq), qbase(b->a)), qbase(a->b));
    uint32_t left = pb.decr(x0, x1, qa);     // b0 |- p, A
    // Right branch: p, b1 |- A.
    uint32_t y0 = pb.wr(pb.wl(pb.id_line(pq), qbase(b->b)), qbase(a->a));
    uint32_t y1 = pb.wl(pb.wl(s1, pq), pq);  // p, p, b1 |- a1
    uint32_t right = pb.decr(y0, y1, qa);    // p, b1 |- A
    return pb.decl(left, right, qbase(b));
  }
  if (a->kind == FKind::Or) {
    if (check_simulation(a->a, b, E)) {
      uint32_t p = sim_line(pb, a->a, b);  // b |- a0
      return pb.orr(pb.wr(p, qbase(a->b)), qbase(a));
    }
    if (check_simulation(a->b, b, E)) {
      uint32_t p = sim_line(pb, a->b, b);  // b |- a1
      return pb.orr(pb.wr(p, qbase(a->a)), qbase(a));
    }
  }
  if (a->kind == FKind::EVar) {
    const Formula* d = E.def(a->var);
    if (d && check_simulation(d, b, E)) {
      uint32_t p = sim_line(pb, d, b);  // b |- body
      return pb.cut2(p, pb.ext_line(a->var, false), qbase(d));
    }
  }
  throw BpwError("prove_simulation: " + render(b) + " |- " + render(a) +
                 " is not backed by a simulation");
}

}  // namespace

uint32_t prove_simulation_line(ProofBuilder& pb, const Formula* a,
                               const Formula* b) {
  if (!check_simulation(a, b, pb.aset()))
    throw BpwError("prove_simulation: simulation fails");
  return sim_line(pb, a, b);
}

Proof prove_simulation(const Formula* a, const Formula* b,
                       const AxiomSetPtr& E) {
  bool dt = is_edt(a, *E) && is_edt(b, *E);
  ProofBuilder pb(dt ? System::eLDT : System::eLNDT, E);
  return pb.take(prove_simulation_line(pb, a, b));
}

}  // namespace bpw
