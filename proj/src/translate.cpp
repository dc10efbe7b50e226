#include "bpw/translate.hpp"

#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bpw/decider.hpp"
#include "bpw/eval.hpp"
#include "bpw/parse.hpp"
#include "bpw/posdec.hpp"
#include "bpw/thresholds.hpp"

namespace bpw {

namespace {

// ---------------------------------------------------------------------
// Rule-instance analysis. Input proofs are only required to pass the
// multiset checker, so the principal formula of a line has to be
// recovered by the same matching the checker performs.

bool ms_eq(const Cedent& x, const Cedent& y) {
  return x.size() == y.size() && cedent_minus(x, y).empty();
}

// to == from \ {m} + adds, as multisets.
bool replaced(const Cedent& from, const Query* m, const Cedent& adds,
              const Cedent& to) {
  Cedent want = cedent_minus(from, {m});
  want.insert(want.end(), adds.begin(), adds.end());
  return ms_eq(want, to);
}

// The single member present in `to` but not in `from`.
const Query* one_added(const Cedent& from, const Cedent& to) {
  Cedent extra = cedent_minus(to, from);
  if (extra.size() != 1) throw BpwError("translate: malformed structural step");
  return extra[0];
}

Cedent plus(Cedent c, std::initializer_list<const Query*> xs) {
  c.insert(c.end(), xs.begin(), xs.end());
  return c;
}

std::vector<const Query*> distinct_members(const Cedent& c,
                                           bool (*pred)(const Query*)) {
  std::vector<const Query*> out;
  for (const Query* q : c) {
    if (!pred(q)) continue;
    bool seen = false;
    for (const Query* p : out) seen = seen || p == q;
    if (!seen) out.push_back(q);
  }
  return out;
}

[[noreturn]] void no_principal(const char* rule, const Sequent& s) {
  throw BpwError(std::string("translate: no principal formula for ") + rule +
                 " at " + render(s));
}

const Query* match_cut(const Sequent& s, const Sequent& p0) {
  return one_added(s.right, p0.right);
}

const Query* match_orl(const Sequent& s, const Sequent& p0, const Sequent& p1) {
  for (const Query* m : distinct_members(s.left, q_is_or))
    if (replaced(s.left, m, {q_left(m)}, p0.left) &&
        replaced(s.left, m, {q_right(m)}, p1.left))
      return m;
  no_principal("or-l", s);
}

const Query* match_orr(const Sequent& s, const Sequent& p) {
  for (const Query* m : distinct_members(s.right, q_is_or))
    if (replaced(s.right, m, {q_left(m), q_right(m)}, p.right)) return m;
  no_principal("or-r", s);
}

const Query* match_andl(const Sequent& s, const Sequent& p) {
  for (const Query* m : distinct_members(s.left, q_is_and))
    if (replaced(s.left, m, {q_left(m), q_right(m)}, p.left)) return m;
  no_principal("and-l", s);
}

const Query* match_andr(const Sequent& s, const Sequent& p0,
                        const Sequent& p1) {
  for (const Query* m : distinct_members(s.right, q_is_and))
    if (replaced(s.right, m, {q_left(m)}, p0.right) &&
        replaced(s.right, m, {q_right(m)}, p1.right))
      return m;
  no_principal("and-r", s);
}

const Query* match_notl(const Sequent& s, const Sequent& p) {
  for (const Query* m : distinct_members(s.left, q_is_not))
    if (replaced(s.left, m, {}, p.left)) return m;
  no_principal("not-l", s);
}

const Query* match_notr(const Sequent& s, const Sequent& p) {
  for (const Query* m : distinct_members(s.right, q_is_not))
    if (replaced(s.right, m, {}, p.right)) return m;
  no_principal("not-r", s);
}

const Query* match_decl(const Sequent& s, const Sequent& p0,
                        const Sequent& p1) {
  for (const Query* m : distinct_members(s.left, q_is_dec)) {
    const Query* pq = qbase(fpvar(q_dec_var(m)));
    if (replaced(s.left, m, {q_dec0(m)}, p0.left) &&
        ms_eq(p0.right, plus(Cedent(s.right), {pq})) &&
        replaced(s.left, m, {pq, q_dec1(m)}, p1.left))
      return m;
  }
  no_principal("dec-l", s);
}

const Query* match_decr(const Sequent& s, const Sequent& p0,
                        const Sequent& p1) {
  for (const Query* m : distinct_members(s.right, q_is_dec)) {
    const Query* pq = qbase(fpvar(q_dec_var(m)));
    if (replaced(s.right, m, {q_dec0(m), pq}, p0.right) &&
        ms_eq(p1.left, plus(Cedent(s.left), {pq})) &&
        replaced(s.right, m, {q_dec1(m)}, p1.right))
      return m;
  }
  no_principal("dec-r", s);
}

// Settles a derived line on the exact translated sequent: repairs a
// sub-multiset by weakening (cut2 merges shared context copies) and a
// super-multiset by contraction.
uint32_t settle(ProofBuilder& pb, uint32_t ln, const Sequent& target) {
  const Sequent& cur = pb.seq(ln);
  if (same_multiset(cur, target)) return ln;
  if (cedent_minus(cur.left, target.left).empty() &&
      cedent_minus(cur.right, target.right).empty())
    return pb.weaken_to(ln, target);
  return pb.contract_to(ln, target);
}

void require_checked(const Proof& pf, const char* who) {
  CheckResult r = check_proof(pf);
  if (!r.ok)
    throw BpwError(std::string(who) + ": input does not check (line " +
                   std::to_string(r.line) + ": " + r.error + ")");
}

}  // namespace

// ---------------------------------------------------------------------
// Structural negation.

const Formula* negate_formula(AxiomSetBuilder& ax, const Formula* f) {
  switch (f->kind) {
    case FKind::C0:
      return f1();
    case FKind::C1:
      return f0();
    case FKind::PVar:
      return fdec(f1(), f->var, f0());
    case FKind::Dec:
      return fdec(negate_formula(ax, f->a), f->var, negate_formula(ax, f->b));
    case FKind::And:
      return f_or(negate_formula(ax, f->a), negate_formula(ax, f->b));
    case FKind::EVar: {
      EVarId bar = evar_generated(
          Sort::E, "bar:" + std::to_string(static_cast<uint32_t>(f->var)));
      if (!ax.defined(bar)) {
        const Formula* body = ax.def(f->var);
        if (!body)
          throw BpwError("negate: undefined variable " + evar_name(f->var));
        ax.define(bar, negate_formula(ax, body));
      }
      return fevar(bar);
    }
    case FKind::Or:
      throw BpwError("negate: disjunction has no negation in this class");
  }
  throw BpwError("negate: unreachable");
}

std::pair<const Formula*, AxiomSetPtr> negate_coendt(const Formula* u,
                                                     AxiomSetPtr E) {
  AxiomSetBuilder ax(E);
  if (!is_coendt(u, ax.view()))
    throw BpwError("negate: operand is not a conjunctive formula");
  const Formula* bar = negate_formula(ax, u);
  return {bar, ax.snapshot()};
}

// |- A, bar-A by induction on A; or/and operands are rejected since the
// target line would not stay in the or-only fragment.
uint32_t negation_right(ProofBuilder& pb, const Formula* f) {
  const Formula* nf = negate_formula(pb.axioms(), f);
  Sequent target{{}, {qbase(f), qbase(nf)}};
  if (uint32_t ln = pb.find(target); ln != kNoLine) return ln;
  switch (f->kind) {
    case FKind::C0:
    case FKind::C1:
      return pb.wr(pb.one_r(), qbase(f0()));
    case FKind::PVar: {
      const Query* pq = qbase(fpvar(f->var));
      uint32_t p0 = pb.wr(pb.wr(pb.one_r(), pq), pq);     // |- 1, p, p
      uint32_t p1 = pb.wr(pb.id_line(pq), qbase(f0()));   // p |- p, 0
      return pb.decr(p0, p1, qbase(nf));
    }
    case FKind::Dec: {
      const Query* pq = qbase(fpvar(f->var));
      const Query* a = qbase(f->a);
      const Query* b = qbase(f->b);
      const Query* na = qbase(negate_formula(pb.axioms(), f->a));
      const Query* nb = qbase(negate_formula(pb.axioms(), f->b));
      // |- a, p, nf from |- a, bar-a then a second decision on nf.
      uint32_t a0 = pb.wr(pb.wr(negation_right(pb, f->a), pq), pq);
      uint32_t a1 = pb.wr(pb.wr(pb.id_line(pq), a), nb);
      uint32_t p0 = pb.decr(a0, a1, qbase(nf));  // |- a, p, nf
      // p |- b, nf symmetrically.
      uint32_t b0 = pb.wr(pb.wr(pb.id_line(pq), b), na);
      uint32_t b1 = pb.wl(pb.wl(negation_right(pb, f->b), pq), pq);
      uint32_t p1 = pb.decr(b0, b1, qbase(nf));  // p |- b, nf
      return pb.decr(p0, p1, qbase(f));
    }
    case FKind::EVar: {
      uint32_t body = negation_right(pb, pb.axioms().def(f->var));
      uint32_t c = pb.cut2(body, pb.ext_line(f->var, false),
                           qbase(pb.axioms().def(f->var)));
      const Formula* nbody = negate_formula(pb.axioms(), pb.axioms().def(f->var));
      EVarId bar = nf->var;
      return pb.cut2(c, pb.ext_line(bar, false), qbase(nbody));
    }
    default:
      throw BpwError("negation_right: operand outside the decision fragment");
  }
}

// A, bar-A |- by induction on A.
uint32_t negation_left(ProofBuilder& pb, const Formula* f) {
  const Formula* nf = negate_formula(pb.axioms(), f);
  Sequent target{{qbase(f), qbase(nf)}, {}};
  if (uint32_t ln = pb.find(target); ln != kNoLine) return ln;
  switch (f->kind) {
    case FKind::C0:
    case FKind::C1:
      return pb.wl(pb.zero_l(), qbase(f1()));
    case FKind::PVar: {
      const Query* pq = qbase(fpvar(f->var));
      uint32_t p0 = pb.wl(pb.id_line(pq), qbase(f1()));   // p, 1 |- p
      uint32_t p1 = pb.wl(pb.wl(pb.zero_l(), pq), pq);    // p, p, 0 |-
      return pb.decl(p0, p1, qbase(nf));
    }
    case FKind::Dec: {
      const Query* pq = qbase(fpvar(f->var));
      const Query* a = qbase(f->a);
      const Query* b = qbase(f->b);
      const Query* na = qbase(negate_formula(pb.axioms(), f->a));
      const Query* nb = qbase(negate_formula(pb.axioms(), f->b));
      // a, nf |- p via a decision on nf over a, bar-a |-.
      uint32_t a0 = pb.wr(negation_left(pb, f->a), pq);
      a0 = pb.wr(a0, pq);                                 // a, na |- p, p
      uint32_t a1 = pb.wl(pb.wl(pb.id_line(pq), a), nb);  // a, p, nb |- p
      uint32_t p0 = pb.decl(a0, a1, qbase(nf));           // a, nf |- p
      // p, b, nf |- symmetrically.
      uint32_t b0 = pb.wl(pb.wl(pb.id_line(pq), b), na);  // p, b, na |- p
      uint32_t b1 = pb.wl(pb.wl(negation_left(pb, f->b), pq), pq);
      uint32_t p1 = pb.decl(b0, b1, qbase(nf));           // p, b, nf |-
      return pb.decl(p0, p1, qbase(f));
    }
    case FKind::EVar: {
      uint32_t body = negation_left(pb, pb.axioms().def(f->var));
      uint32_t c = pb.cut2(pb.ext_line(f->var, true), body,
                           qbase(pb.axioms().def(f->var)));
      const Formula* nbody = negate_formula(pb.axioms(), pb.axioms().def(f->var));
      EVarId bar = nf->var;
      return pb.cut2(pb.ext_line(bar, true), c, qbase(nbody));
    }
    default:
      throw BpwError("negation_left: operand outside the decision fragment");
  }
}

// ---------------------------------------------------------------------
// Sink-substitution connectives.

const Formula* bp_and(ProofBuilder& pb, const Formula* f, const Formula* g) {
  switch (f->kind) {
    case FKind::C0:
      return f0();
    case FKind::C1:
      return g;
    case FKind::PVar:
      return fdec(f0(), f->var, g);
    case FKind::Dec:
      return fdec(bp_and(pb, f->a, g), f->var, bp_and(pb, f->b, g));
    case FKind::EVar: {
      EVarId v = evar_generated(
          Sort::E, "band:" + std::to_string(static_cast<uint32_t>(f->var)) +
                       ":" + std::to_string(g->id));
      if (!pb.axioms().defined(v)) {
        const Formula* body = pb.axioms().def(f->var);
        if (!body)
          throw BpwError("bp_and: undefined variable " + evar_name(f->var));
        pb.define_evar(v, bp_and(pb, body, g));
      }
      return fevar(v);
    }
    default:
      throw BpwError("bp_and: first operand must be an eDT formula");
  }
}

const Formula* bp_or(ProofBuilder& pb, const Formula* f, const Formula* g) {
  switch (f->kind) {
    case FKind::C0:
      return g;
    case FKind::C1:
      return f1();
    case FKind::PVar:
      return fdec(g, f->var, f1());
    case FKind::Dec:
      return fdec(bp_or(pb, f->a, g), f->var, bp_or(pb, f->b, g));
    case FKind::EVar: {
      EVarId v = evar_generated(
          Sort::E, "bor:" + std::to_string(static_cast<uint32_t>(f->var)) +
                       ":" + std::to_string(g->id));
      if (!pb.axioms().defined(v)) {
        const Formula* body = pb.axioms().def(f->var);
        if (!body)
          throw BpwError("bp_or: undefined variable " + evar_name(f->var));
        pb.define_evar(v, bp_or(pb, body, g));
      }
      return fevar(v);
    }
    default:
      throw BpwError("bp_or: first operand must be an eDT formula");
  }
}

// bp_and(f, g) |- f.
uint32_t bp_and_left1(ProofBuilder& pb, const Formula* f, const Formula* g) {
  const Formula* m = bp_and(pb, f, g);
  Sequent target{{qbase(m)}, {qbase(f)}};
  if (uint32_t ln = pb.find(target); ln != kNoLine) return ln;
  switch (f->kind) {
    case FKind::C0:
      return pb.id_line(qbase(f0()));
    case FKind::C1:
      return pb.wl(pb.one_r(), qbase(g));
    case FKind::PVar: {
      const Query* pq = qbase(fpvar(f->var));
      uint32_t p0 = pb.wr(pb.wr(pb.zero_l(), pq), pq);  // 0 |- p, p
      uint32_t p1 = pb.wl(pb.id_line(pq), qbase(g));    // p, g |- p
      return pb.decl(p0, p1, qbase(m));
    }
    case FKind::Dec: {
      const Query* pq = qbase(fpvar(f->var));
      const Query* ma = qbase(bp_and(pb, f->a, g));
      const Query* mb = qbase(bp_and(pb, f->b, g));
      // ma |- p, f then p, mb |- f, by decisions on f over the branch lines.
      uint32_t a0 = pb.wr(pb.wr(bp_and_left1(pb, f->a, g), pq), pq);
      uint32_t a1 = pb.wr(pb.wl(pb.id_line(pq), ma), qbase(f->b));
      uint32_t p0 = pb.decr(a0, a1, qbase(f));  // ma |- p, f
      uint32_t b0 = pb.wr(pb.wl(pb.id_line(pq), mb), qbase(f->a));
      uint32_t b1 = pb.wl(pb.wl(bp_and_left1(pb, f->b, g), pq), pq);
      uint32_t p1 = pb.decr(b0, b1, qbase(f));  // p, mb |- f
      return pb.decl(p0, p1, qbase(m));
    }
    case FKind::EVar: {
      const Formula* body = pb.axioms().def(f->var);
      uint32_t c = pb.cut2(pb.ext_line(m->var, true),
                           bp_and_left1(pb, body, g), qbase(bp_and(pb, body, g)));
      return pb.cut2(c, pb.ext_line(f->var, false), qbase(body));
    }
    default:
      throw BpwError("bp_and_left1: unreachable operand");
  }
}

// bp_and(f, g) |- g.
uint32_t bp_and_left2(ProofBuilder& pb, const Formula* f, const Formula* g) {
  const Formula* m = bp_and(pb, f, g);
  Sequent target{{qbase(m)}, {qbase(g)}};
  if (uint32_t ln = pb.find(target); ln != kNoLine) return ln;
  switch (f->kind) {
    case FKind::C0:
      return pb.wr(pb.zero_l(), qbase(g));
    case FKind::C1:
      return pb.id_line(qbase(g));
    case FKind::PVar: {
      const Query* pq = qbase(fpvar(f->var));
      uint32_t p0 = pb.wr(pb.wr(pb.zero_l(), qbase(g)), pq);  // 0 |- g, p
      uint32_t p1 = pb.wl(pb.id_line(qbase(g)), pq);          // p, g |- g
      return pb.decl(p0, p1, qbase(m));
    }
    case FKind::Dec: {
      const Query* pq = qbase(fpvar(f->var));
      uint32_t p0 = pb.wr(bp_and_left2(pb, f->a, g), pq);
      uint32_t p1 = pb.wl(bp_and_left2(pb, f->b, g), pq);
      return pb.decl(p0, p1, qbase(m));
    }
    case FKind::EVar: {
      const Formula* body = pb.axioms().def(f->var);
      return pb.cut2(pb.ext_line(m->var, true), bp_and_left2(pb, body, g),
                     qbase(bp_and(pb, body, g)));
    }
    default:
      throw BpwError("bp_and_left2: unreachable operand");
  }
}

// f, g |- bp_and(f, g).
uint32_t bp_and_right(ProofBuilder& pb, const Formula* f, const Formula* g) {
  const Formula* m = bp_and(pb, f, g);
  Sequent target{{qbase(f), qbase(g)}, {qbase(m)}};
  if (uint32_t ln = pb.find(target); ln != kNoLine) return ln;
  switch (f->kind) {
    case FKind::C0:
      return pb.wr(pb.wl(pb.zero_l(), qbase(g)), qbase(f0()));
    case FKind::C1:
      return pb.wl(pb.id_line(qbase(g)), qbase(f1()));
    case FKind::PVar: {
      const Query* pq = qbase(fpvar(f->var));
      uint32_t p0 = pb.wl(pb.wr(pb.id_line(pq), qbase(f0())), qbase(g));
      uint32_t p1 = pb.wl(pb.wl(pb.id_line(qbase(g)), pq), pq);
      return pb.decr(p0, p1, qbase(m));
    }
    case FKind::Dec: {
      const Query* pq = qbase(fpvar(f->var));
      const Query* ma = qbase(bp_and(pb, f->a, g));
      const Query* mb = qbase(bp_and(pb, f->b, g));
      // a, g |- p, m and p, b, g |- m via inner decisions on m.
      uint32_t a0 = pb.wr(pb.wr(bp_and_right(pb, f->a, g), pq), pq);
      uint32_t a1 = pb.wr(pb.wl(pb.wl(pb.id_line(pq), qbase(f->a)), qbase(g)), mb);
      uint32_t p0 = pb.decr(a0, a1, qbase(m));  // a, g |- p, m
      uint32_t b0 = pb.wr(pb.wl(pb.wl(pb.id_line(pq), qbase(f->b)), qbase(g)), ma);
      uint32_t b1 = pb.wl(pb.wl(bp_and_right(pb, f->b, g), pq), pq);
      uint32_t p1 = pb.decr(b0, b1, qbase(m));  // p, b, g |- m
      return pb.decl(p0, p1, qbase(f));
    }
    case FKind::EVar: {
      const Formula* body = pb.axioms().def(f->var);
      uint32_t c = pb.cut2(pb.ext_line(f->var, true),
                           bp_and_right(pb, body, g), qbase(body));
      return pb.cut2(c, pb.ext_line(m->var, false),
                     qbase(bp_and(pb, body, g)));
    }
    default:
      throw BpwError("bp_and_right: unreachable operand");
  }
}

// f |- bp_or(f, g).
uint32_t bp_or_right1(ProofBuilder& pb, const Formula* f, const Formula* g) {
  const Formula* m = bp_or(pb, f, g);
  Sequent target{{qbase(f)}, {qbase(m)}};
  if (uint32_t ln = pb.find(target); ln != kNoLine) return ln;
  switch (f->kind) {
    case FKind::C0:
      return pb.wr(pb.zero_l(), qbase(g));
    case FKind::C1:
      return pb.id_line(qbase(f1()));
    case FKind::PVar: {
      const Query* pq = qbase(fpvar(f->var));
      uint32_t p0 = pb.wr(pb.id_line(pq), qbase(g));      // p |- g, p
      uint32_t p1 = pb.wl(pb.wl(pb.one_r(), pq), pq);     // p, p |- 1
      return pb.decr(p0, p1, qbase(m));
    }
    case FKind::Dec: {
      const Query* pq = qbase(fpvar(f->var));
      const Query* ma = qbase(bp_or(pb, f->a, g));
      const Query* mb = qbase(bp_or(pb, f->b, g));
      uint32_t a0 = pb.wr(pb.wr(bp_or_right1(pb, f->a, g), pq), pq);
      uint32_t a1 = pb.wr(pb.wl(pb.id_line(pq), qbase(f->a)), mb);
      uint32_t p0 = pb.decr(a0, a1, qbase(m));  // a |- p, m
      uint32_t b0 = pb.wr(pb.wl(pb.id_line(pq), qbase(f->b)), ma);
      uint32_t b1 = pb.wl(pb.wl(bp_or_right1(pb, f->b, g), pq), pq);
      uint32_t p1 = pb.decr(b0, b1, qbase(m));  // p, b |- m
      return pb.decl(p0, p1, qbase(f));
    }
    case FKind::EVar: {
      const Formula* body = pb.axioms().def(f->var);
      uint32_t c = pb.cut2(pb.ext_line(f->var, true),
                           bp_or_right1(pb, body, g), qbase(body));
      return pb.cut2(c, pb.ext_line(m->var, false), qbase(bp_or(pb, body, g)));
    }
    default:
      throw BpwError("bp_or_right1: unreachable operand");
  }
}

// g |- bp_or(f, g).
uint32_t bp_or_right2(ProofBuilder& pb, const Formula* f, const Formula* g) {
  const Formula* m = bp_or(pb, f, g);
  Sequent target{{qbase(g)}, {qbase(m)}};
  if (uint32_t ln = pb.find(target); ln != kNoLine) return ln;
  switch (f->kind) {
    case FKind::C0:
      return pb.id_line(qbase(g));
    case FKind::C1:
      return pb.wl(pb.one_r(), qbase(g));
    case FKind::PVar: {
      const Query* pq = qbase(fpvar(f->var));
      uint32_t p0 = pb.wr(pb.id_line(qbase(g)), pq);      // g |- g, p
      uint32_t p1 = pb.wl(pb.wl(pb.one_r(), qbase(g)), pq);
      return pb.decr(p0, p1, qbase(m));
    }
    case FKind::Dec: {
      const Query* pq = qbase(fpvar(f->var));
      uint32_t p0 = pb.wr(bp_or_right2(pb, f->a, g), pq);
      uint32_t p1 = pb.wl(bp_or_right2(pb, f->b, g), pq);
      return pb.decr(p0, p1, qbase(m));
    }
    case FKind::EVar: {
      const Formula* body = pb.axioms().def(f->var);
      return pb.cut2(bp_or_right2(pb, body, g), pb.ext_line(m->var, false),
                     qbase(bp_or(pb, body, g)));
    }
    default:
      throw BpwError("bp_or_right2: unreachable operand");
  }
}

// bp_or(f, g) |- f, g.
uint32_t bp_or_left(ProofBuilder& pb, const Formula* f, const Formula* g) {
  const Formula* m = bp_or(pb, f, g);
  Sequent target{{qbase(m)}, {qbase(f), qbase(g)}};
  if (uint32_t ln = pb.find(target); ln != kNoLine) return ln;
  switch (f->kind) {
    case FKind::C0:
      return pb.wr(pb.id_line(qbase(g)), qbase(f0()));
    case FKind::C1:
      return pb.wr(pb.id_line(qbase(f1())), qbase(g));
    case FKind::PVar: {
      const Query* pq = qbase(fpvar(f->var));
      uint32_t p0 = pb.wr(pb.wr(pb.id_line(qbase(g)), pq), pq);  // g |- p, g*, p
      uint32_t p1 = pb.wr(pb.wl(pb.id_line(pq), qbase(f1())), qbase(g));
      return pb.decl(p0, p1, qbase(m));
    }
    case FKind::Dec: {
      const Query* pq = qbase(fpvar(f->var));
      const Query* ma = qbase(bp_or(pb, f->a, g));
      const Query* mb = qbase(bp_or(pb, f->b, g));
      // ma |- g, p, f and p, mb |- g, f via inner decisions on f.
      uint32_t a0 = pb.wr(pb.wr(bp_or_left(pb, f->a, g), pq), pq);
      uint32_t a1 = pb.wr(pb.wr(pb.wl(pb.id_line(pq), ma), qbase(g)), qbase(f->b));
      uint32_t p0 = pb.decr(a0, a1, qbase(f));  // ma |- g, p, f
      uint32_t b0 = pb.wr(pb.wr(pb.wl(pb.id_line(pq), mb), qbase(g)), qbase(f->a));
      uint32_t b1 = pb.wl(pb.wl(bp_or_left(pb, f->b, g), pq), pq);
      uint32_t p1 = pb.decr(b0, b1, qbase(f));  // p, mb |- g, f
      return pb.decl(p0, p1, qbase(m));
    }
    case FKind::EVar: {
      const Formula* body = pb.axioms().def(f->var);
      uint32_t c = pb.cut2(pb.ext_line(m->var, true), bp_or_left(pb, body, g),
                           qbase(bp_or(pb, body, g)));
      return pb.cut2(c, pb.ext_line(f->var, false), qbase(body));
    }
    default:
      throw BpwError("bp_or_left: unreachable operand");
  }
}


// ---------------------------------------------------------------------
// LK(eLDT) to eLDT.

namespace {

const Formula* base_f(const Query* q, const char* who) {
  if (q->kind != QKind::Base)
    throw BpwError(std::string(who) + ": query-tier member " + render(q) +
                   " outside the expected class");
  return q->f;
}

Cedent replace_one(Cedent c, const Query* from, const Cedent& to) {
  Cedent out = cedent_minus(c, {from});
  if (out.size() + 1 != c.size())
    throw BpwError("translate: principal member missing from its line");
  out.insert(out.end(), to.begin(), to.end());
  return out;
}

}  // namespace

Proof eliminate_bool(const Proof& pf) {
  Proof in = pf;
  in.system = System::LK_eLDT;
  require_checked(in, "eliminate_bool");
  for (const Query* q : in.conclusion().left)
    if (q->kind != QKind::Base || !is_edt(q->f, *in.axioms))
      throw BpwError("eliminate_bool: conclusion is not an eDT sequent");
  for (const Query* q : in.conclusion().right)
    if (q->kind != QKind::Base || !is_edt(q->f, *in.axioms))
      throw BpwError("eliminate_bool: conclusion is not an eDT sequent");

  ProofBuilder pb(System::eLDT, in.axioms);
  std::unordered_map<const Query*, const Formula*> memo;

  // Query compilation: eDT formulas stand, everything else becomes a
  // fresh decision program.
  auto trf = [&](auto&& self, const Formula* f) -> const Formula* {
    if (is_edt(f, pb.aset())) return f;
    switch (f->kind) {
      case FKind::Or:
        return bp_or(pb, self(self, f->a), self(self, f->b));
      case FKind::And:
        return bp_and(pb, self(self, f->a), self(self, f->b));
      default:
        throw BpwError("eliminate_bool: member outside Boolean-over-eDT");
    }
  };
  auto trq = [&](auto&& self, const Query* q) -> const Formula* {
    if (auto it = memo.find(q); it != memo.end()) return it->second;
    const Formula* r = nullptr;
    switch (q->kind) {
      case QKind::Base:
        r = trf(trf, q->f);
        break;
      case QKind::Not:
        r = negate_formula(pb.axioms(), self(self, q->a));
        break;
      case QKind::QOr:
        r = bp_or(pb, self(self, q->a), self(self, q->b));
        break;
      case QKind::QAnd:
        r = bp_and(pb, self(self, q->a), self(self, q->b));
        break;
    }
    memo.emplace(q, r);
    return r;
  };
  auto trm = [&](const Query* q) { return qbase(trq(trq, q)); };
  auto trs = [&](const Sequent& s) {
    Sequent t;
    for (const Query* q : s.left) t.left.push_back(trm(q));
    for (const Query* q : s.right) t.right.push_back(trm(q));
    return t;
  };

  std::vector<uint32_t> out(in.lines.size(), kNoLine);
  for (size_t i = 0; i < in.lines.size(); ++i) {
    const ProofLine& L = in.lines[i];
    const Sequent& s = L.seq;
    auto ps = [&](int j) -> const Sequent& { return in.lines[L.prem[j]].seq; };
    auto tp = [&](int j) { return out[L.prem[j]]; };
    Sequent t = trs(s);
    uint32_t ln = kNoLine;
    switch (L.rule) {
      case Rule::Id:
        ln = pb.id_line(trm(s.left[0]));
        break;
      case Rule::ZeroL:
        ln = pb.zero_l();
        break;
      case Rule::OneR:
        ln = pb.one_r();
        break;
      case Rule::Ext:
        ln = pb.ext_line(L.ext->var, L.ext->left_to_right);
        break;
      case Rule::ExL:
      case Rule::ExR:
        ln = tp(0);
        break;
      case Rule::WL:
      case Rule::WR:
      case Rule::OneL:
      case Rule::ZeroR:
        ln = pb.weaken_to(tp(0), t);
        break;
      case Rule::CL:
      case Rule::CR:
        ln = pb.contract_to(tp(0), t);
        break;
      case Rule::Cut:
        ln = pb.cut2(tp(0), tp(1), trm(match_cut(s, ps(0))));
        break;
      case Rule::DecL:
        ln = pb.decl(tp(0), tp(1), trm(match_decl(s, ps(0), ps(1))));
        break;
      case Rule::DecR:
        ln = pb.decr(tp(0), tp(1), trm(match_decr(s, ps(0), ps(1))));
        break;
      case Rule::NotL: {
        const Query* m = match_notl(s, ps(0));
        const Formula* f = trq(trq, m->a);
        ln = pb.cut2(tp(0), negation_left(pb, f), qbase(f));
        break;
      }
      case Rule::NotR: {
        const Query* m = match_notr(s, ps(0));
        const Formula* f = trq(trq, m->a);
        ln = pb.cut2(negation_right(pb, f), tp(0), qbase(f));
        break;
      }
      case Rule::AndL: {
        const Query* m = match_andl(s, ps(0));
        const Formula* f = trq(trq, q_left(m));
        const Formula* g = trq(trq, q_right(m));
        uint32_t c = pb.cut2(bp_and_left1(pb, f, g), tp(0), qbase(f));
        ln = pb.cut2(bp_and_left2(pb, f, g), c, qbase(g));
        break;
      }
      case Rule::AndR: {
        const Query* m = match_andr(s, ps(0), ps(1));
        const Formula* f = trq(trq, q_left(m));
        const Formula* g = trq(trq, q_right(m));
        uint32_t c = pb.cut2(tp(1), bp_and_right(pb, f, g), qbase(g));
        ln = pb.cut2(tp(0), c, qbase(f));
        break;
      }
      case Rule::OrL: {
        const Query* m = match_orl(s, ps(0), ps(1));
        const Formula* f = trq(trq, q_left(m));
        const Formula* g = trq(trq, q_right(m));
        uint32_t c = pb.cut2(bp_or_left(pb, f, g), tp(0), qbase(f));
        ln = pb.cut2(c, tp(1), qbase(g));
        break;
      }
      case Rule::OrR: {
        const Query* m = match_orr(s, ps(0));
        const Formula* f = trq(trq, q_left(m));
        const Formula* g = trq(trq, q_right(m));
        uint32_t c = pb.cut2(tp(0), bp_or_right1(pb, f, g), qbase(f));
        ln = pb.cut2(c, bp_or_right2(pb, f, g), qbase(g));
        break;
      }
    }
    out[i] = settle(pb, ln, t);
  }
  return pb.take(out.back());
}

// ---------------------------------------------------------------------
// LK+(eLNDT) to eLNDT.

Proof eliminate_pos(const Proof& pf) {
  Proof in = pf;
  in.system = System::LKpos_eLNDT;
  require_checked(in, "eliminate_pos");
  for (const Query* q : in.conclusion().left)
    if (q->kind != QKind::Base || !is_endt(q->f, *in.axioms))
      throw BpwError("eliminate_pos: conclusion is not an eNDT sequent");
  for (const Query* q : in.conclusion().right)
    if (q->kind != QKind::Base || !is_endt(q->f, *in.axioms))
      throw BpwError("eliminate_pos: conclusion is not an eNDT sequent");

  ProofBuilder pb(System::eLNDT, in.axioms);
  std::unordered_map<const Query*, const Formula*> memo;
  auto trf = [&](auto&& self, const Formula* f) -> const Formula* {
    if (is_endt(f, pb.aset())) return f;
    switch (f->kind) {
      case FKind::Or:
        return f_or(self(self, f->a), self(self, f->b));
      case FKind::And:
        return posdec(pb, f0(), self(self, f->a), self(self, f->b));
      default:
        throw BpwError("eliminate_pos: member outside positive-over-eNDT");
    }
  };
  auto trq = [&](auto&& self, const Query* q) -> const Formula* {
    if (auto it = memo.find(q); it != memo.end()) return it->second;
    const Formula* r = nullptr;
    switch (q->kind) {
      case QKind::Base:
        r = trf(trf, q->f);
        break;
      case QKind::QOr:
        r = f_or(self(self, q->a), self(self, q->b));
        break;
      case QKind::QAnd:
        r = posdec(pb, f0(), self(self, q->a), self(self, q->b));
        break;
      case QKind::Not:
        throw BpwError("eliminate_pos: negation in a positive proof");
    }
    memo.emplace(q, r);
    return r;
  };
  auto trm = [&](const Query* q) { return qbase(trq(trq, q)); };
  auto trs = [&](const Sequent& s) {
    Sequent t;
    for (const Query* q : s.left) t.left.push_back(trm(q));
    for (const Query* q : s.right) t.right.push_back(trm(q));
    return t;
  };

  std::vector<uint32_t> out(in.lines.size(), kNoLine);
  for (size_t i = 0; i < in.lines.size(); ++i) {
    const ProofLine& L = in.lines[i];
    const Sequent& s = L.seq;
    auto ps = [&](int j) -> const Sequent& { return in.lines[L.prem[j]].seq; };
    auto tp = [&](int j) { return out[L.prem[j]]; };
    Sequent t = trs(s);
    uint32_t ln = kNoLine;
    switch (L.rule) {
      case Rule::Id:
        ln = pb.id_line(trm(s.left[0]));
        break;
      case Rule::ZeroL:
        ln = pb.zero_l();
        break;
      case Rule::OneR:
        ln = pb.one_r();
        break;
      case Rule::Ext:
        ln = pb.ext_line(L.ext->var, L.ext->left_to_right);
        break;
      case Rule::ExL:
      case Rule::ExR:
        ln = tp(0);
        break;
      case Rule::WL:
      case Rule::WR:
      case Rule::OneL:
      case Rule::ZeroR:
        ln = pb.weaken_to(tp(0), t);
        break;
      case Rule::CL:
      case Rule::CR:
        ln = pb.contract_to(tp(0), t);
        break;
      case Rule::Cut:
        ln = pb.cut2(tp(0), tp(1), trm(match_cut(s, ps(0))));
        break;
      case Rule::DecL:
        ln = pb.decl(tp(0), tp(1), trm(match_decl(s, ps(0), ps(1))));
        break;
      case Rule::DecR:
        ln = pb.decr(tp(0), tp(1), trm(match_decr(s, ps(0), ps(1))));
        break;
      case Rule::OrL:
        ln = pb.orl(tp(0), tp(1), trm(match_orl(s, ps(0), ps(1))));
        break;
      case Rule::OrR:
        ln = pb.orr(tp(0), trm(match_orr(s, ps(0))));
        break;
      case Rule::AndL: {
        const Query* m = match_andl(s, ps(0));
        const Formula* f = trq(trq, q_left(m));
        const Formula* g = trq(trq, q_right(m));
        const Formula* P = posdec(pb, f0(), f, g);
        // The a-premise of the derived left rule is vacuous at a = 0.
        Sequent zt{replace_one(t.left, qbase(P), {qbase(f0())}), t.right};
        uint32_t z = pb.weaken_to(pb.zero_l(), zt);
        ln = posdec_left(pb, f0(), f, g, z, tp(0));
        break;
      }
      case Rule::AndR: {
        const Query* m = match_andr(s, ps(0), ps(1));
        const Formula* f = trq(trq, q_left(m));
        const Formula* g = trq(trq, q_right(m));
        uint32_t r1 = pb.wr(tp(0), qbase(f0()));
        uint32_t r2 = pb.wr(tp(1), qbase(f0()));
        ln = posdec_right(pb, f0(), f, g, r1, r2);
        break;
      }
      case Rule::NotL:
      case Rule::NotR:
        throw BpwError("eliminate_pos: negation rule in a positive proof");
    }
    out[i] = settle(pb, ln, t);
  }
  return pb.take(out.back());
}

// ---------------------------------------------------------------------
// Duality.

namespace {

// Dualizes every line of a co-eLNDT proof into pb; returns the line
// proving bar-Delta |- bar-Gamma for the input conclusion.
uint32_t dualize_into(ProofBuilder& pb, const Proof& in) {
  auto bar = [&](const Query* q) {
    return qbase(negate_formula(pb.axioms(), base_f(q, "dualize")));
  };
  auto trs = [&](const Sequent& s) {
    Sequent t;
    for (const Query* q : s.right) t.left.push_back(bar(q));
    for (const Query* q : s.left) t.right.push_back(bar(q));
    return t;
  };

  std::vector<uint32_t> out(in.lines.size(), kNoLine);
  for (size_t i = 0; i < in.lines.size(); ++i) {
    const ProofLine& L = in.lines[i];
    const Sequent& s = L.seq;
    auto ps = [&](int j) -> const Sequent& { return in.lines[L.prem[j]].seq; };
    auto tp = [&](int j) { return out[L.prem[j]]; };
    Sequent t = trs(s);
    uint32_t ln = kNoLine;
    switch (L.rule) {
      case Rule::Id:
        ln = pb.id_line(bar(s.left[0]));
        break;
      case Rule::ZeroL:
        ln = pb.one_r();
        break;
      case Rule::OneR:
        ln = pb.zero_l();
        break;
      case Rule::Ext: {
        const Formula* bv = negate_formula(pb.axioms(), fevar(L.ext->var));
        ln = pb.ext_line(bv->var, !L.ext->left_to_right);
        break;
      }
      case Rule::ExL:
      case Rule::ExR:
        ln = tp(0);
        break;
      case Rule::WL:
      case Rule::WR:
      case Rule::OneL:
      case Rule::ZeroR:
        ln = pb.weaken_to(tp(0), t);
        break;
      case Rule::CL:
      case Rule::CR:
        ln = pb.contract_to(tp(0), t);
        break;
      case Rule::Cut:
        ln = pb.cut2(tp(1), tp(0), bar(match_cut(s, ps(0))));
        break;
      case Rule::AndL:
        ln = pb.orr(tp(0), bar(match_andl(s, ps(0))));
        break;
      case Rule::AndR:
        ln = pb.orl(tp(0), tp(1), bar(match_andr(s, ps(0), ps(1))));
        break;
      case Rule::DecL:
      case Rule::DecR: {
        const Query* m = L.rule == Rule::DecL ? match_decl(s, ps(0), ps(1))
                                              : match_decr(s, ps(0), ps(1));
        const Formula* fp = fpvar(q_dec_var(m));
        const Query* np = qbase(negate_formula(pb.axioms(), fp));
        uint32_t P0 = pb.cut2(negation_right(pb, fp), tp(0), np);
        uint32_t P1 = pb.cut2(tp(1), negation_left(pb, fp), np);
        ln = L.rule == Rule::DecL ? pb.decr(P0, P1, bar(m))
                                  : pb.decl(P0, P1, bar(m));
        break;
      }
      default:
        throw BpwError("dualize: rule outside the conjunctive calculus");
    }
    out[i] = settle(pb, ln, t);
  }
  return out.back();
}

}  // namespace

Proof dualize_proof(const Proof& pf) {
  Proof in = pf;
  in.system = System::co_eLNDT;
  require_checked(in, "dualize");
  ProofBuilder pb(System::eLNDT, in.axioms);
  return pb.take(dualize_into(pb, in));
}

Proof coelndt_to_elndt(const Proof& pf) {
  Proof in = pf;
  in.system = System::co_eLNDT;
  require_checked(in, "coelndt_to_elndt");
  const Sequent& goal = in.conclusion();
  for (const Query* q : goal.left)
    if (!is_dt(base_f(q, "coelndt_to_elndt"), *in.axioms))
      throw BpwError("coelndt_to_elndt: conclusion member is not a plain tree");
  for (const Query* q : goal.right)
    if (!is_dt(base_f(q, "coelndt_to_elndt"), *in.axioms))
      throw BpwError("coelndt_to_elndt: conclusion member is not a plain tree");

  ProofBuilder pb(System::eLNDT, in.axioms);
  uint32_t cur = dualize_into(pb, in);
  // Cut every conclusion member back to its own side.
  for (const Query* q : goal.right) {
    const Formula* d = q->f;
    const Query* nd = qbase(negate_formula(pb.axioms(), d));
    cur = pb.cut2(negation_right(pb, d), cur, nd);
  }
  for (const Query* q : goal.left) {
    const Formula* g = q->f;
    const Query* ng = qbase(negate_formula(pb.axioms(), g));
    cur = pb.cut2(cur, negation_left(pb, g), ng);
  }
  return pb.take(settle(pb, cur, goal));
}


// ---------------------------------------------------------------------
// Inductive counting: eL(EA)DT to eLNDT.

std::vector<const Formula*> coendt_parts(const Proof& pf) {
  std::vector<const Formula*> out;
  std::unordered_set<const Formula*> seen;
  const ExtAxiomSet& E = *pf.axioms;
  auto rec = [&](auto&& self, const Formula* f) -> void {
    if (!seen.insert(f).second) return;
    if (is_coendt(f, E) && !is_edt(f, E)) out.push_back(f);
    switch (f->kind) {
      case FKind::Dec:
      case FKind::Or:
      case FKind::And:
        self(self, f->a);
        self(self, f->b);
        break;
      case FKind::EVar:
        if (const Formula* body = E.def(f->var)) self(self, body);
        break;
      default:
        break;
    }
  };
  for (const ProofLine& L : pf.lines) {
    for (const Query* q : L.seq.left) rec(rec, base_f(q, "coendt_parts"));
    for (const Query* q : L.seq.right) rec(rec, base_f(q, "coendt_parts"));
  }
  return out;
}

KCollapse k_context(ProofBuilder& pb, const Proof& pf) {
  KCollapse kc;
  kc.parts = coendt_parts(pf);
  for (size_t i = 0; i < kc.parts.size(); ++i) {
    kc.bars.push_back(negate_formula(pb.axioms(), kc.parts[i]));
    kc.index.emplace(kc.parts[i], static_cast<int>(i));
  }
  return kc;
}

const Formula* k_translate(ProofBuilder& pb, KCollapse& kc, const Formula* x,
                           int k) {
  if (auto it = kc.index.find(x); it != kc.index.end()) {
    DeciderSpec ds{kc.bars, it->second, k, f1(), f0()};
    return decider_cell(pb, ds, 0, 0, 0);
  }
  if (is_edt(x, pb.aset())) return x;
  if (static_cast<size_t>(k) >= kc.memo.size()) kc.memo.resize(k + 1);
  auto& memo = kc.memo[k];
  if (auto it = memo.find(x); it != memo.end()) return it->second;
  const Formula* r = nullptr;
  switch (x->kind) {
    case FKind::Dec:
      r = fdec(k_translate(pb, kc, x->a, k), x->var,
               k_translate(pb, kc, x->b, k));
      break;
    case FKind::Or:
      r = f_or(k_translate(pb, kc, x->a, k), k_translate(pb, kc, x->b, k));
      break;
    case FKind::EVar: {
      if (evar_sort(x->var) != Sort::X)
        throw BpwError("k_translate: conjunctive part not in the fixed list");
      const Formula* body = pb.aset().def(x->var);
      if (!body) throw BpwError("k_translate: undefined extension variable");
      const Formula* img = k_translate(pb, kc, body, k);
      EVarId v = evar_generated(
          Sort::E, "kx:" + std::to_string(k) + ":" + std::to_string(x->var));
      if (!pb.axioms().defined(v)) pb.axioms().define(v, img);
      r = fevar(v);
      break;
    }
    case FKind::And:
      throw BpwError("k_translate: conjunction outside the conjunctive tier");
    default:
      r = x;
      break;
  }
  memo.emplace(x, r);
  return r;
}

uint32_t prove_k_sequent(ProofBuilder& pb, KCollapse& kc, const Proof& pf,
                         int k) {
  Proof in = pf;
  in.system = System::eL_EA_DT;
  require_checked(in, "prove_k_sequent");

  const Query* qthr0 = qbase(threshold(pb, kc.bars, 0, k));
  const Query* qthr1 = qbase(threshold(pb, kc.bars, 0, k + 1));
  auto part_of = [&](const Query* q) -> int {
    const Formula* f = base_f(q, "prove_k_sequent");
    auto it = kc.index.find(f);
    return it == kc.index.end() ? -1 : it->second;
  };
  auto img = [&](const Query* q) {
    return qbase(k_translate(pb, kc, q->f, k));
  };
  // Conjunctive parts switch sides as their negations; the count
  // thresholds guard both ends of every line.
  auto trs = [&](const Sequent& s) {
    Sequent t;
    t.left.push_back(qthr0);
    for (const Query* q : s.left)
      if (part_of(q) < 0) t.left.push_back(img(q));
    for (const Query* q : s.right)
      if (int i = part_of(q); i >= 0) t.left.push_back(qbase(kc.bars[i]));
    for (const Query* q : s.right)
      if (part_of(q) < 0) t.right.push_back(img(q));
    for (const Query* q : s.left)
      if (int i = part_of(q); i >= 0) t.right.push_back(qbase(kc.bars[i]));
    t.right.push_back(qthr1);
    return t;
  };

  // Decider truth conditions at the root cell, specialized by cutting
  // away the constant guards.
  auto cor1 = [&](int i) {  // thr(k), bar_i, U_i^k |-  thr(k+1)
    DeciderSpec ds{kc.bars, i, k, f1(), f0()};
    ImmSzel g = immszel_proofs(pb, ds);
    return pb.cut2(g.g3, pb.zero_l(), qbase(f0()));
  };
  auto cor2 = [&](int i) {  // thr(k) |-  bar_i, U_i^k, thr(k+1)
    DeciderSpec ds{kc.bars, i, k, f1(), f0()};
    ImmSzel g = immszel_proofs(pb, ds);
    return pb.cut2(pb.one_r(), g.g2, qbase(f1()));
  };

  // A conjunctive-part member of an input premise lands on the wrong
  // side (as its bar); trade the bar for the decider program.
  auto fix_left = [&](uint32_t ln, const Query* q) {
    int i = part_of(q);
    if (i < 0) return ln;
    return pb.cut2(ln, cor1(i), qbase(kc.bars[i]));
  };
  auto fix_right = [&](uint32_t ln, const Query* q) {
    int i = part_of(q);
    if (i < 0) return ln;
    return pb.cut2(cor2(i), ln, qbase(kc.bars[i]));
  };
  // Dually, an eDT side member of a swapped step must appear as its
  // negation; trade it via the matching excluded-middle fragment.
  auto bar_right = [&](uint32_t ln, const Query* q) {
    if (part_of(q) >= 0) return ln;
    const Formula* f = base_f(q, "prove_k_sequent");
    return pb.cut2(negation_right(pb, f), ln, qbase(f));
  };
  auto bar_left = [&](uint32_t ln, const Query* q) {
    if (part_of(q) >= 0) return ln;
    const Formula* f = base_f(q, "prove_k_sequent");
    return pb.cut2(ln, negation_left(pb, f), qbase(f));
  };
  auto bimg = [&](const Query* q) {
    return qbase(negate_formula(pb.axioms(), base_f(q, "prove_k_sequent")));
  };

  std::vector<uint32_t> out(in.lines.size(), kNoLine);
  for (size_t i = 0; i < in.lines.size(); ++i) {
    const ProofLine& L = in.lines[i];
    const Sequent& s = L.seq;
    auto ps = [&](int j) -> const Sequent& { return in.lines[L.prem[j]].seq; };
    auto tp = [&](int j) { return out[L.prem[j]]; };
    Sequent t = trs(s);
    uint32_t ln = kNoLine;
    switch (L.rule) {
      case Rule::Id: {
        const Query* a = s.left[0];
        int pi = part_of(a);
        ln = pb.weaken_to(
            pb.id_line(pi >= 0 ? qbase(kc.bars[pi]) : img(a)), t);
        break;
      }
      case Rule::ZeroL:
        ln = pb.weaken_to(pb.zero_l(), t);
        break;
      case Rule::OneR:
        ln = pb.weaken_to(pb.one_r(), t);
        break;
      case Rule::Ext: {
        EVarId v = L.ext->var;
        bool lr = L.ext->left_to_right;
        switch (evar_sort(v)) {
          case Sort::E:
            ln = pb.ext_line(v, lr);
            break;
          case Sort::X: {
            const Formula* ek = k_translate(pb, kc, fevar(v), k);
            ln = pb.ext_line(ek->var, lr);
            break;
          }
          case Sort::U: {
            const Formula* body = pb.aset().def(v);
            const Formula* bv = negate_formula(pb.axioms(), fevar(v));
            if (kc.index.count(body)) {
              ln = pb.ext_line(bv->var, !lr);
            } else if (lr) {
              // u |- body turns into |- body, bar-u.
              ln = pb.cut2(negation_right(pb, body), pb.ext_line(bv->var, false),
                           qbase(negate_formula(pb.axioms(), body)));
            } else {
              // body |- u turns into bar-u, body |-.
              ln = pb.cut2(pb.ext_line(bv->var, true), negation_left(pb, body),
                           qbase(negate_formula(pb.axioms(), body)));
            }
            break;
          }
        }
        ln = pb.weaken_to(ln, t);
        break;
      }
      case Rule::ExL:
      case Rule::ExR:
        ln = tp(0);
        break;
      case Rule::WL:
      case Rule::WR:
      case Rule::OneL:
      case Rule::ZeroR:
        ln = pb.weaken_to(tp(0), t);
        break;
      case Rule::CL:
      case Rule::CR:
        ln = pb.contract_to(tp(0), t);
        break;
      case Rule::Cut: {
        const Query* a = match_cut(s, ps(0));
        if (int pi = part_of(a); pi >= 0)
          ln = pb.cut2(tp(1), tp(0), qbase(kc.bars[pi]));
        else
          ln = pb.cut2(tp(0), tp(1), img(a));
        break;
      }
      case Rule::OrL: {
        const Query* m = match_orl(s, ps(0), ps(1));
        const Query* la = q_left(m);
        const Query* ra = q_right(m);
        Sequent e0{replace_one(t.left, img(m), {img(la)}), t.right};
        Sequent e1{replace_one(t.left, img(m), {img(ra)}), t.right};
        uint32_t p0 = settle(pb, fix_left(tp(0), la), e0);
        uint32_t p1 = settle(pb, fix_left(tp(1), ra), e1);
        ln = pb.orl(p0, p1, img(m));
        break;
      }
      case Rule::OrR: {
        const Query* m = match_orr(s, ps(0));
        const Query* la = q_left(m);
        const Query* ra = q_right(m);
        Sequent e{t.left, replace_one(t.right, img(m), {img(la), img(ra)})};
        uint32_t p = settle(pb, fix_right(fix_right(tp(0), la), ra), e);
        ln = pb.orr(p, img(m));
        break;
      }
      case Rule::DecL: {
        const Query* m = match_decl(s, ps(0), ps(1));
        const Query* pq = qbase(fpvar(q_dec_var(m)));
        const Query* qa = q_dec0(m);
        const Query* qb = q_dec1(m);
        if (int pi = part_of(qbase(m->f)); pi >= 0) {
          // The step turns into a right decision on the bar program.
          const Query* bm = qbase(kc.bars[pi]);
          Sequent e0{t.left,
                     plus(replace_one(t.right, bm, {bimg(qa)}), {pq})};
          Sequent e1{plus(t.left, {pq}),
                     replace_one(t.right, bm, {bimg(qb)})};
          uint32_t p0 = settle(pb, bar_right(tp(0), qa), e0);
          uint32_t p1 = settle(pb, bar_right(tp(1), qb), e1);
          ln = pb.decr(p0, p1, bm);
        } else {
          Sequent e0{replace_one(t.left, img(m), {img(qa)}),
                     plus(t.right, {pq})};
          Sequent e1{plus(replace_one(t.left, img(m), {img(qb)}), {pq}),
                     t.right};
          uint32_t p0 = settle(pb, fix_left(tp(0), qa), e0);
          uint32_t p1 = settle(pb, fix_left(tp(1), qb), e1);
          ln = pb.decl(p0, p1, img(m));
        }
        break;
      }
      case Rule::DecR: {
        const Query* m = match_decr(s, ps(0), ps(1));
        const Query* pq = qbase(fpvar(q_dec_var(m)));
        const Query* qa = q_dec0(m);
        const Query* qb = q_dec1(m);
        if (int pi = part_of(qbase(m->f)); pi >= 0) {
          const Query* bm = qbase(kc.bars[pi]);
          Sequent e0{replace_one(t.left, bm, {bimg(qa)}),
                     plus(t.right, {pq})};
          Sequent e1{plus(replace_one(t.left, bm, {bimg(qb)}), {pq}),
                     t.right};
          uint32_t p0 = settle(pb, bar_left(tp(0), qa), e0);
          uint32_t p1 = settle(pb, bar_left(tp(1), qb), e1);
          ln = pb.decl(p0, p1, bm);
        } else {
          Sequent e0{t.left,
                     plus(replace_one(t.right, img(m), {img(qa)}), {pq})};
          Sequent e1{plus(t.left, {pq}),
                     replace_one(t.right, img(m), {img(qb)})};
          uint32_t p0 = settle(pb, fix_right(tp(0), qa), e0);
          uint32_t p1 = settle(pb, fix_right(tp(1), qb), e1);
          ln = pb.decr(p0, p1, img(m));
        }
        break;
      }
      case Rule::AndL: {
        const Query* m = match_andl(s, ps(0));
        int pi = part_of(m);
        if (pi < 0)
          throw BpwError("prove_k_sequent: conjunction outside the parts");
        const Query* bm = qbase(kc.bars[pi]);
        const Query* la = q_left(m);
        const Query* ra = q_right(m);
        Sequent e{t.left, replace_one(t.right, bm, {bimg(la), bimg(ra)})};
        uint32_t p = settle(pb, bar_right(bar_right(tp(0), la), ra), e);
        ln = pb.orr(p, bm);
        break;
      }
      case Rule::AndR: {
        const Query* m = match_andr(s, ps(0), ps(1));
        int pi = part_of(m);
        if (pi < 0)
          throw BpwError("prove_k_sequent: conjunction outside the parts");
        const Query* bm = qbase(kc.bars[pi]);
        const Query* la = q_left(m);
        const Query* ra = q_right(m);
        Sequent e0{replace_one(t.left, bm, {bimg(la)}), t.right};
        Sequent e1{replace_one(t.left, bm, {bimg(ra)}), t.right};
        uint32_t p0 = settle(pb, bar_left(tp(0), la), e0);
        uint32_t p1 = settle(pb, bar_left(tp(1), ra), e1);
        ln = pb.orl(p0, p1, bm);
        break;
      }
      default:
        throw BpwError("prove_k_sequent: rule outside the calculus");
    }
    out[i] = settle(pb, ln, t);
  }
  return out.back();
}

Proof collapse_eafdt(const Proof& pf) {
  Proof in = pf;
  in.system = System::eL_EA_DT;
  require_checked(in, "collapse_eafdt");
  const Sequent& goal = in.conclusion();
  for (const Query* q : goal.left)
    if (!is_ndt(base_f(q, "collapse_eafdt"), *in.axioms))
      throw BpwError("collapse_eafdt: conclusion member is not disjunctive");
  for (const Query* q : goal.right)
    if (!is_ndt(base_f(q, "collapse_eafdt"), *in.axioms))
      throw BpwError("collapse_eafdt: conclusion member is not disjunctive");

  ProofBuilder pb(System::eLNDT, in.axioms);
  KCollapse kc = k_context(pb, in);
  int n = static_cast<int>(kc.parts.size());
  // Chain the per-count sequents: the count is 0 at the bottom and can
  // never reach n+1, so the thresholds cancel along the cuts.
  uint32_t cur = thr_mono_zero(pb, kc.bars, 0, 0);
  for (int k = 0; k <= n; ++k) {
    uint32_t lk = prove_k_sequent(pb, kc, in, k);
    cur = pb.cut2(cur, lk, qbase(threshold(pb, kc.bars, 0, k)));
  }
  cur = pb.cut2(cur, thr_mono_big(pb, kc.bars, 0, n + 1),
                qbase(threshold(pb, kc.bars, 0, n + 1)));
  return pb.take(settle(pb, cur, goal));
}

}  // namespace bpw
