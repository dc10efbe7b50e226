#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "bpw/builder.hpp"
#include "bpw/eval.hpp"
#include "bpw/parse.hpp"
#include "bpw/translate.hpp"

using namespace bpw;

namespace {

const Query* qp(const char* tail) { return qbase(fpvar(pvar_id(tail))); }

void check_both(const Proof& pf) {
  CheckResult syn = check_proof(pf);
  CAPTURE(syn.line);
  CAPTURE(syn.error);
  REQUIRE(syn.ok);
  CheckResult sem = check_lines_semantically(pf);
  CAPTURE(sem.line);
  CAPTURE(sem.error);
  REQUIRE(sem.ok);
}

// All assignments over the shared free variables agree with the
// complement relation.
void check_complement(const Formula* f, const ExtAxiomSet& E,
                      const Formula* g, const ExtAxiomSet& Eg) {
  TruthTable tf = truth_table(f, E);
  TruthTable tg = truth_table(g, Eg);
  REQUIRE(tf.vars == tg.vars);
  for (uint64_t i = 0; i < tf.rows(); ++i) CHECK(tf.bit(i) != tg.bit(i));
}

// A random co-eNDT formula over the given variables.
const Formula* random_coendt(std::mt19937& rng, AxiomSetBuilder& ax,
                             const std::vector<PVarId>& vars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 5);
  std::uniform_int_distribution<size_t> pv(0, vars.size() - 1);
  switch (pick(rng)) {
    case 0:
      return f0();
    case 1:
      return f1();
    case 2:
      return fpvar(vars[pv(rng)]);
    case 3:
      return fdec(random_coendt(rng, ax, vars, depth - 1), vars[pv(rng)],
                  random_coendt(rng, ax, vars, depth - 1));
    case 4:
      return f_and(random_coendt(rng, ax, vars, depth - 1),
                   random_coendt(rng, ax, vars, depth - 1));
    default: {
      static int next = 0;
      EVarId u = evar_named("urc" + std::to_string(next++));
      ax.define(u, random_coendt(rng, ax, vars, depth - 1));
      return fevar(u);
    }
  }
}

}  // namespace

TEST_CASE("negation is the pointwise complement") {
  std::mt19937 rng(20240817);
  std::vector<PVarId> vars = {pvar_id("1"), pvar_id("2"), pvar_id("3")};
  for (int it = 0; it < 100; ++it) {
    AxiomSetBuilder ax;
    const Formula* f = random_coendt(rng, ax, vars, 4);
    AxiomSetPtr E = ax.snapshot();
    auto [g, Eg] = negate_coendt(f, E);
    check_complement(f, *E, g, *Eg);
  }
}

TEST_CASE("negation rejects disjunctions") {
  AxiomSetBuilder ax;
  CHECK_THROWS_AS(negate_formula(ax, parse_formula("or(p1,p2)")), BpwError);
}

TEST_CASE("excluded middle fragments check") {
  AxiomSetBuilder axb;
  axb.define(evar_named("em"), parse_formula("dec(p1,p2,dec(0,p3,1))"));
  AxiomSetPtr E = axb.snapshot();
  for (const char* t : {"0", "1", "p1", "dec(p1,p2,dec(0,p3,1))", "em"}) {
    ProofBuilder pb(System::eLNDT, E);
    const Formula* f = parse_formula(t);
    const Formula* g = negate_formula(pb.axioms(), f);
    uint32_t r = negation_right(pb, f);
    CHECK(same_multiset(pb.seq(r), Sequent{{}, {qbase(f), qbase(g)}}));
    uint32_t l = negation_left(pb, f);
    CHECK(same_multiset(pb.seq(l), Sequent{{qbase(f), qbase(g)}, {}}));
    check_both(pb.take());
  }
}

TEST_CASE("program conjunction and disjunction") {
  AxiomSetBuilder axb;
  axb.define(evar_named("eba"), parse_formula("dec(p1,p3,0)"));
  AxiomSetPtr E = axb.snapshot();
  for (const char* lt : {"0", "1", "p2", "dec(0,p1,p2)", "eba"}) {
    for (const char* rt : {"p3", "dec(p2,p3,1)"}) {
      ProofBuilder pb(System::eLDT, E);
      const Formula* f = parse_formula(lt);
      const Formula* g = parse_formula(rt);
      const Formula* m = bp_and(pb, f, g);
      const Formula* j = bp_or(pb, f, g);
      const ExtAxiomSet& A = pb.aset();
      for (int bits = 0; bits < 8; ++bits) {
        Assignment al{{pvar_id("1"), (bits & 1) != 0},
                      {pvar_id("2"), (bits & 2) != 0},
                      {pvar_id("3"), (bits & 4) != 0}};
        bool vf = evaluate(f, A, al);
        bool vg = evaluate(g, A, al);
        CHECK(evaluate(m, A, al) == (vf && vg));
        CHECK(evaluate(j, A, al) == (vf || vg));
      }
      uint32_t a1 = bp_and_left1(pb, f, g);
      CHECK(same_multiset(pb.seq(a1), Sequent{{qbase(m)}, {qbase(f)}}));
      uint32_t a2 = bp_and_left2(pb, f, g);
      CHECK(same_multiset(pb.seq(a2), Sequent{{qbase(m)}, {qbase(g)}}));
      uint32_t a3 = bp_and_right(pb, f, g);
      CHECK(same_multiset(pb.seq(a3),
                          Sequent{{qbase(f), qbase(g)}, {qbase(m)}}));
      uint32_t o1 = bp_or_right1(pb, f, g);
      CHECK(same_multiset(pb.seq(o1), Sequent{{qbase(f)}, {qbase(j)}}));
      uint32_t o2 = bp_or_right2(pb, f, g);
      CHECK(same_multiset(pb.seq(o2), Sequent{{qbase(g)}, {qbase(j)}}));
      uint32_t o3 = bp_or_left(pb, f, g);
      CHECK(same_multiset(pb.seq(o3),
                          Sequent{{qbase(j)}, {qbase(f), qbase(g)}}));
      check_both(pb.take());
    }
  }
}

TEST_CASE("boolean elimination on a conjunction detour") {
  ProofBuilder pb(System::LK_eLDT);
  const Query* p = qp("1");
  const Query* q = qp("2");
  const Query* r = qp("3");
  const Query* A = qand(p, q);
  uint32_t w1 = pb.wl(pb.id_line(p), q);
  // A detour through weakening and contraction.
  w1 = pb.cl(pb.wl(w1, q), q);
  uint32_t w2 = pb.wl(pb.id_line(q), p);
  uint32_t up = pb.wr(pb.andr(w1, w2, A), r);
  uint32_t down = pb.andl(pb.wl(pb.id_line(p), q), A);
  pb.cut2(up, down, A);  // p1, p2 |- p3, p1
  Proof lk = pb.take();
  REQUIRE(check_proof(lk).ok);
  REQUIRE(same_multiset(lk.conclusion(), Sequent{{p, q}, {r, p}}));

  Proof out = eliminate_bool(lk);
  CHECK(out.system == System::eLDT);
  CHECK(same_multiset(out.conclusion(), lk.conclusion()));
  check_both(out);
}

TEST_CASE("boolean elimination on negation rules") {
  ProofBuilder pb(System::LK_eLDT);
  const Query* p = qp("1");
  const Query* np = qnot(p);
  const Formula* em = parse_formula("dec(1,p1,0)");
  uint32_t r = pb.notr(pb.id_line(p), np);  //  |- p1, not p1
  uint32_t l = pb.notl(pb.id_line(p), np);  //  p1, not p1 |-
  uint32_t d =
      pb.decr(pb.weaken_to(pb.one_r(), Sequent{{np}, {qbase(f1()), p}}),
              pb.weaken_to(l, Sequent{{np, p}, {qbase(f0())}}), qbase(em));
  pb.cut2(r, d, np);  //  |- p1, dec(1,p1,0)
  Proof lk = pb.take();
  REQUIRE(check_proof(lk).ok);
  REQUIRE(same_multiset(lk.conclusion(), Sequent{{}, {p, qbase(em)}}));

  Proof out = eliminate_bool(lk);
  CHECK(out.system == System::eLDT);
  CHECK(same_multiset(out.conclusion(), lk.conclusion()));
  check_both(out);
}

TEST_CASE("boolean elimination on disjunction rules") {
  ProofBuilder pb(System::LK_eLDT);
  const Query* p = qp("1");
  const Query* q = qp("2");
  const Query* X = qor(p, q);
  const Formula* M = parse_formula("dec(p1,p2,1)");
  uint32_t up = pb.wr(pb.orr(pb.wr(pb.id_line(p), q), X), q);
  uint32_t m1 = pb.decr(
      pb.wr(pb.id_line(p), q),
      pb.weaken_to(pb.one_r(), Sequent{{p, q}, {qbase(f1())}}), qbase(M));
  uint32_t m2 = pb.decr(
      pb.wr(pb.id_line(q), p),
      pb.weaken_to(pb.one_r(), Sequent{{q, q}, {qbase(f1())}}), qbase(M));
  uint32_t down = pb.orl(m1, m2, X);
  pb.cut2(up, down, X);  // p1 |- p2, dec(p1,p2,1)
  Proof lk = pb.take();
  REQUIRE(check_proof(lk).ok);
  REQUIRE(same_multiset(lk.conclusion(), Sequent{{p}, {q, qbase(M)}}));

  Proof out = eliminate_bool(lk);
  CHECK(same_multiset(out.conclusion(), lk.conclusion()));
  check_both(out);
}

TEST_CASE("boolean elimination rejects a query conclusion") {
  ProofBuilder pb(System::LK_eLDT);
  const Query* p = qp("1");
  pb.notr(pb.id_line(p), qnot(p));
  Proof lk = pb.take();
  CHECK_THROWS_AS(eliminate_bool(lk), BpwError);
}

TEST_CASE("positive elimination keeps disjunctions, compiles conjunctions") {
  ProofBuilder pb(System::LKpos_eLNDT);
  const Query* p = qp("1");
  const Query* q = qp("2");
  const Query* r = qp("3");
  const Query* o = qbase(parse_formula("or(p1,p2)"));
  const Query* A = qand(o, r);
  // Formula-tier or rules on a side derivation of  or(p1,p2) |- or(p1,p2).
  uint32_t c1 = pb.orr(pb.wr(pb.id_line(p), q), o);
  uint32_t c2 = pb.orr(pb.wr(pb.id_line(q), p), o);
  pb.orl(c1, c2, o);
  uint32_t up =
      pb.wr(pb.andr(pb.wl(pb.id_line(o), r), pb.wl(pb.id_line(r), o), A), q);
  uint32_t down = pb.andl(pb.wl(pb.id_line(o), r), A);
  pb.cut2(up, down, A);  // or(p1,p2), p3 |- p2, or(p1,p2)
  Proof pos = pb.take();
  REQUIRE(check_proof(pos).ok);
  REQUIRE(same_multiset(pos.conclusion(), Sequent{{o, r}, {q, o}}));

  Proof out = eliminate_pos(pos);
  CHECK(out.system == System::eLNDT);
  CHECK(same_multiset(out.conclusion(), pos.conclusion()));
  check_both(out);
}

TEST_CASE("dualization flips a conjunctive proof") {
  AxiomSetBuilder axb;
  const Formula* p2f = fpvar(pvar_id("2"));
  const Formula* qd = fdec(f0(), pvar_id("2"), f1());
  const Formula* Af = f_and(fpvar(pvar_id("1")), qd);
  EVarId u = evar_named("udl");
  axb.define(u, Af);
  AxiomSetPtr E = axb.snapshot();

  ProofBuilder pb(System::co_eLNDT, E);
  const Query* p = qp("1");
  const Query* q = qbase(p2f);
  const Query* dq = qbase(qd);
  const Query* qa = qbase(Af);
  uint32_t al = pb.andl(pb.wl(pb.id_line(p), dq), qa);  // A |- p1
  uint32_t ar = pb.andr(pb.wl(pb.id_line(p), dq), pb.wl(pb.id_line(dq), p),
                        qa);  // dq, p1 |- A
  uint32_t dr =
      pb.decr(pb.wr(pb.id_line(q), qbase(f0())),
              pb.weaken_to(pb.one_r(), Sequent{{q, q}, {qbase(f1())}}),
              dq);  // p2 |- dq
  pb.decl(pb.weaken_to(pb.zero_l(), Sequent{{qbase(f0())}, {q, q}}),
          pb.wl(pb.id_line(q), qbase(f1())), dq);  // dq |- p2, unused
  uint32_t pq_a = pb.cut2(dr, ar, dq);                       // p1, p2 |- A
  uint32_t pq_u = pb.cut2(pq_a, pb.ext_line(u, false), qa);  // p1, p2 |- u
  uint32_t u_p = pb.cut2(pb.ext_line(u, true), al, qa);      // u |- p1
  pb.cut2(pq_u, u_p, qbase(fevar(u)));                       // p1, p2 |- p1
  Proof co = pb.take();
  REQUIRE(check_proof(co).ok);
  REQUIRE(same_multiset(co.conclusion(), Sequent{{p, q}, {p}}));

  Proof dual = dualize_proof(co);
  CHECK(dual.system == System::eLNDT);
  CHECK(dual.lines.size() <= 4 * co.lines.size());
  check_both(dual);
  AxiomSetBuilder nax(dual.axioms);
  Sequent want{{qbase(negate_formula(nax, fpvar(pvar_id("1"))))},
               {qbase(negate_formula(nax, fpvar(pvar_id("1")))),
                qbase(negate_formula(nax, p2f))}};
  CHECK(same_multiset(dual.conclusion(), want));

  Proof back = coelndt_to_elndt(co);
  CHECK(back.system == System::eLNDT);
  CHECK(same_multiset(back.conclusion(), co.conclusion()));
  check_both(back);
}

TEST_CASE("counting collapse on conjunction and disjunction detours") {
  ProofBuilder pb(System::eL_EA_DT);
  const Query* p = qp("1");
  const Query* q = qp("2");
  const Query* r = qp("3");
  const Formula* a1f = f_and(fpvar(pvar_id("1")), fpvar(pvar_id("2")));
  const Formula* a2f = f_and(fpvar(pvar_id("2")), fpvar(pvar_id("3")));
  const Query* A1 = qbase(a1f);
  const Query* A2 = qbase(a2f);
  const Query* X = qbase(f_or(a1f, a2f));
  pb.id_line(A1);  // a spare identity on a conjunctive part
  uint32_t up = pb.orr(
      pb.andr(pb.weaken_to(pb.id_line(p), Sequent{{p, q}, {A2, p}}),
              pb.weaken_to(pb.id_line(q), Sequent{{p, q}, {A2, q}}), A1),
      X);
  uint32_t d1 = pb.andl(pb.cl(pb.wl(pb.wl(pb.id_line(q), p), q), q), A1);
  uint32_t d2 = pb.andl(pb.wl(pb.id_line(q), r), A2);
  uint32_t down = pb.orl(d1, d2, X);
  pb.cut2(pb.wr(up, r), down, X);  // p1, p2 |- p3, p2
  Proof in = pb.take();
  REQUIRE(check_proof(in).ok);
  REQUIRE(same_multiset(in.conclusion(), Sequent{{p, q}, {r, q}}));

  Proof out = collapse_eafdt(in);
  CHECK(out.system == System::eLNDT);
  CHECK(same_multiset(out.conclusion(), in.conclusion()));
  check_both(out);
}

TEST_CASE("counting collapse on decision steps over parts") {
  ProofBuilder pb(System::eL_EA_DT);
  const Query* p = qp("1");
  const Query* q = qp("2");
  const Query* r = qp("4");
  const Query* s = qp("5");
  const Formula* a1f = f_and(fpvar(pvar_id("1")), fpvar(pvar_id("2")));
  const Query* A1 = qbase(a1f);
  const Query* M = qbase(fdec(fpvar(pvar_id("4")), pvar_id("5"), a1f));
  const Query* N = qbase(parse_formula("dec(p4,p5,p2)"));
  // M |- N by a left decision whose 0-branch is a plain variable.
  uint32_t b0 = pb.decr(pb.weaken_to(pb.id_line(r), Sequent{{r}, {s, r, s}}),
                        pb.weaken_to(pb.id_line(s), Sequent{{r, s}, {s, q}}),
                        N);  // p4 |- p5, N
  uint32_t b1 = pb.andl(
      pb.decr(pb.weaken_to(pb.id_line(s), Sequent{{s, p, q}, {r, s}}),
              pb.weaken_to(pb.id_line(q), Sequent{{s, p, q, s}, {q}}), N),
      A1);  // p5, A1 |- N
  uint32_t left = pb.decl(b0, b1, M);
  // p1, p2, p4 |- M by a right decision.
  uint32_t c0 = pb.weaken_to(pb.id_line(r), Sequent{{r, p, q}, {r, s}});
  uint32_t c1 =
      pb.andr(pb.weaken_to(pb.id_line(p), Sequent{{r, p, q, s}, {p}}),
              pb.weaken_to(pb.id_line(q), Sequent{{r, p, q, s}, {q}}), A1);
  uint32_t right = pb.decr(c0, c1, M);
  pb.cut2(right, left, M);  // p1, p2, p4 |- N
  Proof in = pb.take();
  REQUIRE(check_proof(in).ok);
  REQUIRE(same_multiset(in.conclusion(), Sequent{{p, q, r}, {N}}));

  Proof out = collapse_eafdt(in);
  CHECK(same_multiset(out.conclusion(), in.conclusion()));
  check_both(out);
}

TEST_CASE("counting collapse through extension variables") {
  AxiomSetBuilder axb;
  const Formula* a1f = f_and(fpvar(pvar_id("1")), fpvar(pvar_id("2")));
  EVarId u1 = evar_named("ukc");
  axb.define(u1, a1f);
  const Formula* xbody = f_or(fevar(u1), fpvar(pvar_id("3")));
  EVarId x1 = evar_named("xkc");
  axb.define(x1, xbody);
  AxiomSetPtr E = axb.snapshot();

  ProofBuilder pb(System::eL_EA_DT, E);
  const Query* p = qp("1");
  const Query* q = qp("2");
  const Query* r = qp("3");
  const Query* qx = qbase(fevar(x1));
  const Query* qa = qbase(a1f);
  const Query* qb = qbase(xbody);
  const Query* target = qbase(parse_formula("or(p1,p3)"));
  uint32_t pa = pb.andr(pb.wl(pb.id_line(p), q), pb.wl(pb.id_line(q), p),
                        qa);  // p1, p2 |- A1
  uint32_t pu = pb.cut2(pa, pb.ext_line(u1, false), qa);
  uint32_t px = pb.cut2(pb.orr(pb.wr(pu, r), qb), pb.ext_line(x1, false), qb);
  uint32_t ua = pb.cut2(pb.ext_line(u1, true),
                        pb.andl(pb.wl(pb.id_line(p), q), qa), qa);  // u |- p1
  uint32_t u_t = pb.orr(pb.wr(ua, r), target);
  uint32_t r_t =
      pb.orr(pb.weaken_to(pb.id_line(r), Sequent{{r}, {p, r}}), target);
  uint32_t x_t = pb.cut2(pb.ext_line(x1, true), pb.orl(u_t, r_t, qb), qb);
  pb.cut2(px, x_t, qx);  // p1, p2 |- or(p1,p3)
  Proof in = pb.take();
  REQUIRE(check_proof(in).ok);
  REQUIRE(same_multiset(in.conclusion(), Sequent{{p, q}, {target}}));

  Proof out = collapse_eafdt(in);
  CHECK(same_multiset(out.conclusion(), in.conclusion()));
  check_both(out);
}

TEST_CASE("counting collapse rejects a conjunctive conclusion") {
  ProofBuilder pb(System::eL_EA_DT);
  const Query* p = qp("1");
  const Query* q = qp("2");
  pb.andl(pb.wl(pb.id_line(p), q),
          qbase(f_and(fpvar(pvar_id("1")), fpvar(pvar_id("2")))));
  Proof in = pb.take();
  CHECK_THROWS_AS(collapse_eafdt(in), BpwError);
}
