#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "bpw/builder.hpp"
#include "bpw/decider.hpp"
#include "bpw/eval.hpp"
#include "bpw/parse.hpp"
#include "bpw/posdec.hpp"
#include "bpw/simproof.hpp"
#include "bpw/thresholds.hpp"

using namespace bpw;

namespace {

std::vector<const Formula*> pvars(std::initializer_list<const char*> names) {
  std::vector<const Formula*> out;
  for (const char* n : names) out.push_back(fpvar(pvar_id(n)));
  return out;
}

void check_all(ProofBuilder& pb) {
  Proof pf = pb.take();
  CheckResult syn = check_proof(pf);
  CAPTURE(syn.line);
  CAPTURE(syn.error);
  REQUIRE(syn.ok);
  CheckResult sem = check_lines_semantically(pf);
  CAPTURE(sem.line);
  CAPTURE(sem.error);
  REQUIRE(sem.ok);
}

}  // namespace

TEST_CASE("posdec evaluates as a or (b and c)") {
  ProofBuilder pb(System::eLNDT);
  const Formula* a = fpvar(pvar_id("a"));
  const Formula* c = fpvar(pvar_id("c"));
  for (const char* mid : {"0", "1", "pb", "dec(pa,pb,pc)", "or(pa,pb)"}) {
    const Formula* b = parse_formula(mid);
    const Formula* p = posdec(pb, a, b, c);
    const ExtAxiomSet& E = pb.aset();
    for (int bits = 0; bits < 8; ++bits) {
      Assignment al{{pvar_id("a"), (bits & 1) != 0},
                    {pvar_id("b"), (bits & 2) != 0},
                    {pvar_id("c"), (bits & 4) != 0}};
      bool want = evaluate(a, E, al) || (evaluate(b, E, al) && evaluate(c, E, al));
      CHECK(evaluate(p, E, al) == want);
    }
  }
}

TEST_CASE("posdec truth sequents and derived rules check") {
  ProofBuilder pb(System::eLNDT);
  const Formula* a = fpvar(pvar_id("a"));
  const Formula* c = fpvar(pvar_id("c"));
  const Formula* b = parse_formula("dec(pa,pb,or(pc,pd))");
  PosTruth pt = pos_truth_proofs(pb, a, b, c);
  CHECK(same_multiset(pb.seq(pt.t1), Sequent{{qbase(pt.p)}, {qbase(a), qbase(b)}}));
  CHECK(same_multiset(pb.seq(pt.t4), Sequent{{qbase(b), qbase(c)}, {qbase(pt.p)}}));
  // Derived introductions from scratch premises.
  const Query* g = qbase(fpvar(pvar_id("g")));
  const Query* d = qbase(fpvar(pvar_id("d")));
  uint32_t r1 = pb.wr(pb.wl(pb.id_line(g), qbase(a)), d);
  uint32_t r2 = pb.wr(pb.wl(pb.wl(pb.id_line(g), qbase(b)), qbase(c)), d);
  uint32_t L = posdec_left(pb, a, b, c, r1, r2);
  CHECK(same_multiset(pb.seq(L), Sequent{{g, qbase(pt.p)}, {g, d}}));
  uint32_t s1 = pb.wr(pb.wr(pb.id_line(d), qbase(a)), qbase(b));
  uint32_t s2 = pb.wr(pb.wr(pb.id_line(d), qbase(a)), qbase(c));
  uint32_t R = posdec_right(pb, a, b, c, s1, s2);
  CHECK(same_multiset(pb.seq(R), Sequent{{d}, {d, qbase(pt.p)}}));
  check_all(pb);
}

TEST_CASE("threshold cells count") {
  ProofBuilder pb(System::eLNDT);
  auto B = pvars({"p1", "p2", "p3"});
  for (int j = 0; j <= 3; ++j)
    for (int k = -1; k <= 4; ++k) CHECK(threshold_semantics_check(pb, B, j, k));
  // A non-variable member list.
  ProofBuilder pb2(System::eLNDT);
  std::vector<const Formula*> B2 = {parse_formula("dec(p1,p2,p3)"),
                                    parse_formula("or(p1,p4)"),
                                    parse_formula("0")};
  for (int k = 0; k <= 3; ++k) CHECK(threshold_semantics_check(pb2, B2, 0, k));
}

TEST_CASE("threshold lemma proofs check") {
  ProofBuilder pb(System::eLNDT);
  auto B = pvars({"p1", "p2", "p3"});
  for (int j = 0; j <= 3; ++j)
    for (int k = -1; k <= 4; ++k) threshold_lemma_proofs(pb, B, j, k);
  check_all(pb);
}

TEST_CASE("decider semantics") {
  ProofBuilder pb(System::eLNDT);
  DeciderSpec ds;
  ds.B = pvars({"p1", "p2", "p3", "p4"});
  ds.a = f1();
  ds.c = f0();
  for (ds.i = 0; ds.i < 4; ++ds.i)
    for (ds.k = 0; ds.k <= 4; ++ds.k) CHECK(decider_semantics_check(pb, ds));
  ds.i = 1;
  ds.k = 2;
  DeciderBuild db = build_decider(pb, ds);
  CHECK(db.root != nullptr);
  CHECK(db.cells <= 2u * 5u * 5u);
}

TEST_CASE("decider cell with flag set too early is rejected") {
  ProofBuilder pb(System::eLNDT);
  DeciderSpec ds;
  ds.B = pvars({"p1", "p2"});
  ds.i = 1;
  ds.k = 1;
  ds.a = f1();
  ds.c = f0();
  CHECK_THROWS_AS(decider_cell(pb, ds, 1, 0, 1), BpwError);
}

TEST_CASE("inductive counting proofs check") {
  for (int n = 1; n <= 3; ++n) {
    std::vector<const Formula*> B;
    for (int t = 0; t < n; ++t)
      B.push_back(fpvar(pvar_id("p" + std::to_string(t + 1))));
    for (int i = 0; i < n; ++i)
      for (int k = 0; k <= n; ++k) {
        ProofBuilder pb(System::eLNDT);
        DeciderSpec ds{B, i, k, f1(), f0()};
        ImmSzel is = immszel_proofs(pb, ds);
        for (uint32_t g : {is.g1, is.g2, is.g3, is.g4})
          CHECK(sequent_valid(pb.seq(g), pb.aset()));
        check_all(pb);
      }
  }
}

TEST_CASE("inductive counting with composite members") {
  ProofBuilder pb(System::eLNDT);
  std::vector<const Formula*> B = {parse_formula("dec(p1,p2,p3)"),
                                   parse_formula("or(p2,p4)"),
                                   parse_formula("p1")};
  DeciderSpec ds{B, 1, 2, f1(), f0()};
  CHECK(decider_semantics_check(pb, ds));
  ImmSzel is = immszel_proofs(pb, ds);
  for (uint32_t g : {is.g1, is.g2, is.g3, is.g4})
    CHECK(sequent_valid(pb.seq(g), pb.aset()));
  check_all(pb);
}

TEST_CASE("simulation proofs replay the closure rules") {
  AxiomSetBuilder axb;
  const Formula* d = parse_formula("dec(0,p4,1)");
  EVarId e42 = evar_named("e42");
  axb.define(e42, d);
  EVarId e43 = evar_named("e43");
  axb.define(e43, parse_formula("dec(1,p4,or(1,0))"));
  AxiomSetPtr E = axb.snapshot();

  SUBCASE("reflexive") {
    const Formula* a = parse_formula("dec(p1,p2,or(p3,0))");
    Proof pf = prove_simulation(a, a, E);
    CHECK(pf.lines.size() == 1);
    CHECK(check_proof(pf).ok);
  }
  SUBCASE("axiom unfolding both ways") {
    Proof pf = prove_simulation(fevar(e42), d, E);
    CHECK(check_proof(pf).ok);
    CHECK(same_multiset(pf.conclusion(),
                        Sequent{{qbase(d)}, {qbase(fevar(e42))}}));
    Proof pg = prove_simulation(d, fevar(e42), E);
    CHECK(check_proof(pg).ok);
    CHECK(check_lines_semantically(pg).ok);
  }
  SUBCASE("or and dec structure") {
    const Formula* a = parse_formula("or(dec(0,p1,1),p2)");
    const Formula* b = parse_formula("dec(0,p1,or(1,1))");
    REQUIRE(check_simulation(a, b, *E));
    Proof pf = prove_simulation(a, b, E);
    CHECK(check_proof(pf).ok);
    CHECK(check_lines_semantically(pf).ok);
    CHECK(pf.system == System::eLNDT);
  }
  SUBCASE("dt system when or-free") {
    Proof pf = prove_simulation(fevar(e42), d, E);
    CHECK(pf.system == System::eLDT);
  }
  SUBCASE("failure raises") {
    CHECK_THROWS_AS(prove_simulation(parse_formula("0"), parse_formula("1"), E),
                    BpwError);
  }
}
