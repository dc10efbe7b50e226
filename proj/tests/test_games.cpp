#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bpw/builder.hpp"
#include "bpw/decider.hpp"
#include "bpw/eval.hpp"
#include "bpw/games.hpp"
#include "bpw/parse.hpp"
#include "bpw/thresholds.hpp"

using namespace bpw;

namespace {

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(BPW_TEST_DATA) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

AxiomSetPtr two_of_four() { return parse_axioms(slurp("two_of_four.ax")); }

GameState st_of(std::initializer_list<std::pair<const char*, bool>> qs) {
  GameState st;
  for (const auto& [text, b] : qs) st.assign(parse_query(text), b);
  return st;
}

void expect_ok(const Strat& s, const GameState& st, const ExtAxiomSet& E,
               GameSys sys) {
  VerifyResult vr = verify_strategy(s, st, E, sys);
  CAPTURE(vr.error);
  std::string where;
  for (const auto& [q, b] : vr.path) where += render(q) + "=" + (b ? "1" : "0") + "; ";
  CAPTURE(where);
  REQUIRE(vr.ok);
}

// Enumerates every answer path: claimed leaves must re-detect, open leaves
// must satisfy the goal predicate.
void walk_open(const Strat& s, GameState st, const ExtAxiomSet& E, GameSys sys,
               const std::function<void(const GameState&)>& open_ok) {
  REQUIRE(s != nullptr);
  if (!s->q) {
    if (s->win) {
      DetectOpts one;
      one.first_only = true;
      CHECK(!detect(st, E, sys, one).empty());
    } else {
      open_ok(st);
    }
    return;
  }
  GameState s0 = st;
  s0.assign(s->q, false);
  walk_open(s->on0, std::move(s0), E, sys, open_ok);
  st.assign(s->q, true);
  walk_open(s->on1, std::move(st), E, sys, open_ok);
}

bool has_kind(const std::vector<Contradiction>& cs, CKind k) {
  for (const Contradiction& c : cs)
    if (c.kind == k) return true;
  return false;
}

void check_proof_of(const Proof& pf, const Sequent& goal, System sys) {
  CheckResult syn = check_proof(pf);
  CAPTURE(syn.line);
  CAPTURE(syn.error);
  REQUIRE(syn.ok);
  CheckResult sem = check_lines_semantically(pf);
  CAPTURE(sem.line);
  CAPTURE(sem.error);
  REQUIRE(sem.ok);
  CHECK(pf.system == sys);
  CHECK(render(pf.conclusion()) == render(goal));
}

}  // namespace

TEST_CASE("game states record answers and re-answers") {
  GameState st;
  const Query* q = parse_query("dec(0, p1, 1)");
  CHECK(!st.value(q).has_value());
  st.assign(q, true);
  CHECK(st.has(q, true));
  CHECK(!st.has(q, false));
  CHECK(!st.both(q));
  CHECK(st.value(q) == true);
  st.assign(q, false);
  CHECK(st.both(q));
  CHECK(!st.value(q).has_value());

  Sequent s = parse_sequent("e42 |- e43");
  GameState gs = state_of_sequent(s);
  CHECK(gs.has(parse_query("e42"), true));
  CHECK(gs.has(parse_query("e43"), false));

  CHECK(std::string(game_sys_name(GameSys::DB)) == "DB");
  CHECK(game_sys_from_name("NB") == GameSys::NB);
  CHECK(!game_sys_from_name("XX").has_value());
  CHECK(std::string(ckind_name(CKind::Extension)) == "extension");
  CHECK(ckind_from_name("connective_or") == CKind::ConnOr);
  CHECK(!ckind_from_name("nope").has_value());
}

TEST_CASE("detect finds constant, extension, similarity and decision clashes") {
  AxiomSetPtr E = two_of_four();

  auto cs = detect(st_of({{"0", true}}), *E, GameSys::NB);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].kind == CKind::BoolConst);
  CHECK(cs[0].witness.size() == 1);

  cs = detect(st_of({{"1", false}}), *E, GameSys::DB);
  REQUIRE(!cs.empty());
  CHECK(cs[0].kind == CKind::BoolConst);

  cs = detect(st_of({{"e42", true}, {"dec(0, p4, 1)", false}}), *E, GameSys::NB);
  CHECK(has_kind(cs, CKind::Extension));
  CHECK(has_kind(cs, CKind::Similarity));

  cs = detect(st_of({{"dec(dec(0,p2,1), p1, dec(0,p3,1))", true},
                     {"p1", false},
                     {"dec(0,p2,1)", false}}),
              *E, GameSys::DB);
  REQUIRE(!cs.empty());
  CHECK(cs[0].kind == CKind::Decision);
  CHECK(cs[0].witness.size() == 3);

  // Both branches denied contradicts the decision being affirmed.
  cs = detect(st_of({{"dec(dec(0,p2,1), p1, dec(0,p3,1))", true},
                     {"dec(0,p2,1)", false},
                     {"dec(0,p3,1)", false}}),
              *E, GameSys::DB);
  CHECK(has_kind(cs, CKind::Decision));

  // Consistent states stay clean.
  cs = detect(st_of({{"e42", true}, {"e43", false}}), *E, GameSys::NB);
  CHECK(cs.empty());
  cs = detect(st_of({{"dec(0,p1,1)", true},
                     {"dec(dec(0,p1,1), p2, dec(0,p3,1))", false}}),
              *E, GameSys::NB);
  CHECK(cs.empty());
}

TEST_CASE("detect sees connective clashes through both query tiers") {
  const ExtAxiomSet& E = *empty_axioms();

  auto cs = detect(st_of({{"not(dec(0,p1,1))", true}, {"dec(0,p1,1)", true}}),
                   E, GameSys::DB);
  REQUIRE(!cs.empty());
  CHECK(cs[0].kind == CKind::ConnNot);

  // Base-tier or formula, viewed as a disjunction in DB.
  cs = detect(st_of({{"or(dec(0,p1,1), dec(0,p2,1))", false},
                     {"dec(0,p2,1)", true}}),
              E, GameSys::DB);
  CHECK(has_kind(cs, CKind::ConnOr));
  cs = detect(st_of({{"or(dec(0,p1,1), dec(0,p2,1))", true},
                     {"dec(0,p1,1)", false},
                     {"dec(0,p2,1)", false}}),
              E, GameSys::DB);
  CHECK(has_kind(cs, CKind::ConnOr));

  cs = detect(st_of({{"and(dec(0,p1,1), not(dec(0,p2,1)))", true},
                     {"not(dec(0,p2,1))", false}}),
              E, GameSys::DB);
  CHECK(has_kind(cs, CKind::ConnAnd));

  // A doubly answered query is itself a contradiction.
  GameState st = st_of({{"not(dec(0,p1,1))", true}});
  st.assign(parse_query("not(dec(0,p1,1))"), false);
  cs = detect(st, E, GameSys::DB);
  REQUIRE(!cs.empty());
  CHECK(cs[0].witness.size() == 2);
  CHECK(cs[0].witness[0].first == cs[0].witness[1].first);

  // An or program folds into one leaf for the class, yet the disjunction
  // clash still applies to it, alongside similarity against the constant.
  cs = detect(st_of({{"or(1, 0)", false}, {"1", true}}), E, GameSys::NB);
  CHECK(has_kind(cs, CKind::ConnOr));
  CHECK(has_kind(cs, CKind::Similarity));
}

TEST_CASE("detect rejects queries outside the game class") {
  const ExtAxiomSet& E = *empty_axioms();
  CHECK_THROWS_AS(
      detect(st_of({{"or(dec(0, p1, or(0, 1)), 0)", true}}), E, GameSys::DB),
      BpwError);
  CHECK_THROWS_AS(
      detect(st_of({{"dec(0, p1, and(0, 1))", true}}), E, GameSys::NB),
      BpwError);
  // The same or-under-dec program is legal in NB.
  CHECK(detect(st_of({{"dec(0, p1, or(0, 1))", true}}), E, GameSys::NB).empty());
}

TEST_CASE("the shipped strategy files verify and mutations fail") {
  StrategyFile left = read_strategy_json(slurp("excluded_middle.json"),
                                         BPW_TEST_DATA);
  CHECK(left.sys == GameSys::NB);
  GameState lst = state_of_pairs(left.initial);
  expect_ok(left.root, lst, *left.axioms, left.sys);
  CHECK(strategy_depth(left.root) == 4);

  StrategyFile right = read_strategy_json(slurp("e42_e43_strategy.json"),
                                          BPW_TEST_DATA);
  CHECK(right.sys == GameSys::NB);
  GameState rst = state_of_pairs(right.initial);
  expect_ok(right.root, rst, *right.axioms, right.sys);
  CHECK(strategy_depth(right.root) == 5);

  // A verified strategy for {left |-> 1, right |-> 0} certifies the sequent.
  Sequent goal = parse_sequent("e42 |- e43");
  CHECK(sequent_valid(goal, *right.axioms));

  CHECK(strategy_depth(make_leaf()) == 0);
  CHECK(strategy_nodes(make_leaf()) == 1);
  CHECK(strategy_nodes(left.root) == 9);
  CHECK_THROWS_AS(make_ask(parse_query("0"), nullptr, make_leaf()), BpwError);

  // Truncate one branch: the reached state holds no contradiction.
  Strat cut = make_ask(left.root->q, left.root->on0, make_leaf());
  VerifyResult vr = verify_strategy(cut, lst, *left.axioms, left.sys);
  CHECK(!vr.ok);
  CHECK(!vr.error.empty());
  REQUIRE(vr.path.size() == 1);
  CHECK(vr.path[0].first == left.root->q);
  CHECK(vr.path[0].second == true);
}

TEST_CASE("query metrics count maximal program leaves") {
  AxiomSetPtr E = two_of_four();
  CHECK(query_leafcount(parse_query("e11"), *E) == 1);
  CHECK(query_depth(parse_query("e11"), *E) == 0);
  // An or of programs folds into one nondeterministic program leaf.
  CHECK(query_leafcount(parse_query("or(e42, e43)"), *E) == 1);
  CHECK(query_depth(parse_query("or(e42, e43)"), *E) == 0);
  CHECK(query_leafcount(parse_query("not(e42)"), *E) == 1);
  CHECK(query_depth(parse_query("not(e42)"), *E) == 1);
  CHECK(query_leafcount(parse_query("or(p1, not(p1))"), *E) == 2);
  CHECK(query_depth(parse_query("or(p1, not(p1))"), *E) == 2);
  CHECK(query_leafcount(parse_query("and(or(p1, not(p1)), e42)"), *E) == 3);
  CHECK(query_depth(parse_query("and(or(p1, not(p1)), e42)"), *E) == 3);
}

TEST_CASE("balanced combinations and the implication query") {
  const Query* a = parse_query("dec(0,p1,1)");
  const Query* b = parse_query("dec(0,p2,1)");
  const Query* c = parse_query("dec(0,p3,1)");
  const Query* d = parse_query("dec(0,p4,1)");
  CHECK(big_and({}) == parse_query("1"));
  CHECK(big_or({}) == parse_query("0"));
  CHECK(big_and({a}) == a);
  CHECK(big_or({b}) == b);
  CHECK(big_and({a, b, c, d}) == qand(qand(a, b), qand(c, d)));
  CHECK(big_and({a, b, c}) == qand(a, qand(b, c)));
  CHECK(big_or({a, b, c, d}) == qor(qor(a, b), qor(c, d)));

  Sequent s = parse_sequent("dec(0,p1,1), dec(0,p2,1) |- dec(0,p3,1)");
  CHECK(imp_query(s) == qor(qnot(qand(a, b)), c));
  Sequent empty_left = parse_sequent("|- dec(0,p3,1)");
  CHECK(imp_query(empty_left) == qor(qnot(parse_query("1")), c));
}

TEST_CASE("find and force combinators reach their goals") {
  const ExtAxiomSet& E = *empty_axioms();
  const Query* a = parse_query("dec(0,p1,1)");
  const Query* b = parse_query("dec(0,p2,1)");
  const Query* c = parse_query("dec(0,p3,1)");
  const Query* d = parse_query("dec(0,p4,1)");
  Cedent four{a, b, c, d};
  const Query* conj = big_and(four);
  const Query* disj = big_or(four);

  SUBCASE("singleton find is already done") {
    GameState st;
    st.assign(a, false);
    Strat s = strat_find_force(FFGoal::FindConjunctFalse, a, nullptr, st, E,
                               GameSys::DB);
    CHECK(strategy_depth(s) == 0);
    CHECK(!s->q);
    CHECK(!s->win.has_value());
  }

  SUBCASE("find a false conjunct among four") {
    GameState st;
    st.assign(conj, false);
    Strat s = strat_find_force(FFGoal::FindConjunctFalse, conj, nullptr, st, E,
                               GameSys::DB);
    CHECK(strategy_depth(s) <= 4);
    int opens = 0;
    walk_open(s, st, E, GameSys::DB, [&](const GameState& fin) {
      ++opens;
      bool pinned = false;
      for (const Query* m : four) pinned = pinned || fin.has(m, false);
      CHECK(pinned);
    });
    CHECK(opens > 0);
  }

  SUBCASE("find a true disjunct among four") {
    GameState st;
    st.assign(disj, true);
    Strat s = strat_find_force(FFGoal::FindDisjunctTrue, disj, nullptr, st, E,
                               GameSys::DB);
    CHECK(strategy_depth(s) <= 4);
    walk_open(s, st, E, GameSys::DB, [&](const GameState& fin) {
      bool pinned = false;
      for (const Query* m : four) pinned = pinned || fin.has(m, true);
      CHECK(pinned);
    });
  }

  SUBCASE("force a chosen conjunct and disjunct") {
    GameState st;
    st.assign(conj, true);
    Strat s = strat_find_force(FFGoal::ForceConjunct, conj, c, st, E,
                               GameSys::DB);
    CHECK(strategy_depth(s) <= 4);
    walk_open(s, st, E, GameSys::DB,
              [&](const GameState& fin) { CHECK(fin.has(c, true)); });

    GameState st0;
    st0.assign(disj, false);
    Strat f = strat_find_force(FFGoal::ForceDisjunct, disj, b, st0, E,
                               GameSys::DB);
    walk_open(f, st0, E, GameSys::DB,
              [&](const GameState& fin) { CHECK(fin.has(b, false)); });

    CHECK_THROWS_AS(strat_find_force(FFGoal::ForceConjunct, conj,
                                     parse_query("e99"), st, E, GameSys::DB),
                    BpwError);
  }

  SUBCASE("decompose a denied implication in at most three asks") {
    Sequent s = parse_sequent("dec(0,p1,1), dec(0,p2,1) |- dec(0,p3,1)");
    const Query* imp = imp_query(s);
    GameState st;
    st.assign(imp, false);
    Strat f = strat_find_force(FFGoal::ForceImplicationParts, imp, nullptr, st,
                               E, GameSys::DB);
    CHECK(strategy_depth(f) <= 3);
    walk_open(f, st, E, GameSys::DB, [&](const GameState& fin) {
      CHECK(fin.has(qand(a, b), true));
      CHECK(fin.has(c, false));
    });
  }

  SUBCASE("the driver must carry its answer") {
    GameState st;
    CHECK_THROWS_AS(strat_find_force(FFGoal::FindConjunctFalse, conj, nullptr,
                                     st, E, GameSys::DB),
                    BpwError);
    st.assign(conj, true);
    CHECK_THROWS_AS(strat_find_force(FFGoal::FindConjunctFalse, conj, nullptr,
                                     st, E, GameSys::DB),
                    BpwError);
  }
}

namespace {

void ls_case(Rule r, GameSys sys, const ExtAxiomSet& E, const char* conc,
             std::initializer_list<const char*> prems,
             std::optional<ExtAux> ext = std::nullopt) {
  CAPTURE(rule_name(r));
  CAPTURE(conc);
  Sequent cs = parse_sequent(conc);
  std::vector<Sequent> ps;
  for (const char* p : prems) ps.push_back(parse_sequent(p));
  GameState st;
  st.assign(imp_query(cs), false);
  for (const Sequent& p : ps) st.assign(imp_query(p), true);
  Strat s = local_soundness(r, cs, ps, E, sys, ext);
  VerifyResult vr = verify_strategy(s, st, E, sys);
  CAPTURE(vr.error);
  CHECK(vr.ok);
}

}  // namespace

TEST_CASE("local soundness wins for every rule instance") {
  AxiomSetBuilder ab;
  ab.define(evar_named("e1"), parse_formula("dec(0, p1, 1)"));
  AxiomSetPtr E = ab.snapshot();
  // Shared context members G and D keep the instances honest.
  ls_case(Rule::Id, GameSys::DB, *E,
          "dec(0,p1,1), dec(0,p3,1) |- dec(0,p2,1), dec(0,p3,1)", {});
  ls_case(Rule::ZeroL, GameSys::DB, *E, "0 |-", {});
  ls_case(Rule::OneR, GameSys::DB, *E, "|- 1", {});
  ls_case(Rule::Ext, GameSys::DB, *E, "e1 |- dec(0, p1, 1)", {});
  ls_case(Rule::Ext, GameSys::DB, *E, "dec(0, p1, 1) |- e1", {},
          ExtAux{evar_named("e1"), false});
  ls_case(Rule::WL, GameSys::DB, *E,
          "dec(0,p1,1), dec(0,p3,1) |- dec(0,p2,1)",
          {"dec(0,p1,1) |- dec(0,p2,1)"});
  ls_case(Rule::WR, GameSys::DB, *E,
          "dec(0,p1,1) |- dec(0,p2,1), dec(0,p3,1)",
          {"dec(0,p1,1) |- dec(0,p2,1)"});
  ls_case(Rule::CL, GameSys::DB, *E, "dec(0,p1,1), dec(0,p3,1) |- dec(0,p2,1)",
          {"dec(0,p1,1), dec(0,p3,1), dec(0,p3,1) |- dec(0,p2,1)"});
  ls_case(Rule::CR, GameSys::DB, *E, "dec(0,p1,1) |- dec(0,p2,1), dec(0,p3,1)",
          {"dec(0,p1,1) |- dec(0,p2,1), dec(0,p3,1), dec(0,p3,1)"});
  ls_case(Rule::ExL, GameSys::DB, *E, "dec(0,p3,1), dec(0,p1,1) |- dec(0,p2,1)",
          {"dec(0,p1,1), dec(0,p3,1) |- dec(0,p2,1)"});
  ls_case(Rule::ExR, GameSys::DB, *E, "dec(0,p1,1) |- dec(0,p3,1), dec(0,p2,1)",
          {"dec(0,p1,1) |- dec(0,p2,1), dec(0,p3,1)"});
  ls_case(Rule::OneL, GameSys::DB, *E, "dec(0,p1,1), 1 |- dec(0,p2,1)",
          {"dec(0,p1,1) |- dec(0,p2,1)"});
  ls_case(Rule::ZeroR, GameSys::DB, *E, "dec(0,p1,1) |- dec(0,p2,1), 0",
          {"dec(0,p1,1) |- dec(0,p2,1)"});
  ls_case(Rule::Cut, GameSys::DB, *E, "dec(0,p1,1) |- dec(0,p2,1)",
          {"dec(0,p1,1) |- dec(0,p2,1), dec(0,p3,1)",
           "dec(0,p1,1), dec(0,p3,1) |- dec(0,p2,1)"});
  ls_case(Rule::NotL, GameSys::DB, *E,
          "dec(0,p1,1), not(dec(0,p3,1)) |- dec(0,p2,1)",
          {"dec(0,p1,1) |- dec(0,p2,1), dec(0,p3,1)"});
  ls_case(Rule::NotR, GameSys::DB, *E,
          "dec(0,p1,1) |- dec(0,p2,1), not(dec(0,p3,1))",
          {"dec(0,p1,1), dec(0,p3,1) |- dec(0,p2,1)"});
  ls_case(Rule::OrL, GameSys::DB, *E,
          "dec(0,p1,1), or(dec(0,p3,1), dec(0,p4,1)) |- dec(0,p2,1)",
          {"dec(0,p1,1), dec(0,p3,1) |- dec(0,p2,1)",
           "dec(0,p1,1), dec(0,p4,1) |- dec(0,p2,1)"});
  ls_case(Rule::OrR, GameSys::DB, *E,
          "dec(0,p1,1) |- dec(0,p2,1), or(dec(0,p3,1), dec(0,p4,1))",
          {"dec(0,p1,1) |- dec(0,p2,1), dec(0,p3,1), dec(0,p4,1)"});
  ls_case(Rule::AndL, GameSys::DB, *E,
          "dec(0,p1,1), and(dec(0,p3,1), dec(0,p4,1)) |- dec(0,p2,1)",
          {"dec(0,p1,1), dec(0,p3,1), dec(0,p4,1) |- dec(0,p2,1)"});
  ls_case(Rule::AndR, GameSys::DB, *E,
          "dec(0,p1,1) |- dec(0,p2,1), and(dec(0,p3,1), dec(0,p4,1))",
          {"dec(0,p1,1) |- dec(0,p2,1), dec(0,p3,1)",
           "dec(0,p1,1) |- dec(0,p2,1), dec(0,p4,1)"});
  ls_case(Rule::DecL, GameSys::DB, *E,
          "dec(0,p1,1), dec(dec(0,p1,1), p3, dec(0,p2,1)) |- dec(0,p2,1)",
          {"dec(0,p1,1), dec(0,p1,1) |- dec(0,p2,1), p3",
           "dec(0,p1,1), p3, dec(0,p2,1) |- dec(0,p2,1)"});
  ls_case(Rule::DecR, GameSys::DB, *E,
          "dec(0,p1,1) |- dec(0,p2,1), dec(dec(0,p1,1), p3, dec(0,p2,1))",
          {"dec(0,p1,1) |- dec(0,p2,1), dec(0,p1,1), p3",
           "dec(0,p1,1), p3 |- dec(0,p2,1), dec(0,p2,1)"});
  // Decision left with empty contexts, and a nondeterministic instance.
  ls_case(Rule::DecL, GameSys::DB, *E,
          "dec(dec(0,p1,1), p3, dec(0,p2,1)) |-",
          {"dec(0,p1,1) |- p3", "p3, dec(0,p2,1) |-"});
  ls_case(Rule::DecR, GameSys::NB, *E,
          "|- dec(or(0,1), p3, dec(0, p2, or(0,1)))",
          {"|- or(0,1), p3", "p3 |- dec(0, p2, or(0,1))"});
  ls_case(Rule::OrL, GameSys::NB, *E, "or(e1, dec(0,p2,1)) |- or(0, 1)",
          {"e1 |- or(0, 1)", "dec(0,p2,1) |- or(0, 1)"});

  CHECK_THROWS_AS(
      ls_case(Rule::WL, GameSys::DB, *E, "dec(0,p1,1) |- dec(0,p2,1)",
              {"dec(0,p1,1) |- dec(0,p2,1)"}),
      BpwError);
  CHECK_THROWS_AS(
      ls_case(Rule::OrL, GameSys::DB, *E,
              "or(dec(0,p3,1), dec(0,p4,1)) |- dec(0,p2,1)",
              {"dec(0,p3,1) |- dec(0,p2,1)", "dec(0,p3,1) |- dec(0,p2,1)"}),
      BpwError);
}

TEST_CASE("proofs become strategies that trap every denial") {
  SUBCASE("a single identity line") {
    ProofBuilder pb(System::eLDT);
    pb.id_line(parse_query("dec(0,p1,1)"));
    Proof pf = pb.take();
    Strat s = proof_to_strategy(pf);
    GameState st = state_of_sequent(pf.conclusion());
    expect_ok(s, st, *pf.axioms, GameSys::DB);
    CHECK(strategy_depth(s) <= 12);
  }

  SUBCASE("the worked extension proof") {
    Proof pf = read_proof_json(slurp("e42_e43_proof.json"), BPW_TEST_DATA);
    REQUIRE(check_proof(pf).ok);
    Strat s = proof_to_strategy(pf);
    GameState st = state_of_sequent(parse_sequent("e42 |- e43"));
    expect_ok(s, st, *pf.axioms, GameSys::NB);
    // Same order as the hand strategy for the same sequent, up to a
    // constant factor.
    CHECK(strategy_depth(s) <= 40);
  }

  SUBCASE("rejects a proof that does not check") {
    Proof bad;
    bad.system = System::eLDT;
    bad.axioms = empty_axioms();
    bad.lines.push_back(
        {parse_sequent("dec(0,p1,1) |- dec(0,p2,1)"), Rule::Id, {}, {}, {}});
    CHECK_THROWS_AS(proof_to_strategy(bad), BpwError);
  }
}

TEST_CASE("generated threshold and decider proofs all convert") {
  std::vector<std::pair<double, double>> samples;  // (log2 symbols, depth)
  auto convert = [&](ProofBuilder& pb, uint32_t line) {
    Proof pf = pb.take(line);
    REQUIRE(check_proof(pf).ok);
    Strat s = proof_to_strategy(pf);
    GameState st = state_of_sequent(pf.conclusion());
    expect_ok(s, st, pf.axioms ? *pf.axioms : *empty_axioms(), GameSys::NB);
    ProofSize ps = proof_size(pf);
    samples.push_back({std::log2((double)ps.symbols + 2.0),
                       (double)strategy_depth(s)});
  };

  std::vector<const Formula*> B2;
  for (const char* n : {"p1", "p2"}) B2.push_back(parse_formula(n));
  std::vector<const Formula*> B3;
  for (const char* n : {"p1", "p2", "p3"}) B3.push_back(parse_formula(n));
  {
    ProofBuilder pb(System::eLNDT);
    convert(pb, thr_mono_step(pb, B2, 0, 1));
  }
  {
    ProofBuilder pb(System::eLNDT);
    convert(pb, thr_truth1(pb, B3, 1, 1));
  }
  {
    ProofBuilder pb(System::eLNDT);
    convert(pb, thr_truth3(pb, B3, 0, 2));
  }
  {
    ProofBuilder pb(System::eLNDT);
    DeciderSpec ds{B2, 1, 1, parse_formula("0"), parse_formula("1")};
    convert(pb, dec_low_count(pb, ds, 1, 0, 0, 0));
  }
  {
    ProofBuilder pb(System::eLNDT);
    DeciderSpec ds{B3, 1, 1, parse_formula("0"), parse_formula("1")};
    convert(pb, dec_after_flag(pb, ds, 1, 2, 1, 0));
  }
  {
    ProofBuilder pb(System::eLNDT);
    DeciderSpec ds{B2, 1, 1, parse_formula("0"), parse_formula("1")};
    convert(pb, dec_before_flag(pb, ds, 3, 1, 0, 1));
  }

  // Depth stays logarithmic in proof size; constants frozen here.
  for (const auto& [lg, depth] : samples) {
    CAPTURE(lg);
    CAPTURE(depth);
    CHECK(depth <= 8.0 * lg + 16.0);
  }
}

TEST_CASE("de morgan form fixes negations at the leaves") {
  AxiomSetPtr E = two_of_four();
  const Query* b = parse_query("e42");
  CHECK(dm_query(qnot(qnot(b)), *E) == b);
  const Query* q = parse_query("not(p1)");
  const Query* r = parse_query("or(p2, not(p3))");
  CHECK(dm_query(qnot(qor(q, r)), *E) ==
        qand(dm_query(qnot(q), *E), dm_query(qnot(r), *E)));
  CHECK(dm_query(qnot(qor(q, r)), *E) ==
        qand(parse_query("p1"), qand(qnot(parse_query("p2")),
                                     parse_query("p3"))));
  CHECK(is_dm_query(parse_query("or(e42, not(e43))"), *E));
  CHECK(!is_dm_query(parse_query("not(or(e42, e43))"), *E));
  CHECK(!is_dm_query(parse_query("not(not(e42))"), *E));

  // Rewriting preserves the evaluated meaning pointwise.
  std::vector<const Query*> corpus = {
      parse_query("not(not(e42))"),
      parse_query("not(or(not(p1), and(p2, not(p3))))"),
      parse_query("and(not(and(p1, p2)), or(e41, not(e44)))"),
      parse_query("not(and(or(p1, p2), not(or(p3, p4))))"),
      parse_query("or(not(not(not(p1))), e11)"),
  };
  for (const Query* qq : corpus) {
    CAPTURE(render(qq));
    const Query* dm = dm_query(qq, *E);
    CHECK(is_dm_query(dm, *E));
    CHECK(dm_query(dm, *E) == dm);
    for (int bits = 0; bits < 16; ++bits) {
      Assignment al{{pvar_id("1"), (bits & 1) != 0},
                    {pvar_id("2"), (bits & 2) != 0},
                    {pvar_id("3"), (bits & 4) != 0},
                    {pvar_id("4"), (bits & 8) != 0}};
      CHECK(evaluate(dm, *E, al) == evaluate(qq, *E, al));
    }
  }
}

TEST_CASE("dm strategy replays and repairs negation leaves") {
  StrategyFile left = read_strategy_json(slurp("excluded_middle.json"),
                                         BPW_TEST_DATA);
  GameState orig = state_of_pairs(left.initial);
  Strat dmst = dm_strategy(left.root, orig, *left.axioms);
  GameState dst;
  for (const auto& [q, bb] : left.initial)
    dst.assign(dm_query(q, *left.axioms), bb);
  expect_ok(dmst, dst, *left.axioms, GameSys::NB);

  // A strategy already in DM form keeps its shape.
  StrategyFile right = read_strategy_json(slurp("e42_e43_strategy.json"),
                                          BPW_TEST_DATA);
  GameState rst = state_of_pairs(right.initial);
  Strat dmr = dm_strategy(right.root, rst, *right.axioms);
  expect_ok(dmr, rst, *right.axioms, GameSys::NB);
  CHECK(strategy_depth(dmr) == strategy_depth(right.root));
}

TEST_CASE("context navigation and plugging") {
  AxiomSetPtr E = two_of_four();
  const Query* p = parse_query("e42");
  const Query* x = parse_query("e43");
  QueryContext c{parse_query("or(not(e42), e43)"), {false, false}};
  CHECK(context_sub(c, *E) == p);
  CHECK(context_plug(c, x, *E) == parse_query("or(not(e43), e43)"));
  QueryContext top{p, {}};
  CHECK(context_sub(top, *E) == p);
  CHECK(context_plug(top, x, *E) == x);
  QueryContext deep{parse_query("e42"), {false}};
  CHECK_THROWS_AS(context_sub(deep, *E), BpwError);
}

TEST_CASE("leibniz strategies win through a context") {
  AxiomSetPtr Eptr = two_of_four();
  const ExtAxiomSet& E = *Eptr;
  const Query* p = parse_query("e42");
  const Query* pp = parse_query("e43");

  auto run = [&](const QueryContext& c, bool b, bool cval) {
    REQUIRE(context_sub(c, E) == p);
    const Query* plugged = context_plug(c, pp, E);
    GameState st;
    st.assign(p, b);
    st.assign(pp, b);
    st.assign(c.root, cval);
    st.assign(plugged, !cval);
    Strat s = leibniz_strategy(p, pp, b, c, cval, st, E, GameSys::NB);
    VerifyResult vr = verify_strategy(s, st, E, GameSys::NB);
    CAPTURE(render(c.root));
    CAPTURE(vr.error);
    CHECK(vr.ok);
    return strategy_depth(s);
  };

  SUBCASE("trivial and one-step contexts") {
    for (bool b : {false, true})
      for (bool cval : {false, true}) {
        CHECK(run(QueryContext{p, {}}, b, cval) == 0);
        CHECK(run(QueryContext{qnot(p), {false}}, b, cval) == 0);
        run(QueryContext{qor(p, qnot(pp)), {false}}, b, cval);
        run(QueryContext{qand(p, parse_query("e44")), {false}}, b, cval);
      }
  }

  SUBCASE("random deep contexts stay logarithmic") {
    std::vector<const Query*> fillers = {
        parse_query("e41"), parse_query("e44"), parse_query("dec(0,p2,1)"),
        parse_query("e33"), parse_query("or(e31, e32)")};
    std::mt19937 rng(7);
    for (int depth : {2, 3, 5, 8, 13, 21, 32}) {
      for (int rep = 0; rep < 3; ++rep) {
        const Query* cur = p;
        std::vector<bool> rpath;
        for (int i = 0; i < depth; ++i) {
          uint32_t pick = rng() % 3;
          const Query* sib = fillers[rng() % fillers.size()];
          if (pick == 2) {
            cur = qnot(cur);
            rpath.push_back(false);
          } else {
            // An or of two plain programs folds to one leaf; negate the
            // sibling to keep the hole addressable.
            if (pick == 0 && cur->kind == QKind::Base) sib = qnot(sib);
            bool left = rng() % 2 == 0;
            const Query* l = left ? cur : sib;
            const Query* r = left ? sib : cur;
            cur = pick == 0 ? qor(l, r) : qand(l, r);
            rpath.push_back(!left);
          }
        }
        std::vector<bool> path(rpath.rbegin(), rpath.rend());
        bool b = rng() % 2 == 0;
        bool cval = rng() % 2 == 0;
        int d = run(QueryContext{cur, path}, b, cval);
        CAPTURE(depth);
        CAPTURE(d);
        CHECK(d <= 2.0 * std::log2((double)depth) + 6.0);
      }
    }
  }
}

TEST_CASE("spira subtrees balance the leaf count") {
  AxiomSetPtr E = two_of_four();
  const Query* balanced =
      parse_query("or(or(p1, not(p2)), or(p3, not(p4)))");
  SpiraCut sc = spira_subtree(balanced, *E);
  CHECK(query_leafcount(sc.sub, *E) == 2);
  CHECK(sc.sub == parse_query("or(p1, not(p2))"));
  CHECK(sc.path == std::vector<bool>{false});

  const Query* spine = parse_query("not(p1)");
  for (int i = 2; i <= 9; ++i)
    spine = qor(spine, qnot(parse_query(("p" + std::to_string(i)).c_str())));
  CHECK(query_leafcount(spine, *E) == 9);
  SpiraCut sp = spira_subtree(spine, *E);
  size_t total = 9, sub = query_leafcount(sp.sub, *E);
  CHECK(3 * sub >= total);
  CHECK(3 * sub < 2 * total);
  CHECK(sub == 3);

  CHECK_THROWS_AS(spira_subtree(parse_query("e11"), *E), BpwError);
  CHECK_THROWS_AS(spira_subtree(parse_query("not(not(e11))"), *E), BpwError);

  std::vector<const Query*> atoms = {
      parse_query("e41"), parse_query("e42"), parse_query("p1"),
      parse_query("dec(0,p2,1)"), parse_query("or(e43, e44)")};
  std::mt19937 rng(11);
  std::function<const Query*(int)> gen = [&](int budget) -> const Query* {
    if (budget <= 1) {
      const Query* a = atoms[rng() % atoms.size()];
      return rng() % 4 == 0 ? qnot(a) : a;
    }
    int l = 1 + (int)(rng() % (uint32_t)(budget - 1));
    const Query* q = rng() % 2 ? qand(gen(l), gen(budget - l))
                               : qor(gen(l), gen(budget - l));
    return rng() % 8 == 0 ? qnot(q) : q;
  };
  int tried = 0;
  for (int i = 0; i < 1000; ++i) {
    const Query* q = gen(2 + (int)(rng() % 30));
    size_t n = query_leafcount(q, *E);
    if (n < 2) continue;
    ++tried;
    SpiraCut cut = spira_subtree(q, *E);
    size_t k = query_leafcount(cut.sub, *E);
    CAPTURE(render(q));
    CHECK(3 * k >= n);
    CHECK(3 * k < 2 * n);
    QueryContext as_ctx{q, cut.path};
    CHECK(context_sub(as_ctx, *E) == cut.sub);
  }
  CHECK(tried > 500);
}

TEST_CASE("duality strategies close matched dm pairs") {
  AxiomSetPtr Eptr = two_of_four();
  const ExtAxiomSet& E = *Eptr;

  auto run = [&](const Query* q, bool b) {
    GameState st;
    st.assign(dm_query(q, E), b);
    st.assign(dm_query(qnot(q), E), b);
    Strat s = duality_strategy(q, b, E);
    VerifyResult vr = verify_strategy(s, st, E, GameSys::NB);
    CAPTURE(render(q));
    CAPTURE(b);
    CAPTURE(vr.error);
    CHECK(vr.ok);
    return strategy_depth(s);
  };

  // A single program: the pair is already a negation clash. A disjunction
  // folded into one program still splits against its compound dual.
  CHECK(run(parse_query("e42"), false) == 0);
  CHECK(run(parse_query("e42"), true) == 0);
  CHECK(run(parse_query("or(e42, e43)"), true) <= 6);

  // Excluded middle over a program stays within six rounds.
  const Query* em = parse_query("or(dec(0,p1,1), not(dec(0,p1,1)))");
  CHECK(run(em, false) <= 6);
  CHECK(run(em, true) <= 6);

  std::vector<const Query*> atoms = {
      parse_query("e41"), parse_query("e42"), parse_query("e43"),
      parse_query("p1"), parse_query("dec(0,p2,1)")};
  std::mt19937 rng(23);
  std::function<const Query*(int)> gen = [&](int budget) -> const Query* {
    if (budget <= 1) {
      const Query* a = atoms[rng() % atoms.size()];
      return rng() % 4 == 0 ? qnot(a) : a;
    }
    int l = 1 + (int)(rng() % (uint32_t)(budget - 1));
    const Query* q = rng() % 2 ? qand(gen(l), gen(budget - l))
                               : qor(gen(l), gen(budget - l));
    return rng() % 8 == 0 ? qnot(q) : q;
  };
  // Round counts follow the syntactic leaf count: a folded disjunction is
  // one program to the class but still two leaves to the pairing.
  std::function<size_t(const Query*)> syn_leaves = [&](const Query* q) -> size_t {
    if (q_is_or(q) || q_is_and(q))
      return syn_leaves(q_left(q)) + syn_leaves(q_right(q));
    return 1;
  };
  for (int budget : {2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64}) {
    const Query* q = gen(budget);
    size_t sl = syn_leaves(dm_query(q, E));
    int d = run(q, budget % 2 == 0);
    CAPTURE(budget);
    CAPTURE(sl);
    CAPTURE(d);
    CHECK((double)d <= 8.0 * std::log2((double)sl + 2.0) + 10.0);
  }
}

TEST_CASE("deterministic strategies compile to checked proofs") {
  SUBCASE("an immediate leaf proves the identity") {
    Sequent goal = parse_sequent("dec(0, p1, 1) |- dec(0, p1, 1)");
    Proof pf = strategy_to_proof_det(make_leaf(), goal, empty_axioms());
    check_proof_of(pf, goal, System::eLDT);
  }

  SUBCASE("an extension pair closes without asks") {
    AxiomSetBuilder ab;
    ab.define(evar_named("e1"), parse_formula("dec(0, p1, 1)"));
    AxiomSetPtr E = ab.snapshot();
    Sequent goal = parse_sequent("e1 |- dec(0, p1, 1)");
    Proof pf = strategy_to_proof_det(make_leaf(), goal, E);
    check_proof_of(pf, goal, System::eLDT);
    CHECK(pf.axioms->def(evar_named("e1")) != nullptr);
  }

  SUBCASE("compound asks become cuts and are then compiled away") {
    Sequent goal = parse_sequent(
        "dec(0, p1, 1) |- dec(dec(0, p1, 1), p2, dec(0, p1, 1))");
    const Query* r = goal.right[0];
    Strat s = make_ask(qnot(r), make_leaf(),
                       make_ask(parse_query("p2"), make_leaf(), make_leaf()));
    GameState st = state_of_sequent(goal);
    expect_ok(s, st, *empty_axioms(), GameSys::DB);
    CHECK(sequent_valid(goal, *empty_axioms()));

    Proof pf = strategy_to_proof_det(s, goal, empty_axioms());
    check_proof_of(pf, goal, System::eLDT);

    // Round trip: the compiled proof is again a winning strategy.
    Strat back = proof_to_strategy(pf);
    expect_ok(back, st, *pf.axioms, GameSys::DB);
  }

  SUBCASE("a failing strategy is rejected") {
    Sequent goal = parse_sequent("dec(0, p1, 1) |- dec(0, p2, 1)");
    CHECK_THROWS_AS(strategy_to_proof_det(make_leaf(), goal, empty_axioms()),
                    BpwError);
  }
}

TEST_CASE("nondeterministic strategies compile through counting") {
  SUBCASE("the worked strategy yields the worked theorem") {
    StrategyFile right = read_strategy_json(slurp("e42_e43_strategy.json"),
                                            BPW_TEST_DATA);
    Sequent goal = parse_sequent("e42 |- e43");
    Proof pf = strategy_to_proof_nondet(right.root, goal, right.axioms);
    check_proof_of(pf, goal, System::eLNDT);
  }

  SUBCASE("negation asks route through deciders") {
    Sequent goal = parse_sequent(
        "dec(0, p1, 1) |- dec(dec(0, p1, 1), p2, dec(0, p1, 1))");
    const Query* q = goal.left[0];
    Strat s = make_ask(qnot(q),
                       make_ask(parse_query("p2"), make_leaf(), make_leaf()),
                       make_leaf());
    GameState st = state_of_sequent(goal);
    expect_ok(s, st, *empty_axioms(), GameSys::NB);

    Proof pf = strategy_to_proof_nondet(s, goal, empty_axioms());
    check_proof_of(pf, goal, System::eLNDT);
  }

  SUBCASE("compound goal members are rejected") {
    Sequent goal = parse_sequent("|- or(not(e42), e42)");
    CHECK_THROWS_AS(
        strategy_to_proof_nondet(make_leaf(), goal, two_of_four()), BpwError);
  }
}

TEST_CASE("transcripts replay strategies against scripted answers") {
  StrategyFile right = read_strategy_json(slurp("e42_e43_strategy.json"),
                                          BPW_TEST_DATA);
  GameState rst = state_of_pairs(right.initial);

  PlayResult pr = play(right.root, rst, *right.axioms, GameSys::NB, {1, 1, 1});
  CHECK(pr.won);
  REQUIRE(pr.win.has_value());
  CHECK(pr.win->kind == CKind::Extension);
  CHECK(pr.transcript ==
        "ASK dec(0, p4, 1)\nANS 1\nASK p4\nANS 1\n"
        "ASK dec(1, p4, or(1, 0))\nANS 1\nWIN extension\n");

  StrategyFile left = read_strategy_json(slurp("excluded_middle.json"),
                                         BPW_TEST_DATA);
  GameState lst = state_of_pairs(left.initial);
  PlayResult pl = play(left.root, lst, *left.axioms, GameSys::NB, {0});
  CHECK(pl.won);
  CHECK(pl.win->kind == CKind::ConnNot);
  CHECK(pl.transcript ==
        "ASK not(or(p1, not(p1)))\nANS 0\nWIN connective_not\n");

  SUBCASE("answers may come from a stream, echoed to the sink") {
    std::istringstream in("0\n");
    std::ostringstream out;
    PlayResult pi = play(left.root, lst, *left.axioms, GameSys::NB, {}, &in,
                         &out);
    CHECK(pi.won);
    CHECK(pi.transcript == pl.transcript);
    CHECK(out.str() == pl.transcript);
  }

  SUBCASE("failures and malformed scripts are reported") {
    Strat trimmed = make_ask(left.root->q, make_leaf(), make_leaf());
    PlayResult pf = play(trimmed, lst, *left.axioms, GameSys::NB, {1});
    CHECK(!pf.won);
    CHECK(pf.transcript.find("FAIL") != std::string::npos);

    CHECK_THROWS_AS(play(left.root, lst, *left.axioms, GameSys::NB, {}),
                    BpwError);
    std::istringstream junk("2\n");
    CHECK_THROWS_AS(
        play(left.root, lst, *left.axioms, GameSys::NB, {}, &junk), BpwError);
  }
}

TEST_CASE("strategy json round trips") {
  StrategyFile right = read_strategy_json(slurp("e42_e43_strategy.json"),
                                          BPW_TEST_DATA);
  SUBCASE("with a path to the axiom file") {
    std::string text = write_strategy_json(right.root, right.sys, right.axioms,
                                           right.initial, "two_of_four.ax");
    StrategyFile again = read_strategy_json(text, BPW_TEST_DATA);
    CHECK(again.sys == right.sys);
    CHECK(again.initial == right.initial);
    CHECK(strategy_depth(again.root) == strategy_depth(right.root));
    CHECK(strategy_nodes(again.root) == strategy_nodes(right.root));
    expect_ok(again.root, state_of_pairs(again.initial), *again.axioms,
              again.sys);
    // Leaf claims survive the trip.
    CHECK(again.root->on0->win->kind == CKind::Extension);
  }

  SUBCASE("with the axioms inlined") {
    std::string text = write_strategy_json(right.root, right.sys, right.axioms,
                                           right.initial);
    StrategyFile again = read_strategy_json(text, "/nonexistent");
    CHECK(again.axioms->def(evar_named("e42")) != nullptr);
    expect_ok(again.root, state_of_pairs(again.initial), *again.axioms,
              again.sys);
  }

  SUBCASE("malformed documents are rejected") {
    CHECK_THROWS_AS(read_strategy_json("{\"system\": \"NB\"}", "."), BpwError);
    CHECK_THROWS_AS(read_strategy_json("[1, 2]", "."), BpwError);
  }
}
