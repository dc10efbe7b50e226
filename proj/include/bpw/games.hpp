// Prover-Adversary games over query assignments. The Prover asks queries,
// the Adversary answers bits, and the Prover wins by trapping the Adversary
// in a simple contradiction: a small set of assigned queries that cannot all
// hold at once. DB games range over Boolean combinations of decision trees,
// NB games over positive combinations of nondeterministic ones. Alongside
// state and strategy types this header exposes the detector, the verifier,
// the find/force and local soundness combinators, the proof-to-strategy and
// strategy-to-proof translations in both directions, the De Morgan and
// duality machinery the nondeterministic direction needs, and a transcript
// player plus JSON (de)serialization.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bpw/axioms.hpp"
#include "bpw/core.hpp"
#include "bpw/proof.hpp"
#include "bpw/sequent.hpp"
#include "bpw/systems.hpp"

namespace bpw {

// Which game class the state lives in. DB admits Boolean combinations of
// extended decision trees; NB admits positive combinations of extended
// nondeterministic ones.
enum class GameSys : uint8_t { DB, NB };
const char* game_sys_name(GameSys s);
std::optional<GameSys> game_sys_from_name(const std::string& name);

// A partial assignment of queries to bits. Re-asking is legal, so a query
// may carry both answers at once; such an entry is itself a contradiction.
// Bit 0 of the mask records an answer 0, bit 1 an answer 1.
struct GameState {
  std::unordered_map<const Query*, uint8_t> bits;

  void assign(const Query* q, bool b);
  bool has(const Query* q, bool b) const;
  bool both(const Query* q) const;
  // The single recorded answer, or nullopt when absent or double-assigned.
  std::optional<bool> value(const Query* q) const;
};

// Left members answered 1, right members answered 0: the state an Adversary
// commits to when denying the sequent.
GameState state_of_sequent(const Sequent& s);

// The seven kinds of simple contradiction.
enum class CKind : uint8_t {
  BoolConst,
  Decision,
  ConnNot,
  ConnOr,
  ConnAnd,
  Extension,
  Similarity,
};
const char* ckind_name(CKind k);
std::optional<CKind> ckind_from_name(const std::string& name);

// A witnessed contradiction: the assigned queries that clash, with the
// answers they carry in the state.
struct Contradiction {
  CKind kind = CKind::BoolConst;
  std::vector<std::pair<const Query*, bool>> witness;
};

struct DetectOpts {
  // Similarity tests are the expensive kind; cap how many pairs one detect
  // call may try.
  size_t sim_budget = 4096;
  // Stop at the first contradiction instead of collecting all of them.
  bool first_only = false;
};

// All simple contradictions present in the state. Scans every kind; the
// order within the result follows the scan (constants and structure before
// similarity). Throws when a state query falls outside the game class.
std::vector<Contradiction> detect(const GameState& st, const ExtAxiomSet& E,
                                  GameSys sys, const DetectOpts& opts = {});

// A strategy tree: an Ask node carries the query and both continuations, a
// leaf optionally carries the claimed win. Claims are advisory; the
// verifier re-detects at every leaf. A leaf without a claim is "open",
// marking where a partial strategy hands control back.
struct Strategy;
using Strat = std::shared_ptr<const Strategy>;
struct Strategy {
  const Query* q = nullptr;
  Strat on0, on1;
  std::optional<Contradiction> win;
};
Strat make_leaf(std::optional<Contradiction> win = std::nullopt);
Strat make_ask(const Query* q, Strat on0, Strat on1);

// Longest root-to-leaf ask count, and total node count.
int strategy_depth(const Strat& s);
size_t strategy_nodes(const Strat& s);

struct VerifyResult {
  bool ok = true;
  // Answers along the path to the offending leaf, when not ok.
  std::vector<std::pair<const Query*, bool>> path;
  std::string error;
};

// Check that every leaf reachable from the initial state holds a detected
// contradiction. Every Adversary answer sequence is walked, so this is an
// exhaustive check of the win condition.
VerifyResult verify_strategy(const Strat& s, const GameState& initial,
                             const ExtAxiomSet& E, GameSys sys,
                             const DetectOpts& opts = {});

// Structural metrics of a query. Leaves are the maximal branching-program
// subformulas: a Base node whose formula stays inside the e(N)DT class
// counts as one leaf even when its top connective is an or.
int query_depth(const Query* q, const ExtAxiomSet& E);
size_t query_leafcount(const Query* q, const ExtAxiomSet& E);

// Balanced combinations of a cedent, splitting at floor(n/2). The empty
// conjunction is the constant 1, the empty disjunction the constant 0, and
// a singleton is its own combination.
const Query* big_and(const Cedent& c);
const Query* big_or(const Cedent& c);
// not(big_and(left)) or big_or(right): the query whose truth is the
// sequent's validity under an assignment.
const Query* imp_query(const Sequent& s);

// Goals for the find/force combinators. Find goals extract a culprit from
// an already-assigned combination; force goals pin a chosen part. The
// implication goal decomposes a driver not(L) or R answered 0 into L
// answered 1 and R answered 0.
enum class FFGoal : uint8_t {
  FindDisjunctTrue,
  FindConjunctFalse,
  ForceConjunct,
  ForceDisjunct,
  ForceImplicationParts,
};

// A partial strategy pursuing the goal against the driver query, whose
// required answer must already be in the state. Open leaves mark success;
// closed leaves are wins collected on the way. Asks are logarithmic in the
// size of the driver (at most three for the implication goal). The target
// names the subquery a force goal pins; find goals ignore it.
Strat strat_find_force(FFGoal goal, const Query* driver, const Query* target,
                       const GameState& st, const ExtAxiomSet& E, GameSys sys,
                       const DetectOpts& opts = {});

// A winning strategy from the state that affirms every premise implication
// and denies the conclusion implication: soundness of one rule instance,
// played out in logarithmically many asks. Throws when the given sequents
// do not form an instance of the rule.
Strat local_soundness(Rule r, const Sequent& conc,
                      const std::vector<Sequent>& prems, const ExtAxiomSet& E,
                      GameSys sys, std::optional<ExtAux> ext = std::nullopt,
                      const DetectOpts& opts = {});

// A winning strategy for the Adversary state denying the conclusion of a
// checked proof. Binary search over prefix conjunctions of the line
// implications locates a failing line, then local soundness finishes. The
// proof must check in a plain decision system; depth is logarithmic in the
// number of lines times the largest sequent.
Strat proof_to_strategy(const Proof& pf, const DetectOpts& opts = {});

// De Morgan normal form of a query: negation pushed down to the maximal
// branching-program leaves, double negations cancelled. Fixes exactly the
// queries already in that form.
const Query* dm_query(const Query* q, const ExtAxiomSet& E);
bool is_dm_query(const Query* q, const ExtAxiomSet& E);

// Replay a strategy with every query in De Morgan form. Leaves that relied
// on a negation contradiction over a compound query are repaired with a
// duality strategy.
Strat dm_strategy(const Strat& s, const GameState& initial,
                  const ExtAxiomSet& E, const DetectOpts& opts = {});

// A query with a hole: the subquery reached from root along path (0 is the
// left or only child, 1 the right), stepping through connective views on
// both tiers.
struct QueryContext {
  const Query* root = nullptr;
  std::vector<bool> path;
};
const Query* context_sub(const QueryContext& c, const ExtAxiomSet& E);
const Query* context_plug(const QueryContext& c, const Query* x,
                          const ExtAxiomSet& E);

// From a state containing p and pp answered b, c.root[p] answered cval and
// c.root[pp] answered 1-cval: a win in logarithmically many asks, by
// halving the context path.
Strat leibniz_strategy(const Query* p, const Query* pp, bool b,
                       const QueryContext& c, bool cval, const GameState& st,
                       const ExtAxiomSet& E, GameSys sys,
                       const DetectOpts& opts = {});

// A subquery holding between a third and two thirds of the leaves:
// 3*leafcount(sub) >= leafcount(q) and 3*leafcount(sub) < 2*leafcount(q).
// Deepest such subquery, leftmost among the deepest. Throws when q has
// fewer than two leaves.
struct SpiraCut {
  const Query* sub = nullptr;
  std::vector<bool> path;
};
SpiraCut spira_subtree(const Query* q, const ExtAxiomSet& E);

// From a state containing dm_query(q) and dm_query(not q) both answered b:
// a win in logarithmically many asks in the leafcount, by cutting at a
// balanced subquery and patching with leibniz_strategy.
Strat duality_strategy(const Query* q, bool b, const ExtAxiomSet& E,
                       const DetectOpts& opts = {});

// From a verified DB strategy for the state denying goal: a proof of goal.
// Asks become cuts, leaves become short derivations from their re-detected
// contradictions; the Boolean query rules the construction uses are then
// eliminated, so the result checks in the extended decision-tree system.
Proof strategy_to_proof_det(const Strat& s, const Sequent& goal,
                            const AxiomSetPtr& E, const DetectOpts& opts = {});

// The nondeterministic counterpart, in four stages: verify in NB, replay in
// De Morgan form, build threshold-framed proofs with negated leaves
// replaced by decider programs for every count, then chain the counts and
// eliminate the positive query rules. The result checks in the extended
// nondeterministic system. Stage names prefix any error.
Proof strategy_to_proof_nondet(const Strat& s, const Sequent& goal,
                               const AxiomSetPtr& E,
                               const DetectOpts& opts = {});

struct PlayResult {
  bool won = false;
  std::optional<Contradiction> win;
  std::string transcript;
};

// Play a strategy against scripted answers (bits consumed in ask order) or,
// when the script runs out, lines read from in. Emits ASK/ANS lines and a
// final WIN or FAIL line to the transcript, echoed to out when given.
PlayResult play(const Strat& s, const GameState& initial,
                const ExtAxiomSet& E, GameSys sys,
                const std::vector<int>& script, std::istream* in = nullptr,
                std::ostream* out = nullptr, const DetectOpts& opts = {});

// JSON: an object with "system", "axioms", "initial" (list of {"q","b"}),
// and "root", whose nodes are {"q","0","1"} for asks and
// {"leaf":{"kind":...}} for leaves (kind omitted when unclaimed). The
// axioms field follows the proof convention: inline text when it contains
// a definition, otherwise a path resolved against base_dir.
std::string write_strategy_json(
    const Strat& s, GameSys sys, const AxiomSetPtr& E,
    const std::vector<std::pair<const Query*, bool>>& initial,
    const std::string& axioms_path = "");

struct StrategyFile {
  GameSys sys = GameSys::DB;
  AxiomSetPtr axioms;
  std::vector<std::pair<const Query*, bool>> initial;
  Strat root;
};
StrategyFile read_strategy_json(const std::string& text,
                                const std::string& base_dir = ".");
GameState state_of_pairs(
    const std::vector<std::pair<const Query*, bool>>& initial);

}  // namespace bpw
