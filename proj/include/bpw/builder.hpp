// Forward proof construction. The builder keeps a line store deduplicated
// by canonical sequent (safe, since a line may be justified by any one
// derivation), validates each rule application as it is added, and lets
// constructions extend the axiom set as they introduce new extension
// variables. Generated proofs target the multiset checker.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bpw/axioms.hpp"
#include "bpw/proof.hpp"
#include "bpw/sequent.hpp"
#include "bpw/systems.hpp"

namespace bpw {

constexpr uint32_t kNoLine = UINT32_MAX;

class ProofBuilder {
 public:
  explicit ProofBuilder(System sys, AxiomSetPtr base = empty_axioms());

  System system() const { return sys_; }
  AxiomSetBuilder& axioms() { return axb_; }
  const ExtAxiomSet& aset() const { return axb_.view(); }
  void define_evar(EVarId v, const Formula* body) { axb_.define(v, body); }

  size_t size() const { return lines_.size(); }
  const Sequent& seq(uint32_t i) const { return lines_.at(i).seq; }
  uint32_t find(const Sequent& s) const;  // kNoLine when absent
  uint32_t line(const Sequent& s) const;  // throws when absent

  // Raw line append (validated by the same checks as the helpers below).
  uint32_t add(Sequent seq, Rule r, std::vector<uint32_t> prem = {},
               std::optional<ExtAux> ext = std::nullopt);

  // Axioms.
  uint32_t id_line(const Query* a);
  uint32_t zero_l();
  uint32_t one_r();
  uint32_t ext_line(EVarId v, bool left_to_right);

  // Single-premise steps; `m` is the principal formula of the conclusion
  // (for not/or/and/dec rules) or the member being added/removed.
  uint32_t wl(uint32_t p, const Query* m);
  uint32_t wr(uint32_t p, const Query* m);
  uint32_t cl(uint32_t p, const Query* m);
  uint32_t cr(uint32_t p, const Query* m);
  uint32_t orr(uint32_t p, const Query* m);
  uint32_t andl(uint32_t p, const Query* m);
  uint32_t notl(uint32_t p, const Query* m);
  uint32_t notr(uint32_t p, const Query* m);

  // Two-premise steps.
  uint32_t cut(uint32_t p0, uint32_t p1, const Query* a);
  uint32_t orl(uint32_t p0, uint32_t p1, const Query* m);
  uint32_t andr(uint32_t p0, uint32_t p1, const Query* m);
  uint32_t decl(uint32_t p0, uint32_t p1, const Query* m);
  uint32_t decr(uint32_t p0, uint32_t p1, const Query* m);

  // Weakens line p until its sequent covers `target` (which must contain
  // the current sequent as a sub-multiset).
  uint32_t weaken_to(uint32_t p, const Sequent& target);
  // Contracts duplicates away until the sequent equals `target`.
  uint32_t contract_to(uint32_t p, const Sequent& target);
  // Cut whose premises may have different contexts: both sides are first
  // weakened to the union context, then cut on `a`.
  uint32_t cut2(uint32_t p0, uint32_t p1, const Query* a);

  Proof take();
  // Prunes to the ancestors of `target`, which becomes the conclusion.
  Proof take(uint32_t target);

 private:
  uint32_t push(Sequent s, Rule r, std::vector<uint32_t> prem,
                std::optional<ExtAux> ext);
  [[noreturn]] void bad(const char* rule, uint32_t p0, uint32_t p1) const;

  System sys_;
  AxiomSetBuilder axb_;
  std::vector<ProofLine> lines_;
  std::map<std::vector<uint32_t>, uint32_t> index_;  // canonical ids -> line
};

}  // namespace bpw
