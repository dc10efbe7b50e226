// Proof objects and the two checkers. A proof is a line list; each line is
// a sequent together with the rule that derives it and the indices of its
// premises (which must be earlier lines). The multiset checker matches
// premises up to permutation of the cedents; the strict checker demands
// the positional format (principal formulas at the end, contexts equal
// position by position, exchange steps carrying an explicit position).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bpw/axioms.hpp"
#include "bpw/sequent.hpp"
#include "bpw/systems.hpp"

namespace bpw {

struct ExtAux {
  EVarId var = 0;
  bool left_to_right = true;  // e |- body when true, body |- e when false
};

struct ProofLine {
  Sequent seq;
  Rule rule = Rule::Id;
  std::vector<uint32_t> prem;
  std::optional<int> pos;       // strict exchange position
  std::optional<ExtAux> ext;    // extension lines
};

struct Proof {
  System system = System::eLDT;
  AxiomSetPtr axioms;
  std::vector<ProofLine> lines;

  const Sequent& conclusion() const { return lines.back().seq; }
};

enum class Mode { Multiset, Strict };

struct CheckResult {
  bool ok = true;
  size_t line = 0;
  std::string error;
};

CheckResult check_proof(const Proof& pf, Mode mode = Mode::Multiset);

// Brute-force validity of every line; reports the first invalid one.
CheckResult check_lines_semantically(const Proof& pf);

struct ProofSize {
  uint64_t lines = 0;           // physical line count
  uint64_t distinct = 0;        // distinct sequents up to cedent permutation
  uint64_t symbols = 0;         // total symbols over the distinct sequents
};
ProofSize proof_size(const Proof& pf);

// Appends `tail` to `head`, reindexing premises. Systems must match and one
// axiom set must extend the other (the larger one is kept).
Proof compose(const Proof& head, const Proof& tail);

// JSON serialization. The axiom set is stored under the header's "axioms"
// key: inline axiom text when `axioms_path` is empty, otherwise the given
// path (resolved against `base_dir` when reading).
std::string write_proof_json(const Proof& pf, const std::string& axioms_path = "");
Proof read_proof_json(const std::string& text, const std::string& base_dir = ".");

}  // namespace bpw
