#include "bpw/eval.hpp"

#include <algorithm>
#include <cstdlib>

namespace bpw {

int max_enum_vars() {
  static int cached = [] {
    if (const char* s = std::getenv("BPW_MAX_VARS")) {
      int v = std::atoi(s);
      if (v >= 1 && v <= 30) return v;
    }
    return 20;
  }();
  return cached;
}

namespace {

bool eval_rec(const Formula* f, const ExtAxiomSet& E, const Assignment& alpha,
              std::unordered_map<const Formula*, bool>& memo) {
  auto it = memo.find(f);
  if (it != memo.end()) return it->second;
  bool r = false;
  switch (f->kind) {
    case FKind::C0: r = false; break;
    case FKind::C1: r = true; break;
    case FKind::PVar: {
      auto a = alpha.find(f->var);
      if (a == alpha.end())
        throw BpwError("unassigned variable " + pvar_text(f->var));
      r = a->second;
      break;
    }
    case FKind::EVar: {
      const Formula* d = E.def(f->var);
      if (!d) throw BpwError("undefined extension variable " + evar_name(f->var));
      r = eval_rec(d, E, alpha, memo);
      break;
    }
    case FKind::Dec: {
      auto a = alpha.find(f->var);
      if (a == alpha.end())
        throw BpwError("unassigned variable " + pvar_text(f->var));
      r = eval_rec(a->second ? f->b : f->a, E, alpha, memo);
      break;
    }
    case FKind::Or:
      r = eval_rec(f->a, E, alpha, memo) || eval_rec(f->b, E, alpha, memo);
      break;
    case FKind::And:
      r = eval_rec(f->a, E, alpha, memo) && eval_rec(f->b, E, alpha, memo);
      break;
  }
  memo.emplace(f, r);
  return r;
}

// Reachable subgraph in dependency order (children and definitions first).
struct FlatNode {
  const Formula* f;
  uint32_t a = 0, b = 0;  // indices of dependencies
};

std::vector<FlatNode> flatten(const Formula* root, const ExtAxiomSet& E) {
  std::vector<FlatNode> out;
  std::unordered_map<const Formula*, uint32_t> index;
  // Iterative post-order to keep deep formulas off the call stack.
  std::vector<std::pair<const Formula*, bool>> stack{{root, false}};
  while (!stack.empty()) {
    auto [f, expanded] = stack.back();
    stack.pop_back();
    if (index.count(f)) continue;
    if (!expanded) {
      stack.push_back({f, true});
      switch (f->kind) {
        case FKind::EVar: {
          const Formula* d = E.def(f->var);
          if (!d)
            throw BpwError("undefined extension variable " +
                           evar_name(f->var));
          if (!index.count(d)) stack.push_back({d, false});
          break;
        }
        case FKind::Dec:
        case FKind::Or:
        case FKind::And:
          if (!index.count(f->a)) stack.push_back({f->a, false});
          if (!index.count(f->b)) stack.push_back({f->b, false});
          break;
        default:
          break;
      }
      continue;
    }
    FlatNode n{f, 0, 0};
    switch (f->kind) {
      case FKind::EVar:
        n.a = index.at(E.def(f->var));
        break;
      case FKind::Dec:
      case FKind::Or:
      case FKind::And:
        n.a = index.at(f->a);
        n.b = index.at(f->b);
        break;
      default:
        break;
    }
    index.emplace(f, static_cast<uint32_t>(out.size()));
    out.push_back(n);
  }
  return out;
}

}  // namespace

bool evaluate(const Formula* f, const ExtAxiomSet& E, const Assignment& alpha) {
  std::unordered_map<const Formula*, bool> memo;
  return eval_rec(f, E, alpha, memo);
}

bool evaluate(const Query* q, const ExtAxiomSet& E, const Assignment& alpha) {
  switch (q->kind) {
    case QKind::Base: return evaluate(q->f, E, alpha);
    case QKind::Not: return !evaluate(q->a, E, alpha);
    case QKind::QOr: return evaluate(q->a, E, alpha) || evaluate(q->b, E, alpha);
    case QKind::QAnd: return evaluate(q->a, E, alpha) && evaluate(q->b, E, alpha);
  }
  return false;
}

uint64_t TruthTable::count_true() const {
  uint64_t n = 0, total = rows();
  for (uint64_t i = 0; i < bits.size(); ++i) {
    uint64_t w = bits[i];
    if ((i + 1) * 64 > total) w &= (total & 63) ? ((1ull << (total & 63)) - 1) : ~0ull;
    n += static_cast<uint64_t>(__builtin_popcountll(w));
  }
  return n;
}

TruthTable truth_table(const Formula* f, const ExtAxiomSet& E) {
  TruthTable t;
  t.vars = free_pvars(f, E);
  if (static_cast<int>(t.vars.size()) > max_enum_vars())
    throw BpwError("too many variables to enumerate (" +
                   std::to_string(t.vars.size()) + " > BPW_MAX_VARS)");
  std::vector<FlatNode> nodes = flatten(f, E);
  std::unordered_map<PVarId, uint32_t> vbit;
  for (uint32_t i = 0; i < t.vars.size(); ++i) vbit.emplace(t.vars[i], i);
  uint64_t rows = 1ull << t.vars.size();
  t.bits.assign((rows + 63) / 64, 0);
  std::vector<uint8_t> val(nodes.size());
  for (uint64_t m = 0; m < rows; ++m) {
    for (uint32_t i = 0; i < nodes.size(); ++i) {
      const FlatNode& n = nodes[i];
      switch (n.f->kind) {
        case FKind::C0: val[i] = 0; break;
        case FKind::C1: val[i] = 1; break;
        case FKind::PVar: val[i] = (m >> vbit.at(n.f->var)) & 1; break;
        case FKind::EVar: val[i] = val[n.a]; break;
        case FKind::Dec:
          val[i] = ((m >> vbit.at(n.f->var)) & 1) ? val[n.b] : val[n.a];
          break;
        case FKind::Or: val[i] = val[n.a] | val[n.b]; break;
        case FKind::And: val[i] = val[n.a] & val[n.b]; break;
      }
    }
    if (val.back()) t.bits[m >> 6] |= 1ull << (m & 63);
  }
  return t;
}

static void collect_q_vars(const Query* q, const ExtAxiomSet& E,
                           std::vector<PVarId>& vars) {
  switch (q->kind) {
    case QKind::Base: {
      const auto& v = free_pvars(q->f, E);
      vars.insert(vars.end(), v.begin(), v.end());
      return;
    }
    case QKind::Not:
      collect_q_vars(q->a, E, vars);
      return;
    case QKind::QOr:
    case QKind::QAnd:
      collect_q_vars(q->a, E, vars);
      collect_q_vars(q->b, E, vars);
      return;
  }
}

std::optional<std::vector<std::pair<PVarId, bool>>> sequent_countermodel(
    const Sequent& s, const ExtAxiomSet& E) {
  std::vector<PVarId> vars;
  for (const Query* q : s.left) collect_q_vars(q, E, vars);
  for (const Query* q : s.right) collect_q_vars(q, E, vars);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (static_cast<int>(vars.size()) > max_enum_vars())
    throw BpwError("too many variables to enumerate (" +
                   std::to_string(vars.size()) + " > BPW_MAX_VARS)");
  uint64_t rows = 1ull << vars.size();
  Assignment alpha;
  for (uint64_t m = 0; m < rows; ++m) {
    alpha.clear();
    for (uint32_t i = 0; i < vars.size(); ++i) alpha[vars[i]] = (m >> i) & 1;
    bool all_left = true;
    for (const Query* q : s.left)
      if (!evaluate(q, E, alpha)) {
        all_left = false;
        break;
      }
    if (!all_left) continue;
    bool some_right = false;
    for (const Query* q : s.right)
      if (evaluate(q, E, alpha)) {
        some_right = true;
        break;
      }
    if (!some_right) {
      std::vector<std::pair<PVarId, bool>> w;
      for (uint32_t i = 0; i < vars.size(); ++i)
        w.emplace_back(vars[i], (m >> i) & 1);
      return w;
    }
  }
  return std::nullopt;
}

bool sequent_valid(const Sequent& s, const ExtAxiomSet& E) {
  return !sequent_countermodel(s, E).has_value();
}

const Formula* unfold(const Formula* f, const ExtAxiomSet& E, uint64_t cap) {
  auto it = E.unfold_memo.find(f);
  if (it != E.unfold_memo.end()) return it->second;
  const Formula* r = nullptr;
  switch (f->kind) {
    case FKind::C0:
    case FKind::C1:
    case FKind::PVar:
      r = f;
      break;
    case FKind::EVar: {
      const Formula* d = E.def(f->var);
      if (!d) throw BpwError("undefined extension variable " + evar_name(f->var));
      r = unfold(d, E, cap);
      break;
    }
    case FKind::Dec:
      r = fdec(unfold(f->a, E, cap), f->var, unfold(f->b, E, cap));
      break;
    case FKind::Or:
    case FKind::And:
      throw BpwError("unfold is only defined for connective-free formulas");
  }
  if (r->symbols > cap)
    throw BpwError("unfolding exceeds " + std::to_string(cap) + " symbols");
  E.unfold_memo.emplace(f, r);
  return r;
}

namespace {

bool sim_rec(const Formula* a, const Formula* b, const ExtAxiomSet& E) {
  if (a == b) return true;
  uint64_t key = (static_cast<uint64_t>(a->id) << 32) | b->id;
  auto it = E.sim_memo.find(key);
  if (it != E.sim_memo.end()) return it->second > 0;
  E.sim_memo.emplace(key, 0);  // negative until proven; no cycles by rank
  bool r = false;
  if (!r && b->kind == FKind::Or)
    r = sim_rec(a, b->a, E) && sim_rec(a, b->b, E);
  if (!r && b->kind == FKind::EVar) {
    if (const Formula* d = E.def(b->var)) r = sim_rec(a, d, E);
  }
  if (!r && a->kind == FKind::Dec && b->kind == FKind::Dec && a->var == b->var)
    r = sim_rec(a->a, b->a, E) && sim_rec(a->b, b->b, E);
  if (!r && a->kind == FKind::Or)
    r = sim_rec(a->a, b, E) || sim_rec(a->b, b, E);
  if (!r && a->kind == FKind::EVar) {
    if (const Formula* d = E.def(a->var)) r = sim_rec(d, b, E);
  }
  E.sim_memo[key] = r ? 1 : 0;
  return r;
}

}  // namespace

bool check_simulation(const Formula* a, const Formula* b, const ExtAxiomSet& E) {
  return sim_rec(a, b, E);
}

}  // namespace bpw
