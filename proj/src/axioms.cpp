#include "bpw/axioms.hpp"

#include <algorithm>
#include <atomic>
#include <set>

namespace bpw {

namespace {
std::atomic<uint32_t> next_sid{1};
}  // namespace

AxiomSetBuilder::AxiomSetBuilder() : work_(std::make_shared<ExtAxiomSet>()) {
  work_->sid = next_sid.fetch_add(1);
}

AxiomSetBuilder::AxiomSetBuilder(const AxiomSetPtr& base)
    : work_(std::make_shared<ExtAxiomSet>()) {
  work_->sid = next_sid.fetch_add(1);
  if (base) {
    work_->defs = base->defs;
    work_->index = base->index;
  }
}

void AxiomSetBuilder::define(EVarId v, const Formula* body) {
  if (work_->has(v)) {
    if (work_->def(v) == body) return;
    throw BpwError("extension variable " + evar_name(v) + " redefined");
  }
  for (EVarId u : evars_of(body)) {
    if (!work_->has(u))
      throw BpwError("definition of " + evar_name(v) + " uses undefined " +
                     evar_name(u));
  }
  work_->index.emplace(v, static_cast<uint32_t>(work_->defs.size()));
  work_->defs.emplace_back(v, body);
}

AxiomSetPtr AxiomSetBuilder::snapshot() const {
  auto out = std::make_shared<ExtAxiomSet>();
  out->sid = next_sid.fetch_add(1);
  out->defs = work_->defs;
  out->index = work_->index;
  return out;
}

AxiomSetPtr empty_axioms() {
  static AxiomSetPtr e = std::make_shared<const ExtAxiomSet>();
  return e;
}

std::vector<EVarId> evars_of(const Formula* f) {
  std::vector<EVarId> out;
  std::set<const Formula*> seen;
  std::vector<const Formula*> stack{f};
  while (!stack.empty()) {
    const Formula* x = stack.back();
    stack.pop_back();
    if (!seen.insert(x).second) continue;
    switch (x->kind) {
      case FKind::EVar:
        out.push_back(x->var);
        break;
      case FKind::Dec:
      case FKind::Or:
      case FKind::And:
        stack.push_back(x->a);
        stack.push_back(x->b);
        break;
      default:
        break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

uint32_t formula_flags(const Formula* f, const ExtAxiomSet& E) {
  auto it = E.flags_memo.find(f);
  if (it != E.flags_memo.end()) return it->second;
  uint32_t r = 0;
  switch (f->kind) {
    case FKind::C0:
    case FKind::C1:
    case FKind::PVar:
      break;
    case FKind::EVar: {
      switch (evar_sort(f->var)) {
        case Sort::E: r = FF_SORT_E; break;
        case Sort::U: r = FF_SORT_U; break;
        case Sort::X: r = FF_SORT_X; break;
      }
      if (const Formula* d = E.def(f->var))
        r |= formula_flags(d, E);
      else
        r |= FF_UNDEF_EVAR;
      break;
    }
    case FKind::Dec: {
      uint32_t c = formula_flags(f->a, E) | formula_flags(f->b, E);
      r = c;
      if (c & FF_AND) r |= FF_AND_UNDER_DEC;
      if (c & FF_OR) r |= FF_OR_UNDER_DEC;
      break;
    }
    case FKind::Or:
      r = FF_OR | formula_flags(f->a, E) | formula_flags(f->b, E);
      break;
    case FKind::And: {
      uint32_t c = formula_flags(f->a, E) | formula_flags(f->b, E);
      r = FF_AND | c;
      if (c & FF_OR) r |= FF_OR_UNDER_AND;
      if (c & FF_SORT_X) r |= FF_X_UNDER_AND;
      break;
    }
  }
  E.flags_memo.emplace(f, r);
  return r;
}

namespace {
constexpr uint32_t kSorts = FF_SORT_E | FF_SORT_U | FF_SORT_X;
}

bool is_dt(const Formula* f, const ExtAxiomSet& E) {
  return (formula_flags(f, E) & (FF_OR | FF_AND | kSorts)) == 0;
}
bool is_ndt(const Formula* f, const ExtAxiomSet& E) {
  return (formula_flags(f, E) & (FF_AND | kSorts)) == 0;
}
bool is_edt(const Formula* f, const ExtAxiomSet& E) {
  uint32_t g = formula_flags(f, E);
  return (g & (FF_OR | FF_AND | FF_UNDEF_EVAR)) == 0 &&
         (g & kSorts & ~FF_SORT_E) == 0;
}
bool is_endt(const Formula* f, const ExtAxiomSet& E) {
  uint32_t g = formula_flags(f, E);
  return (g & (FF_AND | FF_UNDEF_EVAR)) == 0 && (g & kSorts & ~FF_SORT_E) == 0;
}
bool is_coendt(const Formula* f, const ExtAxiomSet& E) {
  uint32_t g = formula_flags(f, E);
  return (g & (FF_OR | FF_UNDEF_EVAR)) == 0 && (g & kSorts & ~FF_SORT_U) == 0;
}
bool is_eafdt(const Formula* f, const ExtAxiomSet& E) {
  uint32_t g = formula_flags(f, E);
  return (g & (FF_OR_UNDER_AND | FF_X_UNDER_AND | FF_UNDEF_EVAR)) == 0 &&
         (g & kSorts & ~(FF_SORT_U | FF_SORT_X)) == 0;
}
bool is_bool_edt(const Formula* f, const ExtAxiomSet& E) {
  uint32_t g = formula_flags(f, E);
  return (g & (FF_OR_UNDER_DEC | FF_AND_UNDER_DEC | FF_UNDEF_EVAR)) == 0 &&
         (g & kSorts & ~FF_SORT_E) == 0;
}
bool is_posbool_endt(const Formula* f, const ExtAxiomSet& E) {
  uint32_t g = formula_flags(f, E);
  return (g & (FF_AND_UNDER_DEC | FF_UNDEF_EVAR)) == 0 &&
         (g & kSorts & ~FF_SORT_E) == 0;
}

FormulaClass classify(const Formula* f, const ExtAxiomSet& E) {
  if (is_dt(f, E)) return FormulaClass::DT;
  if (is_ndt(f, E)) return FormulaClass::NDT;
  if (is_edt(f, E)) return FormulaClass::eDT;
  if (is_endt(f, E)) return FormulaClass::eNDT;
  if (is_coendt(f, E)) return FormulaClass::CoeNDT;
  if (is_eafdt(f, E)) return FormulaClass::EAFDT;
  return FormulaClass::Other;
}

const char* class_name(FormulaClass c) {
  switch (c) {
    case FormulaClass::DT: return "DT";
    case FormulaClass::NDT: return "NDT";
    case FormulaClass::eDT: return "eDT";
    case FormulaClass::eNDT: return "eNDT";
    case FormulaClass::CoeNDT: return "co-eNDT";
    case FormulaClass::EAFDT: return "eEADT";
    case FormulaClass::Other: return "other";
  }
  return "other";
}

ValidationReport validate_axioms(const ExtAxiomSet& E) {
  ValidationReport rep;
  auto fail = [&rep](std::string msg) {
    rep.ok = false;
    rep.error = std::move(msg);
    return rep;
  };
  for (uint32_t i = 0; i < E.defs.size(); ++i) {
    auto [v, body] = E.defs[i];
    if (E.idx(v) != static_cast<int>(i))
      return fail("axiom index inconsistent for " + evar_name(v));
    for (EVarId u : evars_of(body)) {
      int j = E.idx(u);
      if (j < 0)
        return fail("definition of " + evar_name(v) + " uses undefined " +
                    evar_name(u));
      if (j >= static_cast<int>(i))
        return fail("definition of " + evar_name(v) +
                    " is not well-founded: uses " + evar_name(u));
      Sort sv = evar_sort(v), su = evar_sort(u);
      bool ok_use = (sv == Sort::E && su == Sort::E) ||
                    (sv == Sort::U && su == Sort::U) ||
                    (sv == Sort::X && (su == Sort::U || su == Sort::X));
      if (!ok_use)
        return fail("definition of " + evar_name(v) + " uses " + evar_name(u) +
                    " of incompatible sort");
    }
    uint32_t g = formula_flags(body, E);
    switch (evar_sort(v)) {
      case Sort::E:
        if (g & FF_AND)
          return fail("body of " + evar_name(v) + " contains a conjunction");
        break;
      case Sort::U:
        if (g & FF_OR)
          return fail("body of " + evar_name(v) + " contains a disjunction");
        break;
      case Sort::X:
        if (g & (FF_OR_UNDER_AND | FF_X_UNDER_AND))
          return fail("body of " + evar_name(v) +
                      " is not in the exists-forall fragment");
        break;
    }
  }
  return rep;
}

std::vector<const Formula*> e_predecessors(const Formula* f,
                                           const ExtAxiomSet& E) {
  switch (f->kind) {
    case FKind::Dec:
    case FKind::Or:
    case FKind::And:
      return {f->a, f->b};
    case FKind::EVar:
      if (const Formula* d = E.def(f->var)) return {d};
      return {};
    default:
      return {};
  }
}

const std::vector<PVarId>& free_pvars(const Formula* f, const ExtAxiomSet& E) {
  auto it = E.fv_memo.find(f);
  if (it != E.fv_memo.end()) return it->second;
  std::vector<PVarId> out;
  switch (f->kind) {
    case FKind::C0:
    case FKind::C1:
      break;
    case FKind::PVar:
      out.push_back(f->var);
      break;
    case FKind::EVar:
      if (const Formula* d = E.def(f->var)) out = free_pvars(d, E);
      break;
    case FKind::Dec: {
      out = free_pvars(f->a, E);
      const auto& rb = free_pvars(f->b, E);
      out.insert(out.end(), rb.begin(), rb.end());
      out.push_back(f->var);
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      break;
    }
    case FKind::Or:
    case FKind::And: {
      out = free_pvars(f->a, E);
      const auto& rb = free_pvars(f->b, E);
      out.insert(out.end(), rb.begin(), rb.end());
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      break;
    }
  }
  return E.fv_memo.emplace(f, std::move(out)).first->second;
}

}  // namespace bpw
