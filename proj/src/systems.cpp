#include "bpw/systems.hpp"

namespace bpw {

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::Id: return "id";
    case Rule::Cut: return "cut";
    case Rule::ExL: return "ex-l";
    case Rule::ExR: return "ex-r";
    case Rule::WL: return "w-l";
    case Rule::WR: return "w-r";
    case Rule::CL: return "c-l";
    case Rule::CR: return "c-r";
    case Rule::ZeroL: return "0-l";
    case Rule::ZeroR: return "0-r";
    case Rule::OneL: return "1-l";
    case Rule::OneR: return "1-r";
    case Rule::OrL: return "or-l";
    case Rule::OrR: return "or-r";
    case Rule::DecL: return "dec-l";
    case Rule::DecR: return "dec-r";
    case Rule::NotL: return "not-l";
    case Rule::NotR: return "not-r";
    case Rule::AndL: return "and-l";
    case Rule::AndR: return "and-r";
    case Rule::Ext: return "ext";
  }
  return "?";
}

std::optional<Rule> rule_from_name(const std::string& name) {
  static const std::pair<const char*, Rule> table[] = {
      {"id", Rule::Id},       {"cut", Rule::Cut},   {"ex-l", Rule::ExL},
      {"ex-r", Rule::ExR},    {"w-l", Rule::WL},    {"w-r", Rule::WR},
      {"c-l", Rule::CL},      {"c-r", Rule::CR},    {"0-l", Rule::ZeroL},
      {"0-r", Rule::ZeroR},   {"1-l", Rule::OneL},  {"1-r", Rule::OneR},
      {"or-l", Rule::OrL},    {"or-r", Rule::OrR},  {"dec-l", Rule::DecL},
      {"dec-r", Rule::DecR},  {"not-l", Rule::NotL},{"not-r", Rule::NotR},
      {"and-l", Rule::AndL},  {"and-r", Rule::AndR},{"ext", Rule::Ext},
  };
  for (auto& [n, r] : table)
    if (name == n) return r;
  return std::nullopt;
}

const char* system_name(System s) {
  switch (s) {
    case System::LDT: return "ldt";
    case System::LNDT: return "lndt";
    case System::eLDT: return "eldt";
    case System::eLNDT: return "elndt";
    case System::LK_eLDT: return "lk-eldt";
    case System::LKpos_eLNDT: return "lkpos-elndt";
    case System::co_eLNDT: return "co-elndt";
    case System::eL_EA_DT: return "eleadt";
  }
  return "?";
}

std::optional<System> system_from_name(const std::string& name) {
  static const std::pair<const char*, System> table[] = {
      {"ldt", System::LDT},
      {"lndt", System::LNDT},
      {"eldt", System::eLDT},
      {"elndt", System::eLNDT},
      {"lk-eldt", System::LK_eLDT},
      {"lkpos-elndt", System::LKpos_eLNDT},
      {"co-elndt", System::co_eLNDT},
      {"eleadt", System::eL_EA_DT},
  };
  for (auto& [n, s] : table)
    if (name == n) return s;
  return std::nullopt;
}

bool system_allows(System s, Rule r) {
  bool has_or = false, has_and = false, has_not = false, has_ext = false;
  switch (s) {
    case System::LDT: break;
    case System::LNDT: has_or = true; break;
    case System::eLDT: has_ext = true; break;
    case System::eLNDT: has_or = has_ext = true; break;
    case System::LK_eLDT: has_or = has_and = has_not = has_ext = true; break;
    case System::LKpos_eLNDT: has_or = has_and = has_ext = true; break;
    case System::co_eLNDT: has_and = has_ext = true; break;
    case System::eL_EA_DT: has_or = has_and = has_ext = true; break;
  }
  switch (r) {
    case Rule::OrL:
    case Rule::OrR:
      return has_or;
    case Rule::AndL:
    case Rule::AndR:
      return has_and;
    case Rule::NotL:
    case Rule::NotR:
      return has_not;
    case Rule::Ext:
      return has_ext;
    default:
      return true;
  }
}

namespace {

// Query-tier shape: no `not` below q, every base formula passes `base_ok`.
template <typename Pred>
bool positive_query(const Query* q, Pred base_ok) {
  switch (q->kind) {
    case QKind::Base:
      return base_ok(q->f);
    case QKind::Not:
      return false;
    case QKind::QOr:
    case QKind::QAnd:
      return positive_query(q->a, base_ok) && positive_query(q->b, base_ok);
  }
  return false;
}

template <typename Pred>
bool any_query(const Query* q, Pred base_ok) {
  switch (q->kind) {
    case QKind::Base:
      return base_ok(q->f);
    case QKind::Not:
      return any_query(q->a, base_ok);
    case QKind::QOr:
    case QKind::QAnd:
      return any_query(q->a, base_ok) && any_query(q->b, base_ok);
  }
  return false;
}

}  // namespace

bool system_allows_member(System s, const Query* q, const ExtAxiomSet& E) {
  switch (s) {
    case System::LDT:
      return q->kind == QKind::Base && is_dt(q->f, E);
    case System::LNDT:
      return q->kind == QKind::Base && is_ndt(q->f, E);
    case System::eLDT:
      return q->kind == QKind::Base && is_edt(q->f, E);
    case System::eLNDT:
      return q->kind == QKind::Base && is_endt(q->f, E);
    case System::LK_eLDT:
      // Boolean combinations of eDT formulas, at either tier.
      return any_query(q, [&E](const Formula* f) { return is_bool_edt(f, E); });
    case System::LKpos_eLNDT:
      return positive_query(
          q, [&E](const Formula* f) { return is_posbool_endt(f, E); });
    case System::co_eLNDT:
      return q->kind == QKind::Base && is_coendt(q->f, E);
    case System::eL_EA_DT:
      return q->kind == QKind::Base && is_eafdt(q->f, E);
  }
  return false;
}

}  // namespace bpw
