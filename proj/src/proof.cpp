#include "bpw/proof.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bpw/eval.hpp"
#include "bpw/parse.hpp"

namespace bpw {

using nlohmann::json;

namespace {

size_t premise_count(Rule r) {
  switch (r) {
    case Rule::Id:
    case Rule::Ext:
    case Rule::ZeroL:
    case Rule::OneR:
      return 0;
    case Rule::Cut:
    case Rule::OrL:
    case Rule::AndR:
    case Rule::DecL:
    case Rule::DecR:
      return 2;
    default:
      return 1;
  }
}

bool ms_eq(const Cedent& x, const Cedent& y) {
  if (x.size() != y.size()) return false;
  return cedent_minus(x, y).empty();
}

// to == from + [x] as multisets; returns x.
const Query* one_added(const Cedent& from, const Cedent& to) {
  if (to.size() != from.size() + 1) return nullptr;
  Cedent extra = cedent_minus(to, from);
  if (extra.size() != 1) return nullptr;
  if (!cedent_minus(from, to).empty()) return nullptr;
  return extra[0];
}

// to == from \ {m} + adds as multisets.
bool replaced(const Cedent& from, const Query* m, const Cedent& adds,
              const Cedent& to) {
  Cedent want = cedent_minus(from, {m});
  want.insert(want.end(), adds.begin(), adds.end());
  return ms_eq(want, to);
}

Cedent drop_last(const Cedent& c) { return Cedent(c.begin(), c.end() - 1); }

Cedent append(Cedent c, std::initializer_list<const Query*> xs) {
  c.insert(c.end(), xs.begin(), xs.end());
  return c;
}

std::vector<const Query*> distinct_members(const Cedent& c,
                                           bool (*pred)(const Query*)) {
  std::vector<const Query*> out;
  for (const Query* q : c)
    if (pred(q) && std::find(out.begin(), out.end(), q) == out.end())
      out.push_back(q);
  return out;
}

struct LineCheck {
  const Proof& pf;
  size_t i;
  Mode mode;
  const ProofLine& L;
  std::string err;

  LineCheck(const Proof& p, size_t idx, Mode m)
      : pf(p), i(idx), mode(m), L(p.lines[idx]) {}

  bool fail(const std::string& msg) {
    err = msg;
    return false;
  }

  const Sequent& prem(size_t k) const { return pf.lines[L.prem[k]].seq; }

  bool exact(const Cedent& x, const Cedent& y) { return x == y; }

  // Dispatch to the per-rule check; true when the line is justified.
  bool run();
};

bool LineCheck::run() {
  const Sequent& s = L.seq;
  const size_t need = premise_count(L.rule);
  if (L.prem.size() != need)
    return fail(std::string(rule_name(L.rule)) + " expects " +
                std::to_string(need) + " premises");
  for (uint32_t p : L.prem)
    if (p >= i) return fail("premise refers to a later line");

  const bool strict = mode == Mode::Strict;

  switch (L.rule) {
    case Rule::Id: {
      if (s.left.size() == 1 && s.right.size() == 1 && s.left[0] == s.right[0])
        return true;
      return fail("id line must be A |- A");
    }
    case Rule::ZeroL: {
      if (s.left.size() == 1 && q_is_c0(s.left[0]) && s.right.empty())
        return true;
      return fail("0-l line must be 0 |-");
    }
    case Rule::OneR: {
      if (s.right.size() == 1 && q_is_c1(s.right[0]) && s.left.empty())
        return true;
      return fail("1-r line must be |- 1");
    }
    case Rule::Ext: {
      if (!pf.axioms) return fail("ext line without an axiom set");
      if (!L.ext) return fail("ext line missing its variable annotation");
      const Formula* body = pf.axioms->def(L.ext->var);
      if (!body)
        return fail("ext line for undefined variable " + evar_name(L.ext->var));
      const Query* ev = qbase(fevar(L.ext->var));
      const Query* bq = qbase(body);
      const Query* want_l = L.ext->left_to_right ? ev : bq;
      const Query* want_r = L.ext->left_to_right ? bq : ev;
      if (s.left.size() == 1 && s.right.size() == 1 && s.left[0] == want_l &&
          s.right[0] == want_r)
        return true;
      return fail("ext line does not match the axiom instance");
    }
    case Rule::OneL: {
      const Sequent& P = prem(0);
      if (strict) {
        if (!s.left.empty() && q_is_c1(s.left.back()) &&
            exact(drop_last(s.left), P.left) && exact(s.right, P.right))
          return true;
      } else {
        const Query* x = one_added(P.left, s.left);
        if (x && q_is_c1(x) && ms_eq(P.right, s.right)) return true;
      }
      return fail("1-l must add a 1 on the left");
    }
    case Rule::ZeroR: {
      const Sequent& P = prem(0);
      if (strict) {
        if (!s.right.empty() && q_is_c0(s.right.back()) &&
            exact(drop_last(s.right), P.right) && exact(s.left, P.left))
          return true;
      } else {
        const Query* x = one_added(P.right, s.right);
        if (x && q_is_c0(x) && ms_eq(P.left, s.left)) return true;
      }
      return fail("0-r must add a 0 on the right");
    }
    case Rule::WL: {
      const Sequent& P = prem(0);
      if (strict) {
        if (!s.left.empty() && exact(drop_last(s.left), P.left) &&
            exact(s.right, P.right))
          return true;
      } else {
        if (one_added(P.left, s.left) && ms_eq(P.right, s.right)) return true;
      }
      return fail("w-l must add one formula on the left");
    }
    case Rule::WR: {
      const Sequent& P = prem(0);
      if (strict) {
        if (!s.right.empty() && exact(drop_last(s.right), P.right) &&
            exact(s.left, P.left))
          return true;
      } else {
        if (one_added(P.right, s.right) && ms_eq(P.left, s.left)) return true;
      }
      return fail("w-r must add one formula on the right");
    }
    case Rule::CL: {
      const Sequent& P = prem(0);
      if (strict) {
        if (!s.left.empty() && P.left.size() == s.left.size() + 1 &&
            exact(P.left, append(s.left, {s.left.back()})) &&
            exact(s.right, P.right))
          return true;
      } else {
        const Query* x = one_added(s.left, P.left);
        if (x && cedent_contains(s.left, x) && ms_eq(P.right, s.right))
          return true;
      }
      return fail("c-l must remove one duplicate on the left");
    }
    case Rule::CR: {
      const Sequent& P = prem(0);
      if (strict) {
        if (!s.right.empty() && P.right.size() == s.right.size() + 1 &&
            exact(P.right, append(s.right, {s.right.back()})) &&
            exact(s.left, P.left))
          return true;
      } else {
        const Query* x = one_added(s.right, P.right);
        if (x && cedent_contains(s.right, x) && ms_eq(P.left, s.left))
          return true;
      }
      return fail("c-r must remove one duplicate on the right");
    }
    case Rule::ExL: {
      const Sequent& P = prem(0);
      if (strict) {
        if (!L.pos) return fail("strict ex-l needs a position");
        int k = *L.pos;
        if (k < 0 || k + 1 >= static_cast<int>(P.left.size()))
          return fail("ex-l position out of range");
        Cedent w = P.left;
        std::swap(w[k], w[k + 1]);
        if (exact(s.left, w) && exact(s.right, P.right)) return true;
      } else {
        if (ms_eq(P.left, s.left) && ms_eq(P.right, s.right)) return true;
      }
      return fail("ex-l must permute the left cedent");
    }
    case Rule::ExR: {
      const Sequent& P = prem(0);
      if (strict) {
        if (!L.pos) return fail("strict ex-r needs a position");
        int k = *L.pos;
        if (k < 0 || k + 1 >= static_cast<int>(P.right.size()))
          return fail("ex-r position out of range");
        Cedent w = P.right;
        std::swap(w[k], w[k + 1]);
        if (exact(s.right, w) && exact(s.left, P.left)) return true;
      } else {
        if (ms_eq(P.left, s.left) && ms_eq(P.right, s.right)) return true;
      }
      return fail("ex-r must permute the right cedent");
    }
    case Rule::Cut: {
      const Sequent& P0 = prem(0);  // Gamma |- Delta, A
      const Sequent& P1 = prem(1);  // Gamma, A |- Delta
      if (strict) {
        if (P0.right.empty() || P1.left.empty())
          return fail("cut premises lack the cut formula");
        const Query* A = P0.right.back();
        if (P1.left.back() == A && exact(P0.left, s.left) &&
            exact(drop_last(P0.right), s.right) &&
            exact(drop_last(P1.left), s.left) && exact(P1.right, s.right))
          return true;
      } else {
        const Query* A = one_added(s.right, P0.right);
        if (A && ms_eq(P0.left, s.left) &&
            ms_eq(P1.left, append(s.left, {A})) && ms_eq(P1.right, s.right))
          return true;
      }
      return fail("cut premises do not fit Gamma |- Delta, A and Gamma, A |- Delta");
    }
    case Rule::OrL: {
      const Sequent& P0 = prem(0);
      const Sequent& P1 = prem(1);
      if (strict) {
        if (s.left.empty() || !q_is_or(s.left.back()))
          return fail("or-l principal must end the left cedent");
        const Query* m = s.left.back();
        Cedent g = drop_last(s.left);
        if (exact(P0.left, append(g, {q_left(m)})) &&
            exact(P1.left, append(g, {q_right(m)})) &&
            exact(P0.right, s.right) && exact(P1.right, s.right))
          return true;
      } else {
        for (const Query* m : distinct_members(s.left, q_is_or))
          if (replaced(s.left, m, {q_left(m)}, P0.left) &&
              replaced(s.left, m, {q_right(m)}, P1.left) &&
              ms_eq(P0.right, s.right) && ms_eq(P1.right, s.right))
            return true;
      }
      return fail("no disjunction on the left matches or-l");
    }
    case Rule::OrR: {
      const Sequent& P = prem(0);
      if (strict) {
        if (s.right.empty() || !q_is_or(s.right.back()))
          return fail("or-r principal must end the right cedent");
        const Query* m = s.right.back();
        if (exact(P.right, append(drop_last(s.right), {q_left(m), q_right(m)})) &&
            exact(P.left, s.left))
          return true;
      } else {
        for (const Query* m : distinct_members(s.right, q_is_or))
          if (replaced(s.right, m, {q_left(m), q_right(m)}, P.right) &&
              ms_eq(P.left, s.left))
            return true;
      }
      return fail("no disjunction on the right matches or-r");
    }
    case Rule::AndL: {
      const Sequent& P = prem(0);
      if (strict) {
        if (s.left.empty() || !q_is_and(s.left.back()))
          return fail("and-l principal must end the left cedent");
        const Query* m = s.left.back();
        if (exact(P.left, append(drop_last(s.left), {q_left(m), q_right(m)})) &&
            exact(P.right, s.right))
          return true;
      } else {
        for (const Query* m : distinct_members(s.left, q_is_and))
          if (replaced(s.left, m, {q_left(m), q_right(m)}, P.left) &&
              ms_eq(P.right, s.right))
            return true;
      }
      return fail("no conjunction on the left matches and-l");
    }
    case Rule::AndR: {
      const Sequent& P0 = prem(0);
      const Sequent& P1 = prem(1);
      if (strict) {
        if (s.right.empty() || !q_is_and(s.right.back()))
          return fail("and-r principal must end the right cedent");
        const Query* m = s.right.back();
        Cedent d = drop_last(s.right);
        if (exact(P0.right, append(d, {q_left(m)})) &&
            exact(P1.right, append(d, {q_right(m)})) &&
            exact(P0.left, s.left) && exact(P1.left, s.left))
          return true;
      } else {
        for (const Query* m : distinct_members(s.right, q_is_and))
          if (replaced(s.right, m, {q_left(m)}, P0.right) &&
              replaced(s.right, m, {q_right(m)}, P1.right) &&
              ms_eq(P0.left, s.left) && ms_eq(P1.left, s.left))
            return true;
      }
      return fail("no conjunction on the right matches and-r");
    }
    case Rule::NotL: {
      const Sequent& P = prem(0);
      if (strict) {
        if (s.left.empty() || !q_is_not(s.left.back()))
          return fail("not-l principal must end the left cedent");
        const Query* m = s.left.back();
        if (exact(P.left, drop_last(s.left)) &&
            exact(P.right, append(s.right, {m->a})))
          return true;
      } else {
        for (const Query* m : distinct_members(s.left, q_is_not))
          if (replaced(s.left, m, {}, P.left) &&
              ms_eq(P.right, append(s.right, {m->a})))
            return true;
      }
      return fail("no negation on the left matches not-l");
    }
    case Rule::NotR: {
      const Sequent& P = prem(0);
      if (strict) {
        if (s.right.empty() || !q_is_not(s.right.back()))
          return fail("not-r principal must end the right cedent");
        const Query* m = s.right.back();
        if (exact(P.right, drop_last(s.right)) &&
            exact(P.left, append(s.left, {m->a})))
          return true;
      } else {
        for (const Query* m : distinct_members(s.right, q_is_not))
          if (replaced(s.right, m, {}, P.right) &&
              ms_eq(P.left, append(s.left, {m->a})))
            return true;
      }
      return fail("no negation on the right matches not-r");
    }
    case Rule::DecL: {
      const Sequent& P0 = prem(0);  // Gamma, A |- Delta, p
      const Sequent& P1 = prem(1);  // Gamma, p, B |- Delta
      if (strict) {
        if (s.left.empty() || !q_is_dec(s.left.back()))
          return fail("dec-l principal must end the left cedent");
        const Query* m = s.left.back();
        const Query* p = qbase(fpvar(q_dec_var(m)));
        Cedent g = drop_last(s.left);
        if (exact(P0.left, append(g, {q_dec0(m)})) &&
            exact(P0.right, append(s.right, {p})) &&
            exact(P1.left, append(g, {p, q_dec1(m)})) &&
            exact(P1.right, s.right))
          return true;
      } else {
        for (const Query* m : distinct_members(s.left, q_is_dec)) {
          const Query* p = qbase(fpvar(q_dec_var(m)));
          if (replaced(s.left, m, {q_dec0(m)}, P0.left) &&
              ms_eq(P0.right, append(s.right, {p})) &&
              replaced(s.left, m, {p, q_dec1(m)}, P1.left) &&
              ms_eq(P1.right, s.right))
            return true;
        }
      }
      return fail("no decision on the left matches dec-l");
    }
    case Rule::DecR: {
      const Sequent& P0 = prem(0);  // Gamma |- Delta, A, p
      const Sequent& P1 = prem(1);  // Gamma, p |- Delta, B
      if (strict) {
        if (s.right.empty() || !q_is_dec(s.right.back()))
          return fail("dec-r principal must end the right cedent");
        const Query* m = s.right.back();
        const Query* p = qbase(fpvar(q_dec_var(m)));
        Cedent d = drop_last(s.right);
        if (exact(P0.left, s.left) &&
            exact(P0.right, append(d, {q_dec0(m), p})) &&
            exact(P1.left, append(s.left, {p})) &&
            exact(P1.right, append(d, {q_dec1(m)})))
          return true;
      } else {
        for (const Query* m : distinct_members(s.right, q_is_dec)) {
          const Query* p = qbase(fpvar(q_dec_var(m)));
          if (ms_eq(P0.left, s.left) &&
              replaced(s.right, m, {q_dec0(m), p}, P0.right) &&
              ms_eq(P1.left, append(s.left, {p})) &&
              replaced(s.right, m, {q_dec1(m)}, P1.right))
            return true;
        }
      }
      return fail("no decision on the right matches dec-r");
    }
  }
  return fail("unknown rule");
}

}  // namespace

CheckResult check_proof(const Proof& pf, Mode mode) {
  CheckResult res;
  if (pf.lines.empty()) {
    res.ok = false;
    res.error = "proof has no lines";
    return res;
  }
  const ExtAxiomSet& E = pf.axioms ? *pf.axioms : *empty_axioms();
  for (size_t i = 0; i < pf.lines.size(); ++i) {
    const ProofLine& L = pf.lines[i];
    if (!system_allows(pf.system, L.rule)) {
      res = {false, i, std::string(rule_name(L.rule)) + " is not a rule of " +
                           system_name(pf.system)};
      return res;
    }
    for (const Cedent* c : {&L.seq.left, &L.seq.right})
      for (const Query* q : *c)
        if (!system_allows_member(pf.system, q, E)) {
          res = {false, i,
                 "cedent member " + render(q) + " is outside " +
                     system_name(pf.system)};
          return res;
        }
    LineCheck lc(pf, i, mode);
    if (!lc.run()) {
      res = {false, i, lc.err};
      return res;
    }
  }
  return res;
}

CheckResult check_lines_semantically(const Proof& pf) {
  CheckResult res;
  const ExtAxiomSet& E = pf.axioms ? *pf.axioms : *empty_axioms();
  for (size_t i = 0; i < pf.lines.size(); ++i) {
    if (!sequent_valid(pf.lines[i].seq, E)) {
      res = {false, i, "line is not valid: " + render(pf.lines[i].seq)};
      return res;
    }
  }
  return res;
}

ProofSize proof_size(const Proof& pf) {
  ProofSize ps;
  ps.lines = pf.lines.size();
  std::set<std::vector<uint32_t>> seen;
  for (const ProofLine& L : pf.lines) {
    Sequent c = canonical(L.seq);
    std::vector<uint32_t> key;
    key.reserve(c.left.size() + c.right.size() + 1);
    for (const Query* q : c.left) key.push_back(q->id);
    key.push_back(UINT32_MAX);
    for (const Query* q : c.right) key.push_back(q->id);
    if (seen.insert(std::move(key)).second) {
      ++ps.distinct;
      ps.symbols += sequent_symbols(c);
    }
  }
  return ps;
}

namespace {

// True when `small` is a prefix of `large`'s definition list.
bool extends(const ExtAxiomSet& large, const ExtAxiomSet& small) {
  if (small.defs.size() > large.defs.size()) return false;
  for (size_t i = 0; i < small.defs.size(); ++i)
    if (small.defs[i] != large.defs[i]) return false;
  return true;
}

}  // namespace

Proof compose(const Proof& head, const Proof& tail) {
  if (head.system != tail.system)
    throw BpwError("cannot compose proofs from different systems");
  const ExtAxiomSet& he = head.axioms ? *head.axioms : *empty_axioms();
  const ExtAxiomSet& te = tail.axioms ? *tail.axioms : *empty_axioms();
  Proof out = head;
  if (extends(he, te)) {
    // keep head's set
  } else if (extends(te, he)) {
    out.axioms = tail.axioms;
  } else {
    throw BpwError("cannot compose proofs over unrelated axiom sets");
  }
  uint32_t off = static_cast<uint32_t>(head.lines.size());
  for (const ProofLine& L : tail.lines) {
    ProofLine c = L;
    for (uint32_t& p : c.prem) p += off;
    out.lines.push_back(std::move(c));
  }
  return out;
}

std::string write_proof_json(const Proof& pf, const std::string& axioms_path) {
  const ExtAxiomSet& E = pf.axioms ? *pf.axioms : *empty_axioms();
  RenderNames rn = render_names_for(E);
  json arr = json::array();
  json hdr;
  hdr["system"] = system_name(pf.system);
  hdr["axioms"] = axioms_path.empty() ? render_axioms(E) : axioms_path;
  arr.push_back(std::move(hdr));
  for (size_t i = 0; i < pf.lines.size(); ++i) {
    const ProofLine& L = pf.lines[i];
    json o;
    o["id"] = i;
    o["seq"] = render(L.seq, &rn);
    o["rule"] = rule_name(L.rule);
    o["prem"] = L.prem;
    if (L.pos || L.ext) {
      json aux = json::object();
      if (L.pos) aux["pos"] = *L.pos;
      if (L.ext) {
        auto it = rn.map.find(L.ext->var);
        aux["ext"] = {
            {"var", it != rn.map.end() ? it->second : evar_name(L.ext->var)},
            {"dir", L.ext->left_to_right ? "lr" : "rl"}};
      }
      o["aux"] = std::move(aux);
    }
    arr.push_back(std::move(o));
  }
  return arr.dump(1);
}

Proof read_proof_json(const std::string& text, const std::string& base_dir) {
  json arr;
  try {
    arr = json::parse(text);
  } catch (const json::exception& e) {
    throw BpwError(std::string("bad proof JSON: ") + e.what());
  }
  if (!arr.is_array() || arr.empty() || !arr[0].is_object())
    throw BpwError("proof JSON must be an array starting with a header");
  const json& hdr = arr[0];
  Proof pf;
  auto sys = system_from_name(hdr.value("system", ""));
  if (!sys) throw BpwError("proof header has no valid \"system\"");
  pf.system = *sys;
  std::string ax = hdr.value("axioms", "");
  if (ax.find(":=") != std::string::npos || ax.find('\n') != std::string::npos) {
    pf.axioms = parse_axioms(ax);
  } else if (ax.empty()) {
    pf.axioms = empty_axioms();
  } else {
    std::string path = ax;
    if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
    std::ifstream in(path);
    if (!in) throw BpwError("cannot open axiom file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    pf.axioms = parse_axioms(ss.str());
  }
  for (size_t i = 1; i < arr.size(); ++i) {
    const json& o = arr[i];
    if (!o.is_object()) throw BpwError("proof line must be an object");
    if (o.value("id", static_cast<int64_t>(-1)) !=
        static_cast<int64_t>(i - 1))
      throw BpwError("proof line ids must be consecutive from 0");
    ProofLine L;
    L.seq = parse_sequent(o.value("seq", ""));
    auto r = rule_from_name(o.value("rule", ""));
    if (!r) throw BpwError("unknown rule in proof line " + std::to_string(i - 1));
    L.rule = *r;
    if (o.contains("prem"))
      for (const json& p : o.at("prem"))
        L.prem.push_back(p.get<uint32_t>());
    if (o.contains("aux")) {
      const json& aux = o.at("aux");
      if (aux.contains("pos")) L.pos = aux.at("pos").get<int>();
      if (aux.contains("ext")) {
        ExtAux ea;
        std::string nm = aux.at("ext").value("var", "");
        if (evar_name_reserved(nm))
          throw BpwError("'" + nm + "' is a reserved generated name");
        ea.var = evar_named(nm);
        ea.left_to_right = aux.at("ext").value("dir", "lr") == "lr";
        L.ext = ea;
      }
    }
    pf.lines.push_back(std::move(L));
  }
  return pf;
}

}  // namespace bpw
