#include "bpw/builder.hpp"

#include <algorithm>

#include "bpw/parse.hpp"

namespace bpw {

namespace {

std::vector<uint32_t> canonical_ids(const Sequent& s) {
  Sequent c = canonical(s);
  std::vector<uint32_t> key;
  key.reserve(c.left.size() + c.right.size() + 1);
  for (const Query* q : c.left) key.push_back(q->id);
  key.push_back(UINT32_MAX);
  for (const Query* q : c.right) key.push_back(q->id);
  return key;
}

bool ms_eq(const Cedent& x, const Cedent& y) {
  return x.size() == y.size() && cedent_minus(x, y).empty();
}

Cedent remove_one(const Cedent& c, const Query* m) {
  return cedent_minus(c, {m});
}

Cedent with(Cedent c, std::initializer_list<const Query*> xs) {
  c.insert(c.end(), xs.begin(), xs.end());
  return c;
}

}  // namespace

ProofBuilder::ProofBuilder(System sys, AxiomSetPtr base)
    : sys_(sys), axb_(base) {}

uint32_t ProofBuilder::find(const Sequent& s) const {
  auto it = index_.find(canonical_ids(s));
  return it == index_.end() ? kNoLine : it->second;
}

uint32_t ProofBuilder::line(const Sequent& s) const {
  uint32_t i = find(s);
  if (i == kNoLine) throw BpwError("no line proves " + render(s));
  return i;
}

uint32_t ProofBuilder::push(Sequent s, Rule r, std::vector<uint32_t> prem,
                            std::optional<ExtAux> ext) {
  std::vector<uint32_t> key = canonical_ids(s);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  for (uint32_t p : prem)
    if (p >= lines_.size()) throw BpwError("builder premise out of range");
  uint32_t id = static_cast<uint32_t>(lines_.size());
  ProofLine L;
  L.seq = std::move(s);
  L.rule = r;
  L.prem = std::move(prem);
  L.ext = ext;
  lines_.push_back(std::move(L));
  index_.emplace(std::move(key), id);
  return id;
}

void ProofBuilder::bad(const char* rule, uint32_t p0, uint32_t p1) const {
  std::string msg = std::string("builder: ") + rule +
                    " premises do not fit: " + render(lines_[p0].seq);
  if (p1 != kNoLine) msg += "  /  " + render(lines_[p1].seq);
  throw BpwError(msg);
}

uint32_t ProofBuilder::add(Sequent seq, Rule r, std::vector<uint32_t> prem,
                           std::optional<ExtAux> ext) {
  return push(std::move(seq), r, std::move(prem), ext);
}

uint32_t ProofBuilder::id_line(const Query* a) {
  return push(Sequent{{a}, {a}}, Rule::Id, {}, std::nullopt);
}

uint32_t ProofBuilder::zero_l() {
  return push(Sequent{{qbase(f0())}, {}}, Rule::ZeroL, {}, std::nullopt);
}

uint32_t ProofBuilder::one_r() {
  return push(Sequent{{}, {qbase(f1())}}, Rule::OneR, {}, std::nullopt);
}

uint32_t ProofBuilder::ext_line(EVarId v, bool left_to_right) {
  const Formula* body = aset().def(v);
  if (!body)
    throw BpwError("builder: ext line for undefined variable " + evar_name(v));
  const Query* ev = qbase(fevar(v));
  const Query* bq = qbase(body);
  Sequent s = left_to_right ? Sequent{{ev}, {bq}} : Sequent{{bq}, {ev}};
  return push(std::move(s), Rule::Ext, {}, ExtAux{v, left_to_right});
}

uint32_t ProofBuilder::wl(uint32_t p, const Query* m) {
  Sequent s = lines_.at(p).seq;
  s.left.push_back(m);
  return push(std::move(s), Rule::WL, {p}, std::nullopt);
}

uint32_t ProofBuilder::wr(uint32_t p, const Query* m) {
  Sequent s = lines_.at(p).seq;
  s.right.push_back(m);
  return push(std::move(s), Rule::WR, {p}, std::nullopt);
}

uint32_t ProofBuilder::cl(uint32_t p, const Query* m) {
  const Sequent& ps = lines_.at(p).seq;
  if (std::count(ps.left.begin(), ps.left.end(), m) < 2) bad("c-l", p, kNoLine);
  Sequent s{remove_one(ps.left, m), ps.right};
  return push(std::move(s), Rule::CL, {p}, std::nullopt);
}

uint32_t ProofBuilder::cr(uint32_t p, const Query* m) {
  const Sequent& ps = lines_.at(p).seq;
  if (std::count(ps.right.begin(), ps.right.end(), m) < 2)
    bad("c-r", p, kNoLine);
  Sequent s{ps.left, remove_one(ps.right, m)};
  return push(std::move(s), Rule::CR, {p}, std::nullopt);
}

uint32_t ProofBuilder::orr(uint32_t p, const Query* m) {
  const Sequent& ps = lines_.at(p).seq;
  if (!q_is_or(m)) bad("or-r", p, kNoLine);
  Cedent rest = cedent_minus(ps.right, {q_left(m), q_right(m)});
  if (rest.size() + 2 != ps.right.size()) bad("or-r", p, kNoLine);
  Sequent s{ps.left, with(std::move(rest), {m})};
  return push(std::move(s), Rule::OrR, {p}, std::nullopt);
}

uint32_t ProofBuilder::andl(uint32_t p, const Query* m) {
  const Sequent& ps = lines_.at(p).seq;
  if (!q_is_and(m)) bad("and-l", p, kNoLine);
  Cedent rest = cedent_minus(ps.left, {q_left(m), q_right(m)});
  if (rest.size() + 2 != ps.left.size()) bad("and-l", p, kNoLine);
  Sequent s{with(std::move(rest), {m}), ps.right};
  return push(std::move(s), Rule::AndL, {p}, std::nullopt);
}

uint32_t ProofBuilder::notl(uint32_t p, const Query* m) {
  const Sequent& ps = lines_.at(p).seq;
  if (!q_is_not(m) || !cedent_contains(ps.right, m->a)) bad("not-l", p, kNoLine);
  Sequent s{with(ps.left, {m}), remove_one(ps.right, m->a)};
  return push(std::move(s), Rule::NotL, {p}, std::nullopt);
}

uint32_t ProofBuilder::notr(uint32_t p, const Query* m) {
  const Sequent& ps = lines_.at(p).seq;
  if (!q_is_not(m) || !cedent_contains(ps.left, m->a)) bad("not-r", p, kNoLine);
  Sequent s{remove_one(ps.left, m->a), with(ps.right, {m})};
  return push(std::move(s), Rule::NotR, {p}, std::nullopt);
}

uint32_t ProofBuilder::cut(uint32_t p0, uint32_t p1, const Query* a) {
  const Sequent& s0 = lines_.at(p0).seq;
  const Sequent& s1 = lines_.at(p1).seq;
  if (!cedent_contains(s0.right, a) || !cedent_contains(s1.left, a))
    bad("cut", p0, p1);
  Sequent s{s0.left, remove_one(s0.right, a)};
  if (!ms_eq(s1.left, with(s.left, {a})) || !ms_eq(s1.right, s.right))
    bad("cut", p0, p1);
  return push(std::move(s), Rule::Cut, {p0, p1}, std::nullopt);
}

uint32_t ProofBuilder::orl(uint32_t p0, uint32_t p1, const Query* m) {
  const Sequent& s0 = lines_.at(p0).seq;
  const Sequent& s1 = lines_.at(p1).seq;
  if (!q_is_or(m) || !cedent_contains(s0.left, q_left(m))) bad("or-l", p0, p1);
  Sequent s{with(remove_one(s0.left, q_left(m)), {m}), s0.right};
  if (!ms_eq(s1.left, with(remove_one(s0.left, q_left(m)), {q_right(m)})) ||
      !ms_eq(s1.right, s0.right))
    bad("or-l", p0, p1);
  return push(std::move(s), Rule::OrL, {p0, p1}, std::nullopt);
}

uint32_t ProofBuilder::andr(uint32_t p0, uint32_t p1, const Query* m) {
  const Sequent& s0 = lines_.at(p0).seq;
  const Sequent& s1 = lines_.at(p1).seq;
  if (!q_is_and(m) || !cedent_contains(s0.right, q_left(m)))
    bad("and-r", p0, p1);
  Cedent rest = remove_one(s0.right, q_left(m));
  Sequent s{s0.left, with(Cedent(rest), {m})};
  if (!ms_eq(s1.right, with(std::move(rest), {q_right(m)})) ||
      !ms_eq(s1.left, s0.left))
    bad("and-r", p0, p1);
  return push(std::move(s), Rule::AndR, {p0, p1}, std::nullopt);
}

uint32_t ProofBuilder::decl(uint32_t p0, uint32_t p1, const Query* m) {
  // p0: Gamma, A |- Delta, p    p1: Gamma, p, B |- Delta
  const Sequent& s0 = lines_.at(p0).seq;
  const Sequent& s1 = lines_.at(p1).seq;
  if (!q_is_dec(m)) bad("dec-l", p0, p1);
  const Query* pq = qbase(fpvar(q_dec_var(m)));
  if (!cedent_contains(s0.left, q_dec0(m)) || !cedent_contains(s0.right, pq))
    bad("dec-l", p0, p1);
  Cedent g = remove_one(s0.left, q_dec0(m));
  Sequent s{with(Cedent(g), {m}), remove_one(s0.right, pq)};
  if (!ms_eq(s1.left, with(std::move(g), {pq, q_dec1(m)})) ||
      !ms_eq(s1.right, s.right))
    bad("dec-l", p0, p1);
  return push(std::move(s), Rule::DecL, {p0, p1}, std::nullopt);
}

uint32_t ProofBuilder::decr(uint32_t p0, uint32_t p1, const Query* m) {
  // p0: Gamma |- Delta, A, p    p1: Gamma, p |- Delta, B
  const Sequent& s0 = lines_.at(p0).seq;
  const Sequent& s1 = lines_.at(p1).seq;
  if (!q_is_dec(m)) bad("dec-r", p0, p1);
  const Query* pq = qbase(fpvar(q_dec_var(m)));
  if (!cedent_contains(s0.right, q_dec0(m)) || !cedent_contains(s0.right, pq))
    bad("dec-r", p0, p1);
  Cedent d = cedent_minus(s0.right, {q_dec0(m), pq});
  if (d.size() + 2 != s0.right.size()) bad("dec-r", p0, p1);
  Sequent s{s0.left, with(Cedent(d), {m})};
  if (!ms_eq(s1.left, with(s0.left, {pq})) ||
      !ms_eq(s1.right, with(std::move(d), {q_dec1(m)})))
    bad("dec-r", p0, p1);
  return push(std::move(s), Rule::DecR, {p0, p1}, std::nullopt);
}

uint32_t ProofBuilder::weaken_to(uint32_t p, const Sequent& target) {
  const Sequent cur = lines_.at(p).seq;
  Cedent addl = cedent_minus(target.left, cur.left);
  Cedent addr = cedent_minus(target.right, cur.right);
  if (!cedent_minus(cur.left, target.left).empty() ||
      !cedent_minus(cur.right, target.right).empty())
    throw BpwError("builder: weaken_to target does not cover " + render(cur));
  uint32_t i = p;
  for (const Query* m : addl) i = wl(i, m);
  for (const Query* m : addr) i = wr(i, m);
  return i;
}

uint32_t ProofBuilder::contract_to(uint32_t p, const Sequent& target) {
  const Sequent cur = lines_.at(p).seq;
  Cedent dropl = cedent_minus(cur.left, target.left);
  Cedent dropr = cedent_minus(cur.right, target.right);
  if (!cedent_minus(target.left, cur.left).empty() ||
      !cedent_minus(target.right, cur.right).empty())
    throw BpwError("builder: contract_to target not below " + render(cur));
  uint32_t i = p;
  for (const Query* m : dropl) {
    if (!cedent_contains(target.left, m))
      throw BpwError("builder: contract_to would drop the last copy of " +
                     render(m));
    i = cl(i, m);
  }
  for (const Query* m : dropr) {
    if (!cedent_contains(target.right, m))
      throw BpwError("builder: contract_to would drop the last copy of " +
                     render(m));
    i = cr(i, m);
  }
  return i;
}

uint32_t ProofBuilder::cut2(uint32_t p0, uint32_t p1, const Query* a) {
  const Sequent& s0 = lines_.at(p0).seq;
  const Sequent& s1 = lines_.at(p1).seq;
  if (!cedent_contains(s0.right, a) || !cedent_contains(s1.left, a))
    bad("cut", p0, p1);
  Cedent gl = cedent_union(s0.left, remove_one(s1.left, a));
  Cedent gr = cedent_union(remove_one(s0.right, a), s1.right);
  if (uint32_t f = find(Sequent{gl, gr}); f != kNoLine) return f;
  uint32_t w0 = weaken_to(p0, Sequent{gl, with(Cedent(gr), {a})});
  uint32_t w1 = weaken_to(p1, Sequent{with(Cedent(gl), {a}), gr});
  return cut(w0, w1, a);
}

Proof ProofBuilder::take() {
  Proof pf;
  pf.system = sys_;
  pf.axioms = axb_.snapshot();
  pf.lines = std::move(lines_);
  lines_.clear();
  index_.clear();
  return pf;
}

Proof ProofBuilder::take(uint32_t target) {
  if (target >= lines_.size()) throw BpwError("take: no such line");
  // Keep only the ancestors of target; premises always point backwards, so
  // the target ends up last.
  std::vector<char> keep(lines_.size(), 0);
  std::vector<uint32_t> st{target};
  keep[target] = 1;
  while (!st.empty()) {
    uint32_t u = st.back();
    st.pop_back();
    for (uint32_t p : lines_[u].prem)
      if (!keep[p]) {
        keep[p] = 1;
        st.push_back(p);
      }
  }
  std::vector<uint32_t> remap(lines_.size(), kNoLine);
  Proof pf;
  pf.system = sys_;
  pf.axioms = axb_.snapshot();
  for (uint32_t i = 0; i < lines_.size(); ++i) {
    if (!keep[i]) continue;
    remap[i] = static_cast<uint32_t>(pf.lines.size());
    ProofLine L = std::move(lines_[i]);
    for (uint32_t& p : L.prem) p = remap[p];
    pf.lines.push_back(std::move(L));
  }
  lines_.clear();
  index_.clear();
  return pf;
}

}  // namespace bpw
