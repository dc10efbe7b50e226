#include "bpw/sequent.hpp"

#include <algorithm>
#include <map>

namespace bpw {

bool operator==(const Sequent& x, const Sequent& y) {
  return x.left == y.left && x.right == y.right;
}
bool operator!=(const Sequent& x, const Sequent& y) { return !(x == y); }

static bool by_id(const Query* a, const Query* b) { return a->id < b->id; }

Sequent canonical(const Sequent& s) {
  Sequent c = s;
  std::sort(c.left.begin(), c.left.end(), by_id);
  std::sort(c.right.begin(), c.right.end(), by_id);
  return c;
}

bool same_multiset(const Sequent& x, const Sequent& y) {
  return canonical(x) == canonical(y);
}

uint64_t sequent_key(const Sequent& s) {
  Sequent c = canonical(s);
  uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  };
  for (const Query* q : c.left) mix(q->id);
  mix(0xffffffffull);  // cedent separator
  for (const Query* q : c.right) mix(q->id);
  return h;
}

uint64_t sequent_symbols(const Sequent& s) {
  uint64_t n = 0;
  for (const Query* q : s.left) n += q->symbols;
  for (const Query* q : s.right) n += q->symbols;
  return n;
}

Cedent cedent_minus(const Cedent& x, const Cedent& y) {
  std::map<const Query*, int> take;
  for (const Query* q : y) ++take[q];
  Cedent out;
  for (const Query* q : x) {
    auto it = take.find(q);
    if (it != take.end() && it->second > 0)
      --it->second;
    else
      out.push_back(q);
  }
  return out;
}

bool cedent_contains(const Cedent& xs, const Query* q) {
  return std::find(xs.begin(), xs.end(), q) != xs.end();
}

Cedent cedent_union(const Cedent& x, const Cedent& y) {
  Cedent extra = cedent_minus(y, x);
  Cedent out = x;
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

bool q_is_or(const Query* q) {
  return q->kind == QKind::QOr ||
         (q->kind == QKind::Base && q->f->kind == FKind::Or);
}
bool q_is_and(const Query* q) {
  return q->kind == QKind::QAnd ||
         (q->kind == QKind::Base && q->f->kind == FKind::And);
}
bool q_is_not(const Query* q) { return q->kind == QKind::Not; }
bool q_is_dec(const Query* q) {
  return q->kind == QKind::Base && q->f->kind == FKind::Dec;
}
bool q_is_c0(const Query* q) {
  return q->kind == QKind::Base && q->f->kind == FKind::C0;
}
bool q_is_c1(const Query* q) {
  return q->kind == QKind::Base && q->f->kind == FKind::C1;
}
bool q_is_evar(const Query* q) {
  return q->kind == QKind::Base && q->f->kind == FKind::EVar;
}

const Query* q_left(const Query* q) {
  if (q->kind == QKind::Base) return qbase(q->f->a);
  return q->a;
}
const Query* q_right(const Query* q) {
  if (q->kind == QKind::Base) return qbase(q->f->b);
  return q->b;
}
PVarId q_dec_var(const Query* q) { return q->f->var; }
const Query* q_dec0(const Query* q) { return qbase(q->f->a); }
const Query* q_dec1(const Query* q) { return qbase(q->f->b); }

}  // namespace bpw
