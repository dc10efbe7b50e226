#include "bpw/games.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "bpw/builder.hpp"
#include "bpw/decider.hpp"
#include "bpw/eval.hpp"
#include "bpw/parse.hpp"
#include "bpw/simproof.hpp"
#include "bpw/thresholds.hpp"
#include "bpw/translate.hpp"

namespace bpw {

using json = nlohmann::json;

namespace {

bool ms_eq(const Cedent& x, const Cedent& y) {
  if (x.size() != y.size()) return false;
  return cedent_minus(x, y).empty();
}

// to == from + [x] as multisets; returns x, or null when the shape is off.
const Query* one_added(const Cedent& from, const Cedent& to) {
  if (to.size() != from.size() + 1) return nullptr;
  Cedent extra = cedent_minus(to, from);
  if (extra.size() != 1) return nullptr;
  if (!cedent_minus(from, to).empty()) return nullptr;
  return extra[0];
}

Cedent remove_one(const Cedent& c, const Query* m) {
  Cedent out;
  bool gone = false;
  for (const Query* q : c) {
    if (!gone && q == m) {
      gone = true;
      continue;
    }
    out.push_back(q);
  }
  return out;
}

Cedent with_member(Cedent c, std::initializer_list<const Query*> ms) {
  for (const Query* m : ms) c.push_back(m);
  return c;
}

// Connective view shared by both tiers. DB stops at extended decision
// trees, NB at nondeterministic ones (so an or of programs is one leaf).
enum VK { kLeaf = 0, kOr = 1, kAnd = 2, kNot = 3 };

int view_kind(const Query* q, const ExtAxiomSet& E, GameSys sys) {
  if (q->kind == QKind::Not) return kNot;
  if (q->kind == QKind::Base) {
    bool atom = sys == GameSys::DB ? is_edt(q->f, E) : is_endt(q->f, E);
    if (atom) return kLeaf;
    if (q->f->kind == FKind::Or) return kOr;
    if (q->f->kind == FKind::And) return kAnd;
    return kLeaf;
  }
  return q->kind == QKind::QOr ? kOr : kAnd;
}

bool class_ok(const Query* q, const ExtAxiomSet& E, GameSys sys) {
  switch (q->kind) {
    case QKind::Base:
      return sys == GameSys::DB ? is_bool_edt(q->f, E)
                                : is_posbool_endt(q->f, E);
    case QKind::Not:
      return class_ok(q->a, E, sys);
    default:
      return class_ok(q->a, E, sys) && class_ok(q->b, E, sys);
  }
}

const Query* big_and_range(const Cedent& c, size_t lo, size_t hi) {
  size_t n = hi - lo;
  if (n == 0) return qbase(f1());
  if (n == 1) return c[lo];
  size_t mid = lo + n / 2;
  return qand(big_and_range(c, lo, mid), big_and_range(c, mid, hi));
}

const Query* big_or_range(const Cedent& c, size_t lo, size_t hi) {
  size_t n = hi - lo;
  if (n == 0) return qbase(f0());
  if (n == 1) return c[lo];
  size_t mid = lo + n / 2;
  return qor(big_or_range(c, lo, mid), big_or_range(c, mid, hi));
}

struct Ctx {
  const ExtAxiomSet& E;
  GameSys sys;
  DetectOpts opts;
};

// A leaf the construction knows to be winning; failing to find the
// contradiction here means the construction itself is broken.
Strat close_leaf(Ctx& cx, GameState st) {
  DetectOpts d = cx.opts;
  d.first_only = true;
  auto cs = detect(st, cx.E, cx.sys, d);
  if (cs.empty())
    throw BpwError("games: constructed leaf holds no contradiction");
  return make_leaf(cs[0]);
}

using KS = std::function<Strat(GameState)>;
using KF = std::function<Strat(GameState, size_t)>;

// Ask q unless the state already answers it: a known single value takes
// that branch directly, a double answer is already a win.
Strat ask_skip(Ctx& cx, GameState st, const Query* q, const KS& k0,
               const KS& k1) {
  if (st.both(q)) return close_leaf(cx, std::move(st));
  if (auto v = st.value(q)) return *v ? k1(std::move(st)) : k0(std::move(st));
  GameState s0 = st;
  s0.assign(q, false);
  GameState s1 = std::move(st);
  s1.assign(q, true);
  Strat a0 = k0(std::move(s0));
  Strat a1 = k1(std::move(s1));
  return make_ask(q, std::move(a0), std::move(a1));
}

// Range combinators over a cedent, splitting as big_and/big_or do. Each
// requires the combination over [lo, hi) to be answered as stated and
// hands the continuation the index it isolated.

// big_and over [lo, hi) answered 0: locate a false member.
Strat find_false_range(Ctx& cx, const Cedent& items, size_t lo, size_t hi,
                       GameState st, const KF& k) {
  size_t n = hi - lo;
  if (n == 0) return close_leaf(cx, std::move(st));
  if (n == 1) return k(std::move(st), lo);
  size_t mid = lo + n / 2;
  const Query* qa = big_and_range(items, lo, mid);
  const Query* qb = big_and_range(items, mid, hi);
  return ask_skip(
      cx, std::move(st), qa,
      [&, lo, mid](GameState s) {
        return find_false_range(cx, items, lo, mid, std::move(s), k);
      },
      [&, mid, hi, qb](GameState s) {
        return ask_skip(
            cx, std::move(s), qb,
            [&, mid, hi](GameState s2) {
              return find_false_range(cx, items, mid, hi, std::move(s2), k);
            },
            [&](GameState s2) { return close_leaf(cx, std::move(s2)); });
      });
}

// big_or over [lo, hi) answered 1: locate a true member.
Strat find_true_range(Ctx& cx, const Cedent& items, size_t lo, size_t hi,
                      GameState st, const KF& k) {
  size_t n = hi - lo;
  if (n == 0) return close_leaf(cx, std::move(st));
  if (n == 1) return k(std::move(st), lo);
  size_t mid = lo + n / 2;
  const Query* qa = big_or_range(items, lo, mid);
  const Query* qb = big_or_range(items, mid, hi);
  return ask_skip(
      cx, std::move(st), qa,
      [&, mid, hi, qb](GameState s) {
        return ask_skip(
            cx, std::move(s), qb,
            [&](GameState s2) { return close_leaf(cx, std::move(s2)); },
            [&, mid, hi](GameState s2) {
              return find_true_range(cx, items, mid, hi, std::move(s2), k);
            });
      },
      [&, lo, mid](GameState s) {
        return find_true_range(cx, items, lo, mid, std::move(s), k);
      });
}

// big_and over [lo, hi) answered 1: pin items[t] to 1.
Strat force_true_range(Ctx& cx, const Cedent& items, size_t lo, size_t hi,
                       size_t t, GameState st, const KS& k) {
  size_t n = hi - lo;
  if (n == 0 || t < lo || t >= hi)
    throw BpwError("games: force target outside the range");
  if (n == 1) return k(std::move(st));
  size_t mid = lo + n / 2;
  size_t slo = t < mid ? lo : mid;
  size_t shi = t < mid ? mid : hi;
  const Query* qs = big_and_range(items, slo, shi);
  return ask_skip(
      cx, std::move(st), qs,
      [&](GameState s) { return close_leaf(cx, std::move(s)); },
      [&, slo, shi, t](GameState s) {
        return force_true_range(cx, items, slo, shi, t, std::move(s), k);
      });
}

// big_or over [lo, hi) answered 0: pin items[t] to 0.
Strat force_false_range(Ctx& cx, const Cedent& items, size_t lo, size_t hi,
                        size_t t, GameState st, const KS& k) {
  size_t n = hi - lo;
  if (n == 0 || t < lo || t >= hi)
    throw BpwError("games: force target outside the range");
  if (n == 1) return k(std::move(st));
  size_t mid = lo + n / 2;
  size_t slo = t < mid ? lo : mid;
  size_t shi = t < mid ? mid : hi;
  const Query* qs = big_or_range(items, slo, shi);
  return ask_skip(
      cx, std::move(st), qs,
      [&, slo, shi, t](GameState s) {
        return force_false_range(cx, items, slo, shi, t, std::move(s), k);
      },
      [&](GameState s) { return close_leaf(cx, std::move(s)); });
}

// Driver not(L) or R answered 0: reach L answered 1 and R answered 0 in at
// most three asks, winning on any deviation.
Strat force_imp(Ctx& cx, const Query* impq, GameState st, const KS& k) {
  if (!q_is_or(impq) || !q_is_not(q_left(impq)))
    throw BpwError("find/force: driver is not an implication shape");
  if (!st.has(impq, false))
    throw BpwError("find/force: implication driver must be answered 0");
  const Query* nl = q_left(impq);
  const Query* L = nl->a;
  const Query* R = q_right(impq);
  return ask_skip(
      cx, std::move(st), L,
      [&, nl, R](GameState s) {
        return ask_skip(
            cx, std::move(s), R,
            [&, nl](GameState s2) {
              return ask_skip(
                  cx, std::move(s2), nl,
                  [&](GameState s3) { return close_leaf(cx, std::move(s3)); },
                  [&](GameState s3) { return close_leaf(cx, std::move(s3)); });
            },
            [&](GameState s2) { return close_leaf(cx, std::move(s2)); });
      },
      [&, R, k](GameState s) {
        return ask_skip(
            cx, std::move(s), R, [k](GameState s2) { return k(std::move(s2)); },
            [&](GameState s2) { return close_leaf(cx, std::move(s2)); });
      });
}

// View-based walkers for the public find/force goals, following the
// driver's own shape rather than a rebuilt balanced one.
using KQ = std::function<Strat(GameState, const Query*)>;

Strat find_false_view(Ctx& cx, const Query* q, GameState st, const KQ& k) {
  if (view_kind(q, cx.E, cx.sys) != kAnd) return k(std::move(st), q);
  const Query* l = q_left(q);
  const Query* r = q_right(q);
  return ask_skip(
      cx, std::move(st), l,
      [&, l](GameState s) { return find_false_view(cx, l, std::move(s), k); },
      [&, r](GameState s) {
        return ask_skip(
            cx, std::move(s), r,
            [&, r](GameState s2) {
              return find_false_view(cx, r, std::move(s2), k);
            },
            [&](GameState s2) { return close_leaf(cx, std::move(s2)); });
      });
}

Strat find_true_view(Ctx& cx, const Query* q, GameState st, const KQ& k) {
  if (view_kind(q, cx.E, cx.sys) != kOr) return k(std::move(st), q);
  const Query* l = q_left(q);
  const Query* r = q_right(q);
  return ask_skip(
      cx, std::move(st), l,
      [&, r](GameState s) {
        return ask_skip(
            cx, std::move(s), r,
            [&](GameState s2) { return close_leaf(cx, std::move(s2)); },
            [&, r](GameState s2) {
              return find_true_view(cx, r, std::move(s2), k);
            });
      },
      [&, l](GameState s) { return find_true_view(cx, l, std::move(s), k); });
}

Strat force_true_view(Ctx& cx, const Query* q, const std::vector<bool>& path,
                      size_t i, GameState st, const KS& k) {
  if (i == path.size()) return k(std::move(st));
  if (view_kind(q, cx.E, cx.sys) != kAnd)
    throw BpwError("find/force: force path leaves the conjunction");
  const Query* side = path[i] ? q_right(q) : q_left(q);
  return ask_skip(
      cx, std::move(st), side,
      [&](GameState s) { return close_leaf(cx, std::move(s)); },
      [&, side, i](GameState s) {
        return force_true_view(cx, side, path, i + 1, std::move(s), k);
      });
}

Strat force_false_view(Ctx& cx, const Query* q, const std::vector<bool>& path,
                       size_t i, GameState st, const KS& k) {
  if (i == path.size()) return k(std::move(st));
  if (view_kind(q, cx.E, cx.sys) != kOr)
    throw BpwError("find/force: force path leaves the disjunction");
  const Query* side = path[i] ? q_right(q) : q_left(q);
  return ask_skip(
      cx, std::move(st), side,
      [&, side, i](GameState s) {
        return force_false_view(cx, side, path, i + 1, std::move(s), k);
      },
      [&](GameState s) { return close_leaf(cx, std::move(s)); });
}

// First occurrence of target in the driver's view of the given kind.
bool view_path_to(Ctx& cx, const Query* q, const Query* target, int need,
                  std::vector<bool>& path) {
  if (q == target) return true;
  if (view_kind(q, cx.E, cx.sys) != need) return false;
  path.push_back(false);
  if (view_path_to(cx, q_left(q), target, need, path)) return true;
  path.back() = true;
  if (view_path_to(cx, q_right(q), target, need, path)) return true;
  path.pop_back();
  return false;
}

// Local soundness core. Requires the implication of conc answered 0 and of
// every premise answered 1 in st.
Strat ls_build(Ctx& cx, Rule r, const Sequent& conc,
               const std::vector<Sequent>& prems,
               const std::optional<ExtAux>& ext, GameState st);

// Walk one premise implication answered 1 to a member whose answer denies
// it: a left member answered 0 or a right member answered 1.
using FoundK = std::function<Strat(GameState, int side, size_t idx)>;

Strat premise_find(Ctx& cx, const Sequent& prem, GameState st,
                   const FoundK& found) {
  const Query* ip = imp_query(prem);
  if (!st.has(ip, true))
    throw BpwError("games: premise implication is not answered 1");
  const Query* nl = q_left(ip);
  const Query* Lp = nl->a;
  const Query* Rp = q_right(ip);
  return ask_skip(
      cx, std::move(st), nl,
      [&, Rp](GameState s) {
        return ask_skip(
            cx, std::move(s), Rp,
            [&](GameState s2) { return close_leaf(cx, std::move(s2)); },
            [&](GameState s2) {
              if (prem.right.empty()) return close_leaf(cx, std::move(s2));
              return find_true_range(cx, prem.right, 0, prem.right.size(),
                                     std::move(s2),
                                     [&found](GameState s3, size_t j) {
                                       return found(std::move(s3), 1, j);
                                     });
            });
      },
      [&, Lp](GameState s) {
        return ask_skip(
            cx, std::move(s), Lp,
            [&](GameState s2) {
              if (prem.left.empty()) return close_leaf(cx, std::move(s2));
              return find_false_range(cx, prem.left, 0, prem.left.size(),
                                      std::move(s2),
                                      [&found](GameState s3, size_t j) {
                                        return found(std::move(s3), 0, j);
                                      });
            },
            [&](GameState s2) { return close_leaf(cx, std::move(s2)); });
      });
}

Strat ls_build(Ctx& cx, Rule r, const Sequent& conc,
               const std::vector<Sequent>& prems,
               const std::optional<ExtAux>& ext, GameState st) {
  const Query* impc = imp_query(conc);
  if (!st.has(impc, false))
    throw BpwError("games: conclusion implication is not answered 0");
  for (const Sequent& p : prems)
    if (!st.has(imp_query(p), true))
      throw BpwError("games: premise implication is not answered 1");

  auto bad = [&]() -> BpwError {
    return BpwError(std::string("local_soundness: sequents do not form a ") +
                    rule_name(r) + " instance");
  };
  auto want = [&](size_t n) {
    if (prems.size() != n) throw bad();
  };

  auto idx_l = [&](const Query* m) -> size_t {
    for (size_t i = 0; i < conc.left.size(); ++i)
      if (conc.left[i] == m) return i;
    throw bad();
  };
  auto idx_r = [&](const Query* m) -> size_t {
    for (size_t i = 0; i < conc.right.size(); ++i)
      if (conc.right[i] == m) return i;
    throw bad();
  };
  KS close1 = [&cx](GameState s) { return close_leaf(cx, std::move(s)); };
  auto force_l = [&](const Query* m, GameState s, const KS& k) {
    return force_true_range(cx, conc.left, 0, conc.left.size(), idx_l(m),
                            std::move(s), k);
  };
  auto force_r = [&](const Query* m, GameState s, const KS& k) {
    return force_false_range(cx, conc.right, 0, conc.right.size(), idx_r(m),
                             std::move(s), k);
  };
  // Premise members still in the conclusion context close by forcing the
  // opposite answer there; anything else must be the rule's principal.
  using PrincipalK = std::function<Strat(GameState, int, const Query*)>;
  auto found_in = [&](const Sequent& prem, PrincipalK principal) -> FoundK {
    return [&, principal](GameState s, int side, size_t j) -> Strat {
      const Query* C = side == 0 ? prem.left[j] : prem.right[j];
      if (side == 0 && cedent_contains(conc.left, C))
        return force_l(C, std::move(s), close1);
      if (side == 1 && cedent_contains(conc.right, C))
        return force_r(C, std::move(s), close1);
      return principal(std::move(s), side, C);
    };
  };
  auto context_only = [&](const Sequent& prem) -> FoundK {
    return found_in(prem, [&](GameState, int, const Query*) -> Strat {
      throw BpwError(
          "local_soundness: premise member escapes the conclusion context");
    });
  };

  // Validate the instance and capture what the continuation needs, then
  // run after the conclusion implication is decomposed.
  std::function<Strat(GameState)> after;

  switch (r) {
    case Rule::Id: {
      want(0);
      const Query* m = nullptr;
      for (const Query* x : conc.left)
        if (cedent_contains(conc.right, x)) {
          m = x;
          break;
        }
      if (!m) throw bad();
      after = [&, m](GameState s) {
        return force_l(m, std::move(s), [&, m](GameState s2) {
          return force_r(m, std::move(s2), close1);
        });
      };
      break;
    }
    case Rule::ZeroL: {
      want(0);
      if (!ms_eq(conc.left, {qbase(f0())}) || !conc.right.empty()) throw bad();
      after = close1;
      break;
    }
    case Rule::OneR: {
      want(0);
      if (!conc.left.empty() || !ms_eq(conc.right, {qbase(f1())})) throw bad();
      after = close1;
      break;
    }
    case Rule::Ext: {
      want(0);
      if (conc.left.size() != 1 || conc.right.size() != 1) throw bad();
      auto inst = [&](const Query* e, const Query* body) {
        return q_is_evar(e) && cx.E.def(e->f->var) &&
               cx.E.def(e->f->var) == body->f && body->kind == QKind::Base;
      };
      bool lr = inst(conc.left[0], conc.right[0]);
      bool rl = inst(conc.right[0], conc.left[0]);
      if (!lr && !rl) throw bad();
      if (ext && lr != ext->left_to_right) throw bad();
      after = close1;
      break;
    }
    case Rule::WL: {
      want(1);
      if (!one_added(prems[0].left, conc.left) ||
          !ms_eq(prems[0].right, conc.right))
        throw bad();
      after = [&](GameState s) {
        return premise_find(cx, prems[0], std::move(s), context_only(prems[0]));
      };
      break;
    }
    case Rule::WR: {
      want(1);
      if (!one_added(prems[0].right, conc.right) ||
          !ms_eq(prems[0].left, conc.left))
        throw bad();
      after = [&](GameState s) {
        return premise_find(cx, prems[0], std::move(s), context_only(prems[0]));
      };
      break;
    }
    case Rule::CL: {
      want(1);
      const Query* m = one_added(conc.left, prems[0].left);
      if (!m || !cedent_contains(conc.left, m) ||
          !ms_eq(prems[0].right, conc.right))
        throw bad();
      after = [&](GameState s) {
        return premise_find(cx, prems[0], std::move(s), context_only(prems[0]));
      };
      break;
    }
    case Rule::CR: {
      want(1);
      const Query* m = one_added(conc.right, prems[0].right);
      if (!m || !cedent_contains(conc.right, m) ||
          !ms_eq(prems[0].left, conc.left))
        throw bad();
      after = [&](GameState s) {
        return premise_find(cx, prems[0], std::move(s), context_only(prems[0]));
      };
      break;
    }
    case Rule::ExL:
    case Rule::ExR: {
      want(1);
      if (!ms_eq(prems[0].left, conc.left) ||
          !ms_eq(prems[0].right, conc.right))
        throw bad();
      after = [&](GameState s) {
        return premise_find(cx, prems[0], std::move(s), context_only(prems[0]));
      };
      break;
    }
    case Rule::OneL: {
      want(1);
      if (one_added(prems[0].left, conc.left) != qbase(f1()) ||
          !ms_eq(prems[0].right, conc.right))
        throw bad();
      after = [&](GameState s) {
        return premise_find(cx, prems[0], std::move(s), context_only(prems[0]));
      };
      break;
    }
    case Rule::ZeroR: {
      want(1);
      if (one_added(prems[0].right, conc.right) != qbase(f0()) ||
          !ms_eq(prems[0].left, conc.left))
        throw bad();
      after = [&](GameState s) {
        return premise_find(cx, prems[0], std::move(s), context_only(prems[0]));
      };
      break;
    }
    case Rule::Cut: {
      want(2);
      const Query* a = one_added(conc.right, prems[0].right);
      if (!a || one_added(conc.left, prems[1].left) != a ||
          !ms_eq(prems[0].left, conc.left) ||
          !ms_eq(prems[1].right, conc.right))
        throw bad();
      after = [&, a](GameState s) {
        return premise_find(
            cx, prems[0], std::move(s),
            found_in(prems[0],
                     [&, a](GameState s2, int side, const Query* C) -> Strat {
                       if (side != 1 || C != a) throw bad();
                       return premise_find(
                           cx, prems[1], std::move(s2),
                           found_in(prems[1],
                                    [&, a](GameState s3, int side2,
                                           const Query* C2) -> Strat {
                                      if (side2 != 0 || C2 != a) throw bad();
                                      return close_leaf(cx, std::move(s3));
                                    }));
                     }));
      };
      break;
    }
    case Rule::NotL: {
      want(1);
      const Query* m = one_added(prems[0].left, conc.left);
      const Query* Qq = one_added(conc.right, prems[0].right);
      if (!m || !Qq || !q_is_not(m) || m->a != Qq) throw bad();
      after = [&, m, Qq](GameState s) {
        return premise_find(
            cx, prems[0], std::move(s),
            found_in(prems[0],
                     [&, m, Qq](GameState s2, int side,
                                const Query* C) -> Strat {
                       if (side != 1 || C != Qq) throw bad();
                       return force_l(m, std::move(s2), close1);
                     }));
      };
      break;
    }
    case Rule::NotR: {
      want(1);
      const Query* m = one_added(prems[0].right, conc.right);
      const Query* Qq = one_added(conc.left, prems[0].left);
      if (!m || !Qq || !q_is_not(m) || m->a != Qq) throw bad();
      after = [&, m, Qq](GameState s) {
        return premise_find(
            cx, prems[0], std::move(s),
            found_in(prems[0],
                     [&, m, Qq](GameState s2, int side,
                                const Query* C) -> Strat {
                       if (side != 0 || C != Qq) throw bad();
                       return force_r(m, std::move(s2), close1);
                     }));
      };
      break;
    }
    case Rule::OrL: {
      want(2);
      Cedent dl = cedent_minus(conc.left, prems[0].left);
      if (dl.size() != 1 || !q_is_or(dl[0])) throw bad();
      const Query* m = dl[0];
      const Query* A = q_left(m);
      const Query* B = q_right(m);
      Cedent base = remove_one(conc.left, m);
      if (!ms_eq(prems[0].left, with_member(base, {A})) ||
          !ms_eq(prems[1].left, with_member(base, {B})) ||
          !ms_eq(prems[0].right, conc.right) ||
          !ms_eq(prems[1].right, conc.right))
        throw bad();
      after = [&, m, A, B](GameState s) {
        return premise_find(
            cx, prems[0], std::move(s),
            found_in(prems[0],
                     [&, m, A, B](GameState s2, int side,
                                  const Query* C) -> Strat {
                       if (side != 0 || C != A) throw bad();
                       return premise_find(
                           cx, prems[1], std::move(s2),
                           found_in(prems[1],
                                    [&, m, B](GameState s3, int side2,
                                              const Query* C2) -> Strat {
                                      if (side2 != 0 || C2 != B) throw bad();
                                      return force_l(m, std::move(s3), close1);
                                    }));
                     }));
      };
      break;
    }
    case Rule::OrR: {
      want(1);
      Cedent dr = cedent_minus(conc.right, prems[0].right);
      if (dr.size() != 1 || !q_is_or(dr[0])) throw bad();
      const Query* m = dr[0];
      const Query* A = q_left(m);
      const Query* B = q_right(m);
      Cedent base = remove_one(conc.right, m);
      if (!ms_eq(prems[0].right, with_member(base, {A, B})) ||
          !ms_eq(prems[0].left, conc.left))
        throw bad();
      after = [&, m, A, B](GameState s) {
        return premise_find(
            cx, prems[0], std::move(s),
            found_in(prems[0],
                     [&, m, A, B](GameState s2, int side,
                                  const Query* C) -> Strat {
                       if (side != 1 || (C != A && C != B)) throw bad();
                       return force_r(m, std::move(s2), close1);
                     }));
      };
      break;
    }
    case Rule::AndL: {
      want(1);
      Cedent dl = cedent_minus(conc.left, prems[0].left);
      if (dl.size() != 1 || !q_is_and(dl[0])) throw bad();
      const Query* m = dl[0];
      const Query* A = q_left(m);
      const Query* B = q_right(m);
      Cedent base = remove_one(conc.left, m);
      if (!ms_eq(prems[0].left, with_member(base, {A, B})) ||
          !ms_eq(prems[0].right, conc.right))
        throw bad();
      after = [&, m, A, B](GameState s) {
        return premise_find(
            cx, prems[0], std::move(s),
            found_in(prems[0],
                     [&, m, A, B](GameState s2, int side,
                                  const Query* C) -> Strat {
                       if (side != 0 || (C != A && C != B)) throw bad();
                       return force_l(m, std::move(s2), close1);
                     }));
      };
      break;
    }
    case Rule::AndR: {
      want(2);
      Cedent dr = cedent_minus(conc.right, prems[0].right);
      if (dr.size() != 1 || !q_is_and(dr[0])) throw bad();
      const Query* m = dr[0];
      const Query* A = q_left(m);
      const Query* B = q_right(m);
      Cedent base = remove_one(conc.right, m);
      if (!ms_eq(prems[0].right, with_member(base, {A})) ||
          !ms_eq(prems[1].right, with_member(base, {B})) ||
          !ms_eq(prems[0].left, conc.left) || !ms_eq(prems[1].left, conc.left))
        throw bad();
      after = [&, m, A, B](GameState s) {
        return premise_find(
            cx, prems[0], std::move(s),
            found_in(prems[0],
                     [&, m, A, B](GameState s2, int side,
                                  const Query* C) -> Strat {
                       if (side != 1 || C != A) throw bad();
                       return premise_find(
                           cx, prems[1], std::move(s2),
                           found_in(prems[1],
                                    [&, m, B](GameState s3, int side2,
                                              const Query* C2) -> Strat {
                                      if (side2 != 1 || C2 != B) throw bad();
                                      return force_r(m, std::move(s3), close1);
                                    }));
                     }));
      };
      break;
    }
    case Rule::DecL: {
      want(2);
      Cedent dl = cedent_minus(conc.left, prems[0].left);
      if (dl.size() != 1 || !q_is_dec(dl[0])) throw bad();
      const Query* m = dl[0];
      const Query* A = q_dec0(m);
      const Query* B = q_dec1(m);
      const Query* P = qbase(fpvar(q_dec_var(m)));
      Cedent base = remove_one(conc.left, m);
      if (!ms_eq(prems[0].left, with_member(base, {A})) ||
          !ms_eq(prems[0].right, with_member(Cedent(conc.right), {P})) ||
          !ms_eq(prems[1].left, with_member(base, {P, B})) ||
          !ms_eq(prems[1].right, conc.right))
        throw bad();
      after = [&, m, A, B, P](GameState s) {
        return premise_find(
            cx, prems[0], std::move(s),
            found_in(prems[0],
                     [&, m, A, B, P](GameState s2, int side,
                                     const Query* C) -> Strat {
                       bool okA = side == 0 && C == A;
                       bool okP = side == 1 && C == P;
                       if (!okA && !okP) throw bad();
                       return premise_find(
                           cx, prems[1], std::move(s2),
                           found_in(prems[1],
                                    [&, m, B, P](GameState s3, int side2,
                                                 const Query* C2) -> Strat {
                                      if (side2 != 0 || (C2 != P && C2 != B))
                                        throw bad();
                                      return force_l(m, std::move(s3), close1);
                                    }));
                     }));
      };
      break;
    }
    case Rule::DecR: {
      want(2);
      Cedent dr = cedent_minus(conc.right, prems[0].right);
      if (dr.size() != 1 || !q_is_dec(dr[0])) throw bad();
      const Query* m = dr[0];
      const Query* A = q_dec0(m);
      const Query* B = q_dec1(m);
      const Query* P = qbase(fpvar(q_dec_var(m)));
      Cedent base = remove_one(conc.right, m);
      if (!ms_eq(prems[0].right, with_member(base, {A, P})) ||
          !ms_eq(prems[0].left, conc.left) ||
          !ms_eq(prems[1].left, with_member(Cedent(conc.left), {P})) ||
          !ms_eq(prems[1].right, with_member(base, {B})))
        throw bad();
      after = [&, m, A, B, P](GameState s) {
        return premise_find(
            cx, prems[0], std::move(s),
            found_in(prems[0],
                     [&, m, A, B, P](GameState s2, int side,
                                     const Query* C) -> Strat {
                       if (side != 1 || (C != A && C != P)) throw bad();
                       return premise_find(
                           cx, prems[1], std::move(s2),
                           found_in(prems[1],
                                    [&, m, B, P](GameState s3, int side2,
                                                 const Query* C2) -> Strat {
                                      bool okP = side2 == 0 && C2 == P;
                                      bool okB = side2 == 1 && C2 == B;
                                      if (!okP && !okB) throw bad();
                                      return force_r(m, std::move(s3), close1);
                                    }));
                     }));
      };
      break;
    }
  }

  return force_imp(cx, impc, std::move(st), after);
}

// De Morgan form: dm_pos keeps positive structure, dm_neg pushes one
// negation down. A negation splits every or/and, including ones folded
// into a single program, so the dual always mirrors; only connective-free
// programs absorb the negation whole.
const Query* dm_pos(const Query* q, const ExtAxiomSet& E);
const Query* dm_neg(const Query* q, const ExtAxiomSet& E);

const Query* dm_pos(const Query* q, const ExtAxiomSet& E) {
  switch (q->kind) {
    case QKind::Base:
      return q;
    case QKind::Not:
      return dm_neg(q->a, E);
    case QKind::QOr:
      return qor(dm_pos(q->a, E), dm_pos(q->b, E));
    default:
      return qand(dm_pos(q->a, E), dm_pos(q->b, E));
  }
}

const Query* dm_neg(const Query* q, const ExtAxiomSet& E) {
  switch (q->kind) {
    case QKind::Base: {
      const Formula* f = q->f;
      if (f->kind == FKind::Or)
        return qand(dm_neg(qbase(f->a), E), dm_neg(qbase(f->b), E));
      if (f->kind == FKind::And)
        return qor(dm_neg(qbase(f->a), E), dm_neg(qbase(f->b), E));
      return qnot(q);
    }
    case QKind::Not:
      return dm_pos(q->a, E);
    case QKind::QOr:
      return qand(dm_neg(q->a, E), dm_neg(q->b, E));
    default:
      return qor(dm_neg(q->a, E), dm_neg(q->b, E));
  }
}

// Single-sided shape tree: the connective skeleton of a query, frozen so
// that plugging a subquery keeps the original arities even where the
// rebuilt object collapses into one program leaf.
struct LShape {
  const Query* obj = nullptr;
  int kind = kLeaf;
  std::shared_ptr<const LShape> a, b;
  size_t leaves = 1;
};
using LS = std::shared_ptr<const LShape>;

LS lshape_of(const Query* q, const ExtAxiomSet& E, GameSys sys) {
  auto n = std::make_shared<LShape>();
  n->obj = q;
  switch (view_kind(q, E, sys)) {
    case kNot:
      n->kind = kNot;
      n->a = lshape_of(q->a, E, sys);
      n->leaves = n->a->leaves;
      break;
    case kOr:
    case kAnd:
      n->kind = view_kind(q, E, sys);
      n->a = lshape_of(q_left(q), E, sys);
      n->b = lshape_of(q_right(q), E, sys);
      n->leaves = n->a->leaves + n->b->leaves;
      break;
    default:
      break;
  }
  return n;
}

LS ls_sub(const LS& root, const std::vector<bool>& path, size_t lo,
          size_t hi) {
  LS cur = root;
  for (size_t i = lo; i < hi; ++i) {
    switch (cur->kind) {
      case kNot:
        if (path[i]) throw BpwError("context: negation has only one child");
        cur = cur->a;
        break;
      case kOr:
      case kAnd:
        cur = path[i] ? cur->b : cur->a;
        break;
      default:
        throw BpwError("context: path descends below a leaf");
    }
  }
  return cur;
}

const Query* ls_plugobj(const LS& node, const std::vector<bool>& path,
                        size_t i, size_t hi, const Query* x) {
  if (i == hi) return x;
  switch (node->kind) {
    case kNot:
      if (path[i]) throw BpwError("context: negation has only one child");
      return qnot(ls_plugobj(node->a, path, i + 1, hi, x));
    case kOr:
      return path[i] ? qor(node->a->obj, ls_plugobj(node->b, path, i + 1, hi, x))
                     : qor(ls_plugobj(node->a, path, i + 1, hi, x),
                           node->b->obj);
    case kAnd:
      return path[i]
                 ? qand(node->a->obj, ls_plugobj(node->b, path, i + 1, hi, x))
                 : qand(ls_plugobj(node->a, path, i + 1, hi, x), node->b->obj);
    default:
      throw BpwError("context: path descends below a leaf");
  }
}

// Paired shape of a De Morgan query against its dual: same skeleton with
// the connectives swapped and the leaves negated. Or/and structure counts
// syntactically, so a disjunction folded into one program still splits
// and pairs against its compound dual.
struct PairShape {
  const Query* s = nullptr;
  const Query* sd = nullptr;
  int kind = kLeaf;  // kLeaf, or kOr/kAnd for the s side
  std::shared_ptr<const PairShape> l, r;
  size_t leaves = 1;
};
using PS = std::shared_ptr<const PairShape>;

PS pair_build(const Query* s, const Query* sd, const ExtAxiomSet& E) {
  int k = q_is_or(s) ? kOr : q_is_and(s) ? kAnd : kLeaf;
  if (k == kOr || k == kAnd) {
    bool mirror = k == kOr ? q_is_and(sd) : q_is_or(sd);
    if (!mirror)
      throw BpwError("duality: dual pair shapes do not mirror");
    auto n = std::make_shared<PairShape>();
    n->s = s;
    n->sd = sd;
    n->kind = k;
    n->l = pair_build(q_left(s), q_left(sd), E);
    n->r = pair_build(q_right(s), q_right(sd), E);
    n->leaves = n->l->leaves + n->r->leaves;
    return n;
  }
  bool ok = (s->kind != QKind::Not && sd == qnot(s)) ||
            (s->kind == QKind::Not && sd == s->a);
  if (!ok) throw BpwError("duality: dual pair shapes do not mirror");
  auto n = std::make_shared<PairShape>();
  n->s = s;
  n->sd = sd;
  return n;
}

PS pair_plug(const PS& node, const std::vector<bool>& path, size_t i,
             const PS& sub) {
  if (i == path.size()) return sub;
  if (node->kind == kLeaf)
    throw BpwError("duality: path descends below a leaf");
  auto n = std::make_shared<PairShape>();
  n->kind = node->kind;
  n->l = path[i] ? node->l : pair_plug(node->l, path, i + 1, sub);
  n->r = path[i] ? pair_plug(node->r, path, i + 1, sub) : node->r;
  n->s = node->kind == kOr ? qor(n->l->s, n->r->s) : qand(n->l->s, n->r->s);
  n->sd =
      node->kind == kOr ? qand(n->l->sd, n->r->sd) : qor(n->l->sd, n->r->sd);
  n->leaves = n->l->leaves + n->r->leaves;
  return n;
}

LS pair_project(const PS& ps, bool dual) {
  auto n = std::make_shared<LShape>();
  n->obj = dual ? ps->sd : ps->s;
  n->leaves = ps->leaves;
  if (ps->kind == kLeaf) return n;
  bool orside = dual ? ps->kind == kAnd : ps->kind == kOr;
  n->kind = orside ? kOr : kAnd;
  n->a = pair_project(ps->l, dual);
  n->b = pair_project(ps->r, dual);
  return n;
}

// Deepest subtree holding between a third and two thirds of the leaves,
// leftmost among the deepest.
struct PairPick {
  PS node;
  std::vector<bool> path;
};

PairPick pair_spira(const PS& root) {
  size_t total = root->leaves;
  PairPick best;
  int bdepth = -1;
  std::vector<bool> path;
  std::function<void(const PS&, int)> go = [&](const PS& n, int depth) {
    if (3 * n->leaves >= total && 3 * n->leaves < 2 * total && depth > bdepth) {
      bdepth = depth;
      best.node = n;
      best.path = path;
    }
    if (n->kind == kLeaf) return;
    path.push_back(false);
    go(n->l, depth + 1);
    path.back() = true;
    go(n->r, depth + 1);
    path.pop_back();
  };
  go(root, 0);
  if (!best.node) throw BpwError("duality: no balanced subquery");
  return best;
}

// From P, P' answered beta and the context holding them answered cval and
// 1 - cval: win by halving the context path.
Strat leibniz_int(Ctx& cx, const LS& C, const std::vector<bool>& path,
                  size_t lo, size_t hi, const Query* P, const Query* Pp,
                  bool beta, bool cval, GameState st) {
  (void)beta;
  size_t len = hi - lo;
  if (len == 0) return close_leaf(cx, std::move(st));
  if (len == 1) {
    if (C->kind == kNot) return close_leaf(cx, std::move(st));
    if (C->kind == kLeaf)
      throw BpwError("leibniz: context path descends below a leaf");
    const Query* T = path[lo] ? C->a->obj : C->b->obj;
    return ask_skip(
        cx, std::move(st), T,
        [&](GameState s) { return close_leaf(cx, std::move(s)); },
        [&](GameState s) { return close_leaf(cx, std::move(s)); });
  }
  size_t cut = lo + len / 2;
  LS IC = ls_sub(C, path, lo, cut);
  const Query* RP = ls_plugobj(IC, path, cut, hi, P);
  const Query* RPp = ls_plugobj(IC, path, cut, hi, Pp);
  auto step2 = [&, IC, RP, RPp, cut, lo, hi](bool d, GameState s) -> Strat {
    return ask_skip(
        cx, std::move(s), RPp,
        [&, d](GameState s2) {
          if (d)
            return leibniz_int(cx, IC, path, cut, hi, P, Pp, beta, d,
                               std::move(s2));
          return leibniz_int(cx, C, path, lo, cut, RP, RPp, d, cval,
                             std::move(s2));
        },
        [&, d](GameState s2) {
          if (!d)
            return leibniz_int(cx, IC, path, cut, hi, P, Pp, beta, d,
                               std::move(s2));
          return leibniz_int(cx, C, path, lo, cut, RP, RPp, d, cval,
                             std::move(s2));
        });
  };
  return ask_skip(
      cx, std::move(st), RP,
      [step2](GameState s) { return step2(false, std::move(s)); },
      [step2](GameState s) { return step2(true, std::move(s)); });
}

// From a dual pair both answered b: win in logarithmically many asks.
Strat duality_dm(Ctx& cx, const PS& ps, bool b, GameState st) {
  if (ps->leaves == 1) return close_leaf(cx, std::move(st));
  if (ps->leaves <= 3) {
    // Ask every proper subpair; a pair answered equal recurses on it, and
    // fully complementary answers leave a local inconsistency somewhere.
    std::vector<PS> subs;
    std::function<void(const PS&, bool)> grab = [&](const PS& n, bool root) {
      if (!root) subs.push_back(n);
      if (n->kind == kLeaf) return;
      grab(n->l, false);
      grab(n->r, false);
    };
    grab(ps, true);
    std::function<Strat(size_t, GameState)> step = [&, subs](
                                                       size_t i,
                                                       GameState s) -> Strat {
      if (i == subs.size()) return close_leaf(cx, std::move(s));
      const PS n = subs[i];
      return ask_skip(
          cx, std::move(s), n->s,
          [&, n, i](GameState s2) {
            return ask_skip(
                cx, std::move(s2), n->sd,
                [&, n](GameState s3) {
                  return duality_dm(cx, n, false, std::move(s3));
                },
                [&, i](GameState s3) { return step(i + 1, std::move(s3)); });
          },
          [&, n, i](GameState s2) {
            return ask_skip(
                cx, std::move(s2), n->sd,
                [&, i](GameState s3) { return step(i + 1, std::move(s3)); },
                [&, n](GameState s3) {
                  return duality_dm(cx, n, true, std::move(s3));
                });
          });
    };
    return step(0, std::move(st));
  }
  PairPick pk = pair_spira(ps);
  const PS rnode = pk.node;
  // The pair answered unequal: substitute the constant answer and its
  // negation, then either the substitution flips a side (handled as an
  // equal-compound replacement) or the smaller instance recurses.
  auto diverge = [&cx, ps, pk, rnode, b](bool c, GameState s0) -> Strat {
    const Query* kq = qbase(c ? f1() : f0());
    const Query* kd = qnot(kq);
    auto kleaf = std::make_shared<PairShape>();
    kleaf->s = kq;
    kleaf->sd = kd;
    PS plugged = pair_plug(ps, pk.path, 0, kleaf);
    const Query* sq = plugged->s;
    const Query* sdq = plugged->sd;
    auto after_kd = [&cx, ps, pk, rnode, plugged, sq, sdq, kq, kd, b,
                     c](GameState s1) -> Strat {
      return ask_skip(
          cx, std::move(s1), sq,
          [&cx, ps, pk, rnode, plugged, sdq, kq, kd, b, c](GameState s2) {
            if (b)
              return leibniz_int(cx, pair_project(ps, false), pk.path, 0,
                                 pk.path.size(), rnode->s, kq, c, b,
                                 std::move(s2));
            return ask_skip(
                cx, std::move(s2), sdq,
                [&cx, plugged, b](GameState s3) {
                  return duality_dm(cx, plugged, b, std::move(s3));
                },
                [&cx, ps, pk, rnode, kd, b, c](GameState s3) {
                  return leibniz_int(cx, pair_project(ps, true), pk.path, 0,
                                     pk.path.size(), rnode->sd, kd, !c, b,
                                     std::move(s3));
                });
          },
          [&cx, ps, pk, rnode, plugged, sdq, kq, kd, b, c](GameState s2) {
            if (!b)
              return leibniz_int(cx, pair_project(ps, false), pk.path, 0,
                                 pk.path.size(), rnode->s, kq, c, b,
                                 std::move(s2));
            return ask_skip(
                cx, std::move(s2), sdq,
                [&cx, ps, pk, rnode, kd, b, c](GameState s3) {
                  return leibniz_int(cx, pair_project(ps, true), pk.path, 0,
                                     pk.path.size(), rnode->sd, kd, !c, b,
                                     std::move(s3));
                },
                [&cx, plugged, b](GameState s3) {
                  return duality_dm(cx, plugged, b, std::move(s3));
                });
          });
    };
    return ask_skip(
        cx, std::move(s0), kq,
        [&cx, after_kd, kd, c](GameState s1) -> Strat {
          if (c) return close_leaf(cx, std::move(s1));
          return ask_skip(
              cx, std::move(s1), kd,
              [&cx](GameState s2) { return close_leaf(cx, std::move(s2)); },
              [after_kd](GameState s2) { return after_kd(std::move(s2)); });
        },
        [&cx, after_kd, kd, c](GameState s1) -> Strat {
          if (!c) return close_leaf(cx, std::move(s1));
          return ask_skip(
              cx, std::move(s1), kd,
              [after_kd](GameState s2) { return after_kd(std::move(s2)); },
              [&cx](GameState s2) { return close_leaf(cx, std::move(s2)); });
        });
  };
  return ask_skip(
      cx, std::move(st), rnode->s,
      [&cx, rnode, diverge](GameState s) {
        return ask_skip(
            cx, std::move(s), rnode->sd,
            [&cx, rnode](GameState s2) {
              return duality_dm(cx, rnode, false, std::move(s2));
            },
            [diverge](GameState s2) { return diverge(false, std::move(s2)); });
      },
      [&cx, rnode, diverge](GameState s) {
        return ask_skip(
            cx, std::move(s), rnode->sd,
            [diverge](GameState s2) { return diverge(true, std::move(s2)); },
            [&cx, rnode](GameState s2) {
              return duality_dm(cx, rnode, true, std::move(s2));
            });
      });
}

// Short derivations for each contradiction kind. tr rewrites witness
// queries into the proof's world (the identity for the plain direction).
using TrFn = std::function<const Query*(const Query*)>;

uint32_t contr_line(ProofBuilder& pb, const Contradiction& c, const TrFn& tr) {
  const auto& w = c.witness;
  if (w.size() == 2 && w[0].first == w[1].first)
    return pb.id_line(tr(w[0].first));
  switch (c.kind) {
    case CKind::BoolConst:
      return w[0].second ? pb.zero_l() : pb.one_r();
    case CKind::ConnNot: {
      const Query* S = tr(w[0].first);
      const Query* N = tr(w[1].first);
      if (!q_is_not(N) || N->a != S)
        throw BpwError("games: negation witness has no query rule");
      return w[0].second ? pb.notl(pb.id_line(S), N)
                         : pb.notr(pb.id_line(S), N);
    }
    case CKind::ConnOr: {
      const Query* O = tr(w[0].first);
      const Query* l = q_left(O);
      const Query* r = q_right(O);
      if (w[0].second) {
        return pb.orl(pb.weaken_to(pb.id_line(l), Sequent{{l}, {l, r}}),
                      pb.weaken_to(pb.id_line(r), Sequent{{r}, {l, r}}), O);
      }
      const Query* d = tr(w[1].first);
      if (d != l && d != r)
        throw BpwError("games: disjunction witness component mismatch");
      return pb.orr(pb.weaken_to(pb.id_line(d), Sequent{{d}, {l, r}}), O);
    }
    case CKind::ConnAnd: {
      const Query* A = tr(w[0].first);
      const Query* l = q_left(A);
      const Query* r = q_right(A);
      if (!w[0].second) {
        return pb.andr(pb.weaken_to(pb.id_line(l), Sequent{{l, r}, {l}}),
                       pb.weaken_to(pb.id_line(r), Sequent{{l, r}, {r}}), A);
      }
      const Query* d = tr(w[1].first);
      if (d != l && d != r)
        throw BpwError("games: conjunction witness component mismatch");
      return pb.andl(pb.weaken_to(pb.id_line(d), Sequent{{l, r}, {d}}), A);
    }
    case CKind::Decision: {
      const Query* D = w[0].first;
      bool cD = w[0].second;
      const Query* A = q_dec0(D);
      const Query* B = q_dec1(D);
      const Query* P = qbase(fpvar(q_dec_var(D)));
      if (w.size() != 3) throw BpwError("games: decision witness shape");
      if (w[1].first == P) {
        bool i = w[1].second;
        if (cD) {
          if (!i)
            return pb.decl(
                pb.weaken_to(pb.id_line(A), Sequent{{A}, {P, A, P}}),
                pb.weaken_to(pb.id_line(P), Sequent{{P, B}, {P, A}}), D);
          return pb.decl(pb.weaken_to(pb.id_line(P), Sequent{{P, A}, {B, P}}),
                         pb.weaken_to(pb.id_line(B), Sequent{{P, P, B}, {B}}),
                         D);
        }
        if (!i)
          return pb.decr(pb.weaken_to(pb.id_line(A), Sequent{{A}, {P, A, P}}),
                         pb.weaken_to(pb.id_line(P), Sequent{{A, P}, {P, B}}),
                         D);
        return pb.decr(pb.weaken_to(pb.id_line(P), Sequent{{P, B}, {A, P}}),
                       pb.weaken_to(pb.id_line(B), Sequent{{P, B, P}, {B}}),
                       D);
      }
      if (cD)
        return pb.decl(pb.weaken_to(pb.id_line(A), Sequent{{A}, {A, B, P}}),
                       pb.weaken_to(pb.id_line(B), Sequent{{P, B}, {A, B}}),
                       D);
      return pb.decr(pb.weaken_to(pb.id_line(A), Sequent{{A, B}, {A, P}}),
                     pb.weaken_to(pb.id_line(B), Sequent{{A, B, P}, {B}}), D);
    }
    case CKind::Extension: {
      const Query* e = w[0].first;
      return pb.ext_line(e->f->var, w[0].second);
    }
    case CKind::Similarity: {
      const Query* Pq = w[0].first;
      const Query* Rq = w[1].first;
      if (Pq->kind != QKind::Base || Rq->kind != QKind::Base)
        throw BpwError("games: similarity witness must be programs");
      return prove_simulation_line(pb, Pq->f, Rq->f);
    }
  }
  throw BpwError("games: unknown contradiction kind");
}

// Contract surplus copies, then weaken up to the target.
uint32_t fit_to(ProofBuilder& pb, uint32_t ln, const Sequent& target) {
  const Sequent cur = pb.seq(ln);
  auto clip = [](const Cedent& have, const Cedent& want) {
    std::unordered_map<const Query*, int> wc;
    for (const Query* m : want) ++wc[m];
    std::unordered_map<const Query*, int> used;
    Cedent out;
    for (const Query* m : have) {
      auto it = wc.find(m);
      if (it == wc.end())
        throw BpwError("games: proof line member missing from the target: " +
                       render(m));
      if (used[m] < it->second) {
        out.push_back(m);
        ++used[m];
      }
    }
    return out;
  };
  Sequent mid{clip(cur.left, target.left), clip(cur.right, target.right)};
  uint32_t i = ln;
  if (!ms_eq(mid.left, cur.left) || !ms_eq(mid.right, cur.right))
    i = pb.contract_to(i, mid);
  return pb.weaken_to(i, target);
}

}  // namespace

const char* game_sys_name(GameSys s) { return s == GameSys::DB ? "DB" : "NB"; }

std::optional<GameSys> game_sys_from_name(const std::string& name) {
  if (name == "DB") return GameSys::DB;
  if (name == "NB") return GameSys::NB;
  return std::nullopt;
}

void GameState::assign(const Query* q, bool b) { bits[q] |= b ? 2 : 1; }

bool GameState::has(const Query* q, bool b) const {
  auto it = bits.find(q);
  return it != bits.end() && (it->second & (b ? 2 : 1));
}

bool GameState::both(const Query* q) const {
  auto it = bits.find(q);
  return it != bits.end() && it->second == 3;
}

std::optional<bool> GameState::value(const Query* q) const {
  auto it = bits.find(q);
  if (it == bits.end()) return std::nullopt;
  if (it->second == 1) return false;
  if (it->second == 2) return true;
  return std::nullopt;
}

GameState state_of_sequent(const Sequent& s) {
  GameState st;
  for (const Query* q : s.left) st.assign(q, true);
  for (const Query* q : s.right) st.assign(q, false);
  return st;
}

GameState state_of_pairs(
    const std::vector<std::pair<const Query*, bool>>& initial) {
  GameState st;
  for (const auto& [q, b] : initial) st.assign(q, b);
  return st;
}

const char* ckind_name(CKind k) {
  switch (k) {
    case CKind::BoolConst:
      return "bool_const";
    case CKind::Decision:
      return "decision";
    case CKind::ConnNot:
      return "connective_not";
    case CKind::ConnOr:
      return "connective_or";
    case CKind::ConnAnd:
      return "connective_and";
    case CKind::Extension:
      return "extension";
    case CKind::Similarity:
      return "similarity";
  }
  return "?";
}

std::optional<CKind> ckind_from_name(const std::string& name) {
  for (CKind k : {CKind::BoolConst, CKind::Decision, CKind::ConnNot,
                  CKind::ConnOr, CKind::ConnAnd, CKind::Extension,
                  CKind::Similarity})
    if (name == ckind_name(k)) return k;
  return std::nullopt;
}

std::vector<Contradiction> detect(const GameState& st, const ExtAxiomSet& E,
                                  GameSys sys, const DetectOpts& opts) {
  std::vector<std::pair<const Query*, uint8_t>> ent(st.bits.begin(),
                                                    st.bits.end());
  std::sort(ent.begin(), ent.end(), [](const auto& a, const auto& b) {
    return a.first->id < b.first->id;
  });
  for (const auto& [q, m] : ent) {
    (void)m;
    if (!class_ok(q, E, sys))
      throw BpwError(std::string(game_sys_name(sys)) +
                     " state holds a query outside the class: " + render(q));
  }
  std::vector<Contradiction> out;
  auto add = [&](CKind k, std::vector<std::pair<const Query*, bool>> w) {
    out.push_back({k, std::move(w)});
    return opts.first_only;
  };
  // Both answers on one query. A program against itself is the reflexive
  // similarity; a compound clash names its top connective.
  for (const auto& [q, m] : ent) {
    if (m != 3) continue;
    CKind k = CKind::Similarity;
    if (q->kind == QKind::Not)
      k = CKind::ConnNot;
    else if (q->kind == QKind::QOr)
      k = CKind::ConnOr;
    else if (q->kind == QKind::QAnd)
      k = CKind::ConnAnd;
    if (add(k, {{q, false}, {q, true}})) return out;
  }
  for (const auto& [q, m] : ent) {
    if (q->kind != QKind::Base) continue;
    if (q->f->kind == FKind::C0 && (m & 2)) {
      if (add(CKind::BoolConst, {{q, true}})) return out;
    }
    if (q->f->kind == FKind::C1 && (m & 1)) {
      if (add(CKind::BoolConst, {{q, false}})) return out;
    }
  }
  for (const auto& [q, m] : ent) {
    if (q->kind != QKind::Not) continue;
    for (int b = 0; b < 2; ++b)
      if ((m & (b ? 2 : 1)) && st.has(q->a, b)) {
        if (add(CKind::ConnNot, {{q->a, (bool)b}, {q, (bool)b}})) return out;
      }
  }
  for (const auto& [q, m] : ent) {
    if (q->kind != QKind::Base || q->f->kind != FKind::Dec) continue;
    const Query* P = qbase(fpvar(q->f->var));
    const Query* A = qbase(q->f->a);
    const Query* B = qbase(q->f->b);
    for (int c = 0; c < 2; ++c) {
      if (!(m & (c ? 2 : 1))) continue;
      for (int i = 0; i < 2; ++i) {
        const Query* br = i ? B : A;
        if (st.has(P, i) && st.has(br, !c)) {
          if (add(CKind::Decision, {{q, (bool)c}, {P, (bool)i}, {br, !c}}))
            return out;
        }
      }
      if (st.has(A, !c) && st.has(B, !c)) {
        if (add(CKind::Decision, {{q, (bool)c}, {A, !c}, {B, !c}})) return out;
      }
    }
  }
  for (const auto& [q, m] : ent) {
    if (!q_is_or(q)) continue;
    const Query* l = q_left(q);
    const Query* r = q_right(q);
    if (m & 1) {
      if (st.has(l, true)) {
        if (add(CKind::ConnOr, {{q, false}, {l, true}})) return out;
      }
      if (r != l && st.has(r, true)) {
        if (add(CKind::ConnOr, {{q, false}, {r, true}})) return out;
      }
    }
    if ((m & 2) && st.has(l, false) && st.has(r, false)) {
      if (add(CKind::ConnOr, {{q, true}, {l, false}, {r, false}})) return out;
    }
  }
  for (const auto& [q, m] : ent) {
    if (!q_is_and(q)) continue;
    const Query* l = q_left(q);
    const Query* r = q_right(q);
    if (m & 2) {
      if (st.has(l, false)) {
        if (add(CKind::ConnAnd, {{q, true}, {l, false}})) return out;
      }
      if (r != l && st.has(r, false)) {
        if (add(CKind::ConnAnd, {{q, true}, {r, false}})) return out;
      }
    }
    if ((m & 1) && st.has(l, true) && st.has(r, true)) {
      if (add(CKind::ConnAnd, {{q, false}, {l, true}, {r, true}})) return out;
    }
  }
  for (const auto& [q, m] : ent) {
    if (q->kind != QKind::Base || q->f->kind != FKind::EVar) continue;
    const Formula* body = E.def(q->f->var);
    if (!body) continue;
    const Query* bq = qbase(body);
    for (int b = 0; b < 2; ++b)
      if ((m & (b ? 2 : 1)) && st.has(bq, !b)) {
        if (add(CKind::Extension, {{q, (bool)b}, {bq, !b}})) return out;
      }
  }
  size_t budget = opts.sim_budget;
  for (const auto& [p, mp] : ent) {
    if (p->kind != QKind::Base || !(mp & 1)) continue;
    for (const auto& [rr, mr] : ent) {
      if (rr->kind != QKind::Base || !(mr & 2) || rr == p) continue;
      if (budget == 0) return out;
      --budget;
      if (check_simulation(p->f, rr->f, E)) {
        if (add(CKind::Similarity, {{p, false}, {rr, true}})) return out;
      }
    }
  }
  return out;
}

Strat make_leaf(std::optional<Contradiction> win) {
  auto s = std::make_shared<Strategy>();
  s->win = std::move(win);
  return s;
}

Strat make_ask(const Query* q, Strat on0, Strat on1) {
  if (!q || !on0 || !on1) throw BpwError("games: malformed ask node");
  auto s = std::make_shared<Strategy>();
  s->q = q;
  s->on0 = std::move(on0);
  s->on1 = std::move(on1);
  return s;
}

int strategy_depth(const Strat& s) {
  if (!s || !s->q) return 0;
  return 1 + std::max(strategy_depth(s->on0), strategy_depth(s->on1));
}

size_t strategy_nodes(const Strat& s) {
  if (!s) return 0;
  if (!s->q) return 1;
  return 1 + strategy_nodes(s->on0) + strategy_nodes(s->on1);
}

VerifyResult verify_strategy(const Strat& s, const GameState& initial,
                             const ExtAxiomSet& E, GameSys sys,
                             const DetectOpts& opts) {
  DetectOpts d = opts;
  d.first_only = true;
  std::vector<std::pair<const Query*, bool>> path;
  std::function<std::optional<VerifyResult>(const Strat&, const GameState&)>
      rec = [&](const Strat& node,
                const GameState& st) -> std::optional<VerifyResult> {
    if (!node) return VerifyResult{false, path, "null strategy node"};
    if (!node->q) {
      auto cs = detect(st, E, sys, d);
      if (cs.empty())
        return VerifyResult{false, path, "leaf holds no contradiction"};
      return std::nullopt;
    }
    for (int b = 0; b < 2; ++b) {
      GameState nst = st;
      nst.assign(node->q, b);
      path.push_back({node->q, (bool)b});
      auto res = rec(b ? node->on1 : node->on0, nst);
      if (res) return res;
      path.pop_back();
    }
    return std::nullopt;
  };
  auto res = rec(s, initial);
  if (res) return *res;
  return VerifyResult{};
}

int query_depth(const Query* q, const ExtAxiomSet& E) {
  switch (view_kind(q, E, GameSys::NB)) {
    case kLeaf:
      return 0;
    case kNot:
      return 1 + query_depth(q->a, E);
    default:
      return 1 + std::max(query_depth(q_left(q), E), query_depth(q_right(q), E));
  }
}

size_t query_leafcount(const Query* q, const ExtAxiomSet& E) {
  switch (view_kind(q, E, GameSys::NB)) {
    case kLeaf:
      return 1;
    case kNot:
      return query_leafcount(q->a, E);
    default:
      return query_leafcount(q_left(q), E) + query_leafcount(q_right(q), E);
  }
}

const Query* big_and(const Cedent& c) { return big_and_range(c, 0, c.size()); }

const Query* big_or(const Cedent& c) { return big_or_range(c, 0, c.size()); }

const Query* imp_query(const Sequent& s) {
  return qor(qnot(big_and(s.left)), big_or(s.right));
}

Strat strat_find_force(FFGoal goal, const Query* driver, const Query* target,
                       const GameState& st, const ExtAxiomSet& E, GameSys sys,
                       const DetectOpts& opts) {
  Ctx cx{E, sys, opts};
  KS open = [](GameState) { return make_leaf(); };
  KQ open2 = [](GameState, const Query*) { return make_leaf(); };
  auto need = [&](bool b) {
    if (!st.has(driver, b))
      throw BpwError(std::string("find/force: driver must be answered ") +
                     (b ? "1" : "0"));
  };
  switch (goal) {
    case FFGoal::FindConjunctFalse:
      need(false);
      return find_false_view(cx, driver, st, open2);
    case FFGoal::FindDisjunctTrue:
      need(true);
      return find_true_view(cx, driver, st, open2);
    case FFGoal::ForceConjunct: {
      need(true);
      std::vector<bool> path;
      if (!view_path_to(cx, driver, target, kAnd, path))
        throw BpwError("find/force: target does not occur in the driver");
      return force_true_view(cx, driver, path, 0, st, open);
    }
    case FFGoal::ForceDisjunct: {
      need(false);
      std::vector<bool> path;
      if (!view_path_to(cx, driver, target, kOr, path))
        throw BpwError("find/force: target does not occur in the driver");
      return force_false_view(cx, driver, path, 0, st, open);
    }
    case FFGoal::ForceImplicationParts:
      return force_imp(cx, driver, st, open);
  }
  throw BpwError("find/force: unknown goal");
}

Strat local_soundness(Rule r, const Sequent& conc,
                      const std::vector<Sequent>& prems, const ExtAxiomSet& E,
                      GameSys sys, std::optional<ExtAux> ext,
                      const DetectOpts& opts) {
  Ctx cx{E, sys, opts};
  GameState st;
  st.assign(imp_query(conc), false);
  for (const Sequent& p : prems) st.assign(imp_query(p), true);
  return ls_build(cx, r, conc, prems, ext, std::move(st));
}

Strat proof_to_strategy(const Proof& pf, const DetectOpts& opts) {
  CheckResult cr = check_proof(pf);
  if (!cr.ok)
    throw BpwError("proof_to_strategy: proof does not check: " + cr.error);
  GameSys sys;
  switch (pf.system) {
    case System::LDT:
    case System::eLDT:
      sys = GameSys::DB;
      break;
    case System::LNDT:
    case System::eLNDT:
      sys = GameSys::NB;
      break;
    default:
      throw BpwError(
          "proof_to_strategy: the system must be a plain decision calculus");
  }
  AxiomSetPtr hold = pf.axioms ? pf.axioms : empty_axioms();
  Ctx cx{*hold, sys, opts};
  const size_t n = pf.lines.size();
  if (n == 0) throw BpwError("proof_to_strategy: empty proof");
  Cedent Qs(n);
  for (size_t i = 0; i < n; ++i) Qs[i] = imp_query(pf.lines[i].seq);
  const Sequent& conc = pf.lines.back().seq;
  const Query* Lc = big_and(conc.left);
  const Query* Rc = big_or(conc.right);
  KS close1 = [&cx](GameState s) { return close_leaf(cx, std::move(s)); };
  KF closef = [&cx](GameState s, size_t) {
    return close_leaf(cx, std::move(s));
  };

  // The prefix conjunction over [0, u) is answered 0; line u - 1 is the
  // failing one once every earlier implication is pinned true.
  std::function<Strat(size_t, GameState)> at_line = [&](size_t u,
                                                        GameState st) -> Strat {
    size_t i = u - 1;
    return find_false_range(
        cx, Qs, 0, u, std::move(st), [&, i](GameState s, size_t jf) -> Strat {
          if (jf != i)
            return force_true_range(cx, Qs, 0, i, jf, std::move(s), close1);
          const ProofLine& L = pf.lines[i];
          auto prems = std::make_shared<std::vector<Sequent>>();
          for (uint32_t p : L.prem) prems->push_back(pf.lines[p].seq);
          auto step = std::make_shared<std::function<Strat(size_t, GameState)>>();
          *step = [&, i, prems, step](size_t pi, GameState s2) -> Strat {
            const ProofLine& ln = pf.lines[i];
            if (pi == ln.prem.size())
              return ls_build(cx, ln.rule, ln.seq, *prems, ln.ext,
                              std::move(s2));
            return force_true_range(cx, Qs, 0, i, ln.prem[pi], std::move(s2),
                                    [step, pi](GameState s3) {
                                      return (*step)(pi + 1, std::move(s3));
                                    });
          };
          return (*step)(0, std::move(s));
        });
  };
  std::function<Strat(size_t, size_t, GameState)> search =
      [&](size_t l, size_t u, GameState st) -> Strat {
    if (u - l == 1) return at_line(u, std::move(st));
    size_t j = (l + u) / 2;
    const Query* qj = big_and_range(Qs, 0, j);
    return ask_skip(
        cx, std::move(st), qj,
        [&, l, j](GameState s) { return search(l, j, std::move(s)); },
        [&, j, u](GameState s) { return search(j, u, std::move(s)); });
  };

  GameState st0 = state_of_sequent(conc);
  return ask_skip(
      cx, std::move(st0), Lc,
      [&](GameState s) {
        return find_false_range(cx, conc.left, 0, conc.left.size(),
                                std::move(s), closef);
      },
      [&](GameState s) {
        return ask_skip(
            cx, std::move(s), Rc,
            [&](GameState s2) {
              return ask_skip(
                  cx, std::move(s2), Qs[n - 1],
                  [&](GameState s3) {
                    const Query* qn = big_and_range(Qs, 0, n);
                    return ask_skip(
                        cx, std::move(s3), qn,
                        [&](GameState s4) { return search(0, n, std::move(s4)); },
                        [&](GameState s4) {
                          return force_true_range(cx, Qs, 0, n, n - 1,
                                                  std::move(s4), close1);
                        });
                  },
                  [&](GameState s3) {
                    const Query* nl = q_left(Qs[n - 1]);
                    return ask_skip(cx, std::move(s3), nl, close1, close1);
                  });
            },
            [&](GameState s2) {
              return find_true_range(cx, conc.right, 0, conc.right.size(),
                                     std::move(s2), closef);
            });
      });
}

const Query* dm_query(const Query* q, const ExtAxiomSet& E) {
  return dm_pos(q, E);
}

bool is_dm_query(const Query* q, const ExtAxiomSet& E) {
  return dm_query(q, E) == q;
}

Strat dm_strategy(const Strat& s, const GameState& initial,
                  const ExtAxiomSet& E, const DetectOpts& opts) {
  Ctx cx{E, GameSys::NB, opts};
  DetectOpts d = opts;
  d.first_only = true;
  GameState dminit;
  for (const auto& [q, m] : initial.bits) dminit.bits[dm_query(q, E)] |= m;
  std::function<Strat(const Strat&, GameState, GameState)> rec =
      [&](const Strat& node, GameState orig, GameState dmst) -> Strat {
    if (!node) throw BpwError("dm: null strategy node");
    if (node->q) {
      const Query* dq = dm_query(node->q, E);
      GameState o0 = orig;
      o0.assign(node->q, false);
      GameState d0 = dmst;
      d0.assign(dq, false);
      GameState o1 = std::move(orig);
      o1.assign(node->q, true);
      GameState d1 = std::move(dmst);
      d1.assign(dq, true);
      Strat b0 = rec(node->on0, std::move(o0), std::move(d0));
      Strat b1 = rec(node->on1, std::move(o1), std::move(d1));
      return make_ask(dq, std::move(b0), std::move(b1));
    }
    auto cs = detect(dmst, E, GameSys::NB, d);
    if (!cs.empty()) return make_leaf(cs[0]);
    // Only a negation over a compound query loses its contradiction in the
    // rewrite; duality on the pair recovers it.
    std::vector<std::pair<const Query*, uint8_t>> ent(orig.bits.begin(),
                                                      orig.bits.end());
    std::sort(ent.begin(), ent.end(), [](const auto& a, const auto& b) {
      return a.first->id < b.first->id;
    });
    for (const auto& [q, m] : ent) {
      if (q->kind != QKind::Not) continue;
      for (int b = 0; b < 2; ++b) {
        if (!(m & (b ? 2 : 1)) || !orig.has(q->a, b)) continue;
        const Query* dmq = dm_query(q->a, E);
        const Query* dmqd = dm_query(q, E);
        if (!dmst.has(dmq, b) || !dmst.has(dmqd, b))
          throw BpwError("dm: rewritten pair is missing from the state");
        return duality_dm(cx, pair_build(dmq, dmqd, E), b, std::move(dmst));
      }
    }
    throw BpwError("dm: leaf holds no contradiction after the rewrite");
  };
  return rec(s, initial, std::move(dminit));
}

const Query* context_sub(const QueryContext& c, const ExtAxiomSet& E) {
  const Query* q = c.root;
  for (bool step : c.path) {
    switch (view_kind(q, E, GameSys::NB)) {
      case kNot:
        if (step) throw BpwError("context: negation has only one child");
        q = q->a;
        break;
      case kOr:
      case kAnd:
        q = step ? q_right(q) : q_left(q);
        break;
      default:
        throw BpwError("context: path descends below a leaf");
    }
  }
  return q;
}

const Query* context_plug(const QueryContext& c, const Query* x,
                          const ExtAxiomSet& E) {
  LS shape = lshape_of(c.root, E, GameSys::NB);
  return ls_plugobj(shape, c.path, 0, c.path.size(), x);
}

Strat leibniz_strategy(const Query* p, const Query* pp, bool b,
                       const QueryContext& c, bool cval, const GameState& st,
                       const ExtAxiomSet& E, GameSys sys,
                       const DetectOpts& opts) {
  Ctx cx{E, sys, opts};
  LS shape = lshape_of(c.root, E, sys);
  ls_sub(shape, c.path, 0, c.path.size());  // validates the path
  return leibniz_int(cx, shape, c.path, 0, c.path.size(), p, pp, b, cval, st);
}

SpiraCut spira_subtree(const Query* q, const ExtAxiomSet& E) {
  LS root = lshape_of(q, E, GameSys::NB);
  size_t total = root->leaves;
  if (total < 2) throw BpwError("spira: query has fewer than two leaves");
  const LShape* best = nullptr;
  std::vector<bool> bpath;
  int bdepth = -1;
  std::vector<bool> path;
  std::function<void(const LShape*, int)> go = [&](const LShape* n,
                                                   int depth) {
    if (3 * n->leaves >= total && 3 * n->leaves < 2 * total &&
        depth > bdepth) {
      bdepth = depth;
      best = n;
      bpath = path;
    }
    switch (n->kind) {
      case kNot:
        path.push_back(false);
        go(n->a.get(), depth + 1);
        path.pop_back();
        break;
      case kOr:
      case kAnd:
        path.push_back(false);
        go(n->a.get(), depth + 1);
        path.back() = true;
        go(n->b.get(), depth + 1);
        path.pop_back();
        break;
      default:
        break;
    }
  };
  go(root.get(), 0);
  if (!best) throw BpwError("spira: no balanced subquery");
  return SpiraCut{best->obj, std::move(bpath)};
}

Strat duality_strategy(const Query* q, bool b, const ExtAxiomSet& E,
                       const DetectOpts& opts) {
  Ctx cx{E, GameSys::NB, opts};
  const Query* dmq = dm_query(q, E);
  const Query* dmqd = dm_query(qnot(q), E);
  GameState st;
  st.assign(dmq, b);
  st.assign(dmqd, b);
  return duality_dm(cx, pair_build(dmq, dmqd, E), b, std::move(st));
}

Proof strategy_to_proof_det(const Strat& s, const Sequent& goal,
                            const AxiomSetPtr& E, const DetectOpts& opts) {
  AxiomSetPtr hold = E ? E : empty_axioms();
  GameState init = state_of_sequent(goal);
  VerifyResult vr = verify_strategy(s, init, *hold, GameSys::DB, opts);
  if (!vr.ok) throw BpwError("strategy_to_proof: " + vr.error);
  ProofBuilder pb(System::LK_eLDT, hold);
  DetectOpts d = opts;
  d.first_only = true;
  TrFn id = [](const Query* q) { return q; };
  std::function<uint32_t(const Strat&, GameState, const Cedent&,
                         const Cedent&)>
      rec = [&](const Strat& node, GameState st, const Cedent& L,
                const Cedent& R) -> uint32_t {
    if (node->q) {
      Cedent R0 = with_member(Cedent(R), {node->q});
      Cedent L1 = with_member(Cedent(L), {node->q});
      GameState s0 = st;
      s0.assign(node->q, false);
      GameState s1 = std::move(st);
      s1.assign(node->q, true);
      uint32_t p0 = rec(node->on0, std::move(s0), L, R0);
      uint32_t p1 = rec(node->on1, std::move(s1), L1, R);
      return pb.cut(p0, p1, node->q);
    }
    auto cs = detect(st, *hold, GameSys::DB, d);
    if (cs.empty())
      throw BpwError("strategy_to_proof: reached a leaf with no win");
    return fit_to(pb, contr_line(pb, cs[0], id), Sequent{L, R});
  };
  uint32_t last = rec(s, init, goal.left, goal.right);
  return eliminate_bool(pb.take(last));
}

Proof strategy_to_proof_nondet(const Strat& s0, const Sequent& goal,
                               const AxiomSetPtr& E0, const DetectOpts& opts) {
  AxiomSetPtr hold = E0 ? E0 : empty_axioms();
  for (const Query* q : goal.left)
    if (q->kind != QKind::Base)
      throw BpwError(
          "strategy_to_proof stage verify: goal members must be programs");
  for (const Query* q : goal.right)
    if (q->kind != QKind::Base)
      throw BpwError(
          "strategy_to_proof stage verify: goal members must be programs");
  GameState init = state_of_sequent(goal);
  {
    VerifyResult vr = verify_strategy(s0, init, *hold, GameSys::NB, opts);
    if (!vr.ok) throw BpwError("strategy_to_proof stage verify: " + vr.error);
  }
  Strat dm;
  try {
    dm = dm_strategy(s0, init, *hold, opts);
  } catch (const BpwError& e) {
    throw BpwError(std::string("strategy_to_proof stage dm: ") + e.what());
  }

  Proof lk;
  try {
    // Every program the rewritten strategy can mention, in first-use order.
    std::vector<const Formula*> B;
    std::map<const Formula*, int> idx;
    std::function<void(const Query*)> atoms = [&](const Query* q) {
      switch (view_kind(q, *hold, GameSys::NB)) {
        case kLeaf:
          if (q->kind == QKind::Base && !idx.count(q->f)) {
            idx[q->f] = (int)B.size();
            B.push_back(q->f);
          }
          break;
        case kNot:
          atoms(q->a);
          break;
        default:
          atoms(q_left(q));
          atoms(q_right(q));
      }
    };
    for (const Query* q : goal.left) atoms(q);
    for (const Query* q : goal.right) atoms(q);
    std::function<void(const Strat&)> walk = [&](const Strat& node) {
      if (!node->q) return;
      atoms(node->q);
      walk(node->on0);
      walk(node->on1);
    };
    walk(dm);
    const int N = (int)B.size();

    ProofBuilder pb(System::LKpos_eLNDT, hold);
    DetectOpts d = opts;
    d.first_only = true;
    std::map<std::pair<int, int>, ImmSzel> ims;
    std::vector<uint32_t> perk;
    for (int k = 0; k <= N; ++k) {
      // Replace each negated program by the decider that inverts it on the
      // slice where exactly k programs are true.
      std::map<const Query*, const Query*> memo;
      std::function<const Query*(const Query*)> trk =
          [&](const Query* q) -> const Query* {
        auto it = memo.find(q);
        if (it != memo.end()) return it->second;
        const Query* out;
        switch (q->kind) {
          case QKind::Base:
            out = q;
            break;
          case QKind::Not: {
            if (q->a->kind != QKind::Base || !idx.count(q->a->f))
              throw BpwError("negation did not reduce to a program");
            DeciderSpec ds{B, idx[q->a->f], k, f1(), f0()};
            out = qbase(decider_cell(pb, ds, 0, 0, 0));
            break;
          }
          case QKind::QOr:
            out = qor(trk(q->a), trk(q->b));
            break;
          default:
            out = qand(trk(q->a), trk(q->b));
        }
        memo[q] = out;
        return out;
      };
      const Query* thrk = qbase(threshold(pb, B, 0, k));
      const Query* thrk1 = qbase(threshold(pb, B, 0, k + 1));
      std::function<uint32_t(const Strat&, GameState, const Cedent&,
                             const Cedent&)>
          rec = [&](const Strat& node, GameState st, const Cedent& L,
                    const Cedent& R) -> uint32_t {
        if (node->q) {
          const Query* tq = trk(node->q);
          Cedent R0 = with_member(Cedent(R), {tq});
          Cedent L1 = with_member(Cedent(L), {tq});
          GameState st0 = st;
          st0.assign(node->q, false);
          GameState st1 = std::move(st);
          st1.assign(node->q, true);
          uint32_t p0 = rec(node->on0, std::move(st0), L, R0);
          uint32_t p1 = rec(node->on1, std::move(st1), L1, R);
          return pb.cut(p0, p1, tq);
        }
        auto cs = detect(st, *hold, GameSys::NB, d);
        if (cs.empty())
          throw BpwError("reached a leaf with no win");
        const Contradiction& c = cs[0];
        if (c.kind == CKind::ConnNot &&
            c.witness[0].first != c.witness[1].first) {
          const Query* S = c.witness[0].first;
          bool b = c.witness[0].second;
          if (S->kind != QKind::Base || !idx.count(S->f))
            throw BpwError("negation did not reduce to a program");
          auto key = std::make_pair(k, idx[S->f]);
          auto it = ims.find(key);
          if (it == ims.end()) {
            DeciderSpec ds{B, key.second, k, f1(), f0()};
            it = ims.emplace(key, immszel_proofs(pb, ds)).first;
          }
          uint32_t core =
              b ? pb.cut2(it->second.g3, pb.zero_l(), qbase(f0()))
                : pb.cut2(pb.one_r(), it->second.g2, qbase(f1()));
          return fit_to(pb, core, Sequent{L, R});
        }
        TrFn tr = [&](const Query* q) { return trk(q); };
        return fit_to(pb, contr_line(pb, c, tr), Sequent{L, R});
      };
      Cedent L0 = with_member({thrk}, {});
      for (const Query* q : goal.left) L0.push_back(q);
      Cedent R0 = goal.right;
      R0.push_back(thrk1);
      perk.push_back(rec(dm, init, L0, R0));
    }
    // Chain the counts: start below every threshold, step through each
    // count, and cap past the last.
    uint32_t cur = thr_mono_zero(pb, B, 0, 0);
    for (int k = 0; k <= N; ++k)
      cur = pb.cut2(cur, perk[k], qbase(threshold(pb, B, 0, k)));
    cur = pb.cut2(cur, thr_mono_big(pb, B, 0, N + 1),
                  qbase(threshold(pb, B, 0, N + 1)));
    cur = fit_to(pb, cur, goal);
    lk = pb.take(cur);
  } catch (const BpwError& e) {
    throw BpwError(std::string("strategy_to_proof stage translate: ") +
                   e.what());
  }
  try {
    return eliminate_pos(lk);
  } catch (const BpwError& e) {
    throw BpwError(std::string("strategy_to_proof stage eliminate: ") +
                   e.what());
  }
}

PlayResult play(const Strat& s, const GameState& initial,
                const ExtAxiomSet& E, GameSys sys,
                const std::vector<int>& script, std::istream* in,
                std::ostream* out, const DetectOpts& opts) {
  RenderNames rn = render_names_for(E);
  DetectOpts d = opts;
  d.first_only = true;
  GameState st = initial;
  const Strategy* cur = s.get();
  size_t si = 0;
  std::ostringstream tr;
  auto emit = [&](const std::string& line) {
    tr << line << "\n";
    if (out) (*out) << line << "\n";
  };
  while (true) {
    if (!cur) throw BpwError("play: null strategy node");
    if (!cur->q) {
      auto cs = detect(st, E, sys, d);
      if (cs.empty()) {
        emit("FAIL no contradiction at the reached leaf");
        return PlayResult{false, std::nullopt, tr.str()};
      }
      emit(std::string("WIN ") + ckind_name(cs[0].kind));
      return PlayResult{true, cs[0], tr.str()};
    }
    emit("ASK " + render(cur->q, &rn));
    int b;
    if (si < script.size()) {
      b = script[si++];
      if (b != 0 && b != 1)
        throw BpwError("play: script answers must be 0 or 1");
    } else if (in) {
      std::string line;
      if (!std::getline(*in, line)) throw BpwError("play: ran out of answers");
      size_t a = line.find_first_not_of(" \t\r");
      size_t z = line.find_last_not_of(" \t\r");
      line = a == std::string::npos ? "" : line.substr(a, z - a + 1);
      if (line == "0")
        b = 0;
      else if (line == "1")
        b = 1;
      else
        throw BpwError("play: malformed answer line: " + line);
    } else {
      throw BpwError("play: ran out of answers");
    }
    emit(std::string("ANS ") + (b ? "1" : "0"));
    st.assign(cur->q, b);
    cur = (b ? cur->on1 : cur->on0).get();
  }
}

std::string write_strategy_json(
    const Strat& s, GameSys sys, const AxiomSetPtr& E,
    const std::vector<std::pair<const Query*, bool>>& initial,
    const std::string& axioms_path) {
  const ExtAxiomSet& ax = E ? *E : *empty_axioms();
  RenderNames rn = render_names_for(ax);
  json top;
  top["system"] = game_sys_name(sys);
  top["axioms"] = axioms_path.empty() ? render_axioms(ax) : axioms_path;
  json init = json::array();
  for (const auto& [q, b] : initial)
    init.push_back({{"q", render(q, &rn)}, {"b", b ? 1 : 0}});
  top["initial"] = std::move(init);
  std::function<json(const Strat&)> emit = [&](const Strat& node) -> json {
    if (!node) throw BpwError("strategy json: null node");
    if (node->q)
      return json{{"q", render(node->q, &rn)},
                  {"0", emit(node->on0)},
                  {"1", emit(node->on1)}};
    json leaf = json::object();
    if (node->win) leaf["kind"] = ckind_name(node->win->kind);
    return json{{"leaf", std::move(leaf)}};
  };
  top["root"] = emit(s);
  return top.dump(1);
}

StrategyFile read_strategy_json(const std::string& text,
                                const std::string& base_dir) {
  json top;
  try {
    top = json::parse(text);
  } catch (const json::exception& e) {
    throw BpwError(std::string("bad strategy JSON: ") + e.what());
  }
  if (!top.is_object())
    throw BpwError("strategy JSON must be an object with a header");
  StrategyFile out;
  auto sys = game_sys_from_name(top.value("system", ""));
  if (!sys) throw BpwError("strategy header has no valid \"system\"");
  out.sys = *sys;
  std::string ax = top.value("axioms", "");
  if (ax.find(":=") != std::string::npos ||
      ax.find('\n') != std::string::npos) {
    out.axioms = parse_axioms(ax);
  } else if (ax.empty()) {
    out.axioms = empty_axioms();
  } else {
    std::string path = ax;
    if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
    std::ifstream in(path);
    if (!in) throw BpwError("cannot open axiom file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    out.axioms = parse_axioms(ss.str());
  }
  if (top.contains("initial")) {
    for (const json& e : top.at("initial")) {
      const Query* q = parse_query(e.value("q", ""));
      int b = e.value("b", -1);
      if (b != 0 && b != 1)
        throw BpwError("strategy initial entries need \"b\" of 0 or 1");
      out.initial.push_back({q, b == 1});
    }
  }
  if (!top.contains("root"))
    throw BpwError("strategy JSON has no \"root\" tree");
  std::function<Strat(const json&)> rec = [&](const json& o) -> Strat {
    if (!o.is_object())
      throw BpwError("strategy node must be an object");
    if (o.contains("q")) {
      if (!o.contains("0") || !o.contains("1"))
        throw BpwError("ask node needs both \"0\" and \"1\" branches");
      const Query* q = parse_query(o.at("q").get<std::string>());
      return make_ask(q, rec(o.at("0")), rec(o.at("1")));
    }
    if (o.contains("leaf")) {
      const json& leaf = o.at("leaf");
      if (leaf.contains("kind")) {
        auto k = ckind_from_name(leaf.at("kind").get<std::string>());
        if (!k) throw BpwError("unknown contradiction kind in a leaf");
        return make_leaf(Contradiction{*k, {}});
      }
      return make_leaf();
    }
    throw BpwError("strategy node must be an ask or a leaf");
  };
  out.root = rec(top.at("root"));
  return out;
}

}  // namespace bpw
