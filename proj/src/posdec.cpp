#include "bpw/posdec.hpp"

#include <string>
#include <unordered_map>

namespace bpw {

namespace {

struct PosCtx {
  ProofBuilder& pb;
  const Formula* a;
  const Formula* c;
  std::unordered_map<const Formula*, const Formula*> memo;  // by middle
};

const Formula* build(PosCtx& cx, const Formula* b) {
  if (b->kind == FKind::C0) return cx.a;
  if (b->kind == FKind::C1) return f_or(cx.a, cx.c);
  auto it = cx.memo.find(b);
  if (it != cx.memo.end()) return it->second;
  const Formula* r = nullptr;
  switch (b->kind) {
    case FKind::EVar: {
      const Formula* d = cx.pb.aset().def(b->var);
      if (!d)
        throw BpwError("posdec middle uses undefined variable " +
                       evar_name(b->var));
      r = build(cx, d);
      break;
    }
    case FKind::PVar:
    case FKind::Dec:
    case FKind::Or: {
      std::string key = "pos:" + std::to_string(cx.a->id) + ":" +
                        std::to_string(b->id) + ":" + std::to_string(cx.c->id);
      EVarId v = evar_generated(Sort::E, key);
      const Formula* body;
      if (b->kind == FKind::PVar)
        body = fdec(cx.a, b->var, f_or(cx.a, cx.c));
      else if (b->kind == FKind::Dec)
        body = fdec(build(cx, b->a), b->var, build(cx, b->b));
      else
        body = f_or(build(cx, b->a), build(cx, b->b));
      cx.pb.define_evar(v, body);
      r = fevar(v);
      break;
    }
    case FKind::And:
      throw BpwError("posdec middle must be conjunction-free");
    default:
      break;
  }
  cx.memo.emplace(b, r);
  return r;
}

struct TruthCtx {
  ProofBuilder& pb;
  const Formula* a;
  const Formula* c;
  std::unordered_map<const Formula*, PosTruth> memo;
};

PosTruth truth(TruthCtx& cx, const Formula* b);

// Truth proofs where P is a defined variable v with body W (a decision or
// disjunction over the sub-results); first proves the sequents for W, then
// cuts the two extension lines for v.
PosTruth seal(TruthCtx& cx, const Formula* vp, uint32_t w1, uint32_t w2,
              uint32_t w3, uint32_t w4) {
  ProofBuilder& pb = cx.pb;
  EVarId v = vp->var;
  uint32_t lr = pb.ext_line(v, true);   // v |- W
  uint32_t rl = pb.ext_line(v, false);  // W |- v
  const Formula* w = pb.aset().def(v);
  const Query* wq = qbase(w);
  PosTruth t;
  t.p = vp;
  t.t1 = pb.cut2(lr, w1, wq);
  t.t2 = pb.cut2(lr, w2, wq);
  t.t3 = pb.cut2(w3, rl, wq);
  t.t4 = pb.cut2(w4, rl, wq);
  return t;
}

PosTruth truth_const0(TruthCtx& cx) {
  ProofBuilder& pb = cx.pb;
  const Query* aq = qbase(cx.a);
  const Query* cq = qbase(cx.c);
  PosTruth t;
  t.p = cx.a;
  uint32_t ida = pb.id_line(aq);
  t.t1 = pb.wr(ida, qbase(f0()));
  t.t2 = pb.wr(ida, cq);
  t.t3 = ida;
  t.t4 = pb.wr(pb.wl(pb.zero_l(), cq), aq);
  return t;
}

PosTruth truth_const1(TruthCtx& cx) {
  ProofBuilder& pb = cx.pb;
  const Formula* pa = f_or(cx.a, cx.c);
  const Query* pq = qbase(pa);
  const Query* aq = qbase(cx.a);
  const Query* cq = qbase(cx.c);
  const Query* oneq = qbase(f1());
  PosTruth t;
  t.p = pa;
  uint32_t ida = pb.id_line(aq);
  uint32_t idc = pb.id_line(cq);
  // or(a, c) |- a, 1
  uint32_t l = pb.wr(ida, oneq);
  uint32_t r = pb.wr(pb.wl(pb.one_r(), cq), aq);
  t.t1 = pb.orl(l, r, pq);
  // or(a, c) |- a, c
  t.t2 = pb.orl(pb.wr(ida, cq), pb.wr(idc, aq), pq);
  // a |- or(a, c)
  t.t3 = pb.orr(pb.wr(ida, cq), pq);
  // 1, c |- or(a, c)
  t.t4 = pb.wl(pb.orr(pb.wr(idc, aq), pq), oneq);
  return t;
}

PosTruth truth_pvar(TruthCtx& cx, const Formula* b, const Formula* vp) {
  ProofBuilder& pb = cx.pb;
  PVarId p = b->var;
  const Query* pq = qbase(b);
  const Formula* ac = f_or(cx.a, cx.c);
  const Query* aq = qbase(cx.a);
  const Query* cq = qbase(cx.c);
  const Query* acq = qbase(ac);
  const Formula* w = fdec(cx.a, p, ac);
  const Query* wq = qbase(w);
  uint32_t ida = pb.id_line(aq);
  uint32_t idc = pb.id_line(cq);
  uint32_t idp = pb.id_line(pq);
  // w |- a, p
  uint32_t u0 = pb.wr(pb.wr(ida, pq), pq);
  uint32_t u1 = pb.wr(pb.wl(idp, acq), aq);
  uint32_t w1 = pb.decl(u0, u1, wq);
  // w |- a, c
  uint32_t v0 = pb.wr(pb.wr(ida, cq), pq);
  uint32_t v1 = pb.orl(pb.wr(pb.wl(ida, pq), cq), pb.wr(pb.wl(idc, pq), aq), acq);
  uint32_t w2 = pb.decl(v0, v1, wq);
  // a |- w
  uint32_t x0 = pb.wr(ida, pq);
  uint32_t x1 = pb.wl(pb.orr(pb.wr(ida, cq), acq), pq);
  uint32_t w3 = pb.decr(x0, x1, wq);
  // p, c |- w
  uint32_t y0 = pb.wr(pb.wl(idp, cq), aq);
  uint32_t y1 = pb.wl(pb.wl(pb.orr(pb.wr(idc, aq), acq), pq), pq);
  uint32_t w4 = pb.decr(y0, y1, wq);
  return seal(cx, vp, w1, w2, w3, w4);
}

PosTruth truth_dec(TruthCtx& cx, const Formula* b, const Formula* vp) {
  ProofBuilder& pb = cx.pb;
  PosTruth td = truth(cx, b->a);
  PosTruth te = truth(cx, b->b);
  PVarId p = b->var;
  const Query* pq = qbase(fpvar(p));
  const Query* aq = qbase(cx.a);
  const Query* cq = qbase(cx.c);
  const Query* bq = qbase(b);
  const Query* dq = qbase(b->a);
  const Query* eq = qbase(b->b);
  const Query* pdq = qbase(td.p);
  const Query* peq = qbase(te.p);
  const Formula* w = pb.aset().def(vp->var);
  const Query* wq = qbase(w);
  uint32_t idp = pb.id_line(pq);
  // w |- a, b  via dec-r on b over dec-l on w
  uint32_t g00 = pb.wr(pb.wr(td.t1, pq), pq);           // pd |- a, d, p, p
  uint32_t g01 = pb.wr(pb.wr(pb.wl(idp, peq), aq), dq); // p, pe |- a, d, p
  uint32_t g0 = pb.decl(g00, g01, wq);                  // w |- a, d, p
  uint32_t g10 = pb.wr(pb.wr(pb.wl(idp, pdq), aq), eq); // p, pd |- a, e, p
  uint32_t g11 = pb.wl(pb.wl(te.t1, pq), pq);           // p, p, pe |- a, e
  uint32_t g1 = pb.decl(g10, g11, wq);                  // w, p |- a, e
  uint32_t w1 = pb.decr(g0, g1, bq);                    // w |- a, b
  // w |- a, c
  uint32_t h0 = pb.wr(td.t2, pq);
  uint32_t h1 = pb.wl(te.t2, pq);
  uint32_t w2 = pb.decl(h0, h1, wq);
  // a |- w
  uint32_t x0 = pb.wr(td.t3, pq);
  uint32_t x1 = pb.wl(te.t3, pq);
  uint32_t w3 = pb.decr(x0, x1, wq);
  // b, c |- w  via dec-r on w over dec-l on b
  uint32_t h00 = pb.wr(pb.wr(td.t4, pq), pq);           // d, c |- pd, p, p
  uint32_t h01 = pb.wr(pb.wl(pb.wl(idp, cq), eq), pdq); // c, p, e |- pd, p
  uint32_t hh0 = pb.decl(h00, h01, bq);                 // b, c |- pd, p
  uint32_t h10 = pb.wr(pb.wl(pb.wl(idp, cq), dq), peq); // c, p, d |- pe, p
  uint32_t h11 = pb.wl(pb.wl(te.t4, pq), pq);           // p, p, e, c |- pe
  uint32_t hh1 = pb.decl(h10, h11, bq);                 // b, c, p |- pe
  uint32_t w4 = pb.decr(hh0, hh1, wq);                  // b, c |- w
  return seal(cx, vp, w1, w2, w3, w4);
}

PosTruth truth_or(TruthCtx& cx, const Formula* b, const Formula* vp) {
  ProofBuilder& pb = cx.pb;
  PosTruth td = truth(cx, b->a);
  PosTruth te = truth(cx, b->b);
  const Query* bq = qbase(b);
  const Query* dq = qbase(b->a);
  const Query* eq = qbase(b->b);
  const Query* pdq = qbase(td.p);
  const Query* peq = qbase(te.p);
  const Formula* w = pb.aset().def(vp->var);  // or(pd, pe)
  const Query* wq = qbase(w);
  // w |- a, b
  uint32_t l1 = pb.orr(pb.wr(td.t1, eq), bq);  // pd |- a, b
  uint32_t r1 = pb.orr(pb.wr(te.t1, dq), bq);  // pe |- a, b
  uint32_t w1 = pb.orl(l1, r1, wq);
  // w |- a, c
  uint32_t w2 = pb.orl(td.t2, te.t2, wq);
  // a |- w
  uint32_t w3 = pb.orr(pb.wr(td.t3, peq), wq);
  // b, c |- w
  uint32_t l4 = pb.orr(pb.wr(td.t4, peq), wq);  // d, c |- w
  uint32_t r4 = pb.orr(pb.wr(te.t4, pdq), wq);  // e, c |- w
  uint32_t w4 = pb.orl(l4, r4, bq);
  return seal(cx, vp, w1, w2, w3, w4);
}

PosTruth truth_evar(TruthCtx& cx, const Formula* b) {
  ProofBuilder& pb = cx.pb;
  const Formula* d = pb.aset().def(b->var);
  if (!d)
    throw BpwError("posdec middle uses undefined variable " +
                   evar_name(b->var));
  PosTruth tu = truth(cx, d);
  uint32_t lr = pb.ext_line(b->var, true);   // b |- d
  uint32_t rl = pb.ext_line(b->var, false);  // d |- b
  PosTruth t = tu;
  t.t1 = pb.cut2(tu.t1, rl, qbase(d));  // P |- a, b
  t.t4 = pb.cut2(lr, tu.t4, qbase(d));  // b, c |- P
  return t;
}

PosTruth truth(TruthCtx& cx, const Formula* b) {
  auto it = cx.memo.find(b);
  if (it != cx.memo.end()) return it->second;
  PosTruth t;
  switch (b->kind) {
    case FKind::C0:
      t = truth_const0(cx);
      break;
    case FKind::C1:
      t = truth_const1(cx);
      break;
    case FKind::EVar:
      t = truth_evar(cx, b);
      break;
    default: {
      PosCtx pc{cx.pb, cx.a, cx.c, {}};
      const Formula* vp = build(pc, b);
      if (b->kind == FKind::PVar)
        t = truth_pvar(cx, b, vp);
      else if (b->kind == FKind::Dec)
        t = truth_dec(cx, b, vp);
      else if (b->kind == FKind::Or)
        t = truth_or(cx, b, vp);
      else
        throw BpwError("posdec middle must be conjunction-free");
      break;
    }
  }
  cx.memo.emplace(b, t);
  return t;
}

}  // namespace

const Formula* posdec(ProofBuilder& pb, const Formula* a, const Formula* b,
                      const Formula* c) {
  PosCtx cx{pb, a, c, {}};
  return build(cx, b);
}

PosTruth pos_truth_proofs(ProofBuilder& pb, const Formula* a, const Formula* b,
                          const Formula* c) {
  TruthCtx cx{pb, a, c, {}};
  return truth(cx, b);
}

uint32_t posdec_left(ProofBuilder& pb, const Formula* a, const Formula* b,
                     const Formula* c, uint32_t r1, uint32_t r2) {
  PosTruth t = pos_truth_proofs(pb, a, b, c);
  const Query* aq = qbase(a);
  const Query* bq = qbase(b);
  const Query* cq = qbase(c);
  uint32_t l1 = pb.cut2(t.t1, r1, aq);  // Gamma, P |- Delta, b
  uint32_t l2 = pb.cut2(t.t2, r1, aq);  // Gamma, P |- Delta, c
  uint32_t l3 = pb.cut2(l1, r2, bq);    // Gamma, P, c |- Delta
  return pb.cut2(l2, l3, cq);           // Gamma, P |- Delta
}

uint32_t posdec_right(ProofBuilder& pb, const Formula* a, const Formula* b,
                      const Formula* c, uint32_t r1, uint32_t r2) {
  PosTruth t = pos_truth_proofs(pb, a, b, c);
  const Query* aq = qbase(a);
  const Query* bq = qbase(b);
  const Query* cq = qbase(c);
  uint32_t l1 = pb.cut2(r1, t.t4, bq);  // Gamma, c |- Delta, a, P
  uint32_t l2 = pb.cut2(r2, l1, cq);    // Gamma |- Delta, a, P
  return pb.cut2(l2, t.t3, aq);         // Gamma |- Delta, P
}

}  // namespace bpw
