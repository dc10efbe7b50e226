#include "bpw/core.hpp"

#include <cctype>

namespace bpw {

namespace {

uint64_t sat_add(uint64_t a, uint64_t b) {
  uint64_t s = a + b;
  return s < a ? UINT64_MAX : s;
}

struct NodeKey {
  uint8_t kind;
  uint32_t var;
  const void* a;
  const void* b;
  bool operator==(const NodeKey& o) const {
    return kind == o.kind && var == o.var && a == o.a && b == o.b;
  }
};

struct NodeKeyHash {
  size_t operator()(const NodeKey& k) const {
    size_t h = k.kind;
    h = h * 1000003u + k.var;
    h = h * 1000003u + std::hash<const void*>()(k.a);
    h = h * 1000003u + std::hash<const void*>()(k.b);
    return h;
  }
};

struct EVarInfo {
  Sort sort;
  std::string name;
  std::string key;  // empty for named vars
  bool generated;
};

struct Tables {
  std::deque<Formula> fnodes;
  std::unordered_map<NodeKey, const Formula*, NodeKeyHash> fmap;
  std::deque<Query> qnodes;
  std::unordered_map<NodeKey, const Query*, NodeKeyHash> qmap;

  std::vector<std::string> pnames;
  std::unordered_map<std::string, PVarId> pmap;
  std::vector<std::string> ptexts;

  std::vector<EVarInfo> evars;
  std::unordered_map<std::string, EVarId> ename_map;
  std::unordered_map<std::string, EVarId> ekey_map;

  std::unordered_map<std::string, uint32_t> listmap;
};

Tables& T() {
  static Tables t;
  return t;
}

const Formula* intern_f(FKind k, uint32_t var, const Formula* a, const Formula* b,
                        uint64_t symbols) {
  Tables& t = T();
  NodeKey key{static_cast<uint8_t>(k), var, a, b};
  auto it = t.fmap.find(key);
  if (it != t.fmap.end()) return it->second;
  t.fnodes.push_back(Formula{k, var, a, b, static_cast<uint32_t>(t.fnodes.size()), symbols});
  const Formula* n = &t.fnodes.back();
  t.fmap.emplace(key, n);
  return n;
}

const Query* intern_q(QKind k, const Formula* f, const Query* a, const Query* b,
                      uint64_t symbols) {
  Tables& t = T();
  NodeKey key{static_cast<uint8_t>(k), 0, f ? static_cast<const void*>(f) : static_cast<const void*>(a), b};
  // Base and Not can collide on the pointer slot; disambiguate via kind.
  auto it = t.qmap.find(key);
  if (it != t.qmap.end()) return it->second;
  t.qnodes.push_back(Query{k, f, a, b, static_cast<uint32_t>(t.qnodes.size()), symbols});
  const Query* n = &t.qnodes.back();
  t.qmap.emplace(key, n);
  return n;
}

}  // namespace

char sort_letter(Sort s) {
  switch (s) {
    case Sort::E: return 'e';
    case Sort::U: return 'u';
    case Sort::X: return 'x';
  }
  return '?';
}

const Formula* f0() { return intern_f(FKind::C0, 0, nullptr, nullptr, 1); }
const Formula* f1() { return intern_f(FKind::C1, 0, nullptr, nullptr, 1); }
const Formula* fconst(bool b) { return b ? f1() : f0(); }
const Formula* fpvar(PVarId p) { return intern_f(FKind::PVar, p, nullptr, nullptr, 1); }
const Formula* fevar(EVarId e) { return intern_f(FKind::EVar, e, nullptr, nullptr, 1); }

const Formula* fdec(const Formula* a, PVarId p, const Formula* b) {
  return intern_f(FKind::Dec, p, a, b, sat_add(sat_add(a->symbols, b->symbols), 1));
}

const Formula* f_or(const Formula* a, const Formula* b) {
  return intern_f(FKind::Or, 0, a, b, sat_add(sat_add(a->symbols, b->symbols), 1));
}

const Formula* f_and(const Formula* a, const Formula* b) {
  return intern_f(FKind::And, 0, a, b, sat_add(sat_add(a->symbols, b->symbols), 1));
}

const Query* qbase(const Formula* f) { return intern_q(QKind::Base, f, nullptr, nullptr, f->symbols); }

const Query* qnot(const Query* q) {
  return intern_q(QKind::Not, nullptr, q, nullptr, sat_add(q->symbols, 1));
}

const Query* qor(const Query* a, const Query* b) {
  if (a->kind == QKind::Base && b->kind == QKind::Base) return qbase(f_or(a->f, b->f));
  return intern_q(QKind::QOr, nullptr, a, b, sat_add(sat_add(a->symbols, b->symbols), 1));
}

const Query* qand(const Query* a, const Query* b) {
  if (a->kind == QKind::Base && b->kind == QKind::Base) return qbase(f_and(a->f, b->f));
  return intern_q(QKind::QAnd, nullptr, a, b, sat_add(sat_add(a->symbols, b->symbols), 1));
}

PVarId pvar_id(const std::string& name) {
  Tables& t = T();
  auto it = t.pmap.find(name);
  if (it != t.pmap.end()) return it->second;
  PVarId id = static_cast<PVarId>(t.pnames.size());
  t.pnames.push_back(name);
  t.ptexts.push_back("p" + name);
  t.pmap.emplace(name, id);
  return id;
}

const std::string& pvar_name(PVarId p) { return T().pnames.at(p); }
std::string pvar_text(PVarId p) { return T().ptexts.at(p); }

bool evar_name_reserved(const std::string& name) {
  // "<sort>g<digits>" is reserved for generated variables.
  if (name.size() < 3) return false;
  if (name[0] != 'e' && name[0] != 'u' && name[0] != 'x') return false;
  if (name[1] != 'g') return false;
  for (size_t i = 2; i < name.size(); i++)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  return true;
}

EVarId evar_named(const std::string& name) {
  Tables& t = T();
  auto it = t.ename_map.find(name);
  if (it != t.ename_map.end()) return it->second;
  if (name.empty() || (name[0] != 'e' && name[0] != 'u' && name[0] != 'x'))
    throw BpwError("extension variable name must start with e, u or x: " + name);
  if (evar_name_reserved(name))
    throw BpwError("extension variable name is reserved for generated variables: " + name);
  Sort s = name[0] == 'e' ? Sort::E : name[0] == 'u' ? Sort::U : Sort::X;
  EVarId id = static_cast<EVarId>(t.evars.size());
  t.evars.push_back(EVarInfo{s, name, "", false});
  t.ename_map.emplace(name, id);
  return id;
}

EVarId evar_generated(Sort s, const std::string& key) {
  Tables& t = T();
  auto it = t.ekey_map.find(key);
  if (it != t.ekey_map.end()) return it->second;
  EVarId id = static_cast<EVarId>(t.evars.size());
  std::string name;
  name += sort_letter(s);
  name += 'g';
  name += std::to_string(id);
  t.evars.push_back(EVarInfo{s, name, key, true});
  t.ekey_map.emplace(key, id);
  t.ename_map.emplace(name, id);
  return id;
}

Sort evar_sort(EVarId v) { return T().evars.at(v).sort; }
const std::string& evar_name(EVarId v) { return T().evars.at(v).name; }
bool evar_is_generated(EVarId v) { return T().evars.at(v).generated; }
const std::string& evar_key(EVarId v) { return T().evars.at(v).key; }

uint32_t formula_list_id(const std::vector<const Formula*>& fs) {
  Tables& t = T();
  std::string key;
  key.reserve(fs.size() * 9);
  for (const Formula* f : fs) {
    key += std::to_string(f->id);
    key += ',';
  }
  auto it = t.listmap.find(key);
  if (it != t.listmap.end()) return it->second;
  uint32_t id = static_cast<uint32_t>(t.listmap.size());
  t.listmap.emplace(key, id);
  return id;
}

}  // namespace bpw
