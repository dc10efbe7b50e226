#include "bpw/parse.hpp"

#include <cctype>
#include <set>

namespace bpw {

namespace {

enum class Tok { End, LPar, RPar, Comma, Turnstile, Define, Word, Zero, One };

struct Lexer {
  std::string_view text;
  size_t pos = 0;
  int line = 1, col = 1;

  Tok tok = Tok::End;
  std::string word;
  int tline = 1, tcol = 1;  // position of the current token

  explicit Lexer(std::string_view t) : text(t) { next(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw BpwError("parse error at " + std::to_string(tline) + ":" +
                   std::to_string(tcol) + ": " + msg);
  }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }
  char take() {
    char c = text[pos++];
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    return c;
  }

  void next() {
    for (;;) {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(peek())))
        take();
      if (peek() == '#') {
        while (pos < text.size() && peek() != '\n') take();
        continue;
      }
      break;
    }
    tline = line;
    tcol = col;
    if (pos >= text.size()) {
      tok = Tok::End;
      return;
    }
    char c = take();
    switch (c) {
      case '(': tok = Tok::LPar; return;
      case ')': tok = Tok::RPar; return;
      case ',': tok = Tok::Comma; return;
      case '|':
        if (peek() != '-') fail("expected '-' after '|'");
        take();
        tok = Tok::Turnstile;
        return;
      case ':':
        if (peek() != '=') fail("expected '=' after ':'");
        take();
        tok = Tok::Define;
        return;
      default:
        break;
    }
    if (c == '0' || c == '1') {
      if (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
        fail("unexpected literal");
      tok = (c == '0') ? Tok::Zero : Tok::One;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      word.assign(1, c);
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')
        word.push_back(take());
      tok = Tok::Word;
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void expect(Tok t, const char* what) {
    if (tok != t) fail(std::string("expected ") + what);
    next();
  }
};

PVarId lex_pvar(Lexer& lx) {
  if (lx.tok != Tok::Word || lx.word.size() < 2 || lx.word[0] != 'p')
    lx.fail("expected a propositional variable");
  PVarId p = pvar_id(lx.word.substr(1));
  lx.next();
  return p;
}

EVarId word_evar(Lexer& lx, const std::string& w) {
  if (evar_name_reserved(w))
    lx.fail("'" + w + "' is a reserved generated name");
  return evar_named(w);
}

const Query* parse_q(Lexer& lx, bool allow_query);

const Formula* parse_f(Lexer& lx) {
  const Query* q = parse_q(lx, false);
  return q->f;  // allow_query=false guarantees Base
}

const Query* parse_q(Lexer& lx, bool allow_query) {
  switch (lx.tok) {
    case Tok::Zero:
      lx.next();
      return qbase(f0());
    case Tok::One:
      lx.next();
      return qbase(f1());
    case Tok::Word:
      break;
    default:
      lx.fail("expected a formula");
  }
  std::string w = lx.word;
  if (w == "dec") {
    lx.next();
    lx.expect(Tok::LPar, "'('");
    const Formula* a = parse_f(lx);
    lx.expect(Tok::Comma, "','");
    PVarId p = lex_pvar(lx);
    lx.expect(Tok::Comma, "','");
    const Formula* b = parse_f(lx);
    lx.expect(Tok::RPar, "')'");
    return qbase(fdec(a, p, b));
  }
  if (w == "or" || w == "and") {
    lx.next();
    lx.expect(Tok::LPar, "'('");
    const Query* a = parse_q(lx, allow_query);
    lx.expect(Tok::Comma, "','");
    const Query* b = parse_q(lx, allow_query);
    lx.expect(Tok::RPar, "')'");
    return w == "or" ? qor(a, b) : qand(a, b);
  }
  if (w == "not") {
    if (!allow_query) lx.fail("'not' is only allowed in queries");
    lx.next();
    lx.expect(Tok::LPar, "'('");
    const Query* a = parse_q(lx, true);
    lx.expect(Tok::RPar, "')'");
    return qnot(a);
  }
  if (w.size() >= 2 && w[0] == 'p') {
    lx.next();
    return qbase(fpvar(pvar_id(w.substr(1))));
  }
  if (w.size() >= 2 && (w[0] == 'e' || w[0] == 'u' || w[0] == 'x')) {
    EVarId v = word_evar(lx, w);
    lx.next();
    return qbase(fevar(v));
  }
  lx.fail("unknown identifier '" + w + "'");
}

Cedent parse_cedent(Lexer& lx) {
  Cedent out;
  if (lx.tok == Tok::Turnstile || lx.tok == Tok::End) return out;
  out.push_back(parse_q(lx, true));
  while (lx.tok == Tok::Comma) {
    lx.next();
    out.push_back(parse_q(lx, true));
  }
  return out;
}

}  // namespace

const Formula* parse_formula(std::string_view text) {
  Lexer lx(text);
  const Formula* f = parse_f(lx);
  if (lx.tok != Tok::End) lx.fail("trailing input after formula");
  return f;
}

const Query* parse_query(std::string_view text) {
  Lexer lx(text);
  const Query* q = parse_q(lx, true);
  if (lx.tok != Tok::End) lx.fail("trailing input after query");
  return q;
}

Sequent parse_sequent(std::string_view text) {
  Lexer lx(text);
  Sequent s;
  s.left = parse_cedent(lx);
  lx.expect(Tok::Turnstile, "'|-'");
  s.right = parse_cedent(lx);
  if (lx.tok != Tok::End) lx.fail("trailing input after sequent");
  return s;
}

AxiomSetPtr parse_axioms(std::string_view text) {
  Lexer lx(text);
  AxiomSetBuilder bld;
  while (lx.tok != Tok::End) {
    if (lx.tok != Tok::Word || lx.word.size() < 2 ||
        (lx.word[0] != 'e' && lx.word[0] != 'u' && lx.word[0] != 'x'))
      lx.fail("expected an extension variable definition");
    EVarId v = word_evar(lx, lx.word);
    lx.next();
    lx.expect(Tok::Define, "':='");
    const Formula* body = parse_f(lx);
    try {
      bld.define(v, body);
    } catch (const BpwError& e) {
      lx.fail(e.what());
    }
  }
  AxiomSetPtr set = bld.snapshot();
  ValidationReport rep = validate_axioms(*set);
  if (!rep.ok) throw BpwError("invalid axiom set: " + rep.error);
  return set;
}

RenderNames render_names_for(const ExtAxiomSet& E) {
  RenderNames rn;
  std::set<std::string> taken;
  for (auto& [v, body] : E.defs)
    if (!evar_is_generated(v)) taken.insert(evar_name(v));
  uint32_t n = 0;
  for (auto& [v, body] : E.defs) {
    if (!evar_is_generated(v)) continue;
    std::string name;
    do {
      name = std::string(1, sort_letter(evar_sort(v))) + "v" + std::to_string(n++);
    } while (taken.count(name));
    taken.insert(name);
    rn.map.emplace(v, std::move(name));
  }
  return rn;
}

namespace {

void render_f(const Formula* f, const RenderNames* rn, std::string& out) {
  switch (f->kind) {
    case FKind::C0: out += '0'; return;
    case FKind::C1: out += '1'; return;
    case FKind::PVar: out += pvar_text(f->var); return;
    case FKind::EVar: {
      if (rn) {
        auto it = rn->map.find(f->var);
        if (it != rn->map.end()) {
          out += it->second;
          return;
        }
      }
      out += evar_name(f->var);
      return;
    }
    case FKind::Dec:
      out += "dec(";
      render_f(f->a, rn, out);
      out += ", ";
      out += pvar_text(f->var);
      out += ", ";
      render_f(f->b, rn, out);
      out += ')';
      return;
    case FKind::Or:
    case FKind::And:
      out += (f->kind == FKind::Or) ? "or(" : "and(";
      render_f(f->a, rn, out);
      out += ", ";
      render_f(f->b, rn, out);
      out += ')';
      return;
  }
}

void render_q(const Query* q, const RenderNames* rn, std::string& out) {
  switch (q->kind) {
    case QKind::Base:
      render_f(q->f, rn, out);
      return;
    case QKind::Not:
      out += "not(";
      render_q(q->a, rn, out);
      out += ')';
      return;
    case QKind::QOr:
    case QKind::QAnd:
      out += (q->kind == QKind::QOr) ? "or(" : "and(";
      render_q(q->a, rn, out);
      out += ", ";
      render_q(q->b, rn, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string render(const Formula* f, const RenderNames* names) {
  std::string out;
  render_f(f, names, out);
  return out;
}

std::string render(const Query* q, const RenderNames* names) {
  std::string out;
  render_q(q, names, out);
  return out;
}

std::string render(const Sequent& s, const RenderNames* names) {
  std::string out;
  for (size_t i = 0; i < s.left.size(); ++i) {
    if (i) out += ", ";
    render_q(s.left[i], names, out);
  }
  out += s.left.empty() ? "|-" : " |-";
  for (size_t i = 0; i < s.right.size(); ++i) {
    out += (i ? ", " : " ");
    render_q(s.right[i], names, out);
  }
  return out;
}

std::string render_axioms(const ExtAxiomSet& E) {
  RenderNames rn = render_names_for(E);
  std::string out;
  for (auto& [v, body] : E.defs) {
    auto it = rn.map.find(v);
    out += (it != rn.map.end()) ? it->second : evar_name(v);
    out += " := ";
    render_f(body, &rn, out);
    if (it != rn.map.end()) out += "  # generated";
    out += '\n';
  }
  return out;
}

}  // namespace bpw
