#pragma once

// A small declarative scenario language: scalars, spaces, flags, couples,
// forms, contexts, parabolics, and check requests. Hand-written lexer and
// recursive-descent parser with positioned errors, a canonical printer whose
// output re-parses to a structurally identical document, and an elaborator
// that materializes declarations through the algebra modules and runs the
// requested checks.

#include "flagpar/kp.hpp"
#include "flagpar/levichev.hpp"
#include "flagpar/minpar.hpp"

#include <map>
#include <optional>
#include <sstream>
#include <variant>

namespace flagpar {
namespace spec {

// --- source positions and errors -------------------------------------------

struct SourcePos {
  std::size_t line = 1;
  std::size_t col = 1;
};

namespace detail {
inline std::string posMessage(const std::string& what, SourcePos pos,
                              const std::vector<std::string>& expected) {
  std::ostringstream os;
  os << what << " at line " << pos.line << ", column " << pos.col;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t i = 0; i < expected.size(); ++i)
      os << (i ? " | " : "") << expected[i];
    os << ")";
  }
  return os.str();
}
}  // namespace detail

struct SpecError : std::runtime_error {
  SourcePos pos;
  std::vector<std::string> expected;
  SpecError(const std::string& what, SourcePos p, std::vector<std::string> exp = {})
      : std::runtime_error(detail::posMessage(what, p, exp)),
        pos(p),
        expected(std::move(exp)) {}
};
struct SyntaxError : SpecError {
  using SpecError::SpecError;
};
struct UndeclaredName : SpecError {
  using SpecError::SpecError;
};
struct DuplicateName : SpecError {
  using SpecError::SpecError;
};
struct TypeMismatch : SpecError {
  using SpecError::SpecError;
};

// --- AST --------------------------------------------------------------------

struct TermLit {
  Rational coeff{1};
  int coord = 1;  // 1-based
  friend bool operator==(const TermLit& a, const TermLit& b) {
    return a.coeff == b.coeff && a.coord == b.coord;
  }
};

struct VectorLit {
  std::vector<TermLit> terms;
  friend bool operator==(const VectorLit& a, const VectorLit& b) {
    return a.terms == b.terms;
  }
};

enum class TailLit { None, Full, Chain };

struct SubspaceLit {
  std::vector<VectorLit> vectors;
  TailLit tail = TailLit::None;
  int tailStart = 0;
  friend bool operator==(const SubspaceLit& a, const SubspaceLit& b) {
    return a.vectors == b.vectors && a.tail == b.tail && a.tailStart == b.tailStart;
  }
};

struct MemberLit {
  enum class Kind { Zero, Full, Span };
  Kind kind = Kind::Span;
  SubspaceLit span;
  friend bool operator==(const MemberLit& a, const MemberLit& b) {
    return a.kind == b.kind && (a.kind != Kind::Span || a.span == b.span);
  }
};

struct ScalarDecl {
  ScalarKind kind = ScalarKind::Rational;
  friend bool operator==(const ScalarDecl& a, const ScalarDecl& b) {
    return a.kind == b.kind;
  }
};

struct SpaceDecl {
  std::string name;
  int dim = 0;
  std::optional<std::string> paired;
  friend bool operator==(const SpaceDecl& a, const SpaceDecl& b) {
    return a.name == b.name && a.dim == b.dim && a.paired == b.paired;
  }
};

struct FlagDecl {
  std::string name;
  std::string space;
  std::vector<MemberLit> members;
  friend bool operator==(const FlagDecl& a, const FlagDecl& b) {
    return a.name == b.name && a.space == b.space && a.members == b.members;
  }
};

struct CoupleDecl {
  std::string name;
  std::string first;
  std::string second;
  friend bool operator==(const CoupleDecl& a, const CoupleDecl& b) {
    return a.name == b.name && a.first == b.first && a.second == b.second;
  }
};

enum class FormKindLit { Symmetric, Alternating, Hermitian };
enum class FormTailLit { None, Plus, Minus, Alt };

struct FormDecl {
  std::string name;
  FormKindLit kind = FormKindLit::Symmetric;
  int p = 0, q = 0;
  FormTailLit tail = FormTailLit::None;
  friend bool operator==(const FormDecl& a, const FormDecl& b) {
    return a.name == b.name && a.kind == b.kind && a.p == b.p && a.q == b.q &&
           a.tail == b.tail;
  }
};

struct FamilyLit {
  std::string name;  // gl | sl | u | su | so | sp
  std::optional<std::pair<int, int>> signature;
  friend bool operator==(const FamilyLit& a, const FamilyLit& b) {
    return a.name == b.name && a.signature == b.signature;
  }
};

struct ContextDecl {
  std::string name;
  FamilyLit family;
  int truncation = 0;
  friend bool operator==(const ContextDecl& a, const ContextDecl& b) {
    return a.name == b.name && a.family == b.family && a.truncation == b.truncation;
  }
};

struct TraceSpecLit {
  bool zero = false;             // "trace zero": sum of all block traces vanishes
  std::vector<Rational> coeffs;  // otherwise explicit block coefficients
  friend bool operator==(const TraceSpecLit& a, const TraceSpecLit& b) {
    return a.zero == b.zero && a.coeffs == b.coeffs;
  }
};

struct ParabolicDecl {
  std::string name;
  std::string target;  // a flag or couple name
  std::optional<TraceSpecLit> trace;
  friend bool operator==(const ParabolicDecl& a, const ParabolicDecl& b) {
    return a.name == b.name && a.target == b.target && a.trace == b.trace;
  }
};

enum class CheckKind {
  Semiclosed,
  Taut,
  Selftaut,
  Levi,
  Chevalley,
  Man,
  Dagger,
  FlagClosed,
  Kp,
  Squares
};

struct CheckDecl {
  std::string target;
  CheckKind kind = CheckKind::Semiclosed;
  friend bool operator==(const CheckDecl& a, const CheckDecl& b) {
    return a.target == b.target && a.kind == b.kind;
  }
};

using Statement = std::variant<ScalarDecl, SpaceDecl, FlagDecl, CoupleDecl, FormDecl,
                               ContextDecl, ParabolicDecl, CheckDecl>;

struct ScenarioDocument {
  std::vector<Statement> statements;
  std::vector<SourcePos> spans;  // start position of each statement
  friend bool operator==(const ScenarioDocument& a, const ScenarioDocument& b) {
    return a.statements == b.statements;  // spans are presentation metadata
  }
  friend bool operator!=(const ScenarioDocument& a, const ScenarioDocument& b) {
    return !(a == b);
  }
};

// --- lexer ------------------------------------------------------------------

namespace detail {

struct Token {
  enum class Kind { Word, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  SourcePos pos;
};

inline std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;
  auto advance = [&](char c) {
    if (c == '\n') {
      ++pos.line;
      pos.col = 1;
    } else {
      ++pos.col;
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(c);
      ++i;
      continue;
    }
    if (c == '#') {  // line comment
      while (i < text.size() && text[i] != '\n') {
        advance(text[i]);
        ++i;
      }
      continue;
    }
    Token t;
    t.pos = pos;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Kind::Word;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        t.text.push_back(text[i]);
        advance(text[i]);
        ++i;
      }
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Token::Kind::Int;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        t.text.push_back(text[i]);
        advance(text[i]);
        ++i;
      }
    } else if (std::string("(){},+=*-/").find(c) != std::string::npos) {
      t.kind = Token::Kind::Punct;
      t.text.push_back(c);
      advance(c);
      ++i;
    } else {
      throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.pos = pos;
  out.push_back(end);
  return out;
}

}  // namespace detail

// --- parser (with inline name binding) --------------------------------------

namespace detail {

enum class NameKind { Space, Flag, Couple, Form, Context, Parabolic };

inline const char* nameKindLabel(NameKind k) {
  switch (k) {
    case NameKind::Space: return "space";
    case NameKind::Flag: return "flag";
    case NameKind::Couple: return "couple";
    case NameKind::Form: return "form";
    case NameKind::Context: return "context";
    case NameKind::Parabolic: return "parabolic";
  }
  return "?";
}

struct BoundName {
  NameKind kind = NameKind::Space;
  int dim = 0;                // spaces: coordinate bound
  bool dual = false;          // spaces introduced by a "paired" clause
  std::string partner;        // paired space / couple components / flag's space
};

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  ScenarioDocument document() {
    ScenarioDocument doc;
    while (peek().kind != Token::Kind::End) {
      SourcePos at = peek().pos;
      doc.statements.push_back(statement());
      doc.spans.push_back(at);
    }
    return doc;
  }

 private:
  std::vector<Token> toks_;
  std::size_t at_ = 0;
  std::map<std::string, BoundName> names_;
  bool scalarSeen_ = false;

  const Token& peek() const { return toks_[at_]; }
  Token take() { return toks_[at_++]; }

  [[noreturn]] void fail(const std::string& what, std::vector<std::string> exp) {
    throw SyntaxError(what, peek().pos, std::move(exp));
  }
  void expectPunct(const std::string& p) {
    if (peek().kind != Token::Kind::Punct || peek().text != p)
      fail("unexpected token '" + describe(peek()) + "'", {"'" + p + "'"});
    take();
  }
  void expectWord(const std::string& w) {
    if (peek().kind != Token::Kind::Word || peek().text != w)
      fail("unexpected token '" + describe(peek()) + "'", {"'" + w + "'"});
    take();
  }
  static std::string describe(const Token& t) {
    return t.kind == Token::Kind::End ? std::string("end of input") : t.text;
  }
  int integer() {
    if (peek().kind != Token::Kind::Int)
      fail("unexpected token '" + describe(peek()) + "'", {"an integer"});
    return std::stoi(take().text);
  }
  std::string name() {
    if (peek().kind != Token::Kind::Word)
      fail("unexpected token '" + describe(peek()) + "'", {"a name"});
    return take().text;
  }
  bool wordIs(const std::string& w) const {
    return peek().kind == Token::Kind::Word && peek().text == w;
  }
  bool punctIs(const std::string& p) const {
    return peek().kind == Token::Kind::Punct && peek().text == p;
  }

  void declare(const std::string& n, BoundName b, SourcePos pos) {
    if (names_.count(n))
      throw DuplicateName("name '" + n + "' is already bound", pos);
    names_.emplace(n, std::move(b));
  }
  const BoundName& lookup(const std::string& n, SourcePos pos) const {
    auto it = names_.find(n);
    if (it == names_.end()) throw UndeclaredName("name '" + n + "' is not declared", pos);
    return it->second;
  }
  const BoundName& lookupKind(const std::string& n, NameKind k, SourcePos pos) const {
    const BoundName& b = lookup(n, pos);
    if (b.kind != k)
      throw TypeMismatch("name '" + n + "' is a " + nameKindLabel(b.kind) + ", not a " +
                             nameKindLabel(k),
                         pos);
    return b;
  }

  Statement statement() {
    if (peek().kind != Token::Kind::Word)
      fail("unexpected token '" + describe(peek()) + "'",
           {"scalar", "space", "flag", "couple", "form", "context", "parabolic",
            "check"});
    const std::string& kw = peek().text;
    if (kw == "scalar") return scalarDecl();
    if (kw == "space") return spaceDecl();
    if (kw == "flag") return flagDecl();
    if (kw == "couple") return coupleDecl();
    if (kw == "form") return formDecl();
    if (kw == "context") return contextDecl();
    if (kw == "parabolic") return parabolicDecl();
    if (kw == "check") return checkDecl();
    fail("unexpected token '" + kw + "'",
         {"scalar", "space", "flag", "couple", "form", "context", "parabolic", "check"});
  }

  ScalarDecl scalarDecl() {
    SourcePos at = peek().pos;
    expectWord("scalar");
    if (scalarSeen_) throw DuplicateName("scalar is already declared", at);
    scalarSeen_ = true;
    ScalarDecl d;
    if (wordIs("Q")) {
      d.kind = ScalarKind::Rational;
    } else if (wordIs("Qi")) {
      d.kind = ScalarKind::Gaussian;
    } else if (wordIs("QH")) {
      d.kind = ScalarKind::Quaternion;
    } else {
      fail("unexpected token '" + describe(peek()) + "'", {"Q", "Qi", "QH"});
    }
    take();
    return d;
  }

  SpaceDecl spaceDecl() {
    expectWord("space");
    SpaceDecl d;
    SourcePos at = peek().pos;
    d.name = name();
    expectWord("dim");
    d.dim = integer();
    declare(d.name, {NameKind::Space, d.dim, false, ""}, at);
    if (wordIs("paired")) {
      take();
      SourcePos pAt = peek().pos;
      d.paired = name();
      declare(*d.paired, {NameKind::Space, d.dim, true, d.name}, pAt);
      names_[d.name].partner = *d.paired;
    }
    return d;
  }

  Rational coeff() {
    bool neg = false;
    if (punctIs("-")) {
      take();
      neg = true;
    }
    Rational num(integer());
    if (punctIs("/")) {
      take();
      Rational den(integer());
      if (isZero(den)) throw SyntaxError("zero denominator in coefficient", peek().pos);
      num /= den;
    }
    return neg ? -num : num;
  }

  TermLit term(int dim) {
    TermLit t;
    SourcePos at = peek().pos;
    if (peek().kind == Token::Kind::Int || punctIs("-")) {
      t.coeff = coeff();
      expectPunct("*");
      at = peek().pos;
    }
    if (peek().kind != Token::Kind::Word || peek().text.size() < 2 ||
        peek().text[0] != 'e' ||
        peek().text.find_first_not_of("0123456789", 1) != std::string::npos)
      fail("unexpected token '" + describe(peek()) + "'", {"a coordinate like e1"});
    t.coord = std::stoi(take().text.substr(1));
    if (t.coord < 1 || t.coord > dim)
      throw TypeMismatch("coordinate e" + std::to_string(t.coord) +
                             " outside the declared dimension " + std::to_string(dim),
                         at);
    return t;
  }

  VectorLit vectorLit(int dim) {
    VectorLit v;
    v.terms.push_back(term(dim));
    while (punctIs("+")) {
      take();
      v.terms.push_back(term(dim));
    }
    return v;
  }

  SubspaceLit subspaceLit(int dim) {
    SubspaceLit s;
    expectWord("span");
    expectPunct("(");
    s.vectors.push_back(vectorLit(dim));
    while (punctIs(",")) {
      take();
      s.vectors.push_back(vectorLit(dim));
    }
    expectPunct(")");
    if (punctIs("+")) {
      take();
      SourcePos at = peek().pos;
      if (wordIs("full")) {
        s.tail = TailLit::Full;
      } else if (wordIs("chain")) {
        s.tail = TailLit::Chain;
      } else {
        fail("unexpected token '" + describe(peek()) + "'", {"full", "chain"});
      }
      take();
      expectPunct("(");
      s.tailStart = integer();
      expectPunct(")");
      if (s.tailStart < 1 || s.tailStart > dim + 1)
        throw TypeMismatch("tail start " + std::to_string(s.tailStart) +
                               " outside the declared dimension " + std::to_string(dim),
                           at);
    }
    return s;
  }

  FlagDecl flagDecl() {
    expectWord("flag");
    FlagDecl d;
    SourcePos at = peek().pos;
    d.name = name();
    expectWord("in");
    SourcePos sAt = peek().pos;
    d.space = name();
    const BoundName& sp = lookupKind(d.space, NameKind::Space, sAt);
    expectPunct("{");
    while (true) {
      MemberLit m;
      if (wordIs("zero")) {
        take();
        m.kind = MemberLit::Kind::Zero;
      } else if (wordIs("full")) {
        take();
        m.kind = MemberLit::Kind::Full;
      } else {
        m.kind = MemberLit::Kind::Span;
        m.span = subspaceLit(sp.dim);
      }
      d.members.push_back(std::move(m));
      if (punctIs(",")) {
        take();
        continue;
      }
      break;
    }
    expectPunct("}");
    declare(d.name, {NameKind::Flag, sp.dim, sp.dual, d.space}, at);
    return d;
  }

  CoupleDecl coupleDecl() {
    expectWord("couple");
    CoupleDecl d;
    SourcePos at = peek().pos;
    d.name = name();
    expectPunct("=");
    expectPunct("(");
    SourcePos fAt = peek().pos;
    d.first = name();
    const BoundName& f = lookupKind(d.first, NameKind::Flag, fAt);
    expectPunct(",");
    SourcePos gAt = peek().pos;
    d.second = name();
    const BoundName& g = lookupKind(d.second, NameKind::Flag, gAt);
    expectPunct(")");
    if (f.dual || !g.dual)
      throw TypeMismatch("couple needs a primal flag first and a paired-space flag second",
                         gAt);
    declare(d.name, {NameKind::Couple, f.dim, false, d.first + "," + d.second}, at);
    return d;
  }

  FormDecl formDecl() {
    expectWord("form");
    FormDecl d;
    SourcePos at = peek().pos;
    d.name = name();
    if (wordIs("symmetric")) {
      d.kind = FormKindLit::Symmetric;
    } else if (wordIs("alternating")) {
      d.kind = FormKindLit::Alternating;
    } else if (wordIs("hermitian")) {
      d.kind = FormKindLit::Hermitian;
    } else {
      fail("unexpected token '" + describe(peek()) + "'",
           {"symmetric", "alternating", "hermitian"});
    }
    take();
    expectWord("signature");
    expectPunct("(");
    d.p = integer();
    expectPunct(",");
    d.q = integer();
    expectPunct(")");
    if (wordIs("tail")) {
      take();
      if (punctIs("+")) {
        d.tail = FormTailLit::Plus;
      } else if (punctIs("-")) {
        d.tail = FormTailLit::Minus;
      } else if (wordIs("alt")) {
        d.tail = FormTailLit::Alt;
      } else {
        fail("unexpected token '" + describe(peek()) + "'", {"'+'", "'-'", "alt"});
      }
      take();
    }
    declare(d.name, {NameKind::Form, d.p + d.q, false, ""}, at);
    return d;
  }

  ContextDecl contextDecl() {
    expectWord("context");
    ContextDecl d;
    SourcePos at = peek().pos;
    d.name = name();
    expectWord("family");
    SourcePos fAt = peek().pos;
    d.family.name = name();
    static const std::vector<std::string> fams = {"gl", "sl", "u", "su", "so", "sp"};
    if (std::find(fams.begin(), fams.end(), d.family.name) == fams.end())
      throw SyntaxError("unknown family '" + d.family.name + "'", fAt,
                        {"gl", "sl", "u", "su", "so", "sp"});
    if (punctIs("(")) {
      take();
      int p = integer();
      expectPunct(",");
      int q = integer();
      expectPunct(")");
      d.family.signature = {p, q};
    }
    expectWord("truncation");
    SourcePos tAt = peek().pos;
    d.truncation = integer();
    if (d.family.signature &&
        d.family.signature->first + d.family.signature->second != d.truncation)
      throw TypeMismatch("signature does not sum to the truncation", tAt);
    declare(d.name, {NameKind::Context, d.truncation, false, d.family.name}, at);
    return d;
  }

  ParabolicDecl parabolicDecl() {
    expectWord("parabolic");
    ParabolicDecl d;
    SourcePos at = peek().pos;
    d.name = name();
    expectWord("stabilizer");
    expectWord("of");
    SourcePos tAt = peek().pos;
    d.target = name();
    const BoundName& b = lookup(d.target, tAt);
    if (b.kind != NameKind::Flag && b.kind != NameKind::Couple)
      throw TypeMismatch("parabolic target '" + d.target + "' is a " +
                             nameKindLabel(b.kind) + ", not a flag or couple",
                         tAt);
    if (wordIs("trace")) {
      take();
      TraceSpecLit ts;
      if (wordIs("zero")) {
        take();
        ts.zero = true;
      } else {
        ts.coeffs.push_back(coeff());
        while (punctIs(",")) {
          take();
          ts.coeffs.push_back(coeff());
        }
      }
      d.trace = std::move(ts);
    }
    declare(d.name, {NameKind::Parabolic, b.dim, false, d.target}, at);
    return d;
  }

  CheckDecl checkDecl() {
    expectWord("check");
    CheckDecl d;
    SourcePos tAt = peek().pos;
    d.target = name();
    const BoundName& b = lookup(d.target, tAt);
    SourcePos kAt = peek().pos;
    static const std::map<std::string, CheckKind> kinds = {
        {"semiclosed", CheckKind::Semiclosed}, {"taut", CheckKind::Taut},
        {"selftaut", CheckKind::Selftaut},     {"levi", CheckKind::Levi},
        {"chevalley", CheckKind::Chevalley},   {"man", CheckKind::Man},
        {"dagger", CheckKind::Dagger},         {"flagclosed", CheckKind::FlagClosed},
        {"kp", CheckKind::Kp},                 {"squares", CheckKind::Squares}};
    if (peek().kind != Token::Kind::Word || !kinds.count(peek().text))
      fail("unexpected token '" + describe(peek()) + "'",
           {"semiclosed", "taut", "selftaut", "levi", "chevalley", "man", "dagger",
            "flagclosed", "kp", "squares"});
    d.kind = kinds.at(take().text);
    NameKind need;
    switch (d.kind) {
      case CheckKind::Semiclosed:
      case CheckKind::Selftaut:
        need = NameKind::Flag;
        break;
      case CheckKind::Taut:
        need = NameKind::Couple;
        break;
      case CheckKind::Dagger:
      case CheckKind::Kp:
        need = NameKind::Context;
        break;
      default:
        need = NameKind::Parabolic;
        break;
    }
    if (b.kind != need)
      throw TypeMismatch("check target '" + d.target + "' is a " +
                             nameKindLabel(b.kind) + ", not a " + nameKindLabel(need),
                         kAt);
    return d;
  }
};

}  // namespace detail

inline ScenarioDocument parse(const std::string& text) {
  return detail::Parser(text).document();
}

// --- printer ----------------------------------------------------------------

namespace detail {

inline std::string ratStr(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

struct PrintVisitor {
  std::ostringstream& os;

  static std::string subspaceStr(const SubspaceLit& s) {
    std::ostringstream o;
    o << "span(";
    for (std::size_t v = 0; v < s.vectors.size(); ++v) {
      if (v) o << ", ";
      const auto& terms = s.vectors[v].terms;
      for (std::size_t t = 0; t < terms.size(); ++t) {
        if (t) o << " + ";
        if (!(terms[t].coeff == Rational(1))) o << ratStr(terms[t].coeff) << "*";
        o << "e" << terms[t].coord;
      }
    }
    o << ")";
    if (s.tail == TailLit::Full) o << " + full(" << s.tailStart << ")";
    if (s.tail == TailLit::Chain) o << " + chain(" << s.tailStart << ")";
    return o.str();
  }

  void operator()(const ScalarDecl& d) { os << "scalar " << scalarKindName(d.kind); }
  void operator()(const SpaceDecl& d) {
    os << "space " << d.name << " dim " << d.dim;
    if (d.paired) os << " paired " << *d.paired;
  }
  void operator()(const FlagDecl& d) {
    os << "flag " << d.name << " in " << d.space << " { ";
    for (std::size_t i = 0; i < d.members.size(); ++i) {
      if (i) os << ", ";
      switch (d.members[i].kind) {
        case MemberLit::Kind::Zero: os << "zero"; break;
        case MemberLit::Kind::Full: os << "full"; break;
        case MemberLit::Kind::Span: os << subspaceStr(d.members[i].span); break;
      }
    }
    os << " }";
  }
  void operator()(const CoupleDecl& d) {
    os << "couple " << d.name << " = (" << d.first << ", " << d.second << ")";
  }
  void operator()(const FormDecl& d) {
    os << "form " << d.name << " ";
    switch (d.kind) {
      case FormKindLit::Symmetric: os << "symmetric"; break;
      case FormKindLit::Alternating: os << "alternating"; break;
      case FormKindLit::Hermitian: os << "hermitian"; break;
    }
    os << " signature (" << d.p << ", " << d.q << ")";
    switch (d.tail) {
      case FormTailLit::None: break;
      case FormTailLit::Plus: os << " tail +"; break;
      case FormTailLit::Minus: os << " tail -"; break;
      case FormTailLit::Alt: os << " tail alt"; break;
    }
  }
  void operator()(const ContextDecl& d) {
    os << "context " << d.name << " family " << d.family.name;
    if (d.family.signature)
      os << "(" << d.family.signature->first << ", " << d.family.signature->second
         << ")";
    os << " truncation " << d.truncation;
  }
  void operator()(const ParabolicDecl& d) {
    os << "parabolic " << d.name << " stabilizer of " << d.target;
    if (d.trace) {
      os << " trace ";
      if (d.trace->zero) {
        os << "zero";
      } else {
        for (std::size_t i = 0; i < d.trace->coeffs.size(); ++i) {
          if (i) os << ", ";
          os << ratStr(d.trace->coeffs[i]);
        }
      }
    }
  }
  void operator()(const CheckDecl& d) {
    static const char* names[] = {"semiclosed", "taut",   "selftaut",   "levi",
                                  "chevalley",  "man",    "dagger",     "flagclosed",
                                  "kp",         "squares"};
    os << "check " << d.target << " " << names[std::size_t(d.kind)];
  }
};

}  // namespace detail

inline std::string print(const ScenarioDocument& doc) {
  std::ostringstream os;
  detail::PrintVisitor v{os};
  for (const auto& s : doc.statements) {
    std::visit(v, s);
    os << "\n";
  }
  return os.str();
}

// --- elaboration ------------------------------------------------------------

struct CheckOutcome {
  std::string target;
  CheckKind kind;
  std::string status;  // "pass" | "fail" | "evidence"
  std::string detail;
};

struct ElaborationReport {
  std::vector<CheckOutcome> checks;
  std::vector<std::string> notes;
  bool allPassed() const {
    for (const auto& c : checks)
      if (c.status == "fail") return false;
    return true;
  }
};

namespace detail {

inline const char* checkKindName(CheckKind k) {
  static const char* names[] = {"semiclosed", "taut",   "selftaut",   "levi",
                                "chevalley",  "man",    "dagger",     "flagclosed",
                                "kp",         "squares"};
  return names[std::size_t(k)];
}

inline RealFormContext<Gaussian> familyContext(const FamilyLit& fam, std::size_t m) {
  if (fam.name == "gl") return realforms::generalLinearR(m);
  if (fam.name == "sl") return realforms::specialLinearR(m);
  std::size_t p = fam.signature ? std::size_t(fam.signature->first) : m;
  if (fam.name == "u") return realforms::unitaryPQ(p, m - p, false);
  if (fam.name == "su") return realforms::unitaryPQ(p, m - p, true);
  if (fam.name == "so") return realforms::orthogonalPQ(p, m - p);
  if (fam.name == "sp") return realforms::symplecticR(m);
  throw std::invalid_argument("unknown family: " + fam.name);
}

inline AmbientAlgebra familyAmbient(const FamilyLit& fam) {
  return fam.name == "sl" || fam.name == "su" ? AmbientAlgebra::specialLinear()
                                              : AmbientAlgebra::generalLinear();
}

template <class T>
class Elaborator {
 public:
  ElaborationReport run(const ScenarioDocument& doc, std::uint64_t seed) {
    ElaborationReport rep;
    for (std::size_t i = 0; i < doc.statements.size(); ++i) {
      try {
        std::visit([&](const auto& d) { handle(d, rep, seed); }, doc.statements[i]);
      } catch (const SpecError&) {
        throw;
      } catch (const std::exception& e) {
        // escalate module errors with the statement's source span attached
        SourcePos at = i < doc.spans.size() ? doc.spans[i] : SourcePos{};
        throw TypeMismatch(e.what(), at);
      }
    }
    return rep;
  }

 private:
  struct SpaceInfo {
    int dim = 0;
    Side side = Side::V;
  };
  std::map<std::string, SpaceInfo> spaces_;
  std::map<std::string, GeneralizedFlag<T>> flags_;
  std::map<std::string, std::pair<std::string, std::string>> couples_;
  std::map<std::string, FormDescriptor> forms_;
  std::map<std::string, ContextDecl> contexts_;
  struct ParabolicInfo {
    MatrixSubalgebra<T> p;
    std::string flagName;  // V-side flag the stabilizer came from
    AmbientAlgebra amb;
  };
  std::map<std::string, ParabolicInfo> parabolics_;

  std::size_t truncation(const GeneralizedFlag<T>& f) const {
    // a declared context pins the truncation; otherwise pad past the flag
    if (!contexts_.empty()) {
      std::size_t n = 0;
      for (const auto& [name, ctx] : contexts_) {
        (void)name;
        n = std::max(n, std::size_t(ctx.truncation));
      }
      return std::max(n, f.extent());
    }
    return f.extent() + 2;
  }

  void handle(const ScalarDecl&, ElaborationReport&, std::uint64_t) {}

  void handle(const SpaceDecl& d, ElaborationReport&, std::uint64_t) {
    spaces_[d.name] = {d.dim, Side::V};
    if (d.paired) spaces_[*d.paired] = {d.dim, Side::W};
  }

  void handle(const FlagDecl& d, ElaborationReport&, std::uint64_t) {
    Side side = spaces_.at(d.space).side;
    std::vector<Subspace<T>> members;
    for (const auto& m : d.members) {
      if (m.kind == MemberLit::Kind::Zero) {
        members.push_back(Subspace<T>::zero(side));
      } else if (m.kind == MemberLit::Kind::Full) {
        members.push_back(Subspace<T>::whole(side));
      } else {
        std::size_t cols = 0;
        for (const auto& v : m.span.vectors)
          for (const auto& t : v.terms) cols = std::max(cols, std::size_t(t.coord));
        Mat<T> gens(m.span.vectors.size(), cols);
        for (std::size_t r = 0; r < m.span.vectors.size(); ++r)
          for (const auto& t : m.span.vectors[r].terms)
            gens(r, std::size_t(t.coord) - 1) += T(t.coeff);
        TailKind tk = m.span.tail == TailLit::Full    ? TailKind::Full
                      : m.span.tail == TailLit::Chain ? TailKind::Chain
                                                      : TailKind::None;
        members.push_back(Subspace<T>::spanOf(side, gens, tk,
                                              std::size_t(std::max(m.span.tailStart, 1))));
      }
    }
    flags_.emplace(d.name, GeneralizedFlag<T>(side, std::move(members)));
  }

  void handle(const CoupleDecl& d, ElaborationReport&, std::uint64_t) {
    couples_[d.name] = {d.first, d.second};
  }

  void handle(const FormDecl& d, ElaborationReport&, std::uint64_t) {
    if (d.kind == FormKindLit::Alternating) {
      // alternating forms live on split coordinate pairs
      forms_[d.name] = FormDescriptor::splitPairs(FormType::Alternating);
      return;
    }
    FormType ft =
        d.kind == FormKindLit::Symmetric ? FormType::Symmetric : FormType::Hermitian;
    std::vector<int> signs(std::size_t(d.p), 1);
    signs.insert(signs.end(), std::size_t(d.q), -1);
    FormDescriptor::TailSign ts = d.tail == FormTailLit::Minus
                                      ? FormDescriptor::TailSign::Minus
                                  : d.tail == FormTailLit::Alt
                                      ? FormDescriptor::TailSign::Alternate
                                      : FormDescriptor::TailSign::Plus;
    forms_[d.name] = FormDescriptor::diagonal(ft, std::move(signs), ts);
  }

  void handle(const ContextDecl& d, ElaborationReport&, std::uint64_t) {
    contexts_[d.name] = d;
  }

  void handle(const ParabolicDecl& d, ElaborationReport& rep, std::uint64_t) {
    ParabolicInfo info{MatrixSubalgebra<T>{0, QSpan()}, "", AmbientAlgebra::generalLinear()};
    for (const auto& [name, ctx] : contexts_) {
      (void)name;
      info.amb = familyAmbient(ctx.family);
    }
    std::string traceFlag;
    if (flags_.count(d.target)) {
      const auto& f = flags_.at(d.target);
      std::size_t n = truncation(f);
      info.p = stabilizerAlgebra(std::vector<GeneralizedFlag<T>>{f}, info.amb, n);
      info.flagName = d.target;
      traceFlag = d.target;
    } else {
      const auto& [fn, gn] = couples_.at(d.target);
      const auto& fv = flags_.at(fn);
      const auto& fw = flags_.at(gn);
      std::size_t n = std::max(truncation(fv), truncation(fw));
      info.p =
          stabilizerAlgebra(std::vector<GeneralizedFlag<T>>{fv, fw}, info.amb, n);
      info.flagName = fn;
      traceFlag = fn;
    }
    if (d.trace) {
      const auto& f = flags_.at(traceFlag);
      auto pairs = ipsPairs(f);
      TraceCondition<T> cond;
      if (d.trace->zero) {
        for (std::size_t b = 0; b < pairs.size(); ++b) {
          cond.blocks.push_back(b);
          cond.coefficients.push_back(T(1));
        }
      } else {
        for (std::size_t b = 0; b < d.trace->coeffs.size(); ++b) {
          cond.blocks.push_back(b);
          cond.coefficients.push_back(T(d.trace->coeffs[b]));
        }
      }
      info.p = applyTraceConditions(info.p, f, std::vector<TraceCondition<T>>{cond});
    }
    rep.notes.push_back("parabolic " + d.name + ": dim " +
                        std::to_string(info.p.qDim()) + " at truncation " +
                        std::to_string(info.p.n));
    parabolics_.emplace(d.name, std::move(info));
  }

  void handle(const CheckDecl& d, ElaborationReport& rep, std::uint64_t seed) {
    CheckOutcome out{d.target, d.kind, "fail", ""};
    try {
      runCheck(d, out, seed);
    } catch (const std::exception& e) {
      out.status = "fail";
      out.detail = e.what();
    }
    rep.checks.push_back(std::move(out));
  }

  void runCheck(const CheckDecl& d, CheckOutcome& out, std::uint64_t seed) {
    switch (d.kind) {
      case CheckKind::Semiclosed: {
        bool ok = isSemiclosed(flags_.at(d.target));
        out.status = ok ? "pass" : "fail";
        if (!ok) out.detail = "a member is neither closed nor closed by its successor";
        return;
      }
      case CheckKind::Taut: {
        const auto& [fn, gn] = couples_.at(d.target);
        const auto& fv = flags_.at(fn);
        const auto& fw = flags_.at(gn);
        bool ok = isTautCouple(fv, fw, std::max(truncation(fv), truncation(fw)));
        out.status = ok ? "pass" : "fail";
        if (!ok) out.detail = "a member annihilator is not stabilizer-invariant";
        return;
      }
      case CheckKind::Selftaut: {
        if (forms_.size() != 1)
          throw std::invalid_argument("selftaut needs exactly one declared form");
        const auto& f = flags_.at(d.target);
        auto repST = isSelfTaut(f, forms_.begin()->second, truncation(f));
        out.status = repST.taut ? "pass" : "fail";
        if (!repST.taut) out.detail = "flag is not taut against its form transport";
        return;
      }
      case CheckKind::Levi:
      case CheckKind::Chevalley: {
        const auto& info = parabolics_.at(d.target);
        const auto& f = flags_.at(info.flagName);
        auto ch = chevalley(info.p, f, info.amb);
        bool dims = ch.pNil.qDim() + ch.levi.qDim() + ch.toral.qDim() == info.p.qDim();
        out.status = dims ? "pass" : "fail";
        out.detail = "nil " + std::to_string(ch.pNil.qDim()) + " + levi " +
                     std::to_string(ch.levi.qDim()) + " + toral " +
                     std::to_string(ch.toral.qDim()) + " = " +
                     std::to_string(info.p.qDim());
        return;
      }
      case CheckKind::Man: {
        if constexpr (std::is_same_v<T, Gaussian>) {
          const auto& info = parabolics_.at(d.target);
          auto ctx = familyContext(soleContext().family, info.p.n);
          auto p = realParabolic(ctx, info.p);
          auto man = manDecompose(ctx, p);
          out.status = "pass";
          out.detail = "m " + std::to_string(man.m.qDim()) + ", a " +
                       std::to_string(man.a.qDim()) + ", n " +
                       std::to_string(man.n.qDim());
        } else {
          throw std::invalid_argument("man requires scalar Qi");
        }
        return;
      }
      case CheckKind::FlagClosed: {
        if constexpr (std::is_same_v<T, Gaussian>) {
          const auto& info = parabolics_.at(d.target);
          FamilyLit fam = soleContext().family;
          auto repFC = verifyFlagClosed(
              [&](std::size_t m) { return familyContext(fam, m); },
              flags_.at(info.flagName), info.amb, info.p.n);
          bool ok = repFC.orthocomp && repFC.kPlusP && repFC.normProj;
          out.status = ok ? "pass" : "fail";
          out.detail = repFC.witness;
        } else {
          throw std::invalid_argument("flagclosed requires scalar Qi");
        }
        return;
      }
      case CheckKind::Dagger: {
        const auto& ctxDecl = contexts_.at(d.target);
        auto ctx = familyContext(ctxDecl.family, std::size_t(ctxDecl.truncation));
        auto dag = buildDagger(ctx, familyAmbient(ctxDecl.family));
        out.status = "pass";
        out.detail = "isotropic rank " + std::to_string(dag.xPrime.rows()) +
                     ", split torus dim " + std::to_string(dag.aDagger.qDim());
        return;
      }
      case CheckKind::Squares: {
        if constexpr (std::is_same_v<T, Gaussian>) {
          const auto& info = parabolics_.at(d.target);
          const ContextDecl& cd = soleContext();
          auto ctx = familyContext(cd.family, info.p.n);
          auto p = realParabolic(ctx, info.p);
          auto man = manDecompose(ctx, p);
          bool special = cd.family.name == "sl" || cd.family.name == "su";
          bool ok = componentSquares(ctx, man, special);
          out.status = ok ? "pass" : "fail";
          if (!ok) out.detail = "a component representative fails to square to one";
        } else {
          throw std::invalid_argument("squares requires scalar Qi");
        }
        return;
      }
      case CheckKind::Kp: {
        const auto& cd = contexts_.at(d.target);
        KPFamily fam;
        std::size_t pPos = 0;
        std::size_t n = std::size_t(cd.truncation);
        if (cd.family.name == "gl" || cd.family.name == "sl") {
          fam = KPFamily::GL;
        } else if (cd.family.name == "su" || cd.family.name == "u") {
          fam = KPFamily::SU;
          pPos = cd.family.signature ? std::size_t(cd.family.signature->first) : n / 2;
        } else if (cd.family.name == "sp") {
          fam = KPFamily::Sp;
        } else {
          throw std::invalid_argument("kp check supports gl, sl, u, su, sp");
        }
        auto defects = kpTrialsSerial(fam, n, pPos, seed, 200);
        bool ok = defects.maxAll() < 1e-8;
        out.status = ok ? "evidence" : "fail";
        std::ostringstream os;
        os << "max defect " << defects.maxAll() << " over 200 trials";
        out.detail = os.str();
        return;
      }
    }
  }

  const ContextDecl& soleContext() const {
    if (contexts_.size() != 1)
      throw std::invalid_argument("this check needs exactly one declared context");
    return contexts_.begin()->second;
  }
};

}  // namespace detail

/// Materialize every declaration and run the requested checks. Module errors
/// surface as failed check outcomes rather than exceptions.
inline ElaborationReport elaborate(const ScenarioDocument& doc, std::uint64_t seed = 42) {
  ScalarKind kind = ScalarKind::Rational;
  for (const auto& st : doc.statements)
    if (const auto* s = std::get_if<ScalarDecl>(&st)) kind = s->kind;
  switch (kind) {
    case ScalarKind::Rational:
      return detail::Elaborator<Rational>().run(doc, seed);
    case ScalarKind::Gaussian:
      return detail::Elaborator<Gaussian>().run(doc, seed);
    case ScalarKind::Quaternion:
      return detail::Elaborator<Quaternion>().run(doc, seed);
  }
  return {};
}

}  // namespace spec
}  // namespace flagpar
