#include "deepind/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace deepind {

namespace {

enum class Tok { Name, KwData, KwWhere, KwForall, KwSet, KwUnit, Colon, Dot, Arrow, Star, Plus,
                 LParen, RParen, LBrace, RBrace, End };

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_cont(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run(std::vector<Diagnostic>& diags) {
    std::vector<Token> out;
    std::size_t i = 0;
    const std::size_t n = text_.size();
    while (i < n) {
      char c = text_[i];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        ++i;
        continue;
      }
      if (c == '-' && i + 1 < n && text_[i + 1] == '-') {
        while (i < n && text_[i] != '\n') ++i;
        continue;
      }
      std::size_t start = i;
      auto push = [&](Tok k, std::size_t len) {
        out.push_back(Token{k, std::string(text_.substr(start, len)), Span{start, start + len}});
        i = start + len;
      };
      if (c == ':') { push(Tok::Colon, 1); continue; }
      if (c == '.') { push(Tok::Dot, 1); continue; }
      if (c == '*') { push(Tok::Star, 1); continue; }
      if (c == '+') { push(Tok::Plus, 1); continue; }
      if (c == '(') { push(Tok::LParen, 1); continue; }
      if (c == ')') { push(Tok::RParen, 1); continue; }
      if (c == '{') { push(Tok::LBrace, 1); continue; }
      if (c == '}') { push(Tok::RBrace, 1); continue; }
      if (c == '-' && i + 1 < n && text_[i + 1] == '>') { push(Tok::Arrow, 2); continue; }
      if (name_start(c)) {
        std::size_t j = i;
        while (j < n && name_cont(text_[j])) ++j;
        std::string word(text_.substr(i, j - i));
        Tok k = Tok::Name;
        if (word == "data") k = Tok::KwData;
        else if (word == "where") k = Tok::KwWhere;
        else if (word == "forall") k = Tok::KwForall;
        else if (word == "Set") k = Tok::KwSet;
        else if (word == "Unit") k = Tok::KwUnit;
        out.push_back(Token{k, word, Span{i, j}});
        i = j;
        continue;
      }
      diags.push_back(Diagnostic{DiagCode::ParseError,
                                 std::string("unexpected character '") + c + "'", Span{i, i + 1},
                                 {}});
      ++i;
    }
    out.push_back(Token{Tok::End, "", Span{n, n}});
    return out;
  }

 private:
  std::string_view text_;
};

struct Builtin {
  int arity;
};

const std::map<std::string, Builtin>& builtins() {
  static const std::map<std::string, Builtin> b = {
      {"Equal", {2}}, {"Bool", {0}}, {"String", {0}}, {"List", {1}},
  };
  return b;
}

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags)
      : toks_(std::move(toks)), diags_(diags) {}

  SourceModule parse() {
    SourceModule m;
    while (!at(Tok::End)) {
      if (!at(Tok::KwData)) {
        error("expected 'data'");
        sync_to_data();
        continue;
      }
      if (auto d = parse_decl(m)) m.decls.push_back(std::move(*d));
      else sync_to_data();
    }
    return m;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  Token take() { return toks_[pos_++]; }

  void error(const std::string& msg) {
    diags_.push_back(Diagnostic{DiagCode::ParseError, msg, cur().span, {}});
  }
  void error_at(DiagCode code, const std::string& msg, Span span) {
    diags_.push_back(Diagnostic{code, msg, span, {}});
  }

  bool expect(Tok k, const char* what) {
    if (at(k)) {
      take();
      return true;
    }
    error(std::string("expected ") + what);
    return false;
  }

  void sync_to_data() {
    while (!at(Tok::End) && !at(Tok::KwData)) take();
  }

  std::optional<RawDecl> parse_decl(const SourceModule& m) {
    RawDecl d;
    Token kw = take();  // data
    d.span.begin = kw.span.begin;
    if (!at(Tok::Name)) {
      error("expected declaration name");
      return std::nullopt;
    }
    Token name = take();
    d.name = name.text;
    for (const auto& prev : m.decls) {
      if (prev.name == d.name)
        error_at(DiagCode::DuplicateDecl, "duplicate declaration " + d.name, name.span);
    }
    if (!expect(Tok::Colon, "':'")) return std::nullopt;
    // sig := ("Set" "->")* "Set"
    int arity = 0;
    if (!expect(Tok::KwSet, "'Set'")) return std::nullopt;
    while (at(Tok::Arrow)) {
      take();
      if (!expect(Tok::KwSet, "'Set'")) return std::nullopt;
      ++arity;
    }
    d.arity = arity;
    if (!expect(Tok::KwWhere, "'where'")) return std::nullopt;
    while (at(Tok::Name)) {
      if (auto c = parse_ctor()) d.ctors.push_back(std::move(*c));
      else return std::nullopt;
    }
    d.span.end = pos_ > 0 ? toks_[pos_ - 1].span.end : name.span.end;
    resolve_decl(d, m);
    return d;
  }

  std::optional<RawCtor> parse_ctor() {
    RawCtor c;
    Token name = take();
    c.name = name.text;
    c.span.begin = name.span.begin;
    if (!expect(Tok::Colon, "':'")) return std::nullopt;
    if (!expect(Tok::KwForall, "'forall'")) return std::nullopt;
    bool any_group = false;
    while (at(Tok::LBrace) || at(Tok::LParen)) {
      bool implicit = at(Tok::LBrace);
      Tok close = implicit ? Tok::RBrace : Tok::RParen;
      take();
      std::vector<Token> names;
      while (at(Tok::Name)) names.push_back(take());
      if (names.empty()) {
        error("expected binder name");
        return std::nullopt;
      }
      if (!expect(Tok::Colon, "':'")) return std::nullopt;
      if (!expect(Tok::KwSet, "'Set'")) return std::nullopt;
      if (!expect(close, implicit ? "'}'" : "')'")) return std::nullopt;
      for (auto& n : names) c.binders.push_back(RawBinder{n.text, implicit, n.span});
      any_group = true;
    }
    if (!any_group) {
      error("expected binder group after 'forall'");
      return std::nullopt;
    }
    if (!expect(Tok::Dot, "'.'")) return std::nullopt;
    auto ty = parse_ctype();
    if (!ty) return std::nullopt;
    // Split the top-level arrows into domain arguments and the return atom.
    RawTypeExpr t = std::move(*ty);
    while (t.kind == RawKind::Arrow) {
      c.domain.push_back(std::move(t.args[0]));
      RawTypeExpr rest = std::move(t.args[1]);
      t = std::move(rest);
    }
    c.ret = std::move(t);
    c.span.end = toks_[pos_ - 1].span.end;
    return c;
  }

  // ctype := sum ("->" ctype)?   with  sum := prod ("+" sum)?,
  // prod := app ("*" prod)?, app := atom+, all right-associative.
  std::optional<RawTypeExpr> parse_ctype() {
    auto lhs = parse_sum();
    if (!lhs) return std::nullopt;
    if (at(Tok::Arrow)) {
      take();
      auto rhs = parse_ctype();
      if (!rhs) return std::nullopt;
      RawTypeExpr t;
      t.kind = RawKind::Arrow;
      t.span = Span{lhs->span.begin, rhs->span.end};
      t.args = {std::move(*lhs), std::move(*rhs)};
      return t;
    }
    return lhs;
  }

  std::optional<RawTypeExpr> parse_sum() {
    auto lhs = parse_prod();
    if (!lhs) return std::nullopt;
    if (at(Tok::Plus)) {
      take();
      auto rhs = parse_sum();
      if (!rhs) return std::nullopt;
      RawTypeExpr t;
      t.kind = RawKind::Sum;
      t.span = Span{lhs->span.begin, rhs->span.end};
      t.args = {std::move(*lhs), std::move(*rhs)};
      return t;
    }
    return lhs;
  }

  std::optional<RawTypeExpr> parse_prod() {
    auto lhs = parse_app();
    if (!lhs) return std::nullopt;
    if (at(Tok::Star)) {
      take();
      auto rhs = parse_prod();
      if (!rhs) return std::nullopt;
      RawTypeExpr t;
      t.kind = RawKind::Product;
      t.span = Span{lhs->span.begin, rhs->span.end};
      t.args = {std::move(*lhs), std::move(*rhs)};
      return t;
    }
    return lhs;
  }

  bool at_atom_start() const {
    // A name directly followed by ':' opens the next constructor declaration.
    if (at(Tok::Name)) return toks_[pos_ + 1].kind != Tok::Colon;
    return at(Tok::KwUnit) || at(Tok::LParen);
  }

  std::optional<RawTypeExpr> parse_app() {
    if (!at_atom_start()) {
      error("expected type expression");
      return std::nullopt;
    }
    if (at(Tok::Name)) {
      Token head = take();
      RawTypeExpr t;
      t.kind = RawKind::App;  // demoted to Var during resolution if it names a binder
      t.name = head.text;
      t.span = head.span;
      while (at_atom_start()) {
        auto a = parse_atom();
        if (!a) return std::nullopt;
        t.span.end = a->span.end;
        t.args.push_back(std::move(*a));
      }
      return t;
    }
    return parse_atom();
  }

  std::optional<RawTypeExpr> parse_atom() {
    if (at(Tok::KwUnit)) {
      Token u = take();
      RawTypeExpr t;
      t.kind = RawKind::Unit;
      t.span = u.span;
      return t;
    }
    if (at(Tok::Name) && toks_[pos_ + 1].kind != Tok::Colon) {
      Token head = take();
      RawTypeExpr t;
      t.kind = RawKind::App;
      t.name = head.text;
      t.span = head.span;
      return t;
    }
    if (at(Tok::LParen)) {
      take();
      auto inner = parse_ctype();
      if (!inner) return std::nullopt;
      if (!expect(Tok::RParen, "')'")) return std::nullopt;
      return inner;
    }
    error("expected type atom");
    return std::nullopt;
  }

  // Name resolution + arity checks over one declaration. Binders shadow type
  // constructors; an application head that names a binder becomes a Var.
  void resolve_decl(RawDecl& d, const SourceModule& m) {
    for (auto& c : d.ctors) {
      std::set<std::string> binder_names;
      for (auto& b : c.binders) binder_names.insert(b.name);
      for (auto& a : c.domain) resolve_type(a, d, m, binder_names);
      resolve_type(c.ret, d, m, binder_names);
      if (!(c.ret.kind == RawKind::App && c.ret.name == d.name)) {
        error_at(DiagCode::BadReturn,
                 "constructor " + c.name + " must return " + d.name, c.ret.span);
      }
    }
  }

  void resolve_type(RawTypeExpr& t, const RawDecl& d, const SourceModule& m,
                    const std::set<std::string>& binders) {
    switch (t.kind) {
      case RawKind::Unit:
        return;
      case RawKind::Var:
        return;
      case RawKind::Product:
      case RawKind::Sum:
      case RawKind::Arrow:
        resolve_type(t.args[0], d, m, binders);
        resolve_type(t.args[1], d, m, binders);
        return;
      case RawKind::App: {
        for (auto& a : t.args) resolve_type(a, d, m, binders);
        if (binders.count(t.name)) {
          if (!t.args.empty()) {
            error_at(DiagCode::ArityMismatch,
                     "type variable " + t.name + " applied to arguments", t.span);
          }
          t.kind = RawKind::Var;
          t.args.clear();
          return;
        }
        int arity = -1;
        if (t.name == d.name) {
          arity = d.arity;  // self-reference
        } else {
          for (const auto& prev : m.decls) {
            if (prev.name == t.name) arity = prev.arity;
          }
          if (arity < 0) {
            auto it = builtins().find(t.name);
            if (it != builtins().end()) arity = it->second.arity;
          }
        }
        if (arity < 0) {
          error_at(DiagCode::UnresolvedName, "unresolved name " + t.name, t.span);
          return;
        }
        if (static_cast<int>(t.args.size()) != arity) {
          error_at(DiagCode::ArityMismatch,
                   t.name + " expects " + std::to_string(arity) + " argument(s), got " +
                       std::to_string(t.args.size()),
                   t.span);
        }
        return;
      }
    }
  }

  std::vector<Token> toks_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;
};

// --- printing ---

int prec_of(const RawTypeExpr& t) {
  switch (t.kind) {
    case RawKind::Arrow: return 1;
    case RawKind::Sum: return 2;
    case RawKind::Product: return 3;
    case RawKind::App: return t.args.empty() ? 5 : 4;
    case RawKind::Var:
    case RawKind::Unit: return 5;
  }
  return 5;
}

void print_type(std::ostringstream& os, const RawTypeExpr& t, int min_prec) {
  int p = prec_of(t);
  bool paren = p < min_prec;
  if (paren) os << "(";
  switch (t.kind) {
    case RawKind::Var: os << t.name; break;
    case RawKind::Unit: os << "Unit"; break;
    case RawKind::App:
      os << t.name;
      for (const auto& a : t.args) {
        os << " ";
        print_type(os, a, 5);
      }
      break;
    case RawKind::Product:
      print_type(os, t.args[0], 4);
      os << " * ";
      print_type(os, t.args[1], 3);
      break;
    case RawKind::Sum:
      print_type(os, t.args[0], 3);
      os << " + ";
      print_type(os, t.args[1], 2);
      break;
    case RawKind::Arrow:
      print_type(os, t.args[0], 2);
      os << " -> ";
      print_type(os, t.args[1], 1);
      break;
  }
  if (paren) os << ")";
}

std::string fresh_letter(int i, const std::set<std::string>& avoid) {
  // A, B, ..., Z, A1, B1, ...
  for (int round = 0;; ++round) {
    std::string cand(1, static_cast<char>('A' + (i + round) % 26));
    int suffix = (i + round) / 26;
    if (suffix > 0) cand += std::to_string(suffix);
    if (!avoid.count(cand)) return cand;
  }
}

RawCtor normalize_ctor(const RawCtor& c, const std::set<std::string>& decl_names) {
  RawCtor out = c;
  std::map<std::string, std::string> rename;
  std::set<std::string> used;
  int next = 0;
  for (auto& b : out.binders) {
    std::set<std::string> avoid = decl_names;
    avoid.insert(used.begin(), used.end());
    std::string n = fresh_letter(next++, avoid);
    used.insert(n);
    rename[b.name] = n;
    b.name = n;
  }
  struct {
    void apply(RawTypeExpr& t, const std::map<std::string, std::string>& r) {
      if (t.kind == RawKind::Var) {
        auto it = r.find(t.name);
        if (it != r.end()) t.name = it->second;
      }
      for (auto& a : t.args) apply(a, r);
    }
  } walker;
  for (auto& a : out.domain) walker.apply(a, rename);
  walker.apply(out.ret, rename);
  return out;
}

}  // namespace

ParseResult parse_module(std::string_view text) {
  ParseResult r;
  Lexer lex(text);
  auto toks = lex.run(r.diagnostics);
  Parser p(std::move(toks), r.diagnostics);
  SourceModule m = p.parse();
  if (r.diagnostics.empty()) r.module = std::move(m);
  return r;
}

std::string print_raw_type(const RawTypeExpr& t) {
  std::ostringstream os;
  print_type(os, t, 0);
  return os.str();
}

std::string print_decl(const RawDecl& d) {
  std::ostringstream os;
  std::set<std::string> decl_names = {d.name};
  for (const auto& [name, b] : std::map<std::string, Builtin>(builtins().begin(), builtins().end()))
    decl_names.insert(name);
  os << "data " << d.name << " : ";
  for (int i = 0; i < d.arity; ++i) os << "Set -> ";
  os << "Set where\n";
  for (const auto& raw : d.ctors) {
    RawCtor c = normalize_ctor(raw, decl_names);
    os << "  " << c.name << " : forall";
    // Adjacent binders with the same implicitness group together.
    std::size_t i = 0;
    while (i < c.binders.size()) {
      std::size_t j = i;
      while (j < c.binders.size() && c.binders[j].implicit == c.binders[i].implicit) ++j;
      os << " " << (c.binders[i].implicit ? "{" : "(");
      for (std::size_t k = i; k < j; ++k) {
        if (k > i) os << " ";
        os << c.binders[k].name;
      }
      os << " : Set" << (c.binders[i].implicit ? "}" : ")");
      i = j;
    }
    os << ". ";
    for (const auto& a : c.domain) {
      print_type(os, a, 2);  // arrow arguments need parens
      os << " -> ";
    }
    print_type(os, c.ret, 2);
    os << "\n";
  }
  return os.str();
}

std::string print_module(const SourceModule& m) {
  std::ostringstream os;
  bool first = true;
  for (const auto& d : m.decls) {
    if (!first) os << "\n";
    first = false;
    os << print_decl(d);
  }
  return os.str();
}

}  // namespace deepind
