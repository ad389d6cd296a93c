#include "deepind/emit.hpp"

#include <functional>
#include <sstream>

#include <json.hpp>

namespace deepind {

namespace {

using nlohmann::json;

struct Glyphs {
  const char* forall_kw;
  const char* arrow;
  const char* times;
  const char* lam;
  const char* top;
  const char* exists_open;   // "exists " / "∃["
  const char* exists_close;  // " . " / "] "
};

Glyphs glyphs(const EmitOptions& o) {
  if (o.unicode) return {"∀", "→", "×", "λ", "⊤", "∃[", "] "};
  return {"forall", "->", "*", "\\", "Top", "exists ", " . "};
}

// Precedence levels: binders 0, arrow 1, sum 2, product 3, application 4, atoms 5.
int prec_of(const TypeTerm& t) {
  switch (t.kind) {
    case TermKind::Pi:
    case TermKind::Sig:
    case TermKind::Lam:
      return 0;
    case TermKind::ArrT:
      return 1;
    case TermKind::SumT:
      return 2;
    case TermKind::Prod:
      return 3;
    case TermKind::App:
    case TermKind::PredMapT:
      return 4;
    default:
      return 5;
  }
}

class TermPrinter {
 public:
  TermPrinter(const EmitOptions& o) : g_(glyphs(o)) {}

  std::string print(const TypeTerm& t, const std::vector<std::string>& scope) {
    scope_ = scope;
    std::ostringstream os;
    emit(os, t, 0);
    return os.str();
  }

  // Splits the top-level Pi/arrow spine into display segments.
  std::vector<std::string> spine(const TypeTerm& t, const std::vector<std::string>& scope) {
    scope_ = scope;
    std::vector<std::string> lines;
    const TypeTerm* cur = &t;
    while (true) {
      if (cur->kind == TermKind::Pi) {
        std::ostringstream os;
        const TypeTerm* after = emit_forall_group(os, *cur);
        lines.push_back(os.str() + " " + g_.arrow);
        cur = after;  // scope names stay live for the remaining segments
        continue;
      }
      if (cur->kind == TermKind::ArrT) {
        std::ostringstream os;
        emit(os, cur->kids[0], 2);
        lines.push_back(os.str() + " " + g_.arrow);
        cur = &cur->kids[1];
        continue;
      }
      std::ostringstream os;
      emit(os, *cur, 0);
      lines.push_back(os.str());
      break;
    }
    return lines;
  }

 private:
  std::string fresh_name(const std::string& hint) {
    std::string n = hint.empty() ? "x" : hint;
    bool clash = true;
    while (clash) {
      clash = false;
      for (const auto& s : scope_)
        if (s == n) clash = true;
      if (clash) n += "'";
    }
    return n;
  }

  std::string var_name(const TypeTerm& t) {
    if (t.var == kNamedVar) return t.name;
    int idx = t.var;
    if (idx >= 0 && idx < static_cast<int>(scope_.size()))
      return scope_[scope_.size() - 1 - static_cast<std::size_t>(idx)];
    return "?" + std::to_string(idx);
  }

  // Prints "forall (A B : Set) (Q : A -> Set)" for a maximal Pi chain and
  // returns the body following the chain.
  const TypeTerm* emit_forall_group(std::ostringstream& os, const TypeTerm& t) {
    os << g_.forall_kw;
    const TypeTerm* cur = &t;
    while (cur->kind == TermKind::Pi) {
      // Collect binders sharing one (shift-adjusted) domain.
      std::vector<std::string> names;
      const TypeTerm* dom = &cur->kids[0];
      std::string n = fresh_name(cur->name);
      names.push_back(n);
      std::string dom_str;
      {
        std::ostringstream ds;
        emit(ds, *dom, 0);
        dom_str = ds.str();
      }
      scope_.push_back(n);
      const TypeTerm* body = &cur->kids[1];
      while (body->kind == TermKind::Pi && alpha_eq(body->kids[0], shift(*dom, 1))) {
        std::string n2 = fresh_name(body->name);
        names.push_back(n2);
        scope_.push_back(n2);
        dom = &body->kids[0];
        body = &body->kids[1];
      }
      os << " (";
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) os << " ";
        os << names[i];
      }
      os << " : " << dom_str << ")";
      cur = body;
    }
    return cur;
  }

  void emit(std::ostringstream& os, const TypeTerm& t, int min_prec) {
    int p = prec_of(t);
    bool paren = p < min_prec;
    if (paren) os << "(";
    switch (t.kind) {
      case TermKind::Pi: {
        std::size_t depth = scope_.size();
        const TypeTerm* body = emit_forall_group(os, t);
        os << " " << g_.arrow << " ";
        emit(os, *body, 1);
        scope_.resize(depth);
        break;
      }
      case TermKind::Sig: {
        std::string n = fresh_name(t.name);
        os << g_.exists_open << n << g_.exists_close;
        scope_.push_back(n);
        emit(os, t.kids[1], 0);
        scope_.pop_back();
        break;
      }
      case TermKind::Lam: {
        std::string n = fresh_name(t.name);
        os << g_.lam << "(" << n << " : ";
        emit(os, t.kids[0], 0);
        os << ") " << g_.arrow << " ";
        scope_.push_back(n);
        emit(os, t.kids[1], 0);
        scope_.pop_back();
        break;
      }
      case TermKind::ArrT:
        emit(os, t.kids[0], 2);
        os << " " << g_.arrow << " ";
        emit(os, t.kids[1], 1);
        break;
      case TermKind::SumT:
        emit(os, t.kids[0], 3);
        os << " + ";
        emit(os, t.kids[1], 2);
        break;
      case TermKind::Prod:
        emit(os, t.kids[0], 4);
        os << " " << g_.times << " ";
        emit(os, t.kids[1], 3);
        break;
      case TermKind::App: {
        emit(os, t.kids[0], 4);
        for (std::size_t i = 1; i < t.kids.size(); ++i) {
          os << " ";
          emit(os, t.kids[i], 5);
        }
        break;
      }
      case TermKind::PredMapT:
        os << "PredMap";
        for (const auto& k : t.kids) {
          os << " ";
          emit(os, k, 5);
        }
        break;
      case TermKind::Var:
        os << var_name(t);
        break;
      case TermKind::SetSort:
        os << "Set";
        break;
      case TermKind::DataRef:
      case TermKind::CtorRef:
      case TermKind::HypRef:
        os << t.name;
        break;
      case TermKind::LiftRef:
        os << t.name << "^";
        break;
      case TermKind::Top:
        os << g_.top;
        break;
      case TermKind::KTop:
        os << "KTop";
        break;
      case TermKind::EqualT:
        os << "Equal";
        break;
    }
    if (paren) os << ")";
  }

  Glyphs g_;
  std::vector<std::string> scope_;
};

std::string pattern_str(const std::string& ctor, const std::vector<std::string>& args) {
  if (ctor == "(,)") {
    std::string s = "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) s += ", ";
      s += args[i];
    }
    return s + ")";
  }
  if (ctor.empty()) {
    std::string s;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) s += " ";
      s += args[i];
    }
    return s;
  }
  if (args.empty()) return ctor;
  std::string s = "(" + ctor;
  for (const auto& a : args) s += " " + a;
  return s + ")";
}

class WitnessPrinter {
 public:
  explicit WitnessPrinter(const EmitOptions& o) : o_(o), g_(glyphs(o)) {}

  std::string print(const WitnessTerm& t, int min_prec = 0) {
    std::ostringstream os;
    emit(os, t, min_prec);
    return os.str();
  }

 private:
  void emit(std::ostringstream& os, const WitnessTerm& t, int min_prec) {
    switch (t.kind) {
      case WitKind::Var:
        os << t.name;
        return;
      case WitKind::CtorW:
        os << t.name;
        return;
      case WitKind::KTopW:
        os << "KTop";
        return;
      case WitKind::PostRef:
        os << t.name;
        return;
      case WitKind::TypeArg: {
        TermPrinter tp(o_);
        std::string s = tp.print(*t.type_arg, {});
        bool atomic = t.type_arg->kind == TermKind::Var || t.type_arg->kind == TermKind::DataRef ||
                      t.type_arg->kind == TermKind::KTop || t.type_arg->kind == TermKind::Top ||
                      t.type_arg->kind == TermKind::SetSort;
        if (atomic) os << s;
        else os << "(" << s << ")";
        return;
      }
      case WitKind::Tuple: {
        os << "(";
        for (std::size_t i = 0; i < t.kids.size(); ++i) {
          if (i) os << ", ";
          emit(os, t.kids[i], 0);
        }
        os << ")";
        return;
      }
      case WitKind::Lam: {
        bool paren = min_prec >= 1;
        if (paren) os << "(";
        os << g_.lam;
        for (std::size_t i = 0; i + 1 < t.kids.size(); ++i) {
          if (i) os << " ";
          emit(os, t.kids[i], 1);
        }
        os << " " << g_.arrow << " ";
        emit(os, t.kids.back(), 0);
        if (paren) os << ")";
        return;
      }
      case WitKind::CaseW: {
        bool paren = min_prec >= 1;
        if (paren) os << "(";
        os << "case ";
        emit(os, t.kids[0], 0);
        os << " of {";
        for (std::size_t i = 1; i + 1 < t.kids.size(); i += 2) {
          if (i > 1) os << ";";
          os << " ";
          emit(os, t.kids[i], 0);
          os << " " << g_.arrow << " ";
          emit(os, t.kids[i + 1], 0);
        }
        os << " }";
        if (paren) os << ")";
        return;
      }
      case WitKind::App:
      case WitKind::SelfCall:
      case WitKind::MapCall:
      case WitKind::HypCall:
      case WitKind::LiftKt:
      case WitKind::EqMapRef: {
        bool paren = min_prec >= 1 && !t.kids.empty();
        if (paren) os << "(";
        std::size_t first_arg = 0;
        if (t.kind == WitKind::App) {
          // Application is flat juxtaposition; only binding heads need parens.
          const WitKind hk = t.kids[0].kind;
          bool head_parens = hk == WitKind::Lam || hk == WitKind::CaseW || hk == WitKind::Tuple;
          emit(os, t.kids[0], head_parens ? 1 : 0);
          first_arg = 1;
        } else if (t.kind == WitKind::LiftKt) {
          os << t.name << "^KT";
        } else if (t.kind == WitKind::EqMapRef) {
          os << t.name << "^EqualMap";
        } else {
          os << t.name;
        }
        for (std::size_t i = first_arg; i < t.kids.size(); ++i) {
          os << " ";
          emit(os, t.kids[i], 1);
        }
        if (paren) os << ")";
        return;
      }
    }
  }

  EmitOptions o_;
  Glyphs g_;
};

std::string witness_clause_lhs(const WitnessDef& w, const WitnessClause& cl) {
  std::ostringstream os;
  os << w.name;
  for (const auto& p : w.params) os << " " << p;
  for (const auto& p : cl.index_pats) os << " " << p;
  for (const auto& p : cl.pred_pats) os << " " << p;
  os << " " << pattern_str(cl.ctor, cl.ctor_args);
  if (cl.evidence_tt) {
    os << " tt";
  } else if (!cl.evidence.empty()) {
    if (cl.evidence_tuple || cl.evidence.size() > 1) {
      os << " (";
      for (std::size_t i = 0; i < cl.evidence.size(); ++i) {
        if (i) os << ", ";
        os << cl.evidence[i];
      }
      os << ")";
    } else {
      os << " " << cl.evidence[0];
    }
  }
  return os.str();
}

}  // namespace

std::string emit_term(const TypeTerm& t, const EmitOptions& o) {
  TermPrinter tp(o);
  return tp.print(t, {});
}

std::string emit_text(const LiftingDef& l, const EmitOptions& o) {
  TermPrinter tp(o);
  std::ostringstream os;
  os << l.name << "^ : " << tp.print(l.signature, {}) << "\n";
  for (const auto& c : l.clauses) {
    os << l.name << "^";
    for (const auto& p : c.index_pats) os << " " << p;
    for (const auto& p : c.pred_pats) os << " " << p;
    os << " " << pattern_str(c.ctor, c.ctor_args) << " = ";
    // Telescope: distinct index pats, pred pats, ctor args.
    std::vector<std::string> scope;
    for (const auto& p : c.index_pats) {
      bool dup = false;
      for (const auto& q : scope)
        if (q == p) dup = true;
      if (!dup) scope.push_back(p);
    }
    for (const auto& p : c.pred_pats) scope.push_back(p);
    for (const auto& p : c.ctor_args) scope.push_back(p);
    os << tp.print(c.body, scope) << "\n";
  }
  return os.str();
}

std::string emit_text(const RuleDef& r, const EmitOptions& o) {
  TermPrinter tp(o);
  std::ostringstream os;
  const bool named = r.kind == RuleKind::Deep && !r.monomorphic &&
                     r.statement.kind == TermKind::Pi &&
                     [&] {
                       // Named hypotheses show up as HypRef applications.
                       std::function<bool(const TypeTerm&)> has_hyp = [&](const TypeTerm& t) {
                         if (t.kind == TermKind::HypRef) return true;
                         for (const auto& k : t.kids)
                           if (has_hyp(k)) return true;
                         return false;
                       };
                       return has_hyp(r.statement);
                     }();
  if (named) {
    for (const auto& [name, term] : r.hypotheses) {
      // name = \(P : ...) -> body
      if (term.kind == TermKind::Lam) {
        std::string pn = term.name.empty() ? "P" : term.name;
        os << name << " = " << (o.unicode ? "λ" : "\\") << "(" << pn << " : "
           << tp.print(term.kids[0], {}) << ") " << (o.unicode ? "→" : "->") << "\n  "
           << tp.print(term.kids[1], {pn}) << "\n";
      } else {
        os << name << " = " << tp.print(term, {}) << "\n";
      }
      os << "\n";
    }
  }
  os << r.name << " :\n";
  auto lines = tp.spine(r.statement, {});
  for (const auto& ln : lines) os << "  " << ln << "\n";
  return os.str();
}

std::string emit_text(const WitnessDef& w, const EmitOptions& o) {
  TermPrinter tp(o);
  WitnessPrinter wp(o);
  std::ostringstream os;
  for (const auto& cl : w.clauses) {
    os << witness_clause_lhs(w, cl) << " = " << wp.print(cl.body) << "\n";
    if (!cl.wheres.empty()) {
      os << "  where\n";
      for (const auto& wb : cl.wheres) {
        os << "    " << wb.name << " = " << wp.print(wb.value);
        if (wb.annotation) os << " : " << tp.print(*wb.annotation, {});
        os << "\n";
      }
    }
  }
  return os.str();
}

std::string emit_text(const KtBundle& k, const EmitOptions& o) {
  TermPrinter tp(o);
  std::ostringstream os;
  os << k.witness.name << " : " << tp.print(k.witness.signature, {}) << "\n";
  os << emit_text(k.witness, o);
  if (k.needs_equal_map) {
    os << "\n" << k.equal_map_name << "^EqualMap : " << tp.print(k.equal_map_signature, {})
       << "\n";
  }
  for (const auto& p : k.postulates)
    os << "\npostulate " << p.name << " : " << tp.print(p.signature, {}) << "\n";
  return os.str();
}

// ---- JSON ----

namespace {

json term_to_json(const TypeTerm& t) {
  json j;
  switch (t.kind) {
    case TermKind::Pi:
    case TermKind::Sig:
    case TermKind::Lam:
      j["node"] = t.kind == TermKind::Pi ? "pi" : t.kind == TermKind::Sig ? "sig" : "lam";
      j["hint"] = t.name;
      j["domain"] = term_to_json(t.kids[0]);
      j["body"] = term_to_json(t.kids[1]);
      return j;
    case TermKind::Prod:
    case TermKind::SumT:
    case TermKind::ArrT:
      j["node"] = t.kind == TermKind::Prod ? "prod" : t.kind == TermKind::SumT ? "sum" : "arrow";
      j["l"] = term_to_json(t.kids[0]);
      j["r"] = term_to_json(t.kids[1]);
      return j;
    case TermKind::App: {
      j["node"] = "app";
      json kids = json::array();
      for (const auto& k : t.kids) kids.push_back(term_to_json(k));
      j["terms"] = std::move(kids);
      return j;
    }
    case TermKind::Var:
      j["node"] = "var";
      if (t.var == kNamedVar) j["name"] = t.name;
      else j["index"] = t.var;
      if (!t.name.empty() && t.var != kNamedVar) j["hint"] = t.name;
      return j;
    case TermKind::SetSort:
      j["node"] = "set";
      return j;
    case TermKind::DataRef:
      j["node"] = "data";
      j["name"] = t.name;
      return j;
    case TermKind::CtorRef:
      j["node"] = "ctor";
      j["name"] = t.name;
      return j;
    case TermKind::LiftRef:
      j["node"] = "lift";
      j["name"] = t.name;
      return j;
    case TermKind::HypRef:
      j["node"] = "hyp";
      j["name"] = t.name;
      return j;
    case TermKind::PredMapT:
      j["node"] = "predmap";
      j["carrier"] = term_to_json(t.kids[0]);
      j["src"] = term_to_json(t.kids[1]);
      j["tgt"] = term_to_json(t.kids[2]);
      return j;
    case TermKind::Top:
      j["node"] = "top";
      return j;
    case TermKind::KTop:
      j["node"] = "ktop";
      j["carrier"] = term_to_json(t.kids[0]);
      return j;
    case TermKind::EqualT:
      j["node"] = "equal";
      return j;
  }
  return j;
}

TypeTerm term_from_json(const json& j) {
  const std::string node = j.at("node").get<std::string>();
  TypeTerm t;
  if (node == "pi" || node == "sig" || node == "lam") {
    t.kind = node == "pi" ? TermKind::Pi : node == "sig" ? TermKind::Sig : TermKind::Lam;
    t.name = j.value("hint", "");
    t.kids = {term_from_json(j.at("domain")), term_from_json(j.at("body"))};
    return t;
  }
  if (node == "prod" || node == "sum" || node == "arrow") {
    t.kind = node == "prod" ? TermKind::Prod : node == "sum" ? TermKind::SumT : TermKind::ArrT;
    t.kids = {term_from_json(j.at("l")), term_from_json(j.at("r"))};
    return t;
  }
  if (node == "app") {
    t.kind = TermKind::App;
    for (const auto& k : j.at("terms")) t.kids.push_back(term_from_json(k));
    return t;
  }
  if (node == "var") {
    t.kind = TermKind::Var;
    if (j.contains("name")) {
      t.var = kNamedVar;
      t.name = j.at("name").get<std::string>();
    } else {
      t.var = j.at("index").get<int>();
      t.name = j.value("hint", "");
    }
    return t;
  }
  if (node == "set") { t.kind = TermKind::SetSort; return t; }
  if (node == "data") { t.kind = TermKind::DataRef; t.name = j.at("name"); return t; }
  if (node == "ctor") { t.kind = TermKind::CtorRef; t.name = j.at("name"); return t; }
  if (node == "lift") { t.kind = TermKind::LiftRef; t.name = j.at("name"); return t; }
  if (node == "hyp") { t.kind = TermKind::HypRef; t.name = j.at("name"); return t; }
  if (node == "predmap") {
    t.kind = TermKind::PredMapT;
    t.kids = {term_from_json(j.at("carrier")), term_from_json(j.at("src")),
              term_from_json(j.at("tgt"))};
    return t;
  }
  if (node == "top") { t.kind = TermKind::Top; return t; }
  if (node == "ktop") {
    t.kind = TermKind::KTop;
    t.kids = {term_from_json(j.at("carrier"))};
    return t;
  }
  if (node == "equal") { t.kind = TermKind::EqualT; return t; }
  throw std::runtime_error("unknown term node: " + node);
}

json wit_to_json(const WitnessTerm& t) {
  json j;
  switch (t.kind) {
    case WitKind::App: j["node"] = "app"; break;
    case WitKind::Var: j["node"] = "var"; break;
    case WitKind::SelfCall: j["node"] = "self"; break;
    case WitKind::MapCall: j["node"] = "map"; break;
    case WitKind::HypCall: j["node"] = "hypcall"; break;
    case WitKind::CtorW: j["node"] = "ctor"; break;
    case WitKind::LiftKt: j["node"] = "liftkt"; break;
    case WitKind::PostRef: j["node"] = "postulate"; break;
    case WitKind::EqMapRef: j["node"] = "equalmap"; break;
    case WitKind::KTopW: j["node"] = "ktop"; break;
    case WitKind::TypeArg: j["node"] = "type"; break;
    case WitKind::Tuple: j["node"] = "tuple"; break;
    case WitKind::Lam: j["node"] = "lam"; break;
    case WitKind::CaseW: j["node"] = "case"; break;
  }
  if (!t.name.empty()) j["name"] = t.name;
  if (!t.self_scrutinee.empty()) j["scrutinee"] = t.self_scrutinee;
  if (t.type_arg) j["term"] = term_to_json(*t.type_arg);
  if (!t.kids.empty()) {
    json kids = json::array();
    for (const auto& k : t.kids) kids.push_back(wit_to_json(k));
    j["args"] = std::move(kids);
  }
  return j;
}

WitnessTerm wit_from_json(const json& j) {
  const std::string node = j.at("node").get<std::string>();
  WitnessTerm t;
  if (node == "app") t.kind = WitKind::App;
  else if (node == "var") t.kind = WitKind::Var;
  else if (node == "self") t.kind = WitKind::SelfCall;
  else if (node == "map") t.kind = WitKind::MapCall;
  else if (node == "hypcall") t.kind = WitKind::HypCall;
  else if (node == "ctor") t.kind = WitKind::CtorW;
  else if (node == "liftkt") t.kind = WitKind::LiftKt;
  else if (node == "postulate") t.kind = WitKind::PostRef;
  else if (node == "equalmap") t.kind = WitKind::EqMapRef;
  else if (node == "ktop") t.kind = WitKind::KTopW;
  else if (node == "type") t.kind = WitKind::TypeArg;
  else if (node == "tuple") t.kind = WitKind::Tuple;
  else if (node == "lam") t.kind = WitKind::Lam;
  else if (node == "case") t.kind = WitKind::CaseW;
  else throw std::runtime_error("unknown witness node: " + node);
  t.name = j.value("name", "");
  t.self_scrutinee = j.value("scrutinee", "");
  if (j.contains("term")) t.type_arg = term_from_json(j.at("term"));
  if (j.contains("args"))
    for (const auto& k : j.at("args")) t.kids.push_back(wit_from_json(k));
  return t;
}

json lifting_to_json(const LiftingDef& l) {
  json j;
  j["kind"] = "lifting";
  j["name"] = l.name;
  j["arity"] = l.arity;
  j["signature"] = term_to_json(l.signature);
  json cs = json::array();
  for (const auto& c : l.clauses) {
    json jc;
    jc["ctor"] = c.ctor;
    jc["indexPats"] = c.index_pats;
    jc["predPats"] = c.pred_pats;
    jc["ctorArgs"] = c.ctor_args;
    jc["body"] = term_to_json(c.body);
    cs.push_back(std::move(jc));
  }
  j["clauses"] = std::move(cs);
  return j;
}

json rule_to_json(const RuleDef& r) {
  json j;
  j["kind"] = "rule";
  j["name"] = r.name;
  j["ruleKind"] = r.kind == RuleKind::Deep ? "deep" : "structural";
  j["monomorphic"] = r.monomorphic;
  j["statement"] = term_to_json(r.statement);
  json hs = json::array();
  for (const auto& [n, t] : r.hypotheses) {
    json jh;
    jh["name"] = n;
    jh["term"] = term_to_json(t);
    hs.push_back(std::move(jh));
  }
  j["hypotheses"] = std::move(hs);
  return j;
}

json witness_to_json(const WitnessDef& w) {
  json j;
  j["kind"] = "witness";
  j["name"] = w.name;
  j["params"] = w.params;
  j["signature"] = term_to_json(w.signature);
  json cs = json::array();
  for (const auto& c : w.clauses) {
    json jc;
    jc["ctor"] = c.ctor;
    jc["indexPats"] = c.index_pats;
    jc["predPats"] = c.pred_pats;
    jc["ctorArgs"] = c.ctor_args;
    jc["evidence"] = c.evidence;
    jc["evidenceTuple"] = c.evidence_tuple;
    jc["evidenceTt"] = c.evidence_tt;
    jc["body"] = wit_to_json(c.body);
    json ws = json::array();
    for (const auto& wb : c.wheres) {
      json jw;
      jw["name"] = wb.name;
      jw["value"] = wit_to_json(wb.value);
      if (wb.annotation) jw["annotation"] = term_to_json(*wb.annotation);
      ws.push_back(std::move(jw));
    }
    jc["wheres"] = std::move(ws);
    cs.push_back(std::move(jc));
  }
  j["clauses"] = std::move(cs);
  return j;
}

}  // namespace

std::string emit_json(const LiftingDef& l) { return lifting_to_json(l).dump(2) + "\n"; }
std::string emit_json(const RuleDef& r) { return rule_to_json(r).dump(2) + "\n"; }
std::string emit_json(const WitnessDef& w) { return witness_to_json(w).dump(2) + "\n"; }

std::string emit_json(const KtBundle& k) {
  json j;
  j["kind"] = "ktwitness";
  j["witness"] = witness_to_json(k.witness);
  json ps = json::array();
  for (const auto& p : k.postulates) {
    json jp;
    jp["name"] = p.name;
    jp["signature"] = term_to_json(p.signature);
    ps.push_back(std::move(jp));
  }
  j["postulates"] = std::move(ps);
  if (k.needs_equal_map) {
    json em;
    em["name"] = k.equal_map_name;
    em["signature"] = term_to_json(k.equal_map_signature);
    j["equalMap"] = std::move(em);
  } else {
    j["equalMap"] = nullptr;
  }
  return j.dump(2) + "\n";
}

LiftingDef parse_json_lifting(const std::string& s) {
  json j = json::parse(s);
  LiftingDef l;
  l.name = j.at("name");
  l.arity = j.at("arity");
  l.signature = term_from_json(j.at("signature"));
  for (const auto& jc : j.at("clauses")) {
    LiftClause c;
    c.ctor = jc.at("ctor");
    c.index_pats = jc.at("indexPats").get<std::vector<std::string>>();
    c.pred_pats = jc.at("predPats").get<std::vector<std::string>>();
    c.ctor_args = jc.at("ctorArgs").get<std::vector<std::string>>();
    c.body = term_from_json(jc.at("body"));
    l.clauses.push_back(std::move(c));
  }
  return l;
}

RuleDef parse_json_rule(const std::string& s) {
  json j = json::parse(s);
  RuleDef r;
  r.name = j.at("name");
  r.kind = j.at("ruleKind") == "deep" ? RuleKind::Deep : RuleKind::Structural;
  r.monomorphic = j.at("monomorphic");
  r.statement = term_from_json(j.at("statement"));
  for (const auto& jh : j.at("hypotheses"))
    r.hypotheses.emplace_back(jh.at("name"), term_from_json(jh.at("term")));
  return r;
}

WitnessDef parse_json_witness(const std::string& s) {
  json j = json::parse(s);
  WitnessDef w;
  w.name = j.at("name");
  w.params = j.at("params").get<std::vector<std::string>>();
  w.signature = term_from_json(j.at("signature"));
  for (const auto& jc : j.at("clauses")) {
    WitnessClause c;
    c.ctor = jc.at("ctor");
    c.index_pats = jc.at("indexPats").get<std::vector<std::string>>();
    c.pred_pats = jc.at("predPats").get<std::vector<std::string>>();
    c.ctor_args = jc.at("ctorArgs").get<std::vector<std::string>>();
    c.evidence = jc.at("evidence").get<std::vector<std::string>>();
    c.evidence_tuple = jc.at("evidenceTuple");
    c.evidence_tt = jc.at("evidenceTt");
    c.body = wit_from_json(jc.at("body"));
    for (const auto& jw : jc.at("wheres")) {
      WhereBinding wb;
      wb.name = jw.at("name");
      wb.value = wit_from_json(jw.at("value"));
      if (jw.contains("annotation")) wb.annotation = term_from_json(jw.at("annotation"));
      c.wheres.push_back(std::move(wb));
    }
    w.clauses.push_back(std::move(c));
  }
  return w;
}

}  // namespace deepind
