#include "deepind/diag.hpp"

#include <sstream>

namespace deepind {

const char* diag_code_name(DiagCode code) {
  switch (code) {
    case DiagCode::ParseError: return "PARSE_ERROR";
    case DiagCode::UnresolvedName: return "UNRESOLVED_NAME";
    case DiagCode::ArityMismatch: return "ARITY_MISMATCH";
    case DiagCode::DuplicateDecl: return "DUPLICATE_DECL";
    case DiagCode::BadReturn: return "BAD_RETURN";
    case DiagCode::MutualRecursion: return "MUTUAL_RECURSION";
    case DiagCode::GrammarViolation: return "GRAMMAR_VIOLATION";
    case DiagCode::NestedG: return "NESTED_G";
    case DiagCode::HIsGadt: return "H_IS_GADT";
    case DiagCode::TrulyNested: return "TRULY_NESTED";
    case DiagCode::TrulyNestedGadt: return "TRULY_NESTED_GADT";
    case DiagCode::TrulyNestedType: return "TRULY_NESTED_TYPE";
    case DiagCode::UnsupportedMap: return "UNSUPPORTED_MAP";
    case DiagCode::UnknownBuiltin: return "UNKNOWN_BUILTIN";
    case DiagCode::CapExceeded: return "CAP_EXCEEDED";
    case DiagCode::Usage: return "USAGE";
  }
  return "UNKNOWN";
}

std::string span_location(const std::string& text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream os;
  os << line << ":" << col;
  return os.str();
}

std::string render_diagnostic(const Diagnostic& d, const std::string& filename,
                              const std::string& text, bool color) {
  std::ostringstream os;
  const char* red = color ? "\x1b[31m" : "";
  const char* bold = color ? "\x1b[1m" : "";
  const char* reset = color ? "\x1b[0m" : "";
  os << bold << filename << ":" << span_location(text, d.span.begin) << ":" << reset << " " << red
     << "error[" << diag_code_name(d.code) << "]" << reset << ": " << d.message << "\n";
  if (!d.explanation.empty()) {
    std::istringstream lines(d.explanation);
    std::string line;
    while (std::getline(lines, line)) os << "  " << line << "\n";
  }
  return os.str();
}

}  // namespace deepind
