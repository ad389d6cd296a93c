#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace deepind {

// Byte-offset range into the source text a diagnostic points at.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

enum class DiagCode {
  ParseError,
  UnresolvedName,
  ArityMismatch,
  DuplicateDecl,
  BadReturn,
  MutualRecursion,  // reserved: prior-only resolution surfaces these as UnresolvedName
  GrammarViolation,
  NestedG,
  HIsGadt,
  TrulyNested,
  TrulyNestedGadt,
  TrulyNestedType,
  UnsupportedMap,
  UnknownBuiltin,
  CapExceeded,
  Usage,
};

const char* diag_code_name(DiagCode code);

struct Diagnostic {
  DiagCode code = DiagCode::ParseError;
  std::string message;
  Span span;
  std::string explanation;  // optional, multi-line
};

// Thrown by derivation operations whose contract is "result or Diagnostic".
class diag_error : public std::runtime_error {
 public:
  explicit diag_error(Diagnostic d)
      : std::runtime_error(std::string(diag_code_name(d.code)) + ": " + d.message),
        diagnostic(std::move(d)) {}
  Diagnostic diagnostic;
};

[[noreturn]] inline void throw_diag(DiagCode code, std::string message, Span span = {},
                                    std::string explanation = {}) {
  throw diag_error(Diagnostic{code, std::move(message), span, std::move(explanation)});
}

// Renders "line:col" for a byte offset; used when printing diagnostics for a file.
std::string span_location(const std::string& text, std::size_t offset);

std::string render_diagnostic(const Diagnostic& d, const std::string& filename,
                              const std::string& text, bool color);

}  // namespace deepind
