#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace monodromic {

// Base for all library errors so callers can catch one type.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct AmbientMismatch : Error {
  explicit AmbientMismatch(const std::string& what) : Error(what) {}
};

// A map does not carry a subspace into the requested subspace / quotient.
struct NotPreserved : Error {
  explicit NotPreserved(const std::string& what) : Error(what) {}
};

struct NotNilpotent : Error {
  explicit NotNilpotent(const std::string& what) : Error(what) {}
};

struct IrrationalEigenvalue : Error {
  explicit IrrationalEigenvalue(const std::string& what) : Error(what) {}
};

struct WindowTooSmall : Error {
  explicit WindowTooSmall(const std::string& what) : Error(what) {}
};

struct InvalidCore : Error {
  explicit InvalidCore(const std::string& what) : Error(what) {}
};

struct InvalidGluing : Error {
  explicit InvalidGluing(const std::string& what) : Error(what) {}
};

struct InvalidMMHM : Error {
  explicit InvalidMMHM(const std::string& what) : Error(what) {}
};

struct NotAMorphism : Error {
  explicit NotAMorphism(const std::string& what) : Error(what) {}
};

struct EigenvalueDenominatorMismatch : Error {
  explicit EigenvalueDenominatorMismatch(const std::string& what) : Error(what) {}
};

// JSON document problems: syntax (ParseError) vs shape/content (SchemaError).
struct ParseError : Error {
  int line = 0;
  int column = 0;
  ParseError(const std::string& what, int line_, int column_)
      : Error(what), line(line_), column(column_) {}
};

struct SchemaError : Error {
  explicit SchemaError(const std::string& what) : Error(what) {}
};

// Result of a validation pass: a list of named violations, empty means valid.
struct Diagnostics {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
  void fail(std::string v) { violations.push_back(std::move(v)); }
  void merge(const Diagnostics& other, const std::string& prefix = "") {
    for (const auto& v : other.violations)
      violations.push_back(prefix.empty() ? v : prefix + ": " + v);
  }
  std::string joined() const {
    std::string s;
    for (const auto& v : violations) {
      if (!s.empty()) s += "; ";
      s += v;
    }
    return s;
  }
};

}  // namespace monodromic
