#ifndef TELE_SPECLANG_HPP_
#define TELE_SPECLANG_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tele/intervention.hpp"
#include "tele/model.hpp"
#include "tele/teleology.hpp"

namespace tele::speclang {

/// Where a declaration starts. Locations are not part of the abstract
/// document, so any two compare equal.
struct SourceLocation {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourceLocation&, const SourceLocation&) { return true; }
};

struct VarDecl {
  std::string name;
  std::vector<Level> domain;
  SourceLocation where;

  friend bool operator==(const VarDecl&, const VarDecl&) = default;
};

struct EdgeDecl {
  std::string from;
  std::string to;
  SourceLocation where;

  friend bool operator==(const EdgeDecl&, const EdgeDecl&) = default;
};

struct MechDecl {
  enum class Kind { sum, table };

  std::string child;
  Kind kind = Kind::table;
  /// Argument order of the table rows (or of the sum).
  std::vector<std::string> parents;
  std::vector<std::pair<std::vector<Level>, Level>> rows;
  SourceLocation where;

  friend bool operator==(const MechDecl&, const MechDecl&) = default;
};

struct FinalDecl {
  std::string name;
  std::vector<std::string> effects;
  std::vector<GoalAtom> goal;
  SourceLocation where;

  friend bool operator==(const FinalDecl&, const FinalDecl&) = default;
};

struct DoDecl {
  std::string target;
  SourceLocation where;

  friend bool operator==(const DoDecl&, const DoDecl&) = default;
};

struct RestDecl {
  std::string variable;
  Level level = 0;
  SourceLocation where;

  friend bool operator==(const RestDecl&, const RestDecl&) = default;
};

/// A parsed `.tele` file.
struct ModelSpecDocument {
  std::vector<VarDecl> variables;
  std::vector<EdgeDecl> edges;
  std::vector<MechDecl> mechanisms;
  std::optional<DoDecl> intervention;
  std::optional<RestDecl> rest;
  std::vector<FinalDecl> finals;

  friend bool operator==(const ModelSpecDocument&, const ModelSpecDocument&) = default;
};

/// Parses and validates a model file; the first problem is reported as a
/// ParseError with its line and column.
///
///   var W in 0..1            var X in {0, 2, 5}
///   edge H -> T
///   mech T = sum(W, H)
///   mech B = table { (0)->0; (1)->1 }      mech B(H) = table { ... }
///   do H
///   rest H = 0
///   final warm { effects: T; goal: T = 1 }  goal: T >= 1 & B = 0
ModelSpecDocument parse_model(std::string_view text);

/// Canonical text; parse_model(print_model(d)) == d.
std::string print_model(const ModelSpecDocument& doc);

Scm build_scm(const ModelSpecDocument& doc);
/// Throws UsageError when the document has no `do` declaration.
MStarModel build_mstar(const ModelSpecDocument& doc);
/// Throws UsageError for an unknown final name.
FinalModel build_final(const ModelSpecDocument& doc, std::string_view name);
std::optional<Level> rest_level(const ModelSpecDocument& doc);

}  // namespace tele::speclang

#endif  // TELE_SPECLANG_HPP_
