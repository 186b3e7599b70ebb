#ifndef TELE_IDENTIFICATION_HPP_
#define TELE_IDENTIFICATION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tele/model.hpp"
#include "tele/teleology.hpp"

namespace tele {

struct DataRow {
  World values;
  std::int64_t count = 1;

  friend bool operator==(const DataRow&, const DataRow&) = default;
};

/// Observed worlds with multiplicities. Rows are distinct and sorted;
/// columns follow the declaration order of the model the data was loaded
/// against.
class Dataset {
 public:
  /// Aggregates duplicates. Throws Error on an empty dataset, non-positive
  /// counts or rows of the wrong width.
  Dataset(std::vector<std::string> columns, std::vector<DataRow> rows);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::vector<DataRow>& rows() const { return rows_; }
  std::int64_t total() const;
  /// Distinct observed worlds.
  WorldTable support() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<std::string> columns_;
  std::vector<DataRow> rows_;
};

/// Comma-separated text: a header of variable names with an optional final
/// `count` column, then integer rows. `#` starts a comment line. The header
/// must name exactly the model's variables. Throws ParseError (line-numbered)
/// for unknown variables, out-of-domain values and malformed rows.
Dataset load_dataset(std::string_view text, const Scm& model);

/// Throws BindingError unless the dataset's columns are the model's
/// variables.
void require_bound(const Dataset& data, const Scm& model);

struct SupportCheck {
  std::vector<DataRow> violating_rows;
  bool compatible() const { return violating_rows.empty(); }
};

/// Observed rows that fall outside the hypothesis' compatible worlds.
SupportCheck check_support(const FinalModel& f, const Dataset& data);

struct DependenceCheck {
  IndependenceStatement statement;
  /// Verdict on the hypothesis' compatible worlds; empty if there are none.
  std::optional<bool> expected_independent;
  bool observed_independent = false;
  bool agree = false;
  /// Conditioning strata with compatible worlds but no observations.
  std::vector<World> skipped_strata;
};

DependenceCheck check_dependence(const FinalModel& f, const Dataset& data,
                                 const IndependenceStatement& stmt);

/// The statements a hypothesis is checked on: the action against every
/// variable that is not its causal effect. Under the intervention alone the
/// action is independent of all of them, so any dependence there is the
/// trace the goal leaves in the data.
std::vector<IndependenceStatement> signature_statements(const FinalModel& f);

struct IdentificationVerdict {
  /// Position of the hypothesis in the candidate list.
  std::size_t hypothesis = 0;
  bool compatible = false;
  bool support_compatible = false;
  std::vector<DataRow> violating_rows;
  std::vector<DependenceCheck> dependence_checks;
  std::size_t compatible_size = 0;
  /// 1-based; candidates with identical compatible worlds share a class.
  std::size_t equivalence_class = 0;
};

struct RankOptions {
  /// Smaller compatible sets rank first among equally compatible
  /// candidates. When off, declaration order decides.
  bool prefer_specific = true;
};

/// Ranked verdicts: compatible first, then support-compatible, then the
/// rest; within a group by compatible-set size (if enabled) and declaration
/// order. Throws UsageError for no candidates and ComparisonError when they
/// do not share one M*-model.
std::vector<IdentificationVerdict> rank_hypotheses(std::span<const FinalModel> candidates,
                                                   const Dataset& data,
                                                   const RankOptions& options = {});

enum class IdentificationOutcome { unique, none, tied };

/// unique: exactly one compatible candidate has the smallest compatible set
/// and it forms its own equivalence class.
IdentificationOutcome summarize(const std::vector<IdentificationVerdict>& ranked);

}  // namespace tele

#endif  // TELE_IDENTIFICATION_HPP_
