#include "tele/identification.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>

#include "tele/errors.hpp"

namespace tele {

Dataset::Dataset(std::vector<std::string> columns, std::vector<DataRow> rows)
    : columns_(std::move(columns)) {
  std::map<World, std::int64_t> merged;
  for (auto& r : rows) {
    if (r.values.size() != columns_.size()) throw Error("dataset row of the wrong width");
    if (r.count < 1) throw Error("dataset counts must be positive");
    merged[std::move(r.values)] += r.count;
  }
  if (merged.empty()) throw Error("dataset has no observations");
  for (auto& [values, count] : merged) rows_.push_back({values, count});
}

std::int64_t Dataset::total() const {
  return std::accumulate(rows_.begin(), rows_.end(), std::int64_t{0},
                         [](std::int64_t acc, const DataRow& r) { return acc + r.count; });
}

WorldTable Dataset::support() const {
  std::vector<World> worlds;
  for (const auto& r : rows_) worlds.push_back(r.values);
  return WorldTable(columns_, std::move(worlds));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

std::optional<std::int64_t> parse_integer(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  std::int64_t value = 0;
  auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size() || field.empty()) return std::nullopt;
  return value;
}

}  // namespace

Dataset load_dataset(std::string_view text, const Scm& model) {
  const auto names = model.names();
  std::vector<std::size_t> slot;  // header position -> model position
  bool has_count = false;
  bool have_header = false;
  std::vector<DataRow> rows;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    std::string_view line = trim(raw);
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line = trim(line.substr(3));
    if (line.empty() || line.front() == '#') continue;

    auto fields = split_fields(line);
    if (!have_header) {
      have_header = true;
      if (!fields.empty() && fields.back() == "count") {
        has_count = true;
        fields.pop_back();
      }
      std::vector<bool> seen(names.size(), false);
      for (auto f : fields) {
        auto it = std::find(names.begin(), names.end(), f);
        if (it == names.end())
          throw ParseError(line_no, 0, "unknown variable '" + std::string(f) + "' in header");
        auto idx = static_cast<std::size_t>(it - names.begin());
        if (seen[idx]) throw ParseError(line_no, 0, "variable " + std::string(f) + " appears twice in header");
        seen[idx] = true;
        slot.push_back(idx);
      }
      for (std::size_t i = 0; i < names.size(); ++i)
        if (!seen[i]) throw ParseError(line_no, 0, "header does not name variable " + names[i]);
      continue;
    }

    const std::size_t expected = slot.size() + (has_count ? 1 : 0);
    if (fields.size() != expected)
      throw ParseError(line_no, 0, "expected " + std::to_string(expected) + " fields, found " +
                                       std::to_string(fields.size()));
    DataRow row{World(names.size()), 1};
    for (std::size_t i = 0; i < slot.size(); ++i) {
      auto value = parse_integer(fields[i]);
      const Variable& var = model.variables()[slot[i]];
      if (!value) throw ParseError(line_no, 0, "'" + std::string(fields[i]) + "' is not an integer level of " + var.name);
      if (*value != static_cast<Level>(*value) || !var.has_level(static_cast<Level>(*value)))
        throw ParseError(line_no, 0, "value " + std::to_string(*value) + " is outside the domain of " + var.name);
      row.values[slot[i]] = static_cast<Level>(*value);
    }
    if (has_count) {
      auto count = parse_integer(fields.back());
      if (!count || *count < 1)
        throw ParseError(line_no, 0, "count must be a positive integer, found '" + std::string(fields.back()) + "'");
      row.count = *count;
    }
    rows.push_back(std::move(row));
  }
  if (!have_header) throw ParseError(line_no, 0, "dataset has no header");
  if (rows.empty()) throw ParseError(line_no, 0, "dataset has no observations");
  return Dataset(names, std::move(rows));
}

void require_bound(const Dataset& data, const Scm& model) {
  if (data.columns() != model.names())
    throw BindingError("dataset columns do not match the model's variables");
}

SupportCheck check_support(const FinalModel& f, const Dataset& data) {
  require_bound(data, f.mstar().base());
  const WorldTable worlds = compatible_worlds(f);
  SupportCheck out;
  for (const auto& r : data.rows())
    if (!worlds.contains(r.values)) out.violating_rows.push_back(r);
  return out;
}

DependenceCheck check_dependence(const FinalModel& f, const Dataset& data,
                                 const IndependenceStatement& stmt) {
  require_bound(data, f.mstar().base());
  const WorldTable worlds = compatible_worlds(f);
  DependenceCheck out{stmt, std::nullopt, false, false, {}};
  if (!worlds.empty()) out.expected_independent = uniform_independent(worlds, stmt);

  std::vector<World> values;
  std::vector<std::int64_t> counts;
  for (const auto& r : data.rows()) {
    values.push_back(r.values);
    counts.push_back(r.count);
  }
  std::vector<World> observed_strata;
  out.observed_independent = weighted_independent(data.columns(), values, counts, stmt, &observed_strata);

  if (!worlds.empty()) {
    std::vector<World> expected_strata;
    std::vector<std::int64_t> ones(worlds.size(), 1);
    weighted_independent(worlds.columns(), worlds.rows(), ones, stmt, &expected_strata);
    for (const auto& z : expected_strata)
      if (std::find(observed_strata.begin(), observed_strata.end(), z) == observed_strata.end())
        out.skipped_strata.push_back(z);
  }
  out.agree = out.expected_independent && *out.expected_independent == out.observed_independent;
  return out;
}

std::vector<IndependenceStatement> signature_statements(const FinalModel& f) {
  const CausalDag& dag = f.mstar().base().dag();
  const auto effects = dag.descendants(f.action());
  std::vector<IndependenceStatement> out;
  for (const auto& n : dag.nodes()) {
    if (n == f.action() || std::find(effects.begin(), effects.end(), n) != effects.end()) continue;
    out.emplace_back(f.action(), n);
  }
  return out;
}

std::vector<IdentificationVerdict> rank_hypotheses(std::span<const FinalModel> candidates,
                                                   const Dataset& data, const RankOptions& options) {
  if (candidates.empty()) throw UsageError("no goal hypotheses to rank");
  for (const auto& c : candidates)
    if (!(c.mstar() == candidates.front().mstar()))
      throw ComparisonError("goal hypotheses are built over different intervened models");
  require_bound(data, candidates.front().mstar().base());

  std::vector<IdentificationVerdict> verdicts;
  std::vector<WorldTable> sets;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const FinalModel& f = candidates[i];
    IdentificationVerdict v;
    v.hypothesis = i;
    v.violating_rows = check_support(f, data).violating_rows;
    v.support_compatible = v.violating_rows.empty();
    for (const auto& stmt : signature_statements(f)) v.dependence_checks.push_back(check_dependence(f, data, stmt));
    v.compatible = v.support_compatible &&
                   std::all_of(v.dependence_checks.begin(), v.dependence_checks.end(),
                               [](const DependenceCheck& c) { return c.agree; });
    sets.push_back(compatible_worlds(f));
    v.compatible_size = sets.back().size();
    verdicts.push_back(std::move(v));
  }

  auto group = [](const IdentificationVerdict& v) { return v.compatible ? 0 : v.support_compatible ? 1 : 2; };
  std::stable_sort(verdicts.begin(), verdicts.end(), [&](const auto& a, const auto& b) {
    if (group(a) != group(b)) return group(a) < group(b);
    if (options.prefer_specific && a.compatible_size != b.compatible_size)
      return a.compatible_size < b.compatible_size;
    return a.hypothesis < b.hypothesis;
  });

  std::vector<const WorldTable*> classes;
  for (auto& v : verdicts) {
    const WorldTable& mine = sets[v.hypothesis];
    auto it = std::find_if(classes.begin(), classes.end(), [&](const WorldTable* t) { return *t == mine; });
    if (it == classes.end()) {
      classes.push_back(&mine);
      v.equivalence_class = classes.size();
    } else {
      v.equivalence_class = static_cast<std::size_t>(it - classes.begin()) + 1;
    }
  }
  return verdicts;
}

IdentificationOutcome summarize(const std::vector<IdentificationVerdict>& ranked) {
  std::optional<std::size_t> smallest;
  for (const auto& v : ranked)
    if (v.compatible && (!smallest || v.compatible_size < *smallest)) smallest = v.compatible_size;
  if (!smallest) return IdentificationOutcome::none;
  std::size_t at_smallest = 0;
  for (const auto& v : ranked)
    if (v.compatible && v.compatible_size == *smallest) ++at_smallest;
  return at_smallest == 1 ? IdentificationOutcome::unique : IdentificationOutcome::tied;
}

}  // namespace tele
