#include "tele/speclang.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include "tele/errors.hpp"

namespace tele::speclang {

namespace {

// ------------------------------------------------------------------ lexer

enum class Tok { ident, integer, punct, newline, end };

struct Token {
  Tok kind;
  std::string text;
  Level value = 0;
  SourceLocation where;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blanks();
      SourceLocation here{line_, column_};
      if (pos_ >= text_.size()) {
        out.push_back({Tok::end, "", 0, here});
        return out;
      }
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (c == '\n') {
        advance();
        out.push_back({Tok::newline, "\\n", 0, here});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
          advance();
        out.push_back({Tok::ident, std::string(text_.substr(start, pos_ - start)), 0, here});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '-' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        std::size_t start = pos_;
        advance();
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
        std::string_view digits = text_.substr(start, pos_ - start);
        Level value = 0;
        auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
        if (ec != std::errc() || end != digits.data() + digits.size())
          throw ParseError(here.line, here.column, "integer '" + std::string(digits) + "' out of range");
        out.push_back({Tok::integer, std::string(digits), value, here});
        continue;
      }
      static const std::pair<std::string_view, std::string_view> multi[] = {
          {"..", ".."}, {"->", "->"}, {"<=", "<="}, {">=", ">="}, {"!=", "!="},
          {"\xE2\x89\xA4", "<="}, {"\xE2\x89\xA5", ">="}, {"\xE2\x89\xA0", "!="}, {"&&", "&"}};
      bool matched = false;
      for (const auto& [spelling, canonical] : multi) {
        if (text_.substr(pos_).starts_with(spelling)) {
          const std::size_t stop = pos_ + spelling.size();
          while (pos_ < stop) advance();
          out.push_back({Tok::punct, std::string(canonical), 0, here});
          matched = true;
          break;
        }
      }
      if (matched) continue;
      if (std::string_view("{}(),;:=<>&").find(c) != std::string_view::npos) {
        advance();
        out.push_back({Tok::punct, std::string(1, c), 0, here});
        continue;
      }
      throw ParseError(here.line, here.column, "unexpected character '" + std::string(1, c) + "'");
    }
  }

 private:
  void skip_blanks() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r'))
      advance();
    if (pos_ == 0 && text_.starts_with("\xEF\xBB\xBF")) {
      pos_ = 3;
      skip_blanks();
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0) != 0x80) {
      ++column_;
    }
    ++pos_;
    // Continuation bytes of a multi-byte character do not open a column.
    while (pos_ < text_.size() && (static_cast<unsigned char>(text_[pos_]) & 0xC0) == 0x80) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// ----------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ModelSpecDocument run() {
    while (!at(Tok::end)) {
      if (at(Tok::newline)) {
        ++pos_;
        continue;
      }
      statement();
      if (!at(Tok::end)) expect_newline();
    }
    return std::move(doc_);
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at(Tok kind) const { return peek().kind == kind; }
  bool at_punct(std::string_view p) const { return at(Tok::punct) && peek().text == p; }
  bool at_keyword(std::string_view k) const { return at(Tok::ident) && peek().text == k; }

  [[noreturn]] void fail(const Token& t, const std::string& what) const {
    throw ParseError(t.where.line, t.where.column, what);
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::end: return "end of input";
      case Tok::newline: return "end of line";
      default: return "'" + t.text + "'";
    }
  }

  void expect_newline() {
    if (!at(Tok::newline)) fail(peek(), "expected end of line, found " + describe(peek()));
    ++pos_;
  }

  // Returns true if at least one line break was skipped.
  bool skip_newlines() {
    const std::size_t start = pos_;
    while (at(Tok::newline)) ++pos_;
    return pos_ != start;
  }

  void expect_punct(std::string_view p) {
    if (!at_punct(p)) fail(peek(), "expected '" + std::string(p) + "', found " + describe(peek()));
    ++pos_;
  }

  void expect_keyword(std::string_view k) {
    if (!at_keyword(k)) fail(peek(), "expected '" + std::string(k) + "', found " + describe(peek()));
    ++pos_;
  }

  std::string identifier(std::string_view role) {
    if (!at(Tok::ident)) fail(peek(), "expected " + std::string(role) + ", found " + describe(peek()));
    return tokens_[pos_++].text;
  }

  Level integer() {
    if (!at(Tok::integer)) fail(peek(), "expected an integer, found " + describe(peek()));
    return tokens_[pos_++].value;
  }

  std::vector<std::string> identifier_list(std::string_view role) {
    std::vector<std::string> out{identifier(role)};
    while (at_punct(",")) {
      ++pos_;
      out.push_back(identifier(role));
    }
    return out;
  }

  void statement() {
    const Token& head = peek();
    if (head.kind != Tok::ident) fail(head, "expected a declaration, found " + describe(head));
    const std::string keyword = head.text;
    ++pos_;
    if (keyword == "var") return var_decl(head.where);
    if (keyword == "edge") return edge_decl(head.where);
    if (keyword == "mech") return mech_decl(head.where);
    if (keyword == "do") {
      if (intervention_seen_) fail(head, "second 'do' declaration; a model has one intervention");
      intervention_seen_ = true;
      doc_.intervention = DoDecl{identifier("a variable name"), head.where};
      return;
    }
    if (keyword == "rest") {
      if (doc_.rest) fail(head, "second 'rest' declaration");
      RestDecl r{identifier("a variable name"), 0, head.where};
      expect_punct("=");
      r.level = integer();
      doc_.rest = r;
      return;
    }
    if (keyword == "final") return final_decl(head.where);
    fail(head, "unknown declaration '" + keyword + "'");
  }

  void var_decl(SourceLocation where) {
    VarDecl v{identifier("a variable name"), {}, where};
    expect_keyword("in");
    if (at_punct("{")) {
      ++pos_;
      v.domain.push_back(integer());
      while (at_punct(",")) {
        ++pos_;
        v.domain.push_back(integer());
      }
      expect_punct("}");
    } else {
      const Token& lo_tok = peek();
      Level lo = integer();
      expect_punct("..");
      Level hi = integer();
      if (hi <= lo) fail(lo_tok, "empty or single-level range " + std::to_string(lo) + ".." + std::to_string(hi));
      for (Level l = lo; l <= hi; ++l) v.domain.push_back(l);
    }
    doc_.variables.push_back(std::move(v));
  }

  void edge_decl(SourceLocation where) {
    EdgeDecl e{identifier("a variable name"), {}, where};
    expect_punct("->");
    e.to = identifier("a variable name");
    doc_.edges.push_back(std::move(e));
  }

  void mech_decl(SourceLocation where) {
    MechDecl m{identifier("a variable name"), MechDecl::Kind::table, {}, {}, where};
    bool explicit_parents = false;
    if (at_punct("(")) {
      ++pos_;
      m.parents = identifier_list("a parent name");
      expect_punct(")");
      explicit_parents = true;
    }
    expect_punct("=");
    if (at_keyword("sum")) {
      const Token& sum_tok = peek();
      ++pos_;
      m.kind = MechDecl::Kind::sum;
      expect_punct("(");
      auto args = identifier_list("a parent name");
      expect_punct(")");
      if (explicit_parents && args != m.parents)
        fail(sum_tok, "sum arguments differ from the declared parents of " + m.child);
      m.parents = std::move(args);
    } else if (at_keyword("table")) {
      ++pos_;
      skip_newlines();
      expect_punct("{");
      skip_newlines();
      while (!at_punct("}")) {
        table_row(m);
        const bool line_break = skip_newlines();
        if (at_punct(";")) {
          ++pos_;
          skip_newlines();
        } else if (!line_break && !at_punct("}")) {
          fail(peek(), "expected ';' or '}', found " + describe(peek()));
        }
      }
      ++pos_;
      if (!explicit_parents) pending_parents_.insert(doc_.mechanisms.size());
    } else {
      fail(peek(), "expected 'sum' or 'table', found " + describe(peek()));
    }
    doc_.mechanisms.push_back(std::move(m));
    row_where_.resize(doc_.mechanisms.size());
  }

  void table_row(MechDecl& m) {
    const Token& start = peek();
    expect_punct("(");
    std::vector<Level> key;
    if (!at_punct(")")) {
      key.push_back(integer());
      while (at_punct(",")) {
        ++pos_;
        key.push_back(integer());
      }
    }
    expect_punct(")");
    expect_punct("->");
    Level out = integer();
    m.rows.emplace_back(std::move(key), out);
    row_where_.resize(doc_.mechanisms.size() + 1);
    row_where_[doc_.mechanisms.size()].push_back(start.where);
  }

  void final_decl(SourceLocation where) {
    FinalDecl f{identifier("a final-model name"), {}, {}, where};
    skip_newlines();
    expect_punct("{");
    bool have_effects = false, have_goal = false;
    skip_newlines();
    while (!at_punct("}")) {
      const Token& key = peek();
      std::string field = identifier("'effects' or 'goal'");
      expect_punct(":");
      if (field == "effects") {
        if (have_effects) fail(key, "second 'effects' entry in final " + f.name);
        have_effects = true;
        f.effects = identifier_list("a variable name");
      } else if (field == "goal") {
        if (have_goal) fail(key, "second 'goal' entry in final " + f.name);
        have_goal = true;
        f.goal.push_back(goal_atom());
        while (at_punct("&")) {
          ++pos_;
          f.goal.push_back(goal_atom());
        }
      } else {
        fail(key, "unknown entry '" + field + "' in final " + f.name);
      }
      const bool line_break = skip_newlines();
      if (at_punct(";")) {
        ++pos_;
        skip_newlines();
      } else if (!line_break && !at_punct("}")) {
        fail(peek(), "expected ';' or '}', found " + describe(peek()));
      }
    }
    ++pos_;
    if (!have_effects) fail(tokens_[pos_ - 1], "final " + f.name + " has no 'effects' entry");
    if (!have_goal) fail(tokens_[pos_ - 1], "final " + f.name + " has no 'goal' entry");
    doc_.finals.push_back(std::move(f));
  }

  GoalAtom goal_atom() {
    GoalAtom a;
    a.variable = identifier("a variable name");
    const Token& op = peek();
    static const std::map<std::string, Comparison> ops = {
        {"=", Comparison::equal},          {"<", Comparison::less},
        {">", Comparison::greater},        {"<=", Comparison::less_equal},
        {">=", Comparison::greater_equal}, {"!=", Comparison::not_equal}};
    auto it = op.kind == Tok::punct ? ops.find(op.text) : ops.end();
    if (it == ops.end()) fail(op, "expected a comparison, found " + describe(op));
    ++pos_;
    a.op = it->second;
    a.level = integer();
    return a;
  }

 public:
  /// Table mechanisms written without a parent list.
  const std::set<std::size_t>& implicit_parents() const { return pending_parents_; }
  /// Per mechanism, where each table row starts.
  const std::vector<std::vector<SourceLocation>>& row_locations() const { return row_where_; }

 private:
  std::set<std::size_t> pending_parents_;
  std::vector<std::vector<SourceLocation>> row_where_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  ModelSpecDocument doc_;
  bool intervention_seen_ = false;
};

// ------------------------------------------------------------- validation

[[noreturn]] void fail_at(const SourceLocation& where, const std::string& what) {
  throw ParseError(where.line, where.column, what);
}

std::string tuple_string(const std::vector<Level>& key) {
  std::string out = "(";
  for (std::size_t i = 0; i < key.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(key[i]);
  }
  return out + ")";
}

void validate(ModelSpecDocument& doc, const std::set<std::size_t>& implicit_parents,
              const std::vector<std::vector<SourceLocation>>& row_where) {
  std::map<std::string, const VarDecl*> vars;
  std::vector<std::string> order;
  for (const auto& v : doc.variables) {
    if (vars.contains(v.name)) fail_at(v.where, "duplicate declaration of variable " + v.name);
    for (std::size_t i = 1; i < v.domain.size(); ++i)
      if (v.domain[i] <= v.domain[i - 1])
        fail_at(v.where, "levels of " + v.name + " must be strictly increasing");
    if (v.domain.size() < 2) fail_at(v.where, "variable " + v.name + " needs at least two levels");
    vars[v.name] = &v;
    order.push_back(v.name);
  }
  auto require_var = [&](const std::string& name, const SourceLocation& where) -> const VarDecl& {
    auto it = vars.find(name);
    if (it == vars.end()) fail_at(where, "undeclared variable " + name);
    return *it->second;
  };

  std::map<std::string, std::vector<std::string>> parents;
  std::set<std::pair<std::string, std::string>> seen_edges;
  for (const auto& e : doc.edges) {
    require_var(e.from, e.where);
    require_var(e.to, e.where);
    if (e.from == e.to) fail_at(e.where, "edge from " + e.from + " to itself");
    if (!seen_edges.emplace(e.from, e.to).second)
      fail_at(e.where, "duplicate edge " + e.from + " -> " + e.to);
    parents[e.to].push_back(e.from);
  }
  {
    std::vector<CausalDag::Edge> edges;
    for (const auto& e : doc.edges) edges.emplace_back(e.from, e.to);
    try {
      CausalDag dag(order, edges);
    } catch (const StructuralError& err) {
      for (const auto& e : doc.edges)
        if (e.to == err.node()) fail_at(e.where, "cycle: " + std::string(err.what()));
      throw ParseError(1, 0, err.what());
    }
  }
  auto declared_parents = [&](const std::string& child) {
    std::vector<std::string> ps = parents[child];
    std::sort(ps.begin(), ps.end(), [&](const std::string& a, const std::string& b) {
      return std::find(order.begin(), order.end(), a) < std::find(order.begin(), order.end(), b);
    });
    return ps;
  };

  std::set<std::string> with_mechanism;
  for (std::size_t mi = 0; mi < doc.mechanisms.size(); ++mi) {
    MechDecl& m = doc.mechanisms[mi];
    const VarDecl& child = require_var(m.child, m.where);
    if (!with_mechanism.insert(m.child).second)
      fail_at(m.where, "duplicate mechanism for " + m.child);
    auto graph_parents = declared_parents(m.child);
    if (graph_parents.empty())
      fail_at(m.where, m.child + " has no incoming edges; exogenous variables take no mechanism");
    if (implicit_parents.contains(mi)) m.parents = graph_parents;
    for (const auto& p : m.parents) require_var(p, m.where);
    {
      auto a = m.parents, b = graph_parents;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b || std::adjacent_find(a.begin(), a.end()) != a.end())
        fail_at(m.where, "mechanism parents of " + m.child + " must be exactly its edge parents");
    }
    std::vector<Variable> parent_vars;
    for (const auto& p : m.parents) parent_vars.push_back({p, vars[p]->domain});
    const Variable child_var{child.name, child.domain};

    if (m.kind == MechDecl::Kind::sum) {
      try {
        Mechanism::sum(child_var, parent_vars);
      } catch (const StructuralError& err) {
        fail_at(m.where, std::string("sum is not total: ") + err.what() + "; widen the domain of " + m.child);
      }
      continue;
    }
    std::set<std::vector<Level>> keys;
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
      const auto& [key, out] = m.rows[r];
      const SourceLocation where = r < row_where[mi].size() ? row_where[mi][r] : m.where;
      if (key.size() != m.parents.size())
        fail_at(where, "row " + tuple_string(key) + " has " + std::to_string(key.size()) +
                           " levels but " + m.child + " has " + std::to_string(m.parents.size()) + " parents");
      for (std::size_t i = 0; i < key.size(); ++i)
        if (!parent_vars[i].has_level(key[i]))
          fail_at(where, "level " + std::to_string(key[i]) + " is outside the domain of " + m.parents[i]);
      if (!child_var.has_level(out))
        fail_at(where, "output " + std::to_string(out) + " is outside the domain of " + m.child);
      if (!keys.insert(key).second) fail_at(where, "duplicate row " + tuple_string(key) + " for " + m.child);
    }
    std::vector<const Variable*> ptrs;
    for (const auto& p : parent_vars) ptrs.push_back(&p);
    for_each_combination(ptrs, [&](std::span<const Level> combo) {
      std::vector<Level> key(combo.begin(), combo.end());
      if (!keys.contains(key))
        fail_at(m.where, "mechanism for " + m.child + " is not total: no row for " + tuple_string(key));
    });
  }
  for (const auto& v : doc.variables)
    if (!parents[v.name].empty() && !with_mechanism.contains(v.name))
      fail_at(v.where, "variable " + v.name + " has parents but no mechanism");

  if (doc.intervention) require_var(doc.intervention->target, doc.intervention->where);
  if (doc.rest) {
    const auto& r = *doc.rest;
    const VarDecl& v = require_var(r.variable, r.where);
    if (!doc.intervention) fail_at(r.where, "'rest' needs a 'do' declaration");
    if (r.variable != doc.intervention->target)
      fail_at(r.where, "rest level given for " + r.variable + ", but the intervention is on " +
                           doc.intervention->target);
    if (std::find(v.domain.begin(), v.domain.end(), r.level) == v.domain.end())
      fail_at(r.where, "rest level " + std::to_string(r.level) + " is outside the domain of " + v.name);
  }

  std::set<std::string> final_names;
  for (const auto& f : doc.finals) {
    if (!final_names.insert(f.name).second) fail_at(f.where, "duplicate final model " + f.name);
    if (!doc.intervention) fail_at(f.where, "final " + f.name + " needs a 'do' declaration");
    for (const auto& e : f.effects) require_var(e, f.where);
    for (const auto& a : f.goal) require_var(a.variable, f.where);
  }
}

std::string domain_string(const std::vector<Level>& domain) {
  bool contiguous = true;
  for (std::size_t i = 1; i < domain.size(); ++i)
    if (domain[i] != domain[i - 1] + 1) contiguous = false;
  if (contiguous) return std::to_string(domain.front()) + ".." + std::to_string(domain.back());
  std::string out = "{";
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(domain[i]);
  }
  return out + "}";
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

}  // namespace

ModelSpecDocument parse_model(std::string_view text) {
  Parser parser(Lexer(text).run());
  ModelSpecDocument doc = parser.run();
  validate(doc, parser.implicit_parents(), parser.row_locations());
  try {
    build_scm(doc);
  } catch (const Error& err) {
    throw ParseError(1, 0, err.what());
  }
  for (const auto& f : doc.finals) {
    try {
      build_final(doc, f.name);
    } catch (const Error& err) {
      fail_at(f.where, "final " + f.name + ": " + err.what());
    }
  }
  return doc;
}

std::string print_model(const ModelSpecDocument& doc) {
  std::ostringstream out;
  for (const auto& v : doc.variables) out << "var " << v.name << " in " << domain_string(v.domain) << "\n";
  for (const auto& e : doc.edges) out << "edge " << e.from << " -> " << e.to << "\n";
  for (const auto& m : doc.mechanisms) {
    if (m.kind == MechDecl::Kind::sum) {
      out << "mech " << m.child << " = sum(" << join(m.parents) << ")\n";
      continue;
    }
    out << "mech " << m.child << "(" << join(m.parents) << ") = table { ";
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
      if (r) out << "; ";
      out << "(";
      for (std::size_t i = 0; i < m.rows[r].first.size(); ++i) {
        if (i) out << ", ";
        out << m.rows[r].first[i];
      }
      out << ") -> " << m.rows[r].second;
    }
    out << " }\n";
  }
  if (doc.intervention) out << "do " << doc.intervention->target << "\n";
  if (doc.rest) out << "rest " << doc.rest->variable << " = " << doc.rest->level << "\n";
  for (const auto& f : doc.finals) {
    std::vector<std::string> atoms;
    for (const auto& a : f.goal) atoms.push_back(a.to_string());
    std::string goal;
    for (std::size_t i = 0; i < atoms.size(); ++i) goal += (i ? " & " : "") + atoms[i];
    out << "final " << f.name << " { effects: " << join(f.effects) << "; goal: " << goal << " }\n";
  }
  return out.str();
}

Scm build_scm(const ModelSpecDocument& doc) {
  std::vector<Variable> vars;
  for (const auto& v : doc.variables) vars.push_back({v.name, v.domain});
  std::vector<CausalDag::Edge> edges;
  for (const auto& e : doc.edges) edges.emplace_back(e.from, e.to);
  std::vector<Mechanism> mechs;
  auto find_var = [&](const std::string& name) -> const Variable& {
    auto it = std::find_if(vars.begin(), vars.end(), [&](const Variable& v) { return v.name == name; });
    if (it == vars.end()) throw LookupError("unknown variable " + name);
    return *it;
  };
  for (const auto& m : doc.mechanisms) {
    if (m.kind == MechDecl::Kind::sum) {
      std::vector<Variable> parent_vars;
      for (const auto& p : m.parents) parent_vars.push_back(find_var(p));
      mechs.push_back(Mechanism::sum(find_var(m.child), parent_vars));
    } else {
      Mechanism::Table table(m.rows.begin(), m.rows.end());
      mechs.emplace_back(m.child, m.parents, std::move(table));
    }
  }
  return Scm(std::move(vars), std::move(edges), std::move(mechs));
}

MStarModel build_mstar(const ModelSpecDocument& doc) {
  if (!doc.intervention) throw UsageError("the model declares no intervention ('do')");
  return do_surgery(build_scm(doc), {doc.intervention->target});
}

FinalModel build_final(const ModelSpecDocument& doc, std::string_view name) {
  auto it = std::find_if(doc.finals.begin(), doc.finals.end(),
                         [&](const FinalDecl& f) { return f.name == name; });
  if (it == doc.finals.end()) throw UsageError("no final model named " + std::string(name));
  return build_final_model(build_mstar(doc), it->effects, GoalPredicate(it->goal));
}

std::optional<Level> rest_level(const ModelSpecDocument& doc) {
  if (!doc.rest) return std::nullopt;
  return doc.rest->level;
}

}  // namespace tele::speclang
