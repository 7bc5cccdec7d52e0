#pragma once

#include <cctype>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "nmr/bitvec.hpp"
#include "nmr/errors.hpp"

namespace nmr {

inline constexpr int kMaxVariables = 16;  // assignments are 2^n bit rows

/// Truth assignment over n variables, variable j at bit j.
using Assignment = std::uint32_t;

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Var, True, False, Not, And, Or, Implies };
  Kind kind;
  int var = -1;
  FormulaPtr lhs, rhs;

  static FormulaPtr make_var(int v) { return std::make_shared<Formula>(Formula{Kind::Var, v, nullptr, nullptr}); }
  static FormulaPtr make_const(bool b) {
    return std::make_shared<Formula>(Formula{b ? Kind::True : Kind::False, -1, nullptr, nullptr});
  }
  static FormulaPtr make_not(FormulaPtr f) {
    return std::make_shared<Formula>(Formula{Kind::Not, -1, std::move(f), nullptr});
  }
  static FormulaPtr make(Kind k, FormulaPtr l, FormulaPtr r) {
    return std::make_shared<Formula>(Formula{k, -1, std::move(l), std::move(r)});
  }
};

inline bool eval(const Formula& f, Assignment a) {
  switch (f.kind) {
    case Formula::Kind::Var:     return (a >> f.var) & 1;
    case Formula::Kind::True:    return true;
    case Formula::Kind::False:   return false;
    case Formula::Kind::Not:     return !eval(*f.lhs, a);
    case Formula::Kind::And:     return eval(*f.lhs, a) && eval(*f.rhs, a);
    case Formula::Kind::Or:      return eval(*f.lhs, a) || eval(*f.rhs, a);
    case Formula::Kind::Implies: return !eval(*f.lhs, a) || eval(*f.rhs, a);
  }
  return false;
}

/// Set of truth assignments over a fixed variable list.
class ModelSet {
 public:
  ModelSet() = default;
  explicit ModelSet(int num_vars) : num_vars_(num_vars), bits_(std::size_t(1) << num_vars) {}

  static ModelSet none(int num_vars) { return ModelSet(num_vars); }
  static ModelSet all(int num_vars) {
    ModelSet m(num_vars);
    m.bits_ = Bitvec(std::size_t(1) << num_vars, true);
    return m;
  }

  int num_vars() const { return num_vars_; }
  std::size_t universe_size() const { return std::size_t(1) << num_vars_; }

  bool contains(Assignment a) const { return bits_.test(a); }
  void add(Assignment a) { bits_.set(a); }
  void remove(Assignment a) { bits_.reset(a); }

  std::size_t count() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }
  bool is_universe() const { return bits_.count() == universe_size(); }

  ModelSet complemented() const { return with(bits_.complemented()); }
  ModelSet operator&(const ModelSet& o) const { return with(bits_ & o.bits_); }
  ModelSet operator|(const ModelSet& o) const { return with(bits_ | o.bits_); }
  ModelSet operator-(const ModelSet& o) const { return with(bits_ - o.bits_); }
  bool operator==(const ModelSet& o) const = default;

  std::vector<Assignment> members() const {
    std::vector<Assignment> out;
    for (std::size_t i = bits_.next_set(0); i < bits_.size(); i = bits_.next_set(i + 1))
      out.push_back(static_cast<Assignment>(i));
    return out;
  }

 private:
  ModelSet with(Bitvec b) const {
    ModelSet m(num_vars_);
    m.bits_ = std::move(b);
    return m;
  }

  int num_vars_ = 0;
  Bitvec bits_;
};

/// Assignment rendered as a bit string, lowest-index variable leftmost.
inline std::string format_assignment(Assignment a, int num_vars) {
  std::string s(num_vars, '0');
  for (int i = 0; i < num_vars; ++i)
    if ((a >> i) & 1) s[i] = '1';
  return s;
}

inline ModelSet models(const Formula& f, int num_vars) {
  ModelSet m(num_vars);
  for (Assignment a = 0; a < (Assignment(1) << num_vars); ++a)
    if (eval(f, a)) m.add(a);
  return m;
}

/// Full disjunctive normal form listing every model as a conjunction of
/// literals; "false" for the empty set.
inline std::string to_dnf(const ModelSet& m, const std::vector<std::string>& vars) {
  if (m.empty()) return "false";
  std::string out;
  for (Assignment a : m.members()) {
    if (!out.empty()) out += " | ";
    std::string term;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (!term.empty()) term += " & ";
      term += ((a >> i) & 1) ? vars[i] : "!" + vars[i];
    }
    out += vars.empty() ? "true" : term;
  }
  return out;
}

namespace detail {

/// Recursive-descent parser; precedence ! > & > | > ->, with -> right
/// associative. Variables are [a-z][a-z0-9_]*; "true" and "false" are
/// reserved constants.
class FormulaParser {
 public:
  FormulaParser(const std::string& text, const std::vector<std::string>& vars)
      : text_(text), vars_(vars) {}

  FormulaPtr parse() {
    FormulaPtr f = implies();
    skip_space();
    if (pos_ != text_.size())
      throw Error(ErrorCode::SyntaxError,
                  "unexpected '" + std::string(1, text_[pos_]) + "' at position " +
                      std::to_string(pos_ + 1));
    return f;
  }

 private:
  FormulaPtr implies() {
    FormulaPtr l = disjunct();
    skip_space();
    if (match("->")) return Formula::make(Formula::Kind::Implies, std::move(l), implies());
    return l;
  }
  FormulaPtr disjunct() {
    FormulaPtr l = conjunct();
    while (true) {
      skip_space();
      if (peek() == '|') {
        ++pos_;
        l = Formula::make(Formula::Kind::Or, std::move(l), conjunct());
      } else {
        return l;
      }
    }
  }
  FormulaPtr conjunct() {
    FormulaPtr l = unary();
    while (true) {
      skip_space();
      if (peek() == '&') {
        ++pos_;
        l = Formula::make(Formula::Kind::And, std::move(l), unary());
      } else {
        return l;
      }
    }
  }
  FormulaPtr unary() {
    skip_space();
    if (peek() == '!') {
      ++pos_;
      return Formula::make_not(unary());
    }
    return atom();
  }
  FormulaPtr atom() {
    skip_space();
    char c = peek();
    if (c == '(') {
      ++pos_;
      FormulaPtr f = implies();
      skip_space();
      if (peek() != ')')
        throw Error(ErrorCode::SyntaxError, "missing ')' at position " + std::to_string(pos_ + 1));
      ++pos_;
      return f;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::islower(static_cast<unsigned char>(text_[pos_])) ||
              std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      std::string name = text_.substr(start, pos_ - start);
      if (name == "true") return Formula::make_const(true);
      if (name == "false") return Formula::make_const(false);
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return Formula::make_var(static_cast<int>(i));
      throw Error(ErrorCode::UnknownVariable, "variable '" + name + "' is not declared");
    }
    throw Error(ErrorCode::SyntaxError,
                pos_ < text_.size()
                    ? "unexpected '" + std::string(1, c) + "' at position " + std::to_string(pos_ + 1)
                    : "unexpected end of input");
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  bool match(const char* s) {
    std::size_t len = std::string(s).size();
    if (text_.compare(pos_, len, s) == 0) {
      pos_ += len;
      return true;
    }
    return false;
  }
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  const std::string& text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline FormulaPtr parse_formula(const std::string& text, const std::vector<std::string>& vars) {
  if (vars.size() > kMaxVariables)
    throw Error(ErrorCode::CapacityExceeded,
                "at most " + std::to_string(kMaxVariables) + " variables supported");
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i] == "true" || vars[i] == "false")
      throw Error(ErrorCode::SyntaxError, "variable name '" + vars[i] + "' is reserved");
    for (std::size_t j = i + 1; j < vars.size(); ++j)
      if (vars[i] == vars[j])
        throw Error(ErrorCode::DuplicateName, "variable '" + vars[i] + "' declared twice");
  }
  return detail::FormulaParser(text, vars).parse();
}

}  // namespace nmr
