#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace brrkit {

/// Base class for all errors reported by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reader error carrying a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// A read s-expression. Symbols are stored upper-cased.
class SExpr {
 public:
  enum class Kind { Symbol, Integer, String, List };

  SExpr() : kind_(Kind::List) {}

  static SExpr symbol(std::string name);
  static SExpr integer(std::int64_t value);
  static SExpr string(std::string text);
  static SExpr list(std::vector<SExpr> items = {});
  static SExpr nil() { return symbol("NIL"); }
  static SExpr t() { return symbol("T"); }
  static SExpr quoted(SExpr value);

  Kind kind() const { return kind_; }
  bool is_symbol() const { return kind_ == Kind::Symbol; }
  bool is_symbol(std::string_view name) const { return kind_ == Kind::Symbol && text_ == name; }
  bool is_integer() const { return kind_ == Kind::Integer; }
  bool is_string() const { return kind_ == Kind::String; }
  bool is_list() const { return kind_ == Kind::List; }
  bool is_atom() const { return kind_ != Kind::List; }
  bool is_keyword() const { return is_symbol() && !text_.empty() && text_[0] == ':'; }
  // NIL and () are the same object in the logic.
  bool is_nil() const { return is_symbol("NIL") || (is_list() && items_.empty()); }

  /// True for a two-element list headed by QUOTE.
  bool is_quote_form() const;

  const std::string& text() const { return text_; }
  std::int64_t integer_value() const { return integer_; }
  const std::vector<SExpr>& items() const { return items_; }
  std::vector<SExpr>& items() { return items_; }
  std::size_t size() const { return items_.size(); }
  const SExpr& operator[](std::size_t i) const { return items_.at(i); }

  friend bool operator==(const SExpr& a, const SExpr& b);
  friend bool operator!=(const SExpr& a, const SExpr& b) { return !(a == b); }

 private:
  Kind kind_;
  std::string text_;
  std::int64_t integer_ = 0;
  std::vector<SExpr> items_;
};

/// Total order used for term ordering: atoms before lists, then
/// integers < strings < symbols, lists compared element-wise.
int lexorder(const SExpr& a, const SExpr& b);

/// Parses exactly one s-expression ('x is sugar for (QUOTE x)).
SExpr parse(std::string_view text);

/// Parses every top-level form in text.
std::vector<SExpr> parse_all(std::string_view text);

/// Single-line rendering; (QUOTE x) prints as 'x.
std::string print(const SExpr& e);

/// Multi-line rendering in the usual Lisp pretty-printer style.
/// `indent` is the column the first character is printed at.
/// A list is kept on one line when it fits before the right margin and its
/// flat width is at most `flat_width`; quoted constants only need to fit.
std::string pretty(const SExpr& e, int indent = 0, int right_margin = 70, int flat_width = 40);

/// Collapses every run of whitespace to a single space and trims the ends.
std::string normalize_whitespace(std::string_view text);

std::ostream& operator<<(std::ostream& os, const SExpr& e);

}  // namespace brrkit
