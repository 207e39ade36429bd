#include "brrkit/sexpr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <ostream>
#include <sstream>

namespace brrkit {

ParseError::ParseError(const std::string& what, int line, int column)
    : Error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
      line_(line),
      column_(column) {}

SExpr SExpr::symbol(std::string name) {
  SExpr e;
  e.kind_ = Kind::Symbol;
  e.text_ = std::move(name);
  return e;
}

SExpr SExpr::integer(std::int64_t value) {
  SExpr e;
  e.kind_ = Kind::Integer;
  e.integer_ = value;
  return e;
}

SExpr SExpr::string(std::string text) {
  SExpr e;
  e.kind_ = Kind::String;
  e.text_ = std::move(text);
  return e;
}

SExpr SExpr::list(std::vector<SExpr> items) {
  SExpr e;
  e.kind_ = Kind::List;
  e.items_ = std::move(items);
  return e;
}

SExpr SExpr::quoted(SExpr value) {
  return list({symbol("QUOTE"), std::move(value)});
}

bool SExpr::is_quote_form() const {
  return is_list() && items_.size() == 2 && items_[0].is_symbol("QUOTE");
}

bool operator==(const SExpr& a, const SExpr& b) {
  if (a.is_nil() && b.is_nil()) return true;
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case SExpr::Kind::Integer:
      return a.integer_ == b.integer_;
    case SExpr::Kind::Symbol:
    case SExpr::Kind::String:
      return a.text_ == b.text_;
    case SExpr::Kind::List:
      return a.items_ == b.items_;
  }
  return false;
}

namespace {

int atom_rank(const SExpr& e) {
  switch (e.kind()) {
    case SExpr::Kind::Integer: return 0;
    case SExpr::Kind::String: return 1;
    case SExpr::Kind::Symbol: return 2;
    case SExpr::Kind::List: return 3;
  }
  return 3;
}

}  // namespace

int lexorder(const SExpr& a, const SExpr& b) {
  // () reads as NIL; compare it as the symbol.
  if (a.is_list() && a.items().empty()) return lexorder(SExpr::nil(), b);
  if (b.is_list() && b.items().empty()) return lexorder(a, SExpr::nil());
  int ra = atom_rank(a), rb = atom_rank(b);
  if (ra != rb) return ra < rb ? -1 : 1;
  switch (a.kind()) {
    case SExpr::Kind::Integer:
      return a.integer_value() < b.integer_value() ? -1 : (a.integer_value() > b.integer_value() ? 1 : 0);
    case SExpr::Kind::String:
    case SExpr::Kind::Symbol: {
      int c = a.text().compare(b.text());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case SExpr::Kind::List: {
      const auto& x = a.items();
      const auto& y = b.items();
      for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (int c = lexorder(x[i], y[i]); c != 0) return c;
      }
      if (x.size() == y.size()) return 0;
      return x.size() < y.size() ? -1 : 1;
    }
  }
  return 0;
}

// ---------------------------------------------------------------------------
// Reader

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip_space();
    return pos_ >= text_.size();
  }

  int line() const { return line_; }
  int column() const { return col_; }

  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      int line = line_, col = col_;
      advance();
      std::vector<SExpr> items;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unterminated list", line, col);
        if (text_[pos_] == ')') {
          advance();
          return SExpr::list(std::move(items));
        }
        if (text_[pos_] == '.' && pos_ + 1 < text_.size() && is_delimiter(text_[pos_ + 1])) {
          fail("dotted pairs are not supported");
        }
        items.push_back(read());
      }
    }
    if (c == ')') fail("unexpected ')'");
    if (c == '\'') {
      advance();
      return SExpr::quoted(read());
    }
    if (c == '`' || c == ',') fail("backquote syntax is not supported");
    if (c == '"') return read_string();
    return read_atom();
  }

 private:
  static bool is_delimiter(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '\'' ||
           c == '"' || c == ';';
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, col_); }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '#' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '|') {
        advance();
        advance();
        while (pos_ + 1 < text_.size() && !(text_[pos_] == '|' && text_[pos_ + 1] == '#')) advance();
        if (pos_ + 1 >= text_.size()) fail("unterminated block comment");
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  SExpr read_string() {
    int line = line_, col = col_;
    advance();
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') {
        advance();
        if (pos_ >= text_.size()) break;
      }
      out.push_back(text_[pos_]);
      advance();
    }
    if (pos_ >= text_.size()) throw ParseError("unterminated string", line, col);
    advance();
    return SExpr::string(std::move(out));
  }

  SExpr read_atom() {
    std::string tok;
    while (pos_ < text_.size() && !is_delimiter(text_[pos_])) {
      char c = text_[pos_];
      if (c == '|') {
        // |Foo| keeps its case.
        advance();
        while (pos_ < text_.size() && text_[pos_] != '|') {
          tok.push_back(text_[pos_]);
          advance();
        }
        if (pos_ >= text_.size()) fail("unterminated |symbol|");
        advance();
        continue;
      }
      tok.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      advance();
    }
    if (tok.empty()) fail("empty token");
    std::int64_t value = 0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    if (*first == '+') ++first;
    if (first != last) {
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec == std::errc() && ptr == last) return SExpr::integer(value);
    }
    return SExpr::symbol(std::move(tok));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

SExpr parse(std::string_view text) {
  Reader r(text);
  SExpr e = r.read();
  if (!r.at_end()) throw ParseError("trailing input after form", r.line(), r.column());
  return e;
}

std::vector<SExpr> parse_all(std::string_view text) {
  Reader r(text);
  std::vector<SExpr> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

void print_to(std::string& out, const SExpr& e) {
  switch (e.kind()) {
    case SExpr::Kind::Symbol:
      out += e.text();
      return;
    case SExpr::Kind::Integer:
      out += std::to_string(e.integer_value());
      return;
    case SExpr::Kind::String:
      out.push_back('"');
      for (char c : e.text()) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
      }
      out.push_back('"');
      return;
    case SExpr::Kind::List:
      if (e.is_quote_form()) {
        out.push_back('\'');
        print_to(out, e[1]);
        return;
      }
      if (e.items().empty()) {
        out += "NIL";
        return;
      }
      out.push_back('(');
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) out.push_back(' ');
        print_to(out, e[i]);
      }
      out.push_back(')');
      return;
  }
}

void newline_to(std::string& out, int column) {
  out.push_back('\n');
  out.append(static_cast<std::size_t>(column), ' ');
}

struct Layout {
  int margin;
  int flat_width;
};

void pretty_to(std::string& out, const SExpr& e, int col, const Layout& lay) {
  std::string flat = print(e);
  int width = static_cast<int>(flat.size());
  bool fits = col + width <= lay.margin && (width <= lay.flat_width || e.is_quote_form());
  if (e.is_atom() || fits || e.items().empty()) {
    out += flat;
    return;
  }
  if (e.is_quote_form()) {
    out.push_back('\'');
    pretty_to(out, e[1], col + 1, lay);
    return;
  }
  const auto& items = e.items();
  out.push_back('(');
  if (!items[0].is_symbol() || items.size() == 1) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) newline_to(out, col + 1);
      pretty_to(out, items[i], col + 1, lay);
    }
    out.push_back(')');
    return;
  }
  const std::string& head = items[0].text();
  out += head;
  if (head == "IF" && items.size() == 4) {
    // (IF test
    //     then
    //   else)
    out.push_back(' ');
    pretty_to(out, items[1], col + 4, lay);
    newline_to(out, col + 4);
    pretty_to(out, items[2], col + 4, lay);
    newline_to(out, col + 2);
    pretty_to(out, items[3], col + 2, lay);
    out.push_back(')');
    return;
  }
  int arg_col = col + 2 + static_cast<int>(head.size());
  if (arg_col > lay.margin / 2 + col) {
    for (std::size_t i = 1; i < items.size(); ++i) {
      newline_to(out, col + 2);
      pretty_to(out, items[i], col + 2, lay);
    }
    out.push_back(')');
    return;
  }
  out.push_back(' ');
  for (std::size_t i = 1; i < items.size(); ++i) {
    if (i > 1) newline_to(out, arg_col);
    pretty_to(out, items[i], arg_col, lay);
  }
  out.push_back(')');
}

}  // namespace

std::string print(const SExpr& e) {
  std::string out;
  print_to(out, e);
  return out;
}

std::string pretty(const SExpr& e, int indent, int right_margin, int flat_width) {
  std::string out;
  pretty_to(out, e, indent, Layout{right_margin, flat_width});
  return out;
}

std::string normalize_whitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const SExpr& e) { return os << print(e); }

}  // namespace brrkit
