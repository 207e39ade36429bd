#include "brrkit/io.hpp"

#include <cctype>

namespace brrkit {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_delim(char c) { return is_space(c) || c == '(' || c == ')' || c == '"' || c == ';' || c == '\''; }

// Skips whitespace and comments from i; returns npos if a block comment is unterminated.
std::size_t skip_blank(const std::string& s, std::size_t i) {
  while (i < s.size()) {
    if (is_space(s[i])) {
      ++i;
    } else if (s[i] == ';') {
      while (i < s.size() && s[i] != '\n') ++i;
    } else if (s[i] == '#' && i + 1 < s.size() && s[i + 1] == '|') {
      auto end = s.find("|#", i + 2);
      if (end == std::string::npos) return std::string::npos;
      i = end + 2;
    } else {
      break;
    }
  }
  return i;
}

// Returns the index one past the form starting at i, or npos if incomplete.
std::size_t form_end(const std::string& s, std::size_t i) {
  i = skip_blank(s, i);
  if (i == std::string::npos || i >= s.size()) return std::string::npos;
  char c = s[i];
  if (c == '\'') return form_end(s, i + 1);
  if (c == '"') {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (s[j] == '\\') {
        ++j;
      } else if (s[j] == '"') {
        return j + 1;
      }
    }
    return std::string::npos;
  }
  if (c == ')') return i + 1;  // stray; let the parser report it
  if (c == '(') {
    std::size_t j = i + 1;
    for (;;) {
      j = skip_blank(s, j);
      if (j == std::string::npos || j >= s.size()) return std::string::npos;
      if (s[j] == ')') return j + 1;
      j = form_end(s, j);
      if (j == std::string::npos) return j;
    }
  }
  std::size_t j = i;
  while (j < s.size() && !is_delim(s[j])) {
    if (s[j] == '|') {
      auto end = s.find('|', j + 1);
      if (end == std::string::npos) return std::string::npos;
      j = end + 1;
    } else {
      ++j;
    }
  }
  if (j >= s.size()) return std::string::npos;  // the atom may continue
  return j;
}

}  // namespace

void FormBuffer::append(std::string_view text) {
  buf_ += text;
  scan();
}

void FormBuffer::scan() {
  for (;;) {
    std::size_t start = skip_blank(buf_, 0);
    if (start == std::string::npos) return;
    if (start >= buf_.size()) {
      buf_.clear();
      return;
    }
    std::size_t end = form_end(buf_, start);
    if (end == std::string::npos) {
      buf_.erase(0, start);
      return;
    }
    ready_.push_back(buf_.substr(start, end - start));
    buf_.erase(0, end);
  }
}

std::optional<std::string> FormBuffer::next() {
  if (ready_.empty()) return std::nullopt;
  std::string s = std::move(ready_.front());
  ready_.pop_front();
  return s;
}

bool FormBuffer::has_pending_text() const {
  std::size_t i = skip_blank(buf_, 0);
  return i == std::string::npos || i < buf_.size();
}

StreamSource::StreamSource(std::istream& in, Output* out, bool echo, bool show_prompt)
    : in_(in), out_(out), echo_(echo), show_prompt_(show_prompt) {}

std::optional<std::string> StreamSource::read(const std::string& prompt) {
  if (out_ && (echo_ || show_prompt_)) out_->text(prompt);
  std::optional<std::string> form = forms_.next();
  std::string line;
  while (!form) {
    if (!std::getline(in_, line)) {
      if (forms_.has_pending_text()) {
        forms_.append("\n");
        form = forms_.next();
        if (form) break;
        if (out_ && echo_) out_->text("\n");
        return std::nullopt;
      }
      if (out_ && echo_) out_->text("\n");
      return std::nullopt;
    }
    forms_.append(line + "\n");
    form = forms_.next();
  }
  if (out_ && echo_) out_->text(*form + "\n");
  return form;
}

}  // namespace brrkit
