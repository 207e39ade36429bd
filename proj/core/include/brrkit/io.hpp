#pragma once

#include <deque>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace brrkit {

/// Where session text and structured events go.
class Output {
 public:
  virtual ~Output() = default;
  virtual void text(std::string_view s) = 0;
  /// Structured mirror of console events; ignored by plain consoles.
  virtual void message(const std::string& kind, const nlohmann::json& payload) {
    (void)kind;
    (void)payload;
  }
};

/// Supplies one command form at a time. nullopt means end of input.
class CommandSource {
 public:
  virtual ~CommandSource() = default;
  virtual std::optional<std::string> read(const std::string& prompt) = 0;
};

class StreamOutput : public Output {
 public:
  explicit StreamOutput(std::ostream& os) : os_(os) {}
  void text(std::string_view s) override { os_ << s << std::flush; }

 private:
  std::ostream& os_;
};

class StringOutput : public Output {
 public:
  void text(std::string_view s) override { buf_ += s; }
  const std::string& str() const { return buf_; }
  void clear() { buf_.clear(); }

 private:
  std::string buf_;
};

/// Splits accumulated text into complete top-level forms.
class FormBuffer {
 public:
  void append(std::string_view text);
  std::optional<std::string> next();
  bool has_pending_text() const;

 private:
  void scan();

  std::string buf_;
  std::deque<std::string> ready_;
};

/// Reads forms from a stream. With echo set, each prompt and form is
/// written to `out` as if typed at a terminal (the script transcript shape).
class StreamSource : public CommandSource {
 public:
  StreamSource(std::istream& in, Output* out, bool echo, bool show_prompt);
  std::optional<std::string> read(const std::string& prompt) override;

 private:
  std::istream& in_;
  Output* out_;
  bool echo_;
  bool show_prompt_;
  FormBuffer forms_;
};

}  // namespace brrkit
