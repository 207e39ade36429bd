#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>

#include "brrkit/io.hpp"
#include "brrkit/session.hpp"

namespace brrkit {

/// Writes one {"seq","kind","payload"} object per line. Console text is
/// sent as "event" messages.
class JsonLineOutput : public Output {
 public:
  explicit JsonLineOutput(std::ostream& os) : os_(os) {}
  void text(std::string_view s) override;
  void message(const std::string& kind, const nlohmann::json& payload) override;
  std::uint64_t last_seq() const;

 private:
  std::ostream& os_;
  mutable std::mutex mu_;
  std::uint64_t seq_ = 0;
};

/// Reads {"kind":"command","payload":{"text":...}} lines. A reader thread
/// queues incoming commands; read() hands them out one per prompt.
/// Malformed lines are answered with an "error" message and skipped.
class JsonLineSource : public CommandSource {
 public:
  /// With join set, the destructor waits for the reader to reach end of
  /// input; otherwise the reader is left running detached.
  JsonLineSource(std::istream& in, JsonLineOutput& out, std::string top_prompt = "!>", bool join = false);
  ~JsonLineSource() override;
  JsonLineSource(const JsonLineSource&) = delete;
  JsonLineSource& operator=(const JsonLineSource&) = delete;

  std::optional<std::string> read(const std::string& prompt) override;

 private:
  struct Shared;
  std::shared_ptr<Shared> shared_;
  std::string top_prompt_;
  std::thread reader_;
};

/// Extracts the command text from one protocol input line.
/// Throws Error on malformed input.
std::string parse_command_line(const std::string& line);

using SessionSetup = std::function<void(Session&)>;

/// Runs one protocol session over a pair of streams. `close_input`, when
/// given, is called after the session ends and must make `in` reach end of
/// input; the reader is then joined.
void serve_streams(std::istream& in, std::ostream& out, const SessionOptions& options, const SessionSetup& setup,
                   const std::function<void()>& close_input = {});

/// Listens on host:port and serves one session per connection, one
/// connection at a time. Returns after max_connections sessions when it is
/// nonzero.
void serve_tcp(const std::string& address, const SessionOptions& options, const SessionSetup& setup,
               std::size_t max_connections = 0, const std::function<void(int port)>& on_listen = {});

}  // namespace brrkit
