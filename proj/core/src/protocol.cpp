#include "brrkit/protocol.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <deque>
#include <streambuf>

namespace brrkit {

void JsonLineOutput::text(std::string_view s) {
  if (s.empty()) return;
  message("event", {{"text", std::string(s)}});
}

void JsonLineOutput::message(const std::string& kind, const nlohmann::json& payload) {
  std::lock_guard lock(mu_);
  nlohmann::json j{{"seq", ++seq_}, {"kind", kind}, {"payload", payload}};
  os_ << j.dump() << "\n" << std::flush;
}

std::uint64_t JsonLineOutput::last_seq() const {
  std::lock_guard lock(mu_);
  return seq_;
}

std::string parse_command_line(const std::string& line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("expected a JSON object");
  if (j.value("kind", "") != "command") throw Error("expected kind \"command\"");
  auto p = j.find("payload");
  if (p == j.end() || !p->is_object() || !p->contains("text") || !(*p)["text"].is_string()) {
    throw Error("command payload must have a string \"text\"");
  }
  return (*p)["text"].get<std::string>();
}

struct JsonLineSource::Shared {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<std::string> queue;
  bool eof = false;
  JsonLineOutput* out = nullptr;
};

JsonLineSource::JsonLineSource(std::istream& in, JsonLineOutput& out, std::string top_prompt, bool join)
    : shared_(std::make_shared<Shared>()), top_prompt_(std::move(top_prompt)) {
  shared_->out = &out;
  reader_ = std::thread([shared = shared_, &in] {
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::string text;
      try {
        text = parse_command_line(line);
      } catch (const Error& e) {
        std::lock_guard lock(shared->mu);
        if (shared->out) shared->out->message("error", {{"message", e.what()}, {"line", line}});
        continue;
      }
      std::lock_guard lock(shared->mu);
      shared->queue.push_back(std::move(text));
      shared->cv.notify_all();
    }
    std::lock_guard lock(shared->mu);
    shared->eof = true;
    shared->cv.notify_all();
  });
  if (!join) reader_.detach();
}

JsonLineSource::~JsonLineSource() {
  {
    std::lock_guard lock(shared_->mu);
    shared_->out = nullptr;
  }
  if (reader_.joinable()) reader_.join();
}

std::optional<std::string> JsonLineSource::read(const std::string& prompt) {
  if (prompt == top_prompt_) shared_->out->message("event", {{"prompt", prompt}});
  std::unique_lock lock(shared_->mu);
  shared_->cv.wait(lock, [&] { return !shared_->queue.empty() || shared_->eof; });
  if (shared_->queue.empty()) return std::nullopt;
  std::string text = std::move(shared_->queue.front());
  shared_->queue.pop_front();
  return text;
}

void serve_streams(std::istream& in, std::ostream& out, const SessionOptions& options, const SessionSetup& setup,
                   const std::function<void()>& close_input) {
  JsonLineOutput output(out);
  JsonLineSource source(in, output, options.top_prompt, static_cast<bool>(close_input));
  {
    Session session(source, output, options);
    try {
      if (setup) setup(session);
      session.run();
    } catch (const Error& e) {
      output.message("error", {{"message", e.what()}});
    }
  }
  output.message("event", {{"text", "session closed"}, {"closed", true}});
  if (close_input) close_input();
}

namespace {

// Minimal bidirectional stream buffer over a socket.
class FdStreamBuf : public std::streambuf {
 public:
  explicit FdStreamBuf(int fd) : fd_(fd) { setg(in_, in_, in_); }

 protected:
  int_type underflow() override {
    ssize_t n = ::recv(fd_, in_, sizeof in_, 0);
    if (n <= 0) return traits_type::eof();
    setg(in_, in_, in_ + n);
    return traits_type::to_int_type(*gptr());
  }
  std::streamsize xsputn(const char* s, std::streamsize n) override {
    std::streamsize done = 0;
    while (done < n) {
      ssize_t k = ::send(fd_, s + done, static_cast<std::size_t>(n - done), MSG_NOSIGNAL);
      if (k <= 0) return done;
      done += k;
    }
    return done;
  }
  int_type overflow(int_type c) override {
    if (traits_type::eq_int_type(c, traits_type::eof())) return traits_type::not_eof(c);
    char ch = traits_type::to_char_type(c);
    return xsputn(&ch, 1) == 1 ? c : traits_type::eof();
  }

 private:
  int fd_;
  char in_[4096];
};

std::pair<std::string, int> split_address(const std::string& address) {
  auto colon = address.rfind(':');
  if (colon == std::string::npos) return {"127.0.0.1", std::stoi(address)};
  std::string host = address.substr(0, colon);
  if (host.empty() || host == "localhost") host = "127.0.0.1";
  return {host, std::stoi(address.substr(colon + 1))};
}

}  // namespace

void serve_tcp(const std::string& address, const SessionOptions& options, const SessionSetup& setup,
               std::size_t max_connections, const std::function<void(int port)>& on_listen) {
  auto [host, port] = split_address(address);
  int listener = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listener < 0) throw Error("socket: " + std::string(std::strerror(errno)));
  int one = 1;
  ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listener);
    throw Error("bad address " + host);
  }
  if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(listener, 1) < 0) {
    std::string msg = std::strerror(errno);
    ::close(listener);
    throw Error("cannot listen on " + address + ": " + msg);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len);
  if (on_listen) on_listen(ntohs(addr.sin_port));
  for (std::size_t served = 0; max_connections == 0 || served < max_connections; ++served) {
    int conn = ::accept(listener, nullptr, nullptr);
    if (conn < 0) continue;
    {
      FdStreamBuf buf(conn);
      std::istream in(&buf);
      std::ostream out(&buf);
      try {
        serve_streams(in, out, options, setup, [conn] { ::shutdown(conn, SHUT_RDWR); });
      } catch (const std::exception&) {
        ::shutdown(conn, SHUT_RDWR);
      }
    }
    ::close(conn);
  }
  ::close(listener);
}

}  // namespace brrkit
