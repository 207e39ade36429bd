#pragma once

#include <deque>
#include <random>
#include <string>
#include <vector>

#include "brrkit/brkpt.hpp"
#include "brrkit/session.hpp"

namespace brrkit::testing {

std::string data_path(const std::string& name);
std::string read_file(const std::string& path);

/// Commands handed out in order; records every prompt it was asked with.
class ScriptedSource : public CommandSource {
 public:
  ScriptedSource() = default;
  explicit ScriptedSource(std::vector<std::string> commands);
  void push(std::string command) { commands_.push_back(std::move(command)); }
  std::optional<std::string> read(const std::string& prompt) override;
  const std::vector<std::string>& prompts() const { return prompts_; }
  std::size_t remaining() const { return commands_.size(); }

 private:
  std::deque<std::string> commands_;
  std::vector<std::string> prompts_;
};

/// Runs a script file the way `brr --script` does and returns the transcript.
std::string run_script_file(const std::string& path, SessionOptions options = {});
/// Runs commands given as text, echoing like a terminal.
std::string run_script_text(const std::string& text, SessionOptions options = {});

/// Counts handler calls and checks that they never nest.
class CountingHandlers : public BreakpointHandlers {
 public:
  void near_miss_brkpt1(const NearMissCall& c) override;
  void brkpt1(const Brkpt1Call& c) override;
  void brkpt2(const Brkpt2Call& c) override;

  std::size_t near_misses = 0;
  std::size_t brkpt1_calls = 0;
  std::size_t brkpt2_calls = 0;
  std::size_t brkpt2_near_miss = 0;
  std::vector<std::string> events;
};

/// Random small terms over a fixed signature.
class TermGen {
 public:
  explicit TermGen(std::uint32_t seed) : rng_(seed) {}
  Term term(int depth, const std::vector<std::string>& vars);
  Term ground(int depth) { return term(depth, {}); }
  std::mt19937& rng() { return rng_; }
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  static const std::vector<std::pair<std::string, std::size_t>>& signature();

 private:
  std::mt19937 rng_;
};

/// Every subterm of t, in pre-order.
std::vector<Term> all_subterms(const Term& t);

Term T(const std::string& text);
SExpr S(const std::string& text);

}  // namespace brrkit::testing

namespace brrkit {
inline void PrintTo(const Term& t, std::ostream* os) { *os << print_term(t); }
}  // namespace brrkit
