// brr: break-rewrite REPL, batch driver and protocol server.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "brrkit/protocol.hpp"
#include "brrkit/session.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw brrkit::Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional rewriter with break-rewrite and with-brr-data"};
  std::vector<std::string> rules;
  std::string script;
  std::string expect;
  std::string serve;
  bool stdio = false;
  brrkit::SessionOptions options;
  bool no_lambda_rewrite = false;
  app.add_option("--rules", rules, "Rule files to load at startup")->check(CLI::ExistingFile);
  app.add_option("--script", script, "Run commands from FILE, echoing them as a transcript")
      ->check(CLI::ExistingFile);
  app.add_option("--expect", expect, "Compare the --script transcript with FILE (whitespace-normalized)")
      ->check(CLI::ExistingFile);
  auto* serve_opt = app.add_option("--serve", serve, "Serve the JSON protocol on HOST:PORT");
  auto* stdio_opt = app.add_flag("--stdio", stdio, "Serve the JSON protocol on stdin/stdout");
  serve_opt->excludes(stdio_opt);
  app.add_option("--json-dump", options.json_dump_path, "Write brr-data as JSON after each with-brr-data");
  app.add_flag("--no-lambda-rewrite", no_lambda_rewrite, "Do not rewrite quoted lambda objects in :FN slots");
  app.add_option("--backchain-limit", options.rcnst.backchain_limit, "Maximum hypothesis nesting")
      ->capture_default_str();
  app.add_option("--step-budget", options.rcnst.step_budget, "Rewrite steps per proof")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  options.rcnst.rewrite_lambda_objects = !no_lambda_rewrite;
  if (!expect.empty() && script.empty()) {
    std::cerr << "--expect requires --script\n";
    return 2;
  }

  auto setup = [&](brrkit::Session& s) {
    for (const auto& r : rules) s.load_rules(r);
  };

  try {
    if (stdio) {
      brrkit::serve_streams(std::cin, std::cout, options, setup);
      return 0;
    }
    if (!serve.empty()) {
      brrkit::serve_tcp(serve, options, setup, 0, [&](int port) {
        std::cerr << "listening on port " << port << "\n";
      });
      return 0;
    }
    if (!script.empty()) {
      std::ifstream in(script);
      brrkit::StringOutput transcript;
      brrkit::StreamSource source(in, &transcript, true, true);
      brrkit::Session session(source, transcript, options);
      setup(session);
      session.run();
      std::cout << transcript.str();
      if (!expect.empty()) {
        std::string want = brrkit::normalize_whitespace(read_file(expect));
        std::string got = brrkit::normalize_whitespace(transcript.str());
        if (want != got) {
          std::cerr << "transcript differs from " << expect << "\n";
          return 1;
        }
      }
      return 0;
    }
    brrkit::StreamOutput out(std::cout);
    brrkit::StreamSource source(std::cin, &out, false, true);
    brrkit::Session session(source, out, options);
    setup(session);
    session.run();
    std::cout << "\n";
  } catch (const brrkit::Error& e) {
    std::cerr << "brr: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
