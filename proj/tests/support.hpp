#pragma once

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "bq/compiled.hpp"
#include "bq/grounder.hpp"
#include "bq/parser.hpp"
#include "bq/validate.hpp"

namespace bq::test {

inline std::string fixture_path(const std::string& name) { return std::string(BQ_FIXTURE_DIR) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

/// Parse, validate, ground, validate, compile. Throws on any failure.
inline CompiledTheory compile_text(const std::string& text) {
  ActionTheory t = parse_theory(text);
  auto pre = validate_theory(t);
  if (!pre.ok()) throw std::runtime_error(pre.str());
  ActionTheory g = ground_theory(t);
  auto post = validate_theory(g);
  if (!post.ok()) throw std::runtime_error(post.str());
  return compile_theory(g);
}

inline CompiledTheory load_fixture(const std::string& name) { return compile_text(slurp(fixture_path(name))); }

struct RunResult {
  int status = -1;
  std::string out;
};

/// Runs a shell command, capturing stdout; stderr is discarded.
inline RunResult run(const std::string& command) {
  RunResult r;
  FILE* pipe = popen((command + " 2>/dev/null").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

inline std::string cli() { return BQ_CLI_PATH; }

}  // namespace bq::test
