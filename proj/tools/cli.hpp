#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace interlace::cli {

enum class CliErrc { UnknownFlag, MissingParameter, ConflictingSources, InvalidValue, HelpRequested };
const char* to_string(CliErrc code) noexcept;

class CliError : public std::runtime_error {
 public:
  CliError(CliErrc code, const std::string& message) : std::runtime_error(message), code_(code) {}
  CliErrc code() const noexcept { return code_; }

 private:
  CliErrc code_;
};

struct GraphSource {
  enum class Kind { None, File, Tree, Lattice };
  Kind kind = Kind::None;
  std::string path;
  int degree = 0;
  int dim = 0;
  int radius = 0;
  std::optional<double> weight;  // tree edge weight, 1/d when absent
};

struct RunConfig {
  std::string operation;
  GraphSource graph;

  std::uint64_t seed = 0;
  std::string seed_source;  // "flag", "env" or "auto"
  std::uint64_t trials = 0;
  int threads = 1;
  std::string output;

  std::vector<double> u;
  std::vector<std::uint32_t> set;
  std::vector<std::uint32_t> set2;
  std::string method = "exact";
  bool richardson = false;
  std::uint32_t origin = 0;
  std::vector<double> bracket;
  int max_iterations = 8;
  double min_width = 0.2;
  double confidence = 0.95;
  int d = 3;
  double f_scale = 1.0;
  std::string which;
  int n_max = 40;
};

// Throws CliError. HelpRequested carries the help text as its message.
RunConfig parse_args(int argc, const char* const* argv);

// Writes one JSON document to `out`; returns 0 on success, 2 for an
// inconclusive statistical verdict, 1 on error (with {error, message} JSON).
int run(const RunConfig& config, std::ostream& out);

// parse_args + run, mapping parse failures to exit status 1 (0 for --help).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace interlace::cli
