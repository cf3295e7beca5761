#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using namespace interlace::cli;

namespace {

struct Result {
  int status = 0;
  std::string out;
  nlohmann::json json;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "interlace");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.status = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.json = nlohmann::json::parse(r.out, nullptr, false);
  return r;
}

CliErrc parse_error(std::vector<std::string> args) {
  args.insert(args.begin(), "interlace");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    parse_args(static_cast<int>(argv.size()), argv.data());
  } catch (const CliError& e) {
    return e.code();
  }
  FAIL("expected a CliError");
  return CliErrc::InvalidValue;
}

RunConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "interlace");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("argument parsing") {
  const RunConfig cap = parse({"capacity", "--tree", "3,8,0.3333333333", "--set", "0"});
  CHECK(cap.operation == "capacity");
  CHECK(cap.graph.kind == GraphSource::Kind::Tree);
  CHECK(cap.graph.degree == 3);
  CHECK(cap.graph.radius == 8);
  CHECK(*cap.graph.weight == doctest::Approx(1.0 / 3));
  CHECK(cap.set == std::vector<std::uint32_t>{0});

  const RunConfig us = parse({"ustar", "--tree", "3,12", "--bracket", "3,6", "--trials", "10000", "--seed", "7"});
  CHECK(us.bracket == std::vector<double>{3.0, 6.0});
  CHECK(us.trials == 10000);
  CHECK(us.seed == 7);
  CHECK(us.seed_source == "flag");
  CHECK_FALSE(us.graph.weight.has_value());

  CHECK(parse_error({"capacity", "--tree", "3,8", "--graph", "f.txt", "--set", "0"}) == CliErrc::ConflictingSources);
  CHECK(parse_error({"capacity", "--tree", "3,8", "--bogus", "1"}) == CliErrc::UnknownFlag);
  CHECK(parse_error({"capacity", "--tree", "3,8"}) == CliErrc::MissingParameter);
  CHECK(parse_error({"sample", "--tree", "3,8", "--u", "-1", "--observe", "0"}) == CliErrc::InvalidValue);
  CHECK(parse_error({}) == CliErrc::MissingParameter);
  CHECK(parse_error({"--help"}) == CliErrc::HelpRequested);
}

TEST_CASE("seed falls back to the environment") {
  ::setenv("INTERLACE_SEED", "1234", 1);
  const RunConfig c = parse({"eta", "--tree", "3,4", "--u", "1"});
  CHECK(c.seed == 1234);
  CHECK(c.seed_source == "env");
  CHECK(parse({"eta", "--tree", "3,4", "--u", "1", "--seed", "5"}).seed == 5);
  ::unsetenv("INTERLACE_SEED");
  CHECK(parse({"eta", "--tree", "3,4", "--u", "1"}).seed_source == "auto");
}

TEST_CASE("tree-exact output") {
  const Result zero = invoke({"tree-exact", "--d", "3", "--u", "0"});
  CHECK(zero.status == 0);
  CHECK(zero.json["branching_mean"].get<double>() == 2.0);
  CHECK(zero.json["eta"].get<double>() == 1.0);

  const Result d3 = invoke({"tree-exact", "--d", "3"});
  CHECK(d3.json["ustar"].get<double>() == doctest::Approx(4.158883).epsilon(1e-6));
  CHECK(d3.json["cap_root"].get<double>() == doctest::Approx(0.5));
  CHECK(d3.json["f_offroot"].get<double>() == doctest::Approx(1.0 / 6));

  const Result bad = invoke({"tree-exact", "--d", "2"});
  CHECK(bad.status == 1);
  CHECK(bad.json.contains("error"));
}

TEST_CASE("sample reproduces exp(-u cap) and is byte-identical per seed") {
  const std::vector<std::string> args{"sample", "--tree", "3,8", "--u", "2", "--trials", "100000", "--seed", "1",
                                      "--observe", "0"};
  const Result a = invoke(args);
  const Result b = invoke(args);
  CHECK(a.status == 0);
  CHECK(a.out == b.out);
  const double est = a.json["mc_estimate"].get<double>();
  const double se = a.json["stderr"].get<double>();
  CHECK(a.json["exact"].get<double>() == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(std::abs(est - std::exp(-1.0)) <= 3 * se);
  CHECK(a.json["trials"].get<int>() == 100000);
  CHECK(a.json["seed"].get<int>() == 1);

  const Result threaded = invoke({"sample", "--tree", "3,8", "--u", "2", "--trials", "100000", "--seed", "1",
                                  "--observe", "0", "--threads", "3"});
  CHECK(threaded.json["mc_estimate"] == a.json["mc_estimate"]);
}

TEST_CASE("exit codes and errors") {
  const Result missing = invoke({"capacity", "--graph", "/nonexistent/g.txt", "--set", "0"});
  CHECK(missing.status == 1);
  CHECK(missing.json.contains("error"));

  const Result conflict = invoke({"capacity", "--tree", "3,8", "--lattice", "3,4", "--set", "0"});
  CHECK(conflict.status == 1);
  CHECK(conflict.json["error"] == "ConflictingSources");

  const Result bracket = invoke({"ustar", "--tree", "3,8", "--bracket", "9,12", "--trials", "500", "--seed", "1"});
  CHECK(bracket.status == 2);
  CHECK(bracket.json["error"] == "BracketError");
  CHECK(bracket.json["probes"].size() == 2);

  const Result help = invoke({"--help"});
  CHECK(help.status == 0);
  CHECK(help.out.find("CSV columns") != std::string::npos);

  const Result fkg = invoke({"fkg-check", "--tree", "3,6", "--set", "0", "--set2", "1", "--u", "1"});
  CHECK(fkg.status == 0);
  CHECK(fkg.json["pass"] == true);
}

TEST_CASE("kill windows are labelled as upper bounds") {
  const Result lattice = invoke({"capacity", "--lattice", "3,4", "--set", "0"});
  CHECK(lattice.status == 0);
  CHECK(lattice.json["graph"]["bias"] == "upper bound");
  const Result tree = invoke({"capacity", "--tree", "3,6", "--set", "0"});
  CHECK(tree.json["value"].get<double>() == doctest::Approx(0.5));
  CHECK_FALSE(tree.json["graph"].contains("bias"));
}

TEST_CASE("csv output") {
  const auto path = std::filesystem::temp_directory_path() / "interlace_cli_test.csv";
  const Result r = invoke({"eta", "--tree", "3,5", "--u", "1,2", "--trials", "200", "--seed", "3", "--output",
                           path.string()});
  CHECK(r.status == 0);
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  CHECK(header == "u,estimate,stderr,radius,trials,seed");
  int rows = 0;
  while (std::getline(in, row)) rows += !row.empty();
  CHECK(rows == 2);
  std::filesystem::remove(path);
}
