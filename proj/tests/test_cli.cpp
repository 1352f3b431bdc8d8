#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "doctest.h"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "khess");
  std::ostringstream out;
  std::ostringstream err;
  const int code = khess::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

int count_data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  int rows = -1;  // header
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  return rows;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("khess_test_" + name);
}

}  // namespace

TEST_CASE("solution subcommand") {
  const Run flat = run({"solution", "--n", "3", "--K", "0", "--k", "2", "--c2", "1.5"});
  CHECK(flat.code == 0);
  CHECK(count_data_rows(flat.out) == 200);
  CHECK(flat.out.find("\n1.5,0,1.5,") != std::string::npos);

  const Run sphere = run({"solution", "--n", "3", "--K", "1", "--k", "2", "--c1", "0.5", "--c2", "1"});
  CHECK(sphere.code == 0);
  CHECK(sphere.out.find("# R=1.1071487177940904\n") != std::string::npos);
  CHECK(sphere.out.find("# sign_condition=violated\n") != std::string::npos);

  const Run bad = run({"solution", "--K", "-1", "--c1", "-1", "--c2", "0.5"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("c1 >= 0") != std::string::npos);

  CHECK(run({"solution", "--k", "5"}).code == 2);
  CHECK(run({"solution", "--method", "newton"}).code == 2);
  CHECK(run({"solution", "--bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("solution output is byte-identical and honours --output") {
  const auto path = temp_file("solution.csv");
  const std::vector<std::string> args = {"solution", "--n", "4", "--K", "-1", "--k", "3",
                                         "--c2", "0.9", "--output", path.string()};
  REQUIRE(run(args).code == 0);
  std::ifstream first(path);
  const std::string a((std::istreambuf_iterator<char>(first)), std::istreambuf_iterator<char>());
  REQUIRE(run(args).code == 0);
  std::ifstream second(path);
  const std::string b((std::istreambuf_iterator<char>(second)), std::istreambuf_iterator<char>());
  CHECK(!a.empty());
  CHECK(a == b);
  std::filesystem::remove(path);

  const Run shot = run({"solution", "--method", "shoot", "--K", "1", "--c1", "0.5", "--c2", "0.5"});
  CHECK(shot.code == 0);
  CHECK(shot.out.find("# origin=shooting\n") != std::string::npos);
}

TEST_CASE("verify subcommand") {
  const Run all = run({"verify"});
  CHECK(all.code == 0);
  CHECK(all.out.find("UNCONVERGED") == std::string::npos);

  const Run one = run({"verify", "--n", "4", "--K", "-1", "--k", "3", "--c2", "0.5", "--format", "csv"});
  CHECK(one.code == 0);
  CHECK(count_data_rows(one.out) == 4);

  const Run coarse = run({"verify", "--panels", "1", "--n", "3", "--K", "1", "--c1", "0.5", "--c2", "0.5"});
  CHECK(coarse.code == 1);
  CHECK(coarse.out.find("UNCONVERGED") != std::string::npos);

  const Run refined = run({"verify", "--panels", "4", "--max-refinements", "4", "--n", "3"});
  CHECK(refined.code == 0);

  const Run control = run({"verify", "--negative-control", "1e-3"});
  CHECK(control.code == 0);
  CHECK(control.out.find("permissive") != std::string::npos);

  CHECK(run({"verify", "--l", "1", "--k", "2"}).code == 2);
  CHECK(run({"verify", "--identities", "L9"}).code == 2);
  CHECK(run({"verify", "--negative-control", "-1"}).code == 2);

  const Run pointwise = run({"verify", "--identities", "EqI_pointwise", "--n", "6", "--k", "6"});
  CHECK(pointwise.code == 0);
}

TEST_CASE("properties subcommand") {
  const Run a = run({"properties", "--trials", "100", "--seed", "42"});
  const Run b = run({"properties", "--trials", "100", "--seed", "42"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("FAIL") == std::string::npos);

  const Run empty = run({"properties", "--trials", "0"});
  CHECK(empty.code == 0);
  CHECK(empty.err.find("warning") != std::string::npos);

  CHECK(run({"properties", "--nmax", "3", "--trials", "50"}).code == 0);
  CHECK(run({"properties", "--nmax", "1"}).code == 2);
  CHECK(run({"properties", "--trials", "-3"}).code == 2);
}

TEST_CASE("config file sets defaults and flags override") {
  const auto path = temp_file("config.txt");
  {
    std::ofstream cfg(path);
    cfg << "# defaults\nn = 4\nK=-1\nc2=0.9\nk=3\n";
  }
  const Run from_file = run({"solution", "--config", path.string()});
  CHECK(from_file.code == 0);
  CHECK(from_file.out.find("# n=4\n") != std::string::npos);
  CHECK(from_file.out.find("# k=3\n") != std::string::npos);

  const Run overridden = run({"solution", "--k", "2", "--config", path.string()});
  CHECK(overridden.code == 0);
  CHECK(overridden.out.find("# k=2\n") != std::string::npos);
  CHECK(overridden.out.find("# K=-1\n") != std::string::npos);

  {
    std::ofstream cfg(path);
    cfg << "panels=3\n";
  }
  CHECK(run({"solution", "--config", path.string()}).code == 2);
  CHECK(run({"verify", "--config", path.string(), "--n", "3"}).code == 1);
  std::filesystem::remove(path);
  CHECK(run({"verify", "--config", path.string()}).code == 2);
}
