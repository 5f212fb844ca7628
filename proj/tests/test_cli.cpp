#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  int code;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string command = std::string(FUGLEDE_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buffer[4096];
  std::size_t n;
  while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) out.append(buffer, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("documented examples through the command line") {
  Run tile = cli("is-tile --p 2 --M 2 --set 0,3");
  CHECK(tile.code == 0);
  CHECK(tile.out.find("{0,2}") != std::string::npos);

  Run measure = cli("measure --set '{\"p\":3,\"v\":0,\"M\":0,\"digits\":[0]}'");
  CHECK(measure.code == 0);
  CHECK(measure.out == "1/1\n");

  Run census = cli("classify --p 2 --M 3 --exhaustive");
  CHECK(census.code == 0);
  CHECK(census.out.find("255 sets") != std::string::npos);
  CHECK(census.out.find("disagreements: 0") != std::string::npos);
}

TEST_CASE("exit codes through the command line") {
  CHECK(cli("is-spectral --p 3 --set 0,1").code == 2);
  CHECK(cli("is-tile --p 2 --set 0,x").code == 1);
  CHECK(cli("is-tile --p 2 --set").code == 1);
  CHECK(cli("no-such-command").code == 1);
  CHECK(cli("verify-spectral --p 2 --set 0,3 --lift-spectrum 0,2 --window -9").code == 3);
  CHECK(cli("verify-tiling --p 2 --set 0,3 --lift-complement 0,1").code == 2);
  CHECK(cli("density --elements @/nonexistent/file.json").code == 1);
}

TEST_CASE("help documents the schemas") {
  Run help = cli("--help");
  CHECK(help.code == 0);
  CHECK(help.out.find("window_exp") != std::string::npos);
  CHECK(help.out.find("--seed") != std::string::npos);
  CHECK(cli("spectrum-to-tiling --help").code == 0);
}

TEST_CASE("json output and stdin documents") {
  Run json = cli("--json make-spectrum --p 2 --set 0,3 --window 4");
  CHECK(json.code == 0);
  CHECK(json.out.find("\"lift\"") != std::string::npos);
  const auto path = std::filesystem::temp_directory_path() / "fuglede_cli_set.json";
  std::ofstream(path) << R"({"p":2,"v":0,"M":2,"digits":[0,2]})";
  Run from_file = cli("--json normalize --set @" + path.string());
  CHECK(from_file.code == 0);
  CHECK(from_file.out.find("\"v\": 1") != std::string::npos);
  Run piped = cli("--json normalize --set @- < " + path.string());
  CHECK(piped.out == from_file.out);
  std::filesystem::remove(path);
  Run same1 = cli("classify --p 3 --M 2 --sample 30 --seed 5 --json");
  Run same2 = cli("classify --p 3 --M 2 --sample 30 --seed 5 --jobs 3 --json");
  CHECK(same1.out == same2.out);
}
