// Copyright 2026 The dpcolor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// End-to-end tests of the command-line tool. Each test drives the built
// binary through a shell, captures stdout+stderr, and checks the exit code
// contract: 0 ok, 1 usage/IO, 2 semantic failure.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "dpcolor/dpcolor.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string command = std::string(DPCOLOR_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, n);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

const fs::path& workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("dpcolor-cli-test-" + std::to_string(getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
  const fs::path path = workdir() / name;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  return path.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string example23_graph() { return dpcolor::fixture(dpcolor::FixtureName::kExample23).graph_text; }

}  // namespace

TEST_CASE("extend emits the worked CSV and check accepts it", "[cli]") {
  const auto graph = write_file("path.graph", example23_graph());
  const auto partial = write_file("path.partial", "v1 0.3\nv4 0.1\n");
  const auto out = (workdir() / "mechanism.csv").string();

  const auto extended =
      run_cli("extend " + graph + " " + partial + " --e-epsilon 2 --delta 0 --out " + out);
  INFO(extended.output);
  REQUIRE(extended.exit_code == 0);
  const auto csv = read_file(out);
  REQUIRE(csv.find("v2,blue,0.4,0.4,v4\n") != std::string::npos);
  REQUIRE(csv.find("v3,blue,0.2,0.2,v4\n") != std::string::npos);

  const auto checked = run_cli("check " + graph + " " + out + " --e-epsilon 2 --delta 0");
  REQUIRE(checked.exit_code == 0);
  REQUIRE(checked.output.find("pairwise: ok") != std::string::npos);
  REQUIRE(checked.output.find("edges: ok") != std::string::npos);

  const auto exhaustive =
      run_cli("check " + graph + " " + out + " --e-epsilon 2 --delta 0 --exhaustive");
  REQUIRE(exhaustive.exit_code == 0);
}

TEST_CASE("check accepts a hand-written maximal mechanism and rejects a tampered one", "[cli]") {
  const auto graph = write_file("counter.graph", example23_graph());
  const auto m1 = write_file("counter_m1.csv",
                             "vertex,prob_blue\nv1,0.5\nv2,0.75\nv3,0.5\nv4,0.25\n");
  REQUIRE(run_cli("check " + graph + " " + m1 + " --e-epsilon 2 --delta 0").exit_code == 0);

  const auto tampered = write_file("counter_bad.csv",
                                   "vertex,prob_blue\nv1,0.5\nv2,0.9\nv3,0.5\nv4,0.25\n");
  const auto r = run_cli("check " + graph + " " + tampered + " --e-epsilon 2 --delta 0");
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.output.find("violation") != std::string::npos);
}

TEST_CASE("extend reports infeasibility with exit 2", "[cli]") {
  const auto graph = write_file("path2.graph", example23_graph());
  const auto partial = write_file("bad.partial", "v1 0.9\nv4 0.1\n");
  const auto r = run_cli("extend " + graph + " " + partial + " --e-epsilon 2 --delta 0");
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.output.find("No (L,U)-private extension exists.") != std::string::npos);
  REQUIRE(r.output.find("v1") != std::string::npos);
  REQUIRE(r.output.find("v4") != std::string::npos);

  const auto all = run_cli("extend " + graph + " " + partial +
                           " --e-epsilon 2 --delta 0 --all-violations");
  REQUIRE(all.exit_code == 2);
}

TEST_CASE("extend rejects a non-hitting assignment with exit 2", "[cli]") {
  const auto graph = write_file("path3.graph", example23_graph());
  const auto partial = write_file("nonhit.partial", "v3 0.5\n");
  const auto r = run_cli("extend " + graph + " " + partial + " --e-epsilon 2 --delta 0");
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.output.find("not a boundary-hitting set") != std::string::npos);
  REQUIRE(r.output.find("(v1, v2)") != std::string::npos);
}

TEST_CASE("missing files and bad flags exit 1", "[cli]") {
  REQUIRE(run_cli("extend /nonexistent.graph /nonexistent.partial --epsilon 1").exit_code == 1);
  REQUIRE(run_cli("frobnicate").exit_code == 1);
  REQUIRE(run_cli("pair-check --epsilon -1").exit_code == 1);
  REQUIRE(run_cli("pair-check").exit_code == 1);  // epsilon missing entirely
  const auto graph = write_file("plain.graph", "v a blue\nv b red\ne a b\n");
  REQUIRE(run_cli("extend " + graph + " " + graph + " --epsilon 1").exit_code == 1);  // parse error
}

TEST_CASE("evaluate prints the single-vertex answer", "[cli]") {
  const auto graph = write_file("path4.graph", example23_graph());
  const auto partial = write_file("path4.partial", "v1 0.3\nv4 0.1\n");

  const auto positional = run_cli("evaluate " + graph + " " + partial +
                                  " v2 --e-epsilon 2 --delta 0");
  REQUIRE(positional.exit_code == 0);
  REQUIRE(positional.output == "v2 blue 0.4 (bound by v4)\n");

  const auto member = run_cli("evaluate " + graph + " " + partial +
                              " v1 --e-epsilon 2 --delta 0");
  REQUIRE(member.exit_code == 0);
  REQUIRE(member.output == "v1 red 0.7 (given)\n");

  const auto unknown = run_cli("evaluate " + graph + " " + partial +
                               " zz --e-epsilon 2 --delta 0");
  REQUIRE(unknown.exit_code == 1);
}

TEST_CASE("pair-check passes for valid parameters", "[cli]") {
  const auto ok = run_cli("pair-check --epsilon 0.693147 --delta 0 --grid 10000");
  REQUIRE(ok.exit_code == 0);
  REQUIRE(ok.output.find("pass") != std::string::npos);
  REQUIRE(run_cli("pair-check --e-epsilon 2 --delta 0.3 --grid 5000").exit_code == 0);
}

TEST_CASE("boundary and hitting-set commands report the figure-1 structure", "[cli]") {
  const auto graph =
      write_file("fig1.graph", dpcolor::fixture(dpcolor::FixtureName::kFigure1).graph_text);

  const auto b = run_cli("boundary " + graph);
  REQUIRE(b.exit_code == 0);
  REQUIRE(b.output.find("boundary edges (6):") != std::string::npos);
  REQUIRE(b.output.find("(h, i)") != std::string::npos);
  REQUIRE(b.output.find("boundary blue (5): h l s t u") != std::string::npos);

  const auto valid = run_cli("hitting-set " + graph + " --validate l,h,u,s,t");
  REQUIRE(valid.exit_code == 0);

  const auto invalid = run_cli("hitting-set " + graph + " --validate a,l,n,s,t,j,u");
  REQUIRE(invalid.exit_code == 2);
  REQUIRE(invalid.output.find("(h, i)") != std::string::npos);

  const auto greedy = run_cli("hitting-set " + graph + " --strategy greedy-cover");
  REQUIRE(greedy.exit_code == 0);

  const auto all = run_cli("hitting-set " + graph + " --strategy all-boundary");
  REQUIRE(all.exit_code == 0);
  REQUIRE(all.output == "f\nh\ni\nl\nn\nq\nr\ns\nt\nu\n");
}

TEST_CASE("generate round-trips through the parser", "[cli]") {
  const auto out = (workdir() / "cube.graph").string();
  const auto r = run_cli("generate hypercube -n 3 --coloring threshold --threshold 2 --out " + out);
  REQUIRE(r.exit_code == 0);
  const auto g = dpcolor::load_graph(read_file(out));
  REQUIRE(g.size() == 8);
  REQUIRE(g.edges().size() == 12);

  const auto stdout_graph = run_cli("generate path -n 4 --coloring explicit:red,blue,blue,red");
  REQUIRE(stdout_graph.exit_code == 0);
  REQUIRE(stdout_graph.output == example23_graph());

  REQUIRE(run_cli("generate random-connected -n 6 --seed 3 --edge-prob 0.4 --strict")
              .exit_code == 0);
  REQUIRE(run_cli("generate random-connected -n 6 --edge-prob 0.4 --strict").exit_code == 1);
  REQUIRE(run_cli("generate path -n 4 --coloring random --strict").exit_code == 1);
  REQUIRE(run_cli("generate path -n 4 --coloring alternating --strict").exit_code == 0);
  REQUIRE(run_cli("generate mobius -n 3").exit_code == 1);
}

TEST_CASE("audit is deterministic and honors --strict", "[cli]") {
  const auto graph = write_file("path5.graph", example23_graph());
  const auto partial = write_file("path5.partial", "v1 0.3\nv4 0.1\n");
  const auto out = (workdir() / "mech5.csv").string();
  REQUIRE(run_cli("extend " + graph + " " + partial + " --e-epsilon 2 --delta 0 --out " + out)
              .exit_code == 0);

  const auto args = "audit " + graph + " " + out +
                    " --e-epsilon 2 --delta 0 --samples 100000 --seed 42";
  const auto first = run_cli(args);
  const auto second = run_cli(args);
  INFO(first.output);
  REQUIRE(first.exit_code == 0);
  REQUIRE(first.output == second.output);
  REQUIRE(first.output.find("pass=true") != std::string::npos);

  REQUIRE(run_cli("audit " + graph + " " + out + " --e-epsilon 2 --delta 0 --strict")
              .exit_code == 1);
}
