// End-to-end tests of the bench CLI, driven through the real binary.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string kCli = SUBMAX_CLI_PATH;

int run(const std::string& args) {
  int status = std::system((kCli + " " + args + " > cli_stdout.txt 2> cli_stderr.txt").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

int count_lines_with(const std::string& text, const std::string& needle) {
  int count = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.find(needle) != std::string::npos) ++count;
  return count;
}

}  // namespace

TEST_CASE("run on a coverage config emits a schema-stable CSV, byte-identical on rerun") {
  write_file("cov.cfg",
             "scenario = coverage\n"
             "maximizer = greedy\n"
             "n = 8\nk = 3\ntrials = 5\nseed = 7\nuniverse = 20\ndensity = 0.3\n");
  REQUIRE(run("run cov.cfg --out cov1.csv") == 0);
  REQUIRE(run("run cov.cfg --out cov2.csv") == 0);
  std::string first = slurp("cov1.csv");
  CHECK(first == slurp("cov2.csv"));
  CHECK(first.rfind("scenario,maximizer,k,seed,trial,metric,value\n", 0) == 0);
  CHECK(count_lines_with(first, ",objective,") == 5);
  CHECK(count_lines_with(first, ",work,") == 5);
  CHECK(count_lines_with(first, ",wall_ms,") == 0);  // timing rows are opt-in
}

TEST_CASE("config validation failures exit with code 2 and name the field") {
  write_file("bad_k.cfg", "scenario = coverage\nmaximizer = greedy\nn = 4\nk = 9\ntrials = 1\n");
  CHECK(run("run bad_k.cfg") == 2);
  std::string err = slurp("cli_stderr.txt");
  CHECK(err.find("k") != std::string::npos);

  write_file("bad_key.cfg", "scenario = coverage\nmystery = 1\n");
  CHECK(run("run bad_key.cfg") == 2);
  CHECK(slurp("cli_stderr.txt").find("mystery") != std::string::npos);

  CHECK(run("run does_not_exist.cfg") == 2);
}

TEST_CASE("seed overrides: flag and environment variable") {
  write_file("seeded.cfg",
             "scenario = coverage\nmaximizer = greedy\nn = 6\nk = 2\ntrials = 3\nseed = 1\n"
             "universe = 15\n");
  REQUIRE(run("run seeded.cfg --out s1.csv") == 0);
  REQUIRE(run("run seeded.cfg --seed 2 --out s2.csv") == 0);
  CHECK(slurp("s1.csv") != slurp("s2.csv"));
  int status = std::system(
      (std::string("SUBMAX_SEED=2 ") + kCli + " run seeded.cfg --out s3.csv > /dev/null 2>&1")
          .c_str());
  REQUIRE(WEXITSTATUS(status) == 0);
  CHECK(slurp("s2.csv") == slurp("s3.csv"));
}

TEST_CASE("parallel execution emits identical bytes") {
  write_file("par.cfg",
             "scenario = sensor-toy\nmaximizer = pac\nn = 5\nk = 2\ntrials = 6\nseed = 11\n"
             "num_states = 4\nalphabet = 2\n"
             "m_fine = 16\nm_coarse = 32\nn_draws0 = 32\nn_draws_coarse = 32\n"
             "max_tighten_rounds = 2\n");
  REQUIRE(run("run par.cfg --out p1.csv") == 0);
  REQUIRE(run("run par.cfg --jobs 4 --out p4.csv") == 0);
  CHECK(slurp("p1.csv") == slurp("p4.csv"));
}

TEST_CASE("compare pairs maximizers on shared seeds") {
  write_file("cmp.cfg",
             "scenario = coverage\nmaximizers = greedy, lazier\nn = 7\nR = 7\n"
             "k_values = 1, 2\ntrials = 4\nseed = 3\nuniverse = 18\ndensity = 0.3\n");
  REQUIRE(run("compare cmp.cfg --out cmp.csv") == 0);
  std::string csv = slurp("cmp.csv");
  // R = n degenerates to greedy: identical subsets on every paired trial
  CHECK(count_lines_with(csv, "lazier/greedy") > 0);
  int match_rows = 0, match_ones = 0;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find(",chosen_match,") == std::string::npos) continue;
    ++match_rows;
    if (line.substr(line.rfind(',') + 1) == "1") ++match_ones;
  }
  CHECK(match_rows == 8);  // 2 k-values x 4 trials
  CHECK(match_ones == match_rows);
  CHECK(count_lines_with(csv, ",mean_work_ratio,") == 2);
}

TEST_CASE("compare requires at least two maximizers") {
  write_file("cmp_one.cfg", "scenario = coverage\nmaximizers = greedy\nn = 5\nk = 1\n");
  CHECK(run("compare cmp_one.cfg") == 2);
}

TEST_CASE("tracking compare reports pac work ratios below one at default budgets") {
  write_file("trk.cfg",
             "scenario = tracking\nmaximizers = greedy, pac\nk = 2\nn = 8\ntrials = 2\n"
             "seed = 21\ngrid_w = 6\ngrid_h = 6\nT = 6\nparticles = 128\n");
  REQUIRE(run("compare trk.cfg --out trk.csv") == 0);
  std::string csv = slurp("trk.csv");
  CHECK(count_lines_with(csv, ",accuracy,") == 4);
  CHECK(count_lines_with(csv, ",selection_match,") == 2);
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find(",mean_work_ratio,") == std::string::npos) continue;
    double ratio = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(ratio < 1.0);
  }
}

TEST_CASE("sensor-toy accepts a model file and validates n against it") {
  write_file("toy_model.txt",
             "num_states 3\n"
             "num_sensors 2\n"
             "sensor 0 2\n0.9 0.1\n0.2 0.8\n0.5 0.5\n"
             "sensor 1 2\n0.6 0.4\n0.3 0.7\n0.5 0.5\n");
  write_file("toy.cfg",
             "scenario = sensor-toy\nmaximizer = brute\nn = 2\nk = 1\ntrials = 2\nseed = 13\n"
             "model_file = toy_model.txt\n");
  REQUIRE(run("run toy.cfg --out toy.csv") == 0);
  CHECK(count_lines_with(slurp("toy.csv"), ",objective,") == 2);

  write_file("toy_bad.cfg",
             "scenario = sensor-toy\nmaximizer = brute\nn = 5\nk = 1\ntrials = 1\n"
             "model_file = toy_model.txt\n");
  CHECK(run("run toy_bad.cfg") == 2);
}

TEST_CASE("verify subcommand runs suites and rejects unknown names") {
  CHECK(run("verify coarsening") == 0);
  CHECK(slurp("cli_stdout.txt").find("[coarsening] PASS") != std::string::npos);
  CHECK(run("verify no-such-suite") == 2);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("run") == 2);
}

TEST_CASE("tracking rejects unsupported maximizers") {
  write_file("trk_bad.cfg",
             "scenario = tracking\nmaximizer = brute\nk = 1\nn = 4\ntrials = 1\n"
             "grid_w = 4\ngrid_h = 4\nT = 2\nparticles = 16\n");
  CHECK(run("run trk_bad.cfg") == 2);
}
