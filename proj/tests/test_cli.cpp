#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mpcc/cli.hpp"

using namespace mpcc;
using namespace mpcc::cli;

namespace {

std::string tmp(const std::string& name) { return testing::TempDir() + name; }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  ASSERT_TRUE(out.good()) << path;
  out << content;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  EXPECT_TRUE(in.good()) << path;
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Tiny symmetric cluster with w0 = 1, w = 2, z = 1 at ci = 1e9: with
// gamma = 1, beta = 1 each child costs 4, the aggregate rate is 1.5, and
// the equal-finish makespan is exactly 2/3.
std::string two_child_cluster() {
  const std::string path = tmp("two_child.cluster");
  write_file(path,
             "node hub cs=1e9 relay\n"
             "node c1 cs=5e8 bw=1\n"
             "node c2 cs=5e8 bw=1\n");
  return path;
}

// Ladder of compute rates with effectively free links: contributions come
// out 0.5, 0.3, 0.2, 0.1 against w0 = 10.
std::string ladder_cluster() {
  const std::string path = tmp("ladder.cluster");
  write_file(path,
             "node base cs=1e8 relay\n"
             "node s1 cs=5e8 bw=1e12\n"
             "node s2 cs=3e8 bw=1e12\n"
             "node s3 cs=2e8 bw=1e12\n"
             "node s4 cs=1e8 bw=1e12\n");
  return path;
}

}  // namespace

TEST(AllocateCommand, EqualFinishExampleComesOutExact) {
  AllocateArgs args;
  args.cluster_file = two_child_cluster();
  args.compute_intensity = 1e9;
  args.gamma = 1.0;
  args.beta = 1.0;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_allocate(args, out, err), kExitOk);
  EXPECT_TRUE(contains(out.str(), "regime=Case1\n")) << out.str();
  EXPECT_TRUE(contains(out.str(), "t_star=0.666667\n")) << out.str();
  EXPECT_TRUE(contains(out.str(), "alpha_0=0.666667\n")) << out.str();
  EXPECT_TRUE(contains(out.str(), "alpha_1=0.166667\n")) << out.str();
  EXPECT_TRUE(err.str().empty()) << err.str();
}

TEST(AllocateCommand, FullySequentialTaskLeavesNeighborsIdle) {
  AllocateArgs args;
  args.cluster_file = two_child_cluster();
  args.compute_intensity = 1e9;
  args.gamma = 1.0;
  args.beta = 1.0;
  args.seq_frac = 1.0;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_allocate(args, out, err), kExitOk);
  EXPECT_TRUE(contains(out.str(), "regime=Case2\n")) << out.str();
  EXPECT_TRUE(contains(out.str(), "alpha_0=0\n")) << out.str();
  EXPECT_TRUE(contains(out.str(), "alpha_1=0\n")) << out.str();
  EXPECT_TRUE(contains(out.str(), "alpha_2=0\n")) << out.str();
  EXPECT_TRUE(contains(out.str(), "t_star=1\n")) << out.str();
}

TEST(AllocateCommand, PerNodeCsvFinishTimesAgree) {
  AllocateArgs args;
  args.cluster_file = two_child_cluster();
  args.compute_intensity = 1e9;
  args.gamma = 0.8;
  args.beta = 1.0;
  args.csv = tmp("alloc.csv");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_allocate(args, out, err), kExitOk);
  const auto lines = lines_of(slurp(args.csv));
  ASSERT_EQ(lines.size(), 4u);  // header + relay + 2 children
  EXPECT_EQ(lines[0], "node,alpha,unit_cost,finish");
  double reference = -1.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::string node, alpha, cost, finish;
    std::getline(row, node, ',');
    std::getline(row, alpha, ',');
    std::getline(row, cost, ',');
    std::getline(row, finish, ',');
    EXPECT_EQ(node, std::to_string(i - 1));
    const double t = std::stod(finish);
    if (reference < 0.0)
      reference = t;
    else
      EXPECT_NEAR(t, reference, 1e-5 * reference);  // everyone finishes together
  }
}

TEST(AllocateCommand, SamplesFromNamedClass) {
  AllocateArgs args;
  args.task_class = "ai_inf";
  args.task_seed = 3;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_allocate(args, out, err), kExitOk);
  EXPECT_TRUE(contains(out.str(), "regime=")) << out.str();
  EXPECT_TRUE(contains(out.str(), "cluster=")) << out.str();

  std::ostringstream again, err2;
  EXPECT_EQ(cmd_allocate(args, again, err2), kExitOk);
  EXPECT_EQ(out.str(), again.str());  // same seed, same report
}

TEST(AllocateCommand, RejectsConflictingOrMissingTaskSpecs) {
  {
    AllocateArgs args;  // neither --class nor --gamma
    std::ostringstream out, err;
    EXPECT_EQ(cmd_allocate(args, out, err), kExitInputError);
    EXPECT_TRUE(contains(err.str(), "task undefined")) << err.str();
  }
  {
    AllocateArgs args;
    args.task_class = "ai_inf";
    args.gamma = 0.5;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_allocate(args, out, err), kExitInputError);
    EXPECT_TRUE(contains(err.str(), "not both")) << err.str();
  }
  {
    AllocateArgs args;
    args.task_class = "no_such_class";
    std::ostringstream out, err;
    EXPECT_EQ(cmd_allocate(args, out, err), kExitInputError);
    EXPECT_TRUE(contains(err.str(), "no_such_class")) << err.str();
  }
}

TEST(AllocateCommand, ReportsClusterParseErrorsWithPosition) {
  const std::string path = tmp("broken.cluster");
  write_file(path,
             "node hub cs=1e9 relay\n"
             "node c1 cs=oops bw=5\n");
  AllocateArgs args;
  args.cluster_file = path;
  args.gamma = 0.8;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_allocate(args, out, err), kExitInputError);
  EXPECT_TRUE(contains(err.str(), ":2:")) << err.str();
}

TEST(SizeCommand, LadderExampleNeedsThreeSatellites) {
  SizeArgs args;
  args.cluster_file = ladder_cluster();
  args.compute_intensity = 1e9;
  args.required_unit_time = 1.0;
  args.csv = tmp("size.csv");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_size(args, out, err), kExitOk);
  EXPECT_TRUE(contains(out.str(), "n_min=3\n")) << out.str();
  EXPECT_TRUE(contains(out.str(), "deficit=0.9\n")) << out.str();
  EXPECT_TRUE(contains(out.str(), "rank=1 neighbor=s1 ")) << out.str();

  const auto lines = lines_of(slurp(args.csv));
  ASSERT_EQ(lines.size(), 5u);  // header + 4 neighbors
  EXPECT_EQ(lines[0], "rank,g,cumulative,threshold,selected");
  const std::vector<std::string> selected = {"1", "1", "1", "0"};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::istringstream row(lines[i]);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 5u);
    EXPECT_EQ(cells[3], "0.9");
    EXPECT_EQ(cells[4], selected[i - 1]) << "rank " << i;
  }
}

TEST(SizeCommand, ImpossibleDeadlineExitsInfeasible) {
  SizeArgs args;
  args.cluster_file = ladder_cluster();
  args.compute_intensity = 1e9;
  args.required_unit_time = 0.01;  // needs 99.9, fleet offers ~1.1
  std::ostringstream out, err;
  EXPECT_EQ(cmd_size(args, out, err), kExitInfeasible);
  EXPECT_TRUE(contains(out.str(), "n_min=INFEASIBLE\n")) << out.str();
}

TEST(SizeCommand, RelayAloneCanBeEnough) {
  SizeArgs args;
  args.cluster_file = ladder_cluster();
  args.compute_intensity = 1e9;
  args.required_unit_time = 20.0;  // slacker than w0 = 10
  std::ostringstream out, err;
  EXPECT_EQ(cmd_size(args, out, err), kExitOk);
  EXPECT_TRUE(contains(out.str(), "n_min=0\n")) << out.str();
}

TEST(SizeCommand, RejectsBadInputs) {
  {
    SizeArgs args;  // required_unit_time left at 0
    std::ostringstream out, err;
    EXPECT_EQ(cmd_size(args, out, err), kExitInputError);
  }
  {
    SizeArgs args;
    args.cluster_file = tmp("missing.cluster");
    args.required_unit_time = 1.0;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_size(args, out, err), kExitInputError);
    EXPECT_TRUE(contains(err.str(), "cannot open")) << err.str();
  }
}

TEST(ExperimentCommand, RunsScaleConfigAndReportsOutputs) {
  const std::string output = tmp("cli_scale.csv");
  const std::string cfg = tmp("cli_scale.cfg");
  write_file(cfg,
             "# closed-form makespan sweep\n"
             "experiment = scale\n"
             "output = " + output + "\n"
             "seed = 5\n");
  ExperimentArgs args;
  args.config_file = cfg;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_experiment(args, out, err), kExitOk);
  EXPECT_EQ(out.str(), "wrote " + output + "\n");
  const auto lines = lines_of(slurp(output));
  EXPECT_EQ(lines.size(), 17u);  // header + 4 classes x 4 sizes
}

TEST(ExperimentCommand, OutputOverrideRedirectsBothFiles) {
  const std::string cfg = tmp("cli_sens.cfg");
  write_file(cfg,
             "experiment = sensitivity\n"
             "output = " + tmp("unused.csv") + "\n"
             "samples_per_class = 3\n");
  ExperimentArgs args;
  args.config_file = cfg;
  args.output_override = tmp("redirected.csv");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_experiment(args, out, err), kExitOk);
  EXPECT_TRUE(contains(out.str(), "wrote " + tmp("redirected.csv") + "\n")) << out.str();
  EXPECT_TRUE(contains(out.str(), "wrote " + tmp("redirected_means.csv") + "\n")) << out.str();
  EXPECT_FALSE(slurp(tmp("redirected_means.csv")).empty());
}

TEST(ExperimentCommand, SeedOverrideChangesSampledOutput) {
  const std::string output = tmp("cli_seeded.csv");
  const std::string cfg = tmp("cli_seeded.cfg");
  write_file(cfg,
             "experiment = sensitivity\n"
             "output = " + output + "\n"
             "samples_per_class = 3\n"
             "classes = sci_data\n");
  ExperimentArgs args;
  args.config_file = cfg;
  args.seed_override = 1;
  std::ostringstream out1, err1;
  ASSERT_EQ(cmd_experiment(args, out1, err1), kExitOk);
  const std::string first = slurp(output);

  std::ostringstream out2, err2;
  ASSERT_EQ(cmd_experiment(args, out2, err2), kExitOk);
  EXPECT_EQ(first, slurp(output));  // same seed reproduces bytes

  args.seed_override = 2;
  std::ostringstream out3, err3;
  ASSERT_EQ(cmd_experiment(args, out3, err3), kExitOk);
  EXPECT_NE(first, slurp(output));
}

TEST(ExperimentCommand, RejectsBrokenConfigs) {
  {
    ExperimentArgs args;
    args.config_file = tmp("no_such.cfg");
    std::ostringstream out, err;
    EXPECT_EQ(cmd_experiment(args, out, err), kExitInputError);
  }
  {
    const std::string cfg = tmp("cli_unknown_exp.cfg");
    write_file(cfg, "experiment = warp\n");
    ExperimentArgs args;
    args.config_file = cfg;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_experiment(args, out, err), kExitInputError);
    EXPECT_TRUE(contains(err.str(), "unknown experiment")) << err.str();
  }
  {
    const std::string cfg = tmp("cli_unknown_key.cfg");
    write_file(cfg, "experiment = scale\nbogus = 1\n");
    ExperimentArgs args;
    args.config_file = cfg;
    std::ostringstream out, err;
    EXPECT_EQ(cmd_experiment(args, out, err), kExitInputError);
    EXPECT_TRUE(contains(err.str(), ":2:")) << err.str();
    EXPECT_TRUE(contains(err.str(), "bogus")) << err.str();
  }
}
