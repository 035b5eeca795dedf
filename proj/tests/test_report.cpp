#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dibgeo/geometry.hpp"
#include "dibgeo/report.hpp"
#include "dibgeo/serialize.hpp"

using namespace dibgeo;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

struct CliResult {
  int code = -1;
  std::string output;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(DIBGEO_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  std::array<char, 512> buf;
  while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
  const int status = pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

// Minimal well-formedness check: tags balance, attributes quoted.
bool svg_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  size_t pos = 0;
  bool saw_svg = false;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const size_t end = text.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty()) return false;
    if (tag[0] == '?' || tag.rfind("!--", 0) == 0) continue;
    if (tag[0] == '/') {
      if (stack.empty() || stack.back() != tag.substr(1)) return false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.back() == '/';
    if (self_closing) tag.pop_back();
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
    if (name == "svg") saw_svg = true;
    if (!self_closing) stack.push_back(name);
  }
  return stack.empty() && saw_svg;
}

RunConfig quick_config(const fs::path& out) {
  RunConfig c;
  c.out_dir = out.string();
  c.bins = 24;
  c.beta_steps = 12;
  c.beta_lo = 0.5;
  c.beta_hi = 500.0;
  c.restarts = 2;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("cmd_generate writes the preset CSV") {
  const fs::path dir = fresh_dir("dibgeo_gen");
  std::ostringstream log;
  cmd_generate("three_equal", 7, dir.string(), log);
  const std::string csv = slurp(dir / "points.csv");
  CHECK(count_lines(csv) == 151);  // header + 150 rows
  CHECK(csv.rfind("x1,x2,label\n", 0) == 0);
  CHECK(log.str().find("N=150") != std::string::npos);

  std::ostringstream log2;
  cmd_generate("single_blob", 1, dir.string(), log2);
  const PointSet ps = load_points((dir / "points.csv").string());
  CHECK(ps.n() == 100);
  for (int l : ps.labels) CHECK(l == 0);
  fs::remove_all(dir);
}

TEST_CASE("cmd_generate rejects unknown presets") {
  std::ostringstream log;
  CHECK_THROWS_AS(cmd_generate("nonesuch", 1, "/tmp", log), UsageError);
}

TEST_CASE("cmd_smooth_dump writes a normalized table") {
  const fs::path dir = fresh_dir("dibgeo_dump");
  RunConfig c = quick_config(dir);
  c.dataset = "single_blob";
  c.bins = 12;
  std::ostringstream log;
  cmd_smooth_dump(c, log);
  const std::string csv = slurp(dir / "joint.csv");
  CHECK(count_lines(csv) == 101);  // header + 100 rows
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // header
  CHECK(line.rfind("i,c0,", 0) == 0);
  CHECK(line.find(",row_sum") != std::string::npos);
  while (std::getline(in, line)) {
    const double row_sum = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(std::abs(row_sum - 1.0) < 1e-12);
  }
  CHECK(svg_well_formed(slurp(dir / "joint.svg")));
  fs::remove_all(dir);
}

TEST_CASE("cmd_smooth_dump refuses oversized tables") {
  const fs::path dir = fresh_dir("dibgeo_dump_big");
  RunConfig c = quick_config(dir);
  c.dataset = "three_equal";
  c.bins = 300;  // 150 * 90000 entries
  std::ostringstream log;
  try {
    cmd_smooth_dump(c, log);
    FAIL("expected size refusal");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("1e7") != std::string::npos);
  }
  fs::remove_all(dir);
}

TEST_CASE("cmd_sweep summary, files, and byte-identical reruns") {
  const fs::path dir_a = fresh_dir("dibgeo_sweep_a");
  const fs::path dir_b = fresh_dir("dibgeo_sweep_b");
  RunConfig c = quick_config(dir_a);
  c.dataset = "three_equal";
  c.s = 2.0;
  std::ostringstream log_a;
  const SweepOutcome out_a = cmd_sweep(c, log_a);
  CHECK(out_a.selection.n_c == 3);
  CHECK(log_a.str().find("selected n_c=3") != std::string::npos);

  c.out_dir = dir_b.string();
  std::ostringstream log_b;
  cmd_sweep(c, log_b);
  CHECK(slurp(dir_a / "solutions.json") == slurp(dir_b / "solutions.json"));
  CHECK(slurp(dir_a / "curve.csv") == slurp(dir_b / "curve.csv"));
  CHECK(svg_well_formed(slurp(dir_a / "curve.svg")));

  const Json doc = Json::parse(slurp(dir_a / "solutions.json"));
  CHECK(doc["records"].size() == 12);
  CHECK(doc["selected_n_c"] == 3);
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

TEST_CASE("cmd_sweep flags the absence of robust structure on a blob") {
  const fs::path dir = fresh_dir("dibgeo_sweep_blob");
  RunConfig c = quick_config(dir);
  c.dataset = "single_blob";
  c.s = 2.0;
  std::ostringstream log;
  const SweepOutcome out = cmd_sweep(c, log);
  CHECK(!out.robust);
  CHECK(log.str().find("no robust multi-cluster solution") !=
        std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("cmd_cluster collapses at tiny beta and writes N rows") {
  const fs::path dir = fresh_dir("dibgeo_cluster");
  RunConfig c = quick_config(dir);
  c.dataset = "three_equal";
  c.s = 2.0;
  std::ostringstream log;
  cmd_cluster(c, 1e-9, log);
  const std::string csv = slurp(dir / "assignment.csv");
  CHECK(count_lines(csv) == 151);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line))
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  CHECK(svg_well_formed(slurp(dir / "clusters.svg")));
  fs::remove_all(dir);
}

TEST_CASE("cmd_cluster at the selected kink recovers generative labels") {
  const fs::path dir = fresh_dir("dibgeo_cluster_kink");
  RunConfig c = quick_config(dir);
  c.dataset = "three_equal";
  c.s = 2.0;
  std::ostringstream sweep_log;
  cmd_sweep(c, sweep_log);
  const Json doc = Json::parse(slurp(dir / "solutions.json"));

  // beta mid-way through the selected solution's validity range
  double beta_sel = 0.0;
  for (const auto& e : doc["curve"]["entries"]) {
    if (e["theta"].is_null() || e["n_c"] != doc["selected_n_c"]) continue;
    beta_sel = std::sqrt(e["beta_min"].get<double>() *
                         e["beta_max"].get<double>());
  }
  REQUIRE(beta_sel > 0.0);

  std::ostringstream log;
  cmd_cluster(c, beta_sel, log);
  const PointSet ps = preset_dataset("three_equal", c.seed);
  const std::string csv = slurp(dir / "assignment.csv");
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  std::vector<int> got;
  while (std::getline(in, line))
    got.push_back(std::stoi(line.substr(line.rfind(',') + 1)));
  REQUIRE(static_cast<int>(got.size()) == ps.n());

  int best = 0;
  const std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  for (const auto& perm : perms) {
    int agree = 0;
    for (int i = 0; i < ps.n(); ++i)
      if (got[i] < 3 && perm[got[i]] == ps.labels[i]) ++agree;
    best = std::max(best, agree);
  }
  CHECK(best >= static_cast<int>(0.95 * ps.n()));
  fs::remove_all(dir);
}

TEST_CASE("cmd_boundaries emits every requested curve") {
  const fs::path dir = fresh_dir("dibgeo_bounds");
  // subsampled two-cluster dataset keeps this quick
  const PointSet full = preset_dataset(Preset::symmetric_plus_skew, 5);
  PointSet sub;
  sub.points = full.points.topRows(250);
  const fs::path data_csv = dir / "data.csv";
  save_points(sub, data_csv.string());

  RunConfig c = quick_config(dir);
  c.dataset = data_csv.string();
  c.boundary_s = {0.5, 2.0, 4.0};
  c.resolution = 80;
  std::ostringstream log;
  cmd_boundaries(c, log);

  const std::string csv = slurp(dir / "boundaries.csv");
  for (const std::string id :
       {"kmeans", "gmm", "dib_s0.5", "dib_s2", "dib_s4"})
    CHECK(csv.find(id + ".0,") != std::string::npos);
  CHECK(svg_well_formed(slurp(dir / "boundaries.svg")));

  // every vertex inside the plotted region
  const Region reg = bounding_region(sub, 1.0);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    const size_t c1 = line.find(','), c2 = line.rfind(',');
    const double x = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    const double y = std::stod(line.substr(c2 + 1));
    CHECK(x >= reg.x_min);
    CHECK(x <= reg.x_max);
    CHECK(y >= reg.y_min);
    CHECK(y <= reg.y_max);
  }
  fs::remove_all(dir);
}

TEST_CASE("config file values apply and flags override them") {
  const fs::path dir = fresh_dir("dibgeo_config");
  const fs::path cfg = dir / "config.json";
  {
    std::ofstream out(cfg);
    out << R"({"dataset": "single_blob", "bins": 16, "s": 1.5})";
  }
  const RunConfig loaded = load_config_file(cfg.string());
  CHECK(loaded.dataset == "single_blob");
  CHECK(loaded.bins == 16);
  CHECK(loaded.s == 1.5);

  {
    std::ofstream out(cfg);
    out << R"({"mystery_knob": 3})";
  }
  CHECK_THROWS_AS(load_config_file(cfg.string()), UsageError);
  fs::remove_all(dir);
}

TEST_CASE("cli exit codes") {
  const fs::path dir = fresh_dir("dibgeo_cli");
  // usage error: unknown preset, message lists the presets
  const CliResult bad = run_cli("generate nonesuch --out " + dir.string());
  CHECK(bad.code == 1);
  CHECK(bad.output.find("three_equal") != std::string::npos);
  CHECK(bad.output.find("symmetric_plus_skew") != std::string::npos);

  // success
  const CliResult ok =
      run_cli("generate single_blob --seed 4 --out " + dir.string());
  CHECK(ok.code == 0);
  CHECK(ok.output.find("N=100") != std::string::npos);

  // data error: oversized table
  const CliResult big =
      run_cli("smooth-dump --dataset three_equal --bins 400 --out " +
              dir.string());
  CHECK(big.code == 2);

  // non-convergence: starved iteration budget
  const CliResult starved = run_cli(
      "sweep --dataset three_equal --s 2 --bins 24 --beta-min 2 "
      "--beta-max 200 --beta-steps 6 --restarts 1 --max-iter 1 --out " +
      dir.string());
  CHECK(starved.code == 3);
  fs::remove_all(dir);
}

TEST_CASE("cli config flag overrides file values") {
  const fs::path dir = fresh_dir("dibgeo_cli_cfg");
  const fs::path cfg = dir / "cfg.json";
  {
    std::ofstream out(cfg);
    out << R"({"dataset": "single_blob", "bins": 10, "s": 2.0, "out": ")"
        << dir.string() << R"("})";
  }
  const CliResult res = run_cli("smooth-dump --config " + cfg.string() +
                                " --bins 12");
  CHECK(res.code == 0);
  const std::string csv = slurp(dir / "joint.csv");
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  // 12x12 grid -> 144 cell columns
  CHECK(header.find(",c143,") != std::string::npos);
  CHECK(header.find(",c144,") == std::string::npos);
  fs::remove_all(dir);
}
