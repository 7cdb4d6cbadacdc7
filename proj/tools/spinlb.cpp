#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "spinlb/bounds.hpp"
#include "spinlb/cache.hpp"
#include "spinlb/dependencies.hpp"
#include "spinlb/verify.hpp"

using namespace spinlb;
using nlohmann::json;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kMaxBoundSites = 8;
constexpr int kMaxTable1Sites = 60;
constexpr int kMaxEnumeratedSites = 12;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::optional<std::uint64_t> seed;
  std::optional<int> restarts;
  std::string cache_dir = ".spinlb-cache";
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Run metadata. Everything that varies between identical runs (timestamps
/// and timings) lives here, never in "results".
class Manifest {
 public:
  Manifest(std::string command, std::vector<std::string> argv)
      : started_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["argv"] = std::move(argv);
    doc_["tool_version"] = kToolVersion;
    doc_["started_at"] = utc_now();
    doc_["cache_paths"] = json::array();
    doc_["timings"] = json::object();
  }

  json& operator[](const char* key) { return doc_[key]; }

  json finish() {
    doc_["finished_at"] = utc_now();
    doc_["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    return doc_;
  }

 private:
  json doc_;
  std::chrono::steady_clock::time_point started_;
};

void write_output(const std::string& path, Manifest& manifest, json results) {
  if (path.empty()) return;
  const json doc{{"manifest", manifest.finish()}, {"results", std::move(results)}};
  std::ofstream out(path);
  out << doc.dump(2) << "\n";
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::string sci(long double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4Le", v);
  return buf;
}

int cmd_table1(int n_max, const std::string& out_path, Manifest& manifest) {
  if (n_max < 2 || n_max > kMaxTable1Sites) {
    throw UsageError("--n-max must lie in [2, " + std::to_string(kMaxTable1Sites) + "]");
  }
  std::printf("%-4s %-14s %-14s %s\n", "N", "K(N)", "4^N", "enumerated");
  json rows = json::array();
  bool ok = true;
  for (int n = 2; n <= n_max; ++n) {
    json row{{"n", n}};
    std::string k_text;
    std::string four_text;
    std::uint64_t k_exact = 0;
    bool exact = true;
    try {
      k_exact = a_sector_count(n) - 1;
      k_text = std::to_string(k_exact);
      row["k"] = k_exact;
    } catch (const CapacityError&) {
      exact = false;
      const long double approx = a_sector_count_approx(n) - 1;
      k_text = sci(approx);
      row["k_approx"] = static_cast<double>(approx);
    }
    if (n <= 31) {
      const std::uint64_t four = std::uint64_t{1} << (2 * n);
      four_text = std::to_string(four);
      row["four_pow_n"] = four;
    } else {
      const long double four = std::ldexp(1.0L, 2 * n);
      four_text = sci(four);
      row["four_pow_n_approx"] = static_cast<double>(four);
    }
    std::string enumerated_text = "-";
    if (n <= kMaxEnumeratedSites) {
      const auto enumerated = enumerate_basis(n, Sector::kA).size() - 1;
      row["enumerated"] = enumerated;
      enumerated_text = std::to_string(enumerated);
      if (!exact || enumerated != k_exact) {
        ok = false;
        enumerated_text += " MISMATCH";
      }
    }
    std::printf("%-4d %-14s %-14s %s\n", n, k_text.c_str(), four_text.c_str(), enumerated_text.c_str());
    rows.push_back(std::move(row));
  }
  manifest["config"] = {{"n_max", n_max}};
  write_output(out_path, manifest, rows);
  return ok ? 0 : kExitFailure;
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw UsageError("invalid cluster size '" + item + "'");
    }
    if (used != item.size()) throw UsageError("invalid cluster size '" + item + "'");
    if (n < 2 || n > kMaxBoundSites) {
      throw UsageError("cluster size " + item + " outside [2, " + std::to_string(kMaxBoundSites) + "]");
    }
    sizes.push_back(n);
  }
  if (sizes.empty()) throw UsageError("--sizes needs at least one cluster size");
  return sizes;
}

OptimizerConfig load_config(const std::string& path, const GlobalOptions& global) {
  OptimizerConfig config;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    try {
      config = OptimizerConfig::from_json(json::parse(in));
    } catch (const json::exception& e) {
      throw UsageError("malformed config file " + path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("bad config: ") + e.what());
    }
  }
  if (global.seed) config.seed = *global.seed;
  if (global.restarts) {
    if (*global.restarts < 1) throw UsageError("--restarts must be positive");
    config.restarts = *global.restarts;
  }
  return config;
}

int cmd_table2(const std::string& sizes_text, const std::string& config_path, const std::string& out_path,
               const GlobalOptions& global, Manifest& manifest) {
  const auto sizes = parse_sizes(sizes_text);
  const auto config = load_config(config_path, global);
  manifest["config"] = config.to_json();
  manifest["seed"] = config.seed;
  manifest["sizes"] = sizes;

  std::vector<BoundReport> reports;
  json results = json::array();
  bool ok = true;
  for (int n : sizes) {
    const auto start = std::chrono::steady_clock::now();
    const auto artifacts = load_or_build(n, global.cache_dir);
    manifest["cache_paths"].push_back(artifacts.path.string());
    auto report = variational_bound(ClusterModel::chain(n), artifacts.tensor, artifacts.constraints, config);
    manifest["timings"][std::to_string(n)] = {
        {"total", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
        {"optimizer", report.wall_time},
        {"tensor_from_cache", artifacts.loaded_from_cache}};
    ok = ok && sandwich_check(report);
    results.push_back(report.to_json());
    reports.push_back(std::move(report));
  }
  std::cout << format_table(reports);
  write_output(out_path, manifest, results);
  return ok ? 0 : kExitFailure;
}

int cmd_verify(const std::string& level, Manifest& manifest, const std::string& out_path) {
  VerifyLevel lv;
  if (level == "quick") {
    lv = VerifyLevel::kQuick;
  } else if (level == "full") {
    lv = VerifyLevel::kFull;
  } else {
    throw UsageError("--level must be quick or full");
  }
  const auto checks = run_verification(lv);
  json results = json::array();
  int failed = 0;
  for (const auto& c : checks) {
    std::printf("%s %s%s%s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.detail.empty() ? "" : ": ",
                c.detail.c_str());
    failed += c.passed ? 0 : 1;
    results.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  std::printf("%s: %zu checks, %d failed\n", failed == 0 ? "PASS" : "FAIL", checks.size(), failed);
  manifest["config"] = {{"level", level}};
  write_output(out_path, manifest, results);
  return failed == 0 ? 0 : kExitFailure;
}

int cmd_gram(int n, const std::string& out_path, Manifest& manifest) {
  if (n < 1 || n > kDependencySiteCap) {
    throw UsageError("--n must lie in [1, " + std::to_string(kDependencySiteCap) + "]");
  }
  const auto basis = enumerate_basis(n, Sector::kA);
  const Eigen::MatrixXd g = gram_matrix(basis, n);

  // Elements touching every site, the block shown for four spins.
  std::vector<Eigen::Index> full;
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basis[k].support_mask() == all) full.push_back(static_cast<Eigen::Index>(k));
  }
  std::printf("Gram matrix tr(X Y) / 2^%d over A-sector elements supported on all %d sites\n", n, n);
  std::size_t width = 0;
  for (auto k : full) width = std::max(width, basis[static_cast<std::size_t>(k)].to_string().size());
  for (auto a : full) {
    std::printf("%-*s ", static_cast<int>(width), basis[static_cast<std::size_t>(a)].to_string().c_str());
    for (auto b : full) std::printf(" %6g", g(a, b));
    std::printf("\n");
  }

  json rows = json::array();
  for (Eigen::Index a = 0; a < g.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < g.cols(); ++b) row.push_back(g(a, b));
    rows.push_back(std::move(row));
  }
  json names = json::array();
  for (const auto& m : basis) names.push_back(m.to_string());
  manifest["config"] = {{"n", n}};
  write_output(out_path, manifest, {{"n", n}, {"basis", names}, {"gram", rows}});
  return 0;
}

int cmd_deps(int n, const std::string& out_path, Manifest& manifest) {
  if (n < 1 || n > kDependencySiteCap) {
    throw UsageError("--n must lie in [1, " + std::to_string(kDependencySiteCap) + "]");
  }
  const auto r = check_dependencies(n);
  std::printf("n=%d |A+B|=%zu five-term instances=%zu determinant instances=%zu\n", r.n, r.set_size,
              r.five_term_count, r.determinant_count);
  std::printf("Gram rank %ld, predicted rank %ld%s -> %s\n", static_cast<long>(r.gram_rank),
              static_cast<long>(r.predicted_rank), r.ill_conditioned ? " (ill-conditioned)" : "",
              r.verified ? "PASS" : "FAIL");
  manifest["config"] = {{"n", n}};
  write_output(out_path, manifest,
               {{"n", r.n},
                {"set_size", r.set_size},
                {"five_term_instances", r.five_term_count},
                {"determinant_instances", r.determinant_count},
                {"gram_rank", r.gram_rank},
                {"predicted_rank", r.predicted_rank},
                {"ill_conditioned", r.ill_conditioned},
                {"verified", r.verified}});
  return r.verified ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower bounds on the ground-state energy of the Heisenberg chain"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  GlobalOptions global;
  app.add_option("--seed", global.seed, "Random seed for optimizer restarts");
  app.add_option("--restarts", global.restarts, "Number of optimizer restarts");
  app.add_option("--cache-dir", global.cache_dir, "Directory for cached structure tensors")
      ->capture_default_str();

  int n_max = 10;
  std::string out_path;
  auto* table1 = app.add_subcommand("table1", "Size of the A-sector basis against 4^N");
  table1->add_option("--n-max", n_max, "Largest N")->capture_default_str();
  table1->add_option("--out", out_path, "Write JSON results here");

  std::string sizes = "3,4,5,6,7";
  std::string config_path;
  auto* table2 = app.add_subcommand("table2", "Anderson and variational bounds per spin");
  table2->add_option("--sizes", sizes, "Comma-separated cluster sizes")->capture_default_str();
  table2->add_option("--config", config_path, "Optimizer configuration (JSON)");
  table2->add_option("--out", out_path, "Write JSON results here");

  std::string level = "quick";
  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  verify->add_option("--level", level, "quick or full")->capture_default_str();
  verify->add_option("--out", out_path, "Write JSON results here");

  int gram_n = 4;
  auto* gram = app.add_subcommand("gram", "Print the Gram matrix of the A-sector");
  gram->add_option("--n", gram_n, "Number of sites")->capture_default_str();
  gram->add_option("--out", out_path, "Write the full Gram matrix as JSON here");

  int deps_n = 5;
  auto* deps = app.add_subcommand("deps", "Check the linear-dependency hypothesis");
  deps->add_option("--n", deps_n, "Number of sites")->capture_default_str();
  deps->add_option("--out", out_path, "Write JSON results here");

  for (auto* sub : {table1, table2, verify, gram, deps}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  Manifest manifest(app.get_subcommands().front()->get_name(), std::vector<std::string>(argv, argv + argc));
  manifest["cache_dir"] = global.cache_dir;
  try {
    if (*table1) return cmd_table1(n_max, out_path, manifest);
    if (*table2) return cmd_table2(sizes, config_path, out_path, global, manifest);
    if (*verify) return cmd_verify(level, manifest, out_path);
    if (*gram) return cmd_gram(gram_n, out_path, manifest);
    if (*deps) return cmd_deps(deps_n, out_path, manifest);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
