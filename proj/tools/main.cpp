#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hmt/serialize.hpp"
#include "json.hpp"
#include "suites.hpp"

namespace {

using namespace hmt;

constexpr int kPass = 0;
constexpr int kInvariantFailure = 1;
constexpr int kUsageError = 2;

/// Flags shared by every subcommand.
struct CommonFlags {
  std::uint64_t seed = 1;
  std::optional<double> tol;
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--seed", flags.seed, "Random seed")->capture_default_str();
  cmd->add_option("--tol", flags.tol, "Tolerance override");
  cmd->add_option("--format", flags.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmd->add_option("--out", flags.out, "Write the report to this path instead of stdout");
}

void emit(const CommonFlags& flags, const std::string& text) {
  if (flags.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream file(flags.out);
  if (!file) throw std::runtime_error("cannot open '" + flags.out + "' for writing");
  file << text;
  if (!text.empty() && text.back() != '\n') file << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

int cmd_verify(const std::string& suite, const CommonFlags& flags) {
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = cli::suite_names();
  } else if (std::find(cli::suite_names().begin(), cli::suite_names().end(), suite) != cli::suite_names().end()) {
    suites = {suite};
  } else {
    std::cerr << "error: unknown suite '" << suite << "' (expected psi, gl, cp, tucker, tt or all)\n";
    return kUsageError;
  }
  bool passed = true;
  std::string text;
  nlohmann::json reports = nlohmann::json::array();
  for (size_t i = 0; i < suites.size(); ++i) {
    const cli::SuiteReport report = cli::run_suite(suites[i], flags.seed, flags.tol);
    passed = passed && report.passed();
    if (flags.format == "csv")
      text += cli::to_csv(report, i == 0);
    else
      reports.push_back(nlohmann::json::parse(cli::to_json(report)));
    for (const auto& c : report.checks)
      if (!c.pass()) std::cerr << "FAIL " << report.suite << '.' << c.name << " value=" << c.value << " limit=" << c.limit << '\n';
  }
  if (flags.format == "json") text = (suites.size() == 1 ? reports[0] : reports).dump(2);
  emit(flags, text);
  return passed ? kPass : kInvariantFailure;
}

int cmd_flops(const ManifoldShape& shape, const std::vector<int>& z, const CommonFlags& flags) {
  const cli::FlopsReport report = cli::run_flops(shape, z.empty() ? std::nullopt : std::optional(z), flags.seed);
  emit(flags, flags.format == "csv" ? cli::to_csv(report) : cli::to_json(report));
  const Rational residual = report.ledger_total - report.formula;
  return (Rational(0) - report.slack <= residual && residual <= report.slack) ? kPass : kInvariantFailure;
}

int cmd_bench(ManifoldKind kind, Index r, const std::vector<Index>& ns, int trials, Index dense_cap,
              const CommonFlags& flags) {
  const auto records = cli::run_bench(kind, r, ns, trials, flags.seed, dense_cap);
  std::string text;
  if (flags.format == "csv") {
    text = std::string(cli::kBenchHeader) + "\n";
    for (const auto& rec : records) text += cli::to_csv_row(rec) + "\n";
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& rec : records)
      rows.push_back({{"manifold", rec.manifold},
                      {"n", rec.n},
                      {"r", rec.r},
                      {"z", rec.z},
                      {"flops_model", rec.flops_model ? rec.flops_model->str() : ""},
                      {"time_median_s", rec.time_median_s},
                      {"seed", rec.seed}});
    text = rows.dump(2);
  }
  emit(flags, text);
  return kPass;
}

int cmd_geodesic(const std::string& point_path, const std::string& tangent_path, double t, const CommonFlags& flags) {
  const PointFile point = read_point(read_file(point_path));
  const TangentFile tangent = read_tangent(read_file(tangent_path), point);
  const QuotientStructure q = point.shape.structure();
  const double residual = horizontal_residual(q, point.modes, tangent.tangent);
  const double tol = flags.tol.value_or(1e-8);
  if (residual > tol) {
    std::cerr << "error: tangent is not horizontal (residual " << residual << " > " << tol << ")\n";
    return kInvariantFailure;
  }
  PointFile out{point.shape, geodesic(point.modes, tangent.tangent, t)};
  emit(flags, write_point(out));
  return kPass;
}

int cmd_sample(const ManifoldShape& shape, double norm, const std::string& tangent_out, const CommonFlags& flags) {
  Rng rng(flags.seed);
  PointFile point{shape, random_point(shape, rng)};
  emit(flags, write_point(point));
  if (!tangent_out.empty()) {
    const HorizontalTangent x = random_horizontal(shape.structure(), point.modes, rng, norm);
    CommonFlags to_file = flags;
    to_file.out = tangent_out;
    emit(to_file, write_tangent(TangentFile{shape.kind, x}));
  }
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Geodesics on low-rank tensor manifolds: invariant suites, flop audits and benchmarks"};
  app.require_subcommand(1);
  CommonFlags flags;

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run an invariant suite (psi, gl, cp, tucker, tt, all)");
  verify->add_option("suite", suite, "Suite name")->required();
  add_common(verify, flags);

  std::string manifold = "cp";
  std::vector<Index> dims, ranks;
  std::vector<int> z;
  auto* flops = app.add_subcommand("flops", "Instrumented geodesic: ledger lines against the cost model");
  flops->add_option("manifold", manifold, "cp, tucker or tt")->required();
  flops->add_option("--dims", dims, "Mode sizes")->delimiter(',')->required();
  flops->add_option("--ranks", ranks, "Rank parameters")->delimiter(',')->required();
  flops->add_option("--z", z, "Scaling exponent per mode")->delimiter(',');
  add_common(flops, flags);

  Index rank = 5;
  std::vector<Index> ns{1000, 2000, 4000};
  int trials = 5;
  Index dense_cap = 400;
  auto* bench = app.add_subcommand("bench", "Median geodesic timings over a sweep of mode sizes");
  bench->add_option("manifold", manifold, "cp, tucker or tt")->required();
  bench->add_option("--rank", rank, "Rank parameter r")->capture_default_str();
  bench->add_option("--n", ns, "Ascending mode sizes")->delimiter(',');
  bench->add_option("--trials", trials, "Timed trials per size")->check(CLI::Range(5, 1000))->capture_default_str();
  bench->add_option("--dense-cap", dense_cap, "Largest n timed with the dense oracle")->capture_default_str();
  add_common(bench, flags);

  std::string point_path, tangent_path;
  double t = 1.0;
  auto* geo = app.add_subcommand("geodesic", "Evaluate a geodesic on serialized point and tangent files");
  geo->add_option("--point", point_path, "Point file")->required();
  geo->add_option("--tangent", tangent_path, "Tangent file")->required();
  geo->add_option("--t", t, "Time")->capture_default_str();
  add_common(geo, flags);

  double norm = 1.0;
  std::string tangent_out;
  auto* sample = app.add_subcommand("sample", "Write a random point (and optionally a horizontal tangent)");
  sample->add_option("manifold", manifold, "cp, tucker or tt")->required();
  sample->add_option("--dims", dims, "Mode sizes")->delimiter(',')->required();
  sample->add_option("--ranks", ranks, "Rank parameters")->delimiter(',')->required();
  sample->add_option("--norm", norm, "Tangent norm")->capture_default_str();
  sample->add_option("--tangent-out", tangent_out, "Tangent file path");
  add_common(sample, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsageError;
  }

  try {
    if (verify->parsed()) return cmd_verify(suite, flags);
    const auto shape = [&] { return ManifoldShape{parse_manifold(manifold), dims, ranks}; };
    if (flops->parsed()) return cmd_flops(shape(), z, flags);
    if (bench->parsed()) return cmd_bench(parse_manifold(manifold), rank, ns, trials, dense_cap, flags);
    if (geo->parsed()) return cmd_geodesic(point_path, tangent_path, t, flags);
    if (sample->parsed()) {
      const ManifoldShape s = shape();
      s.validate();
      return cmd_sample(s, norm, tangent_out, flags);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvariantFailure;
  }
  return kUsageError;
}
