#include "suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hmt/checks.hpp"
#include "hmt/oracles.hpp"
#include "hmt/psi.hpp"
#include "json.hpp"

namespace hmt::cli {

using nlohmann::json;

namespace {

constexpr double kDefaultOracleTol = 1e-10;

double rel_err(const DenseTensor& a, const DenseTensor& b) { return (a - b).norm() / b.norm(); }

Matrix with_norm(Rng& rng, Index k, double norm) {
  const Matrix m = random_normal(rng, k, k);
  return (norm / m.norm()) * m;
}

/// Random mode block with a horizontal tangent, for the per-mode kernels.
std::pair<ModeBlocks, HorizontalBlocks> random_mode(Rng& rng, Index n, Index k) {
  ModeBlocks b = ModeBlocks::from_columns(random_full_rank(rng, n, k, 50.0));
  HorizontalBlocks x;
  x.x11 = random_normal(rng, k, k);
  x.x21 = random_normal(rng, n - k, k);
  FlopLedger scratch;
  x.gamma12 = gamma12(b, scratch);
  const double scale = 1.0 / densify(b, x).norm();
  x.x11 *= scale;
  x.x21 *= scale;
  return {std::move(b), std::move(x)};
}

SuiteReport psi_suite(std::uint64_t seed) {
  Rng rng(seed);
  SuiteReport r{"psi", seed, {}};
  std::uniform_real_distribution<double> radius(0.0, 0.5);
  double pade = 0;
  for (Index k = 1; k <= 8; ++k)
    for (int trial = 0; trial < 100; ++trial) {
      const Matrix m = with_norm(rng, k, radius(rng));
      pade = std::max(pade, (psi1_pade(m) - oracle::psi1_series(m).value).norm());
    }
  r.checks.push_back({"pade_vs_series_max_abs", pade, 1e-15});

  double scaled = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = with_norm(rng, 6, 10.0);
    FlopLedger ledger;
    const Matrix ref = oracle::psi1_doubling(m);
    scaled = std::max(scaled, (psi1(m, ledger) - ref).norm() / ref.norm());
  }
  r.checks.push_back({"scaled_psi1_vs_doubling_rel", scaled, 1e-13});

  double mismatches = 0;
  for (Index k = 1; k <= 6; ++k)
    for (int z = 1; z <= 5; ++z) {
      FlopLedger ledger;
      psi1_scaled(with_norm(rng, k, 0.4), z, ledger);
      const std::int64_t k3 = k * k * k;
      if (ledger.total() != Rational(52 * k3, 3) + Rational(4 * (z - 1) * k3)) mismatches += 1;
    }
  r.checks.push_back({"ledger_model_mismatches", mismatches, 0.0});
  return r;
}

SuiteReport gl_suite(std::uint64_t seed, double tol) {
  Rng rng(seed);
  SuiteReport r{"gl", seed, {}};

  double lowrank_exp = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const Index n = 60, k = 3;
    LowRankPair p{random_normal(rng, n, k) / std::sqrt(double(n)), random_normal(rng, k, n) / std::sqrt(double(n))};
    FlopLedger ledger;
    const Matrix ref = oracle::mexp_dense(p.left * p.right);
    lowrank_exp = std::max(lowrank_exp, (densify(mexp_lowrank(p, ledger)) - ref).norm() / ref.norm());
  }
  r.checks.push_back({"mexp_lowrank_vs_dense_rel", lowrank_exp, 1e-12});

  double dense_exp = 0;
  for (int trial = 0; trial < 5; ++trial) {
    GroupElement g;
    g.factors = {random_invertible(rng, 6), random_invertible(rng, 4)};
    const AlgebraElement x = random_algebra(rng, std::vector<Index>{6, 4});
    const GroupElement a = gl_exp(g, x, 0.7);
    const GroupElement b = oracle::dense_geodesic(g, x, 0.7);
    for (size_t i = 0; i < 2; ++i)
      dense_exp = std::max(dense_exp, (a.factors[i] - b.factors[i]).norm() / b.factors[i].norm());
  }
  r.checks.push_back({"gl_exp_vs_oracle_rel", dense_exp, 1e-12});

  double step = 0, ledger_gap = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const Index n = 30, k = 3;
    const auto [b, x] = random_mode(rng, n, k);
    GroupElement g;
    g.factors = {densify(b)};
    AlgebraElement v;
    v.factors = {densify(b, x)};
    FlopLedger ledger;
    const StepResult out = lowrank_geodesic_step(b, x, 1.5, ledger);
    const Matrix ref = gl_exp(g, v, 1.5).factors[0].leftCols(k);
    step = std::max(step, (out.blocks.leading_columns() - ref).norm() / ref.norm());
    const Rational expected = per_mode_geodesic_flops(n, k, out.z) + Rational(6 * k * k * k);
    ledger_gap = std::max(ledger_gap, std::abs((ledger.total() - expected).to_double()));
  }
  r.checks.push_back({"lowrank_step_vs_dense_rel", step, tol});
  r.checks.push_back({"step_ledger_gap", ledger_gap, 0.0});
  return r;
}

struct ManifoldSuiteShapes {
  ManifoldShape main;
  ManifoldShape square;
  ManifoldShape non_square;
  double fixed_point_tol;
};

ManifoldSuiteShapes suite_shapes(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::Cp:
      return {{kind, {6, 5, 7}, {3}}, {kind, {2, 2, 2}, {2}}, {kind, {3, 3, 3}, {2}}, 1e-13};
    case ManifoldKind::Tucker:
      return {{kind, {8, 4, 3}, {6, 3, 2}}, {kind, {4, 2, 2}, {4, 2, 2}}, {kind, {5, 2, 2}, {4, 2, 2}}, 1e-12};
    case ManifoldKind::Tt:
      return {{kind, {3, 7, 6, 2}, {2, 3, 2}}, {kind, {2, 4, 2}, {2, 2}}, {kind, {3, 4, 2}, {2, 2}}, 1e-12};
  }
  throw std::logic_error("unreachable manifold kind");
}

SuiteReport manifold_suite(ManifoldKind kind, std::uint64_t seed, double tol) {
  const ManifoldSuiteShapes shapes = suite_shapes(kind);
  const QuotientStructure q = shapes.main.structure();
  Rng rng(seed);
  SuiteReport r{to_string(kind), seed, {}};

  double oracle_gap = 0, independence = 0, vertical = 0, horizontal = 0, slack_ratio = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto modes = random_point(shapes.main, rng);
    const HorizontalTangent x = random_horizontal(q, modes, rng);
    horizontal = std::max(horizontal, horizontal_residual(q, modes, x));
    const GroupElement g = densify(modes);
    const AlgebraElement v = lift(modes, x);
    for (double t : {0.5, 1.0, 2.0}) {
      const DenseTensor dense = mode_apply(oracle::dense_geodesic(g, v, t), reference_tensor(q));
      oracle_gap = std::max(oracle_gap, rel_err(embed(q, geodesic(modes, x, t)), dense));
    }

    const auto moved = checks::translate_representative(modes, stabilizer_sample(shapes.main, seed + trial));
    const HorizontalTangent x2 = checks::transport_tangent(q, modes, x, moved);
    independence = std::max(independence, rel_err(embed(q, geodesic(moved, x2, 1.0)), embed(q, geodesic(modes, x, 1.0))));

    for (double t : {0.25, 0.5, 1.0}) vertical = std::max(vertical, checks::vertical_velocity_fraction(q, modes, x, t));

    GeodesicTrace trace;
    geodesic(modes, x, 1.0, &trace);
    Rational slack;
    for (size_t i = 0; i < q.dims.size(); ++i) slack += Rational(100 * (q.dims[i] * q.ks[i] + q.ks[i] * q.ks[i]));
    const Rational diff = trace.ledger.total() - shapes.main.flop_formula(trace.z);
    slack_ratio = std::max(slack_ratio, std::abs(diff.to_double()) / slack.to_double());
  }
  r.checks.push_back({"geodesic_vs_dense_oracle_rel", oracle_gap, tol});
  r.checks.push_back({"horizontal_projection_residual", horizontal, 1e-9});
  r.checks.push_back({"representative_independence_rel", independence, 1e-8});
  r.checks.push_back({"vertical_velocity_fraction", vertical, 1e-5});
  r.checks.push_back({"flop_ledger_vs_formula_over_slack", slack_ratio, 1.0});

  double fixed = 0;
  for (std::uint64_t s = 0; s < 20; ++s)
    fixed = std::max(fixed, checks::fixed_point_residual(q, stabilizer_sample(shapes.main, seed * 1000 + s)));
  r.checks.push_back({"stabilizer_fixed_point_residual", fixed, shapes.fixed_point_tol});

  r.checks.push_back({"reductive_square_residual", reductive_check(shapes.square, 50, seed).max_residual,
                      kReductiveInvarianceTol});
  r.checks.push_back({"reductive_non_square_witness", reductive_check(shapes.non_square, 50, seed).max_residual,
                      kReductiveWitnessMin, false});
  return r;
}

template <typename Fn>
double median_seconds(Fn&& fn, int trials) {
  fn();
  // Repeat short calls inside each trial so one trial lasts at least a millisecond.
  using clock = std::chrono::steady_clock;
  int reps = 1;
  for (;;) {
    const auto start = clock::now();
    for (int i = 0; i < reps; ++i) fn();
    if (std::chrono::duration<double>(clock::now() - start).count() >= 1e-3 || reps >= (1 << 20)) break;
    reps *= 2;
  }
  std::vector<double> times;
  for (int t = 0; t < std::max(trials, 1); ++t) {
    const auto start = clock::now();
    for (int i = 0; i < reps; ++i) fn();
    times.push_back(std::chrono::duration<double>(clock::now() - start).count() / reps);
  }
  std::nth_element(times.begin(), times.begin() + static_cast<long>(times.size() / 2), times.end());
  return times[times.size() / 2];
}

std::string join(const std::vector<int>& values, char sep) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

json checks_json(const SuiteReport& report) {
  json list = json::array();
  for (const auto& c : report.checks)
    list.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"bound", c.upper ? "upper" : "lower"},
                    {"pass", c.pass()}});
  return list;
}

}  // namespace

bool SuiteReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass(); });
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"psi", "gl", "cp", "tucker", "tt"};
  return names;
}

SuiteReport run_suite(std::string_view suite, std::uint64_t seed, std::optional<double> tol) {
  const double oracle_tol = tol.value_or(kDefaultOracleTol);
  if (suite == "psi") return psi_suite(seed);
  if (suite == "gl") return gl_suite(seed, oracle_tol);
  if (suite == "cp" || suite == "tucker" || suite == "tt") return manifold_suite(parse_manifold(suite), seed, oracle_tol);
  throw std::invalid_argument("unknown suite '" + std::string(suite) + "'");
}

FlopsReport run_flops(const ManifoldShape& shape, std::optional<std::vector<int>> z, std::uint64_t seed) {
  const QuotientStructure q = shape.structure();
  const std::vector<int> requested = z.value_or(std::vector<int>(q.dims.size(), 1));
  if (requested.size() != q.dims.size()) throw DimensionError("one scaling exponent per mode is required");
  for (int zi : requested)
    if (zi < 1) throw DimensionError("scaling exponents must be at least 1");

  Rng rng(seed);
  const auto modes = random_point(shape, rng);
  // A small velocity keeps every automatic scaling exponent at zero, so the requested
  // minimum is the exponent actually used.
  const HorizontalTangent x = random_horizontal(q, modes, rng, 1e-3);

  FlopsReport report;
  report.shape = shape;
  report.seed = seed;
  FlopLedger total;
  for (size_t i = 0; i < modes.size(); ++i) {
    FlopLedger ledger;
    const StepResult step = lowrank_geodesic_step(modes[i], x.modes[i], 1.0, ledger, StepOptions{requested[i]});
    report.z.push_back(step.z);
    for (const auto& [name, model] : per_mode_step_model(q.dims[i], q.ks[i], step.z))
      report.lines.push_back({static_cast<Index>(i + 1), name, ledger.subtotal(name), model});
    total.merge(ledger, "mode" + std::to_string(i + 1));
    report.slack += Rational(100 * (q.dims[i] * q.ks[i] + q.ks[i] * q.ks[i]));
  }
  report.ledger_total = total.total();
  report.formula = shape.flop_formula(report.z);
  return report;
}

ManifoldShape bench_shape(ManifoldKind kind, Index n, Index r) {
  switch (kind) {
    case ManifoldKind::Cp:
      return {kind, {n, n, n}, {r}};
    case ManifoldKind::Tucker:
      return {kind, {n, n, n}, {r * r, r, r}};
    case ManifoldKind::Tt:
      return {kind, {n, n, n}, {r, r}};
  }
  throw std::logic_error("unreachable manifold kind");
}

std::vector<BenchRecord> run_bench(ManifoldKind kind, Index r, const std::vector<Index>& ns, int trials,
                                   std::uint64_t seed, Index dense_cap) {
  if (!std::is_sorted(ns.begin(), ns.end())) throw std::invalid_argument("bench sizes must be ascending");
  std::vector<BenchRecord> out;
  for (Index n : ns) {
    const ManifoldShape shape = bench_shape(kind, n, r);
    const QuotientStructure q = shape.structure();
    Rng rng(seed);
    const auto modes = random_point(shape, rng);
    const HorizontalTangent x = random_horizontal(q, modes, rng);
    GeodesicTrace trace;
    geodesic(modes, x, 1.0, &trace);
    const double d = static_cast<double>(q.dims.size());
    const double lowrank = median_seconds([&] { (void)geodesic(modes, x, 1.0); }, trials) / d;
    out.push_back({to_string(kind), n, r, trace.z, shape.flop_formula(trace.z), lowrank, seed});
    if (n <= dense_cap) {
      const GroupElement g = densify(modes);
      const AlgebraElement v = lift(modes, x);
      const double dense = median_seconds([&] { (void)oracle::dense_geodesic(g, v, 1.0); }, trials) / d;
      out.push_back({to_string(kind) + "-dense", n, r, {}, std::nullopt, dense, seed});
    }
  }
  return out;
}

double median_lowrank_step_seconds(Index n, Index k, int trials, std::uint64_t seed) {
  Rng rng(seed);
  const auto [b, x] = random_mode(rng, n, k);
  return median_seconds(
      [&] {
        FlopLedger ledger;
        (void)lowrank_geodesic_step(b, x, 1.0, ledger);
      },
      trials);
}

double median_dense_step_seconds(Index n, Index k, int trials, std::uint64_t seed) {
  Rng rng(seed);
  const auto [b, x] = random_mode(rng, n, k);
  GroupElement g;
  g.factors = {densify(b)};
  AlgebraElement v;
  v.factors = {densify(b, x)};
  return median_seconds([&] { (void)oracle::dense_geodesic(g, v, 1.0); }, trials);
}

std::string to_json(const SuiteReport& report) {
  return json{{"suite", report.suite}, {"seed", report.seed}, {"passed", report.passed()}, {"checks", checks_json(report)}}
      .dump(2);
}

std::string to_csv(const SuiteReport& report, bool header) {
  std::ostringstream out;
  out.precision(17);
  if (header) out << "suite,check,value,limit,bound,pass\n";
  for (const auto& c : report.checks)
    out << report.suite << ',' << c.name << ',' << c.value << ',' << c.limit << ',' << (c.upper ? "upper" : "lower")
        << ',' << (c.pass() ? "true" : "false") << '\n';
  return out.str();
}

std::string to_json(const FlopsReport& report) {
  json lines = json::array();
  for (const auto& l : report.lines)
    lines.push_back({{"mode", l.mode},
                     {"step", l.step},
                     {"ledger", l.ledger.str()},
                     {"model", l.model.str()},
                     {"match", l.ledger == l.model}});
  const Rational residual = report.ledger_total - report.formula;
  return json{{"manifold", to_string(report.shape.kind)},
              {"dims", report.shape.dims},
              {"ranks", report.shape.ranks},
              {"z", report.z},
              {"seed", report.seed},
              {"lines", lines},
              {"ledger_total", report.ledger_total.str()},
              {"formula", report.formula.str()},
              {"residual", residual.str()},
              {"slack", report.slack.str()},
              {"within_slack", Rational(0) - report.slack <= residual && residual <= report.slack}}
      .dump(2);
}

std::string to_csv(const FlopsReport& report) {
  std::ostringstream out;
  out << "mode,step,ledger,model,match\n";
  for (const auto& l : report.lines)
    out << l.mode << ',' << l.step << ',' << l.ledger.str() << ',' << l.model.str() << ','
        << (l.ledger == l.model ? "true" : "false") << '\n';
  out << "total,ledger," << report.ledger_total.str() << ",,\n";
  out << "total,formula," << report.formula.str() << ",,\n";
  out << "total,residual," << (report.ledger_total - report.formula).str() << ',' << report.slack.str() << ",\n";
  return out.str();
}

std::string to_csv_row(const BenchRecord& record) {
  std::ostringstream out;
  out.precision(9);
  out << record.manifold << ',' << record.n << ',' << record.r << ',' << join(record.z, ';') << ','
      << (record.flops_model ? record.flops_model->str() : "") << ',' << record.time_median_s << ',' << record.seed;
  return out.str();
}

}  // namespace hmt::cli
