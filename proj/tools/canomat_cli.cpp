#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "canomat/canonical.hpp"
#include "canomat/ensembles.hpp"
#include "canomat/errors.hpp"
#include "canomat/identities.hpp"
#include "canomat/json_io.hpp"
#include "canomat/mc_verify.hpp"
#include "canomat/moment_chain.hpp"
#include "canomat/sumrule.hpp"
#include "canomat/version.hpp"

namespace fs = std::filesystem;
using namespace canomat;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct RunContext {
  std::string subcommand;
  std::vector<std::string> argv;
  std::string out_dir;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  json seeds = json::object();
  json extra = json::object();
  std::vector<std::string> outputs;

  std::string resolve(const std::string& path) const {
    fs::path p(path);
    if (p.is_absolute() || out_dir.empty()) return p.string();
    return (fs::path(out_dir) / p).string();
  }

  // Time-dependent fields live under "timestamp" so reruns differ only there.
  json manifest() const {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json m = {{"subcommand", subcommand},
              {"argv", argv},
              {"seeds", seeds},
              {"version", kVersion},
              {"outputs", outputs},
              {"timestamp", {{"utc", buf}, {"wall_clock_seconds", wall}}}};
    for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
    return m;
  }

  void register_output(const std::string& path) { outputs.push_back(path); }

  void write(const std::string& path, json doc) {
    fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    doc["manifest"] = manifest();
    write_json_file(path, doc);
  }
};

std::vector<double> parse_pair(const std::string& s, const char* flag) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "expected comma-separated numbers, got '" + s + "'");
    }
  }
  return v;
}

std::string csv_path_for(const std::string& json_path) {
  fs::path p(json_path);
  p.replace_extension(".csv");
  return p.string();
}

void write_measure_csv(const std::string& path, const MatrixMeasure& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.precision(17);
  out << "atom,x,row,col,w_re,w_im\n";
  int idx = 0;
  for (const auto& a : m.atoms()) {
    for (int i = 0; i < m.dim(); ++i)
      for (int j = 0; j < m.dim(); ++j)
        out << idx << ',' << a.x << ',' << i << ',' << j << ',' << a.w(i, j).real() << ',' << a.w(i, j).imag() << '\n';
    ++idx;
  }
}

int default_depth(const MatrixMeasure& m) {
  int rank = 0;
  for (const auto& [x, w] : m.support()) {
    auto l = eigenvalues(HermitianMatrix(w));
    for (int i = 0; i < l.size(); ++i) rank += l(i) > 1e-12 * std::max(l.maxCoeff(), 1e-300) ? 1 : 0;
  }
  return std::max(1, std::min(rank / m.dim(), 50));
}

double chain_round_trip_residual(const RecursionChain& a, const RecursionChain& b) {
  double r = 0.0;
  for (std::size_t k = 0; k < a.u.size(); ++k)
    r = std::max(r, (a.u[k] - b.u[k]).norm() / std::max(1.0, a.u[k].norm()));
  for (std::size_t k = 0; k < a.v.size(); ++k)
    r = std::max(r, (a.v[k] - b.v[k]).norm() / std::max(1.0, a.v[k].norm()));
  return r;
}

void print_identities(const std::vector<IdentityReport>& rs) {
  std::printf("%-28s %24s %24s %12s %10s %s\n", "check", "lhs", "rhs", "residual", "tol", "status");
  for (const auto& r : rs)
    std::printf("%-28s %24.16g %24.16g %12.3e %10.1e %s\n", r.name.c_str(), r.lhs.real(), r.rhs.real(), r.residual,
                r.tol, r.pass ? "PASS" : "FAIL");
}

void print_mc(const McTestReport& r) {
  std::printf("suite %s  samples %d  seed %llu  %.2fs\n", r.suite.c_str(), r.samples,
              static_cast<unsigned long long>(r.seed), r.seconds);
  std::printf("%-32s %16s %16s %12s %8s %s\n", "cell", "mean", "reference", "pooled se", "z", "status");
  for (const auto& c : r.cells) {
    double se = std::sqrt(c.se * c.se + c.ref_se * c.ref_se);
    std::printf("%-32s %16.8g %16.8g %12.3e %8.3f %s\n", c.label.c_str(), c.mean, c.ref_mean, se, c.z,
                c.pass ? "PASS" : "FAIL");
  }
  if (!r.correlations.empty()) {
    double worst = 0.0;
    for (std::size_t j = 0; j < r.correlations.size(); ++j)
      for (std::size_t k = 0; k < r.correlations.size(); ++k)
        if (j != k) worst = std::max(worst, std::abs(r.correlations[j][k]));
    std::printf("max |corr| %.4f  band %.4f  %s\n", worst, r.corr_band, r.corr_pass ? "PASS" : "FAIL");
  }
  if (!r.errors.empty()) {
    std::printf("moment errors by size:");
    for (double e : r.errors) std::printf(" %.3e", e);
    std::printf("  trend %s\n", r.trend_pass ? "PASS" : "FAIL");
  }
  std::printf("degeneracy events %d\noverall %s\n", r.degeneracy_events, r.pass ? "PASS" : "FAIL");
}

void print_sumrule(const SumRuleReport& r) {
  std::printf("measure side      %.12g  (kl %.12g, outliers+ %.6g, outliers- %.6g)\n", r.measure.total, r.measure.kl,
              r.measure.outliers_plus, r.measure.outliers_minus);
  std::printf("coefficient side  %.12g  (pairs %d, tail %.6g, plateau %s)\n", r.coefficients.total,
              r.coefficients.truncation_depth, r.coefficients.tail_estimate,
              r.coefficients.convergent ? "yes" : "no");
  std::printf("residual %.3e  tol %.1e  %s\n", r.residual, r.tol, r.pass ? "PASS" : "FAIL");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix measures, canonical moments and sum rules on [0, 1]"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunContext ctx;
  for (int i = 0; i < argc; ++i) ctx.argv.emplace_back(argv[i]);
  if (const char* env = std::getenv("CANOMAT_OUT_DIR")) ctx.out_dir = env;
  app.add_option("--out-dir", ctx.out_dir, "Directory for relative output paths (default: $CANOMAT_OUT_DIR or .)");

  // sample
  auto* sample = app.add_subcommand("sample", "Spectral matrix measure of a GUE/LUE/JUE sample");
  std::string kind = "jue", route = "full", sample_out = "measure.json";
  int N = 6, p = 2, a = 0, b = 0;
  std::uint64_t seed = 1;
  sample->add_option("--kind", kind, "gue | lue | jue")->check(CLI::IsMember({"gue", "lue", "jue"}, CLI::ignore_case));
  sample->add_option("--N", N, "Matrix size (multiple of p)")->check(CLI::PositiveNumber);
  sample->add_option("--p", p, "Block size")->check(CLI::PositiveNumber);
  sample->add_option("--a", a, "First parameter (LUE, JUE)")->check(CLI::NonNegativeNumber);
  sample->add_option("--b", b, "Second parameter (JUE)")->check(CLI::NonNegativeNumber);
  sample->add_option("--seed", seed, "RNG seed");
  sample->add_option("--route", route, "full: eigenvectors give weights; weights: independent weights")
      ->check(CLI::IsMember({"full", "weights"}));
  sample->add_option("--out", sample_out, "Output JSON path (a CSV table is written alongside)");

  // decompose
  auto* decompose = app.add_subcommand("decompose", "Recursion chain and canonical moments of a measure on [0, 1]");
  std::string measure_path, chain_out = "recursion.json", canon_out = "canonical.json";
  int depth = 0;
  decompose->add_option("--measure", measure_path, "MatrixMeasure JSON")->required()->check(CLI::ExistingFile);
  decompose->add_option("--depth", depth, "Chain depth n (default: largest available, at most 50)")
      ->check(CLI::PositiveNumber);
  decompose->add_option("--out", canon_out, "CanonicalChain JSON path");
  decompose->add_option("--out-chain", chain_out, "RecursionChain JSON path");

  // identities
  auto* identities = app.add_subcommand("identities", "Determinant, Schur and Szego-map identity checks");
  std::string ident_out = "identities.json";
  double ident_tol = 1e-8, schur_tol = 1e-9, ym_tol = 1e-7;
  identities->add_option("--measure", measure_path, "MatrixMeasure JSON on [0, 1]")->required()->check(CLI::ExistingFile);
  identities->add_option("--depth", depth, "Chain depth n")->required()->check(CLI::PositiveNumber);
  identities->add_option("--tol", ident_tol, "Relative tolerance of the determinant identities");
  identities->add_option("--schur-tol", schur_tol, "Absolute tolerance of the Schur recursion");
  identities->add_option("--ym-tol", ym_tol, "Tolerance of the Szego-map identity");
  identities->add_option("--out", ident_out, "Report JSON path");

  // sumrule
  auto* sumrule = app.add_subcommand("sumrule", "Sum rule: measure side against coefficient side");
  std::string family, kappa_s, kappa_p_s, perturb_s, sum_out = "sumrule.json";
  double kappa1 = std::numeric_limits<double>::quiet_NaN(), kappa2 = kappa1, sum_tol = 1e-5, perturb_scale = 0.05;
  int nodes = 400, sum_p = 1, random_perturb = 0;
  int sum_depth = 20;
  std::uint64_t perturb_seed = 1;
  auto* sm_opt = sumrule->add_option("--measure", measure_path, "StructuredMeasure JSON")->check(CLI::ExistingFile);
  sumrule->add_option("--kappa1", kappa1, "Reference kappa1 (default: from the file)");
  sumrule->add_option("--kappa2", kappa2, "Reference kappa2 (default: from the file)");
  auto* fam_opt = sumrule->add_option("--family", family, "kmk-mismatch | perturbed-kmk")
                      ->check(CLI::IsMember({"kmk-mismatch", "perturbed-kmk"}));
  sm_opt->excludes(fam_opt);
  sumrule->add_option("--kappa", kappa_s, "Reference parameters k1,k2")->default_val("0,0");
  sumrule->add_option("--kappa-prime", kappa_p_s, "kmk-mismatch: measure parameters k1',k2'")->default_val("1,1");
  sumrule->add_option("--perturb", perturb_s, "perturbed-kmk: scalar perturbations of U_1..U_K, comma-separated");
  sumrule->add_option("--random-perturb", random_perturb, "perturbed-kmk: K random Hermitian perturbations")
      ->check(CLI::NonNegativeNumber);
  sumrule->add_option("--perturb-scale", perturb_scale, "Spectral-norm scale of random perturbations")
      ->check(CLI::PositiveNumber);
  sumrule->add_option("--seed", perturb_seed, "Seed for random perturbations");
  sumrule->add_option("--p", sum_p, "Block size for generated families")->check(CLI::PositiveNumber);
  sumrule->add_option("--nodes", nodes, "Reference quadrature nodes")->check(CLI::Range(8, 100000));
  sumrule->add_option("--depth", sum_depth, "Number of coefficient pairs summed")->check(CLI::PositiveNumber);
  sumrule->add_option("--tol", sum_tol, "Relative tolerance");
  sumrule->add_option("--out", sum_out, "Report JSON path");

  // mc-test
  auto* mc = app.add_subcommand("mc-test", "Monte Carlo verification suites");
  std::string suite = "jacobi-canonical", mc_out = "mc_report.json", n_list_s = "2,4,8", stats_s;
  McTestConfig cfg;
  double mc_kappa1 = 0.5, mc_kappa2 = 0.5;
  mc->add_option("--suite", suite, "jacobi-canonical | routes | gue-coefficients | kmk-limit")
      ->check(CLI::IsMember({"jacobi-canonical", "routes", "gue-coefficients", "kmk-limit"}));
  mc->add_option("--p", cfg.p, "Block size")->check(CLI::PositiveNumber);
  mc->add_option("--n", cfg.n, "Chain depth")->check(CLI::PositiveNumber);
  mc->add_option("--a", cfg.a, "JUE parameter a")->check(CLI::NonNegativeNumber);
  mc->add_option("--b", cfg.b, "JUE parameter b")->check(CLI::NonNegativeNumber);
  mc->add_option("--samples", cfg.samples, "Samples per route")->check(CLI::PositiveNumber);
  mc->add_option("--seed", cfg.seed, "Master seed");
  mc->add_option("--threads", cfg.threads, "Worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
  mc->add_option("--tol", cfg.tolerance_sigmas, "Tolerance in standard errors")->check(CLI::PositiveNumber);
  mc->add_option("--statistics", stats_s, "Comma-separated subset of trace,trace_sq,logdet,logdet_complement");
  mc->add_option("--n-list", n_list_s, "kmk-limit: comma-separated depths n");
  mc->add_option("--kappa1", mc_kappa1, "kmk-limit: kappa1")->check(CLI::NonNegativeNumber);
  mc->add_option("--kappa2", mc_kappa2, "kmk-limit: kappa2")->check(CLI::NonNegativeNumber);
  mc->add_option("--out", mc_out, "Report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*sample) {
      ctx.subcommand = "sample";
      if (N % p != 0) throw CLI::ValidationError("--N", "must be a multiple of --p");
      EnsembleSpec spec{ensemble_kind_from_string(kind), N, p, a, b, seed};
      ctx.seeds["sample"] = seed;
      Rng rng(seed);
      auto m = spectral_sample_measure(spec, rng,
                                       route == "full" ? SamplingRoute::FullMatrix : SamplingRoute::EigenvaluesAndWeights);
      std::string path = ctx.resolve(sample_out), csv = csv_path_for(path);
      ctx.register_output(path);
      ctx.register_output(csv);
      ctx.extra["ensemble"] = {{"kind", to_string(spec.kind)}, {"N", N}, {"p", p}, {"a", a}, {"b", b}, {"route", route}};
      ctx.write(path, measure_to_json(m));
      write_measure_csv(csv, m);
      std::printf("wrote %s (%zu atoms) and %s\n", path.c_str(), m.atoms().size(), csv.c_str());
      return kExitPass;
    }

    if (*decompose) {
      ctx.subcommand = "decompose";
      auto m = measure_from_json(read_json_file(measure_path));
      int n = depth > 0 ? depth : default_depth(m);
      auto chain = gram_schmidt(m, n);
      auto canon = canonical_from_recursion(chain);
      auto back = canonical_to_recursion(canon);
      double residual = chain_round_trip_residual(chain, back);
      std::string cpath = ctx.resolve(canon_out), rpath = ctx.resolve(chain_out);
      ctx.register_output(cpath);
      ctx.register_output(rpath);
      ctx.extra["input"] = measure_path;
      ctx.extra["depth"] = n;
      ctx.extra["round_trip_residual"] = number_to_json(residual);
      ctx.write(cpath, canonical_to_json(canon));
      ctx.write(rpath, chain_to_json(chain));
      std::printf("%-6s %s\n", "k", "eigenvalues of U_herm_k");
      for (int k = 1; k <= canon.m; ++k) {
        std::printf("%-6d", k);
        auto l = eigenvalues(canon.U_herm[k - 1]);
        for (int i = 0; i < l.size(); ++i) std::printf(" %.12f", l(i));
        std::printf("\n");
      }
      std::printf("round-trip residual %.3e\n", residual);
      return kExitPass;
    }

    if (*identities) {
      ctx.subcommand = "identities";
      auto m = measure_from_json(read_json_file(measure_path));
      auto chain = gram_schmidt(m, depth);
      auto canon = canonical_from_recursion(chain);
      auto reports = check_det_identities(chain, canon, ident_tol);
      for (auto& r : check_schur_recursion(chain, canon, schur_tol)) reports.push_back(r);
      reports.push_back(check_ym(chain, depth, default_z_samples(), ym_tol));
      std::string path = ctx.resolve(ident_out);
      ctx.register_output(path);
      ctx.extra["input"] = measure_path;
      ctx.extra["depth"] = depth;
      bool ok = true;
      for (const auto& r : reports) ok = ok && r.pass;
      ctx.extra["pass"] = ok;
      ctx.write(path, identity_reports_to_json(reports));
      print_identities(reports);
      return ok ? kExitPass : kExitCheckFail;
    }

    if (*sumrule) {
      ctx.subcommand = "sumrule";
      StructuredMeasure sm;
      CanonicalSequence seq;
      if (!measure_path.empty()) {
        sm = structured_from_json(read_json_file(measure_path), kappa1, kappa2);
        auto sigma = sm.to_measure();
        int n = std::min(sum_depth + 1, default_depth(sigma));
        auto canon = canonical_from_recursion(gram_schmidt(sigma, n));
        seq = sequence_from_canonical(canon);
        ctx.extra["input"] = measure_path;
      } else if (!family.empty()) {
        auto k = parse_pair(kappa_s, "--kappa");
        if (k.size() != 2) throw CLI::ValidationError("--kappa", "expected k1,k2");
        SumRuleCase c;
        if (family == "kmk-mismatch") {
          auto kp = parse_pair(kappa_p_s, "--kappa-prime");
          if (kp.size() != 2) throw CLI::ValidationError("--kappa-prime", "expected k1,k2");
          c = kmk_mismatch_family(k[0], k[1], kp[0], kp[1], sum_p, nodes);
        } else {
          std::vector<HermitianMatrix> pert;
          if (!perturb_s.empty())
            for (double d : parse_pair(perturb_s, "--perturb")) pert.push_back(HermitianMatrix::scalar(sum_p, d));
          if (random_perturb > 0) {
            ctx.seeds["perturbations"] = perturb_seed;
            Rng rng(perturb_seed);
            for (int i = 0; i < random_perturb; ++i) {
              auto g = sample_gue(sum_p, rng);
              double s = std::max(std::abs(min_eig(g)), std::abs(max_eig(g)));
              pert.push_back((perturb_scale / s) * g);
            }
          }
          if (pert.empty()) throw CLI::ValidationError("--perturb", "perturbed-kmk needs --perturb or --random-perturb");
          c = perturbed_kmk_family(k[0], k[1], pert, nodes);
        }
        sm = c.measure;
        seq = c.canonical;
        ctx.extra["family"] = c.family;
      } else {
        throw CLI::ValidationError("sumrule", "one of --measure or --family is required");
      }
      auto report = sum_rule_report(sm, seq, sum_depth, sum_tol);
      std::string path = ctx.resolve(sum_out);
      ctx.register_output(path);
      ctx.extra["kappa1"] = number_to_json(sm.kmk.kappa1);
      ctx.extra["kappa2"] = number_to_json(sm.kmk.kappa2);
      ctx.write(path, sumrule_to_json(report));
      print_sumrule(report);
      return report.pass ? kExitPass : kExitCheckFail;
    }

    if (*mc) {
      ctx.subcommand = "mc-test";
      if (!stats_s.empty()) {
        cfg.statistics.clear();
        std::stringstream ss(stats_s);
        std::string item;
        while (std::getline(ss, item, ',')) cfg.statistics.push_back(statistic_from_string(item));
      }
      ctx.seeds["master"] = cfg.seed;
      McTestReport r;
      if (suite == "jacobi-canonical") {
        r = run_jacobi_canonical_test(cfg);
      } else if (suite == "routes") {
        r = run_route_comparison_test(cfg);
      } else if (suite == "gue-coefficients") {
        r = run_gue_coefficient_test(cfg.p, cfg.n, cfg.samples, cfg.seed, cfg.threads, cfg.tolerance_sigmas);
      } else {
        std::vector<int> ns;
        for (double d : parse_pair(n_list_s, "--n-list")) ns.push_back(static_cast<int>(d));
        r = run_kmk_limit_test(cfg.p, ns, mc_kappa1, mc_kappa2, cfg.samples, cfg.seed, cfg.threads,
                               cfg.tolerance_sigmas);
      }
      std::string path = ctx.resolve(mc_out);
      ctx.register_output(path);
      ctx.extra["config"] = {{"suite", suite}, {"p", cfg.p}, {"n", cfg.n}, {"a", cfg.a}, {"b", cfg.b},
                             {"samples", cfg.samples}, {"threads", cfg.threads},
                             {"tolerance_sigmas", cfg.tolerance_sigmas}};
      ctx.write(path, mc_report_to_json(r));
      print_mc(r);
      return r.pass ? kExitPass : kExitCheckFail;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumeric;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumeric;
  }
  return kExitUsage;
}
