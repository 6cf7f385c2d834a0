#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "canomat/ensembles.hpp"

namespace canomat {

enum class Statistic { Trace, TraceSq, LogDet, LogDetComplement };

std::string to_string(Statistic s);
Statistic statistic_from_string(const std::string& s);

struct McTestConfig {
  int p = 2;
  int n = 3;
  int a = 0;
  int b = 0;
  int samples = 20000;
  std::uint64_t seed = 7;
  std::vector<Statistic> statistics{Statistic::Trace, Statistic::TraceSq, Statistic::LogDet,
                                    Statistic::LogDetComplement};
  double tolerance_sigmas = 4.0;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
};

// Streaming mean/variance with Chan's pairwise merge.
struct RunningMoments {
  long long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x);
  void merge(const RunningMoments& o);
  double variance() const { return count > 1 ? m2 / (count - 1) : 0.0; }
  double stderr_of_mean() const { return count > 0 ? std::sqrt(variance() / count) : 0.0; }
};

struct McCell {
  std::string label;     // e.g. "U_3/logdet"
  int index = 0;
  std::string statistic;
  double mean = 0.0;     // route (i)
  double ref_mean = 0.0; // route (ii) or exact value
  double se = 0.0;       // stderr of route (i)
  double ref_se = 0.0;   // stderr of route (ii), 0 for exact references
  double z = 0.0;
  bool pass = false;
};

struct McTestReport {
  std::string suite;
  int samples = 0;
  std::uint64_t seed = 0;
  std::vector<McCell> cells;
  std::vector<std::vector<double>> correlations;  // of trace statistics, route (i)
  double corr_band = 0.0;
  bool corr_pass = true;
  int degeneracy_events = 0;
  bool trend_pass = true;
  std::vector<double> errors;  // kmk-limit: |m1 - ref| + |m2 - ref| per size
  bool pass = false;
  double seconds = 0.0;
};

// Runs f(i) for i in [0, count) on `threads` workers. Output must be written by index.
void parallel_for(int count, int threads, const std::function<void(int)>& f);

// Hermitian canonical moments from spectral samples of JUE_{np}(a, b) against direct
// JUE_p samples whose parameters give the exact law of each canonical moment.
McTestReport run_jacobi_canonical_test(const McTestConfig& cfg);

// Same statistics for the two spectral sampling routes (full matrix vs eigenvalues
// plus independent weights).
McTestReport run_route_comparison_test(const McTestConfig& cfg);

// tr B_k and tr A_k of GUE_{np} spectral measures against GUE_p / LUE_p(p(n-k)) samplers
// and the exact means 0 and p^2 (n - k).
McTestReport run_gue_coefficient_test(int p, int n, int samples, std::uint64_t seed, int threads = 0,
                                      double tolerance_sigmas = 4.0);

// Mean eigenvalue moments m1, m2 of JUE_{np}(k1 np, k2 np) against KMK(k1, k2).
McTestReport run_kmk_limit_test(int p, const std::vector<int>& n_list, double k1, double k2, int samples,
                                std::uint64_t seed, int threads = 0, double tolerance_sigmas = 4.0);

// Parameters (alpha, beta) of the JUE_p law of U_k: odd k = 2j-1 gives
// (p(n-j)+a, p(n-j)+b), even k = 2j gives (p(n-j-1), p(n-j)+a+b).
std::pair<int, int> canonical_jue_parameters(int p, int n, int a, int b, int k);

}  // namespace canomat
