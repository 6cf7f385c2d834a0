#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "canomat/canonical.hpp"
#include "canomat/hermitian.hpp"
#include "canomat/measure.hpp"

namespace canomat {

// One step of SplitMix64 (Steele, Lea, Flood 2014) on `state`.
std::uint64_t splitmix64(std::uint64_t& state);

// Seed for stream `stream` derived from a master seed: two SplitMix64 rounds on
// seed ^ golden * (stream + 1). Used for per-sample and per-worker seeds.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

// std::mt19937_64 with portable uniforms (top 53 bits) and Box-Muller normals,
// so streams are bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform();  // in (0, 1]
  double normal();   // N(0, 1)
  cplx complex_normal();  // E|g|^2 = 1, real and imaginary parts N(0, 1/2)

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

HermitianMatrix sample_gue(int N, Rng& rng);
HermitianMatrix sample_lue(int N, int a, Rng& rng);
HermitianMatrix sample_jue(int N, int a, int b, Rng& rng);
std::vector<HermitianMatrix> sample_weights(int N, int p, Rng& rng);

HermitianMatrix sample_gue(int N, std::uint64_t seed);
HermitianMatrix sample_lue(int N, int a, std::uint64_t seed);
HermitianMatrix sample_jue(int N, int a, int b, std::uint64_t seed);
std::vector<HermitianMatrix> sample_weights(int N, int p, std::uint64_t seed);

enum class EnsembleKind { GUE, LUE, JUE };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::JUE;
  int N = 1;
  int p = 1;
  int a = 0;
  int b = 0;
  std::uint64_t seed = 0;
};

enum class SamplingRoute {
  FullMatrix,           // eigenvectors of the sampled matrix give the weights
  EigenvaluesAndWeights // eigenvalues of the sampled matrix, independent sample_weights
};

struct SpectralSample {
  MatrixMeasure measure;
  EnsembleSpec spec;
  std::optional<CanonicalChain> canonical;
};

HermitianMatrix sample_matrix(const EnsembleSpec& spec, Rng& rng);
SpectralSample spectral_sample(const EnsembleSpec& spec, SamplingRoute route = SamplingRoute::FullMatrix);
MatrixMeasure spectral_sample_measure(const EnsembleSpec& spec, Rng& rng,
                                      SamplingRoute route = SamplingRoute::FullMatrix);

std::string to_string(EnsembleKind k);
EnsembleKind ensemble_kind_from_string(const std::string& s);

}  // namespace canomat
