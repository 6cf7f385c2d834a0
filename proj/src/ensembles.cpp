#include "canomat/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "canomat/moment_chain.hpp"

namespace canomat {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
  splitmix64(s);
  return splitmix64(s);
}

double Rng::uniform() { return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double r = std::sqrt(-2.0 * std::log(uniform()));
  double t = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(t);
  has_spare_ = true;
  return r * std::cos(t);
}

cplx Rng::complex_normal() {
  double re = normal(), im = normal();
  return cplx(re, im) * std::sqrt(0.5);
}

namespace {

CMatrix ginibre(int rows, int cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  return g;
}

}  // namespace

HermitianMatrix sample_gue(int N, Rng& rng) {
  if (N < 1) throw std::invalid_argument("sample_gue: N must be >= 1");
  CMatrix x(N, N);
  for (int i = 0; i < N; ++i) {
    x(i, i) = rng.normal();
    for (int j = i + 1; j < N; ++j) {
      x(i, j) = rng.complex_normal();
      x(j, i) = std::conj(x(i, j));
    }
  }
  return HermitianMatrix(x);
}

HermitianMatrix sample_lue(int N, int a, Rng& rng) {
  if (N < 1) throw std::invalid_argument("sample_lue: N must be >= 1");
  if (a < 0) throw std::invalid_argument("sample_lue: a must be >= 0");
  CMatrix g = ginibre(N, N + a, rng);
  return HermitianMatrix(g * g.adjoint());
}

HermitianMatrix sample_jue(int N, int a, int b, Rng& rng) {
  auto l1 = sample_lue(N, a, rng);
  auto l2 = sample_lue(N, b, rng);
  CMatrix s = pd_inv_sqrt(l1 + l2).mat();
  return HermitianMatrix(s * l1.mat() * s);
}

std::vector<HermitianMatrix> sample_weights(int N, int p, Rng& rng) {
  if (p < 1 || N < p) throw std::invalid_argument("sample_weights: need N >= p >= 1");
  CMatrix z = ginibre(p, N, rng);
  CMatrix his = pd_inv_sqrt(HermitianMatrix(z * z.adjoint())).mat();
  std::vector<HermitianMatrix> w;
  for (int j = 0; j < N; ++j) {
    CVector y = his * z.col(j);
    w.emplace_back(y * y.adjoint());
  }
  return w;
}

HermitianMatrix sample_gue(int N, std::uint64_t seed) {
  Rng r(seed);
  return sample_gue(N, r);
}
HermitianMatrix sample_lue(int N, int a, std::uint64_t seed) {
  Rng r(seed);
  return sample_lue(N, a, r);
}
HermitianMatrix sample_jue(int N, int a, int b, std::uint64_t seed) {
  Rng r(seed);
  return sample_jue(N, a, b, r);
}
std::vector<HermitianMatrix> sample_weights(int N, int p, std::uint64_t seed) {
  Rng r(seed);
  return sample_weights(N, p, r);
}

HermitianMatrix sample_matrix(const EnsembleSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case EnsembleKind::GUE: return sample_gue(spec.N, rng);
    case EnsembleKind::LUE: return sample_lue(spec.N, spec.a, rng);
    case EnsembleKind::JUE: return sample_jue(spec.N, spec.a, spec.b, rng);
  }
  throw std::invalid_argument("sample_matrix: unknown kind");
}

MatrixMeasure spectral_sample_measure(const EnsembleSpec& spec, Rng& rng, SamplingRoute route) {
  if (spec.p < 1 || spec.N < spec.p || spec.N % spec.p != 0)
    throw std::invalid_argument("spectral_sample: p must divide N");
  auto x = sample_matrix(spec, rng);
  if (route == SamplingRoute::FullMatrix) return spectral_measure(x, spec.p);
  auto lam = eigenvalues(x);
  auto w = sample_weights(spec.N, spec.p, rng);
  std::vector<Atom> atoms;
  for (int j = 0; j < spec.N; ++j) atoms.push_back({lam(j), w[j]});
  return MatrixMeasure(spec.p, std::move(atoms));
}

SpectralSample spectral_sample(const EnsembleSpec& spec, SamplingRoute route) {
  Rng rng(spec.seed);
  auto m = spectral_sample_measure(spec, rng, route);
  std::optional<CanonicalChain> canon;
  if (spec.kind == EnsembleKind::JUE) canon = canonical_from_recursion(gram_schmidt(m, spec.N / spec.p));
  return {std::move(m), spec, std::move(canon)};
}

std::string to_string(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::GUE: return "gue";
    case EnsembleKind::LUE: return "lue";
    case EnsembleKind::JUE: return "jue";
  }
  return "?";
}

EnsembleKind ensemble_kind_from_string(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "gue") return EnsembleKind::GUE;
  if (l == "lue") return EnsembleKind::LUE;
  if (l == "jue") return EnsembleKind::JUE;
  throw std::invalid_argument("unknown ensemble kind: " + s);
}

}  // namespace canomat
