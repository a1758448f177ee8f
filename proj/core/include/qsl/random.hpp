#pragma once

// Seeded, fully reproducible random generation. All draws are built from the
// raw mt19937_64 output so results do not depend on the standard library's
// distribution implementations.

#include <cstdint>
#include <random>

#include "qsl/matkern.hpp"

namespace qsl {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform();
  /// Standard normal via Box-Muller on explicit uniforms.
  double normal();
  /// Complex standard normal (real and imaginary parts N(0, 1/2) each,
  /// unit total variance).
  Complex cnormal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of the R diagonal fixed.
Matrix haar_unitary(int n, Rng& rng);

/// GUE-style random Hermitian matrix with entries of scale `scale`.
HermitianMatrix random_hermitian(int n, Rng& rng, double scale = 1.0);

/// Random anti-Hermitian matrix.
AntiHermitianMatrix random_antihermitian(int n, Rng& rng, double scale = 1.0);

}  // namespace qsl
