#pragma once

#include <string>
#include <vector>

#include "potcap/channels.hpp"
#include "potcap/linops.hpp"

namespace potcap {

/// -sum p log2 p over a spectrum, with the eigenvalue clipping rule applied.
double entropy_of_spectrum(const RealVector& eigenvalues);

/// Von Neumann entropy in bits of a raw (normalized) Hermitian matrix.
double entropy(const Matrix& rho);
double entropy(const DensityMatrix& rho);

double conditional_entropy(const DensityMatrix& rho, const std::vector<std::string>& a,
                           const std::vector<std::string>& b);
double mutual_information(const DensityMatrix& rho, const std::vector<std::string>& a,
                          const std::vector<std::string>& b);
double conditional_mutual_information(const DensityMatrix& rho,
                                      const std::vector<std::string>& a,
                                      const std::vector<std::string>& b,
                                      const std::vector<std::string>& c);

/// S(B) - S(E) of the Stinespring output U rho U^dagger.
double coherent_information(const KrausChannel& ch, const Matrix& rho);
double coherent_information(const KrausChannel& ch, const DensityMatrix& rho);

/// Weighted entropy H(X) = tr(X) S(X / tr X) of an unnormalized PSD X, with
/// gradient dH = Re tr(G dX), G = -(log2 X - log2(tr X) 1). H is concave and
/// positively homogeneous, which is what makes ensemble objectives tractable.
struct WeightedEntropy {
  double value = 0.0;
  Matrix gradient;
};

WeightedEntropy weighted_entropy(const Matrix& x, bool with_gradient = true);

/// Gradient of S(rho) for normalized rho: -(log2 rho + 1/ln 2).
WeightedEntropy entropy_with_gradient(const Matrix& rho);

}  // namespace potcap
