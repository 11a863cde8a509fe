#include "nlevel/expm.hpp"

#include <cmath>

#include "nlevel/error.hpp"

namespace nlevel {
namespace {

constexpr int kTaylorDegree = 12;
constexpr double kScaledNorm = 0.5;
constexpr double kMaxNorm = 1e6;

}  // namespace

ComplexMatrix reference_expm(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw InvalidInput("reference_expm needs a square matrix");
  if (!a.allFinite()) throw InvalidInput("reference_expm input has non-finite entries");
  const auto n = a.rows();
  const double norm1 = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm1 > kMaxNorm) throw NumericError("reference_expm: norm too large to scale safely");

  int squarings = 0;
  if (norm1 > kScaledNorm) squarings = static_cast<int>(std::ceil(std::log2(norm1 / kScaledNorm)));
  const ComplexMatrix scaled = a / std::ldexp(1.0, squarings);

  // Horner form of sum_{k<=12} B^k / k!.
  const ComplexMatrix identity = ComplexMatrix::Identity(n, n);
  ComplexMatrix result = identity;
  for (int k = kTaylorDegree; k >= 1; --k) {
    result = identity + (scaled * result) / static_cast<double>(k);
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

}  // namespace nlevel
