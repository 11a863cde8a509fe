#include "nlevel/coupling_matrix.hpp"

#include <cmath>
#include <string>

#include "nlevel/error.hpp"

namespace nlevel {

CouplingMatrix::CouplingMatrix(RealMatrix entries) : entries_(std::move(entries)) {
  const auto n = entries_.rows();
  if (n != entries_.cols()) {
    throw InvalidInput("coupling matrix must be square");
  }
  if (n < 2) {
    throw InvalidInput("coupling matrix needs at least two levels");
  }
  if (!entries_.allFinite()) {
    throw InvalidInput("coupling matrix has non-finite entries");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (entries_(i, i) != 0.0) {
      throw InvalidInput("coupling matrix diagonal must be zero (entry " +
                         std::to_string(i) + ")");
    }
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (entries_(i, j) != entries_(j, i)) {
        throw InvalidInput("coupling matrix must be symmetric");
      }
    }
  }
}

CouplingMatrix CouplingMatrix::equal_coupling(int n, double g) {
  if (n < 2) throw InvalidInput("equal coupling needs n >= 2");
  RealMatrix r = RealMatrix::Constant(n, n, g);
  r.diagonal().setZero();
  return CouplingMatrix(std::move(r));
}

double CouplingMatrix::max_row_sum() const {
  return entries_.cwiseAbs().rowwise().sum().maxCoeff();
}

std::optional<double> CouplingMatrix::equal_coupling_value(double rel_tol) const {
  const int n = size();
  const double first = entries_(0, 1);
  double largest = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) largest = std::max(largest, std::abs(entries_(i, j)));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(entries_(i, j) - first) > rel_tol * largest) return std::nullopt;
    }
  }
  return first;
}

}  // namespace nlevel
