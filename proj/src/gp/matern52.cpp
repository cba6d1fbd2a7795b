#include "gp/matern52.hpp"

namespace pf2es::gp {

Matrix Matern52::gram(const Matrix& a, const Matrix& b) const {
  const Eigen::ArrayXd inv_l = lengthscales.array().inverse();
  const Matrix as = a * inv_l.matrix().asDiagonal();
  const Matrix bs = b * inv_l.matrix().asDiagonal();
  Matrix k(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < k.cols(); ++j)
    for (Eigen::Index i = 0; i < k.rows(); ++i) k(i, j) = value_at((as.row(i) - bs.row(j)).norm());
  return k;
}

}  // namespace pf2es::gp
