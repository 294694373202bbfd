// Small dense real matrices and Gaussian elimination, sized for systems of
// a few dozen unknowns at most.
#ifndef ROOTBEYOND_LINALG_HPP
#define ROOTBEYOND_LINALG_HPP

#include <vector>

#include "rootbeyond/common.hpp"

namespace rootbeyond {

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  std::vector<double> row(int i) const {
    return {data_.begin() + static_cast<long>(i) * cols_,
            data_.begin() + static_cast<long>(i + 1) * cols_};
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// Third-order array t(i,j,k) holding second derivatives d2 r_i / dx_j dx_k.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int m, double fill = 0.0)
      : m_(m), data_(static_cast<size_t>(m) * m * m, fill) {}

  int dim() const { return m_; }

  double& operator()(int i, int j, int k) {
    return data_[(static_cast<size_t>(i) * m_ + j) * m_ + k];
  }
  double operator()(int i, int j, int k) const {
    return data_[(static_cast<size_t>(i) * m_ + j) * m_ + k];
  }

 private:
  int m_ = 0;
  std::vector<double> data_;
};

// Solves A x = b by Gaussian elimination with partial pivoting.
// Throws SingularMatrix when a pivot falls below 1e-14 * max|A|.
std::vector<double> linear_solve(Matrix a, std::vector<double> b);

double norm2(const std::vector<double>& v);

}  // namespace rootbeyond

#endif
