#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace slabewald::cheb {

// Extrema nodes s_j = cos(pi j / (n-1)), j = 0..n-1 (descending from +1 to -1).
std::vector<double> nodes(int n);
// Nodes mapped to [z0, z1]; index 0 is z1.
std::vector<double> nodes(int n, double z0, double z1);
// Clenshaw-Curtis weights on the mapped nodes.
std::vector<double> cc_weights(int n, double z0, double z1);

// Series convention: f(s) = sum_{k=0}^{n-1} c_k T_k(s), no halving of c_0.
// Direct O(n^2) transforms, used for small problems and as a test reference.
std::vector<double> values_to_coeffs(const std::vector<double>& v);
std::vector<double> coeffs_to_values(const std::vector<double>& c);

// Coefficients of d/ds. d may alias neither c.
template <class T>
void differentiate(const T* c, T* d, int n);

// Clenshaw evaluation at s in [-1, 1].
template <class T>
T evaluate(const T* c, int n, double s);

template <class T>
inline T sum_at_plus_one(const T* c, int n) {
  T s{};
  for (int k = 0; k < n; ++k) s += c[k];
  return s;
}
template <class T>
inline T sum_at_minus_one(const T* c, int n) {
  T s{};
  for (int k = 0; k < n; ++k) s += (k % 2 ? -c[k] : c[k]);
  return s;
}

// Boundary row p*y + q*y_s at one endpoint.
struct BoundaryRow {
  double p = 1.0;
  double q = 0.0;
};

// Solves y_ss - kappa^2 y = f on s in [-1, 1] in Chebyshev coefficient space,
// with top row at s=+1 equal to alpha and bottom row at s=-1 equal to beta.
// The unknowns are the coefficients of y_ss plus y_0 and y'_0; the banded
// part splits into two tridiagonal systems (even and odd index) and the two
// boundary rows are closed with a 2x2 Schur complement. For kappa^2 > 1e14 a
// dense LU of the full system is used instead.
class BvpOperator {
 public:
  BvpOperator() = default;
  BvpOperator(int n, double kappa, BoundaryRow top, BoundaryRow bottom);

  // Robin y_s + kappa y = 0 at +1 and y_s - kappa y = 0 at -1 (decay outside).
  // For kappa == 0 homogeneous Dirichlet rows are used instead.
  static BvpOperator dtn(int n, double kappa);

  int size() const { return n_; }
  double kappa() const { return kappa_; }
  bool dense() const { return dense_; }

  template <class T>
  void solve(const T* f, T alpha, T beta, T* y) const;

 private:
  int n_ = 0;
  double kappa_ = 0.0;
  double k2_ = 0.0;
  BoundaryRow top_, bottom_;
  bool dense_ = false;
  // Tridiagonal factors, stored per global index (parity handled by stride 2).
  std::vector<double> sub_, inv_diag_, sup_;
  std::vector<double> x0_, x1_;  // A^{-1} B columns
  std::vector<double> c_top_, c_bot_;
  double s_inv_[4] = {0, 0, 0, 0};
  double d_[4] = {0, 0, 0, 0};
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;  // dense fallback

  void factor_banded();
  void factor_dense();
  template <class T>
  void apply_ainv(T* w) const;
  template <class T>
  void reconstruct(const T* u, T c0, T d0, T* y) const;
};

}  // namespace slabewald::cheb
