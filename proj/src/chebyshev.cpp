#include "slabewald/chebyshev.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace slabewald::cheb {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

std::vector<double> nodes(int n) {
  if (n < 2) throw std::invalid_argument("chebyshev grid needs at least 2 nodes");
  std::vector<double> s(n);
  for (int j = 0; j < n; ++j) s[j] = std::cos(kPi * j / (n - 1));
  // exact symmetry and endpoints
  for (int j = 0; j < n / 2; ++j) {
    double a = 0.5 * (s[j] - s[n - 1 - j]);
    s[j] = a;
    s[n - 1 - j] = -a;
  }
  if (n % 2) s[n / 2] = 0.0;
  return s;
}

std::vector<double> nodes(int n, double z0, double z1) {
  auto s = nodes(n);
  double a = 0.5 * (z1 - z0);
  for (auto& v : s) v = z0 + a * (v + 1.0);
  s.front() = z1;
  s.back() = z0;
  return s;
}

std::vector<double> cc_weights(int n, double z0, double z1) {
  if (n < 2) throw std::invalid_argument("chebyshev grid needs at least 2 nodes");
  const int N = n - 1;
  std::vector<double> w(n);
  for (int j = 0; j <= N; ++j) {
    double theta = kPi * j / N;
    double sum = 0.0;
    for (int k = 1; k <= N / 2; ++k) {
      double b = (2 * k == N) ? 1.0 : 2.0;
      sum += b * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    }
    double c = (j == 0 || j == N) ? 1.0 : 2.0;
    w[j] = c / N * (1.0 - sum) * 0.5 * (z1 - z0);
  }
  return w;
}

std::vector<double> values_to_coeffs(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  const int N = n - 1;
  std::vector<double> c(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      double f = (j == 0 || j == N) ? 0.5 : 1.0;
      s += f * v[j] * std::cos(kPi * double(j) * k / N);
    }
    c[k] = 2.0 * s / N;
  }
  c[0] *= 0.5;
  c[N] *= 0.5;
  return c;
}

std::vector<double> coeffs_to_values(const std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  auto s = nodes(n);
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) v[j] = evaluate(c.data(), n, s[j]);
  return v;
}

template <class T>
void differentiate(const T* c, T* d, int n) {
  if (n == 1) {
    d[0] = T{};
    return;
  }
  d[n - 1] = T{};
  d[n - 2] = 2.0 * (n - 1) * c[n - 1];
  for (int k = n - 3; k >= 0; --k) d[k] = d[k + 2] + 2.0 * (k + 1) * c[k + 1];
  d[0] *= 0.5;
}

template <class T>
T evaluate(const T* c, int n, double s) {
  T b1{}, b2{};
  for (int k = n - 1; k >= 1; --k) {
    T b0 = c[k] + 2.0 * s * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return c[0] + s * b1 - b2;
}

template void differentiate<double>(const double*, double*, int);
template void differentiate<cplx>(const cplx*, cplx*, int);
template double evaluate<double>(const double*, int, double);
template cplx evaluate<cplx>(const cplx*, int, double);

// ---------------------------------------------------------------------------

namespace {

// Coefficients of y_n on u_{n-2}, u_n, u_{n+2} (n >= 2) where u are the
// coefficients of y_ss, with y'_m = 0 and u_m = 0 for m >= n_total.
struct Band {
  double lo, mid, hi;
};

Band y_band(int n, int N) {
  Band b{0, 0, 0};
  if (n == 1) {
    if (N >= 3) b.mid = -0.125;
    if (N >= 4) b.hi = 0.125;
    return b;
  }
  double cm2 = (n - 2 == 0) ? 2.0 : 1.0;
  b.lo = cm2 / (4.0 * n * (n - 1));
  b.mid = -1.0 / (4.0 * n * (n - 1));
  if (n + 1 <= N - 1) b.mid -= 1.0 / (4.0 * n * (n + 1));
  if (n + 2 <= N - 1) b.hi = 1.0 / (4.0 * n * (n + 1));
  return b;
}

}  // namespace

BvpOperator::BvpOperator(int n, double kappa, BoundaryRow top, BoundaryRow bottom)
    : n_(n), kappa_(kappa), k2_(kappa * kappa), top_(top), bottom_(bottom) {
  if (n < 2) throw std::invalid_argument("bvp needs at least 2 coefficients");
  dense_ = k2_ > 1e14;

  // Boundary rows acting on u; these do not depend on kappa.
  std::vector<double> ysum(n, 0.0), yalt(n, 0.0), ypsum(n, 0.0), ypalt(n, 0.0);
  for (int m = 1; m < n; ++m) {
    // y'_m on u_{m-1}, u_{m+1}
    double cm1 = (m - 1 == 0) ? 2.0 : 1.0;
    double sgn = (m % 2) ? -1.0 : 1.0;
    ypsum[m - 1] += cm1 / (2.0 * m);
    ypalt[m - 1] += sgn * cm1 / (2.0 * m);
    if (m + 1 <= n - 1) {
      ypsum[m + 1] -= 1.0 / (2.0 * m);
      ypalt[m + 1] -= sgn / (2.0 * m);
    }
    Band b = y_band(m, n);
    auto add = [&](int idx, double v) {
      if (idx < 0 || idx >= n || v == 0.0) return;
      ysum[idx] += v;
      yalt[idx] += sgn * v;
    };
    if (m == 1) {
      add(1, b.mid);
      add(3, b.hi);
    } else {
      add(m - 2, b.lo);
      add(m, b.mid);
      add(m + 2, b.hi);
    }
  }
  c_top_.resize(n);
  c_bot_.resize(n);
  for (int m = 0; m < n; ++m) {
    c_top_[m] = top_.p * ysum[m] + top_.q * ypsum[m];
    c_bot_[m] = bottom_.p * yalt[m] + bottom_.q * ypalt[m];
  }
  // columns: c0 = y_0, d0 = y'_0
  d_[0] = top_.p;
  d_[1] = top_.p + top_.q;
  d_[2] = bottom_.p;
  d_[3] = -bottom_.p + bottom_.q;

  if (dense_)
    factor_dense();
  else
    factor_banded();
}

BvpOperator BvpOperator::dtn(int n, double kappa) {
  if (kappa > 0.0) return BvpOperator(n, kappa, {kappa, 1.0}, {-kappa, 1.0});
  return BvpOperator(n, 0.0, {1.0, 0.0}, {1.0, 0.0});
}

void BvpOperator::factor_banded() {
  const int n = n_;
  sub_.assign(n, 0.0);
  inv_diag_.assign(n, 0.0);
  sup_.assign(n, 0.0);
  for (int p = 0; p < 2 && p < n; ++p) {
    double cprev = 0.0;
    for (int m = p; m < n; m += 2) {
      double a = 0.0, d = 1.0, c = 0.0;
      if (m >= 1) {
        Band b = y_band(m, n);
        if (m >= 2) a = -k2_ * b.lo;
        d = 1.0 - k2_ * b.mid;
        c = -k2_ * b.hi;
      }
      double piv = d - a * cprev;
      sub_[m] = a;
      inv_diag_[m] = 1.0 / piv;
      sup_[m] = c / piv;
      cprev = sup_[m];
    }
  }
  x0_.assign(n, 0.0);
  x1_.assign(n, 0.0);
  x0_[0] = -k2_;
  if (n > 1) x1_[1] = -k2_;
  apply_ainv(x0_.data());
  apply_ainv(x1_.data());
  double s[4];
  s[0] = d_[0];
  s[1] = d_[1];
  s[2] = d_[2];
  s[3] = d_[3];
  for (int m = 0; m < n; ++m) {
    s[0] -= c_top_[m] * x0_[m];
    s[1] -= c_top_[m] * x1_[m];
    s[2] -= c_bot_[m] * x0_[m];
    s[3] -= c_bot_[m] * x1_[m];
  }
  double det = s[0] * s[3] - s[1] * s[2];
  if (det == 0.0 || !std::isfinite(det)) throw std::runtime_error("singular boundary value problem");
  s_inv_[0] = s[3] / det;
  s_inv_[1] = -s[1] / det;
  s_inv_[2] = -s[2] / det;
  s_inv_[3] = s[0] / det;
}

void BvpOperator::factor_dense() {
  const int n = n_;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 2, n + 2);
  for (int m = 0; m < n; ++m) {
    M(m, m) = 1.0;
    if (m >= 1) {
      Band b = y_band(m, n);
      M(m, m) -= k2_ * b.mid;
      if (m == 1) {
        if (n > 3) M(1, 3) -= k2_ * b.hi;
      } else {
        M(m, m - 2) -= k2_ * b.lo;
        if (m + 2 < n) M(m, m + 2) -= k2_ * b.hi;
      }
    }
  }
  M(0, n) = -k2_;
  M(1, n + 1) = -k2_;
  for (int m = 0; m < n; ++m) {
    M(n, m) = c_top_[m];
    M(n + 1, m) = c_bot_[m];
  }
  M(n, n) = d_[0];
  M(n, n + 1) = d_[1];
  M(n + 1, n) = d_[2];
  M(n + 1, n + 1) = d_[3];
  lu_.compute(M);
}

template <class T>
void BvpOperator::apply_ainv(T* w) const {
  const int n = n_;
  for (int p = 0; p < 2 && p < n; ++p) {
    T prev{};
    for (int m = p; m < n; m += 2) {
      w[m] = (w[m] - sub_[m] * prev) * inv_diag_[m];
      prev = w[m];
    }
    int last = p + 2 * ((n - 1 - p) / 2);
    for (int m = last - 2; m >= p; m -= 2) w[m] -= sup_[m] * w[m + 2];
  }
}

template <class T>
void BvpOperator::reconstruct(const T* u, T c0, T d0, T* y) const {
  const int n = n_;
  std::vector<T> yp(n + 1, T{});
  yp[0] = d0;
  for (int m = 1; m < n; ++m) {
    double cm1 = (m - 1 == 0) ? 2.0 : 1.0;
    T up = (m + 1 < n) ? u[m + 1] : T{};
    yp[m] = (cm1 * u[m - 1] - up) / (2.0 * m);
  }
  y[0] = c0;
  for (int m = 1; m < n; ++m) {
    double cm1 = (m - 1 == 0) ? 2.0 : 1.0;
    T ypn = (m + 1 < n) ? yp[m + 1] : T{};
    y[m] = (cm1 * yp[m - 1] - ypn) / (2.0 * m);
  }
}

template <class T>
void BvpOperator::solve(const T* f, T alpha, T beta, T* y) const {
  const int n = n_;
  std::vector<T> u(f, f + n);
  T c0, d0;
  if (dense_) {
    auto run = [&](auto part) {
      Eigen::VectorXd rhs(n + 2);
      for (int m = 0; m < n; ++m) rhs(m) = part(f[m]);
      rhs(n) = part(alpha);
      rhs(n + 1) = part(beta);
      return Eigen::VectorXd(lu_.solve(rhs));
    };
    if constexpr (std::is_same_v<T, double>) {
      Eigen::VectorXd x = run([](double v) { return v; });
      for (int m = 0; m < n; ++m) u[m] = x(m);
      c0 = x(n);
      d0 = x(n + 1);
    } else {
      Eigen::VectorXd xr = run([](const T& v) { return v.real(); });
      Eigen::VectorXd xi = run([](const T& v) { return v.imag(); });
      for (int m = 0; m < n; ++m) u[m] = T(xr(m), xi(m));
      c0 = T(xr(n), xi(n));
      d0 = T(xr(n + 1), xi(n + 1));
    }
  } else {
    apply_ainv(u.data());
    T r0 = alpha, r1 = beta;
    for (int m = 0; m < n; ++m) {
      r0 -= c_top_[m] * u[m];
      r1 -= c_bot_[m] * u[m];
    }
    c0 = s_inv_[0] * r0 + s_inv_[1] * r1;
    d0 = s_inv_[2] * r0 + s_inv_[3] * r1;
    for (int m = 0; m < n; ++m) u[m] -= x0_[m] * c0 + x1_[m] * d0;
  }
  reconstruct(u.data(), c0, d0, y);
}

template void BvpOperator::solve<double>(const double*, double, double, double*) const;
template void BvpOperator::solve<cplx>(const cplx*, cplx, cplx, cplx*) const;

}  // namespace slabewald::cheb
