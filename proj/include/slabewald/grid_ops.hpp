#pragma once

#include <cstddef>
#include <vector>

#include "slabewald/fourier_cheb.hpp"

namespace slabewald {

// Truncated isotropic Gaussian: standard deviation `width`, zero where any
// coordinate offset exceeds `radius`.
struct GaussianKernel {
  double width = 1.0;
  double radius = 1.0;
};

struct PointSet {
  const double* x = nullptr;
  const double* y = nullptr;
  const double* z = nullptr;
  std::size_t n = 0;
};

// grid[node] += q_k * S(node - p_k). Bit-reproducible for any thread count:
// every node receives its contributions in point order.
void spread(const FourierChebGrid& g, const PointSet& pts, const double* q, const GaussianKernel& k, double* grid);

// out[f][k] = sum_nodes hx*hy*w_z * S(node - p_k) * fields[f][node].
void interpolate(const FourierChebGrid& g, const PointSet& pts, const std::vector<const double*>& fields,
                 const GaussianKernel& k, const std::vector<double*>& out);

}  // namespace slabewald
