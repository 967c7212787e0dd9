#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "sketchbench/types.hpp"

// Reference computations on plain nested vectors, independent of Eigen's solvers.
namespace sketchbench::oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense to_dense(const Matrix& m) {
  Dense out(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  }
  return out;
}

inline std::size_t cols(const Dense& a, std::size_t fallback = 0) { return a.empty() ? fallback : a[0].size(); }

inline Dense gram(const Dense& a, std::size_t d) {
  Dense g(d, std::vector<double>(d, 0.0));
  for (const auto& row : a) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) g[i][j] += row[i] * row[j];
    }
  }
  return g;
}

inline double frobenius_sq(const Dense& a) {
  double s = 0.0;
  for (const auto& row : a) {
    for (double v : row) s += v * v;
  }
  return s;
}

struct SymEig {
  std::vector<double> values;  // non-increasing
  Dense vectors;               // vectors[i] belongs to values[i]
};

// Cyclic Jacobi rotations until the off-diagonal mass vanishes.
inline SymEig jacobi_eigen(Dense s) {
  const std::size_t n = s.size();
  Dense v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        total += s[i][j] * s[i][j];
        if (i != j) off += s[i][j] * s[i][j];
      }
    }
    if (off <= 1e-32 * total || off == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (s[p][q] == 0.0) continue;
        const double theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = s[k][p], skq = s[k][q];
          s[k][p] = c * skp - sn * skq;
          s[k][q] = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = s[p][k], sqk = s[q][k];
          s[p][k] = c * spk - sn * sqk;
          s[q][k] = sn * spk + c * sqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - sn * vkq;
          v[k][q] = sn * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return s[a][a] > s[b][b]; });
  SymEig out;
  for (std::size_t i : order) {
    out.values.push_back(s[i][i]);
    std::vector<double> vec(n);
    for (std::size_t k = 0; k < n; ++k) vec[k] = v[k][i];
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

inline std::vector<double> singular_values(const Dense& a, std::size_t d) {
  std::vector<double> out;
  for (double l : jacobi_eigen(gram(a, d)).values) out.push_back(std::sqrt(std::max(l, 0.0)));
  return out;
}

inline double cov_err(const Dense& a, const Dense& b, std::size_t d) {
  Dense g = gram(a, d);
  const Dense h = gram(b, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) g[i][j] -= h[i][j];
  }
  double top = 0.0;
  for (double l : jacobi_eigen(g).values) top = std::max(top, std::abs(l));
  return top / frobenius_sq(a);
}

// ||A - A_k||_F^2 from the eigenvalues of A^T A.
inline double optimal_tail(const Dense& a, std::size_t d, std::size_t k) {
  const auto values = jacobi_eigen(gram(a, d)).values;
  double s = 0.0;
  for (std::size_t i = k; i < values.size(); ++i) s += std::max(values[i], 0.0);
  return s;
}

// Top-k right singular vectors of B, dropping directions below 1e-12 sigma_1.
// Directions with Gram eigenvalue below 1e-14 of the top one are dropped.
inline Dense top_right_vectors(const Dense& b, std::size_t d, std::size_t k) {
  const SymEig e = jacobi_eigen(gram(b, d));
  Dense out;
  if (e.values.empty() || e.values[0] <= 0.0) return out;
  for (std::size_t i = 0; i < e.values.size() && out.size() < k; ++i) {
    if (e.values[i] > 1e-14 * e.values[0]) out.push_back(e.vectors[i]);
  }
  return out;
}

// ||A - A V V^T||_F^2 / ||A - A_k||_F^2 with V from B.
inline double proj_err(const Dense& a, const Dense& b, std::size_t d, std::size_t k) {
  const Dense v = top_right_vectors(b, d, k);
  double resid = 0.0;
  for (const auto& row : a) {
    std::vector<double> r = row;
    for (const auto& vec : v) {
      double dot = 0.0;
      for (std::size_t j = 0; j < d; ++j) dot += row[j] * vec[j];
      for (std::size_t j = 0; j < d; ++j) r[j] -= dot * vec[j];
    }
    for (double x : r) resid += x * x;
  }
  return resid / optimal_tail(a, d, k);
}

}  // namespace sketchbench::oracle
