#pragma once

// Reference computations on plain loops, independent of the library code.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracles {

using Mat = std::vector<std::vector<double>>;

// Cyclic Jacobi rotations on a dense symmetric matrix; returns eigenpairs sorted descending.
inline void jacobi_eigen(Mat a, std::vector<double>& values, Mat& vectors) {
  const std::size_t n = a.size();
  vectors.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) vectors[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = vectors[k][p], vkq = vectors[k][q];
          vectors[k][p] = c * vkp - s * vkq;
          vectors[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return a[i][i] > a[j][j]; });
  values.clear();
  Mat sorted(n, std::vector<double>(n));
  for (std::size_t c = 0; c < n; ++c) {
    values.push_back(a[idx[c]][idx[c]]);
    for (std::size_t r = 0; r < n; ++r) sorted[r][c] = vectors[r][idx[c]];
  }
  vectors = sorted;
}

struct Oracle {
  std::vector<double> eigenvalues;
  Mat scores;  // N x n
};

// Builds W^1/2 C^T C W^1/2 / (N-1) by explicit loops and scores wells against W^-1/2 u.
inline Oracle oracle_fpca(const Eigen::MatrixXd& block) {
  const std::size_t N = static_cast<std::size_t>(block.rows()), n = static_cast<std::size_t>(block.cols());
  std::vector<double> w(n, 1.0 / static_cast<double>(n - 1));
  w.front() *= 0.5;
  w.back() *= 0.5;
  std::vector<double> mean(n, 0.0);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t t = 0; t < n; ++t) mean[t] += block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) / static_cast<double>(N);
  Mat c(N, std::vector<double>(n));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t t = 0; t < n; ++t) c[i][t] = block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) - mean[t];
  Mat op(n, std::vector<double>(n, 0.0));
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t = 0; t < n; ++t) {
      double acc = 0.0;
      for (std::size_t i = 0; i < N; ++i) acc += c[i][s] * c[i][t];
      op[s][t] = std::sqrt(w[s]) * acc * std::sqrt(w[t]) / static_cast<double>(N - 1);
    }
  Oracle o;
  Mat u;
  jacobi_eigen(op, o.eigenvalues, u);
  o.scores.assign(N, std::vector<double>(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> phi(n);
    std::size_t arg = 0;
    for (std::size_t t = 0; t < n; ++t) {
      phi[t] = u[t][k] / std::sqrt(w[t]);
      if (std::abs(phi[t]) > std::abs(phi[arg])) arg = t;
    }
    const double sign = phi[arg] < 0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < N; ++i) {
      double acc = 0.0;
      for (std::size_t t = 0; t < n; ++t) acc += w[t] * c[i][t] * phi[t];
      o.scores[i][k] = sign * acc;
    }
  }
  return o;
}

// Gaussian elimination with partial pivoting on an explicit dense system.
inline std::vector<double> gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= a[i][k] * x[k];
    x[i] = acc / a[i][i];
  }
  return x;
}


}  // namespace oracles
