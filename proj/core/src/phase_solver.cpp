#include "phase_solver.hpp"

#include <cmath>
#include <cstdlib>
#include <utility>

namespace cartan::detail {
namespace {

double frac(double x) { return x - std::floor(x); }

// Distance from x to the nearest integer.
double dist_to_integer(double x) { return std::abs(x - std::round(x)); }

}  // namespace

std::optional<std::vector<double>> solve_mod_one(std::vector<std::vector<long long>> m,
                                                 std::vector<double> phi, double tolerance) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m.front().size() : 0;
  // theta = c * y, where c accumulates the column operations.
  std::vector<std::vector<long long>> c(cols, std::vector<long long>(cols, 0));
  for (std::size_t j = 0; j < cols; ++j) c[j][j] = 1;

  auto swap_rows = [&](std::size_t a, std::size_t b) {
    std::swap(m[a], m[b]);
    std::swap(phi[a], phi[b]);
  };
  auto swap_cols = [&](std::size_t a, std::size_t b) {
    for (auto& row : m) std::swap(row[a], row[b]);
    for (auto& row : c) std::swap(row[a], row[b]);
  };
  // row[i] -= q * row[t]
  auto row_sub = [&](std::size_t i, std::size_t t, long long q) {
    for (std::size_t j = 0; j < cols; ++j) m[i][j] -= q * m[t][j];
    phi[i] = frac(phi[i] - static_cast<double>(q) * phi[t]);
  };
  // col[j] -= q * col[t]
  auto col_sub = [&](std::size_t j, std::size_t t, long long q) {
    for (auto& row : m) row[j] -= q * row[t];
    for (auto& row : c) row[j] -= q * row[t];
  };

  for (auto& p : phi) p = frac(p);

  std::size_t rank = 0;
  for (std::size_t t = 0; t < rows && t < cols; ++t) {
    for (;;) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      long long best = 0;
      std::size_t bi = 0, bj = 0;
      for (std::size_t i = t; i < rows; ++i) {
        for (std::size_t j = t; j < cols; ++j) {
          long long v = std::llabs(m[i][j]);
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            bi = i;
            bj = j;
          }
        }
      }
      if (best == 0) break;
      swap_rows(t, bi);
      swap_cols(t, bj);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (m[i][t] == 0) continue;
        row_sub(i, t, m[i][t] / m[t][t]);
        if (m[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (m[t][j] == 0) continue;
        col_sub(j, t, m[t][j] / m[t][t]);
        if (m[t][j] != 0) clean = false;
      }
      if (clean) break;
    }
    if (m[t][t] == 0) break;
    if (m[t][t] < 0) {
      for (auto& v : m[t]) v = -v;
      phi[t] = frac(-phi[t]);
    }
    rank = t + 1;
  }

  for (std::size_t i = rank; i < rows; ++i) {
    if (dist_to_integer(phi[i]) > tolerance) return std::nullopt;
  }
  std::vector<double> y(cols, 0.0);
  for (std::size_t t = 0; t < rank; ++t) y[t] = phi[t] / static_cast<double>(m[t][t]);
  std::vector<double> theta(cols, 0.0);
  for (std::size_t i = 0; i < cols; ++i) {
    for (std::size_t j = 0; j < cols; ++j) theta[i] += static_cast<double>(c[i][j]) * y[j];
  }
  return theta;
}

}  // namespace cartan::detail
