#include "cartan/cartan_pair.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cartan/error.hpp"

namespace cartan {

CartanPairModel::CartanPairModel(std::vector<std::size_t> block_sizes,
                                 std::vector<std::vector<std::size_t>> projections,
                                 const std::vector<ComplexMatrix>& generators)
    : block_sizes_(std::move(block_sizes)), projections_(std::move(projections)) {
  for (std::size_t b = 0; b < block_sizes_.size(); ++b) {
    if (block_sizes_[b] == 0) throw Error("cartan pair: block " + std::to_string(b) + " is empty", "/blocks/" + std::to_string(b));
    offsets_.push_back(dimension_);
    dimension_ += block_sizes_[b];
  }
  if (dimension_ == 0) throw Error("cartan pair: no blocks", "/blocks");

  point_of_.assign(dimension_, projections_.size());
  for (std::size_t x = 0; x < projections_.size(); ++x) {
    auto& p = projections_[x];
    std::sort(p.begin(), p.end());
    const std::string where = "/diagonal/" + std::to_string(x);
    if (p.empty()) throw Error("cartan pair: empty projection", where);
    for (std::size_t i : p) {
      if (i >= dimension_) throw Error("cartan pair: projection index out of range", where);
      if (point_of_[i] != projections_.size()) throw Error("cartan pair: projections overlap", where);
      if (block_of(i) != block_of(p.front())) throw Error("cartan pair: projection crosses blocks", where);
      point_of_[i] = x;
    }
  }
  for (std::size_t i = 0; i < dimension_; ++i) {
    if (point_of_[i] == projections_.size()) throw Error("cartan pair: projections do not sum to the identity", "/diagonal");
  }

  const auto n = static_cast<Eigen::Index>(dimension_);
  span_ = OrthonormalSpan(dimension_ * dimension_);
  auto add = [&](const ComplexMatrix& m) {
    if (span_.add(vectorize(m))) basis_.push_back(unvectorize(span_.basis().back(), n, n));
  };

  if (generators.empty()) {
    // Full block algebra: the matrix units of every block.
    for (std::size_t b = 0; b < block_sizes_.size(); ++b) {
      for (std::size_t j = 0; j < block_sizes_[b]; ++j) {
        for (std::size_t i = 0; i < block_sizes_[b]; ++i) {
          ComplexMatrix e = ComplexMatrix::Zero(n, n);
          e(static_cast<Eigen::Index>(offsets_[b] + i), static_cast<Eigen::Index>(offsets_[b] + j)) = 1.0;
          add(e);
        }
      }
    }
    for (std::size_t x = 0; x < projections_.size(); ++x) {
      if (!contains(projection(x))) throw Error("cartan pair: projection outside the algebra");
    }
    return;
  }

  for (std::size_t k = 0; k < generators.size(); ++k) {
    const auto& g = generators[k];
    const std::string where = "/generators/" + std::to_string(k);
    if (g.rows() != n || g.cols() != n) throw Error("cartan pair: generator has the wrong size", where);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        if (g(i, j) != Complex(0.0) && block_of(static_cast<std::size_t>(i)) != block_of(static_cast<std::size_t>(j))) {
          throw Error("cartan pair: generator is not block diagonal", where);
        }
      }
    }
  }
  for (std::size_t x = 0; x < projections_.size(); ++x) add(projection(x));
  for (const auto& g : generators) {
    add(g);
    add(g.adjoint());
  }
  // Close the span under products and adjoints.
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const ComplexMatrix bi = basis_[i];
    add(bi.adjoint());
    for (std::size_t j = 0; j <= i; ++j) {
      const ComplexMatrix bj = basis_[j];
      add(bi * bj);
      add(bj * bi);
    }
  }
}

CartanPairModel CartanPairModel::full(std::vector<std::size_t> block_sizes) {
  std::size_t total = 0;
  for (auto s : block_sizes) total += s;
  return CartanPairModel(std::move(block_sizes), standard_projections(total), {});
}

std::vector<std::vector<std::size_t>> CartanPairModel::standard_projections(std::size_t dimension) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < dimension; ++i) out.push_back({i});
  return out;
}

std::vector<std::vector<std::size_t>> CartanPairModel::block_scalar_projections(const std::vector<std::size_t>& block_sizes) {
  std::vector<std::vector<std::size_t>> out;
  std::size_t offset = 0;
  for (auto s : block_sizes) {
    std::vector<std::size_t> p;
    for (std::size_t i = 0; i < s; ++i) p.push_back(offset + i);
    out.push_back(std::move(p));
    offset += s;
  }
  return out;
}

std::size_t CartanPairModel::block_of(std::size_t position) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), position);
  return static_cast<std::size_t>(it - offsets_.begin()) - 1;
}

ComplexMatrix CartanPairModel::projection(std::size_t x) const {
  const auto n = static_cast<Eigen::Index>(dimension_);
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  for (std::size_t i : projections_.at(x)) p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  return p;
}

bool CartanPairModel::contains(const ComplexMatrix& m, double tolerance) const {
  const auto n = static_cast<Eigen::Index>(dimension_);
  if (m.rows() != n || m.cols() != n) return false;
  return span_.residual(vectorize(m)) <= tolerance * std::max(1.0, m.norm());
}

std::optional<std::vector<Complex>> CartanPairModel::diagonal_coefficients(const ComplexMatrix& m, double tolerance) const {
  const auto n = static_cast<Eigen::Index>(dimension_);
  if (m.rows() != n || m.cols() != n) return std::nullopt;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j && std::abs(m(i, j)) > tolerance * scale) return std::nullopt;
    }
  }
  std::vector<Complex> b;
  for (const auto& p : projections_) {
    const Complex v = m(static_cast<Eigen::Index>(p.front()), static_cast<Eigen::Index>(p.front()));
    for (std::size_t i : p) {
      if (std::abs(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) - v) > tolerance * scale) return std::nullopt;
    }
    b.push_back(v);
  }
  return b;
}

ComplexMatrix CartanPairModel::from_diagonal(const std::vector<Complex>& b) const {
  if (b.size() != projections_.size()) throw Error("cartan pair: diagonal coefficient count mismatch");
  const auto n = static_cast<Eigen::Index>(dimension_);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (std::size_t x = 0; x < projections_.size(); ++x) {
    for (std::size_t i : projections_[x]) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = b[x];
  }
  return m;
}

std::vector<Complex> CartanPairModel::expectation_values(const ComplexMatrix& m) const {
  std::vector<Complex> out;
  for (const auto& p : projections_) {
    Complex t = 0.0;
    for (std::size_t i : p) t += m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i));
    out.push_back(t / static_cast<double>(p.size()));
  }
  return out;
}

}  // namespace cartan
