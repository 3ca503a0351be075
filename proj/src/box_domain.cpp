#include "critwave/box_domain.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace critwave {

BoxDomain::BoxDomain(int dim, std::vector<double> lengths, int modes)
    : dim_(dim), modes_(modes), lengths_(std::move(lengths)) {
  if (dim_ < 1 || dim_ > 3) {
    throw std::invalid_argument("BoxDomain: dimension must be 1, 2 or 3, got " + std::to_string(dim_));
  }
  if (modes_ < kMinModes) {
    throw std::invalid_argument("BoxDomain: need at least 4 modes per axis, got " + std::to_string(modes_));
  }
  if (lengths_.size() == 1 && dim_ > 1) {
    lengths_.assign(static_cast<std::size_t>(dim_), lengths_.front());
  }
  if (lengths_.size() != static_cast<std::size_t>(dim_)) {
    throw std::invalid_argument("BoxDomain: expected one edge length per axis");
  }
  for (double l : lengths_) {
    if (!(l > 0.0)) throw std::invalid_argument("BoxDomain: edge lengths must be positive");
  }

  std::size_t total = 1;
  for (int i = 0; i < dim_; ++i) total *= static_cast<std::size_t>(modes_);
  eigenvalues_.resize(total);
  for (std::size_t f = 0; f < total; ++f) {
    const ModeIndex k = mode_index(f);
    double sum = 0.0;
    for (int i = 0; i < dim_; ++i) {
      const double w = k[i] * std::numbers::pi / lengths_[static_cast<std::size_t>(i)];
      sum += w * w;
    }
    eigenvalues_[f] = sum;
  }
  max_eigenvalue_ = *std::max_element(eigenvalues_.begin(), eigenvalues_.end());
}

std::shared_ptr<const BoxDomain> BoxDomain::make(int dim, int modes) {
  return std::make_shared<const BoxDomain>(dim, std::vector<double>{std::numbers::pi}, modes);
}

std::shared_ptr<const BoxDomain> BoxDomain::make(int dim, std::vector<double> lengths, int modes) {
  return std::make_shared<const BoxDomain>(dim, std::move(lengths), modes);
}

void BoxDomain::check(const ModeIndex& k) const {
  if (k.dim != dim_) throw std::out_of_range("ModeIndex dimension does not match the domain");
  for (int i = 0; i < dim_; ++i) {
    if (k[i] < 1 || k[i] > modes_) {
      throw std::out_of_range("ModeIndex entry " + std::to_string(k[i]) + " outside [1, " +
                              std::to_string(modes_) + "]");
    }
  }
}

double BoxDomain::eigenvalue(const ModeIndex& k) const {
  check(k);
  return eigenvalues_[flat_index(k)];
}

std::size_t BoxDomain::flat_index(const ModeIndex& k) const {
  check(k);
  std::size_t f = 0;
  for (int i = 0; i < dim_; ++i) {
    f = f * static_cast<std::size_t>(modes_) + static_cast<std::size_t>(k[i] - 1);
  }
  return f;
}

ModeIndex BoxDomain::mode_index(std::size_t flat) const {
  ModeIndex k;
  k.dim = dim_;
  const auto n = static_cast<std::size_t>(modes_);
  for (int i = dim_ - 1; i >= 0; --i) {
    k.k[static_cast<std::size_t>(i)] = static_cast<int>(flat % n) + 1;
    flat /= n;
  }
  return k;
}

}  // namespace critwave
