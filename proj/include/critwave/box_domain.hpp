#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace critwave {

/// Multi-index k = (k_1, ..., k_d) of a Dirichlet sine mode; entries are 1-based.
struct ModeIndex {
  std::array<int, 3> k{1, 1, 1};
  int dim = 1;

  ModeIndex() = default;
  ModeIndex(int k1) : k{k1, 1, 1}, dim(1) {}
  ModeIndex(int k1, int k2) : k{k1, k2, 1}, dim(2) {}
  ModeIndex(int k1, int k2, int k3) : k{k1, k2, k3}, dim(3) {}

  int operator[](int axis) const { return k[static_cast<std::size_t>(axis)]; }
  bool operator==(const ModeIndex&) const = default;
};

/// Rectangular box [0,L_1] x ... x [0,L_d] with homogeneous Dirichlet data.
///
/// The eigenbasis of -Delta is the tensor product of the 1D factors
/// sqrt(2/L) sin(k pi x / L), orthonormal in L^2, so every Parseval constant
/// is 1. Each axis carries the same number N of modes; coefficient storage is
/// row-major over (k_1 - 1, ..., k_d - 1) with the last axis fastest.
///
/// Transforms are delegated to FFTW's RODFT00 (DST-I), which accepts any
/// length; powers of two (and sizes where padding*N + 1 has small prime
/// factors) are the fast cases.
class BoxDomain {
 public:
  static constexpr int kMinModes = 4;

  BoxDomain(int dim, std::vector<double> lengths, int modes);

  /// Box with every edge equal to pi.
  static std::shared_ptr<const BoxDomain> make(int dim, int modes);
  static std::shared_ptr<const BoxDomain> make(int dim, std::vector<double> lengths, int modes);

  int dim() const { return dim_; }
  int modes() const { return modes_; }
  double length(int axis) const { return lengths_.at(static_cast<std::size_t>(axis)); }
  const std::vector<double>& lengths() const { return lengths_; }

  /// Number of stored coefficients, N^d.
  std::size_t size() const { return eigenvalues_.size(); }

  /// lambda_k^2 = sum_i (k_i pi / L_i)^2. Throws std::out_of_range for a bad index.
  double eigenvalue(const ModeIndex& k) const;
  double eigenvalue(std::size_t flat) const { return eigenvalues_[flat]; }
  std::span<const double> eigenvalues() const { return eigenvalues_; }

  double min_eigenvalue() const { return eigenvalues_.front(); }
  double max_eigenvalue() const { return max_eigenvalue_; }

  std::size_t flat_index(const ModeIndex& k) const;
  ModeIndex mode_index(std::size_t flat) const;

  bool operator==(const BoxDomain& other) const {
    return dim_ == other.dim_ && modes_ == other.modes_ && lengths_ == other.lengths_;
  }

 private:
  void check(const ModeIndex& k) const;

  int dim_;
  int modes_;
  std::vector<double> lengths_;
  std::vector<double> eigenvalues_;
  double max_eigenvalue_ = 0.0;
};

using DomainPtr = std::shared_ptr<const BoxDomain>;

}  // namespace critwave
