#pragma once

#include <cstddef>
#include <vector>

namespace critwave {

/// Time-sampled diagnostics of one run. Every column has the same length.
struct EnergyTrace {
  std::vector<double> time;
  std::vector<double> energy;          ///< E(t)
  std::vector<double> higher_energy;   ///< E_1(t) = 1/2 (||grad u_t||^2 + ||Delta u||^2)
  std::vector<double> ut_l2sq;         ///< ||u_t||_2^2
  std::vector<double> dissipation;     ///< cumulative trapezoid of E ||u_t||^2
  std::vector<double> l10;             ///< ||u||_10 (0 when not computed)
  std::vector<double> l12;             ///< ||u||_12 (0 when not computed)
  std::vector<double> sm_defect;       ///< <(S_m - I) u^5, u_t>, zero for exact Galerkin runs
  std::vector<double> strichartz_5_10; ///< cumulative trapezoid of ||u||_10^5
  std::vector<double> strichartz_4_12; ///< cumulative trapezoid of ||u||_12^4

  struct Sample {
    double time, energy, higher_energy, ut_l2sq, l10, l12, sm_defect;
  };

  std::size_t size() const { return time.size(); }
  bool empty() const { return time.empty(); }

  /// Appends a sample and extends the cumulative integrals by one trapezoid panel.
  void append(const Sample& s);

  /// Times strictly increasing, entries finite, E >= 0. Throws std::invalid_argument otherwise.
  void validate() const;
};

}  // namespace critwave
