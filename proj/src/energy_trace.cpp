#include "critwave/energy_trace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace critwave {

void EnergyTrace::append(const Sample& s) {
  double diss = 0.0, y5 = 0.0, y4 = 0.0;
  if (!time.empty()) {
    const std::size_t i = time.size() - 1;
    const double h = s.time - time[i];
    diss = dissipation[i] + 0.5 * h * (energy[i] * ut_l2sq[i] + s.energy * s.ut_l2sq);
    y5 = strichartz_5_10[i] + 0.5 * h * (std::pow(l10[i], 5) + std::pow(s.l10, 5));
    y4 = strichartz_4_12[i] + 0.5 * h * (std::pow(l12[i], 4) + std::pow(s.l12, 4));
  }
  time.push_back(s.time);
  energy.push_back(s.energy);
  higher_energy.push_back(s.higher_energy);
  ut_l2sq.push_back(s.ut_l2sq);
  dissipation.push_back(diss);
  l10.push_back(s.l10);
  l12.push_back(s.l12);
  sm_defect.push_back(s.sm_defect);
  strichartz_5_10.push_back(y5);
  strichartz_4_12.push_back(y4);
}

void EnergyTrace::validate() const {
  const std::size_t n = time.size();
  for (const auto* col : {&energy, &higher_energy, &ut_l2sq, &dissipation, &l10, &l12, &sm_defect,
                          &strichartz_5_10, &strichartz_4_12}) {
    if (col->size() != n) throw std::invalid_argument("EnergyTrace: ragged columns");
    for (double x : *col) {
      if (!std::isfinite(x)) throw std::invalid_argument("EnergyTrace: non-finite entry");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(time[i])) throw std::invalid_argument("EnergyTrace: non-finite time");
    if (i > 0 && !(time[i] > time[i - 1])) {
      throw std::invalid_argument("EnergyTrace: times not strictly increasing at sample " + std::to_string(i));
    }
    if (energy[i] < 0.0) throw std::invalid_argument("EnergyTrace: negative energy");
  }
}

}  // namespace critwave
