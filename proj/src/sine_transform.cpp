#include "sine_transform.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace critwave::detail {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int dim, int points) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(dim, points);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(points);
    std::vector<double> scratch(total);
    std::vector<int> n(static_cast<std::size_t>(dim), points);
    std::vector<fftw_r2r_kind> kinds(static_cast<std::size_t>(dim), FFTW_RODFT00);
    // ESTIMATE keeps plan selection deterministic, UNALIGNED lets any
    // std::vector buffer be passed to fftw_execute_r2r.
    fftw_plan plan = fftw_plan_r2r(dim, n.data(), scratch.data(), scratch.data(), kinds.data(),
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw std::runtime_error("FFTW failed to create a DST-I plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void dst1_inplace(std::span<double> data, int dim, int points) {
  fftw_plan plan = cache().get(dim, points);
  fftw_execute_r2r(plan, data.data(), data.data());
}

}  // namespace critwave::detail
