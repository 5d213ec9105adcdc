#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace mkse::detail {
namespace {

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int dim, int n, FftDirection direction) {
    const auto key = std::make_tuple(dim, n, direction);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    // The planner only needs scratch arrays of the right shape; with
    // FFTW_ESTIMATE they are not written.
    const std::size_t size = dim == 1 ? std::size_t(n) : std::size_t(n) * n;
    std::vector<std::complex<double>> scratch(size);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int sign = direction == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    // Flat index ix + n*iy is row-major with iy slowest.
    fftw_plan plan = dim == 1 ? fftw_plan_dft_1d(n, buf, buf, sign, flags)
                              : fftw_plan_dft_2d(n, n, buf, buf, sign, flags);
    if (plan == nullptr) throw std::runtime_error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, FftDirection>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void fft_inplace(std::span<std::complex<double>> data, int dim, int n,
                 FftDirection direction) {
  fftw_plan plan = cache().get(dim, n, direction);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace mkse::detail
