#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace triwave::detail {
namespace {

struct PlanCache {
  std::mutex mutex;
  std::map<std::tuple<int, int, int>, fftw_plan> plans;

  ~PlanCache() {
    for (auto& entry : plans) fftw_destroy_plan(entry.second);
  }

  fftw_plan get(int dim, int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex);
    const auto key = std::make_tuple(dim, n, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;

    std::vector<int> dims(static_cast<std::size_t>(dim), n);
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(n);
    // FFTW_ESTIMATE leaves the planning buffer untouched.
    fftw_complex* scratch = fftw_alloc_complex(total);
    fftw_plan plan = fftw_plan_dft(dim, dims.data(), scratch, scratch, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    plans.emplace(key, plan);
    return plan;
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

}  // namespace

void fft_execute(int dim, int n, int sign, std::complex<double>* data) {
  fftw_plan plan = cache().get(dim, n, sign);
  auto* raw = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plan, raw, raw);
}

}  // namespace triwave::detail
