#include "gaborfio/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace gaborfio::fft {
namespace {

// FFTW planning is not thread-safe; plans are created once per shape and
// reused through the new-array execute interface.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n, int dim, int count, Direction dir) {
    const auto key = std::make_tuple(n, dim, count, dir == Direction::forward);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::size_t total = static_cast<std::size_t>(count);
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
    std::vector<cplx> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const int dims[2] = {n, n};
    int dist = 1;
    for (int a = 0; a < dim; ++a) dist *= n;
    fftw_plan plan = fftw_plan_many_dft(dim, dims, count, buf, nullptr, 1, dist, buf, nullptr, 1,
                                        dist, sign, flags);
    if (plan == nullptr) throw std::runtime_error("fftw planning failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

// Multiplies entry (i0, i1, ...) by prod_a (-1)^{i_a}.
void checkerboard(std::span<cplx> data, int n, int dim, int count) {
  const std::size_t block = dim == 1 ? static_cast<std::size_t>(n)
                                     : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  for (int c = 0; c < count; ++c) {
    cplx* base = data.data() + c * block;
    if (dim == 1) {
      for (int i = 1; i < n; i += 2) base[i] = -base[i];
    } else {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if ((i + j) & 1) base[i * n + j] = -base[i * n + j];
    }
  }
}

void run(std::span<cplx> data, int n, int dim, int count, Direction dir) {
  if (n <= 0 || (n & 1)) throw std::invalid_argument("centered_dft requires even n");
  fftw_plan plan = cache().get(n, dim, count, dir);
  checkerboard(data, n, dim, count);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
  checkerboard(data, n, dim, count);
  // Remaining constant exp(+-i pi n/2)^dim = (-1)^{dim * n/2}.
  if (((n / 2) * dim) & 1)
    for (auto& v : data) v = -v;
}

}  // namespace

void centered_dft(std::span<cplx> data, int n, int dim, Direction dir) {
  run(data, n, dim, 1, dir);
}

void centered_dft_rows(std::span<cplx> data, int n, int count, Direction dir) {
  run(data, n, 1, count, dir);
}

}  // namespace gaborfio::fft
