#include "otoclab/dft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace otoclab {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int slot(DftSign sign) { return sign == DftSign::forward ? 0 : 1; }

fftw_complex* as_fftw(Complex* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

DftPlans::DftPlans(int n) : n_(n) {
  std::vector<Complex> scratch(static_cast<std::size_t>(n) * n);
  auto* buf = as_fftw(scratch.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  int dims[1] = {n};
  std::lock_guard lock(planner_mutex());
  for (DftSign sign : {DftSign::forward, DftSign::backward}) {
    const int s = static_cast<int>(sign);
    const int i = slot(sign);
    vector_[i] = fftw_plan_dft_1d(n, buf, buf, s, flags);
    columns_[i] = fftw_plan_many_dft(1, dims, n, buf, nullptr, 1, n, buf, nullptr, 1, n, s, flags);
    rows_[i] = fftw_plan_many_dft(1, dims, n, buf, nullptr, n, 1, buf, nullptr, n, 1, s, flags);
  }
}

DftPlans::~DftPlans() {
  std::lock_guard lock(planner_mutex());
  for (int i = 0; i < 2; ++i) {
    fftw_destroy_plan(vector_[i]);
    fftw_destroy_plan(columns_[i]);
    fftw_destroy_plan(rows_[i]);
  }
}

void DftPlans::vector(Complex* data, DftSign sign) const {
  fftw_execute_dft(vector_[slot(sign)], as_fftw(data), as_fftw(data));
}

void DftPlans::columns(Complex* data, DftSign sign) const {
  fftw_execute_dft(columns_[slot(sign)], as_fftw(data), as_fftw(data));
}

void DftPlans::rows(Complex* data, DftSign sign) const {
  fftw_execute_dft(rows_[slot(sign)], as_fftw(data), as_fftw(data));
}

const DftPlans& dft_plans(int n) {
  static std::mutex cache_mutex;
  static std::map<int, std::unique_ptr<DftPlans>> cache;
  std::lock_guard lock(cache_mutex);
  auto& entry = cache[n];
  if (!entry) entry = std::make_unique<DftPlans>(n);
  return *entry;
}

}  // namespace otoclab
