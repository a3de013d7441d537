#pragma once

#include "otoclab/types.hpp"

struct fftw_plan_s;

namespace otoclab {

// Sign of the exponent, matching FFTW_FORWARD / FFTW_BACKWARD.
enum class DftSign { forward = -1, backward = +1 };

// Unnormalized in-place DFTs of length n on vectors and on the columns or
// rows of a column-major n x n array. Plans are immutable once built and
// may be executed from several threads.
class DftPlans {
 public:
  explicit DftPlans(int n);
  ~DftPlans();
  DftPlans(const DftPlans&) = delete;
  DftPlans& operator=(const DftPlans&) = delete;

  int size() const { return n_; }

  void vector(Complex* data, DftSign sign) const;
  void columns(Complex* data, DftSign sign) const;
  void rows(Complex* data, DftSign sign) const;

 private:
  int n_;
  fftw_plan_s* vector_[2]{};
  fftw_plan_s* columns_[2]{};
  fftw_plan_s* rows_[2]{};
};

// Shared plan set for length n, built on first use.
const DftPlans& dft_plans(int n);

}  // namespace otoclab
