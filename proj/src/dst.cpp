#include "dst.hpp"

#include <fftw3.h>

#include <mutex>
#include <new>

namespace gfflab::detail {

namespace {
// FFTW planning is not thread safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Dst2d::Dst2d(int rows, int cols) : rows_(rows), cols_(cols) {
  if (size() == 0) return;
  std::lock_guard lock(planner_mutex());
  buffer_ = static_cast<double*>(fftw_malloc(sizeof(double) * size()));
  if (buffer_ == nullptr) throw std::bad_alloc();
  plan_ = fftw_plan_r2r_2d(rows_, cols_, buffer_, buffer_, FFTW_RODFT00, FFTW_RODFT00,
                           FFTW_ESTIMATE);
  if (plan_ == nullptr) {
    fftw_free(buffer_);
    throw std::bad_alloc();
  }
}

Dst2d::~Dst2d() {
  if (buffer_ == nullptr) return;
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(buffer_);
}

void Dst2d::execute() {
  if (plan_ != nullptr) fftw_execute(static_cast<fftw_plan>(plan_));
}

}  // namespace gfflab::detail
