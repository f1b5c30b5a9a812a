#pragma once

#include <cstddef>
#include <span>

namespace gfflab::detail {

/// In-place 2D type-I discrete sine transform on a rows x cols block
/// (row-major), unnormalized FFTW convention:
///   Y[j][k] = 4 * sum_{x,y} X[x][y] sin(pi (x+1)(j+1)/(rows+1)) sin(pi (y+1)(k+1)/(cols+1)).
/// Applying it twice multiplies by 4 (rows+1)(cols+1).
///
/// Each instance owns its buffer and plan; instances are not shared between
/// threads, but distinct instances may run concurrently.
class Dst2d {
 public:
  Dst2d(int rows, int cols);
  ~Dst2d();
  Dst2d(const Dst2d&) = delete;
  Dst2d& operator=(const Dst2d&) = delete;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::span<double> data() { return {buffer_, size()}; }
  std::size_t size() const {
    return static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_);
  }
  void execute();

 private:
  int rows_;
  int cols_;
  double* buffer_ = nullptr;
  void* plan_ = nullptr;
};

}  // namespace gfflab::detail
