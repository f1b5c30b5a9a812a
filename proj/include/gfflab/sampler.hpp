#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gfflab/box.hpp"
#include "gfflab/green.hpp"
#include "gfflab/rng.hpp"

namespace gfflab {

/// Field = L * xi with L L^T = G (Cholesky), xi drawn in interior-index order.
class DenseSampler {
 public:
  explicit DenseSampler(const GreenOperator& g);

  const BoxSpec& box() const { return box_; }
  const Eigen::MatrixXd& factor() const { return factor_; }

  Field sample(SeedSpec seed) const;
  Field from_draws(std::span<const double> draws) const;

 private:
  BoxSpec box_;
  Eigen::MatrixXd factor_;
};

/// Field = sum_jk xi_jk psi_jk / sqrt(1 - lambda_jk), via one 2D sine
/// transform. Mode coefficients xi_jk are drawn j-major (row-major in j, k).
/// Holds transform workspace, so one instance per thread.
class SpectralSampler {
 public:
  explicit SpectralSampler(BoxSpec box);
  ~SpectralSampler();
  SpectralSampler(SpectralSampler&&) noexcept;
  SpectralSampler& operator=(SpectralSampler&&) noexcept;

  const BoxSpec& box() const { return box_; }

  Field sample(SeedSpec seed);
  Field from_modes(std::span<const double> modes);
  /// Writes the sample into an existing field of the same box (no allocation).
  void sample_into(SeedSpec seed, Field& out);

 private:
  void transform_into(Field& out);
  struct Impl;
  BoxSpec box_;
  std::unique_ptr<Impl> impl_;
};

Field sample_dense(const GreenOperator& g, SeedSpec seed);
Field sample_spectral(BoxSpec box, SeedSpec seed);

enum class SamplerKind { automatic, dense, spectral };

struct BatchOptions {
  int workers = 1;
  SamplerKind sampler = SamplerKind::automatic;
  /// Automatic choice uses the dense sampler up to this side.
  int dense_cutoff = 16;
};

/// Field i of a batch uses stream seed.stream + i, whatever the worker count.
/// The visitor is called concurrently from worker threads with the field index.
void batch_visit(BoxSpec box, std::size_t count, SeedSpec seed, const BatchOptions& options,
                 const std::function<void(std::size_t, const Field&)>& visit);

std::vector<Field> batch_sample(BoxSpec box, std::size_t count, SeedSpec seed,
                                const BatchOptions& options = {});

}  // namespace gfflab
