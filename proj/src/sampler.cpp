#include "gfflab/sampler.hpp"

#include <cmath>
#include <optional>

#include "dst.hpp"
#include "gfflab/errors.hpp"
#include "gfflab/parallel.hpp"

namespace gfflab {

DenseSampler::DenseSampler(const GreenOperator& g) : box_(g.box()) {
  const Eigen::MatrixXd dense = g.to_dense();
  Eigen::LLT<Eigen::MatrixXd> llt(dense);
  if (llt.info() != Eigen::Success) {
    throw FactorizationError("Green matrix is not positive definite; cannot factor");
  }
  factor_ = llt.matrixL();
}

Field DenseSampler::from_draws(std::span<const double> draws) const {
  if (draws.size() != box_.interior_count()) {
    throw PreconditionError("draw count does not match interior site count");
  }
  Eigen::Map<const Eigen::VectorXd> xi(draws.data(), static_cast<Eigen::Index>(draws.size()));
  const Eigen::VectorXd v = factor_.triangularView<Eigen::Lower>() * xi;
  return Field::from_interior(box_, std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

Field DenseSampler::sample(SeedSpec seed) const {
  std::vector<double> xi(box_.interior_count());
  NormalStream(seed).fill(xi);
  return from_draws(xi);
}

struct SpectralSampler::Impl {
  explicit Impl(const BoxSpec& box)
      : dst(box.interior_side(), box.interior_side()), scale(box.interior_count()) {
    const GreenOperator g = GreenOperator::make_spectral(box);
    const int m = box.interior_side();
    // psi_jk carries (2/N); the unnormalized transform carries a factor 4.
    const double norm = 2.0 / box.side() / 4.0;
    for (int j = 1; j <= m; ++j) {
      for (int k = 1; k <= m; ++k) {
        scale[static_cast<std::size_t>(j - 1) * m + (k - 1)] =
            norm / std::sqrt(1.0 - g.kernel_eigenvalue(j, k));
      }
    }
  }
  detail::Dst2d dst;
  std::vector<double> scale;
};

SpectralSampler::SpectralSampler(BoxSpec box) : box_(box) {
  if (box.side() < 2) throw PreconditionError("spectral sampler needs N >= 2");
  impl_ = std::make_unique<Impl>(box);
}

SpectralSampler::~SpectralSampler() = default;
SpectralSampler::SpectralSampler(SpectralSampler&&) noexcept = default;
SpectralSampler& SpectralSampler::operator=(SpectralSampler&&) noexcept = default;

void SpectralSampler::transform_into(Field& out) {
  auto buf = impl_->dst.data();
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= impl_->scale[i];
  impl_->dst.execute();
  const int n = box_.side();
  const int m = n - 1;
  for (int x = 1; x < n; ++x) {
    for (int y = 1; y < n; ++y) out(x, y) = buf[static_cast<std::size_t>(x - 1) * m + (y - 1)];
  }
}

Field SpectralSampler::from_modes(std::span<const double> modes) {
  if (modes.size() != box_.interior_count()) {
    throw PreconditionError("mode count does not match interior site count");
  }
  auto buf = impl_->dst.data();
  std::copy(modes.begin(), modes.end(), buf.begin());
  Field out(box_);
  transform_into(out);
  return out;
}

void SpectralSampler::sample_into(SeedSpec seed, Field& out) {
  if (!(out.box() == box_)) throw PreconditionError("output field box mismatch");
  NormalStream(seed).fill(impl_->dst.data());
  transform_into(out);
}

Field SpectralSampler::sample(SeedSpec seed) {
  Field out(box_);
  sample_into(seed, out);
  return out;
}

Field sample_dense(const GreenOperator& g, SeedSpec seed) { return DenseSampler(g).sample(seed); }

Field sample_spectral(BoxSpec box, SeedSpec seed) { return SpectralSampler(box).sample(seed); }

void batch_visit(BoxSpec box, std::size_t count, SeedSpec seed, const BatchOptions& options,
                 const std::function<void(std::size_t, const Field&)>& visit) {
  if (count == 0) throw PreconditionError("batch count must be at least 1");
  if (box.side() < 2) throw PreconditionError("sampling needs N >= 2");
  const bool dense = options.sampler == SamplerKind::dense ||
                     (options.sampler == SamplerKind::automatic && box.side() <= options.dense_cutoff);
  std::optional<DenseSampler> shared_dense;
  if (dense) shared_dense.emplace(green_dense(box, std::max(options.dense_cutoff, kDefaultDenseCutoff)));
  parallel_chunks(count, options.workers, [&](int, std::size_t begin, std::size_t end) {
    if (dense) {
      for (std::size_t i = begin; i < end; ++i) visit(i, shared_dense->sample(seed.offset(i)));
      return;
    }
    SpectralSampler sampler(box);
    Field field(box);
    for (std::size_t i = begin; i < end; ++i) {
      sampler.sample_into(seed.offset(i), field);
      visit(i, field);
    }
  });
}

std::vector<Field> batch_sample(BoxSpec box, std::size_t count, SeedSpec seed,
                                const BatchOptions& options) {
  if (count == 0) throw PreconditionError("batch count must be at least 1");
  std::vector<Field> out(count, Field(box));
  batch_visit(box, count, seed, options, [&](std::size_t i, const Field& f) { out[i] = f; });
  return out;
}

}  // namespace gfflab
