#include "nlsctl/spectral.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace nlsctl {
namespace {

// The FFTW planner is not re-entrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

// One plan pair plus aligned scratch per grid shape and per thread, so
// plans are never shared across threads.
class SpectralPlan {
 public:
  SpectralPlan(int dimension, std::size_t n) : size_(dimension == 1 ? n : n * n) {
    buffer_ = fftw_alloc_complex(size_);
    std::lock_guard lock(planner_mutex());
    const int ni = static_cast<int>(n);
    if (dimension == 1) {
      forward_ = fftw_plan_dft_1d(ni, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_1d(ni, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
    } else {
      forward_ = fftw_plan_dft_2d(ni, ni, buffer_, buffer_, FFTW_FORWARD, FFTW_ESTIMATE);
      backward_ = fftw_plan_dft_2d(ni, ni, buffer_, buffer_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
  }
  SpectralPlan(const SpectralPlan&) = delete;
  SpectralPlan& operator=(const SpectralPlan&) = delete;
  ~SpectralPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
    fftw_free(buffer_);
  }

  void run(std::span<Complex> values, bool forward) {
    std::memcpy(buffer_, values.data(), size_ * sizeof(fftw_complex));
    fftw_execute(forward ? forward_ : backward_);
    std::memcpy(static_cast<void*>(values.data()), buffer_, size_ * sizeof(fftw_complex));
  }

 private:
  std::size_t size_;
  fftw_complex* buffer_ = nullptr;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

SpectralPlan& plan_for(const SpatialGrid& grid) {
  thread_local std::map<std::pair<int, std::size_t>, std::unique_ptr<SpectralPlan>> cache;
  const auto key = std::make_pair(grid.dimension(), grid.points_per_axis());
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<SpectralPlan>(key.first, key.second)).first;
  }
  return *it->second;
}

}  // namespace

void fft_forward(std::span<Complex> values, const SpatialGrid& grid) {
  plan_for(grid).run(values, true);
}

void fft_inverse(std::span<Complex> values, const SpatialGrid& grid) {
  plan_for(grid).run(values, false);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& z : values) z *= scale;
}

void apply_fourier_multiplier(ComplexField& f,
                              const std::function<Complex(std::size_t)>& multiplier) {
  fft_forward(f.values, f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) f.values[i] *= multiplier(i);
  fft_inverse(f.values, f.grid);
}

void free_propagate_inplace(ComplexField& f, double t) {
  if (t == 0.0) return;
  fft_forward(f.values, f.grid);
  for (std::size_t i = 0; i < f.size(); ++i) {
    f.values[i] *= std::polar(1.0, f.grid.wavenumber_sq(i) * t);
  }
  fft_inverse(f.values, f.grid);
}

ComplexField free_propagate(const ComplexField& f, double t) {
  ComplexField out = f;
  free_propagate_inplace(out, t);
  return out;
}

ComplexField spectral_derivative(const ComplexField& f, int axis) {
  ComplexField out = f;
  const auto& g = f.grid;
  const std::size_t n = g.points_per_axis();
  fft_forward(out.values, g);
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t idx = i;
    if (g.dimension() == 2) idx = axis == 0 ? i / n : i % n;
    // The Nyquist mode has no consistent sign; drop it for odd derivatives.
    const double k = idx == n / 2 ? 0.0 : g.wavenumber(idx);
    out.values[i] *= Complex(0.0, k);
  }
  fft_inverse(out.values, g);
  return out;
}

ComplexField spectral_laplacian(const ComplexField& f) {
  ComplexField out = f;
  apply_fourier_multiplier(out, [&](std::size_t i) { return Complex(-f.grid.wavenumber_sq(i)); });
  return out;
}

}  // namespace nlsctl
