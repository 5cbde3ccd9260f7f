#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <new>
#include <span>
#include <vector>

#include "mhdlab/grid.hpp"

namespace mhdlab {

using Complex = std::complex<double>;

namespace detail {
void* fftw_aligned_alloc(std::size_t bytes);
void fftw_aligned_free(void* p) noexcept;
}  // namespace detail

/// Allocator returning SIMD-aligned storage so buffers can be handed to
/// FFTW's new-array execute functions.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(detail::fftw_aligned_alloc(n * sizeof(T)));
  }
  void deallocate(T* p, std::size_t) noexcept { detail::fftw_aligned_free(p); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept {
    return true;
  }
};

using RealBuffer = std::vector<double, AlignedAllocator<double>>;
using ComplexBuffer = std::vector<Complex, AlignedAllocator<Complex>>;

/// Grid plus FFT plans. One instance per distinct grid, shared by all fields
/// on that grid; immutable after construction so safe to share across threads.
class SpectralContext {
 public:
  static std::shared_ptr<const SpectralContext> get(const Grid2D& grid);

  explicit SpectralContext(const Grid2D& grid);
  ~SpectralContext();
  SpectralContext(const SpectralContext&) = delete;
  SpectralContext& operator=(const SpectralContext&) = delete;

  const Grid2D& grid() const noexcept { return grid_; }

  // Forward transform normalized so coefficients are Fourier-series
  // coefficients: f(x) = sum_k c_k exp(i k.x).
  void forward(const double* in, Complex* out) const;
  // Inverse transform; input is left untouched.
  void inverse(const Complex* in, double* out) const;

 private:
  Grid2D grid_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

class PhysicalField;

/// Fourier coefficients of a real scalar field (half spectrum; conjugate
/// symmetry is implicit in the storage).
class SpectralField {
 public:
  explicit SpectralField(const Grid2D& grid);
  explicit SpectralField(std::shared_ptr<const SpectralContext> ctx);

  const Grid2D& grid() const noexcept { return ctx_->grid(); }
  const std::shared_ptr<const SpectralContext>& context() const noexcept { return ctx_; }

  Complex& operator()(int i, int j) noexcept {
    return coeffs_[static_cast<std::size_t>(i) * grid().nky() + j];
  }
  const Complex& operator()(int i, int j) const noexcept {
    return coeffs_[static_cast<std::size_t>(i) * grid().nky() + j];
  }
  std::span<Complex> coeffs() noexcept { return coeffs_; }
  std::span<const Complex> coeffs() const noexcept { return coeffs_; }

  Complex mean() const noexcept { return coeffs_[0]; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
  /// this += s * o
  SpectralField& axpy(double s, const SpectralField& o);

  /// Multiply each coefficient by symbol(kx, ky).
  template <class Symbol>
  SpectralField& apply(Symbol&& symbol) {
    const Grid2D& g = grid();
    const int nky = g.nky();
    for (int i = 0; i < g.nx(); ++i) {
      const double kx = g.kx(i);
      Complex* row = coeffs_.data() + static_cast<std::size_t>(i) * nky;
      for (int j = 0; j < nky; ++j) row[j] *= symbol(kx, g.ky(j));
    }
    return *this;
  }

  /// Zero every coefficient outside the 2/3-rule band.
  SpectralField& dealias();
  bool is_dealiased(double tol = 0.0) const;

  PhysicalField to_physical() const;

  double max_abs_coeff() const noexcept;

 private:
  std::shared_ptr<const SpectralContext> ctx_;
  ComplexBuffer coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a);
SpectralField operator*(double s, SpectralField a);

/// Real samples of a field on the collocation grid.
class PhysicalField {
 public:
  explicit PhysicalField(const Grid2D& grid);
  explicit PhysicalField(std::shared_ptr<const SpectralContext> ctx);

  const Grid2D& grid() const noexcept { return ctx_->grid(); }
  const std::shared_ptr<const SpectralContext>& context() const noexcept { return ctx_; }

  double& operator()(int i, int j) noexcept {
    return samples_[static_cast<std::size_t>(i) * grid().ny() + j];
  }
  double operator()(int i, int j) const noexcept {
    return samples_[static_cast<std::size_t>(i) * grid().ny() + j];
  }
  std::span<double> samples() noexcept { return samples_; }
  std::span<const double> samples() const noexcept { return samples_; }

  PhysicalField& operator+=(const PhysicalField& o);
  PhysicalField& operator-=(const PhysicalField& o);
  PhysicalField& operator*=(double s);
  /// this += a * b pointwise
  PhysicalField& add_product(const PhysicalField& a, const PhysicalField& b);

  /// Forward transform without truncation.
  SpectralField to_spectral() const;
  /// Forward transform followed by 2/3-rule truncation.
  SpectralField to_dealiased() const;

  double max_abs() const noexcept;
  bool all_finite() const noexcept;

 private:
  std::shared_ptr<const SpectralContext> ctx_;
  RealBuffer samples_;
};

PhysicalField operator*(const PhysicalField& a, const PhysicalField& b);

/// Sample fn(x, y) on the grid.
PhysicalField sample(const Grid2D& grid, const std::function<double(double, double)>& fn);

/// Dealiased spectral form of the pointwise product a*b.
SpectralField product(const SpectralField& a, const SpectralField& b);

/// Cap on internal FFT threads; read from MHD_LAB_THREADS (default 1).
int internal_thread_count();

}  // namespace mhdlab
