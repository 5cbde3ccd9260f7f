#include "mhdlab/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

namespace mhdlab {

namespace detail {

void* fftw_aligned_alloc(std::size_t bytes) {
  void* p = fftw_malloc(bytes == 0 ? 1 : bytes);
  if (p == nullptr) throw std::bad_alloc();
  return p;
}

void fftw_aligned_free(void* p) noexcept { fftw_free(p); }

}  // namespace detail

namespace {

// The FFTW planner is not thread-safe; execution of an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_fftw_threads_locked() {
  static bool done = false;
  if (done) return;
  fftw_init_threads();
  done = true;
}

}  // namespace

int internal_thread_count() {
  static const int count = [] {
    const char* env = std::getenv("MHD_LAB_THREADS");
    if (env == nullptr) return 1;
    const int n = std::atoi(env);
    return n >= 1 ? n : 1;
  }();
  return count;
}

Grid2D::Grid2D(int nx, int ny, double lx, double ly) : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
  if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0) {
    throw std::invalid_argument("grid resolution must be even and >= 4, got " +
                                std::to_string(nx) + "x" + std::to_string(ny));
  }
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw std::invalid_argument("grid side lengths must be positive and finite");
  }
}

std::shared_ptr<const SpectralContext> SpectralContext::get(const Grid2D& grid) {
  using Key = std::tuple<int, int, double, double>;
  static std::mutex cache_mutex;
  static std::map<Key, std::weak_ptr<const SpectralContext>> cache;

  const Key key{grid.nx(), grid.ny(), grid.lx(), grid.ly()};
  std::lock_guard lock(cache_mutex);
  if (auto it = cache.find(key); it != cache.end()) {
    if (auto ctx = it->second.lock()) return ctx;
  }
  auto ctx = std::make_shared<const SpectralContext>(grid);
  cache[key] = ctx;
  return ctx;
}

SpectralContext::SpectralContext(const Grid2D& grid) : grid_(grid) {
  RealBuffer real(grid.physical_size());
  ComplexBuffer spec(grid.spectral_size());
  auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());

  std::lock_guard lock(planner_mutex());
  init_fftw_threads_locked();
  fftw_plan_with_nthreads(internal_thread_count());
  // FFTW_ESTIMATE keeps plan selection (and hence roundoff) identical across
  // processes, which byte-identical run outputs rely on.
  forward_plan_ = fftw_plan_dft_r2c_2d(grid.nx(), grid.ny(), real.data(), cplx, FFTW_ESTIMATE);
  inverse_plan_ = fftw_plan_dft_c2r_2d(grid.nx(), grid.ny(), cplx, real.data(), FFTW_ESTIMATE);
  if (forward_plan_ == nullptr || inverse_plan_ == nullptr) {
    throw std::runtime_error("FFTW plan creation failed");
  }
}

SpectralContext::~SpectralContext() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void SpectralContext::forward(const double* in, Complex* out) const {
  // r2c leaves its input intact.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in),
                       reinterpret_cast<fftw_complex*>(out));
  const double scale = 1.0 / static_cast<double>(grid_.physical_size());
  const std::size_t n = grid_.spectral_size();
  for (std::size_t k = 0; k < n; ++k) out[k] *= scale;
}

void SpectralContext::inverse(const Complex* in, double* out) const {
  // c2r destroys its input, so work on a per-thread copy.
  thread_local ComplexBuffer scratch;
  scratch.assign(in, in + grid_.spectral_size());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out);
}

// ---------------------------------------------------------------------------

SpectralField::SpectralField(const Grid2D& grid) : SpectralField(SpectralContext::get(grid)) {}

SpectralField::SpectralField(std::shared_ptr<const SpectralContext> ctx)
    : ctx_(std::move(ctx)), coeffs_(ctx_->grid().spectral_size(), Complex{0.0, 0.0}) {}

namespace {
void require_same_grid(const Grid2D& a, const Grid2D& b) {
  if (!(a == b)) throw std::invalid_argument("fields live on different grids");
}
}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(grid(), o.grid());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(grid(), o.grid());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= o.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& o) {
  require_same_grid(grid(), o.grid());
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += s * o.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::dealias() {
  const Grid2D& g = grid();
  const int nky = g.nky();
  for (int i = 0; i < g.nx(); ++i) {
    Complex* row = coeffs_.data() + static_cast<std::size_t>(i) * nky;
    for (int j = 0; j < nky; ++j) {
      if (!g.retained(i, j)) row[j] = Complex{0.0, 0.0};
    }
  }
  return *this;
}

bool SpectralField::is_dealiased(double tol) const {
  const Grid2D& g = grid();
  for (int i = 0; i < g.nx(); ++i) {
    for (int j = 0; j < g.nky(); ++j) {
      if (!g.retained(i, j) && std::abs((*this)(i, j)) > tol) return false;
    }
  }
  return true;
}

PhysicalField SpectralField::to_physical() const {
  PhysicalField out(ctx_);
  ctx_->inverse(coeffs_.data(), out.samples().data());
  return out;
}

double SpectralField::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator-(SpectralField a) { return a *= -1.0; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

// ---------------------------------------------------------------------------

PhysicalField::PhysicalField(const Grid2D& grid) : PhysicalField(SpectralContext::get(grid)) {}

PhysicalField::PhysicalField(std::shared_ptr<const SpectralContext> ctx)
    : ctx_(std::move(ctx)), samples_(ctx_->grid().physical_size(), 0.0) {}

PhysicalField& PhysicalField::operator+=(const PhysicalField& o) {
  require_same_grid(grid(), o.grid());
  for (std::size_t k = 0; k < samples_.size(); ++k) samples_[k] += o.samples_[k];
  return *this;
}

PhysicalField& PhysicalField::operator-=(const PhysicalField& o) {
  require_same_grid(grid(), o.grid());
  for (std::size_t k = 0; k < samples_.size(); ++k) samples_[k] -= o.samples_[k];
  return *this;
}

PhysicalField& PhysicalField::operator*=(double s) {
  for (auto& x : samples_) x *= s;
  return *this;
}

PhysicalField& PhysicalField::add_product(const PhysicalField& a, const PhysicalField& b) {
  require_same_grid(grid(), a.grid());
  require_same_grid(grid(), b.grid());
  const double* pa = a.samples_.data();
  const double* pb = b.samples_.data();
  for (std::size_t k = 0; k < samples_.size(); ++k) samples_[k] += pa[k] * pb[k];
  return *this;
}

SpectralField PhysicalField::to_spectral() const {
  SpectralField out(ctx_);
  ctx_->forward(samples_.data(), out.coeffs().data());
  return out;
}

SpectralField PhysicalField::to_dealiased() const {
  SpectralField out = to_spectral();
  out.dealias();
  return out;
}

double PhysicalField::max_abs() const noexcept {
  double m = 0.0;
  for (double x : samples_) m = std::max(m, std::abs(x));
  return m;
}

bool PhysicalField::all_finite() const noexcept {
  return std::all_of(samples_.begin(), samples_.end(), [](double x) { return std::isfinite(x); });
}

PhysicalField operator*(const PhysicalField& a, const PhysicalField& b) {
  PhysicalField out(a.context());
  out.add_product(a, b);
  return out;
}

PhysicalField sample(const Grid2D& grid, const std::function<double(double, double)>& fn) {
  PhysicalField out(grid);
  for (int i = 0; i < grid.nx(); ++i) {
    const double x = grid.x(i);
    for (int j = 0; j < grid.ny(); ++j) out(i, j) = fn(x, grid.y(j));
  }
  return out;
}

SpectralField product(const SpectralField& a, const SpectralField& b) {
  return (a.to_physical() * b.to_physical()).to_dealiased();
}

}  // namespace mhdlab
