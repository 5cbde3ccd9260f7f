#pragma once

#include <cstddef>
#include <numbers>

namespace mhdlab {

enum class Axis { x, y };

/// Doubly periodic box [0, lx) x [0, ly) sampled on nx x ny points.
///
/// Physical samples are stored row-major with y fastest: index i * ny + j.
/// Spectral coefficients use the real-to-complex half spectrum: all nx
/// x-indices and ky-indices 0..ny/2, flattened as i * (ny/2 + 1) + j.
class Grid2D {
 public:
  /// Throws std::invalid_argument unless nx, ny are even and >= 4 and lx, ly > 0.
  Grid2D(int nx, int ny, double lx, double ly);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double lx() const noexcept { return lx_; }
  double ly() const noexcept { return ly_; }
  int nky() const noexcept { return ny_ / 2 + 1; }

  std::size_t physical_size() const noexcept {
    return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  }
  std::size_t spectral_size() const noexcept {
    return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(nky());
  }

  double dx() const noexcept { return lx_ / nx_; }
  double dy() const noexcept { return ly_ / ny_; }
  double x(int i) const noexcept { return i * dx(); }
  double y(int j) const noexcept { return j * dy(); }
  double center_x() const noexcept { return 0.5 * lx_; }
  double center_y() const noexcept { return 0.5 * ly_; }
  double area() const noexcept { return lx_ * ly_; }

  // Signed mode number of storage index i (Nyquist maps to +nx/2).
  int mode_x(int i) const noexcept { return i <= nx_ / 2 ? i : i - nx_; }
  int mode_y(int j) const noexcept { return j; }

  double kx(int i) const noexcept {
    return 2.0 * std::numbers::pi * mode_x(i) / lx_;
  }
  double ky(int j) const noexcept {
    return 2.0 * std::numbers::pi * mode_y(j) / ly_;
  }
  double k2(int i, int j) const noexcept {
    const double a = kx(i), b = ky(j);
    return a * a + b * b;
  }

  bool is_nyquist_x(int i) const noexcept { return i == nx_ / 2; }
  bool is_nyquist_y(int j) const noexcept { return j == ny_ / 2; }

  // Largest retained |mode| under the 2/3 rule (strictly below n/3).
  int dealias_mode_x() const noexcept { return (nx_ - 1) / 3; }
  int dealias_mode_y() const noexcept { return (ny_ - 1) / 3; }
  bool retained(int i, int j) const noexcept {
    const int mx = mode_x(i);
    return (mx < 0 ? -mx : mx) <= dealias_mode_x() && mode_y(j) <= dealias_mode_y();
  }
  double kx_max_retained() const noexcept {
    return 2.0 * std::numbers::pi * dealias_mode_x() / lx_;
  }
  double ky_max_retained() const noexcept {
    return 2.0 * std::numbers::pi * dealias_mode_y() / ly_;
  }

  bool operator==(const Grid2D&) const = default;

 private:
  int nx_;
  int ny_;
  double lx_;
  double ly_;
};

}  // namespace mhdlab
