#pragma once

#include <span>
#include <vector>

#include "mhdlab/field.hpp"

namespace mhdlab {

/// Smooth cutoff: 1 on |r| <= 1, 0 on |r| >= 2, monotone and C-infinity in between.
double bump(double r);

enum class ProjectMode { leq, band, gt };

/// Frequency modulus fed to the bump. `full` uses |k| = sqrt(kx^2 + ky^2);
/// `x_only` uses |kx| (for sensitivity studies).
enum class Modulus { full, x_only };

/// leq: phi(|k|/M) f,  gt: (1 - phi(|k|/M)) f,  band: (phi(|k|/M) - phi(2|k|/M)) f.
SpectralField project(const SpectralField& f, double M, ProjectMode mode,
                      Modulus modulus = Modulus::full);

/// Sum of band projections over M = m_min, 2 m_min, ..., m_max (dyadic).
SpectralField dyadic_band_sum(const SpectralField& f, double m_min, double m_max,
                              Modulus modulus = Modulus::full);

struct RieszFactor {
  Axis a;
  Axis b;
  int sign = 1;
};

/// Composition of sign * (d_a d_b / Lap) factors; symbol sign * k_a k_b / |k|^2.
/// Throws std::invalid_argument on an empty pattern.
SpectralField riesz_apply(const SpectralField& f, std::span<const RieszFactor> pattern);

/// Modewise maximum of the composed Riesz symbol modulus.
double riesz_symbol_max(const Grid2D& grid, std::span<const RieszFactor> pattern);

/// |grad|^a <grad>^b f; the k = 0 mode is zeroed whenever a != 0.
SpectralField riesz_potential(const SpectralField& f, double a, double b);

/// Box quadrature of |f|.
double l1_norm(const SpectralField& f);

/// Ratio of the two sides of
///   || |grad|^alpha <grad>^n0 (dxdy/(-Lap)) f ||_1
///     <~ ||f||_1^{1-alpha+eps} ||dx f||_1^{alpha-eps} + ||<grad>^{n0-1+alpha+eps} dx f||_1
/// evaluated with grid L1 norms. +infinity when the right side vanishes.
double lemma_ratio_diagnostic(const SpectralField& f, double alpha, double eps, double n0 = 0.0);

/// ||R f||_1 / || |grad|^{-eps} <grad>^{2 eps} f ||_1 for the Riesz-type R given by pattern.
double riesz_bound_ratio(const SpectralField& f, std::span<const RieszFactor> pattern, double eps);

}  // namespace mhdlab
