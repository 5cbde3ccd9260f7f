#pragma once

#include <utility>

#include "mhdlab/field.hpp"

namespace mhdlab {

/// (i k_axis)^order applied modewise. Odd orders zero the Nyquist line.
SpectralField deriv(const SpectralField& f, Axis axis, int order = 1);

/// Multiplier k_a k_b / |k|^2, i.e. the operator d_a d_b / Laplacian.
/// The k = 0 mode is set to zero.
SpectralField nonlocal(const SpectralField& f, Axis a, Axis b);

/// Laplacian^{-1} with zero-mean gauge.
SpectralField inverse_laplacian(const SpectralField& f);

SpectralField laplacian(const SpectralField& f);

/// Bessel potential <grad>^s = (1 - Laplacian)^{s/2}.
SpectralField bessel(const SpectralField& f, double s);

/// Orthogonal projection onto divergence-free fields. Mean modes are kept.
std::pair<SpectralField, SpectralField> leray_project(const SpectralField& u,
                                                      const SpectralField& v);

SpectralField divergence(const SpectralField& u, const SpectralField& v);

/// max_k |i kx u + i ky v| / max_k max(|u|, |v|); zero for the zero field.
double relative_divergence(const SpectralField& u, const SpectralField& v);

/// L2 norm over the box via Parseval: sqrt(area * sum |c_k|^2).
double l2_norm(const SpectralField& f);
/// Inner product (f, g)_{L2} over the box for real fields.
double l2_inner(const SpectralField& f, const SpectralField& g);

/// Relative L2 distance |a - b| / max(|b|, floor).
double relative_l2_gap(const SpectralField& a, const SpectralField& b, double floor = 1e-300);

/// Modewise translation f(x - shift_x, y - shift_y).
SpectralField translate(const SpectralField& f, double shift_x, double shift_y);

}  // namespace mhdlab
