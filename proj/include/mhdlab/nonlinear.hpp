#pragma once

#include <utility>

#include "mhdlab/field.hpp"
#include "mhdlab/state.hpp"

namespace mhdlab {

/// Physics switches shared by the right-hand sides and steppers.
struct Model {
  /// When false every quadratic term (Pi, transport, F) is dropped, leaving
  /// the linear damped-wave system.
  bool nonlinear = true;
};

/// Pressure-eliminated quadratic terms of the velocity equations.
struct PiPair {
  SpectralField pi1;
  SpectralField pi2;
  /// Relative L2 gap between the vector form and the expanded x-derivative form.
  double equivalence_residual = 0.0;
};

/// Second-order forcings of psi, u and v respectively.
struct ForcingTriple {
  SpectralField f0;
  SpectralField f1;
  SpectralField f2;
};

/// Dealiased u f_x + v f_y.
SpectralField transport(const SpectralField& u, const SpectralField& v, const SpectralField& f);

/// Leray-projected -(a . grad) b - (Lap psi_a) grad psi_b for velocity/stream
/// pairs a = (ua, va, psia) and b = (ub, vb, psib). Pi = bilinear(s, s).
std::pair<SpectralField, SpectralField> pi_bilinear(const SpectralField& ua,
                                                    const SpectralField& va,
                                                    const SpectralField& psia,
                                                    const SpectralField& ub,
                                                    const SpectralField& vb,
                                                    const SpectralField& psib);

/// Pi1 = -u.grad u + dx Lap^{-1} div(u.grad u) - Lap psi dx psi + dx Lap^{-1} div(Lap psi grad psi),
/// Pi2 likewise with dy.
std::pair<SpectralField, SpectralField> pi_vector_form(const State& s);

/// Term-by-term expansion in which every nonlocal piece is written as
/// d_a d_b / Lap of a product, arranged to carry as many x-derivatives as
/// possible. Requires a divergence-free velocity.
std::pair<SpectralField, SpectralField> pi_expanded_form(const State& s);

/// Vector-form Pi with the dual-form residual recorded.
PiPair pi_terms(const State& s);

/// du = -u + dxy psi + Pi1, dv = -v - dxx psi + Pi2, dpsi = -(u psi_x + v psi_y) - v.
Rates time_derivative_fields(const State& s, const Model& model = {});

/// F0 = -u.grad psi - d_t(u.grad psi) - Pi2
/// F1 = d_t Pi1 - dxy(u.grad psi)
/// F2 = d_t Pi2 + dxx(u.grad psi)
/// with every time derivative obtained from the product rule using `rates`.
ForcingTriple forcing_terms(const State& s, const Rates& rates, const Model& model = {});
/// As above with rates = time_derivative_fields(s).
ForcingTriple forcing_terms(const State& s, const Model& model = {});

/// Relative L2 gap between F0 and the alternative grouping
/// -Pi2 - psi_xy psi_x - Pi1 psi_x + psi_xx psi_y - Pi2 psi_y - u d_x psi_t - v d_y psi_t.
/// Reported only; the two are not expected to agree.
double f0_alternate_grouping_gap(const State& s, const Rates& rates);

}  // namespace mhdlab
