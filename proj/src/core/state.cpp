#include "mhdlab/state.hpp"

#include "mhdlab/spectral.hpp"

namespace mhdlab {

BState to_bform(const State& s) {
  SpectralField bx = deriv(s.psi, Axis::y);
  bx(0, 0) += 1.0;
  return BState{s.u, s.v, std::move(bx), -deriv(s.psi, Axis::x), s.t};
}

}  // namespace mhdlab
