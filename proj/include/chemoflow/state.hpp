#pragma once

#include "chemoflow/grid.hpp"

namespace chemoflow {

// The five unknowns at one time level. pressure is the zero-mean projection
// multiplier of the last step.
struct State {
  double t = 0.0;
  ScalarField n1;
  ScalarField n2;
  ScalarField c;
  VectorField vel;
  ScalarField pressure;

  static State zeros(const DomainSpec& dom) {
    State s;
    s.n1 = ScalarField(dom);
    s.n2 = ScalarField(dom);
    s.c = ScalarField(dom);
    s.vel = VectorField(dom);
    s.pressure = ScalarField(dom);
    return s;
  }
};

}  // namespace chemoflow
