#pragma once

#include "lvnf/nonpoly.hpp"

namespace lvnf::examples {

// Allosteric enzyme kinetics: xdot = -x (a + b x) f with f = 1/(c + x + d x^2).
// The rate function enters through its closed derivative df/dx = -f^2 - 2 d x f^2.
GeneralSystem enzyme_system(double a = 1.0, double b = 1.0, double c = 1.0, double d = 1.0);

// Morse oscillator after translating the position by c so the default orbit
// stays positive: xdot = y - c, ydot = a f - a b f^2 with f = e^{-alpha x},
// b = e^{alpha c} and a = -2 d b alpha.
GeneralSystem morse_system(double d = 1.0, double alpha = 1.0, double c = 4.0);

// Identity auxiliary choice (p = 0, q = 1) for every function of the system.
AuxSpec default_aux(const GeneralSystem& sys);

} // namespace lvnf::examples
