#pragma once

#include <span>

#include "fockbell/fock_core.hpp"

namespace fockbell {

// All generators emit normalized states on canonical mode sets (a1..; b1..),
// with the weight lost to the quanta cap recorded in pruned_weight().

// sum_n lambda_n |n; n> on one mode per side, coefficients used verbatim and
// then normalized within the cutoff.
FieldState tmsv_from_lambdas(std::span<const double> lambdas, int cutoff);

// Two-mode squeezed vacuum with the standard spectrum tanh^n(gamma)/cosh(gamma).
FieldState tmsv(double gamma, int cutoff);

// 2x2 bright squeezed vacuum on modes a1,a2 | b1,b2:
// 1/cosh^2 sum_n tanh^n sum_m (-1)^m |(n-m), m; m, (n-m)>.
FieldState bsv(double gamma, int cutoff);

// Six-mode state sum_k sum_m C_{k-m} C_m (a1+ a2+ b1+)^{k-m} (a3+ a4+ b2+)^m |vac>
// with caller-supplied coefficients; repeated creation contributes the usual
// sqrt(p!) ladder factors.
FieldState bghz(std::span<const Complex> coefficients, int cutoff);

// Single photon behind a symmetric beamsplitter: (|0;1> + |1;0>)/sqrt(2).
FieldState beamsplit_single_photon(int cutoff = 8);

// Tensors one fresh coherent-state mode onto each party, expanded up to
// `cutoff` quanta per ancilla. Schmidt spectrum of s is preserved.
FieldState attach_coherent_ancillas(const FieldState& s, Complex z, int cutoff);

// Applies the sum of annihilation operators over the listed modes, then
// renormalizes. Throws ValidationError when the state is annihilated to zero.
FieldState photon_subtract(const FieldState& s, std::span<const ModeId> modes);

}  // namespace fockbell
