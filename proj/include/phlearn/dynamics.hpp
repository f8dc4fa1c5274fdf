#pragma once

#include <vector>

#include "phlearn/types.hpp"

namespace phlearn {

enum class SignalKind { kSine, kConstant, kSquare, kRamp, kSamples };

/// Scalar input signal. Sample signals live on a uniform grid and evaluate by
/// nearest-grid lookup.
struct Signal {
  SignalKind kind = SignalKind::kConstant;
  double amplitude = 1.0;      // sine, constant, square
  double omega = 1.0;          // sine angular frequency (rad/s)
  double period = 0.0;         // square period (s)
  double slope = 0.0;          // ramp (1/s)
  std::vector<double> samples; // samples kind
  double t0 = 0.0;
  double dt = 0.0;

  static Signal sine(double amplitude, double omega);
  static Signal constant(double amplitude);
  static Signal square(double amplitude, double period);
  static Signal ramp(double slope);
  static Signal from_samples(std::vector<double> samples, double t0, double dt);
};

double eval_signal(const Signal& s, double t);

enum class StepMethod { kEuler, kMidpoint, kExact };

struct IntegratorSpec {
  StepMethod method = StepMethod::kEuler;
  double dt = 0.01;
};

/// Uniformly sampled input/output (optionally state) time series.
struct Trajectory {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> inputs;
  std::vector<double> outputs;
  std::vector<Vector> states;  // empty unless recorded

  std::size_t size() const { return inputs.size(); }
};

/// One forward Euler step x + dt (A x + b u).
Vector step_euler(const Matrix& A, const Vector& b_in, double u, const Vector& x, double dt);

/// Implicit midpoint for the free system: solves (I - dt/2 g1) x' = (I + dt/2 g1) x.
/// The transfer matrix is the Cayley transform of (dt/2) g1. Throws DomainError
/// when the solve is singular (dt too large).
Vector step_midpoint_free(const Matrix& g1, const Vector& x, double dt);

/// Implicit midpoint with the force held at the interval midpoint:
/// x' - x = dt g1 (x + x')/2 + dt b u_mid. Non-iterative for linear systems.
Vector step_midpoint_forced(const Matrix& g1, const Vector& b_in, double u_mid, const Vector& x,
                            double dt);

/// Iterates the chosen stepper and records `steps` rows (t_k, u_k, y_k),
/// k = 0..steps-1, so steps-1 state updates are taken. Euler samples the input
/// at t_k; midpoint at t_k + dt/2; the exact stepper advances with the exact
/// homogeneous flow and a trapezoidal treatment of the input.
Trajectory simulate(const Realization& real, const Signal& sig, const Vector& x0,
                    const IntegratorSpec& spec, int steps, bool record_states = false);

/// Closed-form filter B^T Q e^{JQt} [int_0^t e^{-JQs} B u(s) ds + x0] evaluated
/// on t_grid (increasing from 0) with trapezoidal quadrature for the convolution.
std::vector<double> filter_output(const PHSystem& sys, const Signal& sig, const Vector& x0,
                                  const std::vector<double>& t_grid);

}  // namespace phlearn
