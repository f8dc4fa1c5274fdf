#include "phlearn/dynamics.hpp"

#include <cmath>

#include "phlearn/sympcore.hpp"

namespace phlearn {

Signal Signal::sine(double amplitude, double omega) {
  Signal s;
  s.kind = SignalKind::kSine;
  s.amplitude = amplitude;
  s.omega = omega;
  return s;
}

Signal Signal::constant(double amplitude) {
  Signal s;
  s.kind = SignalKind::kConstant;
  s.amplitude = amplitude;
  return s;
}

Signal Signal::square(double amplitude, double period) {
  if (period <= 0.0) throw DomainError("Signal::square: period must be positive");
  Signal s;
  s.kind = SignalKind::kSquare;
  s.amplitude = amplitude;
  s.period = period;
  return s;
}

Signal Signal::ramp(double slope) {
  Signal s;
  s.kind = SignalKind::kRamp;
  s.slope = slope;
  return s;
}

Signal Signal::from_samples(std::vector<double> samples, double t0, double dt) {
  if (samples.empty()) throw DomainError("Signal::from_samples: empty sample array");
  if (dt <= 0.0) throw DomainError("Signal::from_samples: dt must be positive");
  Signal s;
  s.kind = SignalKind::kSamples;
  s.samples = std::move(samples);
  s.t0 = t0;
  s.dt = dt;
  return s;
}

double eval_signal(const Signal& s, double t) {
  switch (s.kind) {
    case SignalKind::kSine:
      return s.amplitude * std::sin(s.omega * t);
    case SignalKind::kConstant:
      return s.amplitude;
    case SignalKind::kSquare: {
      const double x = std::sin(2.0 * M_PI * t / s.period);
      return x >= 0.0 ? s.amplitude : -s.amplitude;  // sign(0) := +1
    }
    case SignalKind::kRamp:
      return s.slope * t;
    case SignalKind::kSamples: {
      const long idx = std::lround((t - s.t0) / s.dt);
      if (idx < 0 || idx >= static_cast<long>(s.samples.size())) {
        throw DomainError("eval_signal: sample lookup off-grid");
      }
      return s.samples[static_cast<std::size_t>(idx)];
    }
  }
  throw DomainError("eval_signal: unknown signal kind");
}

Vector step_euler(const Matrix& A, const Vector& b_in, double u, const Vector& x, double dt) {
  if (A.rows() != x.size() || b_in.size() != x.size()) {
    throw DimensionError("step_euler: inconsistent dimensions");
  }
  return x + dt * (A * x + b_in * u);
}

namespace {

Eigen::FullPivLU<Matrix> midpoint_lu(const Matrix& g1, double dt) {
  const Matrix lhs = Matrix::Identity(g1.rows(), g1.cols()) - 0.5 * dt * g1;
  Eigen::FullPivLU<Matrix> lu(lhs);
  if (!lu.isInvertible()) {
    throw DomainError("midpoint step: I - dt/2 g1 is singular; reduce the step size");
  }
  return lu;
}

}  // namespace

Vector step_midpoint_free(const Matrix& g1, const Vector& x, double dt) {
  if (g1.rows() != x.size()) throw DimensionError("step_midpoint_free: inconsistent dimensions");
  const auto lu = midpoint_lu(g1, dt);
  return lu.solve(x + 0.5 * dt * (g1 * x));
}

Vector step_midpoint_forced(const Matrix& g1, const Vector& b_in, double u_mid, const Vector& x,
                            double dt) {
  if (g1.rows() != x.size() || b_in.size() != x.size()) {
    throw DimensionError("step_midpoint_forced: inconsistent dimensions");
  }
  const auto lu = midpoint_lu(g1, dt);
  return lu.solve(x + 0.5 * dt * (g1 * x) + dt * b_in * u_mid);
}

Trajectory simulate(const Realization& real, const Signal& sig, const Vector& x0,
                    const IntegratorSpec& spec, int steps, bool record_states) {
  const Eigen::Index dim = real.dim();
  if (real.A.cols() != dim || real.B.size() != dim || real.C.size() != dim || x0.size() != dim) {
    throw DimensionError("simulate: inconsistent dimensions");
  }
  if (steps < 1) throw DomainError("simulate: steps must be >= 1");
  if (spec.dt <= 0.0) throw DomainError("simulate: dt must be positive");
  const double h = spec.dt;

  Trajectory traj;
  traj.t0 = 0.0;
  traj.dt = h;
  traj.inputs.reserve(static_cast<std::size_t>(steps));
  traj.outputs.reserve(static_cast<std::size_t>(steps));
  if (record_states) traj.states.reserve(static_cast<std::size_t>(steps));

  Matrix phi;  // exact method
  if (spec.method == StepMethod::kExact) phi = expm(real.A, h);
  Eigen::FullPivLU<Matrix> lu;  // midpoint method
  Matrix rhs_half;
  if (spec.method == StepMethod::kMidpoint) {
    lu = midpoint_lu(real.A, h);
    rhs_half = Matrix::Identity(dim, dim) + 0.5 * h * real.A;
  }

  Vector x = x0;
  for (int k = 0; k < steps; ++k) {
    const double t = h * k;
    // Midpoint consumes the force at t + dt/2; the final row takes no step, so
    // its recorded input falls back to the instantaneous sample.
    const bool shift = spec.method == StepMethod::kMidpoint && k + 1 < steps;
    const double u_record = eval_signal(sig, shift ? t + 0.5 * h : t);
    traj.inputs.push_back(u_record);
    traj.outputs.push_back(real.C.dot(x));
    if (record_states) traj.states.push_back(x);
    if (k + 1 == steps) break;

    switch (spec.method) {
      case StepMethod::kEuler:
        x = step_euler(real.A, real.B, u_record, x, h);
        break;
      case StepMethod::kMidpoint:
        x = lu.solve(rhs_half * x + h * real.B * u_record);
        break;
      case StepMethod::kExact: {
        const double u_next = eval_signal(sig, t + h);
        x = phi * x + 0.5 * h * (phi * real.B * u_record + real.B * u_next);
        break;
      }
    }
  }
  return traj;
}

std::vector<double> filter_output(const PHSystem& sys, const Signal& sig, const Vector& x0,
                                  const std::vector<double>& t_grid) {
  const int two_n = 2 * sys.n;
  if (x0.size() != two_n) throw DimensionError("filter_output: x0 has wrong dimension");
  if (t_grid.empty() || std::abs(t_grid.front()) > 1e-14) {
    throw DomainError("filter_output: t_grid must start at 0");
  }
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    if (t_grid[k] <= t_grid[k - 1]) throw DomainError("filter_output: t_grid must be increasing");
  }

  const Matrix a = canonical_J(sys.n) * sys.Q.matrix();
  const RowVector readout = sys.B.transpose() * sys.Q.matrix();

  // Propagators e^{-A t_k} and e^{A t_k} built incrementally; the per-step
  // exponentials are cached while the grid spacing stays constant.
  Matrix backward = Matrix::Identity(two_n, two_n);
  Matrix forward = Matrix::Identity(two_n, two_n);
  Matrix step_back, step_fwd;
  double cached_h = -1.0;

  std::vector<double> out;
  out.reserve(t_grid.size());
  Vector w = Vector::Zero(two_n);
  Vector integrand_prev = sys.B * eval_signal(sig, t_grid[0]);
  out.push_back(readout.dot(w + x0));

  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double h = t_grid[k] - t_grid[k - 1];
    if (h != cached_h) {
      step_back = expm(a, -h);
      step_fwd = expm(a, h);
      cached_h = h;
    }
    backward = backward * step_back;
    forward = forward * step_fwd;
    const Vector integrand = backward * sys.B * eval_signal(sig, t_grid[k]);
    w += 0.5 * h * (integrand_prev + integrand);
    integrand_prev = integrand;
    out.push_back(readout.dot(forward * (w + x0)));
  }
  return out;
}

}  // namespace phlearn
