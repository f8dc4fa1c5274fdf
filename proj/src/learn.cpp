#include "phlearn/learn.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "phlearn/detail/coeffs.hpp"
#include "phlearn/detail/dual.hpp"
#include "phlearn/represent.hpp"
#include "phlearn/sympcore.hpp"

namespace phlearn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Totality against floating point: raw entries are clamped to +-300 before
// exponentiation (plain exp would under- or overflow outside), and the
// cumulative ident sums get a relative nudge when an increment falls below
// the resolution of the running sum. Both only engage after the optimizer has
// already left the finite-loss region.
template <typename Scalar>
Scalar clamped_exp(const Scalar& x) {
  using detail::exp;
  using std::exp;
  const double v = detail::value(x);
  if (v > 300.0) return Scalar(std::exp(300.0));
  if (v < -300.0) return Scalar(std::exp(-300.0));
  return exp(x);
}

template <typename Scalar>
void decode_core(ParamSpace space, int n, const std::vector<Scalar>& raw, std::vector<Scalar>& d,
                 std::vector<Scalar>& v) {
  using detail::sqrt;
  using std::sqrt;
  d.assign(static_cast<std::size_t>(n), Scalar(0.0));
  v.assign(static_cast<std::size_t>(2 * n), Scalar(0.0));
  switch (space) {
    case ParamSpace::kThetaCH:
      for (int i = 0; i < n; ++i) d[i] = clamped_exp(raw[i]);
      for (int j = 0; j < 2 * n; ++j) v[j] = raw[n + j];
      break;
    case ParamSpace::kIdent: {
      Scalar acc = clamped_exp(raw[0]);
      d[0] = acc;
      for (int i = 1; i < n; ++i) {
        acc = acc + clamped_exp(raw[i]);
        if (detail::value(acc) <= detail::value(d[i - 1])) {
          acc = d[i - 1] * Scalar(1.0 + 1e-12);
        }
        d[i] = acc;
      }
      for (int i = 0; i < n; ++i) v[i] = sqrt(clamped_exp(raw[n + i]));
      break;
    }
    case ParamSpace::kAutonomous:
      for (int i = 0; i < n; ++i) d[i] = clamped_exp(raw[i]);
      break;
  }
}

struct RealizationParts {
  Vector a;  // characteristic coefficients, length 2n
  Vector c;  // readout coefficients (c_1, ..., c_{2n-1}), length n
};

template <typename Scalar>
void coeffs_core(ParamSpace space, int n, const std::vector<Scalar>& raw, std::vector<Scalar>& a,
                 std::vector<Scalar>& c) {
  std::vector<Scalar> d, v;
  decode_core(space, n, raw, d, v);
  a = detail::char_poly_coeffs(d);
  if (space == ParamSpace::kAutonomous) {
    c.assign(static_cast<std::size_t>(n), Scalar(0.0));
  } else {
    c = detail::c_coeffs_impl(d, v);
  }
}

Realization assemble(RepresentationKind rep, ParamSpace space, int n, const Vector& a,
                     const Vector& c) {
  Realization r;
  const int dim = 2 * n;
  Matrix a_ctr = Matrix::Zero(dim, dim);
  for (int i = 0; i + 1 < dim; ++i) a_ctr(i, i + 1) = 1.0;
  a_ctr.row(dim - 1) = -a.transpose();
  RowVector c_ctr = RowVector::Zero(dim);
  for (int j = 0; j < n; ++j) c_ctr(2 * j + 1) = c(n - 1 - j);

  if (rep == RepresentationKind::kControllable) {
    r.A = a_ctr;
    r.B = Vector::Zero(dim);
    r.B(dim - 1) = 1.0;
    r.C = c_ctr;
  } else {
    r.A = a_ctr.transpose();
    r.B = c_ctr.transpose();
    r.C = RowVector::Zero(dim);
    r.C(dim - 1) = 1.0;
  }
  if (space == ParamSpace::kAutonomous) r.B = Vector::Zero(dim);
  return r;
}

Realization build_representation(const ParamVector& p, RepresentationKind rep) {
  std::vector<double> raw(p.raw.data(), p.raw.data() + p.raw.size());
  std::vector<double> a, c;
  coeffs_core(p.space, p.n_model, raw, a, c);
  Vector av = Eigen::Map<const Vector>(a.data(), static_cast<Eigen::Index>(a.size()));
  Vector cv = Eigen::Map<const Vector>(c.data(), static_cast<Eigen::Index>(c.size()));
  if (!av.allFinite() || !cv.allFinite()) {
    throw DomainError("build_representation: coefficients overflowed");
  }
  const RepresentationKind used = p.space == ParamSpace::kAutonomous
                                      ? RepresentationKind::kObservable
                                      : rep;
  return assemble(used, p.space, p.n_model, av, cv);
}

void validate(const ParamVector& p, const Vector& x0, const Trajectory& data) {
  if (p.n_model < 1) throw DimensionError("learn: n_model must be >= 1");
  if (p.raw.size() != raw_size(p.space, p.n_model)) {
    throw DimensionError("learn: raw vector has wrong length");
  }
  if (x0.size() != 2 * p.n_model) throw DimensionError("learn: x0 has wrong dimension");
  if (data.inputs.empty() || data.inputs.size() != data.outputs.size()) {
    throw DimensionError("learn: data is empty or inconsistent");
  }
  if (data.dt <= 0.0) throw DomainError("learn: data.dt must be positive");
}

/// Simulated outputs of the decoded representation on the data grid.
/// Returns false when the simulation leaves the finite range.
bool predict(const Realization& real, const Vector& x0, const Trajectory& data,
             StepMethod method, std::vector<double>& yhat) {
  const Signal sig = Signal::from_samples(data.inputs, data.t0, data.dt);
  const IntegratorSpec spec{method, data.dt};
  const Trajectory traj =
      simulate(real, sig, x0, spec, static_cast<int>(data.size()), /*record_states=*/false);
  yhat = traj.outputs;
  for (double y : yhat) {
    if (!std::isfinite(y)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Sensitivity machinery.

/// Per-direction derivative of the realization: only the companion row/column
/// (-da) and the readout pattern (dc) can vary; the derivative of B is the
/// readout pattern for the observable family and zero otherwise.
struct RealizationTangent {
  Matrix dA;
  Vector dB;
  RowVector dC;
};

std::vector<RealizationTangent> realization_tangents(const ParamVector& p,
                                                     RepresentationKind rep) {
  using detail::Dual;
  const int n = p.n_model;
  const int dim = 2 * n;
  const int np = static_cast<int>(p.raw.size());
  const RepresentationKind used =
      p.space == ParamSpace::kAutonomous ? RepresentationKind::kObservable : rep;

  std::vector<RealizationTangent> tangents;
  tangents.reserve(static_cast<std::size_t>(np));
  std::vector<Dual> raw(static_cast<std::size_t>(np));
  for (int i = 0; i < np; ++i) raw[static_cast<std::size_t>(i)] = Dual(p.raw(i), 0.0);

  for (int dir = 0; dir < np; ++dir) {
    raw[static_cast<std::size_t>(dir)].g = 1.0;
    std::vector<Dual> a, c;
    coeffs_core(p.space, n, raw, a, c);
    raw[static_cast<std::size_t>(dir)].g = 0.0;

    RowVector da(dim);
    for (int i = 0; i < dim; ++i) da(i) = a[static_cast<std::size_t>(i)].g;
    RowVector dc_ctr = RowVector::Zero(dim);
    for (int j = 0; j < n; ++j) dc_ctr(2 * j + 1) = c[static_cast<std::size_t>(n - 1 - j)].g;

    RealizationTangent t;
    t.dA = Matrix::Zero(dim, dim);
    if (used == RepresentationKind::kControllable) {
      t.dA.row(dim - 1) = -da;
      t.dB = Vector::Zero(dim);
      t.dC = dc_ctr;
    } else {
      t.dA.col(dim - 1) = -da.transpose();
      t.dB = p.space == ParamSpace::kAutonomous ? Vector::Zero(dim) : Vector(dc_ctr.transpose());
      t.dC = RowVector::Zero(dim);
    }
    tangents.push_back(std::move(t));
  }
  return tangents;
}

/// Frechet derivative of expm(A h) in direction E via the block-triangular
/// exponential exp(h [[A, 0], [E, A]]).
Matrix expm_frechet(const Matrix& A, const Matrix& E, double h) {
  const Eigen::Index dim = A.rows();
  Matrix big = Matrix::Zero(2 * dim, 2 * dim);
  big.topLeftCorner(dim, dim) = A;
  big.bottomRightCorner(dim, dim) = A;
  big.bottomLeftCorner(dim, dim) = E;
  return expm(big, h).bottomLeftCorner(dim, dim);
}

Gradients gradient_sensitivity(const ParamVector& p, const Vector& x0, const Trajectory& data,
                               const TrainConfig& cfg) {
  const int dim = 2 * p.n_model;
  const int np = static_cast<int>(p.raw.size());
  const std::size_t steps = data.size();
  const double h = data.dt;
  const StepMethod method = cfg.integrator.method;

  const Realization real = build_representation(p, cfg.representation);
  const std::vector<RealizationTangent> tan = realization_tangents(p, cfg.representation);
  const Signal sig = Signal::from_samples(data.inputs, data.t0, data.dt);

  // Stepper pieces shared across directions.
  Eigen::FullPivLU<Matrix> lu;
  Matrix rhs_half;
  Matrix phi;
  std::vector<Matrix> dphi(static_cast<std::size_t>(np));
  if (method == StepMethod::kMidpoint) {
    const Matrix lhs = Matrix::Identity(dim, dim) - 0.5 * h * real.A;
    lu.compute(lhs);
    if (!lu.isInvertible()) throw DomainError("gradient: midpoint step is singular");
    rhs_half = Matrix::Identity(dim, dim) + 0.5 * h * real.A;
  } else if (method == StepMethod::kExact) {
    phi = expm(real.A, h);
    for (int i = 0; i < np; ++i) {
      dphi[static_cast<std::size_t>(i)] = expm_frechet(real.A, tan[static_cast<std::size_t>(i)].dA, h);
    }
  }

  Vector x = x0;
  Matrix sens = Matrix::Zero(dim, np);    // d x_k / d raw_i
  Matrix state_jac = Matrix::Identity(dim, dim);  // d x_k / d x0

  Vector grad_raw = Vector::Zero(np);
  Vector grad_x0 = Vector::Zero(dim);

  for (std::size_t k = 0; k < steps; ++k) {
    const double t = h * static_cast<double>(k);
    const double yhat = real.C.dot(x);
    const double resid = yhat - data.outputs[k];
    const double w = 2.0 / static_cast<double>(steps) * resid;
    for (int i = 0; i < np; ++i) {
      grad_raw(i) += w * (tan[static_cast<std::size_t>(i)].dC.dot(x) + real.C.dot(sens.col(i)));
    }
    grad_x0 += w * (real.C * state_jac).transpose();
    if (k + 1 == steps) break;

    switch (method) {
      case StepMethod::kEuler: {
        const double u = eval_signal(sig, t);
        const Vector x_next = x + h * (real.A * x + real.B * u);
        for (int i = 0; i < np; ++i) {
          const auto& ti = tan[static_cast<std::size_t>(i)];
          sens.col(i) += h * (real.A * sens.col(i) + ti.dA * x + ti.dB * u);
        }
        state_jac += h * (real.A * state_jac).eval();
        x = x_next;
        break;
      }
      case StepMethod::kMidpoint: {
        const double u = eval_signal(sig, t + 0.5 * h);
        const Vector x_next = lu.solve(rhs_half * x + h * real.B * u);
        for (int i = 0; i < np; ++i) {
          const auto& ti = tan[static_cast<std::size_t>(i)];
          sens.col(i) = lu.solve(0.5 * h * (ti.dA * (x + x_next)) + rhs_half * sens.col(i) +
                                 h * ti.dB * u);
        }
        state_jac = lu.solve(rhs_half * state_jac);
        x = x_next;
        break;
      }
      case StepMethod::kExact: {
        const double u = eval_signal(sig, t);
        const double u_next = eval_signal(sig, t + h);
        const Vector x_next = phi * x + 0.5 * h * (phi * real.B * u + real.B * u_next);
        for (int i = 0; i < np; ++i) {
          const auto& ti = tan[static_cast<std::size_t>(i)];
          const Matrix& dphi_i = dphi[static_cast<std::size_t>(i)];
          sens.col(i) = phi * sens.col(i) + dphi_i * x +
                        0.5 * h * (dphi_i * real.B * u + phi * ti.dB * u + ti.dB * u_next);
        }
        state_jac = (phi * state_jac).eval();
        x = x_next;
        break;
      }
    }
  }
  return {grad_raw, grad_x0};
}

Gradients gradient_finite_diff(const ParamVector& p, const Vector& x0, const Trajectory& data,
                               const TrainConfig& cfg) {
  const auto eval = [&](const ParamVector& pp, const Vector& xx) { return loss(pp, xx, data, cfg); };

  Vector grad_raw(p.raw.size());
  for (Eigen::Index i = 0; i < p.raw.size(); ++i) {
    const double step = 1e-6 * (1.0 + std::abs(p.raw(i)));
    ParamVector plus = p;
    ParamVector minus = p;
    plus.raw(i) += step;
    minus.raw(i) -= step;
    grad_raw(i) = (eval(plus, x0) - eval(minus, x0)) / (2.0 * step);
  }
  Vector grad_x0(x0.size());
  for (Eigen::Index j = 0; j < x0.size(); ++j) {
    const double step = 1e-6 * (1.0 + std::abs(x0(j)));
    Vector plus = x0;
    Vector minus = x0;
    plus(j) += step;
    minus(j) -= step;
    grad_x0(j) = (eval(p, plus) - eval(p, minus)) / (2.0 * step);
  }
  return {grad_raw, grad_x0};
}

TrainReport run_descent(const Trajectory& data, ParamSpace space, int n_model,
                        const TrainConfig& cfg) {
  if (cfg.lr <= 0.0) throw DomainError("train: lr must be positive");
  if (cfg.epochs < 0) throw DomainError("train: epochs must be >= 0");

  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 gen(cfg.seed);
  ParamVector p;
  p.space = space;
  p.n_model = n_model;
  p.raw = Vector(raw_size(space, n_model));
  for (Eigen::Index i = 0; i < p.raw.size(); ++i) p.raw(i) = uniform_draw(gen, -0.5, 0.5);
  Vector x0(2 * n_model);
  for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = uniform_draw(gen, -1.0, 1.0);

  TrainReport report;
  report.loss_history.reserve(static_cast<std::size_t>(cfg.epochs));
  const int np = static_cast<int>(p.raw.size());
  const int nx = static_cast<int>(x0.size());
  Vector m1 = Vector::Zero(np + nx);  // Adam moments
  Vector m2 = Vector::Zero(np + nx);
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kAdamEps = 1e-8;
  int strikes = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double value = loss(p, x0, data, cfg);
    report.loss_history.push_back(value);
    if (!std::isfinite(value)) {
      if (++strikes >= 10) {
        report.diverged = true;
        break;
      }
      continue;
    }
    strikes = 0;
    const Gradients g = gradient(p, x0, data, cfg);
    if (!g.raw.allFinite() || !g.x0.allFinite()) {
      if (++strikes >= 10) {
        report.diverged = true;
        break;
      }
      continue;
    }
    if (cfg.optimizer == Optimizer::kGradientDescent) {
      p.raw -= cfg.lr * g.raw;
      x0 -= cfg.lr * g.x0;
    } else {
      Vector grad(np + nx);
      grad << g.raw, g.x0;
      m1 = kBeta1 * m1 + (1.0 - kBeta1) * grad;
      m2 = kBeta2 * m2 + (1.0 - kBeta2) * grad.cwiseProduct(grad);
      const double c1 = 1.0 - std::pow(kBeta1, epoch + 1);
      const double c2 = 1.0 - std::pow(kBeta2, epoch + 1);
      const Vector step =
          cfg.lr * (m1 / c1).cwiseQuotient(((m2 / c2).cwiseSqrt().array() + kAdamEps).matrix());
      p.raw -= step.head(np);
      x0 -= step.tail(nx);
    }
  }

  report.final_params = p;
  report.final_x0 = x0;
  report.final_loss = loss(p, x0, data, cfg);
  report.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace

int raw_size(ParamSpace space, int n_model) {
  switch (space) {
    case ParamSpace::kThetaCH:
      return 3 * n_model;
    case ParamSpace::kIdent:
      return 2 * n_model;
    case ParamSpace::kAutonomous:
      return n_model;
  }
  throw DomainError("raw_size: unknown parameter space");
}

DecodedParams decode(const ParamVector& p) {
  if (p.n_model < 1) throw DimensionError("decode: n_model must be >= 1");
  if (p.raw.size() != raw_size(p.space, p.n_model)) {
    throw DimensionError("decode: raw vector has wrong length");
  }
  std::vector<double> raw(p.raw.data(), p.raw.data() + p.raw.size());
  std::vector<double> d, v;
  decode_core(p.space, p.n_model, raw, d, v);
  CHParams params(p.n_model,
                  Eigen::Map<const Vector>(d.data(), static_cast<Eigen::Index>(d.size())),
                  Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
  DecodedParams out{params, std::nullopt};
  if (p.space == ParamSpace::kIdent) {
    Vector radii(p.n_model);
    for (int i = 0; i < p.n_model; ++i) radii(i) = clamped_exp<double>(p.raw(p.n_model + i));
    out.coords = CanonicalCoords(params.d, radii);
  }
  return out;
}

double loss(const ParamVector& p, const Vector& x0, const Trajectory& data,
            const TrainConfig& cfg) {
  validate(p, x0, data);
  try {
    const Realization real = build_representation(p, cfg.representation);
    std::vector<double> yhat;
    if (!predict(real, x0, data, cfg.integrator.method, yhat)) return kInf;
    double acc = 0.0;
    for (std::size_t k = 0; k < yhat.size(); ++k) {
      const double r = yhat[k] - data.outputs[k];
      acc += r * r;
    }
    const double value = acc / static_cast<double>(yhat.size());
    return std::isfinite(value) ? value : kInf;
  } catch (const DomainError&) {
    // Blow-up of the decoded coefficients or a singular implicit step counts
    // as a non-finite simulation.
    return kInf;
  }
}

Gradients gradient(const ParamVector& p, const Vector& x0, const Trajectory& data,
                   const TrainConfig& cfg) {
  validate(p, x0, data);
  if (cfg.grad == GradMethod::kFiniteDiff) return gradient_finite_diff(p, x0, data, cfg);
  return gradient_sensitivity(p, x0, data, cfg);
}

TrainReport train(const Trajectory& data, ParamSpace space, int n_model, const TrainConfig& cfg) {
  if (data.inputs.empty()) throw DimensionError("train: data is empty");
  if (space == ParamSpace::kAutonomous) return train_autonomous(data, n_model, cfg);
  return run_descent(data, space, n_model, cfg);
}

TrainReport train_autonomous(const Trajectory& data, int n_model, const TrainConfig& cfg) {
  for (double u : data.inputs) {
    if (u != 0.0) throw DomainError("train_autonomous: data must have zero input");
  }
  return run_descent(data, ParamSpace::kAutonomous, n_model, cfg);
}

double uniform_draw(std::mt19937_64& gen, double lo, double hi) {
  const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * unit;
}

}  // namespace phlearn
