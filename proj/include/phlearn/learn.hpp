#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "phlearn/dynamics.hpp"
#include "phlearn/types.hpp"

namespace phlearn {

enum class ParamSpace { kThetaCH, kIdent, kAutonomous };
enum class GradMethod { kFiniteDiff, kSensitivity };
enum class RepresentationKind { kControllable, kObservable };
enum class Optimizer { kGradientDescent, kAdam };

/// Unconstrained optimizer variables and their decoding space.
///
/// Raw layouts (n = n_model):
///   theta_ch:   (r_1..r_n | v_1..v_2n), d_i = exp(r_i), v unconstrained.
///   ident:      (r_1..r_n | r'_1..r'_n), d_1 = exp(r_1), d_{i+1} = d_i + exp(r_{i+1}),
///               R_i = exp(r'_i); decodes through params_from_coords.
///   autonomous: (r_1..r_n), d_i = exp(r_i), v = 0.
struct ParamVector {
  ParamSpace space = ParamSpace::kThetaCH;
  Vector raw;
  int n_model = 0;
};

int raw_size(ParamSpace space, int n_model);

struct DecodedParams {
  CHParams params;
  std::optional<CanonicalCoords> coords;  // present for the ident space
};

/// Total by construction: every raw vector decodes to valid CHParams.
DecodedParams decode(const ParamVector& p);

struct TrainConfig {
  double lr = 0.1;
  int epochs = 500;
  IntegratorSpec integrator{StepMethod::kEuler, 0.01};
  RepresentationKind representation = RepresentationKind::kObservable;
  std::uint64_t seed = 0;
  GradMethod grad = GradMethod::kSensitivity;
  // Adaptive steps are required at the reference learning rates: the loss
  // Hessian of the trajectory fit spans four decades, which fixed-step
  // descent cannot cross (it diverges above lr ~ 2/lambda_max).
  Optimizer optimizer = Optimizer::kAdam;
};

/// Mean squared error of the decoded representation simulated from x0 under
/// data.inputs on the data grid. Returns +infinity on numerical blow-up.
double loss(const ParamVector& p, const Vector& x0, const Trajectory& data, const TrainConfig& cfg);

struct Gradients {
  Vector raw;
  Vector x0;
};

/// Gradient of loss with respect to the raw parameters and the initial state.
/// finite_diff: central differences with h_i = 1e-6 (1 + |theta_i|).
/// sensitivity: forward sensitivities propagated through the discrete stepper
/// (exact for all three steppers; parameter Jacobians via forward-mode duals).
Gradients gradient(const ParamVector& p, const Vector& x0, const Trajectory& data,
                   const TrainConfig& cfg);

struct TrainReport {
  std::vector<double> loss_history;
  ParamVector final_params;
  Vector final_x0;
  double final_loss = 0.0;
  double wall_time_s = 0.0;
  bool diverged = false;
};

/// Plain full-batch gradient descent with a single learning rate for the raw
/// parameters and the initial state. Initialization from cfg.seed:
/// raw ~ U(-0.5, 0.5), x0 ~ U(-1, 1). Aborts (diverged = true) after ten
/// consecutive non-finite losses.
TrainReport train(const Trajectory& data, ParamSpace space, int n_model, const TrainConfig& cfg);

/// Autonomous case: learns (d, s0) for the observable representation with no
/// input. Throws DomainError when the data carries a nonzero input.
TrainReport train_autonomous(const Trajectory& data, int n_model, const TrainConfig& cfg);

/// Fully specified uniform draw on [lo, hi) (53 random bits); used instead of
/// std::uniform_real_distribution so seeded runs reproduce bit-for-bit.
double uniform_draw(std::mt19937_64& gen, double lo, double hi);

}  // namespace phlearn
