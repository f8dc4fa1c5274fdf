#include "phlearn/bench.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "phlearn/represent.hpp"
#include "phlearn/sympcore.hpp"

namespace phlearn {

namespace {

Realization system_realization(const PHSystem& sys) {
  Realization r;
  r.A = canonical_J(sys.n) * sys.Q.matrix();
  r.B = sys.B;
  r.C = (sys.B.transpose() * sys.Q.matrix()).eval();
  return r;
}

Realization model_realization(const ParamVector& p, RepresentationKind rep) {
  const DecodedParams decoded = decode(p);
  return rep == RepresentationKind::kControllable ? build_controllable(decoded.params)
                                                  : build_observable(decoded.params);
}

double relative_rms(const std::vector<double>& truth, const std::vector<double>& model) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const double e = model[k] - truth[k];
    num += e * e;
    den += truth[k] * truth[k];
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

Signal named_signal(const std::string& name) {
  if (name == "sine") return Signal::sine(1.0, 1.0);
  if (name == "constant") return Signal::constant(1.0);
  if (name == "square") return Signal::square(1.0, 2.0 * M_PI);
  if (name == "ramp") return Signal::ramp(0.1);
  throw DomainError("unknown test signal '" + name + "'");
}

Json run_circuit(const Scenario& s) {
  const auto& ov = s.overrides;
  const int steps = ov.steps.value_or(1000);
  const int test_steps = ov.test_steps.value_or(4000);
  const double dt = ov.dt.value_or(0.01);
  const int model_dim = ov.model_dim.value_or(5);
  const ParamSpace space = ov.space.value_or(ParamSpace::kThetaCH);
  const std::vector<std::string> signal_names =
      ov.signals.value_or(std::vector<std::string>{"sine", "constant", "square", "ramp"});

  TrainConfig cfg;
  cfg.lr = ov.lr.value_or(0.1);
  cfg.epochs = ov.epochs.value_or(500);
  cfg.integrator = {StepMethod::kEuler, dt};
  cfg.representation = RepresentationKind::kObservable;
  cfg.seed = s.seed;

  const PHSystem sys = circuit_system();
  const Realization truth_real = system_realization(sys);
  std::mt19937_64 gen(s.seed);
  Vector x0(2 * sys.n);
  for (Eigen::Index i = 0; i < x0.size(); ++i) x0(i) = uniform_draw(gen, -1.0, 1.0);

  const Signal train_sig = Signal::sine(1.0, 1.0);
  const IntegratorSpec gen_spec{StepMethod::kEuler, dt};
  const Trajectory train_data = simulate(truth_real, train_sig, x0, gen_spec, steps);
  write_trajectory_csv(s.out_dir / "train.csv", train_data);

  const TrainReport report = train(train_data, space, model_dim, cfg);
  write_json(s.out_dir / ("report_" + to_string(space) + ".json"), report_to_json(report, cfg));

  const Realization model = model_realization(report.final_params, cfg.representation);

  Json summary;
  summary["scenario"] = "circuit";
  summary["seed"] = s.seed;
  summary["space"] = to_string(space);
  summary["epochs"] = cfg.epochs;
  summary["lr"] = cfg.lr;
  summary["dt"] = dt;
  summary["train_steps"] = steps;
  summary["test_steps"] = test_steps;
  summary["final_loss"] = report.final_loss;
  summary["diverged"] = report.diverged;
  {
    const DecodedParams decoded = decode(report.final_params);
    Vector d_sorted = decoded.params.d;
    std::sort(d_sorted.data(), d_sorted.data() + d_sorted.size());
    Json d = Json::array();
    for (Eigen::Index i = 0; i < d_sorted.size(); ++i) d.push_back(d_sorted(i));
    summary["learned_d_sorted"] = d;
  }

  Json errors;
  for (const std::string& name : signal_names) {
    const Signal sig = named_signal(name);
    const Trajectory truth = simulate(truth_real, sig, x0, gen_spec, test_steps);
    const Trajectory predicted =
        simulate(model, sig, report.final_x0, gen_spec, test_steps);
    write_comparison_csv(s.out_dir / ("test_" + name + ".csv"), truth, predicted.outputs);
    errors[name] = relative_rms(truth.outputs, predicted.outputs);
  }
  summary["test_relative_rms"] = std::move(errors);
  write_json(s.out_dir / "summary.json", summary);
  return summary;
}

Json run_fk(const Scenario& s) {
  const auto& ov = s.overrides;
  const int steps = ov.steps.value_or(1000);
  const double dt = ov.dt.value_or(0.01);
  const int model_dim = ov.model_dim.value_or(2);

  TrainConfig cfg;
  cfg.lr = ov.lr.value_or(0.02);
  cfg.epochs = ov.epochs.value_or(1500);
  cfg.integrator = {StepMethod::kEuler, dt};
  cfg.representation = RepresentationKind::kObservable;
  cfg.seed = s.seed;

  const PHSystem sys = fk_system();
  const Realization truth_real = system_realization(sys);
  const Vector x0 = fk_initial_state();
  const Signal train_sig = Signal::sine(1.0, 1.0);
  const IntegratorSpec gen_spec{StepMethod::kEuler, dt};
  const Trajectory train_data = simulate(truth_real, train_sig, x0, gen_spec, steps);
  write_trajectory_csv(s.out_dir / "train.csv", train_data);

  std::vector<ParamSpace> spaces{ParamSpace::kThetaCH, ParamSpace::kIdent};
  if (ov.space) spaces = {*ov.space};

  Json summary;
  summary["scenario"] = "fk";
  summary["seed"] = s.seed;
  summary["epochs"] = cfg.epochs;
  summary["lr"] = cfg.lr;
  summary["dt"] = dt;
  summary["train_steps"] = steps;
  {
    const Vector d_true = symplectic_eigenvalues(sys.Q);
    Json d = Json::array();
    for (Eigen::Index i = 0; i < d_true.size(); ++i) d.push_back(d_true(i));
    summary["true_symplectic_eigenvalues"] = d;
  }

  for (ParamSpace space : spaces) {
    const TrainReport report = train(train_data, space, model_dim, cfg);
    write_json(s.out_dir / ("report_" + to_string(space) + ".json"), report_to_json(report, cfg));
    Json entry;
    entry["final_loss"] = report.final_loss;
    entry["diverged"] = report.diverged;
    const DecodedParams decoded = decode(report.final_params);
    if (decoded.coords) {
      Json d = Json::array();
      for (Eigen::Index i = 0; i < decoded.coords->d_up.size(); ++i) {
        d.push_back(decoded.coords->d_up(i));
      }
      entry["learned_d_up"] = d;
    } else {
      Vector ds = decoded.params.d;
      std::sort(ds.data(), ds.data() + ds.size());
      Json d = Json::array();
      for (Eigen::Index i = 0; i < ds.size(); ++i) d.push_back(ds(i));
      entry["learned_d_sorted"] = d;
    }
    summary[to_string(space)] = std::move(entry);
  }
  write_json(s.out_dir / "summary.json", summary);
  return summary;
}

}  // namespace

PHSystem circuit_system() {
  const int n = 5;
  Vector b(2 * n);
  b << 0, 0, 0, 0, 0, 1, 1, 1, 1, 1;
  return PHSystem(n, SPDMatrix(Matrix::Identity(2 * n, 2 * n)), b);
}

PHSystem fk_system() {
  Matrix q = Matrix::Identity(4, 4);
  q(0, 0) = 2.0;
  q(0, 1) = -1.0;
  q(1, 0) = -1.0;
  q(1, 1) = 1.0;
  Vector b(4);
  b << 0, 0, 1, 0;
  return PHSystem(2, SPDMatrix(q), b);
}

Vector fk_initial_state() {
  Vector x0(4);
  x0 << 2, 1, -3, -3;
  return x0;
}

Json run_scenario(const Scenario& s) {
  std::filesystem::create_directories(s.out_dir);
  if (s.name == "circuit") return run_circuit(s);
  if (s.name == "fk" || s.name == "frenkel_kontorova") return run_fk(s);
  throw DomainError("unknown scenario '" + s.name + "'");
}

}  // namespace phlearn
