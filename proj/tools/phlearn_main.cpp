// Command-line front end: decomposition, simulation, equivalence checks,
// training, experiment reproduction, and dimension lifting.
//
// Exit codes: 0 success/equivalent, 1 not equivalent, 2 domain error,
// 3 training divergence, 64 usage or parse error.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "phlearn/bench.hpp"
#include "phlearn/dynamics.hpp"
#include "phlearn/io.hpp"
#include "phlearn/learn.hpp"
#include "phlearn/represent.hpp"
#include "phlearn/sympcore.hpp"

namespace fs = std::filesystem;
using namespace phlearn;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotEquivalent = 1;
constexpr int kExitDomain = 2;
constexpr int kExitDiverged = 3;
constexpr int kExitUsage = 64;

struct GlobalOpts {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  double tol = 1e-8;
};

Json vector_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector parse_vector_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      values.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ParseError("invalid number '" + cell + "' in vector list");
    }
  }
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

int cmd_decompose(const GlobalOpts& g, const std::string& matrix_file, const std::string& output) {
  const Matrix q = read_matrix_auto(matrix_file);
  const SPDMatrix spd(q);
  const WilliamsonFactors w = williamson(spd);

  Matrix dd = Matrix::Zero(q.rows(), q.cols());
  dd.diagonal().head(w.d.size()) = w.d;
  dd.diagonal().tail(w.d.size()) = w.d;
  const double residual = (w.S.transpose() * dd * w.S - spd.matrix()).norm() / spd.matrix().norm();

  Json out;
  out["d"] = vector_json(w.d);
  out["S"] = matrix_json(w.S);
  out["residual"] = residual;
  const fs::path path = fs::path(g.out_dir) / output;
  write_json(path, out);

  std::cout << "symplectic eigenvalues d =";
  for (Eigen::Index i = 0; i < w.d.size(); ++i) std::cout << ' ' << w.d(i);
  std::cout << "\nreconstruction residual = " << residual << "\nS written to " << path.string()
            << "\n";
  return residual <= kReconstructTol ? kExitOk : kExitDomain;
}

int cmd_simulate(const GlobalOpts& g, const std::string& system_file, const std::string& signal,
                 double amplitude, double omega, double period, double slope,
                 const std::string& x0_text, const std::string& method, double dt, int steps,
                 bool record_states, bool energy, const std::string& output) {
  const PHSystem sys = read_system_json(system_file);
  Realization real;
  real.A = canonical_J(sys.n) * sys.Q.matrix();
  real.B = sys.B;
  real.C = (sys.B.transpose() * sys.Q.matrix()).eval();

  Signal sig;
  if (signal == "sine") {
    sig = Signal::sine(amplitude, omega);
  } else if (signal == "constant") {
    sig = Signal::constant(amplitude);
  } else if (signal == "square") {
    sig = Signal::square(amplitude, period);
  } else if (signal == "ramp") {
    sig = Signal::ramp(slope);
  } else {
    throw ParseError("unknown signal '" + signal + "'");
  }

  Vector x0 = Vector::Zero(2 * sys.n);
  if (!x0_text.empty()) {
    x0 = parse_vector_list(x0_text);
    if (x0.size() != 2 * sys.n) throw DimensionError("--x0 has wrong length");
  }

  const IntegratorSpec spec{step_method_from_string(method), dt};
  const Trajectory traj = simulate(real, sig, x0, spec, steps, record_states || energy);

  const fs::path path = fs::path(g.out_dir) / output;
  if (energy) {
    // Same table as the trajectory CSV plus the Hamiltonian H = z^T Q z / 2.
    std::ofstream outf(path);
    if (!outf) throw ParseError("cannot open file for writing: " + path.string());
    outf << "t,u,y";
    if (record_states) {
      for (Eigen::Index i = 0; i < 2 * sys.n; ++i) outf << ",x" << (i + 1);
    }
    outf << ",H\n";
    char buf[40];
    const auto fmt = [&buf](double x) {
      std::snprintf(buf, sizeof(buf), "%.17g", x);
      return std::string(buf);
    };
    for (std::size_t k = 0; k < traj.size(); ++k) {
      const Vector& x = traj.states[k];
      outf << fmt(traj.dt * static_cast<double>(k)) << ',' << fmt(traj.inputs[k]) << ','
           << fmt(traj.outputs[k]);
      if (record_states) {
        for (Eigen::Index i = 0; i < x.size(); ++i) outf << ',' << fmt(x(i));
      }
      outf << ',' << fmt(0.5 * x.dot(sys.Q.matrix() * x)) << "\n";
    }
  } else {
    Trajectory to_write = traj;
    if (!record_states) to_write.states.clear();
    write_trajectory_csv(path, to_write);
  }
  std::cout << "wrote " << traj.size() << " rows to " << path.string() << "\n";
  return kExitOk;
}

int cmd_equiv(const GlobalOpts& g, const std::string& file1, const std::string& file2,
              const std::string& mode, const std::string& output) {
  const CHParams p1 = read_params_json(file1);
  const CHParams p2 = read_params_json(file2);
  if (p1.n != p2.n) throw DimensionError("equiv: parameter files have different n");

  Json verdict;
  verdict["mode"] = mode;
  bool equivalent = false;
  if (mode == "sys") {
    equivalent = sys_equivalent(p1, p2, g.tol);
    verdict["a_1"] = vector_json(poly_coeffs(p1.d).a);
    verdict["a_2"] = vector_json(poly_coeffs(p2.d).a);
    verdict["c_1"] = vector_json(c_coeffs(p1));
    verdict["c_2"] = vector_json(c_coeffs(p2));
  } else if (mode == "filter") {
    equivalent = filter_equivalent_zero_state(p1, p2, g.tol);
    verdict["e_1"] = vector_json(filter_invariants(p1));
    verdict["e_2"] = vector_json(filter_invariants(p2));
  } else {
    throw ParseError("unknown mode '" + mode + "' (use sys or filter)");
  }
  verdict["equivalent"] = equivalent;
  verdict["tol"] = g.tol;
  if (!output.empty()) write_json(fs::path(g.out_dir) / output, verdict);
  std::cout << verdict.dump(2) << "\n";
  return equivalent ? kExitOk : kExitNotEquivalent;
}

int cmd_train(const GlobalOpts& g, const std::string& data_file, const std::string& space_name,
              int dim, double lr, int epochs, const std::string& method,
              const std::string& representation, const std::string& grad,
              const std::string& output) {
  const Trajectory data = read_trajectory_csv(data_file);
  TrainConfig cfg;
  cfg.lr = lr;
  cfg.epochs = epochs;
  cfg.integrator = {step_method_from_string(method), data.dt};
  cfg.representation = representation_from_string(representation);
  cfg.grad = grad_method_from_string(grad);
  cfg.seed = g.seed;

  const ParamSpace space = param_space_from_string(space_name);
  const TrainReport report = train(data, space, dim, cfg);
  write_json(fs::path(g.out_dir) / output, report_to_json(report, cfg));
  std::cout << "final loss = " << report.final_loss << "\n";
  if (report.diverged) {
    std::cerr << "training diverged; partial report written\n";
    return kExitDiverged;
  }
  return kExitOk;
}

int cmd_experiment(const GlobalOpts& g, const std::string& name, Scenario scenario) {
  if (name != "circuit" && name != "fk") throw ParseError("unknown experiment '" + name + "'");
  scenario.name = name;
  scenario.seed = g.seed;
  scenario.out_dir = fs::path(g.out_dir) / name;
  const Json summary = run_scenario(scenario);
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_embed(const GlobalOpts& g, const std::string& input_file, int m,
              const std::string& output) {
  const Json j = read_json(input_file);
  const fs::path path = fs::path(g.out_dir) / output;
  if (j.is_object() && j.contains("Q")) {
    const PHSystem sys = read_system_json(input_file);
    const EmbeddedSystem lifted = embed_system(sys, m);
    write_system_json(path, lifted.system);
    std::cout << "embedded system (n=" << sys.n << " -> m=" << m << ") written to "
              << path.string() << "\n";
  } else if (j.is_object() && j.contains("d")) {
    const CHParams p = read_params_json(input_file);
    const CHParams extended = extend_params(p, m);
    write_params_json(path, extended);
    std::cout << "extended params (n=" << p.n << " -> m=" << m << ") written to " << path.string()
              << "\n";
  } else {
    throw ParseError("embed: input must be a system file (Q,B) or a params file (d,v)");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving identification of SISO linear port-Hamiltonian systems"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "Seed for every random choice");
  app.add_option("--out-dir", g.out_dir, "Directory for output files");
  app.add_option("--tol", g.tol, "Comparison tolerance");

  // decompose
  std::string matrix_file, decompose_out = "decompose.json";
  auto* decompose = app.add_subcommand("decompose", "Williamson normal form of an SPD matrix");
  decompose->add_option("matrix", matrix_file, "Matrix file (.csv or .json)")->required();
  decompose->add_option("-o,--output", decompose_out, "Output JSON filename");

  // simulate
  std::string system_file, sim_signal = "sine", sim_x0, sim_method = "euler",
              sim_out = "trajectory.csv";
  double sim_amp = 1.0, sim_omega = 1.0, sim_period = 2.0 * M_PI, sim_slope = 0.1, sim_dt = 0.01;
  int sim_steps = 1000;
  bool sim_states = false, sim_energy = false;
  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate a port-Hamiltonian system");
  simulate_cmd->add_option("system", system_file, "System JSON file")->required();
  simulate_cmd->add_option("--signal", sim_signal, "sine|constant|square|ramp");
  simulate_cmd->add_option("--amplitude", sim_amp, "Signal amplitude");
  simulate_cmd->add_option("--omega", sim_omega, "Sine angular frequency (rad/s)");
  simulate_cmd->add_option("--period", sim_period, "Square period (s)");
  simulate_cmd->add_option("--slope", sim_slope, "Ramp slope (1/s)");
  simulate_cmd->add_option("--x0", sim_x0, "Initial state as comma-separated list");
  simulate_cmd->add_option("--method", sim_method, "euler|midpoint|exact");
  simulate_cmd->add_option("--dt", sim_dt, "Step size (s)");
  simulate_cmd->add_option("--steps", sim_steps, "Number of recorded samples");
  simulate_cmd->add_flag("--states", sim_states, "Record state columns");
  simulate_cmd->add_flag("--energy", sim_energy, "Append a Hamiltonian column");
  simulate_cmd->add_option("-o,--output", sim_out, "Output CSV filename");

  // equiv
  std::string equiv_file1, equiv_file2, equiv_mode = "sys", equiv_out;
  auto* equiv = app.add_subcommand("equiv", "Equivalence of two (d, v) parameter files");
  equiv->add_option("params1", equiv_file1, "First params JSON file")->required();
  equiv->add_option("params2", equiv_file2, "Second params JSON file")->required();
  equiv->add_option("--mode", equiv_mode, "sys|filter");
  equiv->add_option("-o,--output", equiv_out, "Also write the verdict JSON here");

  // train
  std::string train_data_file, train_space = "theta_ch", train_method = "euler",
              train_rep = "observable", train_grad = "sensitivity", train_out = "report.json";
  int train_dim = 1, train_epochs = 500;
  double train_lr = 0.1;
  auto* train_cmd = app.add_subcommand("train", "Fit a Hamiltonian representation to a trajectory");
  train_cmd->add_option("data", train_data_file, "Trajectory CSV")->required();
  train_cmd->add_option("--space", train_space, "theta_ch|ident|autonomous");
  train_cmd->add_option("--dim", train_dim, "Model n (state dimension 2n)")->required();
  train_cmd->add_option("--lr", train_lr, "Learning rate");
  train_cmd->add_option("--epochs", train_epochs, "Gradient-descent epochs");
  train_cmd->add_option("--method", train_method, "euler|midpoint|exact");
  train_cmd->add_option("--representation", train_rep, "controllable|observable");
  train_cmd->add_option("--grad", train_grad, "finite_diff|sensitivity");
  train_cmd->add_option("-o,--output", train_out, "Report JSON filename");

  // experiment
  std::string exp_name;
  Scenario scenario;
  int exp_steps = -1, exp_epochs = -1, exp_model_dim = -1, exp_test_steps = -1;
  double exp_dt = -1.0, exp_lr = -1.0;
  std::string exp_space;
  auto* experiment = app.add_subcommand("experiment", "Reproduce a paper-scale experiment");
  experiment->add_option("name", exp_name, "circuit|fk")->required();
  experiment->add_option("--steps", exp_steps, "Training steps");
  experiment->add_option("--test-steps", exp_test_steps, "Evaluation steps");
  experiment->add_option("--dt", exp_dt, "Step size (s)");
  experiment->add_option("--lr", exp_lr, "Learning rate");
  experiment->add_option("--epochs", exp_epochs, "Training epochs");
  experiment->add_option("--model-dim", exp_model_dim, "Model n");
  experiment->add_option("--space", exp_space, "Restrict to one parameter space");

  // embed
  std::string embed_file, embed_out = "embedded.json";
  int embed_m = 0;
  auto* embed = app.add_subcommand("embed", "Lift a system or params file to dimension 2m");
  embed->add_option("input", embed_file, "System or params JSON file")->required();
  embed->add_option("-m,--target", embed_m, "Target half-dimension m")->required();
  embed->add_option("-o,--output", embed_out, "Output filename");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*decompose) return cmd_decompose(g, matrix_file, decompose_out);
    if (*simulate_cmd) {
      return cmd_simulate(g, system_file, sim_signal, sim_amp, sim_omega, sim_period, sim_slope,
                          sim_x0, sim_method, sim_dt, sim_steps, sim_states, sim_energy, sim_out);
    }
    if (*equiv) return cmd_equiv(g, equiv_file1, equiv_file2, equiv_mode, equiv_out);
    if (*train_cmd) {
      return cmd_train(g, train_data_file, train_space, train_dim, train_lr, train_epochs,
                       train_method, train_rep, train_grad, train_out);
    }
    if (*experiment) {
      if (exp_steps > 0) scenario.overrides.steps = exp_steps;
      if (exp_test_steps > 0) scenario.overrides.test_steps = exp_test_steps;
      if (exp_dt > 0) scenario.overrides.dt = exp_dt;
      if (exp_lr > 0) scenario.overrides.lr = exp_lr;
      if (exp_epochs >= 0) scenario.overrides.epochs = exp_epochs;
      if (exp_model_dim > 0) scenario.overrides.model_dim = exp_model_dim;
      if (!exp_space.empty()) scenario.overrides.space = param_space_from_string(exp_space);
      return cmd_experiment(g, exp_name, scenario);
    }
    if (*embed) return cmd_embed(g, embed_file, embed_m, embed_out);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
