#include "phlearn/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace phlearn {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

Json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed,
                         const std::string& what) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* key : allowed) {
      if (item.key() == key) ok = true;
    }
    if (!ok) throw ParseError(what + ": unknown key '" + item.key() + "'");
  }
}

Matrix matrix_from_json(const Json& rows, const std::string& what) {
  if (!rows.is_array() || rows.empty()) throw ParseError(what + ": expected a 2-D array");
  const auto nrows = rows.size();
  const auto ncols = rows[0].size();
  Matrix m(static_cast<Eigen::Index>(nrows), static_cast<Eigen::Index>(ncols));
  for (std::size_t i = 0; i < nrows; ++i) {
    if (!rows[i].is_array() || rows[i].size() != ncols) {
      throw ParseError(what + ": ragged matrix rows");
    }
    for (std::size_t j = 0; j < ncols; ++j) {
      if (!rows[i][j].is_number()) throw ParseError(what + ": non-numeric entry");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
    }
  }
  return m;
}

Vector vector_from_json(const Json& arr, const std::string& what) {
  if (!arr.is_array()) throw ParseError(what + ": expected an array");
  Vector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ParseError(what + ": non-numeric entry");
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

}  // namespace

PHSystem read_system_json(const std::filesystem::path& path) {
  const Json j = parse_file(path);
  if (!j.is_object()) throw ParseError("system file: expected an object");
  reject_unknown_keys(j, {"n", "Q", "B"}, "system file");
  if (!j.contains("n") || !j.contains("Q") || !j.contains("B")) {
    throw ParseError("system file: required keys n, Q, B");
  }
  if (!j["n"].is_number_integer()) throw ParseError("system file: n must be an integer");
  const int n = j["n"].get<int>();
  const Matrix q = matrix_from_json(j["Q"], "system file");
  const Vector b = vector_from_json(j["B"], "system file");
  try {
    return PHSystem(n, SPDMatrix(q), b);
  } catch (const DimensionError& e) {
    throw ParseError(std::string("system file: ") + e.what());
  }
}

void write_system_json(const std::filesystem::path& path, const PHSystem& sys) {
  Json j;
  j["n"] = sys.n;
  j["Q"] = matrix_to_json(sys.Q.matrix());
  j["B"] = vector_to_json(sys.B);
  write_json(path, j);
}

CHParams read_params_json(const std::filesystem::path& path) {
  const Json j = parse_file(path);
  if (!j.is_object()) throw ParseError("params file: expected an object");
  reject_unknown_keys(j, {"n", "d", "v"}, "params file");
  if (!j.contains("n") || !j.contains("d") || !j.contains("v")) {
    throw ParseError("params file: required keys n, d, v");
  }
  if (!j["n"].is_number_integer()) throw ParseError("params file: n must be an integer");
  const int n = j["n"].get<int>();
  const Vector d = vector_from_json(j["d"], "params file");
  const Vector v = vector_from_json(j["v"], "params file");
  try {
    return CHParams(n, d, v);
  } catch (const DimensionError& e) {
    throw ParseError(std::string("params file: ") + e.what());
  }
}

void write_params_json(const std::filesystem::path& path, const CHParams& p) {
  Json j;
  j["n"] = p.n;
  j["d"] = vector_to_json(p.d);
  j["v"] = vector_to_json(p.v);
  write_json(path, j);
}

Matrix read_matrix_auto(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".json") {
    const Json j = parse_file(path);
    if (j.is_object()) {
      reject_unknown_keys(j, {"Q"}, "matrix file");
      if (!j.contains("Q")) throw ParseError("matrix file: required key Q");
      return matrix_from_json(j["Q"], "matrix file");
    }
    return matrix_from_json(j, "matrix file");
  }
  if (ext == ".csv") {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open file: " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::vector<double> row;
      std::stringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) {
        try {
          std::size_t pos = 0;
          row.push_back(std::stod(cell, &pos));
        } catch (const std::exception&) {
          throw ParseError("matrix csv: non-numeric entry '" + cell + "'");
        }
      }
      if (!rows.empty() && row.size() != rows.front().size()) {
        throw ParseError("matrix csv: ragged rows");
      }
      rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError("matrix csv: empty file");
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
      }
    }
    return m;
  }
  throw ParseError("matrix file: unsupported extension '" + ext + "' (use .csv or .json)");
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing: " + path.string());
  out << "t,u,y";
  const bool with_states = !traj.states.empty();
  if (with_states) {
    for (Eigen::Index i = 0; i < traj.states.front().size(); ++i) out << ",x" << (i + 1);
  }
  out << "\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << format_double(traj.t0 + traj.dt * static_cast<double>(k)) << ','
        << format_double(traj.inputs[k]) << ',' << format_double(traj.outputs[k]);
    if (with_states) {
      for (Eigen::Index i = 0; i < traj.states[k].size(); ++i) {
        out << ',' << format_double(traj.states[k](i));
      }
    }
    out << "\n";
  }
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("trajectory csv: empty file");
  if (line.rfind("t,u,y", 0) != 0) throw ParseError("trajectory csv: expected header t,u,y[,x..]");

  std::vector<double> ts;
  Trajectory traj;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ParseError("trajectory csv: non-numeric entry '" + cell + "'");
      }
    }
    if (row.size() < 3) throw ParseError("trajectory csv: rows need at least t,u,y");
    ts.push_back(row[0]);
    traj.inputs.push_back(row[1]);
    traj.outputs.push_back(row[2]);
    if (row.size() > 3) {
      Vector x(static_cast<Eigen::Index>(row.size() - 3));
      for (std::size_t i = 3; i < row.size(); ++i) x(static_cast<Eigen::Index>(i - 3)) = row[i];
      traj.states.push_back(std::move(x));
    }
  }
  if (ts.size() < 2) throw ParseError("trajectory csv: need at least two rows");
  traj.t0 = ts.front();
  traj.dt = ts[1] - ts[0];
  if (traj.dt <= 0.0) throw ParseError("trajectory csv: time column must increase");
  for (std::size_t k = 1; k < ts.size(); ++k) {
    const double expected = traj.t0 + traj.dt * static_cast<double>(k);
    if (std::abs(ts[k] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw ParseError("trajectory csv: time grid is not uniform");
    }
  }
  return traj;
}

void write_comparison_csv(const std::filesystem::path& path, const Trajectory& truth,
                          const std::vector<double>& y_model) {
  if (y_model.size() != truth.size()) {
    throw DimensionError("write_comparison_csv: length mismatch");
  }
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing: " + path.string());
  out << "t,u,y,y_model\n";
  for (std::size_t k = 0; k < truth.size(); ++k) {
    out << format_double(truth.t0 + truth.dt * static_cast<double>(k)) << ','
        << format_double(truth.inputs[k]) << ',' << format_double(truth.outputs[k]) << ','
        << format_double(y_model[k]) << "\n";
  }
}

Json report_to_json(const TrainReport& report, const TrainConfig& cfg) {
  const DecodedParams decoded = decode(report.final_params);
  Json j;
  j["space"] = to_string(report.final_params.space);
  j["loss_history"] = report.loss_history;
  j["final_loss"] = report.final_loss;
  j["diverged"] = report.diverged;
  Json fp;
  fp["n"] = report.final_params.n_model;
  fp["raw"] = vector_to_json(report.final_params.raw);
  fp["d"] = vector_to_json(decoded.params.d);
  fp["v"] = vector_to_json(decoded.params.v);
  if (decoded.coords) {
    fp["d_up"] = vector_to_json(decoded.coords->d_up);
    fp["R"] = vector_to_json(decoded.coords->R);
  }
  j["final_params"] = std::move(fp);
  j["final_x0"] = vector_to_json(report.final_x0);
  Json config;
  config["lr"] = cfg.lr;
  config["epochs"] = cfg.epochs;
  config["integrator"] = {{"method", to_string(cfg.integrator.method)}, {"dt", cfg.integrator.dt}};
  config["representation"] = to_string(cfg.representation);
  config["seed"] = cfg.seed;
  config["grad"] = to_string(cfg.grad);
  j["config"] = std::move(config);
  j["wall_time_s"] = report.wall_time_s;
  return j;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing: " + path.string());
  out << j.dump(2) << "\n";
}

Json read_json(const std::filesystem::path& path) { return parse_file(path); }

std::string to_string(ParamSpace space) {
  switch (space) {
    case ParamSpace::kThetaCH:
      return "theta_ch";
    case ParamSpace::kIdent:
      return "ident";
    case ParamSpace::kAutonomous:
      return "autonomous";
  }
  return "?";
}

ParamSpace param_space_from_string(const std::string& s) {
  if (s == "theta_ch") return ParamSpace::kThetaCH;
  if (s == "ident") return ParamSpace::kIdent;
  if (s == "autonomous") return ParamSpace::kAutonomous;
  throw ParseError("unknown parameter space '" + s + "'");
}

std::string to_string(StepMethod method) {
  switch (method) {
    case StepMethod::kEuler:
      return "euler";
    case StepMethod::kMidpoint:
      return "midpoint";
    case StepMethod::kExact:
      return "exact";
  }
  return "?";
}

StepMethod step_method_from_string(const std::string& s) {
  if (s == "euler") return StepMethod::kEuler;
  if (s == "midpoint") return StepMethod::kMidpoint;
  if (s == "exact") return StepMethod::kExact;
  throw ParseError("unknown integrator method '" + s + "'");
}

std::string to_string(RepresentationKind rep) {
  return rep == RepresentationKind::kControllable ? "controllable" : "observable";
}

RepresentationKind representation_from_string(const std::string& s) {
  if (s == "controllable") return RepresentationKind::kControllable;
  if (s == "observable") return RepresentationKind::kObservable;
  throw ParseError("unknown representation '" + s + "'");
}

std::string to_string(GradMethod grad) {
  return grad == GradMethod::kFiniteDiff ? "finite_diff" : "sensitivity";
}

GradMethod grad_method_from_string(const std::string& s) {
  if (s == "finite_diff") return GradMethod::kFiniteDiff;
  if (s == "sensitivity") return GradMethod::kSensitivity;
  throw ParseError("unknown gradient method '" + s + "'");
}

}  // namespace phlearn
