#include "wgb/experiments.hpp"

#include "wgb/exact.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace wgb {

ConfigError::ConfigError(int line, std::string key, const std::string& message)
    : std::runtime_error((line > 0 ? "line " + std::to_string(line) + ": " : std::string()) + "key '" + key +
                         "': " + message),
      line_(line),
      key_(std::move(key)) {}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> read_double(const std::string& text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return v;
}

double to_double(const std::string& key, const std::string& value, int line) {
  if (const auto v = read_double(value)) return *v;
  throw ConfigError(line, key, "expected a number, got '" + value + "'");
}

int to_int(const std::string& key, const std::string& value, int line) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (trim(value.substr(used)).empty()) return static_cast<int>(v);
  } catch (const std::exception&) {
  }
  throw ConfigError(line, key, "expected an integer, got '" + value + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& value, int line) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(to_double(key, trim(item), line));
  }
  if (!value.empty() && value.back() == ',') throw ConfigError(line, key, "trailing comma");
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
  return s;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& raw, int line) {
  const std::string value = trim(raw);
  if (key == "k") solver.k = to_int(key, value, line);
  else if (key == "n_elements") solver.n_elements = to_int(key, value, line);
  else if (key == "nu") solver.nu = to_double(key, value, line);
  else if (key == "tau") solver.tau = to_double(key, value, line);
  else if (key == "T") solver.T = to_double(key, value, line);
  else if (key == "picard_tol") solver.picard_tol = to_double(key, value, line);
  else if (key == "picard_max") solver.picard_max = to_int(key, value, line);
  else if (key == "quad_assembly") solver.quad_assembly = to_int(key, value, line);
  else if (key == "quad_error") solver.quad_error = to_int(key, value, line);
  else if (key == "sigma") sigma = to_double(key, value, line);
  else if (key == "g_poly") g_poly = to_list(key, value, line);
  else if (key == "sample_points") sample_points = to_list(key, value, line);
  else if (key == "output_times") output_times = to_list(key, value, line);
  else if (key == "output") output_path = value;
  else if (key == "seed") seed = static_cast<std::uint64_t>(to_int(key, value, line));
  else if (key == "threads") threads = to_int(key, value, line);
  else if (key == "problem") {
    if (value != "example1" && value != "example2" && value != "custom") {
      throw ConfigError(line, key, "expected example1, example2 or custom, got '" + value + "'");
    }
    problem = value;
  } else if (key == "format") {
    if (value == "csv") format = OutputFormat::csv;
    else if (value == "jsonl") format = OutputFormat::jsonl;
    else throw ConfigError(line, key, "expected csv or jsonl, got '" + value + "'");
  } else if (key == "dump_state") {
    if (value == "true" || value == "1") dump_state = true;
    else if (value == "false" || value == "0") dump_state = false;
    else throw ConfigError(line, key, "expected true or false, got '" + value + "'");
  } else {
    throw ConfigError(line, key, "unknown key");
  }
}

void RunConfig::validate() const {
  try {
    solver.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(0, "solver", err.what());
  }
  if (problem == "example2" && !(sigma > 1.0)) throw ConfigError(0, "sigma", "must be > 1");
  if (threads < 1) throw ConfigError(0, "threads", "must be >= 1");
  const Mesh mesh = build_uniform_mesh(solver.n_elements);
  for (double x : sample_points) {
    if (mesh.find_node(x) < 0) throw ConfigError(0, "sample_points", format_double(x) + " is not a mesh node");
  }
  for (double t : output_times) {
    const double steps = t / solver.tau;
    if (!(t > 0.0) || t > solver.T + 1e-12 || std::abs(steps - std::round(steps)) > 1e-9) {
      throw ConfigError(0, "output_times", format_double(t) + " is not a step time within (0, T]");
    }
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::describe() const {
  return {{"problem", problem},
          {"k", std::to_string(solver.k)},
          {"n_elements", std::to_string(solver.n_elements)},
          {"nu", format_double(solver.nu)},
          {"tau", format_double(solver.tau)},
          {"T", format_double(solver.T)},
          {"picard_tol", format_double(solver.picard_tol)},
          {"picard_max", std::to_string(solver.picard_max)},
          {"quad_assembly", std::to_string(solver.assembly_points())},
          {"quad_error", std::to_string(solver.error_points())},
          {"sigma", format_double(sigma)},
          {"g_poly", join(g_poly)},
          {"sample_points", join(sample_points)},
          {"output_times", join(output_times)},
          {"dump_state", dump_state ? "true" : "false"},
          {"seed", std::to_string(seed)},
          {"sampling", "node values"}};
}

RunConfig parse_run_config(std::istream& in, RunConfig base) {
  std::string text;
  int line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    const auto hash = text.find('#');
    const std::string line = trim(hash == std::string::npos ? text : text.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(line_no, line, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(line_no, key, "empty key");
    base.set(key, line.substr(eq + 1), line_no);
  }
  return base;
}

RunConfig load_run_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "config", "cannot open '" + path + "'");
  return parse_run_config(in, std::move(base));
}

ScalarFunction initial_data(const RunConfig& config) {
  if (config.problem == "example1") return [](double x) { return std::sin(std::numbers::pi * x); };
  if (config.problem == "example2") {
    const WoodSolution sol(config.solver.nu, config.sigma);
    return [sol](double x) { return sol.initial(x); };
  }
  return [c = config.g_poly](double x) {
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
  };
}

std::optional<ExactProblem> exact_problem(const RunConfig& config, double t_min) {
  if (config.problem == "example1") return example1_problem(config.solver.nu, t_min);
  if (config.problem == "example2") return example2_problem(config.solver.nu, config.sigma);
  return std::nullopt;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  if (const auto v = read_double(text)) return *v;
  throw std::invalid_argument("not a number: '" + text + "'");
}

std::vector<TableSetting> table_settings(int which) {
  std::vector<double> x1;
  for (int j = 1; j <= 9; ++j) x1.push_back(j / 10.0);
  if (which == 1) {
    std::vector<TableSetting> s;
    for (int k : {0, 1})
      for (int n : {80, 128}) s.push_back({k, n, 0.1, 1e-4, {0.1}, x1});
    return s;
  }
  if (which == 2) {
    const std::vector<double> times{0.4, 0.6, 0.8, 1.0}, points{0.25, 0.5, 0.75};
    return {{1, 80, 0.1, 1e-4, times, points}, {1, 80, 0.01, 1e-4, times, points}};
  }
  throw std::invalid_argument("table_settings: table must be 1 or 2");
}

namespace {

std::vector<TableRow> run_setting(int which, const TableSetting& s, EvalMode sampling) {
  SolverConfig config;
  config.k = s.k;
  config.n_elements = s.n_elements;
  config.nu = s.nu;
  config.tau = s.tau;
  config.T = *std::max_element(s.times.begin(), s.times.end());
  const Mesh mesh = build_uniform_mesh(s.n_elements);
  const FourierSolution exact = fourier_solution(s.nu, *std::min_element(s.times.begin(), s.times.end()));

  std::map<int, WeakFunction> snapshots;
  std::map<int, double> wanted;
  for (double t : s.times) wanted[static_cast<int>(std::lround(t / s.tau))] = t;
  solve_trajectory([](double x) { return std::sin(std::numbers::pi * x); }, config, StoreMode::final_only,
                   [&](int n, double, const WeakFunction& u) {
                     if (wanted.count(n)) snapshots.emplace(n, u);
                   });

  std::vector<TableRow> rows;
  for (double t : s.times) {
    const WeakFunction& u = snapshots.at(static_cast<int>(std::lround(t / s.tau)));
    for (double x : s.points) {
      TableRow row{which, s.k, s.n_elements, s.nu, x, t, sample(u, mesh, x, sampling),
                   fourier_eval(exact, x, t), 0.0};
      row.abs_diff = std::abs(row.numerical - row.exact);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace

double sample(const WeakFunction& u, const Mesh& mesh, double x, EvalMode mode) {
  if (mode == EvalMode::node && mesh.find_node(x) < 0) mode = EvalMode::interior;
  return evaluate(u, mesh, x, mode);
}

std::vector<TableRow> compute_table(int which, int threads, EvalMode sampling) {
  const std::vector<TableSetting> settings = table_settings(which);
  std::vector<std::vector<TableRow>> parts(settings.size());
  const std::size_t workers = static_cast<std::size_t>(std::max(1, threads));
  for (std::size_t start = 0; start < settings.size(); start += workers) {
    std::vector<std::future<std::vector<TableRow>>> jobs;
    const std::size_t stop = std::min(settings.size(), start + workers);
    for (std::size_t i = start; i < stop; ++i) {
      jobs.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred,
                                [&, i] { return run_setting(which, settings[i], sampling); }));
    }
    for (std::size_t i = start; i < stop; ++i) parts[i] = jobs[i - start].get();
  }
  std::vector<TableRow> rows;
  for (auto& p : parts) rows.insert(rows.end(), p.begin(), p.end());
  return rows;
}

namespace {

void write_header(std::ostream& out, const Header& header, OutputFormat format) {
  if (format == OutputFormat::csv) {
    for (const auto& [k, v] : header) out << "# " << k << " = " << v << '\n';
    return;
  }
  nlohmann::ordered_json h;
  h["type"] = "header";
  for (const auto& [k, v] : header) h[k] = v;
  out << h.dump() << '\n';
}

}  // namespace

void write_table(std::ostream& out, const Header& header, const std::vector<TableRow>& rows, OutputFormat format) {
  write_header(out, header, format);
  if (format == OutputFormat::csv) {
    out << "table,k,N,nu,x,t,numerical,exact,abs_diff\n";
    for (const TableRow& r : rows) {
      out << r.table << ',' << r.k << ',' << r.n_elements << ',' << format_double(r.nu) << ','
          << format_double(r.x) << ',' << format_double(r.t) << ',' << format_double(r.numerical) << ','
          << format_double(r.exact) << ',' << format_double(r.abs_diff) << '\n';
    }
    return;
  }
  for (const TableRow& r : rows) {
    nlohmann::ordered_json j{{"type", "row"},     {"table", r.table},         {"k", r.k},
                             {"N", r.n_elements}, {"nu", r.nu},               {"x", r.x},
                             {"t", r.t},          {"numerical", r.numerical}, {"exact", r.exact},
                             {"abs_diff", r.abs_diff}};
    out << j.dump() << '\n';
  }
}

std::vector<TableRow> read_table_csv(std::istream& in) {
  std::vector<TableRow> rows;
  std::string line;
  bool seen_columns = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!seen_columns) {
      seen_columns = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) throw std::runtime_error("read_table_csv: expected 9 fields in '" + line + "'");
    TableRow r{std::stoi(f[0]),     std::stoi(f[1]),     std::stoi(f[2]),     parse_double(f[3]),
               parse_double(f[4]),  parse_double(f[5]),  parse_double(f[6]),  parse_double(f[7]),
               parse_double(f[8])};
    if (r.abs_diff != std::abs(r.numerical - r.exact)) {
      throw std::runtime_error("read_table_csv: stored difference disagrees with |numerical - exact|");
    }
    rows.push_back(r);
  }
  return rows;
}

void write_convergence(std::ostream& out, const Header& header, const ConvergenceTable& table,
                       OutputFormat format) {
  write_header(out, header, format);
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  if (format == OutputFormat::csv) {
    out << "N,h,l2_error,h1_error,l2_rate,h1_rate\n";
    for (const ConvergenceRow& r : table.rows) {
      out << r.n_elements << ',' << format_double(r.h) << ',' << format_double(r.l2_error) << ','
          << format_double(r.h1_error) << ',' << opt(r.l2_rate) << ',' << opt(r.h1_rate) << '\n';
    }
    out << "# least_squares_slope l2 = " << opt(table.l2_slope) << ", h1 = " << opt(table.h1_slope) << '\n';
    return;
  }
  auto jopt = [](const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); };
  for (const ConvergenceRow& r : table.rows) {
    nlohmann::ordered_json j{{"type", "row"},         {"N", r.n_elements},         {"h", r.h},
                             {"l2_error", r.l2_error}, {"h1_error", r.h1_error},    {"l2_rate", jopt(r.l2_rate)},
                             {"h1_rate", jopt(r.h1_rate)}};
    out << j.dump() << '\n';
  }
  nlohmann::ordered_json s{{"type", "slopes"}, {"l2", jopt(table.l2_slope)}, {"h1", jopt(table.h1_slope)}};
  out << s.dump() << '\n';
}

SolveSummary run_solve(const RunConfig& config, std::ostream& out) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const SolverConfig& sc = config.solver;
  const Mesh mesh = build_uniform_mesh(sc.n_elements);

  std::vector<int> node_ids;
  if (config.sample_points.empty()) {
    for (int i = 0; i < mesh.n_nodes(); ++i) node_ids.push_back(i);
  } else {
    for (double x : config.sample_points) node_ids.push_back(mesh.find_node(x));
  }
  std::map<int, double> wanted;
  if (config.output_times.empty()) wanted[sc.n_steps()] = sc.T;
  for (double t : config.output_times) wanted[static_cast<int>(std::lround(t / sc.tau))] = t;

  write_header(out, config.describe(), config.format);
  if (config.format == OutputFormat::csv) out << "kind,t,index,basis,x,value\n";
  auto emit = [&](const std::string& kind, double t, int index, int basis, double x, double value) {
    if (config.format == OutputFormat::csv) {
      out << kind << ',' << format_double(t) << ',' << index << ',' << basis << ',' << format_double(x) << ','
          << format_double(value) << '\n';
    } else {
      nlohmann::ordered_json j{{"type", kind}, {"t", t}, {"index", index}, {"basis", basis}, {"x", x}, {"value", value}};
      out << j.dump() << '\n';
    }
  };

  const Trajectory traj =
      solve_trajectory(initial_data(config), sc, StoreMode::final_only, [&](int n, double t, const WeakFunction& u) {
        if (!wanted.count(n)) return;
        for (int i : node_ids) emit("node", t, i, -1, mesh.node(i), u.node_values(i));
        if (!config.dump_state) return;
        for (int e = 0; e < u.n_elements(); ++e) {
          const double mid = 0.5 * (mesh.node(e) + mesh.node(e + 1));
          for (int j = 0; j <= u.k; ++j) emit("interior", t, e, j, mid, u.interior(j, e));
        }
      });

  SolveSummary s;
  s.steps = sc.n_steps();
  s.final_time = traj.times.back();
  s.final_energy = traj.energy.back();
  for (int it : traj.picard_iters) s.total_picard += it;
  s.max_picard = traj.max_picard_iters();
  s.max_energy_growth = traj.max_energy_growth();
  if (auto problem = exact_problem(config, sc.T)) {
    try {
      s.errors = error_report(*problem, traj.final_state(), sc, s.final_time);
    } catch (const ExactEvaluationError& e) {
      s.errors_skipped = e.what();
    }
  }
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return s;
}

void print_summary(std::ostream& out, const SolveSummary& s) {
  out << "steps: " << s.steps << '\n'
      << "final_time: " << format_double(s.final_time) << '\n'
      << "final_energy: " << format_double(s.final_energy) << '\n'
      << "picard_total: " << s.total_picard << '\n'
      << "picard_max: " << s.max_picard << '\n'
      << "picard_mean: " << format_double(s.steps ? double(s.total_picard) / s.steps : 0.0) << '\n'
      << "max_energy_growth: " << format_double(s.max_energy_growth) << '\n';
  if (s.errors) {
    out << "l2_error: " << format_double(s.errors->l2_error) << '\n'
        << "h1_error: " << format_double(s.errors->h1_error) << '\n';
  } else if (!s.errors_skipped.empty()) {
    out << "errors: skipped (" << s.errors_skipped << ")\n";
  }
  out << "wall_seconds: " << s.wall_seconds << '\n';
}

}  // namespace wgb
