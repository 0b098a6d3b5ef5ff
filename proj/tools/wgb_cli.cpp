// Command-line runner for the weak Galerkin Burgers solver.
//
//   wgb solve    --config run.cfg [--out states.csv] [--set key=value ...]
//   wgb table    --which 1|2 [--out table.csv] [--threads N]
//   wgb converge --k 1 --nu 0.01 --sigma 2 --meshes 8,16,32,64,128 --T 1

#include "wgb/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

struct OutputTarget {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = &std::cout;

  explicit OutputTarget(const std::string& path) {
    if (path.empty() || path == "-") return;
    file = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file) throw std::runtime_error("cannot open output file '" + path + "'");
    stream = file.get();
  }
};

wgb::OutputFormat parse_format(const std::string& s) {
  return s == "jsonl" ? wgb::OutputFormat::jsonl : wgb::OutputFormat::csv;
}

std::vector<int> parse_meshes(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak Galerkin finite element solver for the 1D viscous Burgers equation"};
  app.require_subcommand(1);

  std::string out_path;
  std::string format = "csv";
  int threads = 1;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "Output file (default stdout)");
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "jsonl"}));
    cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "Run one solve from a key = value config file");
  std::string config_path;
  std::vector<std::string> overrides;
  solve->add_option("--config", config_path, "Config file")->required();
  solve->add_option("--set", overrides, "Override a config key, key=value (repeatable)");
  add_common(solve);

  auto* table = app.add_subcommand("table", "Reproduce the exact-solution comparison tables");
  int which = 1;
  table->add_option("--which", which, "Table number")->check(CLI::IsMember({1, 2}))->required();
  std::string sampling = "node";
  table->add_option("--sampling", sampling, "node: node values where x is a node, else interior; interior: left-element polynomial")
      ->check(CLI::IsMember({"node", "interior"}));
  add_common(table);

  auto* converge = app.add_subcommand("converge", "Mesh-refinement study against the closed-form solution");
  int k = 0;
  double nu = 0.1, sigma = 2.0, T = 1.0, tau = 0.0;
  std::string meshes = "8,16,32,64,128";
  converge->add_option("--k", k, "Interior polynomial degree")->check(CLI::NonNegativeNumber);
  converge->add_option("--nu", nu, "Viscosity")->check(CLI::PositiveNumber);
  converge->add_option("--sigma", sigma, "Parameter of the closed-form solution (> 1)");
  converge->add_option("--T", T, "Final time")->check(CLI::PositiveNumber);
  converge->add_option("--tau", tau, "Fixed time step (default min(1e-4, h^(k+1)/20))");
  converge->add_option("--meshes", meshes, "Comma-separated halving chain of element counts");
  add_common(converge);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) {
      wgb::RunConfig config = wgb::load_run_config(config_path);
      for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw wgb::ConfigError(0, kv, "override must be key=value");
        config.set(kv.substr(0, eq), kv.substr(eq + 1));
      }
      if (solve->count("--out")) config.output_path = out_path;
      if (solve->count("--format")) config.format = parse_format(format);
      if (solve->count("--threads")) config.threads = threads;
      OutputTarget target(config.output_path);
      const wgb::SolveSummary summary = wgb::run_solve(config, *target.stream);
      wgb::print_summary(target.file ? std::cout : std::cerr, summary);
    } else if (*table) {
      OutputTarget target(out_path);
      const auto setting = wgb::table_settings(which);
      wgb::Header header{{"table", std::to_string(which)},
                         {"problem", "example1"},
                         {"tau", "0.0001"},
                         {"sampling", sampling == "node" ? "node value at mesh nodes, interior polynomial elsewhere"
                                                         : "interior polynomial, left element at nodes"},
                         {"quad_assembly", "2k+2"},
                         {"quad_error", "k+6"},
                         {"picard_tol", "1e-12"}};
      const auto rows = wgb::compute_table(which, threads, sampling == "node" ? wgb::EvalMode::node : wgb::EvalMode::interior);
      wgb::write_table(*target.stream, header, rows, parse_format(format));
    } else if (*converge) {
      wgb::StudySettings s;
      s.k = k;
      s.nu = nu;
      s.T = T;
      s.mesh_sizes = parse_meshes(meshes);
      if (tau > 0.0) s.tau = tau;
      s.threads = threads;
      const wgb::ConvergenceTable result = wgb::convergence_study(wgb::example2_problem(nu, sigma), s);
      wgb::Header header{{"problem", "example2"},
                         {"k", std::to_string(k)},
                         {"nu", wgb::format_double(nu)},
                         {"sigma", wgb::format_double(sigma)},
                         {"T", wgb::format_double(T)},
                         {"quad_assembly", std::to_string(2 * k + 2)},
                         {"quad_error", std::to_string(k + 6)},
                         {"picard_tol", "1e-12"}};
      std::string taus;
      for (const auto& r : result.rows) taus += (taus.empty() ? "" : ",") + wgb::format_double(r.tau);
      header.emplace_back("tau", taus);
      OutputTarget target(out_path);
      wgb::write_convergence(*target.stream, header, result, parse_format(format));
    }
  } catch (const wgb::ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return 2;
  } catch (const wgb::NonconvergenceError& err) {
    std::cerr << "solver error: " << err.what() << '\n';
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
