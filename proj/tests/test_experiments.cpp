#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wgb/experiments.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <random>
#include <sstream>

using namespace wgb;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_run_config(in);
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig c = parse(
      "# comment\n"
      "\n"
      "problem = example2\n"
      "k = 2\n"
      "n_elements=40\n"
      "  nu = 0.05   # trailing\n"
      "tau = 1e-3\n"
      "T = 0.5\n"
      "sigma = 3\n"
      "sample_points = 0.25, 0.5,0.75\n"
      "output_times = 0.1, 0.5\n"
      "format = jsonl\n"
      "dump_state = true\n");
  CHECK(c.problem == "example2");
  CHECK(c.solver.k == 2);
  CHECK(c.solver.n_elements == 40);
  CHECK(c.solver.nu == 0.05);
  CHECK(c.solver.tau == 1e-3);
  CHECK(c.solver.T == 0.5);
  CHECK(c.sigma == 3.0);
  CHECK(c.sample_points == std::vector<double>{0.25, 0.5, 0.75});
  CHECK(c.output_times == std::vector<double>{0.1, 0.5});
  CHECK(c.format == OutputFormat::jsonl);
  CHECK(c.dump_state);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("config errors name the line and key") {
  const auto expect = [](const std::string& text, int line, const std::string& key) {
    try {
      parse(text);
      FAIL("no error for: " << text);
    } catch (const ConfigError& e) {
      CHECK(e.line() == line);
      CHECK(e.key() == key);
    }
  };
  expect("k = 1\nbogus = 3\n", 2, "bogus");
  expect("nu = abc\n", 1, "nu");
  expect("# x\nk = 1.5\n", 2, "k");
  expect("\n\nformat = xml\n", 3, "format");
  expect("dump_state = maybe\n", 1, "dump_state");
  expect("sample_points = 0.1,,0.2\n", 1, "sample_points");

  RunConfig c;
  CHECK_THROWS_AS(c.set("nu", "1e400"), ConfigError);
  c.solver.nu = -1.0;
  CHECK_THROWS(c.validate());
  RunConfig d;
  d.set("problem", "example2");
  d.set("sigma", "1.0");
  CHECK_THROWS(d.validate());
  RunConfig e;
  e.solver.n_elements = 10;
  e.sample_points = {0.15};
  CHECK_THROWS(e.validate());
  CHECK_THROWS_AS(load_run_config("/nonexistent/run.cfg"), std::runtime_error);
}

TEST_CASE("doubles round-trip exactly") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    double v;
    do v = std::bit_cast<double>(rng());
    while (!std::isfinite(v));
    CHECK(std::bit_cast<std::uint64_t>(parse_double(format_double(v))) == std::bit_cast<std::uint64_t>(v));
  }
  for (double v : {0.0, -0.0, 1e-300, 5e-324, 0.1, 1.0 / 3.0})
    CHECK(std::bit_cast<std::uint64_t>(parse_double(format_double(v))) == std::bit_cast<std::uint64_t>(v));
  CHECK_THROWS(parse_double("1.0x"));
  CHECK_THROWS(parse_double(""));
}

TEST_CASE("table CSV round trip") {
  std::vector<TableRow> rows;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    TableRow r{1, i % 2, 80, 0.1, u(rng), u(rng), u(rng), u(rng), 0.0};
    r.abs_diff = std::abs(r.numerical - r.exact);
    rows.push_back(r);
  }
  std::ostringstream out;
  write_table(out, {{"nu", "0.1"}}, rows, OutputFormat::csv);
  const std::string text = out.str();
  for (const auto& l : lines_of(text))
    if (l.rfind("table,", 0) != 0 && !std::isdigit(static_cast<unsigned char>(l[0]))) CHECK(l[0] == '#');

  std::istringstream in(text);
  const std::vector<TableRow> back = read_table_csv(in);
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].x == rows[i].x);
    CHECK(back[i].numerical == rows[i].numerical);
    CHECK(back[i].exact == rows[i].exact);
    CHECK(back[i].abs_diff == rows[i].abs_diff);
    CHECK(back[i].k == rows[i].k);
  }

  // tamper with a stored difference
  std::vector<std::string> ls = lines_of(text);
  std::string& last = ls.back();
  last = last.substr(0, last.rfind(',') + 1) + "0.5";
  std::string tampered;
  for (const auto& l : ls) tampered += l + "\n";
  std::istringstream bad(tampered);
  CHECK_THROWS_AS(read_table_csv(bad), std::runtime_error);
}

TEST_CASE("zero initial data stays zero and output is deterministic") {
  RunConfig c = parse(
      "problem = custom\n"
      "g_poly = 0\n"
      "k = 1\n"
      "n_elements = 8\n"
      "tau = 0.01\n"
      "T = 0.05\n"
      "output_times = 0.02, 0.05\n"
      "dump_state = true\n");
  std::ostringstream a, b;
  const SolveSummary s = run_solve(c, a);
  run_solve(c, b);
  CHECK(a.str() == b.str());
  CHECK(s.steps == 5);
  CHECK(s.final_energy == 0.0);

  int data_rows = 0;
  bool seen_columns = false;
  for (const auto& l : lines_of(a.str())) {
    if (l[0] == '#') {
      CHECK_FALSE(seen_columns);
      continue;
    }
    if (!seen_columns) {
      CHECK(l == "kind,t,index,basis,x,value");
      seen_columns = true;
      continue;
    }
    ++data_rows;
    CHECK(l.substr(l.rfind(',') + 1) == "0");
  }
  // two output times, 9 nodes and 8 x 2 interior coefficients each
  CHECK(data_rows == 2 * (9 + 16));
}

TEST_CASE("output header records the run") {
  RunConfig c = parse("problem = example2\nsigma = 2.5\nn_elements = 8\ntau = 0.01\nT = 0.02\n");
  std::ostringstream out;
  run_solve(c, out);
  const std::string text = out.str();
  CHECK(text.find("sigma") != std::string::npos);
  CHECK(text.find("2.5") != std::string::npos);
  CHECK(text.find("quad_assembly") != std::string::npos);
  CHECK(text.find("quad_error") != std::string::npos);
  CHECK(text.find("wall") == std::string::npos);
}

TEST_CASE("jsonl output parses line by line") {
  RunConfig c = parse("problem = example1\nn_elements = 8\ntau = 0.01\nT = 0.03\nformat = jsonl\n");
  std::ostringstream out;
  run_solve(c, out);
  const auto ls = lines_of(out.str());
  REQUIRE(ls.size() == 1 + 9);
  CHECK(nlohmann::json::parse(ls[0])["type"] == "header");
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto j = nlohmann::json::parse(ls[i]);
    CHECK(j["type"] == "node");
    CHECK(j["t"].get<double>() == doctest::Approx(0.03));
  }
}

TEST_CASE("convergence output") {
  ConvergenceTable t;
  ConvergenceRow r;
  r.n_elements = 8;
  r.h = 0.125;
  r.l2_error = 1e-3;
  r.h1_error = 2e-2;
  t.rows.push_back(r);
  fit_rates(t);
  std::ostringstream csv;
  write_convergence(csv, {{"k", "0"}}, t, OutputFormat::csv);
  const auto ls = lines_of(csv.str());
  CHECK(ls[0][0] == '#');
  bool found = false;
  for (const auto& l : ls)
    if (l.rfind("8,", 0) == 0) {
      found = true;
      CHECK(l.substr(l.size() - 2) == ",,");
    }
  CHECK(found);
  CHECK(ls.back().rfind("# least_squares_slope", 0) == 0);

  std::ostringstream js;
  write_convergence(js, {{"k", "0"}}, t, OutputFormat::jsonl);
  const auto jl = lines_of(js.str());
  const auto last = nlohmann::json::parse(jl.back());
  CHECK(last["type"] == "slopes");
  CHECK(last["l2"].is_null());
}

TEST_CASE("table settings") {
  const auto t1 = table_settings(1);
  const auto t2 = table_settings(2);
  CHECK_FALSE(t1.empty());
  CHECK_FALSE(t2.empty());
  CHECK_THROWS(table_settings(3));
  const Mesh mesh = build_uniform_mesh(128);
  WeakFunction u = WeakFunction::zero(128, 0);
  u.interior.setConstant(2.0);
  u.node_values.setConstant(1.0);
  CHECK(sample(u, mesh, 0.5, EvalMode::node) == 1.0);
  CHECK(sample(u, mesh, 0.1, EvalMode::node) == 2.0);
  CHECK(sample(u, mesh, 0.5, EvalMode::interior) == 2.0);
}
