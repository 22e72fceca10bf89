#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "carnot/contact.hpp"
#include "carnot/exterior.hpp"
#include "carnot/specs.hpp"
#include "carnot/weak_contact.hpp"

using namespace carnot;

namespace {

struct Out {
  bool machine = false;

  void kv(const std::string& key, const std::string& value) const {
    if (machine) {
      std::cout << key << "=" << value << "\n";
    } else {
      std::cout << std::left << std::setw(30) << key << ' ' << value << "\n";
    }
  }
  void kv(const std::string& key, double v) const { kv(key, num(v)); }
  void text(const std::string& s) const {
    if (!machine) std::cout << s << "\n";
  }
  // one row of a table: indexed keys in machine form, aligned columns otherwise
  void row(const std::string& key, int index, const std::vector<std::pair<std::string, double>>& cols) const {
    if (machine) {
      for (const auto& [name, v] : cols) kv(key + "." + std::to_string(index) + "." + name, num(v));
      return;
    }
    std::cout << " ";
    for (const auto& [name, v] : cols) std::cout << ' ' << std::left << std::setw(15) << num(v);
    std::cout << "\n";
  }
  static std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << std::scientific << v;
    return os.str();
  }
};

std::string join(const std::vector<double>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

int cmd_validate(const std::string& file, const Out& out) {
  const auto A = load_group(file);
  const auto rep = validate(A);
  out.kv("group", A.name());
  for (const auto& c : rep.checks) {
    out.kv("check." + c.name, c.passed ? "pass" : "fail");
    if (!c.passed) out.kv("check." + c.name + ".detail", c.detail);
  }
  out.kv("verdict", rep.ok() ? "valid" : "invalid");
  return rep.ok() ? 0 : 1;
}

void print_field(const std::string& key, const PolyVectorField& X, const CarnotGroup& G, const Out& out) {
  out.kv(key, format_field(X, G.weights()));
}

int cmd_frame(const std::string& file, const Out& out) {
  const CarnotGroup G(load_group(file));
  out.kv("group", G.algebra().name());
  out.text("left-invariant frame");
  for (int a = 0; a < G.dim(); ++a) print_field("X" + std::to_string(a + 1), G.left_frame()[a], G, out);
  out.text("right-invariant frame");
  for (int a = 0; a < G.dim(); ++a) print_field("XR" + std::to_string(a + 1), G.right_frame()[a], G, out);
  out.text("coframe");
  for (int a = 0; a < G.dim(); ++a) {
    out.kv("sigma" + std::to_string(a + 1), format_form(G.coframe()[a], G.weights()));
  }
  return 0;
}

int cmd_solve(const std::string& file, int degree, int probe, bool basis, const Out& out) {
  const CarnotGroup G(load_group(file));
  out.kv("group", G.algebra().name());
  const auto sol = solve_contact_fields(G, degree);
  out.text("degree  dimension");
  for (const auto& [D, dim] : sol.dimension) out.kv("dimension." + std::to_string(D), std::to_string(dim));
  out.kv("unknowns", std::to_string(sol.unknowns));
  out.kv("equations", std::to_string(sol.equations));
  bool ok = true;
  for (std::size_t i = 0; i < sol.basis.size(); ++i) {
    if (!is_contact(G, sol.basis[i])) ok = false;
    if (basis) print_field("basis." + std::to_string(i + 1), sol.basis[i], G, out);
  }
  for (int a = 0; a < G.dim() && degree >= G.step() - 1; ++a) {
    if (!in_span(sol.basis, G.right_frame()[a])) ok = false;
  }
  if (probe > 0) {
    const auto rep = rigidity_probe(G, probe);
    for (const auto& [D, dim] : rep.table) out.kv("probe." + std::to_string(D), std::to_string(dim));
    out.kv("probe.verdict", rep.verdict);
  }
  out.kv("verdict", ok ? "pass" : "fail");
  return ok ? 0 : 1;
}

int cmd_probe(const std::string& file, int degree, const Out& out) {
  const CarnotGroup G(load_group(file));
  out.kv("group", G.algebra().name());
  const auto rep = rigidity_probe(G, degree);
  out.text("degree  dimension");
  for (const auto& [D, dim] : rep.table) out.kv("dimension." + std::to_string(D), std::to_string(dim));
  if (rep.stabilized) {
    out.kv("since", std::to_string(rep.since));
    out.kv("verdict", "stabilized at " + std::to_string(rep.stable_dimension));
  } else {
    out.kv("verdict", "growing");
  }
  return 0;
}

int cmd_smooth(const std::string& file, double eps, int grid, double tol, const Out& out) {
  const CarnotGroup G(load_group(file));
  const int n = G.dim();
  const Mollifier M(G, eps, grid);
  out.kv("group", G.algebra().name());
  out.kv("eps", eps);
  out.kv("grid", std::to_string(grid));
  bool ok = true;

  out.text("normalization");
  double rule_mass = 0.0;
  for (std::size_t k = 0; k < M.rule().size(); ++k) rule_mass += M.rule().weight(k);
  out.kv("normalization.rule_error", std::abs(rule_mass - 1.0));
  ok = ok && std::abs(rule_mass - 1.0) <= 1e-12;
  if (n <= 3) {
    // pointwise rho on a composite grid; too costly beyond three dimensions
    const double mass = direct_integral(M, 10, 16);
    out.kv("normalization.direct_error", std::abs(mass - 1.0));
    ok = ok && std::abs(mass - 1.0) <= 1e-8;
  }

  Poly q = Poly::variable(n, n - 1) * Poly::variable(n, n - 1) + Poly::variable(n, 0) * Poly::variable(n, 1);
  const PolyForm theta = G.coframe()[n - 1].map_coefficients([&](const Poly& c) { return c * q; });
  std::vector<double> c(n, 0.0), r(n, 0.5);
  c[0] = 0.1;
  const PolyBump phi{c, r, 4};
  PolyForm gamma = G.coframe()[0];
  for (int a = 1; a < n - 1; ++a) gamma = wedge(gamma, G.coframe()[a]);
  const double dual = verify_duality(M, theta, BumpForm{phi, gamma});
  out.text("duality of smoothing (forms)");
  out.kv("duality.residual", dual);
  ok = ok && dual <= tol;

  const PolyForm alpha = exterior_derivative(G.coframe()[n - 1]);
  std::vector<Poly> xc;
  for (int i = 0; i < n; ++i) xc.push_back(i == 0 ? q : Poly::variable(n, i) + Poly::constant(n, 1));
  const double idual = verify_interior_duality(M, alpha, PolyVectorField(xc), BumpForm{phi, sigma_hat(G, 0)});
  out.text("duality of smoothing (interior products)");
  out.kv("interior_duality.residual", idual);
  ok = ok && idual <= tol;

  const QuadratureGrid targets(std::vector<double>(n, -0.5), std::vector<double>(n, 0.5), 3);
  out.text("d commutes with smoothing (central differences)");
  out.text("  h               error           ratio");
  double prev = 0.0;
  int idx = 0;
  for (double h : {1e-2, 5e-3, 2.5e-3}) {
    const double e = verify_d_commutes(M, theta, h, targets);
    out.row("d_commutes", ++idx, {{"h", h}, {"error", e}, {"ratio", prev > 0.0 ? prev / e : 0.0}});
    prev = e;
  }

  out.text("uniform convergence");
  out.text("  eps             sup error       l1 error");
  idx = 0;
  ScalarFunction f = [n](const double* x) { return std::sin(x[0]) + std::cos(x[n - 1]) * x[1]; };
  std::vector<double> eps_list;
  for (int m = 0; m <= 4; ++m) eps_list.push_back(std::ldexp(1.0, -m));
  double last = INFINITY;
  for (const auto& row : convergence_table(G, f, eps_list, targets, std::min(grid, 6))) {
    out.row("convergence", ++idx, {{"eps", row.eps}, {"sup", row.sup_error}, {"l1", row.l1_error}});
    ok = ok && row.sup_error <= last;
    last = row.sup_error;
  }
  out.kv("verdict", ok ? "pass" : "fail");
  return ok ? 0 : 1;
}

int cmd_verify_weak(const std::string& file, const std::string& field, const std::string& push, int grid, double tol,
                    double box, const Out& out) {
  const CarnotGroup G(load_group(file));
  const int n = G.dim();
  const auto Z = parse_field_spec(G, field);
  std::vector<double> lo(n, -box), hi(n, box);
  out.kv("group", G.algebra().name());
  out.kv("field", field);
  WeakContactReport rep;
  if (!push.empty()) {
    const auto f = parse_map_spec(G, push);
    const auto pr = verify_pushforward(G, f, Z, lo, hi, tol, grid);
    out.kv("map", push);
    out.kv("horizontality_defect", pr.horizontality_defect);
    out.kv("box.lo", join(pr.lo));
    out.kv("box.hi", join(pr.hi));
    rep = pr.report;
  } else {
    const auto zc = std::make_shared<PolyVectorField>(Z);
    auto coords = [zc, n](const double* x, double* v) {
      const auto r = zc->evaluate(std::span<const double>(x, n));
      std::copy(r.begin(), r.end(), v);
    };
    rep = is_weak_contact(G, frame_function(G, coords), default_test_family(G, lo, hi), tol, grid);
  }
  std::cout << format_report(rep, out.machine);
  return rep.passed ? 0 : 1;
}

int cmd_chart(const std::string& file, const std::string& map, const std::string& point, double tol,
              const Out& out) {
  const CarnotGroup G(load_group(file));
  const int n = G.dim();
  const auto f = parse_map_spec(G, map);
  std::vector<double> p = point.empty() ? std::vector<double>(n, 0.0) : parse_point(point);
  if (int(p.size()) != n) throw ParseError("--point needs " + std::to_string(n) + " coordinates");
  std::vector<FlowSpec> X;
  for (int a = 0; a < n; ++a) X.push_back(flow_spec(G.right_frame()[a], "XR" + std::to_string(a + 1)));
  out.kv("group", G.algebra().name());
  out.kv("map", map);
  out.kv("point", join(p));
  out.text("  radius          max |psi^-1 f phi(t) - t|");
  double at_default = 0.0, valid = 0.0;
  int idx = 0;
  for (double r : {0.025, 0.05, 0.1}) {
    const auto rep = verify_identity_in_chart(f, p, X, r, 5);
    out.row("error", ++idx, {{"radius", r}, {"max", rep.max_error}});
    if (r == 0.1) at_default = rep.max_error;
    valid = rep.valid_radius;
  }
  out.kv("valid_radius", valid);
  out.kv("verdict", at_default <= tol ? "pass" : "fail");
  return at_default <= tol ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computations on Carnot groups: frames, contact fields, mollification, weak contact fields, charts"};
  app.require_subcommand(1);
  std::string format = "human";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "machine"}));

  std::string file, field, push, map, point;
  int degree = 4, probe_degree = 0, grid = default_grid_order();
  double eps = 0.25, tol = 1e-8, box = 1.0;
  bool basis = false;

  auto* validate_cmd = app.add_subcommand("validate", "Check a stratified Lie algebra (antisymmetry, grading, Jacobi, generation)");
  validate_cmd->add_option("file", file, "Group file or builtin name")->required();

  auto* frame_cmd = app.add_subcommand("frame", "Print the left- and right-invariant frames and the left-invariant coframe");
  frame_cmd->add_option("file", file, "Group file or builtin name")->required();

  auto* solve_cmd = app.add_subcommand("solve-contact", "Solve the contact-field equation for polynomial contact fields");
  solve_cmd->add_option("file", file, "Group file or builtin name")->required();
  solve_cmd->add_option("--degree", degree, "Homogeneous order bound D")->check(CLI::Range(0, 16));
  solve_cmd->add_option("--probe", probe_degree, "Also run the rigidity probe up to this degree")->check(CLI::Range(0, 16));
  solve_cmd->add_flag("--basis", basis, "Print the kernel fields");

  auto* probe_cmd = app.add_subcommand("probe", "Rigidity probe: dimension table of contact fields by degree");
  probe_cmd->add_option("file", file, "Group file or builtin name")->required();
  probe_cmd->add_option("--degree", degree, "Largest degree")->check(CLI::Range(1, 16));

  auto* smooth_cmd = app.add_subcommand("smooth-demo", "Mollification of forms and fields: normalization, dualities, d, convergence");
  smooth_cmd->add_option("file", file, "Group file or builtin name")->required();
  smooth_cmd->add_option("--eps", eps, "Mollifier scale")->check(CLI::Range(1e-3, 4.0));
  smooth_cmd->add_option("--grid", grid, "Gauss nodes per axis")->check(CLI::Range(2, 32));
  smooth_cmd->add_option("--tol", tol, "Residual tolerance")->check(CLI::PositiveNumber);

  auto* weak_cmd = app.add_subcommand("verify-weak", "Weak contact field identity, optionally after pushforward by a contact map");
  weak_cmd->add_option("file", file, "Group file or builtin name")->required();
  weak_cmd->add_option("--field", field, "Field spec: right:i, left:i, dilation, kernel:D:i, poly:..., frame:...")->required();
  weak_cmd->add_option("--pushforward", push, "Map spec: identity, left:a, dilation:t, flow:<field>:<t>, joined by @");
  weak_cmd->add_option("--grid", grid, "Gauss nodes per axis")->check(CLI::Range(2, 32));
  weak_cmd->add_option("--tol", tol, "Residual tolerance")->check(CLI::PositiveNumber);
  weak_cmd->add_option("--box", box, "Half-width of the working box")->check(CLI::Range(1e-3, 10.0));

  auto* chart_cmd = app.add_subcommand("chart-demo", "Identity of a contact map in flow charts of right-invariant fields");
  chart_cmd->add_option("file", file, "Group file or builtin name")->required();
  chart_cmd->add_option("--map", map, "Map spec: identity, left:a, dilation:t, flow:<field>:<t>, joined by @")->required();
  chart_cmd->add_option("--point", point, "Base point, comma separated (default: origin)");
  chart_cmd->add_option("--tol", tol, "Chart error tolerance at radius 0.1")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const Out out{format == "machine"};
  try {
    if (*validate_cmd) return cmd_validate(file, out);
    if (*frame_cmd) return cmd_frame(file, out);
    if (*solve_cmd) return cmd_solve(file, degree, probe_degree, basis, out);
    if (*probe_cmd) return cmd_probe(file, degree, out);
    if (*smooth_cmd) return cmd_smooth(file, eps, grid, tol, out);
    if (*weak_cmd) return cmd_verify_weak(file, field, push, grid, tol, box, out);
    if (*chart_cmd) {
      if (chart_cmd->count("--tol") == 0) tol = 1e-6;
      return cmd_chart(file, map, point, tol, out);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
