#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "oqe/acceptance/acceptance.hpp"
#include "oqe/core/errors.hpp"
#include "oqe/flow/flow.hpp"
#include "oqe/qe/qe.hpp"
#include "oqe/spectral/eigen_system.hpp"
#include "oqe/spectral/mesh.hpp"
#include "oqe/symbols/symbols.hpp"

namespace oqe::cli {

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  std::string backend;
  int sphere_n{1};
  std::string triangle;
  int p{0}, q{0}, r{0};
  int refine{4};
  int k{170};
  int l_max{-1};
  double lambda{0};
  double T{0}, dt{0.25};
  int n_starts{20};
  double eps{0.1};
  std::string observable;
  std::optional<double> theta, phi;
  std::optional<double> x1, x2, direction;
  std::string m{"1,0"};
  double k_min{200}, k_max{400};
  std::vector<double> zeta_eps{0.2, 0.1, 0.05, 0.02};
  std::string criteria;
  std::uint64_t seed{0};
  std::string out{"-"};
  std::string format{"csv"};
  std::string mesh_in, mesh_out;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<int> parse_ints(const std::string& s, const std::string& what) {
  std::vector<int> out;
  for (const auto& tok : split(s, ',')) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) throw ConfigError(what + ": not an integer list: " + s);
    out.push_back(v);
  }
  return out;
}

nlohmann::ordered_json config_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["backend"] = c.backend;
  if (c.backend == "sphere") j["sphere_n"] = c.sphere_n;
  if (c.backend == "triangle") {
    j["triangle"] = {c.p, c.q, c.r};
    j["refine"] = c.refine;
    j["k"] = c.k;
    if (!c.mesh_in.empty()) j["mesh_in"] = c.mesh_in;
  }
  if (c.l_max >= 0) j["l_max"] = c.l_max;
  j["lambda"] = c.lambda;
  j["T"] = c.T;
  j["dt"] = c.dt;
  j["n_starts"] = c.n_starts;
  j["eps"] = c.eps;
  j["observable"] = c.observable;
  j["seed"] = c.seed;
  j["format"] = c.format;
  return j;
}

void validate(RunConfig& c, bool sphere_given, bool triangle_given) {
  if (c.format != "csv" && c.format != "json") throw ConfigError("format must be csv or json");
  if (c.backend.empty()) {
    if (sphere_given && triangle_given) throw ConfigError("give either --sphere-n or --triangle, not both");
    c.backend = triangle_given ? "triangle" : sphere_given ? "sphere" : "pillowcase";
  }
  if (c.backend != "sphere" && c.backend != "pillowcase" && c.backend != "triangle")
    throw ConfigError("backend must be sphere, pillowcase or triangle");
  if (c.backend == "triangle") {
    if (c.triangle.empty()) throw ConfigError("triangle backend needs --triangle p,q,r");
    const auto v = parse_ints(c.triangle, "triangle");
    if (v.size() != 3) throw ConfigError("triangle needs three orders p,q,r");
    for (int o : v)
      if (o < 2) throw ConfigError("triangle orders must be >= 2");
    c.p = v[0];
    c.q = v[1];
    c.r = v[2];
  }
  if (c.sphere_n < 1) throw ConfigError("sphere-n must be >= 1");
  if (c.refine < 0) throw ConfigError("refine must be >= 0");
  if (c.k < 1) throw ConfigError("k must be >= 1");
  if (!(c.dt > 0)) throw ConfigError("dt must be > 0");
  if (c.n_starts < 2) throw ConfigError("n-starts must be >= 2");
  if (!(c.eps > 0)) throw ConfigError("eps must be > 0");
  if (c.lambda < 0 || c.T < 0) throw ConfigError("lambda and T must be positive");
  if (c.lambda == 0) c.lambda = c.backend == "sphere" ? 60.0 : 200.0;
  if (c.T == 0) {
    if (c.command == "geodesic") c.T = 10;
    else if (c.command == "lyapunov") c.T = 1e4;
    else c.T = 1e3;
  }
  if (c.dt > c.T) throw ConfigError("dt must not exceed T");
}

// ---------------------------------------------------------------- spectra

spectral::EigenSystem build_spectrum(const RunConfig& c) {
  if (c.backend == "sphere")
    return spectral::sphere_quotient_spectrum(c.sphere_n, c.l_max >= 0 ? c.l_max : static_cast<int>(std::ceil(c.lambda)));
  if (c.backend == "pillowcase") return spectral::pillowcase_spectrum(c.lambda);
  if (!c.mesh_in.empty()) {
    std::ifstream in(c.mesh_in);
    if (!in) throw ConfigError("cannot read mesh file " + c.mesh_in);
    return spectral::triangle_orbifold_spectrum(c.p, c.q, c.r, c.k, spectral::read_mesh(in));
  }
  return spectral::triangle_orbifold_spectrum(c.p, c.q, c.r, c.k, c.refine);
}

geom::GeometryBackend geometry(const RunConfig& c) {
  if (c.backend == "sphere") return geom::GeometryBackend::sphere_quotient(c.sphere_n);
  if (c.backend == "pillowcase") return geom::GeometryBackend::pillowcase();
  return geom::GeometryBackend::hyperbolic_triangle(c.p, c.q, c.r);
}

std::vector<std::string> observables_or(const RunConfig& c, std::vector<std::string> fallback) {
  return c.observable.empty() ? fallback : split(c.observable, ',');
}

Table cmd_spectrum(const RunConfig& c) {
  if (!c.mesh_out.empty()) {
    if (c.backend != "triangle") throw ConfigError("mesh-out needs the triangle backend");
    std::ofstream mo(c.mesh_out);
    if (!mo) throw ConfigError("cannot write mesh file " + c.mesh_out);
    spectral::write_mesh(spectral::triangle_mesh(geom::build_hyperbolic_triangle<double>(c.p, c.q, c.r), c.refine), mo);
  }
  const auto e = build_spectrum(c);
  Table t{{"index", "lambda", "laplace_eigenvalue"}, {}};
  for (std::size_t j = 0; j < e.size(); ++j)
    t.rows.push_back({static_cast<long long>(j), e.eigenvalues[j], e.eigenvalues[j] * e.eigenvalues[j]});
  return t;
}

std::vector<Cell> fit_row(const qe::WeylFit& f) {
  return {f.C, f.predicted, f.relative_error, f.exponent, static_cast<long long>(f.points), f.lambda_low, f.lambda_high};
}

Table cmd_weyl(const RunConfig& c) {
  Table t{{"C", "predicted", "relative_error", "exponent", "points", "lambda_low", "lambda_high"}, {}};
  t.rows.push_back(fit_row(qe::weyl_fit(build_spectrum(c))));
  return t;
}

Table cmd_local_weyl(const RunConfig& c) {
  const auto e = build_spectrum(c);
  auto names = qe::test_observable_names(e.backend.kind);
  names.insert(names.begin(), "one");
  Table t{{"observable", "omega", "C", "predicted", "relative_error", "exponent", "points", "lambda_low", "lambda_high"},
          {}};
  for (const auto& name : observables_or(c, names)) {
    const auto s = qe::matrix_elements(e, qe::make_qe_observable(name, e.backend));
    std::vector<Cell> row{name, s.omega};
    const auto f = fit_row(qe::local_weyl_fit(s));
    row.insert(row.end(), f.begin(), f.end());
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_pointwise(const RunConfig& c) {
  const auto e = build_spectrum(c);
  Table t{{"point", "theta", "phi", "lambda", "measured", "predicted", "ratio", "count"}, {}};
  const auto add = [&](const std::string& label, double th, double ph, const qe::PointwiseWeyl& r) {
    t.rows.push_back({label, th, ph, c.lambda, r.measured, r.predicted, r.ratio, static_cast<long long>(r.count)});
  };
  if (c.theta || c.phi) {
    const double th = c.theta.value_or(M_PI / 2), ph = c.phi.value_or(0.0);
    add("regular", th, ph, qe::pointwise_weyl(e, th, ph, 1, c.lambda));
  } else {
    add("cone", 0.0, 0.0, qe::pointwise_weyl_at_cone(e, e.backend.sphere_n, c.lambda));
  }
  return t;
}

std::string default_qe_observable(const spectral::EigenSystem& e) { return qe::test_observable_names(e.backend.kind)[0]; }

Table cmd_qe(const RunConfig& c) {
  const auto e = build_spectrum(c);
  Table t{{"observable", "lambda", "count", "variance", "excluded_fraction"}, {}};
  for (const auto& name : observables_or(c, {default_qe_observable(e)})) {
    const auto s = qe::matrix_elements(e, qe::make_qe_observable(name, e.backend));
    const auto prof = qe::qe_variance_and_density(s, s.omega, c.eps);
    for (std::size_t i = 0; i < prof.lambda.size(); ++i)
      t.rows.push_back({name, prof.lambda[i], static_cast<long long>(prof.count[i]), prof.variance[i],
                        prof.excluded_fraction[i]});
  }
  return t;
}

Table cmd_defect(const RunConfig& c) {
  const auto e = build_spectrum(c);
  const double top = e.eigenvalues.back();
  Table t{{"observable", "lambda", "norm", "ratio", "count", "largest_block"}, {}};
  for (const auto& name : observables_or(c, {default_qe_observable(e)})) {
    const auto obs = qe::make_qe_observable(name, e.backend);
    for (double frac : {0.25, 0.5, 1.0}) {
      const double l = std::min(c.lambda, top) * frac;
      const auto r = qe::operator_average_defect(e, obs, l);
      t.rows.push_back({name, l, r.norm, r.ratio, static_cast<long long>(r.count), static_cast<long long>(r.largest_block)});
    }
  }
  return t;
}

Table cmd_egorov(const RunConfig& c) {
  const auto m = parse_ints(c.m, "m");
  if (m.size() != 2) throw ConfigError("m needs two integers m1,m2");
  if (!(c.k_min > 0) || !(c.k_max > c.k_min)) throw ConfigError("need 0 < k-min < k-max");
  Table t{{"m1", "m2", "k_min", "k_max", "mismatch"}, {}};
  for (double s : {1.0, 2.0})
    t.rows.push_back({static_cast<long long>(m[0]), static_cast<long long>(m[1]), s * c.k_min, s * c.k_max,
                      qe::egorov_phase_check({m[0], m[1]}, s * c.k_min, s * c.k_max)});
  return t;
}

// ---------------------------------------------------------------- flow

using flow::UnitPhasePoint;

template <class B>
UnitPhasePoint<double> start_point(const RunConfig& c, const B& b) {
  if (c.x1 || c.x2 || c.direction) {
    if (!(c.x1 && c.x2 && c.direction)) throw ConfigError("a start point needs x1, x2 and direction");
    return {*c.x1, *c.x2, *c.direction};
  }
  auto rng = flow::sub_rng(c.seed, 0);
  return b.sample_liouville(rng);
}

std::string default_flow_observable(const RunConfig& c) {
  if (c.backend == "triangle") return "bump";
  if (c.backend == "sphere") return "cos2theta";
  return "cos2dir";
}

Table cmd_geodesic(const RunConfig& c) {
  const auto fb = flow::make_flow_backend(geometry(c));
  return std::visit(
      [&](const auto& b) {
        Table t{{"step", "t", "x1", "x2", "direction"}, {}};
        auto s = start_point(c, b);
        const std::size_t n = flow::birkhoff_sample_count(c.T, c.dt);
        for (std::size_t k = 0; k <= n; ++k) {
          const double tk = static_cast<double>(k) * c.dt;
          const auto p = flow::geodesic_advance(s, tk, b);
          t.rows.push_back({static_cast<long long>(k), tk, p.x1, p.x2, p.direction});
        }
        return t;
      },
      fb);
}

Table cmd_birkhoff(const RunConfig& c) {
  const auto fb = flow::make_flow_backend(geometry(c));
  Table t{{"observable", "T", "dt", "x1", "x2", "direction", "average"}, {}};
  std::visit(
      [&](const auto& b) {
        const auto s = start_point(c, b);
        for (const auto& name : observables_or(c, {default_flow_observable(c)})) {
          const auto obs = flow::make_observable(name, fb);
          t.rows.push_back({name, c.T, c.dt, s.x1, s.x2, s.direction, flow::birkhoff_average(obs.f, s, c.T, c.dt, b)});
        }
      },
      fb);
  return t;
}

Table cmd_lyapunov(const RunConfig& c) {
  const auto fb = flow::make_flow_backend(geometry(c));
  return std::visit(
      [&](const auto& b) {
        const auto s = start_point(c, b);
        const auto r = flow::lyapunov_exponent(s, c.T, b);
        return Table{{"exponent", "half_width", "T", "renormalizations"},
                     {{r.exponent, r.half_width, r.T, static_cast<long long>(r.renormalizations)}}};
      },
      fb);
}

Table cmd_ergodicity(const RunConfig& c) {
  const auto fb = flow::make_flow_backend(geometry(c));
  std::vector<flow::PhaseObservable> obs;
  for (const auto& name : observables_or(c, {"one", default_flow_observable(c)}))
    obs.push_back(flow::make_observable(name, fb));
  return std::visit(
      [&](const auto& b) {
        const auto rep = flow::ergodicity_report(obs, c.n_starts, c.T, b, c.seed, c.dt);
        Table t{{"observable", "T", "n_starts", "mean", "variance", "liouville_reference"}, {}};
        for (const auto& o : rep.observables) {
          double mean = 0;
          for (double a : o.averages) mean += a;
          mean /= static_cast<double>(o.averages.size());
          t.rows.push_back({o.name, rep.T, static_cast<long long>(rep.n_starts), mean, o.variance, o.liouville_reference});
        }
        return t;
      },
      fb);
}

// ---------------------------------------------------------------- symbols, report

Table cmd_zeta(const RunConfig& c) {
  const auto e = build_spectrum(c);
  Table t{{"observable", "residue", "uncertainty", "sign", "tail_C", "two_C", "residue_trace"}, {}};
  for (const auto& name : observables_or(c, {"one"})) {
    const auto obs = qe::make_qe_observable(name, e.backend);
    const auto probe = symbols::zeta_residue(e, obs, c.zeta_eps);
    const double twoC = 2 * qe::local_weyl_fit(qe::matrix_elements(e, obs)).C;
    const double tau = e.backend.kind == geom::BackendKind::pillowcase
                           ? symbols::residue_trace(symbols::residue_symbol(obs, e.backend), e.backend)
                           : std::nan("");
    t.rows.push_back({name, probe.residue, probe.uncertainty, static_cast<long long>(probe.sign), probe.tail_C, twoC, tau});
  }
  return t;
}

Table cmd_report(const RunConfig& c, bool& all_pass) {
  std::vector<int> only;
  if (!c.criteria.empty()) {
    only = parse_ints(c.criteria, "criteria");
    for (int id : only)
      if (id < 1 || id > acceptance::kCriteria) throw ConfigError("criteria ids are 1.." + std::to_string(acceptance::kCriteria));
  }
  Table t{{"criterion", "name", "pass", "detail"}, {}};
  all_pass = true;
  for (const auto& r : acceptance::run_acceptance(only)) {
    t.rows.push_back({static_cast<long long>(r.id), r.name, r.pass, r.detail});
    all_pass = all_pass && r.pass;
  }
  return t;
}

// ---------------------------------------------------------------- output

std::string csv_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<V, long long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<V, bool>) {
          return v ? "true" : "false";
        } else {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
          return q + "\"";
        }
      },
      cell);
}

void write_json(const Table& t, const RunConfig& c, std::ostream& out) {
  nlohmann::ordered_json j;
  j["config"] = config_json(c);
  j["results"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json o;
    for (std::size_t i = 0; i < row.size(); ++i)
      std::visit([&](const auto& v) { o[t.columns[i]] = v; }, row[i]);
    j["results"].push_back(std::move(o));
  }
  j["version"] = kVersion;
  out << j.dump(2) << '\n';
}

std::string one_line(std::string s) {
  for (char& ch : s)
    if (ch == '\n' || ch == '\r') ch = ' ';
  return s;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const FoldError*>(&e)) return "FoldError";
  if (dynamic_cast<const NumericalBlowup*>(&e)) return "NumericalBlowup";
  if (dynamic_cast<const MeshError*>(&e)) return "MeshError";
  if (dynamic_cast<const EigenSolverError*>(&e)) return "EigenSolverError";
  if (dynamic_cast<const UnsupportedObservable*>(&e)) return "UnsupportedObservable";
  if (dynamic_cast<const UnsupportedBackend*>(&e)) return "UnsupportedBackend";
  if (dynamic_cast<const PoleError*>(&e)) return "PoleError";
  if (dynamic_cast<const ZetaTailError*>(&e)) return "ZetaTailError";
  if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
  if (dynamic_cast<const Error*>(&e)) return "Error";
  return "InternalError";
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_csv(const Table& t, std::ostream& out) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Ergodicity and spectral numerics on compact 2-orbifolds", "oqe-cli"};
  app.set_config("--config", "", "key=value configuration file (flags override it)");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);
  app.fallthrough();

  app.add_option("--seed", c.seed, "64-bit run seed");
  app.add_option("--out", c.out, "output path ('-' for stdout)");
  app.add_option("--format", c.format, "csv or json");
  app.add_option("--backend", c.backend, "sphere, pillowcase or triangle (inferred when omitted)");
  auto* sphere_opt = app.add_option("--sphere-n", c.sphere_n, "sphere quotient order n");
  auto* tri_opt = app.add_option("--triangle", c.triangle, "triangle orders p,q,r");
  app.add_option("--refine", c.refine, "FEM refinement level");
  app.add_option("--k", c.k, "FEM eigenpairs per parity");
  app.add_option("--l-max", c.l_max, "sphere harmonic degree cutoff");
  app.add_option("--lambda", c.lambda, "spectral cutoff lambda_max");
  app.add_option("--T", c.T, "flow time horizon");
  app.add_option("--dt", c.dt, "flow sampling step");
  app.add_option("--n-starts", c.n_starts, "ergodicity start count");
  app.add_option("--eps", c.eps, "QE exclusion threshold");
  app.add_option("--observable", c.observable, "observable name(s), comma separated");
  app.add_option("--theta", c.theta, "pointwise Weyl polar angle");
  app.add_option("--phi", c.phi, "pointwise Weyl azimuth");
  app.add_option("--x1", c.x1, "flow start x1");
  app.add_option("--x2", c.x2, "flow start x2");
  app.add_option("--direction", c.direction, "flow start direction");
  app.add_option("--m", c.m, "Egorov frequency m1,m2");
  app.add_option("--k-min", c.k_min, "Egorov annulus inner radius");
  app.add_option("--k-max", c.k_max, "Egorov annulus outer radius");
  app.add_option("--zeta-eps", c.zeta_eps, "zeta offsets (decreasing)");
  app.add_option("--criteria", c.criteria, "report: criterion ids, comma separated");
  app.add_option("--mesh-in", c.mesh_in, "read the triangle mesh from a file");
  app.add_option("--mesh-out", c.mesh_out, "spectrum: write the triangle mesh to a file");

  const std::map<std::string, std::string> commands = {
      {"spectrum", "eigenvalue list"},
      {"weyl", "Weyl-law fit of the counting function"},
      {"local-weyl", "local Weyl fits for observables"},
      {"pointwise-weyl", "pointwise Weyl sum on a sphere quotient"},
      {"qe", "quantum-ergodicity variance profile"},
      {"defect", "operator-average defect at three cutoffs"},
      {"egorov", "Egorov phase mismatch on the flat torus"},
      {"geodesic", "sampled geodesic trajectory"},
      {"birkhoff", "Birkhoff time average from one start"},
      {"lyapunov", "top Lyapunov exponent"},
      {"ergodicity", "multi-start Birkhoff variance"},
      {"zeta", "residue of the spectral zeta function at -2"},
      {"report", "acceptance suite"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error kind=ConfigError message=" << one_line(e.what()) << '\n';
    return 2;
  }
  c.command = app.get_subcommands().front()->get_name();

  bool all_pass = true;
  Table table;
  try {
    validate(c, sphere_opt->count() > 0, tri_opt->count() > 0);
    if (c.command == "spectrum") table = cmd_spectrum(c);
    else if (c.command == "weyl") table = cmd_weyl(c);
    else if (c.command == "local-weyl") table = cmd_local_weyl(c);
    else if (c.command == "pointwise-weyl") table = cmd_pointwise(c);
    else if (c.command == "qe") table = cmd_qe(c);
    else if (c.command == "defect") table = cmd_defect(c);
    else if (c.command == "egorov") table = cmd_egorov(c);
    else if (c.command == "geodesic") table = cmd_geodesic(c);
    else if (c.command == "birkhoff") table = cmd_birkhoff(c);
    else if (c.command == "lyapunov") table = cmd_lyapunov(c);
    else if (c.command == "ergodicity") table = cmd_ergodicity(c);
    else if (c.command == "zeta") table = cmd_zeta(c);
    else table = cmd_report(c, all_pass);
  } catch (const ConfigError& e) {
    err << "error kind=ConfigError message=" << one_line(e.what()) << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error kind=" << error_kind(e) << " message=" << one_line(e.what()) << '\n';
    return 3;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (c.out != "-") {
    file.open(c.out, std::ios::binary);
    if (!file) {
      err << "error kind=ConfigError message=cannot open output file " << c.out << '\n';
      return 2;
    }
    sink = &file;
  }
  sink->imbue(std::locale::classic());
  if (c.format == "json") write_json(table, c, *sink);
  else write_csv(table, *sink);
  return all_pass ? 0 : 1;
}

}  // namespace oqe::cli
