// qproj: batch front end for the projection-operator toolkit.
//
// Exit codes: 0 success, 2 model/schema violation, 3 numeric non-convergence.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qproj/constraints.hpp"
#include "qproj/io.hpp"
#include "qproj/multiplier.hpp"
#include "qproj/parallel.hpp"
#include "qproj/projector.hpp"
#include "qproj/reparam.hpp"
#include "qproj/verify.hpp"

namespace {

using namespace qproj;

constexpr int kExitSchema = 2;
constexpr int kExitNotConverged = 3;

struct NotConverged : std::runtime_error {
  Json report;
  NotConverged(const std::string& what, Json r) : std::runtime_error(what), report(std::move(r)) {}
};

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos < csv.size()) {
    size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    out.push_back(std::stod(csv.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (out.empty()) throw SchemaError("expected a comma-separated list of numbers");
  return out;
}

int run_spectrum(const std::string& model_path, const std::string& out_path, int count) {
  const ModelSpec model = load_model(model_path);
  const OperatorMatrix op = build_model_operator(model);
  RealVector w = eigenvalues_of(op);
  const double tol = 1e-8 * std::max(std::abs(w[0]), std::abs(w[w.size() - 1]));
  if (count > 0 && count < w.size()) w = w.head(count).eval();
  CsvWriter csv({"index", "eigenvalue", "zero_tolerance"});
  for (int i = 0; i < w.size(); ++i) csv.add_row({double(i), w[i], tol});
  csv.write(out_path);
  return 0;
}

int run_gap(const std::string& model_path, const std::string& out_path) {
  const ModelSpec model = load_model(model_path);
  const OperatorMatrix op = build_model_operator(model);
  const GapReport report = spectral_gap(op);
  CsvWriter csv({"Delta", "zero_multiplicity", "zero_tolerance"});
  csv.add_row({report.delta_cap, double(report.zero_multiplicity), report.zero_tolerance});
  csv.write(out_path);
  return 0;
}

int run_projector(const std::string& model_path, const std::string& out_path,
                  const std::string& scheme_name, double delta, double big_l, double xi,
                  int nodes) {
  const ModelSpec model = load_model(model_path);
  const OperatorMatrix op = build_model_operator(model);
  OperatorMatrix f;
  if (scheme_name == "spectral") {
    f = spectral_projector(op, delta, default_zero_tolerance(op));
  } else {
    ProjectorScheme scheme;
    if (scheme_name == "interval")
      scheme = ProjectorScheme::interval(big_l);
    else if (scheme_name == "sinc")
      scheme = ProjectorScheme::sinc(delta, xi);
    else if (scheme_name == "haar")
      scheme = ProjectorScheme::haar(nodes);
    else
      throw SchemaError("unknown scheme '" + scheme_name + "'");
    FilterDiagnostics diag;
    f = averaged_projector(op, scheme, &diag);
    if (!diag.converged)
      throw NotConverged("sinc quadrature did not converge at the requested Xi",
                         Json{{"scheme", scheme_name}, {"worst_error", diag.worst_error}});
  }
  write_matrix_csv(f, out_path);
  return 0;
}

int run_bound_sweep(const std::string& model_path, const std::string& out_path,
                    const std::vector<double>& l_values) {
  const ModelSpec model = load_model(model_path);
  const OperatorMatrix op = build_model_operator(model);
  const GapReport gap = spectral_gap(op);
  std::vector<BoundReport> reports(l_values.size());
  std::exception_ptr failure;
  parallel_for(static_cast<int>(l_values.size()), [&](int i) {
    try {
      reports[i] = bound_report(op, l_values[i]);
    } catch (...) {
      failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);
  CsvWriter csv({"L", "Delta", "measured_norm", "bound", "saturation_ratio"});
  for (const auto& r : reports)
    csv.add_row({r.L, gap.delta_cap, r.measured_norm, r.bound, r.saturation_ratio});
  csv.write(out_path);
  return 0;
}

int run_kernel(const std::string& points_path, const std::string& out_path,
               const std::string& kind, double delta) {
  std::ifstream in(points_path);
  if (!in) throw SchemaError("cannot open points file '" + points_path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("points: ") + e.what());
  }
  if (!doc.is_array() || doc.size() < 1) throw SchemaError("points: expected a JSON array");

  std::vector<PhasePoint> pts;
  for (const auto& node : doc) {
    if (!node.is_array() || node.size() < 2) throw SchemaError("points: each entry is an array");
    PhasePoint p;
    p.p = node[0].get<double>();
    p.q = node[1].get<double>();
    if (kind == "reduced" && node.size() >= 3) p.t = node[2].get<double>();
    if (kind == "extended") {
      if (node.size() < 4) throw SchemaError("points: extended kernel needs [p,q,s,t]");
      p.s = node[2].get<double>();
      p.t = node[3].get<double>();
    }
    if (kind == "reduced" && !p.t) p.t = 0.0;
    pts.push_back(p);
  }

  const int n = static_cast<int>(pts.size());
  struct Row {
    const PhasePoint* a;
    const PhasePoint* b;
    KernelValue v;
  };
  std::vector<Row> rows;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rows.push_back({&pts[i], &pts[j], {}});
  QuadratureSpec quad;
  std::exception_ptr failure;
  parallel_for(static_cast<int>(rows.size()), [&](int idx) {
    try {
      auto& row = rows[idx];
      if (kind == "reduced")
        row.v = reduced_kernel(*row.a, *row.b, ReducedMode::ClosedForm, quad);
      else if (kind == "extended")
        row.v = extended_kernel(*row.a, *row.b, delta, ExtendedMode::Exact, quad);
      else if (kind == "sector")
        row.v = pi_sector_kernel({row.a->p, row.a->q}, {row.b->p, row.b->q}, delta, quad);
      else
        throw SchemaError("unknown kernel kind '" + kind + "'");
    } catch (...) {
      failure = std::current_exception();
    }
  });
  if (failure) std::rethrow_exception(failure);

  for (const auto& row : rows)
    if (!row.v.converged)
      throw NotConverged("kernel quadrature did not converge",
                         Json{{"kind", kind}, {"estimated_error", row.v.estimated_error}});

  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("cannot open '" + out_path + "'");
  out << "a_p,a_q,a_s,a_t,b_p,b_q,b_s,b_t,re,im,est_error,method\n";
  auto label = [](KernelValue::Method m) {
    switch (m) {
      case KernelValue::Method::Quadrature: return "quadrature";
      case KernelValue::Method::ClosedForm: return "closed_form";
      case KernelValue::Method::LeadingOrder: return "leading_order";
    }
    return "";
  };
  for (const auto& row : rows) {
    auto coord = [&](const PhasePoint& p) {
      return format_double(p.p) + "," + format_double(p.q) + "," +
             format_double(p.s.value_or(0.0)) + "," + format_double(p.t.value_or(0.0));
    };
    out << coord(*row.a) << "," << coord(*row.b) << "," << format_double(row.v.value.real())
        << "," << format_double(row.v.value.imag()) << ","
        << format_double(row.v.estimated_error) << "," << label(row.v.method) << "\n";
  }
  return 0;
}

int run_verify(const std::string& suite, unsigned seed, const std::string& out_path) {
  const SuiteReport report = run_suite(suite, seed);
  const Json doc = to_json(report);
  if (!out_path.empty())
    write_json(doc, out_path);
  else
    std::cout << doc.dump(2) << "\n";
  for (const auto& c : report.checks)
    std::cerr << (c.passed ? "[PASS] " : "[FAIL] ") << c.name
              << "  measured=" << format_double(c.measured)
              << " tolerance=" << format_double(c.tolerance) << "\n";
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projection-operator toolkit for constrained quantum systems"};
  app.require_subcommand(1);

  std::string model_path, out_path, points_path;
  std::string scheme = "spectral", kind = "reduced", suite = "gap", l_list = "10,100,1000,10000";
  double delta = 0.1, big_l = 100.0, xi = 1000.0;
  int nodes = 64, count = 0;
  unsigned seed = qproj::kDefaultSeed;

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of a model operator");
  spectrum->add_option("--model", model_path, "model JSON")->required();
  spectrum->add_option("--out", out_path, "output CSV")->required();
  spectrum->add_option("--count", count, "keep only the lowest COUNT eigenvalues");

  auto* gap = app.add_subcommand("gap", "spectral gap about zero");
  gap->add_option("--model", model_path)->required();
  gap->add_option("--out", out_path)->required();

  auto* projector = app.add_subcommand("projector", "projector matrix for a scheme");
  projector->add_option("--model", model_path)->required();
  projector->add_option("--out", out_path)->required();
  projector->add_option("--scheme", scheme, "spectral|interval|sinc|haar");
  projector->add_option("--delta", delta, "window half-width");
  projector->add_option("--L", big_l, "interval half-width");
  projector->add_option("--xi", xi, "sinc truncation");
  projector->add_option("--nodes", nodes, "haar node count");

  auto* sweep = app.add_subcommand("bound-sweep", "||F-E|| against 1/(L Delta) over L values");
  sweep->add_option("--model", model_path)->required();
  sweep->add_option("--out", out_path)->required();
  sweep->add_option("--L", l_list, "comma-separated L values");

  auto* kernel = app.add_subcommand("kernel", "kernel table over a point list");
  kernel->add_option("--points", points_path, "JSON array of points")->required();
  kernel->add_option("--out", out_path)->required();
  kernel->add_option("--kind", kind, "reduced|extended|sector");
  kernel->add_option("--delta", delta, "window half-width (extended/sector)");

  auto* verify = app.add_subcommand("verify", "run a named verification suite");
  verify->add_option("--suite", suite, "gap|reparam|elevation")->required();
  verify->add_option("--seed", seed, "sweep seed (default fixed for reproducibility)");
  verify->add_option("--out", out_path, "JSON report path (stdout when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (spectrum->parsed()) return run_spectrum(model_path, out_path, count);
    if (gap->parsed()) return run_gap(model_path, out_path);
    if (projector->parsed())
      return run_projector(model_path, out_path, scheme, delta, big_l, xi, nodes);
    if (sweep->parsed()) return run_bound_sweep(model_path, out_path, parse_list(l_list));
    if (kernel->parsed()) return run_kernel(points_path, out_path, kind, delta);
    if (verify->parsed()) return run_verify(suite, seed, out_path);
  } catch (const qproj::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const NotConverged& e) {
    std::cerr << "not converged: " << e.what() << "\n" << e.report.dump(2) << "\n";
    return kExitNotConverged;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
