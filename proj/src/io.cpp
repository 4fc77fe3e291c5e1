#include "qproj/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qproj {

namespace {

double require_number(const Json& node, const char* key) {
  if (!node.contains(key) || !node[key].is_number())
    throw SchemaError(std::string("model: missing or non-numeric field '") + key + "'");
  return node[key].get<double>();
}

int require_int(const Json& node, const char* key) {
  if (!node.contains(key) || !node[key].is_number_integer())
    throw SchemaError(std::string("model: missing or non-integer field '") + key + "'");
  return node[key].get<int>();
}

}  // namespace

GridSpec parse_grid(const Json& node) {
  if (!node.is_object()) throw SchemaError("model: 'grid' must be an object");
  GridSpec g;
  g.q_min = require_number(node, "q_min");
  g.q_max = require_number(node, "q_max");
  g.points = require_int(node, "points");
  try {
    g.validate();
  } catch (const std::exception& e) {
    throw SchemaError(std::string("model: ") + e.what());
  }
  return g;
}

OperatorExpr parse_expr(const Json& node) {
  if (!node.is_array() || node.empty())
    throw SchemaError("model: 'terms' must be a non-empty array");
  OperatorExpr expr;
  for (const auto& term : node) {
    if (!term.is_object()) throw SchemaError("model: each term must be an object");
    expr.add(require_number(term, "coeff"), require_int(term, "p"), require_int(term, "q"));
  }
  return expr;
}

ModelSpec parse_model(const Json& doc) {
  if (!doc.is_object()) throw SchemaError("model: top-level document must be an object");
  const Json& node = doc.contains("constraint") ? doc["constraint"] : doc;
  if (!node.is_object()) throw SchemaError("model: 'constraint' must be an object");
  if (!node.contains("kind") || !node["kind"].is_string())
    throw SchemaError("model: missing 'kind'");
  const std::string kind = node["kind"].get<std::string>();

  ModelSpec model;
  if (kind == "quartic" || kind == "harmonic") {
    model.kind = kind == "quartic" ? ModelSpec::Kind::Quartic : ModelSpec::Kind::Harmonic;
    model.fock_dim = node.contains("N") ? require_int(node, "N") : 128;
    if (model.fock_dim < 16) throw SchemaError("model: quartic constraint needs N >= 16");
    if (node.contains("snap_level"))
      model.snap = SnapPolicy::snap_to_level(require_int(node, "snap_level"));
    else if (node.contains("c"))
      model.snap = SnapPolicy::explicit_c(require_number(node, "c"));
  } else if (kind == "mixed") {
    model.kind = ModelSpec::Kind::Mixed;
    if (node.contains("grid")) model.grid = parse_grid(node["grid"]);
  } else if (kind == "expression") {
    model.kind = ModelSpec::Kind::Expression;
    if (!node.contains("terms")) throw SchemaError("model: expression needs 'terms'");
    model.expr = parse_expr(node["terms"]);
    if (node.contains("grid")) {
      throw SchemaError("model: expression operators are Fock-basis; use kind 'mixed' for grids");
    }
    model.fock_dim = node.contains("N") ? require_int(node, "N") : 64;
    if (model.fock_dim < 2) throw SchemaError("model: expression needs N >= 2");
  } else {
    throw SchemaError("model: unknown kind '" + kind + "'");
  }
  return model;
}

ModelSpec load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("model: cannot open '" + path + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("model: ") + e.what());
  }
  return parse_model(doc);
}

OperatorMatrix build_model_operator(const ModelSpec& model) {
  switch (model.kind) {
    case ModelSpec::Kind::Quartic:
      return quartic_constraint(model.fock_dim, model.snap).op;
    case ModelSpec::Kind::Harmonic:
      return harmonic_constraint(model.fock_dim, model.snap).op;
    case ModelSpec::Kind::Mixed:
      return mixed_constraint(model.grid).op;
    case ModelSpec::Kind::Expression:
      return build_operator(model.expr, BasisSpec::fock(model.fock_dim));
  }
  throw std::logic_error("unreachable");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json to_json(const GapReport& r) {
  return Json{{"Delta", r.delta_cap},
              {"zero_multiplicity", r.zero_multiplicity},
              {"zero_tolerance", r.zero_tolerance},
              {"spectrum_excerpt", r.spectrum_excerpt}};
}

Json to_json(const BoundReport& r) {
  return Json{{"L", r.L},
              {"measured_norm", r.measured_norm},
              {"bound", r.bound},
              {"saturation_ratio", r.saturation_ratio}};
}

Json to_json(const ZeroModeReport& r) {
  return Json{{"eigenvalue", r.eigenvalue},
              {"overlap", r.overlap},
              {"gap_above", r.gap_above},
              {"grid_spacing", r.grid_spacing}};
}

Json to_json(const RankOneReport& r) {
  return Json{{"delta_values", r.delta_values},
              {"sigma_ratio", r.sigma_ratio},
              {"fitted_slope", r.fitted_slope},
              {"rank", r.rank}};
}

void CsvWriter::add_row(const std::vector<double>& values) {
  if (values.size() != columns_.size())
    throw std::invalid_argument("CsvWriter: row width does not match header");
  rows_.push_back(values);
}

std::string CsvWriter::str() const {
  std::ostringstream out;
  for (size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
  out << "\n";
  for (const auto& row : rows_) {
    for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
  return out.str();
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("CsvWriter: cannot open '" + path + "'");
  out << str();
}

void write_matrix_csv(const OperatorMatrix& op, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_csv: cannot open '" + path + "'");
  out << "row,col,re,im\n";
  if (op.storage() == OperatorMatrix::Storage::Tridiagonal) {
    for (int i = 0; i < op.dim(); ++i) {
      out << i << "," << i << "," << format_double(op.diag()[i]) << ",0\n";
      if (i + 1 < op.dim()) {
        out << i << "," << i + 1 << "," << format_double(op.sub()[i]) << ",0\n";
        out << i + 1 << "," << i << "," << format_double(op.sub()[i]) << ",0\n";
      }
    }
    return;
  }
  const ComplexMatrix& m = op.entries();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      const Complex v = m(r, c);
      if (v != Complex(0.0, 0.0))
        out << r << "," << c << "," << format_double(v.real()) << ","
            << format_double(v.imag()) << "\n";
    }
}

void write_json(const Json& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_json: cannot open '" + path + "'");
  out << doc.dump(2) << "\n";
}

}  // namespace qproj
