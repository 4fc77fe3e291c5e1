#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qproj/constraints.hpp"
#include "qproj/multiplier.hpp"
#include "qproj/operator_core.hpp"
#include "qproj/projector.hpp"
#include "qproj/types.hpp"

namespace qproj {

using Json = nlohmann::json;

/// Raised on model-spec violations; the CLI maps it to exit code 2 with the
/// offending JSON pointer in the message.
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// Parsed `model` document: either a constraint description or a free
/// operator expression with a basis.
struct ModelSpec {
  enum class Kind { Quartic, Harmonic, Mixed, Expression };
  Kind kind = Kind::Quartic;
  int fock_dim = 128;
  SnapPolicy snap = SnapPolicy::snap_to_level(0);
  GridSpec grid{-40.0, 40.0, 8001};
  OperatorExpr expr;
  BasisSpec basis;
};

ModelSpec parse_model(const Json& doc);
ModelSpec load_model(const std::string& path);

/// Builds the constraint (or expression) operator the model describes.
OperatorMatrix build_model_operator(const ModelSpec& model);

GridSpec parse_grid(const Json& node);
OperatorExpr parse_expr(const Json& node);

Json to_json(const GapReport& r);
Json to_json(const BoundReport& r);
Json to_json(const ZeroModeReport& r);
Json to_json(const RankOneReport& r);

/// Fixed-format float so reports are byte-identical across runs.
std::string format_double(double v);

/// CSV writer with a header row; every numeric cell is rendered through
/// format_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void add_row(const std::vector<double>& values);
  void write(const std::string& path) const;
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

/// Sparse-style matrix export: one row per stored entry (row, col, re, im).
void write_matrix_csv(const OperatorMatrix& op, const std::string& path);

void write_json(const Json& doc, const std::string& path);

}  // namespace qproj
