#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace prismdg {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

enum class ElemKind { wedge, tet };

/// Invalid user input: bad degree, malformed config, unknown keys.  CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mesh generation or validation failure (non-conforming faces, inverted
/// elements, parse errors).  CLI exit code 4.
struct MeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Runtime numerical failure: NaN state, energy blow-up, singular operator.
/// CLI exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Analysis-specific failure (DOF cap exceeded, eigensolver failure).
struct AnalysisError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

} // namespace prismdg
