#include "frachill/error.hpp"

namespace frachill {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Pole: return "pole";
    case ErrorKind::Accuracy: return "accuracy";
    case ErrorKind::NonDiagonalizable: return "non_diagonalizable";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Symmetry: return "symmetry";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::OutOfDomain: return "out_of_domain";
    case ErrorKind::Kink: return "kink";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::SingularForcing: return "singular_forcing";
    case ErrorKind::NonFiniteState: return "non_finite_state";
    case ErrorKind::QuadratureFailure: return "quadrature_failure";
    case ErrorKind::IterationFailure: return "iteration_failure";
    case ErrorKind::InvalidClassification: return "invalid_classification";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace frachill
