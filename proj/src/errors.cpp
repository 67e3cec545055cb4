#include "linklab/errors.hpp"

namespace linklab {

const char* errc_name(errc c) {
  switch (c) {
    case errc::not_prime: return "NotPrime";
    case errc::no_irreducible_found: return "NoIrreducibleFound";
    case errc::order_too_large: return "OrderTooLarge";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::field_mismatch: return "FieldMismatch";
    case errc::rank_too_large: return "RankTooLarge";
    case errc::dimension_error: return "DimensionError";
    case errc::structure_mismatch: return "StructureMismatch";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::no_convergence: return "NoConvergence";
    case errc::disconnected: return "Disconnected";
    case errc::not_mean_zero: return "NotMeanZero";
    case errc::invalid_point: return "InvalidPoint";
    case errc::invalid_isometry: return "InvalidIsometry";
    case errc::numerical_degeneracy: return "NumericalDegeneracy";
    case errc::bad_holonomy: return "BadHolonomy";
    case errc::class_violation: return "ClassViolation";
    case errc::malformed_input: return "MalformedInput";
    case errc::link_mismatch: return "LinkMismatch";
    case errc::missing_lambda: return "MissingLambda";
    case errc::constraint_violated: return "ConstraintViolated";
    case errc::rank_deficient: return "RankDeficient";
  }
  return "UnknownError";
}

}  // namespace linklab
