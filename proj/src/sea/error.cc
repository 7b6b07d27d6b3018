// sea/error.cc

#include "sea/error.h"

namespace sea {

const char* err_name(Err e) {
  switch (e) {
    case Err::missing_file: return "MissingFile";
    case Err::bad_magic: return "BadMagic";
    case Err::unsupported_format: return "UnsupportedFormat";
    case Err::too_short: return "TooShort";
    case Err::io_error: return "IoError";
    case Err::dimension_mismatch: return "DimensionMismatch";
    case Err::parse_error: return "ParseError";
    case Err::overlap_error: return "OverlapError";
    case Err::not_square: return "NotSquare";
    case Err::negative_entry: return "NegativeEntry";
    case Err::shape_mismatch: return "ShapeMismatch";
    case Err::non_finite: return "NonFinite";
    case Err::non_finite_gradient: return "NonFiniteGradient";
    case Err::empty_corpus: return "EmptyCorpus";
    case Err::range_error: return "RangeError";
    case Err::length_mismatch: return "LengthMismatch";
    case Err::index_error: return "IndexError";
    case Err::version_mismatch: return "VersionMismatch";
    case Err::budget_exceeded: return "BudgetExceeded";
    case Err::bound_violated: return "BoundViolated";
  }
  return "Error";
}

}  // namespace sea
