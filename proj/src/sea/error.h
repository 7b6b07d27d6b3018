// sea/error.h

#ifndef SEA_ERROR_H_
#define SEA_ERROR_H_

#include <stdexcept>
#include <string>

namespace sea {

enum class Err {
  missing_file,
  bad_magic,
  unsupported_format,
  too_short,
  io_error,
  dimension_mismatch,
  parse_error,
  overlap_error,
  not_square,
  negative_entry,
  shape_mismatch,
  non_finite,
  non_finite_gradient,
  empty_corpus,
  range_error,
  length_mismatch,
  index_error,
  version_mismatch,
  budget_exceeded,
  bound_violated,
};

const char* err_name(Err e);

// Single exception type carrying a machine-checkable code plus a message.
class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(std::string(err_name(code)) + ": " + msg),
        code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

}  // namespace sea

#endif  // SEA_ERROR_H_
