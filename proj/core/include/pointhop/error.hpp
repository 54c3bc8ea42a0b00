#pragma once

#include <stdexcept>
#include <string>

namespace pointhop {

// Typed error conditions raised by the library. Exit-code mapping for the
// CLI lives in tools/; the library itself only throws.
enum class errc {
  malformed_header,
  index_out_of_range,
  truncated_file,
  degenerate_mesh,
  unknown_magic,
  length_mismatch,
  empty_dataset,
  unknown_class_name,
  too_many_requested,
  k_too_large,
  dimension_mismatch,
  too_few_samples,
  insufficient_points,
  empty_matrix,
  degenerate_labels,
  empty_test_set,
  version_mismatch,
  checksum_failure,
  channel_out_of_range,
  bad_config,
  io_failure,
};

const char* to_string(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message);
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] void raise(errc code, const std::string& message);

}  // namespace pointhop
