#include "pointhop/error.hpp"

namespace pointhop {

const char* to_string(errc code) {
  switch (code) {
    case errc::malformed_header: return "MalformedHeader";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::truncated_file: return "TruncatedFile";
    case errc::degenerate_mesh: return "DegenerateMesh";
    case errc::unknown_magic: return "UnknownMagic";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::empty_dataset: return "EmptyDataset";
    case errc::unknown_class_name: return "UnknownClassName";
    case errc::too_many_requested: return "TooManyRequested";
    case errc::k_too_large: return "KTooLarge";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::too_few_samples: return "TooFewSamples";
    case errc::insufficient_points: return "InsufficientPoints";
    case errc::empty_matrix: return "EmptyMatrix";
    case errc::degenerate_labels: return "DegenerateLabels";
    case errc::empty_test_set: return "EmptyTestSet";
    case errc::version_mismatch: return "VersionMismatch";
    case errc::checksum_failure: return "ChecksumFailure";
    case errc::channel_out_of_range: return "ChannelOutOfRange";
    case errc::bad_config: return "BadConfig";
    case errc::io_failure: return "IoFailure";
  }
  return "UnknownError";
}

Error::Error(errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(errc code, const std::string& message) { throw Error(code, message); }

}  // namespace pointhop
