#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "pointhop/point_cloud.hpp"
#include "pointhop/saab.hpp"

namespace pointhop {

enum class Pooling : uint8_t { max = 0, mean = 1, l1 = 2, l2 = 3 };

const char* to_string(Pooling p);
std::optional<Pooling> pooling_from_string(std::string_view name);

/// Hyper-parameters of one four-unit cascade. Defaults mirror the standard
/// 256-point operating point; see configs/ for the 1024-point variant.
struct PointHopConfig {
  int input_points = 256;                     // random-dropout target fed to unit 1
  std::array<int, 4> unit_points{256, 128, 128, 64};  // points retained by each unit
  std::array<int, 4> k_values{64, 64, 64, 64};
  std::array<int, 4> n_ac{15, 25, 40, 80};
  std::vector<Pooling> poolings{Pooling::max, Pooling::mean, Pooling::l1, Pooling::l2};
  bool color_attributes = false;  // 0-hop attributes (x,y,z,r,g,b) instead of (x,y,z)
  uint64_t seed = 0;
  bool use_fps = true;        // ablation: false = random subsampling between units
  bool last_stage_only = false;  // ablation: features from the final unit only
  bool pca_reduction = false;    // ablation: plain PCA instead of Saab
  bool center_ac = true;         // sensitivity flag: mean-center AC components before PCA

  int initial_attribute_dim() const { return color_attributes ? 6 : 3; }

  /// Throws BadConfig on violated invariants (unit_points nonincreasing,
  /// k within unit input sizes, n_ac within descriptor dims, poolings
  /// nonempty and unique).
  void validate() const;
};

/// Attribute dims forced by the config: descriptor into unit i is
/// 8 * D_{i-1} wide and unit i emits 1 + n_ac[i] channels.
std::array<int, 4> descriptor_dims(const PointHopConfig& config);
std::array<int, 4> output_dims(const PointHopConfig& config);

struct FeatureSlice {
  int unit;
  Pooling pooling;
  int offset;
  int dim;
};

/// Where each (unit, pooling) block lives in the flat feature vector.
/// Slices are disjoint and cover [0, total_dim).
struct FeatureLayout {
  std::vector<FeatureSlice> slices;
  int total_dim = 0;
};

FeatureLayout make_layout(const PointHopConfig& config);

/// A fitted cascade: frozen filter banks plus the feature layout.
struct PointHopModel {
  static constexpr uint16_t format_version = 1;

  PointHopConfig config;
  std::array<SaabFilterBank, 4> banks;
  std::array<int, 4> descriptor_dims{};
  std::array<int, 4> output_dims{};
  FeatureLayout layout;
};

/// Per-unit diagnostics captured during transform: the unit's input
/// positions, which of them were retained, and each retained point's KNN
/// region. Used by inspection dumps and coverage tests.
struct TransformTrace {
  struct Unit {
    Eigen::Matrix<double, Eigen::Dynamic, 3> input_positions;
    std::vector<int> retained;
    std::vector<std::vector<int>> regions;
  };
  std::array<Unit, 4> units;
};

struct FitResult {
  PointHopModel model;
  Eigen::MatrixXd features;  // one row per training cloud, layout order
};

/// Fits the four banks over the training clouds, label-free. Every seeded
/// choice keys off the canonicalized cloud content, so output is invariant
/// to point order and to cloud order within the list; `threads` only
/// changes wall-clock time, never bits.
///
/// Throws InsufficientPoints when a cloud has fewer than input_points.
FitResult fit_pointhop(const std::vector<PointCloud>& clouds, const PointHopConfig& config,
                       int threads = 1);

/// Runs a cloud through the fitted cascade; returns the four per-unit
/// attribute matrices. `input_override` evaluates with a different input
/// density than the model was trained at (per-unit retained counts then
/// shrink to what is available).
std::vector<Eigen::MatrixXd> transform(const PointHopModel& model, const PointCloud& cloud,
                                       std::optional<int> input_override = {},
                                       TransformTrace* trace = nullptr);

/// Per-channel aggregation over points. Throws EmptyMatrix.
Eigen::VectorXd pool(const Eigen::MatrixXd& attrs, Pooling method);

/// Pools transform() outputs into the flat feature vector per the layout.
Eigen::VectorXd assemble_features(const FeatureLayout& layout,
                                  const std::vector<Eigen::MatrixXd>& unit_outputs);

Eigen::VectorXd extract_features(const PointHopModel& model, const PointCloud& cloud,
                                 std::optional<int> input_override = {});

/// Model file: "PHM1", u16 version, config block, filter banks (row-major
/// f64, little-endian), layout table, trailing CRC32.
std::string save_model(const PointHopModel& model);

/// Throws UnknownMagic, ChecksumFailure, VersionMismatch.
PointHopModel load_model(std::string_view bytes);

/// FNV-1a over the canonicalized coordinate (and color) bit patterns.
/// Seeds all per-cloud randomness, so equal point sets behave identically
/// regardless of file order or position in a dataset.
uint64_t content_key(const PointCloud& pc);

}  // namespace pointhop
