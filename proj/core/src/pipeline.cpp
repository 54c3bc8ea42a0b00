#include "pointhop/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <functional>
#include <mutex>
#include <set>
#include <thread>

#include "pointhop/error.hpp"
#include "pointhop/kdtree.hpp"
#include "pointhop/octant.hpp"
#include "pointhop/rng.hpp"
#include "pointhop/sampling.hpp"

namespace pointhop {
namespace {

// Fixed work-unit size for parallel passes over clouds. Partial results are
// always merged in chunk order, so thread count never changes bits.
constexpr int kCloudChunk = 16;

void parallel_chunks(int n_items, int threads, const std::function<void(int, int)>& run_chunk) {
  const int n_chunks = (n_items + kCloudChunk - 1) / kCloudChunk;
  auto chunk_range = [n_items](int chunk, int& begin, int& end) {
    begin = chunk * kCloudChunk;
    end = std::min(begin + kCloudChunk, n_items);
  };
  if (threads <= 1 || n_chunks <= 1) {
    for (int c = 0; c < n_chunks; ++c) {
      int begin, end;
      chunk_range(c, begin, end);
      run_chunk(begin, end);
    }
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const int c = next.fetch_add(1);
      if (c >= n_chunks) return;
      int begin, end;
      chunk_range(c, begin, end);
      try {
        run_chunk(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_workers = std::min(threads, n_chunks);
  pool.reserve(size_t(n_workers));
  for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct CloudState {
  Eigen::Matrix<double, Eigen::Dynamic, 3> positions;
  Eigen::MatrixXd attributes;
  uint64_t key = 0;
};

CloudState initial_state(const PointCloud& cloud, const PointHopConfig& config, int input_count) {
  if (cloud.size() < input_count)
    raise(errc::insufficient_points, "cloud has " + std::to_string(cloud.size()) +
                                         " points, need " + std::to_string(input_count));
  if (config.color_attributes && !cloud.has_colors())
    raise(errc::dimension_mismatch, "config wants color attributes but cloud has none");

  const PointCloud canonical = sort_canonical(cloud);
  const uint64_t key = content_key(canonical);
  const PointCloud input =
      random_dropout(canonical, input_count, derive_seed(config.seed, seed_domain::fit_dropout, key));

  CloudState state;
  state.key = key;
  state.positions = input.points;
  state.attributes.resize(input_count, config.initial_attribute_dim());
  state.attributes.leftCols(3) = input.points;
  if (config.color_attributes) state.attributes.rightCols(3) = input.colors;
  return state;
}

struct UnitStep {
  std::vector<int> retained;
  Eigen::MatrixXd descriptors;
  std::vector<std::vector<int>> regions;  // filled only when requested
};

UnitStep build_unit(const CloudState& state, int unit, const PointHopConfig& config,
                    bool want_regions) {
  const int n_in = int(state.positions.rows());
  const int k = config.k_values[size_t(unit)];
  if (n_in < k)
    raise(errc::insufficient_points, "unit " + std::to_string(unit + 1) + " input has " +
                                         std::to_string(n_in) + " points, K=" + std::to_string(k));
  const int retain = std::min(config.unit_points[size_t(unit)], n_in);

  UnitStep step;
  if (config.use_fps) {
    step.retained = farthest_point_sample(state.positions, retain);
  } else {
    step.retained = random_sample_indices(
        n_in, retain,
        derive_seed(config.seed, seed_domain::unit_sampling + uint64_t(unit), state.key));
  }

  const SpatialIndex index(state.positions);
  const int desc_dim = 8 * int(state.attributes.cols());
  step.descriptors.resize(retain, desc_dim);
  if (want_regions) step.regions.resize(size_t(retain));
  for (int r = 0; r < retain; ++r) {
    const int center = step.retained[size_t(r)];
    const LocalRegion region = index.knn(center, k);
    step.descriptors.row(r) =
        octant_descriptor(state.positions.row(center), region, state.positions, state.attributes);
    if (want_regions) step.regions[size_t(r)] = region.neighbor_indices;
  }
  return step;
}

void advance_state(CloudState& state, const UnitStep& step, const SaabFilterBank& bank) {
  const int retain = int(step.retained.size());
  Eigen::Matrix<double, Eigen::Dynamic, 3> positions(retain, 3);
  for (int r = 0; r < retain; ++r)
    positions.row(r) = state.positions.row(step.retained[size_t(r)]);
  state.positions = std::move(positions);
  state.attributes = bank.apply_rows(step.descriptors);
}

}  // namespace

const char* to_string(Pooling p) {
  switch (p) {
    case Pooling::max: return "max";
    case Pooling::mean: return "mean";
    case Pooling::l1: return "l1";
    case Pooling::l2: return "l2";
  }
  return "?";
}

std::optional<Pooling> pooling_from_string(std::string_view name) {
  if (name == "max") return Pooling::max;
  if (name == "mean") return Pooling::mean;
  if (name == "l1") return Pooling::l1;
  if (name == "l2") return Pooling::l2;
  return std::nullopt;
}

void PointHopConfig::validate() const {
  if (input_points < 1) raise(errc::bad_config, "input_points must be >= 1");
  if (unit_points[0] > input_points)
    raise(errc::bad_config, "unit_points[0] exceeds input_points");
  int prev_in = input_points;
  const auto ddims = pointhop::descriptor_dims(*this);
  for (int i = 0; i < 4; ++i) {
    if (unit_points[size_t(i)] < 1) raise(errc::bad_config, "unit_points must be >= 1");
    if (i > 0 && unit_points[size_t(i)] > unit_points[size_t(i - 1)])
      raise(errc::bad_config, "unit_points must be nonincreasing");
    if (k_values[size_t(i)] < 1 || k_values[size_t(i)] > prev_in)
      raise(errc::bad_config, "k_values[" + std::to_string(i) + "] outside unit input size " +
                                  std::to_string(prev_in));
    if (n_ac[size_t(i)] < 1 || n_ac[size_t(i)] > ddims[size_t(i)] - 1)
      raise(errc::bad_config, "n_ac[" + std::to_string(i) + "] outside [1, " +
                                  std::to_string(ddims[size_t(i)] - 1) + "]");
    prev_in = unit_points[size_t(i)];
  }
  if (poolings.empty()) raise(errc::bad_config, "poolings must be nonempty");
  std::set<Pooling> unique(poolings.begin(), poolings.end());
  if (unique.size() != poolings.size()) raise(errc::bad_config, "duplicate pooling");
}

std::array<int, 4> descriptor_dims(const PointHopConfig& config) {
  std::array<int, 4> dims{};
  int d = config.initial_attribute_dim();
  for (int i = 0; i < 4; ++i) {
    dims[size_t(i)] = 8 * d;
    d = 1 + config.n_ac[size_t(i)];
  }
  return dims;
}

std::array<int, 4> output_dims(const PointHopConfig& config) {
  std::array<int, 4> dims{};
  for (int i = 0; i < 4; ++i) dims[size_t(i)] = 1 + config.n_ac[size_t(i)];
  return dims;
}

FeatureLayout make_layout(const PointHopConfig& config) {
  const auto odims = output_dims(config);
  FeatureLayout layout;
  int offset = 0;
  for (int unit = 0; unit < 4; ++unit) {
    if (config.last_stage_only && unit != 3) continue;
    for (const Pooling p : config.poolings) {
      layout.slices.push_back({unit, p, offset, odims[size_t(unit)]});
      offset += odims[size_t(unit)];
    }
  }
  layout.total_dim = offset;
  return layout;
}

Eigen::VectorXd pool(const Eigen::MatrixXd& attrs, Pooling method) {
  if (attrs.rows() == 0) raise(errc::empty_matrix, "pooling over an empty attribute matrix");
  switch (method) {
    case Pooling::max:
      return attrs.colwise().maxCoeff();
    case Pooling::mean:
      return attrs.colwise().mean();
    case Pooling::l1:
      return attrs.cwiseAbs().colwise().mean();
    case Pooling::l2:
      return attrs.array().square().colwise().mean().sqrt();
  }
  raise(errc::bad_config, "unknown pooling");
}

Eigen::VectorXd assemble_features(const FeatureLayout& layout,
                                  const std::vector<Eigen::MatrixXd>& unit_outputs) {
  Eigen::VectorXd features(layout.total_dim);
  for (const FeatureSlice& slice : layout.slices) {
    features.segment(slice.offset, slice.dim) = pool(unit_outputs[size_t(slice.unit)], slice.pooling);
  }
  return features;
}

uint64_t content_key(const PointCloud& pc) {
  uint64_t h = 0xCBF29CE484222325ull;  // FNV-1a offset basis
  auto mix = [&h](double v) {
    uint64_t bits = std::bit_cast<uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
      h ^= (bits >> (8 * b)) & 0xFF;
      h *= 0x100000001B3ull;
    }
  };
  for (int i = 0; i < pc.size(); ++i) {
    for (int d = 0; d < 3; ++d) mix(pc.points(i, d));
    if (pc.has_colors())
      for (int d = 0; d < 3; ++d) mix(pc.colors(i, d));
  }
  return h;
}

FitResult fit_pointhop(const std::vector<PointCloud>& clouds, const PointHopConfig& config,
                       int threads) {
  config.validate();
  const int n_clouds = int(clouds.size());
  if (n_clouds == 0) raise(errc::empty_dataset, "no training clouds");

  std::vector<CloudState> states(static_cast<size_t>(n_clouds));
  parallel_chunks(n_clouds, threads, [&](int begin, int end) {
    for (int c = begin; c < end; ++c)
      states[size_t(c)] = initial_state(clouds[size_t(c)], config, config.input_points);
  });

  FitResult result;
  result.model.config = config;
  result.model.descriptor_dims = descriptor_dims(config);
  result.model.output_dims = output_dims(config);
  result.model.layout = make_layout(config);

  std::vector<std::vector<Eigen::MatrixXd>> unit_outputs(static_cast<size_t>(n_clouds),
                                                         std::vector<Eigen::MatrixXd>(4));
  for (int unit = 0; unit < 4; ++unit) {
    const int desc_dim = result.model.descriptor_dims[size_t(unit)];

    // Pass one: stream descriptor statistics into per-chunk accumulators.
    const int n_chunks = (n_clouds + kCloudChunk - 1) / kCloudChunk;
    std::vector<SaabAccumulator> partials(static_cast<size_t>(n_chunks), SaabAccumulator(desc_dim));
    parallel_chunks(n_clouds, threads, [&](int begin, int end) {
      SaabAccumulator& acc = partials[size_t(begin / kCloudChunk)];
      for (int c = begin; c < end; ++c)
        acc.add(build_unit(states[size_t(c)], unit, config, false).descriptors);
    });
    SaabAccumulator acc(desc_dim);
    for (const SaabAccumulator& partial : partials) acc.merge(partial);
    result.model.banks[size_t(unit)] = acc.fit(config.n_ac[size_t(unit)], config.pca_reduction,
                                               config.center_ac);

    // Pass two: rebuild descriptors, push every cloud through the new bank.
    const SaabFilterBank& bank = result.model.banks[size_t(unit)];
    parallel_chunks(n_clouds, threads, [&](int begin, int end) {
      for (int c = begin; c < end; ++c) {
        const UnitStep step = build_unit(states[size_t(c)], unit, config, false);
        advance_state(states[size_t(c)], step, bank);
        unit_outputs[size_t(c)][size_t(unit)] = states[size_t(c)].attributes;
      }
    });
  }

  result.features.resize(n_clouds, result.model.layout.total_dim);
  for (int c = 0; c < n_clouds; ++c)
    result.features.row(c) = assemble_features(result.model.layout, unit_outputs[size_t(c)]);
  return result;
}

std::vector<Eigen::MatrixXd> transform(const PointHopModel& model, const PointCloud& cloud,
                                       std::optional<int> input_override, TransformTrace* trace) {
  const int input_count = input_override.value_or(model.config.input_points);
  CloudState state = initial_state(cloud, model.config, input_count);

  std::vector<Eigen::MatrixXd> outputs(4);
  for (int unit = 0; unit < 4; ++unit) {
    const UnitStep step = build_unit(state, unit, model.config, trace != nullptr);
    if (trace) {
      trace->units[size_t(unit)].input_positions = state.positions;
      trace->units[size_t(unit)].retained = step.retained;
      trace->units[size_t(unit)].regions = step.regions;
    }
    advance_state(state, step, model.banks[size_t(unit)]);
    outputs[size_t(unit)] = state.attributes;
  }
  return outputs;
}

Eigen::VectorXd extract_features(const PointHopModel& model, const PointCloud& cloud,
                                 std::optional<int> input_override) {
  return assemble_features(model.layout, transform(model, cloud, input_override));
}

}  // namespace pointhop
