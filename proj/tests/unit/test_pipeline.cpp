#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "doctest.h"
#include "pointhop/error.hpp"
#include "pointhop/pipeline.hpp"
#include "pointhop/rng.hpp"
#include "pointhop/serialize.hpp"
#include "synth.hpp"

using namespace pointhop;

namespace {

// Small cascade that fits/transforms quickly in unit tests.
PointHopConfig tiny_config() {
  PointHopConfig cfg;
  cfg.input_points = 64;
  cfg.unit_points = {64, 32, 16, 8};
  cfg.k_values = {8, 8, 8, 8};
  cfg.n_ac = {4, 6, 8, 10};
  cfg.seed = 7;
  return cfg;
}

std::vector<PointCloud> tiny_clouds(int count, int points = 64, uint64_t seed = 5000) {
  std::vector<PointCloud> clouds;
  for (int i = 0; i < count; ++i)
    clouds.push_back(normalize_cloud(synth::random_cloud(points, derive_seed(seed, 9, uint64_t(i)))));
  return clouds;
}

}  // namespace

TEST_CASE("default config dimension chain") {
  const PointHopConfig cfg;
  cfg.validate();
  CHECK(descriptor_dims(cfg) == std::array<int, 4>{24, 128, 208, 328});
  CHECK(output_dims(cfg) == std::array<int, 4>{16, 26, 41, 81});
  CHECK(make_layout(cfg).total_dim == 656);

  PointHopConfig mean_only = cfg;
  mean_only.poolings = {Pooling::mean};
  CHECK(make_layout(mean_only).total_dim == 164);

  PointHopConfig last_only = cfg;
  last_only.last_stage_only = true;
  CHECK(make_layout(last_only).total_dim == 4 * 81);

  PointHopConfig rgb = cfg;
  rgb.color_attributes = true;
  CHECK(descriptor_dims(rgb)[0] == 48);
}

TEST_CASE("layout slices are disjoint and cover the feature vector") {
  const FeatureLayout layout = make_layout(PointHopConfig{});
  std::vector<bool> covered(static_cast<size_t>(layout.total_dim), false);
  for (const auto& slice : layout.slices)
    for (int i = slice.offset; i < slice.offset + slice.dim; ++i) {
      CHECK(!covered[size_t(i)]);
      covered[size_t(i)] = true;
    }
  CHECK(std::all_of(covered.begin(), covered.end(), [](bool b) { return b; }));
}

TEST_CASE("config validation catches contract violations") {
  PointHopConfig cfg = tiny_config();
  cfg.unit_points = {64, 96, 16, 8};  // increasing
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = tiny_config();
  cfg.k_values[0] = 65;  // above unit input size
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = tiny_config();
  cfg.n_ac[0] = 24;  // above descriptor dim - 1
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = tiny_config();
  cfg.poolings.clear();
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = tiny_config();
  cfg.unit_points[0] = 128;  // above input_points
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("pool: hand-computed matrix") {
  Eigen::MatrixXd m(2, 2);
  m << 1, -1, 3, 1;
  CHECK(pool(m, Pooling::max) == Eigen::Vector2d(3, 1));
  CHECK(pool(m, Pooling::mean) == Eigen::Vector2d(2, 0));
  CHECK(pool(m, Pooling::l1) == Eigen::Vector2d(2, 1));
  CHECK(pool(m, Pooling::l2).isApprox(Eigen::Vector2d(std::sqrt(5.0), 1), 1e-15));
}

TEST_CASE("pool: single-point and constant matrices") {
  Eigen::MatrixXd single(1, 3);
  single << 0.5, 2.0, 0.0;
  CHECK(pool(single, Pooling::max) == pool(single, Pooling::mean));
  CHECK(pool(single, Pooling::mean) == pool(single, Pooling::l1));
  CHECK(pool(single, Pooling::l2) == single.row(0).transpose());

  const Eigen::MatrixXd constant = Eigen::MatrixXd::Constant(5, 4, 1.25);
  for (const Pooling p : {Pooling::max, Pooling::mean, Pooling::l1, Pooling::l2})
    CHECK(pool(constant, p).isApprox(Eigen::VectorXd::Constant(4, 1.25), 1e-12));
}

TEST_CASE("pool rejects an empty matrix") {
  CHECK_THROWS_AS(pool(Eigen::MatrixXd(0, 3), Pooling::mean), Error);
}

TEST_CASE("pooling bounds hold on fitted attributes") {
  const auto clouds = tiny_clouds(12);
  const FitResult fit = fit_pointhop(clouds, tiny_config());
  const auto outputs = transform(fit.model, clouds[0]);
  for (const auto& attrs : outputs) {
    const Eigen::VectorXd mx = pool(attrs, Pooling::max);
    const Eigen::VectorXd mean = pool(attrs, Pooling::mean);
    const Eigen::VectorXd l1 = pool(attrs, Pooling::l1);
    const Eigen::VectorXd l2 = pool(attrs, Pooling::l2);
    for (int d = 0; d < attrs.cols(); ++d) {
      if (attrs.col(d).minCoeff() >= 0.0) CHECK(mean[d] <= mx[d] + 1e-12);
      CHECK(l1[d] >= std::abs(mean[d]) - 1e-12);
      CHECK(l2[d] * l2[d] >= mean[d] * mean[d] - 1e-12);
    }
  }
}

TEST_CASE("fit produces the forced dimension chain and valid banks") {
  const auto clouds = tiny_clouds(10);
  const PointHopConfig cfg = tiny_config();
  const FitResult fit = fit_pointhop(clouds, cfg);
  CHECK(fit.model.descriptor_dims == std::array<int, 4>{24, 40, 56, 72});
  CHECK(fit.model.output_dims == std::array<int, 4>{5, 7, 9, 11});
  for (int u = 0; u < 4; ++u) {
    CHECK(fit.model.banks[size_t(u)].input_dim == fit.model.descriptor_dims[size_t(u)]);
    CHECK(fit.model.banks[size_t(u)].output_dim() == fit.model.output_dims[size_t(u)]);
    CHECK(fit.model.banks[size_t(u)].bias > 0.0);
  }
  CHECK(fit.features.rows() == 10);
  CHECK(fit.features.cols() == fit.model.layout.total_dim);
}

TEST_CASE("fit is bit-deterministic and thread-count independent") {
  const auto clouds = tiny_clouds(9);
  const PointHopConfig cfg = tiny_config();
  const FitResult a = fit_pointhop(clouds, cfg, 1);
  const FitResult b = fit_pointhop(clouds, cfg, 1);
  const FitResult c = fit_pointhop(clouds, cfg, 4);
  CHECK(save_model(a.model) == save_model(b.model));
  CHECK(save_model(a.model) == save_model(c.model));
  CHECK(a.features == b.features);
  CHECK(a.features == c.features);
}

TEST_CASE("transform shapes follow the config and input override") {
  const auto clouds = tiny_clouds(8, 96);
  const PointHopConfig cfg = tiny_config();
  const FitResult fit = fit_pointhop(clouds, cfg);

  const auto outputs = transform(fit.model, clouds[0]);
  REQUIRE(outputs.size() == 4);
  CHECK(outputs[0].rows() == 64);
  CHECK(outputs[1].rows() == 32);
  CHECK(outputs[2].rows() == 16);
  CHECK(outputs[3].rows() == 8);
  for (int u = 0; u < 4; ++u) CHECK(outputs[size_t(u)].cols() == fit.model.output_dims[size_t(u)]);

  // density mismatch: fewer input points shrink the early units only
  const auto sparse = transform(fit.model, clouds[0], 24);
  CHECK(sparse[0].rows() == 24);
  CHECK(sparse[1].rows() == 24);
  CHECK(sparse[2].rows() == 16);
  CHECK(sparse[3].rows() == 8);
  CHECK(extract_features(fit.model, clouds[0], 24).size() == fit.model.layout.total_dim);
}

TEST_CASE("transform of a training cloud reproduces the fit-time features") {
  const auto clouds = tiny_clouds(7);
  const FitResult fit = fit_pointhop(clouds, tiny_config());
  for (size_t c = 0; c < clouds.size(); ++c) {
    const Eigen::VectorXd again = extract_features(fit.model, clouds[c]);
    CHECK(again == fit.features.row(Eigen::Index(c)).transpose());  // bitwise
  }
}

TEST_CASE("point-order invariance: shuffled cloud gives identical features") {
  const auto clouds = tiny_clouds(6);
  const FitResult fit = fit_pointhop(clouds, tiny_config());

  PointCloud shuffled = clouds[2];
  Philox rng(1717);
  for (int i = shuffled.size() - 1; i > 0; --i) {
    const int j = int(rng.next_below(uint64_t(i + 1)));
    shuffled.points.row(i).swap(shuffled.points.row(j));
  }
  CHECK(extract_features(fit.model, shuffled) == extract_features(fit.model, clouds[2]));
}

TEST_CASE("insufficient points raises") {
  const auto clouds = tiny_clouds(6);
  const FitResult fit = fit_pointhop(clouds, tiny_config());
  const PointCloud small = synth::random_cloud(32, 8);
  CHECK_THROWS_AS(transform(fit.model, small), Error);
  CHECK_THROWS_AS((void)fit_pointhop({small}, tiny_config()), Error);
}

TEST_CASE("receptive field grows monotonically through the cascade") {
  const auto clouds = tiny_clouds(6);
  const FitResult fit = fit_pointhop(clouds, tiny_config());
  TransformTrace trace;
  transform(fit.model, clouds[0], {}, &trace);

  // contributors[u][r] = original unit-1 input indices feeding retained
  // point r of unit u
  std::vector<std::vector<std::set<int>>> contributors(4);
  for (int u = 0; u < 4; ++u) {
    const auto& unit = trace.units[size_t(u)];
    contributors[size_t(u)].resize(unit.retained.size());
    for (size_t r = 0; r < unit.retained.size(); ++r) {
      for (int member : unit.regions[r]) {
        if (u == 0) {
          contributors[0][r].insert(member);
        } else {
          // `member` indexes unit u's input = unit u-1's retained points
          const auto& prev = contributors[size_t(u - 1)][size_t(member)];
          contributors[size_t(u)][r].insert(prev.begin(), prev.end());
        }
      }
    }
  }
  for (int u = 1; u < 4; ++u) {
    const auto& unit = trace.units[size_t(u)];
    for (size_t r = 0; r < unit.retained.size(); ++r) {
      // the same physical point at the previous unit
      const auto& before = contributors[size_t(u - 1)][size_t(unit.retained[r])];
      const auto& after = contributors[size_t(u)][r];
      CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
    }
  }
}

TEST_CASE("model save/load round trip") {
  const auto clouds = tiny_clouds(6);
  const FitResult fit = fit_pointhop(clouds, tiny_config());
  const std::string bytes = save_model(fit.model);
  const PointHopModel back = load_model(bytes);
  CHECK(save_model(back) == bytes);
  CHECK(extract_features(back, clouds[1]) == extract_features(fit.model, clouds[1]));
}

TEST_CASE("model load rejects corruption, bad magic and future versions") {
  const auto clouds = tiny_clouds(6);
  const FitResult fit = fit_pointhop(clouds, tiny_config());
  std::string bytes = save_model(fit.model);

  std::string corrupted = bytes;
  corrupted[corrupted.size() / 2] ^= 0x01;
  CHECK_THROWS_AS(load_model(corrupted), Error);
  try {
    load_model(corrupted);
  } catch (const Error& e) {
    CHECK(e.code() == errc::checksum_failure);
  }

  std::string wrong_magic = bytes;
  wrong_magic[0] = 'X';
  try {
    load_model(wrong_magic);
  } catch (const Error& e) {
    CHECK(e.code() == errc::unknown_magic);
  }

  // bump the version field (bytes 4..5) and refresh the CRC
  std::string future = bytes;
  future[4] = char(2);
  const uint32_t crc = crc32(future.data(), future.size() - 4);
  for (int i = 0; i < 4; ++i) future[future.size() - 4 + size_t(i)] = char(crc >> (8 * i));
  try {
    load_model(future);
    FAIL("expected VersionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == errc::version_mismatch);
  }
}

TEST_CASE("content_key ignores point order and reacts to content") {
  const PointCloud pc = synth::random_cloud(32, 61);
  PointCloud shuffled = pc;
  shuffled.points.row(0).swap(shuffled.points.row(17));
  CHECK(content_key(sort_canonical(pc)) == content_key(sort_canonical(shuffled)));
  PointCloud moved = pc;
  moved.points(0, 0) += 1e-9;
  CHECK(content_key(sort_canonical(pc)) != content_key(sort_canonical(moved)));
}
