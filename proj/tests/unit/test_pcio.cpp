#include <Eigen/Geometry>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "pointhop/dataset.hpp"
#include "pointhop/error.hpp"
#include "pointhop/mesh_sampling.hpp"
#include "pointhop/off.hpp"
#include "pointhop/point_cloud.hpp"
#include "pointhop/point_set_io.hpp"
#include "synth.hpp"
#include "temp_dir.hpp"

using namespace pointhop;

namespace {

errc code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a pointhop::Error");
  return errc::io_failure;
}

}  // namespace

TEST_CASE("parse_off minimal triangle") {
  const Mesh mesh = parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
  CHECK(mesh.vertices.size() == 3);
  CHECK(mesh.faces.size() == 1);
  CHECK(mesh.faces[0] == std::array<int, 3>{0, 1, 2});
}

TEST_CASE("parse_off rejects out-of-range face index") {
  CHECK(code_of([] { parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 5\n"); }) ==
        errc::index_out_of_range);
}

TEST_CASE("parse_off fan-triangulates a quad") {
  const Mesh mesh = parse_off("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
  REQUIRE(mesh.faces.size() == 2);
  CHECK(mesh.faces[0] == std::array<int, 3>{0, 1, 2});
  CHECK(mesh.faces[1] == std::array<int, 3>{0, 2, 3});
}

TEST_CASE("parse_off accepts the fused header quirk") {
  const Mesh mesh = parse_off("OFF3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
  CHECK(mesh.vertices.size() == 3);
  CHECK(mesh.faces.size() == 1);
}

TEST_CASE("parse_off tolerates comments, blank lines and a missing header") {
  const Mesh mesh = parse_off("# comment\n\n3 1 0\n0 0 0   # origin\n1 0 0\n0 1 0\n\n3 0 1 2\n");
  CHECK(mesh.vertices.size() == 3);
}

TEST_CASE("parse_off error taxonomy") {
  CHECK(code_of([] { parse_off(""); }) == errc::malformed_header);
  CHECK(code_of([] { parse_off("OFF\nnot numbers here\n"); }) == errc::malformed_header);
  CHECK(code_of([] { parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n"); }) == errc::truncated_file);
  CHECK(code_of([] { parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n"); }) == errc::truncated_file);
}

TEST_CASE("sample_mesh_surface: single triangle stays on its plane") {
  const Mesh mesh = parse_off("OFF\n3 1 0\n0 0 0\n2 0 0\n0 3 1\n3 0 1 2\n");
  const PointCloud pc = sample_mesh_surface(mesh, 100, 7);
  REQUIRE(pc.size() == 100);
  const Eigen::Vector3d v0 = mesh.vertices[0];
  const Eigen::Vector3d normal =
      (mesh.vertices[1] - v0).cross(mesh.vertices[2] - v0).normalized();
  for (int i = 0; i < pc.size(); ++i) {
    CHECK(std::abs(normal.dot(pc.points.row(i).transpose() - v0)) <= 1e-9);
  }
}

TEST_CASE("sample_mesh_surface: area weighting matches the binomial oracle") {
  // two coplanar triangles with areas 3 : 1
  const Mesh mesh = parse_off(
      "OFF\n5 2 0\n0 0 0\n3 0 0\n0 2 0\n-2 0 0\n0 -1 0\n3 0 1 2\n3 0 3 4\n");
  const int n = 40000;
  const PointCloud pc = sample_mesh_surface(mesh, n, 99);
  int in_large = 0;
  for (int i = 0; i < pc.size(); ++i)
    if (pc.points(i, 0) >= 0.0 && pc.points(i, 1) >= 0.0) ++in_large;
  const double p = 0.75;
  const double sigma = std::sqrt(n * p * (1.0 - p));
  CHECK(std::abs(in_large - n * p) <= 3.0 * sigma);
}

TEST_CASE("sample_mesh_surface is deterministic and seed-sensitive") {
  const Mesh mesh = parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
  const PointCloud a = sample_mesh_surface(mesh, 64, 5);
  const PointCloud b = sample_mesh_surface(mesh, 64, 5);
  const PointCloud c = sample_mesh_surface(mesh, 64, 6);
  CHECK(a.points == b.points);
  CHECK(a.points != c.points);
}

TEST_CASE("sample_mesh_surface rejects zero-area meshes") {
  const Mesh mesh = parse_off("OFF\n3 1 0\n0 0 0\n1 1 1\n2 2 2\n3 0 1 2\n");
  CHECK(code_of([&] { sample_mesh_surface(mesh, 10, 0); }) == errc::degenerate_mesh);
}

TEST_CASE("normalize_cloud two-point symmetry") {
  PointCloud pc;
  pc.points.resize(2, 3);
  pc.points << 1, 1, 1, 3, 1, 1;
  const PointCloud out = normalize_cloud(pc);
  CHECK(out.points(0, 0) == doctest::Approx(-1.0));
  CHECK(out.points(1, 0) == doctest::Approx(1.0));
  CHECK(out.points.col(1).cwiseAbs().maxCoeff() == 0.0);
  CHECK(out.points.col(2).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("normalize_cloud degenerate single point") {
  PointCloud pc;
  pc.points.resize(1, 3);
  pc.points << 5, 5, 5;
  const PointCloud out = normalize_cloud(pc);
  CHECK(out.points.row(0).norm() == 0.0);
}

TEST_CASE("normalize_cloud self-check and idempotence") {
  const PointCloud pc = synth::random_cloud(500, 42);
  const PointCloud out = normalize_cloud(pc);
  CHECK(out.points.colwise().mean().cwiseAbs().maxCoeff() <= 1e-9);
  CHECK(out.points.rowwise().norm().maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
  const PointCloud twice = normalize_cloud(out);
  CHECK((twice.points - out.points).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("packed binary round trip is byte-identical") {
  PointCloud pc = synth::random_cloud(1024, 3);
  const std::string bytes = write_point_set(pc, PointSetFormat::packed_binary);
  const PointCloud back = read_point_set(bytes, PointSetFormat::packed_binary);
  CHECK(back.size() == 1024);
  CHECK(write_point_set(back, PointSetFormat::packed_binary) == bytes);
}

TEST_CASE("packed binary with colors round trips") {
  PointCloud pc = synth::random_cloud(16, 4);
  pc.colors = (synth::random_cloud(16, 5).points.array() * 0.5 + 0.5).matrix();
  const std::string bytes = write_point_set(pc, PointSetFormat::packed_binary);
  const PointCloud back = read_point_set(bytes, PointSetFormat::packed_binary);
  CHECK(back.has_colors());
  CHECK(write_point_set(back, PointSetFormat::packed_binary) == bytes);
}

TEST_CASE("xyz text parses a plain line") {
  const PointCloud pc = read_point_set("1.0 2.0 3.0\n", PointSetFormat::xyz_text);
  REQUIRE(pc.size() == 1);
  CHECK(pc.points(0, 0) == 1.0);
  CHECK(pc.points(0, 1) == 2.0);
  CHECK(pc.points(0, 2) == 3.0);
}

TEST_CASE("xyz text round trips to 1e-6") {
  const PointCloud pc = normalize_cloud(synth::random_cloud(64, 11));
  const PointCloud back = read_point_set(write_point_set(pc, PointSetFormat::xyz_text),
                                         PointSetFormat::xyz_text);
  REQUIRE(back.size() == pc.size());
  CHECK((back.points - pc.points).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("point set error taxonomy") {
  PointCloud pc = synth::random_cloud(8, 1);
  std::string bytes = write_point_set(pc, PointSetFormat::packed_binary);
  CHECK(code_of([&] { read_point_set(bytes.substr(0, bytes.size() - 5), PointSetFormat::packed_binary); }) ==
        errc::length_mismatch);
  CHECK(code_of([&] { read_point_set("XXXX????", PointSetFormat::packed_binary); }) ==
        errc::unknown_magic);
  CHECK(code_of([&] { read_point_set("1 2\n", PointSetFormat::xyz_text); }) ==
        errc::length_mismatch);
}

TEST_CASE("load_manifest walks the class/split layout deterministically") {
  TempDir tmp("manifest");
  const auto root = tmp.path();
  for (const std::string cls : {"chair", "airplane"}) {
    std::filesystem::create_directories(root / cls / "train");
    std::filesystem::create_directories(root / cls / "test");
    for (int i = 0; i < 3; ++i) {
      std::ofstream(root / cls / "train" / (cls + std::to_string(i) + ".off")) << "OFF\n0 0 0\n";
    }
    std::ofstream(root / cls / "test" / (cls + "_t.off")) << "OFF\n0 0 0\n";
  }
  const DatasetManifest train = load_manifest(root, "train", ".off");
  CHECK(train.entries.size() == 6);
  CHECK(train.class_names == std::vector<std::string>{"airplane", "chair"});
  CHECK(train.entries.front().class_id == 0);  // airplane sorts first
  CHECK(std::is_sorted(train.entries.begin(), train.entries.end(),
                       [](const auto& a, const auto& b) { return a.path < b.path; }));
  const DatasetManifest test = load_manifest(root, "test", ".off");
  CHECK(test.entries.size() == 2);
}

TEST_CASE("load_manifest names the class that has no files") {
  TempDir tmp("manifest_empty");
  const auto root = tmp.path();
  std::filesystem::create_directories(root / "chair" / "train");
  std::filesystem::create_directories(root / "vase" / "train");
  std::ofstream(root / "chair" / "train" / "a.off") << "OFF\n0 0 0\n";
  try {
    load_manifest(root, "train", ".off");
    FAIL("expected EmptyDataset");
  } catch (const Error& e) {
    CHECK(e.code() == errc::empty_dataset);
    CHECK(std::string(e.what()).find("vase") != std::string::npos);
  }
}

TEST_CASE("load_manifest rejects an empty root") {
  TempDir tmp("manifest_none");
  CHECK(code_of([&] { load_manifest(tmp.path(), "train", ".off"); }) == errc::empty_dataset);
}

TEST_CASE("manifest file round trip and unknown class check") {
  TempDir tmp("manifest_file");
  const auto root = tmp.path();
  std::ofstream(root / "a.pbin") << "x";
  std::ofstream(root / "b.pbin") << "x";
  std::ofstream(root / "train.txt") << "a.pbin\tchair\nb.pbin\tairplane\n";

  const DatasetManifest m = load_manifest_file(root / "train.txt", "train");
  CHECK(m.class_names == std::vector<std::string>{"airplane", "chair"});
  CHECK(m.entries.size() == 2);

  const std::vector<std::string> expected{"airplane"};
  CHECK(code_of([&] { load_manifest_file(root / "train.txt", "train", expected); }) ==
        errc::unknown_class_name);

  write_manifest_file(root / "copy.txt", m);
  const DatasetManifest again = load_manifest_file(root / "copy.txt", "train");
  CHECK(again.class_names == m.class_names);
  CHECK(again.entries.size() == m.entries.size());
}
