#include <string>

#include "pointhop/error.hpp"
#include "pointhop/pipeline.hpp"
#include "pointhop/serialize.hpp"

namespace pointhop {
namespace {

constexpr std::string_view kMagic = "PHM1";

void write_config(BinaryWriter& w, const PointHopConfig& c) {
  w.u32(uint32_t(c.input_points));
  for (int v : c.unit_points) w.u32(uint32_t(v));
  for (int v : c.k_values) w.u32(uint32_t(v));
  for (int v : c.n_ac) w.u32(uint32_t(v));
  w.u8(uint8_t(c.poolings.size()));
  for (Pooling p : c.poolings) w.u8(uint8_t(p));
  w.u8(c.color_attributes ? 1 : 0);
  w.u64(c.seed);
  w.u8(c.use_fps ? 1 : 0);
  w.u8(c.last_stage_only ? 1 : 0);
  w.u8(c.pca_reduction ? 1 : 0);
  w.u8(c.center_ac ? 1 : 0);
}

PointHopConfig read_config(BinaryReader& r) {
  PointHopConfig c;
  c.input_points = int(r.u32());
  for (int& v : c.unit_points) v = int(r.u32());
  for (int& v : c.k_values) v = int(r.u32());
  for (int& v : c.n_ac) v = int(r.u32());
  const int n_poolings = r.u8();
  c.poolings.clear();
  for (int i = 0; i < n_poolings; ++i) c.poolings.push_back(Pooling(r.u8()));
  c.color_attributes = r.u8() != 0;
  c.seed = r.u64();
  c.use_fps = r.u8() != 0;
  c.last_stage_only = r.u8() != 0;
  c.pca_reduction = r.u8() != 0;
  c.center_ac = r.u8() != 0;
  return c;
}

void write_bank(BinaryWriter& w, const SaabFilterBank& bank) {
  w.u32(uint32_t(bank.input_dim));
  w.u32(uint32_t(bank.n_ac));
  w.u8(bank.pca_mode ? 1 : 0);
  w.f64(bank.bias);
  w.vector(bank.dc_filter);
  w.matrix(bank.ac_filters);
  w.vector(bank.mean);
  w.vector(bank.energy.eigenvalues);
  w.vector(bank.energy.cumulative);
}

SaabFilterBank read_bank(BinaryReader& r) {
  SaabFilterBank bank;
  bank.input_dim = int(r.u32());
  bank.n_ac = int(r.u32());
  bank.pca_mode = r.u8() != 0;
  bank.bias = r.f64();
  bank.dc_filter = r.vector();
  bank.ac_filters = r.matrix();
  bank.mean = r.vector();
  bank.energy.eigenvalues = r.vector();
  bank.energy.cumulative = r.vector();
  return bank;
}

}  // namespace

std::string save_model(const PointHopModel& model) {
  BinaryWriter w;
  w.bytes(kMagic.data(), kMagic.size());
  w.u16(PointHopModel::format_version);
  write_config(w, model.config);
  for (const SaabFilterBank& bank : model.banks) write_bank(w, bank);
  for (int v : model.descriptor_dims) w.u32(uint32_t(v));
  for (int v : model.output_dims) w.u32(uint32_t(v));
  w.u32(uint32_t(model.layout.slices.size()));
  for (const FeatureSlice& s : model.layout.slices) {
    w.u8(uint8_t(s.unit));
    w.u8(uint8_t(s.pooling));
    w.u32(uint32_t(s.offset));
    w.u32(uint32_t(s.dim));
  }
  w.u32(uint32_t(model.layout.total_dim));

  std::string bytes = w.take();
  BinaryWriter trailer;
  trailer.u32(crc32(bytes.data(), bytes.size()));
  return bytes + trailer.take();
}

PointHopModel load_model(std::string_view bytes) {
  if (bytes.size() < 8 || bytes.substr(0, 4) != kMagic)
    raise(errc::unknown_magic, "not a model file");
  const std::string_view payload = bytes.substr(0, bytes.size() - 4);
  BinaryReader crc_reader(bytes.substr(bytes.size() - 4));
  if (crc32(payload.data(), payload.size()) != crc_reader.u32())
    raise(errc::checksum_failure, "model file CRC mismatch");

  BinaryReader r(payload.substr(4));
  const uint16_t version = r.u16();
  if (version != PointHopModel::format_version)
    raise(errc::version_mismatch, "model format version " + std::to_string(version) +
                                      ", reader supports " +
                                      std::to_string(PointHopModel::format_version));

  PointHopModel model;
  model.config = read_config(r);
  for (SaabFilterBank& bank : model.banks) bank = read_bank(r);
  for (int& v : model.descriptor_dims) v = int(r.u32());
  for (int& v : model.output_dims) v = int(r.u32());
  const uint32_t n_slices = r.u32();
  for (uint32_t i = 0; i < n_slices; ++i) {
    FeatureSlice s;
    s.unit = r.u8();
    s.pooling = Pooling(r.u8());
    s.offset = int(r.u32());
    s.dim = int(r.u32());
    model.layout.slices.push_back(s);
  }
  model.layout.total_dim = int(r.u32());
  return model;
}

}  // namespace pointhop
