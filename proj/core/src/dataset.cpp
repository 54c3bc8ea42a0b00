#include "pointhop/dataset.hpp"

#include <algorithm>
#include <map>

#include "pointhop/error.hpp"
#include "pointhop/serialize.hpp"

namespace pointhop {

namespace fs = std::filesystem;

DatasetManifest load_manifest(const fs::path& root, const std::string& split,
                              const std::string& extension) {
  if (!fs::is_directory(root)) raise(errc::empty_dataset, "no such directory: " + root.string());

  std::vector<std::string> classes;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) classes.push_back(entry.path().filename().string());
  }
  std::sort(classes.begin(), classes.end());
  if (classes.empty()) raise(errc::empty_dataset, "no class directories under " + root.string());

  DatasetManifest manifest;
  manifest.class_names = classes;
  manifest.split = split;
  for (size_t c = 0; c < classes.size(); ++c) {
    const fs::path dir = root / classes[c] / split;
    std::vector<fs::path> files;
    if (fs::is_directory(dir)) {
      for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == extension)
          files.push_back(entry.path());
      }
    }
    if (files.empty())
      raise(errc::empty_dataset,
            "class '" + classes[c] + "' has no " + extension + " files for split '" + split + "'");
    std::sort(files.begin(), files.end());
    for (auto& f : files) manifest.entries.push_back({std::move(f), int(c)});
  }
  std::sort(manifest.entries.begin(), manifest.entries.end(),
            [](const auto& a, const auto& b) { return a.path < b.path; });
  return manifest;
}

DatasetManifest load_manifest_file(const fs::path& file, const std::string& split,
                                   const std::optional<std::vector<std::string>>& expected_classes) {
  const std::string text = read_file(file.string());
  const fs::path base = file.parent_path();

  std::vector<std::pair<fs::path, std::string>> rows;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos)
      raise(errc::malformed_header, "manifest line missing tab separator: " + line);
    rows.emplace_back(base / line.substr(0, tab), line.substr(tab + 1));
  }
  if (rows.empty()) raise(errc::empty_dataset, "manifest file " + file.string() + " is empty");

  DatasetManifest manifest;
  manifest.split = split;
  std::map<std::string, int> ids;
  if (expected_classes) {
    manifest.class_names = *expected_classes;
  } else {
    for (const auto& [path, name] : rows) ids.emplace(name, 0);
    for (const auto& [name, _] : ids) manifest.class_names.push_back(name);
  }
  ids.clear();
  for (size_t c = 0; c < manifest.class_names.size(); ++c)
    ids[manifest.class_names[c]] = int(c);

  for (const auto& [path, name] : rows) {
    const auto it = ids.find(name);
    if (it == ids.end()) raise(errc::unknown_class_name, "class '" + name + "' not in class list");
    manifest.entries.push_back({path, it->second});
  }
  std::sort(manifest.entries.begin(), manifest.entries.end(),
            [](const auto& a, const auto& b) { return a.path < b.path; });
  return manifest;
}

void write_manifest_file(const fs::path& file, const DatasetManifest& manifest) {
  const fs::path base = file.parent_path();
  std::string out;
  for (const auto& entry : manifest.entries) {
    out += fs::relative(entry.path, base).generic_string();
    out += '\t';
    out += manifest.class_names[size_t(entry.class_id)];
    out += '\n';
  }
  write_file(file.string(), out);
}

}  // namespace pointhop
