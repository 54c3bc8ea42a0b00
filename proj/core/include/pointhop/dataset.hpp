#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pointhop {

/// One split of a labelled dataset. Entries are sorted lexicographically by
/// path and class ids follow sorted class-name order, so the manifest is a
/// pure function of the directory contents.
struct DatasetManifest {
  struct Entry {
    std::filesystem::path path;  // absolute or root-relative
    int class_id;
  };
  std::vector<Entry> entries;
  std::vector<std::string> class_names;
  std::string split;
};

/// Scans the `<root>/<class_name>/<split>/<file>` layout. `extension`
/// filters files (e.g. ".off", ".pbin"). Every class directory must
/// contribute at least one file to the split.
///
/// Throws EmptyDataset (naming the offending class when one is empty).
DatasetManifest load_manifest(const std::filesystem::path& root, const std::string& split,
                              const std::string& extension);

/// Reads an explicit manifest file: one `path<TAB>class_name` per line,
/// paths relative to the manifest's directory. When `expected_classes` is
/// given, class ids map into it and unseen names raise UnknownClassName;
/// otherwise names are collected and sorted.
DatasetManifest load_manifest_file(const std::filesystem::path& file, const std::string& split,
                                   const std::optional<std::vector<std::string>>& expected_classes = {});

void write_manifest_file(const std::filesystem::path& file, const DatasetManifest& manifest);

}  // namespace pointhop
