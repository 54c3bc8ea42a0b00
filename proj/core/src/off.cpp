#include "pointhop/off.hpp"

#include <charconv>
#include <string>

#include "pointhop/error.hpp"

namespace pointhop {
namespace {

// Yields lines with '#' comments stripped; skips blank lines.
class LineScanner {
 public:
  explicit LineScanner(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    while (pos_ < text_.size()) {
      size_t end = text_.find('\n', pos_);
      if (end == std::string_view::npos) end = text_.size();
      std::string_view raw = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      if (const size_t hash = raw.find('#'); hash != std::string_view::npos)
        raw = raw.substr(0, hash);
      const size_t first = raw.find_first_not_of(" \t\r");
      if (first == std::string_view::npos) continue;
      const size_t last = raw.find_last_not_of(" \t\r");
      line = raw.substr(first, last - first + 1);
      return true;
    }
    return false;
  }

 private:
  std::string_view text_;
  size_t pos_ = 0;
};

class TokenScanner {
 public:
  explicit TokenScanner(std::string_view line) : line_(line) {}

  bool next(std::string_view& tok) {
    while (pos_ < line_.size() && (line_[pos_] == ' ' || line_[pos_] == '\t')) ++pos_;
    if (pos_ >= line_.size()) return false;
    const size_t start = pos_;
    while (pos_ < line_.size() && line_[pos_] != ' ' && line_[pos_] != '\t') ++pos_;
    tok = line_.substr(start, pos_ - start);
    return true;
  }

 private:
  std::string_view line_;
  size_t pos_ = 0;
};

bool parse_long(std::string_view tok, long& out) {
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

bool parse_double(std::string_view tok, double& out) {
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

Mesh parse_off(std::string_view text) {
  LineScanner lines(text);
  std::string_view line;
  if (!lines.next(line)) raise(errc::malformed_header, "empty OFF input");

  // Header handling: "OFF" alone, absent, or fused with the counts.
  if (line.starts_with("OFF")) {
    line = line.substr(3);
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      if (!lines.next(line)) raise(errc::malformed_header, "missing counts line");
    }
  }

  long nv = 0, nf = 0, ne = 0;
  {
    TokenScanner toks(line);
    std::string_view a, b, c;
    if (!toks.next(a) || !toks.next(b) || !toks.next(c) ||
        !parse_long(a, nv) || !parse_long(b, nf) || !parse_long(c, ne))
      raise(errc::malformed_header, "counts line must hold three integers");
    if (nv < 0 || nf < 0)
      raise(errc::malformed_header, "negative counts");
  }

  Mesh mesh;
  mesh.vertices.reserve(size_t(nv));
  for (long i = 0; i < nv; ++i) {
    if (!lines.next(line))
      raise(errc::truncated_file, "expected " + std::to_string(nv) + " vertices, got " + std::to_string(i));
    TokenScanner toks(line);
    Eigen::Vector3d v;
    for (int d = 0; d < 3; ++d) {
      std::string_view tok;
      if (!toks.next(tok) || !parse_double(tok, v[d]))
        raise(errc::malformed_header, "bad vertex line " + std::string(line));
    }
    mesh.vertices.push_back(v);
  }

  mesh.faces.reserve(size_t(nf));
  for (long i = 0; i < nf; ++i) {
    if (!lines.next(line))
      raise(errc::truncated_file, "expected " + std::to_string(nf) + " faces, got " + std::to_string(i));
    TokenScanner toks(line);
    std::string_view tok;
    long count = 0;
    if (!toks.next(tok) || !parse_long(tok, count) || count < 3)
      raise(errc::malformed_header, "bad face line " + std::string(line));
    std::vector<int> poly(static_cast<size_t>(count));
    for (long j = 0; j < count; ++j) {
      long idx = 0;
      if (!toks.next(tok) || !parse_long(tok, idx))
        raise(errc::malformed_header, "bad face line " + std::string(line));
      if (idx < 0 || idx >= nv)
        raise(errc::index_out_of_range,
              "face references vertex " + std::to_string(idx) + " of " + std::to_string(nv));
      poly[size_t(j)] = int(idx);
    }
    for (long j = 1; j + 1 < count; ++j)
      mesh.faces.push_back({poly[0], poly[size_t(j)], poly[size_t(j + 1)]});
  }
  return mesh;
}

}  // namespace pointhop
