#include "clustsum/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

namespace clustsum {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

bool is_skippable_line(std::string_view line) {
  const auto t = trim(line);
  return t.empty() || t.front() == '#';
}

std::vector<Label> parse_label_line(std::string_view line) {
  std::vector<Label> labels;
  if (trim(line).empty()) throw Error("empty label line");
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto field = trim(line.substr(start, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - start));
    Label value = 0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc() || ptr != end) {
      throw Error("non-integer label '" + field + "'");
    }
    labels.push_back(value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return labels;
}

Partition parse_partition(std::string_view text) {
  return canonicalize(parse_label_line(text));
}

std::string format_partition(const Partition& p) {
  std::string out;
  out.reserve(p.size() * 3);
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(p[i]);
  }
  return out;
}

Partition read_partition_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open partition file " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (!is_skippable_line(line)) return parse_partition(line);
  }
  throw Error("empty partition file " + path.string());
}

void write_partition_file(const std::filesystem::path& path, const Partition& p) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write partition file " + path.string());
  out << format_partition(p) << '\n';
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

}  // namespace clustsum
