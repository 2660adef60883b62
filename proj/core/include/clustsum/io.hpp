#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "clustsum/partition.hpp"

namespace clustsum {

// Parses "0,0,1,1" (whitespace around fields is ignored). Throws Error on a
// field that is not an integer or on an empty line.
std::vector<Label> parse_label_line(std::string_view line);

// Parses the one-line partition text form and canonicalizes it.
Partition parse_partition(std::string_view text);

// Canonical text form, e.g. "0,0,1,1".
std::string format_partition(const Partition& p);

// Reads the first non-comment, non-blank line of a partition file.
Partition read_partition_file(const std::filesystem::path& path);
void write_partition_file(const std::filesystem::path& path, const Partition& p);

// True for blank lines and '#' comment lines.
bool is_skippable_line(std::string_view line);

std::string trim(std::string_view s);

// Formats a double with 17 significant digits.
std::string format_double(double value);

}  // namespace clustsum
