#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rigidmatch/geometry.hpp"

namespace rigidmatch {

/// CSV point list: one `x,y` pair per line; blank lines and lines starting
/// with `#` are skipped. Errors carry the 1-based line number.
PointPattern parse_points_csv(std::string_view text, std::string label = {});

/// JSON point list: `{"points": [[x, y], ...]}`.
PointPattern parse_points_json(std::string_view text, std::string label = {});

/// Reads a point file, picking the JSON parser for `.json` files or content
/// that starts with `{`.
PointPattern read_points(const std::filesystem::path& path);

std::string format_points_csv(const PointPattern& p);
void write_points_csv(const std::filesystem::path& path, const PointPattern& p);

}  // namespace rigidmatch
