#include "rigidmatch/point_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rigidmatch/errors.hpp"

namespace rigidmatch {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_real(std::string_view field, std::size_t line_no) {
  field = trim(field);
  double value = 0.0;
  const char* begin = field.data();
  const char* end = field.data() + field.size();
  if (!field.empty() && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::invalid_input,
                "line " + std::to_string(line_no) + ": cannot parse '" + std::string(field) +
                    "' as a number");
  }
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::invalid_input,
                "line " + std::to_string(line_no) + ": non-finite coordinate");
  }
  return value;
}

}  // namespace

PointPattern parse_points_csv(std::string_view text, std::string label) {
  std::vector<Point> points;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw Error(ErrorCode::invalid_input,
                  "line " + std::to_string(line_no) + ": expected exactly two fields 'x,y'");
    }
    points.push_back({parse_real(line.substr(0, comma), line_no),
                      parse_real(line.substr(comma + 1), line_no)});
  }
  if (points.empty()) throw Error(ErrorCode::invalid_input, "no points found");
  return PointPattern(std::move(points), std::move(label));
}

PointPattern parse_points_json(std::string_view text, std::string label) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::invalid_input, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array()) {
    throw Error(ErrorCode::invalid_input, "JSON point file needs a \"points\" array");
  }
  std::vector<Point> points;
  std::size_t index = 0;
  for (const auto& item : doc["points"]) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
      throw Error(ErrorCode::invalid_input,
                  "points[" + std::to_string(index) + "] is not a pair of numbers");
    }
    points.push_back({item[0].get<double>(), item[1].get<double>()});
    ++index;
  }
  return PointPattern(std::move(points), std::move(label));
}

PointPattern read_points(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::invalid_input, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  const std::string_view body = trim(text);
  const bool json = path.extension() == ".json" || (!body.empty() && body.front() == '{');
  try {
    return json ? parse_points_json(text, path.stem().string())
                : parse_points_csv(text, path.stem().string());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string format_points_csv(const PointPattern& p) {
  std::ostringstream out;
  out.precision(17);
  for (const Point& q : p.points()) out << q.x << ',' << q.y << '\n';
  return out.str();
}

void write_points_csv(const std::filesystem::path& path, const PointPattern& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::invalid_input, "cannot write " + path.string());
  out << format_points_csv(p);
}

}  // namespace rigidmatch
