#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "rigidmatch/errors.hpp"
#include "rigidmatch/point_io.hpp"

using namespace rigidmatch;

TEST_CASE("csv parsing") {
  const auto p = parse_points_csv("# header comment\n0,0\n\n 1.5 , -2\n3e-1,4\n");
  REQUIRE(p.size() == 3);
  CHECK(p[1] == Point{1.5, -2});
  CHECK(p[2] == Point{0.3, 4});
}

TEST_CASE("csv errors carry the line number") {
  try {
    parse_points_csv("0,0\n1,1\n1,abc\n");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_input);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_points_csv("1,2,3\n"), Error);
  CHECK_THROWS_AS(parse_points_csv("1\n"), Error);
  CHECK_THROWS_AS(parse_points_csv("# only a comment\n"), Error);
  CHECK_THROWS_AS(parse_points_csv("nan,1\n"), Error);
}

TEST_CASE("json parsing") {
  const auto p = parse_points_json(R"({"points": [[0, 1], [2.5, 3]]})");
  REQUIRE(p.size() == 2);
  CHECK(p[1] == Point{2.5, 3});
  CHECK_THROWS_AS(parse_points_json("{"), Error);
  CHECK_THROWS_AS(parse_points_json(R"({"pts": []})"), Error);
  CHECK_THROWS_AS(parse_points_json(R"({"points": [[1]]})"), Error);
}

TEST_CASE("csv round trip is exact") {
  const PointPattern p({{0.1, 1.0 / 3.0}, {-2e-17, 12345.678901234567}});
  CHECK(parse_points_csv(format_points_csv(p)) == p);

  const auto dir = std::filesystem::temp_directory_path() / "rigidmatch_io_test";
  std::filesystem::create_directories(dir);
  write_points_csv(dir / "a.csv", p);
  CHECK(read_points(dir / "a.csv") == p);
  {
    std::ofstream out(dir / "b.json");
    out << R"({"points": [[1, 2]]})";
  }
  CHECK(read_points(dir / "b.json")[0] == Point{1, 2});
  CHECK_THROWS_AS(read_points(dir / "missing.csv"), Error);
  std::filesystem::remove_all(dir);
}
