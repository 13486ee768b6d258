#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "trihom/io.hpp"

using namespace trihom;

namespace {

RealGrid sample_grid() {
  GridSpec spec;
  spec.x_min = -1.5;
  spec.x_max = 2.5;
  spec.y_min = 0.25;
  spec.y_max = 1.75;
  spec.nx = 5;
  spec.ny = 4;
  RealGrid g = make_grid(spec, AxisLabel::y_plane);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 5; ++i) g.at(i, j) = 0.1 * i - 0.321 * j + 1.0 / 3.0;
  return g;
}

}  // namespace

TEST_CASE("fmt17 round-trips doubles") {
  for (double v : {1.0 / 3.0, 0.1, 1e-300, 3.141592653589793, -0.0, 12345.6789}) {
    CHECK(std::stod(fmt17(v)) == v);
  }
}

TEST_CASE("csv grid round trip is exact") {
  const RealGrid g = sample_grid();
  const std::string csv = grid_to_csv(g);
  CHECK(csv.rfind("# ", 0) == 0);
  const RealGrid back = grid_from_csv(csv);
  CHECK(back.spec == g.spec);
  CHECK(back.label == g.label);
  CHECK(back.values == g.values);
}

TEST_CASE("json grid round trip is exact") {
  const RealGrid g = sample_grid();
  const RealGrid back = grid_from_json(grid_to_json(g));
  CHECK(back.spec == g.spec);
  CHECK(back.values == g.values);
}

TEST_CASE("ppm output shape and scaling") {
  const RealGrid g = sample_grid();
  const std::string ppm = grid_to_ppm(g);
  CHECK(ppm.rfind("P6\n5 4\n255\n", 0) == 0);
  CHECK(ppm.size() == std::string("P6\n5 4\n255\n").size() + 5 * 4 * 3);
  // top image row is the y_max grid row; its brightest pixel maps to 255
  const size_t base = std::string("P6\n5 4\n255\n").size();
  int top_max = 0;
  for (int i = 0; i < 5; ++i)
    top_max = std::max(top_max, int(static_cast<unsigned char>(ppm[base + 3 * i])));
  int global_max = 0;
  for (size_t k = base; k < ppm.size(); ++k)
    global_max = std::max(global_max, int(static_cast<unsigned char>(ppm[k])));
  CHECK(global_max == 255);
  const double vmax = g.max_value();
  CHECK(top_max == int(std::max(0.0, g.at(4, 3)) / vmax * 255.0 + 0.5));
}

TEST_CASE("atomic write leaves no temp file") {
  const std::string path = std::filesystem::temp_directory_path() / "trihom_io_test.txt";
  atomic_write_text(path, "hello\n");
  std::ifstream f(path);
  std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  CHECK(s == "hello\n");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove(path);
}

TEST_CASE("state spec parsing") {
  CHECK(parse_state_spec("vacuum").kind == StateSpec::Kind::coherent);
  CHECK(parse_state_spec("vacuum").alpha == Complex(0.0, 0.0));
  const StateSpec c = parse_state_spec("coherent:1.5,-0.25");
  CHECK(c.alpha == Complex(1.5, -0.25));
  CHECK(parse_state_spec("coherent:2").alpha == Complex(2.0, 0.0));
  CHECK(parse_state_spec("number:3").n == 3);
  CHECK(parse_state_spec("squeezed:0.75").r == 0.75);
  CHECK_THROWS_AS(parse_state_spec("thermal:1"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state_spec("vacuum:1"), std::invalid_argument);

  for (const char* s : {"vacuum", "coherent:1.5,-0.25", "number:3", "squeezed:0.75"}) {
    const StateSpec spec = parse_state_spec(s);
    const StateSpec again = parse_state_spec(format_state_spec(spec));
    CHECK(again.kind == spec.kind);
    CHECK(again.alpha == spec.alpha);
    CHECK(again.n == spec.n);
    CHECK(again.r == spec.r);
  }
}

TEST_CASE("grid csv parser rejects malformed input") {
  CHECK_THROWS_AS(grid_from_csv("no header\n1,2\n"), std::invalid_argument);
  CHECK_THROWS_AS(grid_from_csv("# 0,1,0,1,2,2,alpha_plane\n0.5\n"), std::invalid_argument);
}
