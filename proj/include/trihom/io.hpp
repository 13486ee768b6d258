#pragma once

#include <string>

#include "trihom/fock.hpp"
#include "trihom/grid.hpp"

#include "json.hpp"

namespace trihom {

// 17 significant digits; round-trips doubles exactly and keeps text output
// byte-deterministic.
std::string fmt17(double v);

// Writes to <path>.tmp then renames, so partial files are never left behind.
void atomic_write_text(const std::string& path, const std::string& content);

// CSV: header "# x_min,x_max,y_min,y_max,nx,ny,label", then ny rows of nx
// values, y ascending.
std::string grid_to_csv(const RealGrid& g);
RealGrid grid_from_csv(const std::string& text);

nlohmann::json grid_to_json(const RealGrid& g);
RealGrid grid_from_json(const nlohmann::json& j);

// P6 8-bit grayscale, values mapped linearly from [0, max]; top image row is
// the y_max grid row.
std::string grid_to_ppm(const RealGrid& g);

void write_grid(const RealGrid& g, const std::string& path, const std::string& format);

// "vacuum" | "coherent:re[,im]" | "number:n" | "squeezed:r"
StateSpec parse_state_spec(const std::string& text);
std::string format_state_spec(const StateSpec& spec);

nlohmann::json grid_spec_to_json(const GridSpec& g);
GridSpec grid_spec_from_json(const nlohmann::json& j);

}  // namespace trihom
