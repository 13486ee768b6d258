#include "trihom/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace trihom {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void atomic_write_text(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + tmp);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

namespace {

const char* label_name(AxisLabel l) {
  return l == AxisLabel::alpha_plane ? "alpha_plane" : "y_plane";
}

AxisLabel label_from_name(const std::string& s) {
  if (s == "alpha_plane") return AxisLabel::alpha_plane;
  if (s == "y_plane") return AxisLabel::y_plane;
  throw std::invalid_argument("unknown axis label: " + s);
}

}  // namespace

std::string grid_to_csv(const RealGrid& g) {
  std::ostringstream os;
  os << "# " << fmt17(g.spec.x_min) << ',' << fmt17(g.spec.x_max) << ',' << fmt17(g.spec.y_min)
     << ',' << fmt17(g.spec.y_max) << ',' << g.spec.nx << ',' << g.spec.ny << ','
     << label_name(g.label) << '\n';
  for (int j = 0; j < g.spec.ny; ++j) {
    for (int i = 0; i < g.spec.nx; ++i) {
      if (i) os << ',';
      os << fmt17(g.at(i, j));
    }
    os << '\n';
  }
  return os.str();
}

RealGrid grid_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.size() < 2 || line[0] != '#')
    throw std::invalid_argument("csv grid: missing header");
  std::istringstream hs(line.substr(1));
  GridSpec spec;
  std::string tok;
  auto next = [&]() {
    if (!std::getline(hs, tok, ',')) throw std::invalid_argument("csv grid: short header");
    return tok;
  };
  spec.x_min = std::stod(next());
  spec.x_max = std::stod(next());
  spec.y_min = std::stod(next());
  spec.y_max = std::stod(next());
  spec.nx = std::stoi(next());
  spec.ny = std::stoi(next());
  std::string label = next();
  while (!label.empty() && label.front() == ' ') label.erase(label.begin());
  RealGrid g = make_grid(spec, label_from_name(label));
  for (int j = 0; j < spec.ny; ++j) {
    if (!std::getline(is, line)) throw std::invalid_argument("csv grid: missing row");
    std::istringstream rs(line);
    for (int i = 0; i < spec.nx; ++i) {
      if (!std::getline(rs, tok, ',')) throw std::invalid_argument("csv grid: short row");
      g.at(i, j) = std::stod(tok);
    }
  }
  return g;
}

nlohmann::json grid_spec_to_json(const GridSpec& g) {
  return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min},
          {"y_max", g.y_max}, {"nx", g.nx},       {"ny", g.ny}};
}

GridSpec grid_spec_from_json(const nlohmann::json& j) {
  GridSpec g;
  g.x_min = j.at("x_min").get<double>();
  g.x_max = j.at("x_max").get<double>();
  g.y_min = j.at("y_min").get<double>();
  g.y_max = j.at("y_max").get<double>();
  g.nx = j.at("nx").get<int>();
  g.ny = j.at("ny").get<int>();
  return g;
}

nlohmann::json grid_to_json(const RealGrid& g) {
  nlohmann::json j = grid_spec_to_json(g.spec);
  j["label"] = label_name(g.label);
  j["values"] = g.values;
  return j;
}

RealGrid grid_from_json(const nlohmann::json& j) {
  RealGrid g = make_grid(grid_spec_from_json(j), label_from_name(j.at("label")));
  const auto& v = j.at("values");
  if (v.size() != g.values.size()) throw std::invalid_argument("json grid: value count mismatch");
  g.values = v.get<std::vector<double>>();
  return g;
}

std::string grid_to_ppm(const RealGrid& g) {
  const double vmax = g.max_value();
  std::ostringstream os;
  os << "P6\n" << g.spec.nx << ' ' << g.spec.ny << "\n255\n";
  for (int j = g.spec.ny - 1; j >= 0; --j)
    for (int i = 0; i < g.spec.nx; ++i) {
      const double v = vmax > 0.0 ? std::max(0.0, g.at(i, j)) / vmax : 0.0;
      const char byte = static_cast<char>(static_cast<int>(v * 255.0 + 0.5));
      os << byte << byte << byte;
    }
  return os.str();
}

void write_grid(const RealGrid& g, const std::string& path, const std::string& format) {
  if (format == "csv")
    atomic_write_text(path, grid_to_csv(g));
  else if (format == "json")
    atomic_write_text(path, grid_to_json(g).dump(2) + "\n");
  else if (format == "ppm")
    atomic_write_text(path, grid_to_ppm(g));
  else
    throw std::invalid_argument("unknown format: " + format);
}

StateSpec parse_state_spec(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "vacuum") {
    if (!args.empty()) throw std::invalid_argument("vacuum takes no arguments");
    return StateSpec::vacuum();
  }
  if (kind == "coherent") {
    const auto comma = args.find(',');
    const double re = std::stod(args.substr(0, comma));
    const double im = comma == std::string::npos ? 0.0 : std::stod(args.substr(comma + 1));
    return StateSpec::coherent_state({re, im});
  }
  if (kind == "number") return StateSpec::number_state(std::stoi(args));
  if (kind == "squeezed") return StateSpec::squeezed_vacuum_state(std::stod(args));
  throw std::invalid_argument("unknown state spec: " + text +
                              " (want vacuum|coherent:re[,im]|number:n|squeezed:r)");
}

std::string format_state_spec(const StateSpec& spec) {
  switch (spec.kind) {
    case StateSpec::Kind::coherent:
      if (spec.alpha == Complex(0.0, 0.0)) return "vacuum";
      if (spec.alpha.imag() == 0.0) return "coherent:" + fmt17(spec.alpha.real());
      return "coherent:" + fmt17(spec.alpha.real()) + "," + fmt17(spec.alpha.imag());
    case StateSpec::Kind::number:
      return "number:" + std::to_string(spec.n);
    case StateSpec::Kind::squeezed_vacuum:
      return "squeezed:" + fmt17(spec.r);
  }
  throw std::logic_error("unreachable");
}

}  // namespace trihom
