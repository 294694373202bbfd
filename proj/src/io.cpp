#include "rootbeyond/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "rootbeyond/common.hpp"

namespace rootbeyond {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream f(path, mode);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}

}  // namespace

void write_sweep_csv(const std::string& path, const std::string& value_name,
                     const std::vector<SweepRow>& rows) {
  std::ofstream f = open_out(path);
  f << value_name << ",iterations,status\n";
  for (const SweepRow& r : rows)
    f << format_g17(r.value) << ',' << r.iterations << ',' << status_name(r.status) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_grid_csv(const std::string& path, const BasinGrid& grid) {
  std::ofstream f = open_out(path);
  f << "x,y,iterations,root_id\n";
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) {
      const BasinCell& c = grid.at(i, j);
      f << format_g17(grid.cell_x(i)) << ',' << format_g17(grid.cell_y(j)) << ','
        << c.iterations << ',' << c.root_id << '\n';
    }
  if (!f) throw std::runtime_error("write failed: " + path);
}

BasinGrid read_grid_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("empty grid csv: " + path);

  struct Row {
    double x, y;
    BasinCell cell;
  };
  std::vector<Row> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    Row r{};
    if (!std::getline(ss, tok, ',')) throw std::runtime_error("bad grid row: " + line);
    r.x = std::stod(tok);
    if (!std::getline(ss, tok, ',')) throw std::runtime_error("bad grid row: " + line);
    r.y = std::stod(tok);
    if (!std::getline(ss, tok, ',')) throw std::runtime_error("bad grid row: " + line);
    r.cell.iterations = std::stoi(tok);
    if (!std::getline(ss, tok, ',')) throw std::runtime_error("bad grid row: " + line);
    r.cell.root_id = std::stoi(tok);
    rows.push_back(r);
  }
  if (rows.empty()) throw std::runtime_error("grid csv has no cells: " + path);

  // Infer the resolution: x repeats with period nx, y is constant per row block.
  size_t nx = 1;
  while (nx < rows.size() && rows[nx].x != rows[0].x) ++nx;
  if (rows.size() % nx != 0) throw std::runtime_error("grid csv is not rectangular: " + path);
  const size_t ny = rows.size() / nx;

  BasinGrid grid;
  grid.nx = static_cast<int>(nx);
  grid.ny = static_cast<int>(ny);
  grid.spacing_x = nx > 1 ? rows[1].x - rows[0].x : 1.0;
  grid.spacing_y = ny > 1 ? rows[nx].y - rows[0].y : 1.0;
  grid.origin_x = rows[0].x - 0.5 * grid.spacing_x;
  grid.origin_y = rows[0].y - 0.5 * grid.spacing_y;
  grid.cells.reserve(rows.size());
  int max_seen = 0;
  for (const Row& r : rows) {
    grid.cells.push_back(r.cell);
    max_seen = std::max(max_seen, r.cell.iterations);
  }
  grid.max_iter = max_seen > 0 ? max_seen - 1 : 0;  // best guess when absent from the file
  return grid;
}

void write_pgm(const std::string& path, const BasinGrid& grid) {
  std::ofstream f = open_out(path, std::ios::binary);
  f << "P5\n" << grid.nx << ' ' << grid.ny << "\n255\n";
  std::vector<std::uint8_t> row(grid.nx);
  for (int j = grid.ny - 1; j >= 0; --j) {
    for (int i = 0; i < grid.nx; ++i) {
      const BasinCell& c = grid.at(i, j);
      row[i] = static_cast<std::uint8_t>(
          c.iterations > grid.max_iter ? 255 : std::min(c.iterations, 255));
    }
    f.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_ppm(const std::string& path, const BasinGrid& grid) {
  // id 0 (no root / non-converged) is black; ids cycle past ten entries.
  static const std::uint8_t palette[10][3] = {
      {255, 0, 0},     // 1 red
      {0, 255, 0},     // 2 green
      {0, 0, 255},     // 3 blue
      {255, 255, 0},   // 4 yellow
      {255, 0, 255},   // 5 magenta
      {0, 255, 255},   // 6 cyan
      {255, 165, 0},   // 7 orange
      {128, 0, 128},   // 8 purple
      {0, 128, 128},   // 9 teal
      {255, 255, 255}, // 10 white
  };
  std::ofstream f = open_out(path, std::ios::binary);
  f << "P6\n" << grid.nx << ' ' << grid.ny << "\n255\n";
  std::vector<std::uint8_t> row(static_cast<size_t>(grid.nx) * 3);
  for (int j = grid.ny - 1; j >= 0; --j) {
    for (int i = 0; i < grid.nx; ++i) {
      const BasinCell& c = grid.at(i, j);
      std::uint8_t r = 0, g = 0, b = 0;
      if (c.root_id > 0) {
        const std::uint8_t* base = palette[(c.root_id - 1) % 10];
        r = base[0];
        g = base[1];
        b = base[2];
      }
      row[3 * i] = r;
      row[3 * i + 1] = g;
      row[3 * i + 2] = b;
    }
    f.write(reinterpret_cast<const char*>(row.data()), row.size());
  }
  if (!f) throw std::runtime_error("write failed: " + path);
}

void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream f = open_out(path);
  f << "subcommand: " << m.subcommand << '\n';
  if (!m.problem.empty()) f << "problem: " << m.problem << '\n';
  if (!m.method.empty()) f << "method: " << m.method << '\n';
  for (const auto& [key, value] : m.settings) f << key << ": " << value << '\n';
  for (const std::string& out : m.outputs) f << "output: " << out << '\n';
  f << "wall_time_ms: " << format_g17(m.wall_time_ms) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace rootbeyond
