// CSV / image / manifest output for the experiment harness.
#ifndef ROOTBEYOND_IO_HPP
#define ROOTBEYOND_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include "rootbeyond/experiments.hpp"

namespace rootbeyond {

// Header "<value_name>,iterations,status"; iterations is -1 for runs that
// did not converge.
void write_sweep_csv(const std::string& path, const std::string& value_name,
                     const std::vector<SweepRow>& rows);

// Header "x,y,iterations,root_id"; one row per cell in storage order
// (j * nx + i), coordinates are cell centers printed with %.17g.
void write_grid_csv(const std::string& path, const BasinGrid& grid);
BasinGrid read_grid_csv(const std::string& path);

// 8-bit binary PGM, rows top-down (j = ny-1 first). Converged cells map to
// min(iterations, 255); everything else is 255.
void write_pgm(const std::string& path, const BasinGrid& grid);

// 24-bit binary PPM: root ids take a fixed palette (cycling past 10 entries),
// id 0 is black; converged cells are dimmed with iteration count.
void write_ppm(const std::string& path, const BasinGrid& grid);

// Plain-text record of one CLI run: what ran, with which settings, what it
// wrote, and how long it took. Data files stay byte-identical between
// repeat runs; the wall time lives here instead.
struct RunManifest {
  std::string subcommand;
  std::string problem;
  std::string method;
  std::vector<std::pair<std::string, std::string>> settings;
  std::vector<std::string> outputs;
  double wall_time_ms = 0.0;
};

void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace rootbeyond

#endif
