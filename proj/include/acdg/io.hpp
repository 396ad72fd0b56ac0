#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "acdg/dg_space.hpp"

namespace acdg {

/// Fixed-format number for CSV output ("%.15e"); byte-stable across runs.
std::string format_number(double x);
std::string format_cell(std::optional<double> x);  // empty when absent

/// Header-first CSV file. Rows must match the header width.
class CsvWriter {
public:
  CsvWriter(const std::string& path, std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  void row(const std::vector<double>& values);

private:
  std::ofstream out_;
  std::size_t width_;
};

/// Creates `dir` (and parents); empty string is a no-op.
void ensure_directory(const std::string& dir);
std::string join_path(const std::string& dir, const std::string& name);

/// Legacy-VTK unstructured grid with one point per (element, local node), so
/// discontinuities survive. P2 uses quadratic triangles.
void write_field_vtk(const std::string& path, const DgFunction& u, const std::string& name = "u");
/// Columns elem, local, x, y, value.
void write_field_csv(const std::string& path, const DgFunction& u);

}  // namespace acdg
