#include "acdg/io.hpp"

#include <cstdio>
#include <filesystem>
#include <iomanip>

#include "acdg/error.hpp"

namespace acdg {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15e", x);
  return buf;
}

std::string format_cell(std::optional<double> x) { return x ? format_number(*x) : std::string(); }

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> header)
    : out_(path), width_(header.size()) {
  if (!out_) throw InvalidArgument("cannot open " + path + " for writing");
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw InvalidArgument("CSV row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void ensure_directory(const std::string& dir) {
  if (dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InvalidArgument("cannot create directory " + dir + ": " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return (std::filesystem::path(dir) / name).string();
}

void write_field_vtk(const std::string& path, const DgFunction& u, const std::string& name) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open " + path + " for writing");
  const DgSpace& space = u.space();
  const std::size_t ne = space.mesh().num_elements();
  const std::size_t nd = space.dofs_per_elem();
  out << "# vtk DataFile Version 3.0\n" << name << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << ne * nd << " double\n" << std::setprecision(17);
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t i = 0; i < nd; ++i) {
      const Point2 x = lattice_point(space, e, i);
      out << x.x << ' ' << x.y << " 0\n";
    }
  }
  out << "CELLS " << ne << ' ' << ne * (nd + 1) << '\n';
  for (std::size_t e = 0; e < ne; ++e) {
    out << nd;
    for (std::size_t i = 0; i < nd; ++i) out << ' ' << e * nd + i;
    out << '\n';
  }
  out << "CELL_TYPES " << ne << '\n';
  for (std::size_t e = 0; e < ne; ++e) out << (nd == 3 ? 5 : 22) << '\n';
  out << "POINT_DATA " << ne * nd << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t i = 0; i < nd; ++i) out << u.coefficients()[space.dof(e, i)] << '\n';
  }
}

void write_field_csv(const std::string& path, const DgFunction& u) {
  CsvWriter csv(path, {"elem", "local", "x", "y", "value"});
  const DgSpace& space = u.space();
  for (std::size_t e = 0; e < space.mesh().num_elements(); ++e) {
    for (std::size_t i = 0; i < space.dofs_per_elem(); ++i) {
      const Point2 x = lattice_point(space, e, i);
      csv.row({std::to_string(e), std::to_string(i), format_number(x.x), format_number(x.y),
               format_number(u.coefficients()[space.dof(e, i)])});
    }
  }
}

}  // namespace acdg
