#include "alpha3d/mesh_export.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "alpha3d/errors.hpp"

namespace alpha3d {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string coordinate(std::int64_t value, int scale) {
  if (scale == 0) return std::to_string(value);
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", static_cast<double>(value) * std::pow(10.0, -scale));
  return buffer;
}

}  // namespace

MeshFormat parse_mesh_format(std::string_view name) {
  const std::string n = lower(name);
  if (n == "off") return MeshFormat::Off;
  if (n == "obj") return MeshFormat::Obj;
  throw InputError("unknown mesh format '" + std::string(name) + "' (use off or obj)");
}

ClassFilter ClassFilter::parse(std::string_view list) {
  ClassFilter f{false, false, false};
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    const std::string item = lower(list.substr(start, end - start));
    if (item == "interior") {
      f.interior = true;
    } else if (item == "regular") {
      f.regular = true;
    } else if (item == "singular") {
      f.singular = true;
    } else if (!item.empty()) {
      throw InputError("unknown class '" + item + "' (use interior, regular or singular)");
    }
    start = end + 1;
  }
  if (!f.interior && !f.regular && !f.singular) throw InputError("class filter selects nothing");
  return f;
}

bool ClassFilter::accepts(SimplexClass c) const {
  switch (c) {
    case SimplexClass::Interior: return interior;
    case SimplexClass::Regular: return regular;
    case SimplexClass::Singular: return singular;
  }
  return false;
}

std::string export_mesh(const FamilyBundle& bundle, std::size_t interval, const MeshOptions& options,
                        MeshCounts* counts) {
  const AlphaComplex& a = bundle.family;
  const ComplexView view = a.complex_at(interval);
  const ShapeBoundary boundary = a.shape_boundary(view);

  std::vector<std::array<std::uint32_t, 3>> faces;
  if (options.classes.regular) faces = boundary.regular_triangles;
  if (options.classes.singular) {
    for (const SimplexKey& k : boundary.singular_triangles) {
      faces.push_back({k[0], k[1], k[2]});
      if (options.double_singular) faces.push_back({k[1], k[0], k[2]});
    }
  }
  if (options.classes.interior) {
    for (const auto& [k, c] : view.simplices[2]) {
      if (c == SimplexClass::Interior) faces.push_back({k[0], k[1], k[2]});
    }
  }
  std::vector<SimplexKey> lines, points;
  if (options.format == MeshFormat::Obj && options.classes.singular) {
    lines = boundary.singular_edges;
    points = boundary.singular_vertices;
  }

  std::ostringstream out;
  const auto& pts = a.points();
  if (options.format == MeshFormat::Off) {
    out << "OFF\n" << pts.size() << ' ' << faces.size() << " 0\n";
    for (const auto& p : pts) {
      out << coordinate(p.coords[0], bundle.scale) << ' ' << coordinate(p.coords[1], bundle.scale) << ' '
          << coordinate(p.coords[2], bundle.scale) << '\n';
    }
    for (const auto& f : faces) out << "3 " << f[0] - 1 << ' ' << f[1] - 1 << ' ' << f[2] - 1 << '\n';
  } else {
    out << "# alpha shape, interval " << interval << " of " << a.spectrum().interval_count() << '\n';
    for (const auto& p : pts) {
      out << "v " << coordinate(p.coords[0], bundle.scale) << ' ' << coordinate(p.coords[1], bundle.scale) << ' '
          << coordinate(p.coords[2], bundle.scale) << '\n';
    }
    for (const auto& f : faces) out << "f " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    for (const auto& l : lines) out << "l " << l[0] << ' ' << l[1] << '\n';
    for (const auto& p : points) out << "p " << p[0] << '\n';
  }
  if (counts) *counts = {pts.size(), faces.size(), lines.size(), points.size()};
  return out.str();
}

}  // namespace alpha3d
