#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <CLI11.hpp>

#include "alpha3d/bundle.hpp"
#include "alpha3d/errors.hpp"
#include "alpha3d/mesh_export.hpp"

namespace alpha3d {

namespace {

std::string number(double v) {
  if (std::isinf(v)) return "inf";
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, result.ptr);
}

// Exact squared radius in input units.
std::string unscaled(const RadiusSq& r, int scale) {
  if (r.is_infinite()) return "inf";
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned>(2 * scale));
  Rational q = r.value() / p;
  q.canonicalize();
  return q.get_str();
}

std::string unscaled_volume(const Rational& v, int scale) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned>(3 * scale));
  Rational q = v / p;
  q.canonicalize();
  return q.get_str();
}

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write " + path);
  file << text;
  if (!file) throw InputError("failed writing " + path);
}

bool looks_like_bundle(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  char c = 0;
  while (in.get(c)) {
    if (!std::isspace(static_cast<unsigned char>(c))) return c == '{';
  }
  return false;
}

void print_table(const std::vector<std::vector<std::string>>& rows, bool csv, std::ostream& out) {
  if (csv) {
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
    return;
  }
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << row[i];
    }
    out << '\n';
  }
}

const char* const kCountColumns[4] = {"vertex", "edge", "triangle", "tetrahedron"};

void print_spectrum(const FamilyBundle& b, bool csv, std::ostream& out) {
  std::vector<std::vector<std::string>> rows{{"index", "alpha_sq", "alpha"}};
  const Spectrum& s = b.family.spectrum();
  const double unit = std::pow(10.0, -b.scale);
  for (std::size_t i = 0; i < s.size(); ++i) {
    rows.push_back({std::to_string(i), unscaled(s[i], b.scale), number(s.alpha()[i] * unit)});
  }
  print_table(rows, csv, out);
}

void print_signatures(const FamilyBundle& b, bool csv, std::ostream& out) {
  std::vector<std::string> header{"index", "alpha_from", "alpha_to", "components", "volume", "volume_exact", "area"};
  for (int d = 0; d < 4; ++d) {
    for (SimplexClass c : {SimplexClass::Singular, SimplexClass::Regular, SimplexClass::Interior}) {
      if (d == 3 && c != SimplexClass::Interior) continue;
      header.push_back(std::string(kCountColumns[d]) + "_" + class_name(c));
    }
  }
  std::vector<std::vector<std::string>> rows{header};
  const Signatures& sig = b.signatures;
  const Spectrum& s = b.family.spectrum();
  const double unit = std::pow(10.0, -b.scale);
  for (std::size_t i = 0; i < sig.length(); ++i) {
    std::vector<std::string> row{std::to_string(i), number(s.alpha()[i] * unit), number(s.alpha()[i + 1] * unit),
                                 std::to_string(sig.components[i]),
                                 number(sig.volume[i].get_d() * unit * unit * unit),
                                 unscaled_volume(sig.volume[i], b.scale), number(sig.area[i] * unit * unit)};
    for (int d = 0; d < 4; ++d) {
      for (SimplexClass c : {SimplexClass::Singular, SimplexClass::Regular, SimplexClass::Interior}) {
        if (d == 3 && c != SimplexClass::Interior) continue;
        row.push_back(std::to_string(sig.face_counts[d][static_cast<int>(c)][i]));
      }
    }
    rows.push_back(std::move(row));
  }
  print_table(rows, csv, out);
}

void print_stats(const FamilyBundle& b, const StageTimes* times, std::ostream& out) {
  const AlphaComplex& a = b.family;
  out << "points            " << b.n() << '\n';
  out << "simplices         " << a.records(1).size() << " edges, " << a.records(2).size() << " triangles, "
      << a.records(3).size() << " tetrahedra\n";
  out << "spectrum          " << a.spectrum().threshold_count() << " thresholds, "
      << a.spectrum().interval_count() << " intervals\n";
  const FlipCounters& f = b.stats.flips;
  out << "flips             " << f.triangle_to_edge << " triangle-to-edge, " << f.edge_to_triangle
      << " edge-to-triangle, " << f.unflippable << " unflippable\n";
  out << "hull facets       " << f.hull_facets_replaced << " replaced, " << f.visibility_scans << " full scans\n";
  const PostprocessReport& p = b.stats.postprocess;
  out << "flat tetrahedra   " << p.flat_before << " found, " << p.removed << " removed, " << p.flat_remaining
      << " remaining\n";
  const KernelCounters& k = b.stats.kernel;
  out << "long arithmetic   " << k.long_add_sub << " add/sub, " << k.long_multiply << " multiply, " << k.filter_hits
      << " fast-path hits\n";
  for (std::size_t i = 0; i < kPredicateKinds; ++i) {
    const auto kind = static_cast<Predicate>(i);
    std::ostringstream mean;
    mean << std::fixed << std::setprecision(4) << k.mean_depth(kind);
    out << std::left << std::setw(18) << predicate_name(kind) << std::right << k.calls[i] << " calls, max depth "
        << k.max_depth[i] << ", mean depth " << mean.str() << '\n';
    std::size_t last = kDepthBuckets;
    while (last > 1 && k.depth_histogram[i][last - 1] == 0) --last;
    out << "  depth histogram";
    for (std::size_t d = 0; d < last; ++d) out << ' ' << k.depth_histogram[i][d];
    out << '\n';
  }
  if (times) {
    std::ostringstream t;
    t << std::fixed << std::setprecision(3) << "seconds           build " << times->build << ", postprocess "
      << times->postprocess << ", classify " << times->classify << ", signatures " << times->signatures << ", total "
      << times->total() << '\n';
    out << t.str();
  }
}

std::size_t resolve_interval(const FamilyBundle& b, const std::string& alpha_text) {
  Rational alpha = parse_decimal(alpha_text);
  if (sgn(alpha) < 0) throw InputError("alpha must not be negative");
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned>(b.scale));
  alpha *= p;
  return b.family.spectrum().interval_of(alpha * alpha);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact alpha shapes of 3D point sets", "alpha3d"};
  app.require_subcommand(1);

  std::string input, output;
  int scale = 0;
  bool csv = false;
  long index = -1;
  std::string alpha, format = "off", classes = "regular,singular";
  bool double_singular = false;

  auto* build = app.add_subcommand("build", "Triangulate a point file and write the family bundle");
  build->add_option("input", input, "Point file")->required();
  build->add_option("--scale", scale, "Multiply coordinates by 10^D before rounding checks")->check(CLI::Range(0, kMaxScale));
  build->add_option("-o,--output", output, "Bundle path (default: standard output)");

  auto* spectrum = app.add_subcommand("spectrum", "List the alpha spectrum of a bundle");
  spectrum->add_option("bundle", input, "Bundle file")->required();
  spectrum->add_flag("--csv", csv, "Comma separated output");

  auto* signatures = app.add_subcommand("signatures", "List signature functions per interval");
  signatures->add_option("bundle", input, "Bundle file")->required();
  signatures->add_flag("--csv", csv, "Comma separated output");

  auto* exporter = app.add_subcommand("export", "Write one alpha shape as a mesh");
  exporter->add_option("bundle", input, "Bundle file")->required();
  auto* index_option = exporter->add_option("--index", index, "Interval index");
  auto* alpha_option = exporter->add_option("--alpha", alpha, "Alpha value in input units");
  index_option->excludes(alpha_option);
  exporter->add_option("--format", format, "off or obj");
  exporter->add_option("--classes", classes, "Comma separated classes: interior, regular, singular");
  exporter->add_flag("--double-singular", double_singular, "Emit singular triangles once per side");
  exporter->add_option("-o,--output", output, "Mesh path (default: standard output)");

  auto* stats = app.add_subcommand("stats", "Kernel counters, flips and simplex counts");
  stats->add_option("input", input, "Bundle, or a point file to build and time")->required();
  stats->add_option("--scale", scale, "Scale for point files")->check(CLI::Range(0, kMaxScale));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (build->parsed()) {
      const FamilyBundle b = build_bundle(read_points(input, scale));
      write_text(to_json(b), output, out);
      if (!output.empty() && output != "-") {
        out << b.n() << " points, " << b.family.records(3).size() << " tetrahedra, "
            << b.family.spectrum().threshold_count() << " thresholds -> " << output << '\n';
      }
    } else if (spectrum->parsed()) {
      print_spectrum(read_bundle(input), csv, out);
    } else if (signatures->parsed()) {
      print_signatures(read_bundle(input), csv, out);
    } else if (exporter->parsed()) {
      const FamilyBundle b = read_bundle(input);
      MeshOptions options;
      options.format = parse_mesh_format(format);
      options.classes = ClassFilter::parse(classes);
      options.double_singular = double_singular;
      std::size_t interval;
      if (!alpha.empty()) {
        interval = resolve_interval(b, alpha);
      } else if (index >= 0) {
        interval = static_cast<std::size_t>(index);
      } else {
        throw InputError("export needs --index or --alpha");
      }
      if (interval >= b.family.spectrum().interval_count()) {
        throw InputError("interval index " + std::to_string(interval) + " is out of range (the bundle has " +
                         std::to_string(b.family.spectrum().interval_count()) + " intervals, 0 to " +
                         std::to_string(b.family.spectrum().interval_count() - 1) + ")");
      }
      write_text(export_mesh(b, interval, options), output, out);
    } else if (stats->parsed()) {
      if (looks_like_bundle(input)) {
        print_stats(read_bundle(input), nullptr, out);
      } else {
        StageTimes times;
        const FamilyBundle b = build_bundle(read_points(input, scale), &times);
        print_stats(b, &times, out);
      }
    }
  } catch (const OnThresholdError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace alpha3d
