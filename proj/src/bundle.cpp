#include "alpha3d/bundle.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "alpha3d/errors.hpp"

namespace alpha3d {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kDimensionNames[4] = {"vertices", "edges", "triangles", "tetrahedra"};
constexpr const char* kCountNames[4] = {"vertex", "edge", "triangle", "tetrahedron"};
constexpr SimplexClass kClasses[3] = {SimplexClass::Interior, SimplexClass::Regular, SimplexClass::Singular};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Json counters_json(const KernelCounters& k) {
  Json predicates = Json::object();
  for (std::size_t i = 0; i < kPredicateKinds; ++i) {
    Json p;
    p["calls"] = k.calls[i];
    p["max_depth"] = k.max_depth[i];
    p["depth_histogram"] = k.depth_histogram[i];
    predicates[predicate_name(static_cast<Predicate>(i))] = p;
  }
  Json out;
  out["predicates"] = predicates;
  out["filter_hits"] = k.filter_hits;
  out["long_add_sub"] = k.long_add_sub;
  out["long_multiply"] = k.long_multiply;
  return out;
}

KernelCounters counters_from(const Json& j) {
  KernelCounters k;
  for (std::size_t i = 0; i < kPredicateKinds; ++i) {
    const Json& p = j.at("predicates").at(predicate_name(static_cast<Predicate>(i)));
    k.calls[i] = p.at("calls").get<std::uint64_t>();
    k.max_depth[i] = p.at("max_depth").get<std::uint64_t>();
    const auto histogram = p.at("depth_histogram").get<std::vector<std::uint64_t>>();
    if (histogram.size() != kDepthBuckets) throw InputError("depth histogram has the wrong length");
    std::copy(histogram.begin(), histogram.end(), k.depth_histogram[i].begin());
  }
  k.filter_hits = j.at("filter_hits").get<std::uint64_t>();
  k.long_add_sub = j.at("long_add_sub").get<std::uint64_t>();
  k.long_multiply = j.at("long_multiply").get<std::uint64_t>();
  return k;
}

Json index_or_null(std::size_t i) { return i == kNoThreshold ? Json(nullptr) : Json(i); }

}  // namespace

FamilyBundle build_bundle(const PointSet& points, StageTimes* times) {
  if (points.size() < 4) {
    throw InputError("need at least 4 points, got " + std::to_string(points.size()));
  }
  StageTimes local;
  FamilyBundle b;
  b.scale = points.scale;
  b.source = points.source;
  const KernelCounters before = kernel_stats().snapshot();
  auto start = std::chrono::steady_clock::now();
  Triangulation t = Triangulation::build(points.points);
  local.build = seconds_since(start);
  start = std::chrono::steady_clock::now();
  b.stats.postprocess = t.postprocess_flat_tets();
  local.postprocess = seconds_since(start);
  b.stats.flips = t.counters();
  start = std::chrono::steady_clock::now();
  b.family = AlphaComplex::classify_all(t);
  local.classify = seconds_since(start);
  b.stats.kernel = kernel_stats().snapshot().since(before);
  start = std::chrono::steady_clock::now();
  b.signatures = compute_signatures(b.family);
  local.signatures = seconds_since(start);
  if (times) *times = local;
  return b;
}

std::string to_json(const FamilyBundle& b) {
  const AlphaComplex& a = b.family;
  const double unit = std::pow(10.0, -b.scale);
  Json j;
  j["format"] = kBundleFormat;
  j["version"] = b.version;
  j["source"] = b.source;
  j["n"] = a.vertex_count();
  j["scale"] = b.scale;

  Json points = Json::array(), positions = Json::array();
  for (const auto& p : a.points()) {
    points.push_back(p.coords);
    positions.push_back({p.coords[0] * unit, p.coords[1] * unit, p.coords[2] * unit});
  }
  j["points"] = std::move(points);
  j["positions"] = std::move(positions);

  Json exact = Json::array(), alpha = Json::array();
  const Spectrum& s = a.spectrum();
  for (std::size_t i = 0; i < s.size(); ++i) {
    exact.push_back(s[i].to_string());
    alpha.push_back(s[i].is_infinite() ? Json(nullptr) : Json(s.alpha()[i] * unit));
  }
  j["spectrum"] = {{"alpha_sq", std::move(exact)}, {"alpha", std::move(alpha)}};

  Json simplices;
  for (int d = 0; d < 4; ++d) {
    Json list = Json::array();
    for (const auto& r : a.records(d)) {
      Json rec;
      rec["v"] = std::vector<std::uint32_t>(r.key.begin(), r.key.end());
      rec["hull"] = r.on_hull;
      if (d > 0) {
        rec["attached"] = r.attached;
        rec["rho_sq"] = r.rho_sq->to_string();
        rec["rho"] = index_or_null(r.rho_index);
      }
      rec["mu_lo"] = r.mu_lo_index;
      rec["mu_hi"] = r.mu_hi_index;
      list.push_back(std::move(rec));
    }
    simplices[kDimensionNames[d]] = std::move(list);
  }
  j["simplices"] = std::move(simplices);

  const Signatures& sig = b.signatures;
  Json volume_exact = Json::array(), volume = Json::array(), area = Json::array();
  for (const auto& v : sig.volume) {
    volume_exact.push_back(v.get_str());
    volume.push_back(v.get_d() * unit * unit * unit);
  }
  for (double v : sig.area) area.push_back(v * unit * unit);
  Json counts;
  for (int d = 0; d < 4; ++d) {
    Json per_class;
    for (SimplexClass c : kClasses) {
      if (d == 3 && c != SimplexClass::Interior) continue;
      per_class[class_name(c)] = sig.face_counts[d][static_cast<int>(c)];
    }
    counts[kCountNames[d]] = std::move(per_class);
  }
  j["signatures"] = {{"components", sig.components},
                     {"volume", {{"exact", std::move(volume_exact)}, {"value", std::move(volume)}}},
                     {"area", std::move(area)},
                     {"face_counts", std::move(counts)}};

  const FlipCounters& f = b.stats.flips;
  j["stats"] = {{"kernel", counters_json(b.stats.kernel)},
                {"flips",
                 {{"triangle_to_edge", f.triangle_to_edge},
                  {"edge_to_triangle", f.edge_to_triangle},
                  {"unflippable", f.unflippable},
                  {"hull_facets_replaced", f.hull_facets_replaced},
                  {"visibility_scans", f.visibility_scans}}},
                {"postprocess",
                 {{"flat_before", b.stats.postprocess.flat_before},
                  {"removed", b.stats.postprocess.removed},
                  {"flat_remaining", b.stats.postprocess.flat_remaining}}}};
  return j.dump() + "\n";
}

FamilyBundle from_json(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("bundle is not valid JSON: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != kBundleFormat) throw InputError("not an alpha family bundle");
    FamilyBundle b;
    b.version = j.at("version").get<int>();
    if (b.version != kBundleVersion) {
      throw InputError("unsupported bundle version " + std::to_string(b.version) + " (this build reads version " +
                       std::to_string(kBundleVersion) + ")");
    }
    b.source = j.at("source").get<std::string>();
    b.scale = j.at("scale").get<int>();

    std::vector<ExactPoint> points;
    for (const auto& p : j.at("points")) {
      const auto c = p.get<std::array<std::int64_t, 3>>();
      points.push_back(ExactPoint::make(static_cast<std::uint32_t>(points.size() + 1), c[0], c[1], c[2]));
    }
    if (points.size() != j.at("n").get<std::size_t>()) throw InputError("point count does not match n");

    std::vector<RadiusSq> values;
    for (const auto& v : j.at("spectrum").at("alpha_sq")) values.push_back(RadiusSq::parse(v.get<std::string>()));
    if (values.size() < 2 || values.front() != RadiusSq(Rational(0)) || !values.back().is_infinite()) {
      throw InputError("spectrum must start at 0 and end at infinity");
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
      if (!(values[i - 1] < values[i])) throw InputError("spectrum is not strictly increasing");
    }
    Spectrum spectrum(std::vector<RadiusSq>(values.begin() + 1, values.end() - 1));

    std::array<std::vector<IntervalRecord>, 4> records;
    for (int d = 0; d < 4; ++d) {
      for (const auto& rec : j.at("simplices").at(kDimensionNames[d])) {
        IntervalRecord r;
        const auto v = rec.at("v").get<std::vector<std::uint32_t>>();
        if (v.size() != static_cast<std::size_t>(d + 1)) throw InputError("simplex record with the wrong vertex count");
        switch (d) {
          case 0: r.key = SimplexKey{v[0]}; break;
          case 1: r.key = SimplexKey{v[0], v[1]}; break;
          case 2: r.key = SimplexKey{v[0], v[1], v[2]}; break;
          default: r.key = SimplexKey{v[0], v[1], v[2], v[3]}; break;
        }
        r.on_hull = rec.at("hull").get<bool>();
        if (d > 0) {
          r.attached = rec.at("attached").get<bool>();
          r.rho_sq = RadiusSq::parse(rec.at("rho_sq").get<std::string>());
          r.rho_index = rec.at("rho").is_null() ? kNoThreshold : rec.at("rho").get<std::size_t>();
        }
        r.mu_lo_index = rec.at("mu_lo").get<std::size_t>();
        r.mu_hi_index = rec.at("mu_hi").get<std::size_t>();
        if (r.mu_lo_index >= values.size() || r.mu_hi_index >= values.size()) {
          throw InputError("record " + r.key.to_string() + " points outside the spectrum");
        }
        if (r.rho_index != kNoThreshold && (r.rho_index >= values.size() || values[r.rho_index] != *r.rho_sq)) {
          throw InputError("record " + r.key.to_string() + " has a radius that disagrees with its threshold");
        }
        r.mu_lo_sq = values[r.mu_lo_index];
        r.mu_hi_sq = values[r.mu_hi_index];
        records[d].push_back(std::move(r));
      }
    }
    b.family = AlphaComplex::from_records(std::move(points), std::move(records), std::move(spectrum));

    const Json& sig = j.at("signatures");
    const std::size_t intervals = b.family.spectrum().interval_count();
    b.signatures.components = sig.at("components").get<std::vector<std::size_t>>();
    for (const auto& v : sig.at("volume").at("exact")) {
      const RadiusSq parsed = RadiusSq::parse(v.get<std::string>());
      if (parsed.is_infinite()) throw InputError("volume must be finite");
      b.signatures.volume.push_back(parsed.value());
    }
    if (sig.at("area").get<std::vector<double>>().size() != intervals) {
      throw InputError("signature series length differs from the interval count");
    }
    b.signatures.area = area_signature(b.family);
    for (int d = 0; d < 4; ++d) {
      const Json& per_class = sig.at("face_counts").at(kCountNames[d]);
      for (SimplexClass c : kClasses) {
        auto& series = b.signatures.face_counts[d][static_cast<int>(c)];
        if (d == 3 && c != SimplexClass::Interior) {
          series.assign(intervals, 0);
        } else {
          series = per_class.at(class_name(c)).get<std::vector<std::size_t>>();
        }
        if (series.size() != intervals) throw InputError("face count series has the wrong length");
      }
    }
    if (b.signatures.components.size() != intervals || b.signatures.volume.size() != intervals ||
        b.signatures.area.size() != intervals) {
      throw InputError("signature series length differs from the interval count");
    }

    const Json& stats = j.at("stats");
    b.stats.kernel = counters_from(stats.at("kernel"));
    const Json& f = stats.at("flips");
    b.stats.flips.triangle_to_edge = f.at("triangle_to_edge").get<std::uint64_t>();
    b.stats.flips.edge_to_triangle = f.at("edge_to_triangle").get<std::uint64_t>();
    b.stats.flips.unflippable = f.at("unflippable").get<std::uint64_t>();
    b.stats.flips.hull_facets_replaced = f.at("hull_facets_replaced").get<std::uint64_t>();
    b.stats.flips.visibility_scans = f.at("visibility_scans").get<std::uint64_t>();
    const Json& pp = stats.at("postprocess");
    b.stats.postprocess.flat_before = pp.at("flat_before").get<std::size_t>();
    b.stats.postprocess.removed = pp.at("removed").get<std::size_t>();
    b.stats.postprocess.flat_remaining = pp.at("flat_remaining").get<std::size_t>();
    return b;
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed bundle: ") + e.what());
  } catch (const PreconditionError& e) {
    throw InputError(std::string("malformed bundle: ") + e.what());
  }
}

FamilyBundle read_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return from_json(text.str());
}

void write_bundle(const FamilyBundle& bundle, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << to_json(bundle);
  if (!out) throw InputError("failed writing " + path.string());
}

}  // namespace alpha3d
