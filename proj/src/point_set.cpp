#include "alpha3d/point_set.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "alpha3d/errors.hpp"

namespace alpha3d {

namespace {

Integer power_of_ten(unsigned e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, e);
  return p;
}

}  // namespace

Rational parse_decimal(std::string_view token) {
  std::size_t i = 0;
  bool negative = false;
  if (i < token.size() && (token[i] == '+' || token[i] == '-')) negative = token[i++] == '-';
  std::string digits;
  long exponent = 0;
  bool any = false;
  while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) {
    digits += token[i++];
    any = true;
  }
  if (i < token.size() && token[i] == '.') {
    ++i;
    while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) {
      digits += token[i++];
      --exponent;
      any = true;
    }
  }
  if (!any) throw InputError("'" + std::string(token) + "' is not a number");
  if (i < token.size() && (token[i] == 'e' || token[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < token.size() && (token[i] == '+' || token[i] == '-')) exp_negative = token[i++] == '-';
    long e = 0;
    bool exp_digits = false;
    while (i < token.size() && std::isdigit(static_cast<unsigned char>(token[i]))) {
      e = e * 10 + (token[i++] - '0');
      exp_digits = true;
      if (e > 1000) throw InputError("exponent of '" + std::string(token) + "' is too large");
    }
    if (!exp_digits) throw InputError("'" + std::string(token) + "' is not a number");
    exponent += exp_negative ? -e : e;
  }
  if (i != token.size()) throw InputError("'" + std::string(token) + "' is not a number");
  Rational value{Integer(digits)};
  if (exponent > 0) value *= power_of_ten(static_cast<unsigned>(exponent));
  if (exponent < 0) value /= power_of_ten(static_cast<unsigned>(-exponent));
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

PointSet parse_points(std::string_view text, int scale, std::string source) {
  if (scale < 0 || scale > kMaxScale) {
    throw InputError("scale must be between 0 and " + std::to_string(kMaxScale));
  }
  PointSet set;
  set.scale = scale;
  set.source = std::move(source);
  const Integer factor = power_of_ten(static_cast<unsigned>(scale));
  std::map<std::array<std::int64_t, 3>, std::size_t> seen;
  std::size_t line_number = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++line_number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line) {
      if (c == ',' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream in(line);
    std::vector<std::string> tokens;
    for (std::string token; in >> token;) tokens.push_back(token);
    if (tokens.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::string where = "line " + std::to_string(line_number);
    if (tokens.size() != 3) {
      throw InputError(where + ": expected 3 coordinates, found " + std::to_string(tokens.size()));
    }
    std::array<std::int64_t, 3> coords{};
    for (int k = 0; k < 3; ++k) {
      Rational value;
      try {
        value = parse_decimal(tokens[k]) * factor;
      } catch (const InputError& e) {
        throw InputError(where + ": " + e.what());
      }
      value.canonicalize();
      if (value.get_den() != 1) {
        throw InputError(where + ": '" + tokens[k] + "' is not an integer at scale " + std::to_string(scale));
      }
      const Integer& n = value.get_num();
      if (abs(n) > kMaxCoordinate) {
        throw InputError(where + ": '" + tokens[k] + "' exceeds the coordinate range after scaling");
      }
      coords[k] = n.get_si();
    }
    const auto [it, fresh] = seen.emplace(coords, line_number);
    if (!fresh) {
      throw InputError(where + ": duplicate point, same as line " + std::to_string(it->second));
    }
    set.points.push_back(ExactPoint::make(static_cast<std::uint32_t>(set.points.size() + 1), coords[0],
                                          coords[1], coords[2]));
    if (end == text.size()) break;
  }
  return set;
}

PointSet read_points(const std::filesystem::path& path, int scale) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_points(text.str(), scale, path.filename().string());
}

}  // namespace alpha3d
