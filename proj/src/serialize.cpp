#include "chshq/serialize.hpp"

#include "chshq/errors.hpp"

namespace chshq {

using nlohmann::json;

json to_json(const FieldSpec& field) {
  return json{{"p", field.p()},
              {"s", field.s()},
              {"modulus", std::vector<std::uint32_t>(field.modulus().begin(), field.modulus().end())}};
}

FieldSpec field_from_json(const json& j) {
  try {
    const auto p = j.at("p").get<std::uint32_t>();
    const auto s = j.at("s").get<std::uint32_t>();
    if (!j.contains("modulus")) return FieldSpec::create(p, s);
    const auto modulus = j.at("modulus").get<std::vector<std::uint32_t>>();
    return FieldSpec::with_modulus(p, s, modulus);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed field: ") + e.what());
  }
}

json to_json(const FieldSpec& field, const Config& c) {
  json points = json::array();
  for (const auto& pt : c.points) points.push_back({pt.x.value, pt.y.value});
  json lines = json::array();
  for (const auto& ln : c.lines) lines.push_back({ln.slope.value, ln.intercept.value});
  return json{{"q", field.q()}, {"points", std::move(points)}, {"lines", std::move(lines)}};
}

std::pair<FieldSpec, Config> config_from_json(const json& j) {
  try {
    const FieldSpec field = FieldSpec::of_order(j.at("q").get<std::uint64_t>());
    std::vector<Point> points;
    for (const auto& pt : j.at("points")) {
      if (pt.size() != 2) throw InvalidInput("points must be [x, y] pairs");
      points.push_back(Point{field.element(pt[0].get<std::uint64_t>()),
                             field.element(pt[1].get<std::uint64_t>())});
    }
    std::vector<Line> lines;
    for (const auto& ln : j.at("lines")) {
      if (ln.size() != 2) throw InvalidInput("lines must be [a, b] pairs");
      lines.push_back(Line{field.element(ln[0].get<std::uint64_t>()),
                           field.element(ln[1].get<std::uint64_t>())});
    }
    return {field, make_config(std::move(points), std::move(lines))};
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed config: ") + e.what());
  }
}

json to_json(const Strategy& s) {
  json f = json::array();
  json g = json::array();
  for (const Elem e : s.f) f.push_back(e.value);
  for (const Elem e : s.g) g.push_back(e.value);
  return json{{"f", std::move(f)}, {"g", std::move(g)}};
}

Strategy strategy_from_json(const FieldSpec& field, const json& j) {
  try {
    Strategy s;
    for (const auto& e : j.at("f")) s.f.push_back(field.element(e.get<std::uint64_t>()));
    for (const auto& e : j.at("g")) s.g.push_back(field.element(e.get<std::uint64_t>()));
    validate(field, s);
    return s;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("malformed strategy: ") + e.what());
  }
}

json to_json(const GameValue& v) {
  return json{{"q", v.q}, {"wins", v.wins}, {"p_win", to_string(v.p_win)}, {"bias", to_string(v.bias)}};
}

json to_json(const ErrorDist& d) {
  json out = json::array();
  for (const auto& p : d.pmf) out.push_back(to_string(p));
  return out;
}

}  // namespace chshq
