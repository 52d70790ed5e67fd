#pragma once

#include "json.hpp"

#include "chshq/boxes.hpp"
#include "chshq/finite_field.hpp"
#include "chshq/game.hpp"
#include "chshq/incidence.hpp"

namespace chshq {

inline constexpr int kSchemaVersion = 1;

/// {p, s, modulus: [c_0..c_s]}
nlohmann::json to_json(const FieldSpec& field);
FieldSpec field_from_json(const nlohmann::json& j);

/// {q, points: [[x, y]...], lines: [[a, b]...]} with integer encodings.
nlohmann::json to_json(const FieldSpec& field, const Config& c);
/// Reconstructs the canonical field of order q. Throws InvalidInput on
/// malformed documents or out-of-range encodings.
std::pair<FieldSpec, Config> config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Strategy& s);
Strategy strategy_from_json(const FieldSpec& field, const nlohmann::json& j);

/// {q, wins, p_win: "num/den", bias: "num/den"}
nlohmann::json to_json(const GameValue& v);

/// ["num/den", ...]
nlohmann::json to_json(const ErrorDist& d);

}  // namespace chshq
