#pragma once

// JSON encoding of every report type. Field order is fixed, doubles use
// the shortest representation that parses back to the same value, and
// non-finite values are written as null.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "tpa/antivoter.hpp"
#include "tpa/bounds.hpp"
#include "tpa/dist.hpp"
#include "tpa_cli/suites.hpp"

namespace tpa {

using Json = nlohmann::ordered_json;

void to_json(Json& j, const IntegerPmf& v);
void from_json(const Json& j, IntegerPmf& v);
void to_json(Json& j, const TpParams& v);
void from_json(const Json& j, TpParams& v);
void to_json(Json& j, const Distance& v);
void from_json(const Json& j, Distance& v);
void to_json(Json& j, const BoundIngredients& v);
void from_json(const Json& j, BoundIngredients& v);
void to_json(Json& j, const LipschitzLocBound& v);
void from_json(const Json& j, LipschitzLocBound& v);
void to_json(Json& j, const BoundCheck& v);
void from_json(const Json& j, BoundCheck& v);
void to_json(Json& j, const BoundReport& v);
void from_json(const Json& j, BoundReport& v);
void to_json(Json& j, const StationaryErrors& v);
void from_json(const Json& j, StationaryErrors& v);
void to_json(Json& j, const StationarySummary& v);
void from_json(const Json& j, StationarySummary& v);
void to_json(Json& j, const CheckResult& v);
void from_json(const Json& j, CheckResult& v);
void to_json(Json& j, const SuiteResult& v);
void from_json(const Json& j, SuiteResult& v);
void to_json(Json& j, const RateSeries& v);
void from_json(const Json& j, RateSeries& v);

struct Envelope {
  std::string tool = "tpa";
  std::string version;
  std::string command;
  std::optional<std::uint64_t> seed;
  Json payload;
  double timing_ms = 0.0;
};

void to_json(Json& j, const Envelope& v);
void from_json(const Json& j, Envelope& v);

}  // namespace tpa
