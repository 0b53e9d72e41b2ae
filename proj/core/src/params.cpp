#include "thunder/params.hpp"

#include <cmath>
#include <sstream>

#include "thunder/errors.hpp"

namespace thunder {

const char* to_string(Preset preset) noexcept {
  return preset == Preset::v1 ? "v1" : "v2";
}

std::optional<Preset> parse_preset(std::string_view text) noexcept {
  if (text == "v1") return Preset::v1;
  if (text == "v2") return Preset::v2;
  return std::nullopt;
}

namespace {

void check_range(const char* field, double value, double lo, double hi, const char* unit = "") {
  if (std::isfinite(value) && value >= lo && value <= hi) return;
  std::ostringstream msg;
  msg << field << " must be in [" << lo << ", " << hi << "]" << unit << " (got " << value << ")";
  throw ValidationError(field, msg.str());
}

}  // namespace

void validate(const ThunderParams& params) {
  check_range("distance", params.distance, 0.0, kMaxDistance, " m");
  check_range("initial_strike", params.initial_strike, 0.0, 1.0);
  check_range("rumble", params.rumble, 0.0, 1.0);
  check_range("growl", params.growl, 0.0, 1.0);
}

}  // namespace thunder
