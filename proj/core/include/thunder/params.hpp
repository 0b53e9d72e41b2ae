#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace thunder {

enum class Preset { v1, v2 };

const char* to_string(Preset preset) noexcept;
std::optional<Preset> parse_preset(std::string_view text) noexcept;

/// Speed of sound in air at 20 degrees C, m/s.
inline constexpr double kSpeedOfSound = 343.0;

inline constexpr double kMaxDistance = 10000.0;

/// The four user controls plus the reverb toggle and preset selector.
/// Intensities are normalized to [0, 1]; each sub-model scales them by its
/// own onset gain.
struct ThunderParams {
  double distance = 500.0;  // m
  double initial_strike = 0.7;
  double rumble = 0.5;
  double growl = 0.5;
  bool reverb = true;
  Preset preset = Preset::v2;

  /// Onset delay d = distance / C in seconds.
  double onset_delay(double speed_of_sound = kSpeedOfSound) const noexcept {
    return distance / speed_of_sound;
  }
};

/// Throws ValidationError naming the first out-of-range field.
void validate(const ThunderParams& params);

}  // namespace thunder
