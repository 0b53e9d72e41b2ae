#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "thunder/params.hpp"
#include "thunder/postfx.hpp"
#include "thunder/signal.hpp"
#include "thunder/submodels.hpp"
#include "thunder/wav.hpp"

namespace thunder {

enum class Submodel { multistrike, rumbler, afterimage, deepener };

inline constexpr std::array<Submodel, 4> kSubmodels = {
    Submodel::multistrike, Submodel::rumbler, Submodel::afterimage, Submodel::deepener};

const char* to_string(Submodel s) noexcept;

/// Which sub-models contribute to the mix. Disabled ones render as silence;
/// everything else (seeds, placements) is unchanged.
struct SubmodelMask {
  bool multistrike = true;
  bool rumbler = true;
  bool afterimage = true;
  bool deepener = true;

  bool enabled(Submodel s) const noexcept;
  static SubmodelMask only(Submodel s) noexcept;
};

inline constexpr double kTailSeconds = 22.0;

struct RenderConfig {
  double sample_rate = kSampleRate;
  std::uint64_t seed = 0;
  double speed_of_sound = kSpeedOfSound;
  SampleFormat bit_depth = SampleFormat::float32;
  SubmodelMask enabled;
  /// Replaces the synthetic beach IR when set (e.g. a loaded recording).
  std::optional<Signal> impulse_response;
};

/// Everything a render will do, fixed before any audio is produced.
struct RenderGraph {
  Preset preset = Preset::v2;
  double onset = 0.0;            // d, seconds
  std::size_t frames = 0;
  models::PresetConstants constants;
  models::MultiStrikeConfig multistrike;
  models::RumblerConfig rumbler;
  models::AfterimageConfig afterimage;
  models::DeepenerConfig deepener;
  fx::FeedbackSpec strike_feedback;
  bool reverb = true;
  std::optional<fx::CompressorSpec> compressor;
  std::array<fx::Placement, 4> placements{};
  std::array<std::uint64_t, 4> seeds{};

  /// Multi-line human-readable dump of the graph.
  std::string describe() const;
};

/// Throws ValidationError for bad params or an unsupported config.
RenderGraph build_graph(const ThunderParams& params, const RenderConfig& config);

struct SubmodelReport {
  Submodel submodel = Submodel::multistrike;
  double peak_dbfs = 0.0;
  std::optional<double> onset;
};

struct RenderReport {
  ThunderParams params;
  std::uint64_t seed = 0;
  double duration = 0.0;
  double onset_delay = 0.0;
  std::optional<double> onset;
  double peak_dbfs = 0.0;
  int strike_count = 0;
  std::array<SubmodelReport, 4> submodels{};

  std::string to_text() const;
  /// One key=value per line; parse_report_key_values() reads it back.
  std::string to_key_values() const;
};

std::map<std::string, std::string> parse_report_key_values(std::string_view text);

/// Recovers the render parameters and seed from to_key_values() output.
std::pair<ThunderParams, std::uint64_t> params_from_report(std::string_view key_values);

struct RenderResult {
  Signal audio;        // stereo, d + 22 s
  RenderReport report;
  RenderGraph graph;
};

/// Renders one thunder event. Deterministic in (params, seed); sub-models are
/// built concurrently.
RenderResult render(const ThunderParams& params, const RenderConfig& config = {});

/// Output length in frames for a given onset delay.
std::size_t render_frames(double onset, double sample_rate = kSampleRate) noexcept;

}  // namespace thunder
