#include "thunder/engine.hpp"

#include <cmath>
#include <future>
#include <iomanip>
#include <sstream>

#include "thunder/analysis.hpp"
#include "thunder/errors.hpp"

namespace thunder {

const char* to_string(Submodel s) noexcept {
  switch (s) {
    case Submodel::multistrike: return "multistrike";
    case Submodel::rumbler: return "rumbler";
    case Submodel::afterimage: return "afterimage";
    case Submodel::deepener: return "deepener";
  }
  return "unknown";
}

bool SubmodelMask::enabled(Submodel s) const noexcept {
  switch (s) {
    case Submodel::multistrike: return multistrike;
    case Submodel::rumbler: return rumbler;
    case Submodel::afterimage: return afterimage;
    case Submodel::deepener: return deepener;
  }
  return false;
}

SubmodelMask SubmodelMask::only(Submodel s) noexcept {
  SubmodelMask m{false, false, false, false};
  switch (s) {
    case Submodel::multistrike: m.multistrike = true; break;
    case Submodel::rumbler: m.rumbler = true; break;
    case Submodel::afterimage: m.afterimage = true; break;
    case Submodel::deepener: m.deepener = true; break;
  }
  return m;
}

std::size_t render_frames(double onset, double sample_rate) noexcept {
  return static_cast<std::size_t>(std::llround((onset + kTailSeconds) * sample_rate));
}

RenderGraph build_graph(const ThunderParams& params, const RenderConfig& config) {
  validate(params);
  if (config.sample_rate != kSampleRate)
    throw ValidationError("sample_rate", "sample_rate must be 44100 Hz");
  if (!(config.speed_of_sound > 0.0))
    throw ValidationError("speed_of_sound", "speed_of_sound must be positive");

  RenderGraph g;
  g.preset = params.preset;
  g.onset = params.onset_delay(config.speed_of_sound);
  g.frames = render_frames(g.onset, config.sample_rate);
  g.constants = models::preset_constants(params.preset);

  for (std::size_t i = 0; i < kSubmodels.size(); ++i) {
    const char* name = to_string(kSubmodels[i]);
    g.seeds[i] = models::derive_seed(config.seed, name);
    g.placements[i] = fx::draw_placement(models::derive_seed(config.seed, std::string("pan/") + name));
  }
  g.multistrike = models::describe_multistrike(params, g.onset, g.seeds[0], config.sample_rate);
  g.rumbler = models::describe_rumbler(params, g.onset, g.seeds[1]);
  g.afterimage = models::describe_afterimage(params, g.onset, g.seeds[2]);
  g.deepener = models::describe_deepener(params, g.onset, g.seeds[3]);
  g.strike_feedback = fx::FeedbackSpec{0.6, 0.15};
  g.reverb = params.reverb;
  if (g.constants.master_compressor) g.compressor = fx::CompressorSpec{};
  return g;
}

namespace {

std::ostream& operator<<(std::ostream& os, const dsp::Period& p) {
  return os << "[" << p.start << ", " << p.end << "] s";
}

std::ostream& operator<<(std::ostream& os, const dsp::BiquadSpec& s) {
  return os << dsp::to_string(s.kind) << " " << s.frequency << " Hz Q=" << s.q;
}

std::string format_db(double db) {
  if (!std::isfinite(db)) return "-inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << db;
  return os.str();
}

std::string format_onset(const std::optional<double>& t) {
  if (!t) return "none";
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << *t;
  return os.str();
}

}  // namespace

std::string RenderGraph::describe() const {
  std::ostringstream os;
  os << "preset " << to_string(preset) << ", onset " << onset << " s, " << frames << " frames\n";
  os << "multistrike: " << multistrike.plan.count() << " strikes, peak gain "
     << multistrike.peak_gain << ", band-pass Q=" << constants.strike_q << ", center offset "
     << constants.strike_center_offset_hz << " Hz\n";
  for (const auto& b : multistrike.branches) {
    os << "  strike " << b.ordinal << (b.is_split_branch ? " (split)" : "") << ": "
       << (b.source == models::StrikeSource::noise ? "noise" : "impulses") << ", r=" << b.draw.r
       << ", bank " << b.filters.bank_slots[0] << "+" << b.filters.bank_slots[1] << ", "
       << b.filters.ramp.f_start << " -> " << b.filters.ramp.f_end << " Hz, envelope "
       << b.envelope.start_gain << " -> 0 over " << b.envelope.period << "\n";
  }
  os << "  feedback " << strike_feedback.delay_time << " s x " << strike_feedback.feedback
     << ", reverb " << (reverb ? "on" : "off") << "\n";
  os << "rumbler: envelope " << rumbler.envelope.start_gain << " -> " << rumbler.envelope.end_gain
     << " over " << rumbler.envelope.period << ", lowpass " << rumbler.lowpass.f_start << " -> "
     << rumbler.lowpass.f_end << " Hz over " << rumbler.lowpass.period << "\n";
  os << "afterimage: envelope " << afterimage.envelope.start_gain << " -> "
     << afterimage.envelope.end_gain << " over " << afterimage.envelope.period << ", lowpass "
     << afterimage.lowpass.f_start << " -> " << afterimage.lowpass.f_end << " Hz, x"
     << afterimage.excitation_gain << ", " << afterimage.bandpass << ", gain "
     << afterimage.output_gain << "\n";
  os << "deepener: envelope " << deepener.envelope.start_gain << " -> " << deepener.envelope.end_gain
     << " over " << deepener.envelope.period << ", " << deepener.lowpass1 << " | "
     << deepener.highpass << " | x" << deepener.drive << " clip | " << deepener.lowpass2 << "\n";
  for (std::size_t i = 0; i < placements.size(); ++i)
    os << "pan " << to_string(kSubmodels[i]) << ": azimuth " << placements[i].pan.azimuth
       << " deg, spread " << placements[i].spread_delay * 1000.0 << " ms on "
       << (placements[i].delayed_channel == 0 ? "left" : "right") << "\n";
  if (compressor)
    os << "compressor: threshold " << compressor->threshold << " dB, knee " << compressor->knee
       << " dB, ratio " << compressor->ratio << ", attack " << compressor->attack
       << " s, release " << compressor->release << " s\n";
  else
    os << "compressor: none\n";
  return os.str();
}

std::string RenderReport::to_text() const {
  std::ostringstream os;
  os << "seed:        " << seed << "\n";
  os << "preset:      " << to_string(params.preset) << "\n";
  os << "params:      distance=" << params.distance << " m initial_strike=" << params.initial_strike
     << " rumble=" << params.rumble << " growl=" << params.growl
     << " reverb=" << (params.reverb ? "on" : "off") << "\n";
  os << "duration:    " << std::fixed << std::setprecision(3) << duration << " s\n";
  os << "delay d:     " << onset_delay << " s\n";
  os << "onset:       " << format_onset(onset) << "\n";
  os << "peak:        " << format_db(peak_dbfs) << " dBFS\n";
  os << "strikes:     " << strike_count << "\n";
  for (const auto& s : submodels)
    os << "  " << std::left << std::setw(12) << to_string(s.submodel) << " peak "
       << format_db(s.peak_dbfs) << " dBFS, onset " << format_onset(s.onset) << "\n";
  return os.str();
}

std::string RenderReport::to_key_values() const {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "seed=" << seed << "\n";
  os << "preset=" << to_string(params.preset) << "\n";
  os << "distance=" << params.distance << "\n";
  os << "initial_strike=" << params.initial_strike << "\n";
  os << "rumble=" << params.rumble << "\n";
  os << "growl=" << params.growl << "\n";
  os << "reverb=" << (params.reverb ? "true" : "false") << "\n";
  os << "duration_s=" << duration << "\n";
  os << "delay_s=" << onset_delay << "\n";
  os << "onset_s=" << format_onset(onset) << "\n";
  os << "peak_dbfs=" << format_db(peak_dbfs) << "\n";
  os << "strikes=" << strike_count << "\n";
  for (const auto& s : submodels) {
    os << to_string(s.submodel) << ".peak_dbfs=" << format_db(s.peak_dbfs) << "\n";
    os << to_string(s.submodel) << ".onset_s=" << format_onset(s.onset) << "\n";
  }
  return os.str();
}

std::map<std::string, std::string> parse_report_key_values(std::string_view text) {
  std::map<std::string, std::string> kv;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

std::pair<ThunderParams, std::uint64_t> params_from_report(std::string_view key_values) {
  const auto kv = parse_report_key_values(key_values);
  auto get = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ValidationError(key, std::string("report is missing ") + key);
    return it->second;
  };
  ThunderParams p;
  p.distance = std::stod(get("distance"));
  p.initial_strike = std::stod(get("initial_strike"));
  p.rumble = std::stod(get("rumble"));
  p.growl = std::stod(get("growl"));
  p.reverb = get("reverb") == "true";
  const auto preset = parse_preset(get("preset"));
  if (!preset) throw ValidationError("preset", "unknown preset " + get("preset"));
  p.preset = *preset;
  return {p, std::stoull(get("seed"))};
}

namespace {

std::vector<double> build_submodel(Submodel s, const RenderGraph& g, const models::Timeline& tl) {
  switch (s) {
    case Submodel::multistrike: return models::build_multistrike(g.multistrike, tl, g.seeds[0]);
    case Submodel::rumbler: return models::build_rumbler(g.rumbler, tl, g.seeds[1]);
    case Submodel::afterimage: return models::build_afterimage(g.afterimage, tl, g.seeds[2]);
    case Submodel::deepener: return models::build_deepener(g.deepener, tl, g.seeds[3]);
  }
  return {};
}

/// Feedback then (optionally) reverb, trimmed back to the render length.
Signal strike_post(std::vector<double> dry, const RenderGraph& g, const Signal* ir) {
  const std::size_t frames = dry.size();
  auto echoed = fx::feedback_delay(dry, g.strike_feedback);
  Signal mono = Signal::mono(std::move(echoed));
  if (!g.reverb || ir == nullptr) return mono;
  Signal wet = fx::reverb(mono, *ir);
  Signal out(wet.channels(), frames, wet.sample_rate());
  for (std::size_t c = 0; c < wet.channels(); ++c) {
    const auto src = wet.channel(c);
    std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(frames),
              out.channel(c).begin());
  }
  return out;
}

}  // namespace

RenderResult render(const ThunderParams& params, const RenderConfig& config) {
  RenderResult result;
  result.graph = build_graph(params, config);
  const RenderGraph& g = result.graph;
  const models::Timeline timeline{config.sample_rate, g.onset, g.frames};

  std::optional<Signal> synthetic_ir;
  const Signal* ir = nullptr;
  if (g.reverb && config.enabled.multistrike) {
    if (config.impulse_response) {
      ir = &*config.impulse_response;
    } else {
      synthetic_ir = fx::synthesize_beach_ir(models::derive_seed(config.seed, "beach-ir"));
      ir = &*synthetic_ir;
    }
  }

  std::array<std::future<Signal>, 4> jobs;
  for (std::size_t i = 0; i < kSubmodels.size(); ++i) {
    const Submodel s = kSubmodels[i];
    jobs[i] = std::async(std::launch::async, [&, s, i]() {
      if (!config.enabled.enabled(s)) return Signal(2, g.frames, config.sample_rate);
      auto dry = build_submodel(s, g, timeline);
      Signal processed = s == Submodel::multistrike ? strike_post(std::move(dry), g, ir)
                                                    : Signal::mono(std::move(dry));
      return fx::spatialize(processed, g.placements[i]);
    });
  }

  Signal mix(2, g.frames, config.sample_rate);
  RenderReport& report = result.report;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const Signal part = jobs[i].get();
    SubmodelReport& sr = report.submodels[i];
    sr.submodel = kSubmodels[i];
    double p = 0.0;
    std::optional<std::size_t> first;
    for (std::size_t c = 0; c < 2; ++c) {
      const auto src = part.channel(c);
      auto dst = mix.channel(c);
      for (std::size_t n = 0; n < g.frames; ++n) dst[n] += src[n];
      p = std::max(p, analysis::peak(src));
      const auto idx = analysis::onset_index(src);
      if (idx && (!first || *idx < *first)) first = idx;
    }
    sr.peak_dbfs = analysis::to_dbfs(p);
    if (first) sr.onset = static_cast<double>(*first) / config.sample_rate;
  }

  if (g.compressor) mix = fx::compress(mix, *g.compressor);
  for (std::size_t c = 0; c < 2; ++c) dsp::clip_in_place(mix.channel(c));

  report.params = params;
  report.seed = config.seed;
  report.duration = mix.duration();
  report.onset_delay = g.onset;
  report.strike_count = g.multistrike.plan.count();
  double p = 0.0;
  std::optional<std::size_t> first;
  for (std::size_t c = 0; c < 2; ++c) {
    p = std::max(p, analysis::peak(mix.channel(c)));
    const auto idx = analysis::onset_index(mix.channel(c));
    if (idx && (!first || *idx < *first)) first = idx;
  }
  report.peak_dbfs = analysis::to_dbfs(p);
  if (first) report.onset = static_cast<double>(*first) / config.sample_rate;

  result.audio = std::move(mix);
  return result;
}

}  // namespace thunder
