// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and time
// budgets are fixed here; the process exits non-zero if any line fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "thunder/analysis.hpp"
#include "thunder/biquad.hpp"
#include "thunder/convolve.hpp"
#include "thunder/engine.hpp"
#include "thunder/noise.hpp"
#include "thunder/postfx.hpp"
#include "thunder/submodels.hpp"
#include "thunder/wav.hpp"

using namespace thunder;

namespace {

constexpr double kFs = kSampleRate;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  const char* name;
  double budget_s;  // wall-clock limit, <= 0 for none
  std::function<Outcome()> check;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome strike_length_bounds() {
  constexpr std::size_t kDraws = 100000;
  constexpr double kLo = 2.45, kHi = 1290.8;  // ms, open interval
  double lo = 1e9, hi = -1e9, worst_oracle = 0.0;
  std::size_t draws = 0;
  for (std::uint64_t seed = 0; draws < kDraws; ++seed) {
    const auto cfg = models::describe_multistrike(ThunderParams{}, 0.0, seed);
    for (const auto& b : cfg.branches) {
      if (draws == kDraws) break;
      const double ms = (b.envelope.period.end - b.envelope.period.start) * 1000.0;
      lo = std::min(lo, ms);
      hi = std::max(hi, ms);
      worst_oracle = std::max(worst_oracle, std::abs(ms - oracle::strike_length_ms(b.draw.r)));
      ++draws;
    }
  }
  Outcome o;
  o.pass = lo > kLo && hi < kHi && lo < 5.0 && hi > 1200.0 && worst_oracle < 1e-9;
  o.detail = fmt("%zu draws, d'-d in [%.3f, %.3f] ms, max |err vs closed form| %.1e ms", draws, lo,
                 hi, worst_oracle);
  return o;
}

Outcome strike_count_distribution() {
  constexpr int kPlans = 100000;
  std::array<int, models::kMaxStrikes + 1> counts{};
  for (int s = 0; s < kPlans; ++s) {
    const int i = models::plan_strikes(static_cast<std::uint64_t>(s)).count();
    if (i < 1 || i > models::kMaxStrikes) return {false, fmt("count %d out of range", i)};
    ++counts[i];
  }
  Outcome o;
  std::string freqs;
  for (int i = 1; i <= models::kMaxStrikes; ++i) {
    const double f = static_cast<double>(counts[i]) / kPlans;
    o.pass = o.pass && std::abs(f - 0.2) <= 0.01;
    freqs += fmt(" %d:%.4f", i, f);
  }
  o.detail = fmt("%d plans, frequencies%s", kPlans, freqs.c_str());
  return o;
}

Outcome filter_oracle() {
  using dsp::FilterKind;
  const dsp::BiquadSpec specs[12] = {
      {FilterKind::highpass, 15.0, 3.0},  {FilterKind::highpass, 30.0, 3.0},
      {FilterKind::lowpass, 33.0, 3.0},   {FilterKind::lowpass, 60.0, 3.0},
      {FilterKind::lowpass, 80.0, 3.0},   {FilterKind::bandpass, 333.0, 4.0},
      {FilterKind::lowpass, 1000.0, 3.0}, {FilterKind::bandpass, 1000.0, 10.0},
      {FilterKind::bandpass, 1000.0, 7.0}, {FilterKind::bandpass, 80.0, 7.0},
      {FilterKind::bandpass, 60.0, 10.0}, {FilterKind::bandpass, 333.0, 10.0},
  };
  constexpr int kProbes = 50;
  constexpr double kTolDb = 0.5;
  constexpr std::size_t kIrLength = 1 << 18;
  double worst = 0.0;
  for (const auto& spec : specs) {
    std::vector<double> x(kIrLength, 0.0);
    x[0] = 1.0;
    const auto h = dsp::biquad_process(spec, x);
    const auto shape = spec.kind == FilterKind::lowpass    ? oracle::Shape::lowpass
                       : spec.kind == FilterKind::highpass ? oracle::Shape::highpass
                                                           : oracle::Shape::bandpass;
    for (int k = 0; k < kProbes; ++k) {
      const double f = 10.0 * std::pow(2000.0, static_cast<double>(k) / (kProbes - 1));  // 10 Hz..20 kHz
      const double want = oracle::prototype_magnitude(shape, spec.frequency, spec.q, f, kFs);
      const double got = oracle::dtft_magnitude(h, f, kFs);
      worst = std::max(worst, std::abs(oracle::db(got) - oracle::db(want)));
    }
  }
  return {worst <= kTolDb, fmt("12 specs x %d probes, worst deviation %.2e dB (tol %.1f)", kProbes,
                               worst, kTolDb)};
}

Outcome convolution_oracle() {
  constexpr double kTol = 1e-9;
  dsp::NoiseStream rng(2024, "acceptance/convolution");
  double worst = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    std::vector<double> x(static_cast<std::size_t>(rng.uniform_int(1, 128)));
    std::vector<double> h(static_cast<std::size_t>(rng.uniform_int(1, 64)));
    for (auto& v : x) v = rng.next_bipolar();
    for (auto& v : h) v = rng.next_bipolar();
    const auto want = oracle::convolve(x, h);
    const auto fast = dsp::convolve_fft(x, h);
    const auto chosen = dsp::convolve(x, h);
    if (fast.size() != want.size() || chosen.size() != want.size()) return {false, "length mismatch"};
    for (std::size_t i = 0; i < want.size(); ++i)
      worst = std::max({worst, std::abs(fast[i] - want[i]), std::abs(chosen[i] - want[i])});
  }
  return {worst <= kTol, fmt("100 pairs, max abs error %.2e (tol %.0e)", worst, kTol)};
}

Outcome compressor_static() {
  const fx::CompressorSpec spec;  // -20 dB threshold, ratio 12
  auto settled_db = [&](double level_db) {
    const double a = std::pow(10.0, level_db / 20.0);
    // Two seconds of a full-band steady signal: a DC level and a 1 kHz tone of
    // the same peak, measured by peak over the final 100 ms.
    std::vector<double> dc(2 * 44100, a), tone(2 * 44100);
    for (std::size_t n = 0; n < tone.size(); ++n)
      tone[n] = a * std::sin(2.0 * 3.14159265358979323846 * 1000.0 * static_cast<double>(n) / kFs);
    const auto ydc = fx::compress(dc, spec);
    const auto yt = fx::compress(tone, spec);
    const std::span<const double> tail_dc(ydc.end() - 4410, ydc.end());
    const std::span<const double> tail_t(yt.end() - 4410, yt.end());
    return std::pair{analysis::to_dbfs(analysis::peak(tail_dc)),
                     analysis::to_dbfs(analysis::peak(tail_t))};
  };
  const auto [hot_dc, hot_tone] = settled_db(0.0);
  const auto [quiet_dc, quiet_tone] = settled_db(-30.0);
  const bool hot = std::abs(hot_dc + 18.33) <= 0.5 && std::abs(hot_tone + 18.33) <= 0.5;
  const bool quiet = std::abs(quiet_dc + 30.0) <= 0.1 && std::abs(quiet_tone + 30.0) <= 0.1;
  return {hot && quiet, fmt("0 dBFS -> %.2f / %.2f dBFS (want -18.33 +/- 0.5); "
                            "-30 dBFS -> %.2f / %.2f dBFS (want +/- 0.1)",
                            hot_dc, hot_tone, quiet_dc, quiet_tone)};
}

Outcome render_determinism() {
  dsp::NoiseStream rng(77, "acceptance/determinism");
  int identical = 0;
  for (int i = 0; i < 20; ++i) {
    ThunderParams p;
    p.distance = rng.uniform(0.0, 2000.0);
    p.initial_strike = rng.next_unit();
    p.rumble = rng.next_unit();
    p.growl = rng.next_unit();
    p.reverb = rng.next_unit() < 0.5;
    p.preset = rng.next_unit() < 0.5 ? Preset::v1 : Preset::v2;
    RenderConfig cfg;
    cfg.seed = rng.next_u64();
    const auto fmt_ = i % 2 ? SampleFormat::pcm16 : SampleFormat::float32;
    const auto a = encode_wav(render(p, cfg).audio, fmt_);
    const auto b = encode_wav(render(p, cfg).audio, fmt_);
    identical += a == b ? 1 : 0;
  }
  return {identical == 20, fmt("%d/20 pairs byte-identical", identical)};
}

Outcome physical_delay() {
  Outcome o;
  for (double distance : {0.0, 343.0, 3430.0}) {
    ThunderParams p;
    p.distance = distance;
    RenderConfig cfg;
    cfg.seed = 4242;
    const auto r = render(p, cfg);
    const double want = distance / kSpeedOfSound;
    if (!r.report.onset) return {false, fmt("no onset at %.0f m", distance)};
    const double err = std::abs(*r.report.onset - want) * kFs;
    o.pass = o.pass && err <= 1.0;
    o.detail += fmt("%s%.0f m -> %.6f s (%.1f samples off)", o.detail.empty() ? "" : "; ", distance,
                    *r.report.onset, err);
  }
  return o;
}

Outcome spectral_placement() {
  constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};
  double min_low = 1.0, min_peak = 1e9, max_peak = 0.0, min_drop = 1e9;
  for (std::uint64_t seed : kSeeds) {
    ThunderParams p;
    p.distance = 0.0;
    RenderConfig cfg;
    cfg.seed = seed;

    cfg.enabled = SubmodelMask::only(Submodel::deepener);
    const auto deep = render(p, cfg).audio.mixdown();
    min_low = std::min(min_low, analysis::energy_fraction_below(deep, analysis::kLowBandHz));

    cfg.enabled = SubmodelMask::only(Submodel::multistrike);
    const auto strike = render(p, cfg).audio.mixdown();
    const double f = analysis::spectral_peak_hz(strike);
    min_peak = std::min(min_peak, f);
    max_peak = std::max(max_peak, f);

    cfg.enabled = {};
    const auto full = render(p, cfg).audio.mixdown();
    const auto secs = analysis::windowed_rms(full, 1.0);
    const double last = analysis::rms(std::span<const double>(full).last(44100));
    const double loudest = *std::max_element(secs.begin(), secs.end());
    min_drop = std::min(min_drop, analysis::to_dbfs(loudest) - analysis::to_dbfs(last));
  }
  const bool pass = min_low >= 0.85 && min_peak >= 80.0 && max_peak <= 1300.0 && min_drop >= 20.0;
  return {pass, fmt("5 seeds: deepener energy <200 Hz >= %.3f; strike peak in [%.0f, %.0f] Hz; "
                    "final second >= %.1f dB below loudest",
                    min_low, min_peak, max_peak, min_drop)};
}

/// Index from which `gain` stays within `tol` of `terminal` to the end.
std::size_t settle_index(const std::vector<double>& gain, double terminal, double tol) {
  std::size_t n = gain.size();
  while (n > 0 && std::abs(gain[n - 1] - terminal) <= tol) --n;
  return n;
}

Outcome envelope_terminals() {
  ThunderParams p;
  p.distance = 600.0;
  RenderConfig cfg;
  cfg.seed = 31337;
  const auto g = build_graph(p, cfg);
  const double d = g.onset;
  const models::Timeline tl{kFs, d, g.frames};
  constexpr double kBlock = static_cast<double>(dsp::kControlBlock);

  struct Target {
    const char* name;
    const dsp::Envelope* env;
    double offset;
    double terminal;
  };
  const Target targets[] = {
      {"rumbler", &g.rumbler.envelope, models::kRumblerEnvelopeSeconds, kEpsilon},
      {"afterimage", &g.afterimage.envelope, models::kAfterimageSeconds, kEpsilon},
      {"deepener", &g.deepener.envelope, models::kDeepenerSeconds, 0.0},
  };
  const auto rumbler = models::build_rumbler_detailed(g.rumbler, tl, g.seeds[1]);

  Outcome o;
  for (const auto& t : targets) {
    // Graph introspection: period and terminal value.
    const bool graph_ok = std::abs(t.env->period.start - d) < 1e-12 &&
                          std::abs(t.env->period.end - (d + t.offset)) < 1e-12 &&
                          t.env->end_gain == t.terminal;
    // Rendered buffer: the gain track settles on the terminal value at d + T.
    const auto gain = std::string(t.name) == "rumbler" ? rumbler.gain : t.env->render(g.frames, kFs);
    const double target_index = (d + t.offset) * kFs;
    const double settle = static_cast<double>(settle_index(gain, t.terminal, 1e-9));
    const double off = settle - target_index;
    o.pass = o.pass && graph_ok && std::abs(off) <= kBlock;
    o.detail += fmt("%s%s %s, settles %+.0f samples from d+%.1f s", o.detail.empty() ? "" : "; ",
                    t.name, graph_ok ? "graph ok" : "graph MISMATCH", off, t.offset);
  }
  // The deepener's own output must fall silent with its envelope.
  const auto deep = models::build_deepener(g.deepener, tl, g.seeds[3]);
  std::size_t last = deep.size();
  while (last > 0 && deep[last - 1] == 0.0) --last;
  const double off = static_cast<double>(last) - (d + models::kDeepenerSeconds) * kFs;
  o.pass = o.pass && std::abs(off) <= kBlock;
  o.detail += fmt("; deepener output silent %+.0f samples from d+18.5 s", off);
  return o;
}

Outcome v2_delta_audit() {
  ThunderParams p;
  p.preset = Preset::v2;
  RenderConfig cfg;
  cfg.seed = 99;
  const auto g = build_graph(p, cfg);
  bool strike_ok = !g.multistrike.branches.empty();
  for (const auto& b : g.multistrike.branches) {
    strike_ok = strike_ok && b.filters.q == 7.0 &&
                b.filters.ramp.f_start == b.draw.r * 1200.0 + 100.0 - 20.0;
  }
  const bool hp_ok = g.deepener.highpass.frequency == 30.0;
  const bool ai_ok = g.afterimage.output_gain == 0.4;
  const bool comp_ok = g.compressor && g.compressor->threshold == -20.0 &&
                       g.compressor->ratio == 12.0 && g.compressor->knee == 20.0 &&
                       g.compressor->attack == 0.0 && g.compressor->release == 0.5;

  p.preset = Preset::v1;
  const auto g1 = build_graph(p, cfg);
  bool v1_ok = !g1.compressor && g1.deepener.highpass.frequency == 15.0 &&
               g1.afterimage.output_gain == 1.0;
  for (const auto& b : g1.multistrike.branches)
    v1_ok = v1_ok && b.filters.q == 10.0 && b.filters.ramp.f_start == b.draw.r * 1200.0 + 100.0;

  return {strike_ok && hp_ok && ai_ok && comp_ok && v1_ok,
          fmt("BP offset/Q %s, HP 30 Hz %s, afterimage 0.4 %s, compressor %s, v1 baseline %s",
              strike_ok ? "ok" : "BAD", hp_ok ? "ok" : "BAD", ai_ok ? "ok" : "BAD",
              comp_ok ? "ok" : "BAD", v1_ok ? "ok" : "BAD")};
}

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"strike envelope length bounds", 1.0, strike_length_bounds},
      {"strike count distribution", 5.0, strike_count_distribution},
      {"filter response vs analytic prototype", 10.0, filter_oracle},
      {"fast convolution vs brute force", 0.0, convolution_oracle},
      {"compressor static curve", 0.0, compressor_static},
      {"render determinism", 60.0, render_determinism},
      {"physical propagation delay", 0.0, physical_delay},
      {"spectral placement", 0.0, spectral_placement},
      {"envelope terminal times", 0.0, envelope_terminals},
      {"v2 preset constants", 0.0, v2_delta_audit},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt("%.2f s", secs);
    if (c.budget_s > 0.0) {
      timing += fmt(" / budget %.0f s", c.budget_s);
      if (secs > c.budget_s) {
        o.pass = false;
        timing += " EXCEEDED";
      }
    }
    std::printf("%s  %-40s %s [%s]\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
