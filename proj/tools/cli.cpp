#include "cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <csignal>
#include <iomanip>
#include <ostream>
#include <random>
#include <thread>

#include "thunder/analysis.hpp"
#include "thunder/engine.hpp"
#include "thunder/errors.hpp"
#include "thunder/postfx.hpp"
#include "thunder/service.hpp"
#include "thunder/wav.hpp"

namespace thunder::cli {

namespace {

std::string flag_for(const std::string& field) {
  std::string flag = "--" + field;
  for (char& c : flag)
    if (c == '_') c = '-';
  return flag;
}

struct RenderOptions {
  ThunderParams params;
  std::optional<std::uint64_t> seed;
  std::string preset = "v2";
  std::string out = "thunder.wav";
  std::string bit_depth = "float32";
  std::string report_format = "text";
  std::string ir_path;
};

struct AnalyzeOptions {
  std::string in;
  std::string format = "text";
};

struct ServeOptions {
  int port = 8080;
  std::string bind = "127.0.0.1";
  std::string ui_dir;
  unsigned workers = 0;
};

int cmd_render(const RenderOptions& o, std::ostream& out, std::ostream& err) {
  ThunderParams params = o.params;
  const auto preset = parse_preset(o.preset);
  if (!preset) {
    err << "error: --preset must be v1 or v2 (got " << o.preset << ")\n";
    return kExitUsage;
  }
  params.preset = *preset;
  try {
    validate(params);
  } catch (const ValidationError& e) {
    err << "error: " << flag_for(e.field()) << ": " << e.what() << "\n";
    return kExitUsage;
  }

  RenderConfig config;
  config.seed = o.seed ? *o.seed : std::random_device{}();
  config.bit_depth = o.bit_depth == "pcm16" ? SampleFormat::pcm16 : SampleFormat::float32;
  try {
    if (!o.ir_path.empty()) config.impulse_response = fx::load_impulse_response(o.ir_path);
    const auto result = render(params, config);
    write_wav(result.audio, o.out, config.bit_depth);
    out << (o.report_format == "kv" ? result.report.to_key_values() : result.report.to_text());
    if (o.report_format != "kv") out << "output:      " << o.out << "\n";
  } catch (const ValidationError& e) {
    err << "error: " << flag_for(e.field()) << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

std::string fmt_db(double db) {
  if (!std::isfinite(db)) return "-inf";
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << db;
  return os.str();
}

std::string fmt_onset(const std::optional<double>& t) {
  if (!t) return "none";
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << *t;
  return os.str();
}

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out, std::ostream& err) {
  Signal signal;
  try {
    signal = read_wav(o.in);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  if (signal.empty()) {
    err << "error: " << o.in << " contains no samples\n";
    return kExitFailure;
  }
  const auto m = analysis::analyze(signal);
  out << std::fixed;
  if (o.format == "csv") {
    out << "hop,time_s,rms_dbfs,onset_s,peak_dbfs,duration_s,band_low,band_mid,band_high\n";
    for (std::size_t i = 0; i < m.rms_envelope.size(); ++i) {
      out << i << "," << std::setprecision(1) << static_cast<double>(i) * analysis::kHopSeconds
          << "," << fmt_db(analysis::to_dbfs(m.rms_envelope[i])) << "," << fmt_onset(m.onset)
          << "," << fmt_db(m.peak_dbfs) << "," << std::setprecision(6) << m.duration << ","
          << m.bands.low << "," << m.bands.mid << "," << m.bands.high << "\n";
    }
    return kExitOk;
  }
  out << "file:        " << o.in << "\n";
  out << "channels:    " << signal.channels() << "\n";
  out << "duration:    " << std::setprecision(3) << m.duration << " s\n";
  out << "onset:       " << fmt_onset(m.onset) << "\n";
  out << "peak:        " << fmt_db(m.peak_dbfs) << " dBFS\n";
  out << std::setprecision(4);
  out << "bands:       <200 Hz " << m.bands.low << ", 200-1300 Hz " << m.bands.mid
      << ", >1300 Hz " << m.bands.high << "\n";
  out << "rms envelope (100 ms hops, dBFS):\n";
  for (std::size_t i = 0; i < m.rms_envelope.size(); ++i)
    out << "  " << std::setprecision(1) << static_cast<double>(i) * analysis::kHopSeconds << "  "
        << fmt_db(analysis::to_dbfs(m.rms_envelope[i])) << "\n";
  return kExitOk;
}

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted = true; }

int cmd_serve(const ServeOptions& o, std::ostream& out, std::ostream& err) {
  service::ServiceOptions opts;
  opts.bind = o.bind;
  opts.port = o.port;
  opts.render_workers = o.workers;
  if (!o.ui_dir.empty()) opts.ui_dir = o.ui_dir;

  service::ThunderService svc(opts);
  if (!svc.bind()) {
    err << "error: cannot listen on " << o.bind << ":" << o.port
        << " (address in use or not available)\n";
    return kExitFailure;
  }

  g_interrupted = false;
  struct sigaction sa {};
  sa.sa_handler = on_signal;
  sigemptyset(&sa.sa_mask);
  struct sigaction old_int {}, old_term {};
  sigaction(SIGINT, &sa, &old_int);
  sigaction(SIGTERM, &sa, &old_term);

  std::atomic<bool> done{false};
  std::thread watcher([&] {
    while (!done && !g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(50));
    svc.stop();
  });

  out << "listening on http://" << o.bind << ":" << svc.port() << std::endl;
  svc.run();
  done = true;
  watcher.join();

  sigaction(SIGINT, &old_int, nullptr);
  sigaction(SIGTERM, &old_term, nullptr);
  out << "stopped" << std::endl;
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Procedural thunder synthesizer"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  RenderOptions ro;
  auto* render_cmd = app.add_subcommand("render", "Render one thunder event to a WAV file");
  render_cmd->add_option("--distance", ro.params.distance, "Distance to the strike in m, [0, 10000]")
      ->capture_default_str();
  render_cmd
      ->add_option("--initial-strike", ro.params.initial_strike,
                   "Initial strike intensity, [0, 1] (also drives the afterimage)")
      ->capture_default_str();
  render_cmd->add_option("--rumble", ro.params.rumble, "Rumble intensity, [0, 1]")
      ->capture_default_str();
  render_cmd->add_option("--growl", ro.params.growl, "Growl (deepener) intensity, [0, 1]")
      ->capture_default_str();
  render_cmd->add_flag("--reverb,!--no-reverb", ro.params.reverb,
                       "Beach reverb on the strike path (default: on)");
  render_cmd->add_option("--seed", ro.seed, "Random seed, 64-bit unsigned (default: drawn)");
  render_cmd->add_option("--preset", ro.preset, "Model preset: v1 or v2")->capture_default_str();
  render_cmd->add_option("--out", ro.out, "Output WAV path")->capture_default_str();
  render_cmd->add_option("--bit-depth", ro.bit_depth, "Sample format: float32 or pcm16")
      ->check(CLI::IsMember({"float32", "pcm16"}))
      ->capture_default_str();
  render_cmd->add_option("--ir", ro.ir_path, "WAV impulse response replacing the synthetic beach IR");
  render_cmd->add_option("--report-format", ro.report_format, "Report format: text or kv")
      ->check(CLI::IsMember({"text", "kv"}))
      ->capture_default_str();

  AnalyzeOptions ao;
  auto* analyze_cmd = app.add_subcommand("analyze", "Print onset, level and spectrum metrics of a WAV");
  analyze_cmd->add_option("--in", ao.in, "Input WAV path")->required();
  analyze_cmd->add_option("--format", ao.format, "Output format: text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();

  ServeOptions so;
  auto* serve_cmd = app.add_subcommand("serve", "Run the local HTTP service and web UI");
  serve_cmd->add_option("--port", so.port, "TCP port (0 picks a free port)")
      ->check(CLI::Range(0, 65535))
      ->capture_default_str();
  serve_cmd->add_option("--bind", so.bind, "Bind address")->capture_default_str();
  serve_cmd->add_option("--ui-dir", so.ui_dir, "Directory of static UI assets served at /");
  serve_cmd->add_option("--workers", so.workers, "Concurrent renders (0 = CPU count)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (render_cmd->parsed()) return cmd_render(ro, out, err);
  if (analyze_cmd->parsed()) return cmd_analyze(ao, out, err);
  if (serve_cmd->parsed()) return cmd_serve(so, out, err);
  return kExitUsage;
}

}  // namespace thunder::cli
