#include "thunder/service.hpp"

#include <httplib.h>

#include <atomic>
#include <condition_variable>
#include <json.hpp>
#include <mutex>
#include <random>
#include <thread>

#include "thunder/engine.hpp"
#include "thunder/errors.hpp"
#include "thunder/wav.hpp"

namespace thunder::service {

using json = nlohmann::ordered_json;

namespace {

/// Caps concurrent renders; waiters are admitted in arrival order.
class FifoGate {
 public:
  explicit FifoGate(unsigned slots) : free_(slots) {}

  void acquire() {
    std::unique_lock lock(mutex_);
    const std::uint64_t ticket = next_ticket_++;
    cv_.wait(lock, [&] { return ticket == serving_ && free_ > 0; });
    ++serving_;
    --free_;
    cv_.notify_all();
  }

  void release() {
    {
      std::lock_guard lock(mutex_);
      ++free_;
    }
    cv_.notify_all();
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  unsigned free_;
  std::uint64_t next_ticket_ = 0;
  std::uint64_t serving_ = 0;
};

class GateLease {
 public:
  explicit GateLease(FifoGate& gate) : gate_(gate) { gate_.acquire(); }
  ~GateLease() { gate_.release(); }
  GateLease(const GateLease&) = delete;
  GateLease& operator=(const GateLease&) = delete;

 private:
  FifoGate& gate_;
};

json control(const char* name, const char* label, double lo, double hi, double step, double def,
             const char* unit) {
  json c;
  c["name"] = name;
  c["label"] = label;
  c["type"] = "number";
  c["min"] = lo;
  c["max"] = hi;
  c["step"] = step;
  c["default"] = def;
  c["unit"] = unit;
  return c;
}

std::string make_schema() {
  const ThunderParams defaults;
  json controls = json::array();
  controls.push_back(control("distance", "Distance", 0.0, kMaxDistance, 1.0, defaults.distance, "m"));
  controls.push_back(
      control("initial_strike", "Initial strike", 0.0, 1.0, 0.01, defaults.initial_strike, ""));
  controls.push_back(control("rumble", "Rumble", 0.0, 1.0, 0.01, defaults.rumble, ""));
  controls.push_back(control("growl", "Growl", 0.0, 1.0, 0.01, defaults.growl, ""));
  controls.push_back({{"name", "reverb"},
                      {"label", "Beach reverb"},
                      {"type", "boolean"},
                      {"default", defaults.reverb}});
  controls.push_back({{"name", "preset"},
                      {"label", "Preset"},
                      {"type", "enum"},
                      {"options",
                       json::array({{{"value", "v1"}, {"label", "v1 (as surveyed)"}},
                                    {{"value", "v2"}, {"label", "v2 (improved)"}}})},
                      {"default", to_string(defaults.preset)}});
  json doc;
  doc["version"] = 1;
  doc["controls"] = std::move(controls);
  doc["seed"] = {{"name", "seed"},
                 {"type", "integer"},
                 {"min", 0},
                 {"max", (1ULL << 53) - 1},
                 {"optional", true}};
  return doc.dump(2);
}

std::uint64_t draw_seed() {
  std::random_device rd;
  const std::uint64_t hi = rd();
  const std::uint64_t lo = rd();
  // Stay within 2^53 so browser clients can echo the seed back losslessly.
  return ((hi << 32) | lo) & ((1ULL << 53) - 1);
}

std::string error_body(const std::string& field, const std::string& message) {
  json j;
  j["error"] = message;
  if (!field.empty()) j["field"] = field;
  return j.dump();
}

const char kFallbackIndex[] =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>thunder</title></head>"
    "<body><p>The web UI is not installed. Start the service with <code>--ui-dir</code> "
    "pointing at the built UI, or use <code>POST /api/render</code> directly.</p></body></html>";

}  // namespace

const std::string& schema_json() {
  static const std::string doc = make_schema();
  return doc;
}

std::variant<RenderRequest, RequestError> parse_render_request(std::string_view body) {
  json j;
  try {
    j = json::parse(body.begin(), body.end());
  } catch (const json::exception&) {
    // Includes numbers outside double range, which surface as out_of_range.
    return RequestError{"", "request body is not valid JSON"};
  }
  if (!j.is_object()) return RequestError{"", "request body must be a JSON object"};

  RenderRequest req;
  auto number = [&](const char* key, double& out) -> std::optional<RequestError> {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) return RequestError{key, std::string(key) + " must be a number"};
    out = it->get<double>();
    return std::nullopt;
  };

  for (const auto& [key, value] : j.items()) {
    if (key != "distance" && key != "initial_strike" && key != "rumble" && key != "growl" &&
        key != "reverb" && key != "preset" && key != "seed")
      return RequestError{key, "unknown field " + key};
  }
  for (const auto* key : {"distance", "initial_strike", "rumble", "growl"}) {
    double* target = std::string_view(key) == "distance"         ? &req.params.distance
                     : std::string_view(key) == "initial_strike" ? &req.params.initial_strike
                     : std::string_view(key) == "rumble"         ? &req.params.rumble
                                                                 : &req.params.growl;
    if (auto err = number(key, *target)) return *err;
  }
  if (auto it = j.find("reverb"); it != j.end() && !it->is_null()) {
    if (!it->is_boolean()) return RequestError{"reverb", "reverb must be a boolean"};
    req.params.reverb = it->get<bool>();
  }
  if (auto it = j.find("preset"); it != j.end() && !it->is_null()) {
    const auto preset = it->is_string() ? parse_preset(it->get<std::string>()) : std::nullopt;
    if (!preset) return RequestError{"preset", "preset must be \"v1\" or \"v2\""};
    req.params.preset = *preset;
  }
  if (auto it = j.find("seed"); it != j.end() && !it->is_null()) {
    if (it->is_number_unsigned()) {
      req.seed = it->get<std::uint64_t>();
    } else if (it->is_string()) {
      const auto& s = it->get_ref<const std::string&>();
      if (s.empty() || s.size() > 20 || s.find_first_not_of("0123456789") != std::string::npos)
        return RequestError{"seed", "seed must be a non-negative integer"};
      try {
        req.seed = std::stoull(s);
      } catch (const std::exception&) {
        return RequestError{"seed", "seed out of range"};
      }
    } else {
      return RequestError{"seed", "seed must be a non-negative integer"};
    }
  }

  try {
    validate(req.params);
  } catch (const ValidationError& e) {
    return RequestError{e.field(), e.what()};
  }
  return req;
}

struct ThunderService::Impl {
  ServiceOptions options;
  httplib::Server server;
  FifoGate gate;
  std::atomic<bool> stopping{false};
  std::atomic<bool> bound{false};
  int port = -1;

  static unsigned worker_count(unsigned requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
  }

  explicit Impl(ServiceOptions opts)
      : options(std::move(opts)), gate(worker_count(options.render_workers)) {
    // Enough HTTP threads that liveness probes are served while every render
    // slot is busy.
    const unsigned http_threads = worker_count(options.render_workers) + 8;
    server.new_task_queue = [http_threads] { return new httplib::ThreadPool(http_threads); };
    routes();
  }

  void routes() {
    server.Get("/healthz", [this](const httplib::Request&, httplib::Response& res) {
      if (stopping) {
        res.status = 503;
        res.set_content("stopping\n", "text/plain");
        return;
      }
      res.set_content("ok\n", "text/plain");
    });

    server.Get("/api/schema", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(schema_json(), "application/json");
    });

    server.Post("/api/render", [this](const httplib::Request& req, httplib::Response& res) {
      if (stopping) {
        res.status = 503;
        res.set_content(error_body("", "service is shutting down"), "application/json");
        return;
      }
      auto parsed = parse_render_request(req.body);
      if (auto* err = std::get_if<RequestError>(&parsed)) {
        res.status = 400;
        res.set_content(error_body(err->field, err->message), "application/json");
        return;
      }
      const auto& request = std::get<RenderRequest>(parsed);
      RenderConfig config;
      config.seed = request.seed ? *request.seed : draw_seed();
      try {
        std::vector<std::uint8_t> wav;
        {
          GateLease lease(gate);
          const auto result = render(request.params, config);
          wav = encode_wav(result.audio, SampleFormat::pcm16);
        }
        res.status = 200;
        res.set_header(kSeedHeader, std::to_string(config.seed));
        res.set_header("Access-Control-Expose-Headers", kSeedHeader);
        res.set_content(std::string(wav.begin(), wav.end()), "audio/wav");
      } catch (const ValidationError& e) {
        res.status = 400;
        res.set_content(error_body(e.field(), e.what()), "application/json");
      } catch (const std::exception& e) {
        res.status = 500;
        res.set_content(error_body("", std::string("render failed: ") + e.what()),
                        "application/json");
      }
    });

    bool mounted = false;
    if (options.ui_dir && std::filesystem::is_directory(*options.ui_dir))
      mounted = server.set_mount_point("/", options.ui_dir->string());
    if (!mounted) {
      server.Get("/", [](const httplib::Request&, httplib::Response& res) {
        res.set_content(kFallbackIndex, "text/html");
      });
    }
  }
};

ThunderService::ThunderService(ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(options))) {}

ThunderService::~ThunderService() { stop(); }

bool ThunderService::bind() {
  auto& s = impl_->server;
  if (impl_->options.port == 0) {
    const int p = s.bind_to_any_port(impl_->options.bind);
    if (p <= 0) return false;
    impl_->port = p;
  } else {
    if (!s.bind_to_port(impl_->options.bind, impl_->options.port)) return false;
    impl_->port = impl_->options.port;
  }
  impl_->bound = true;
  return true;
}

void ThunderService::run() {
  if (!impl_->bound) throw std::logic_error("ThunderService::run called before bind");
  impl_->server.listen_after_bind();
}

void ThunderService::stop() {
  impl_->stopping = true;
  if (impl_->bound) impl_->server.stop();
}

int ThunderService::port() const noexcept { return impl_->port; }

bool ThunderService::running() const noexcept { return impl_->server.is_running(); }

}  // namespace thunder::service
