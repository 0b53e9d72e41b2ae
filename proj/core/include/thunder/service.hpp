#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "thunder/params.hpp"

namespace thunder::service {

struct ServiceOptions {
  std::string bind = "127.0.0.1";
  int port = 8080;                      // 0 picks a free port
  unsigned render_workers = 0;          // 0 = hardware concurrency
  std::optional<std::filesystem::path> ui_dir;  // static assets served at /
};

/// A validated render request; `seed` is absent when the client wants one drawn.
struct RenderRequest {
  ThunderParams params;
  std::optional<std::uint64_t> seed;
};

/// Field-level validation outcome for a request body.
struct RequestError {
  std::string field;
  std::string message;
};

/// Parses a JSON request body. Missing fields take the documented defaults.
/// Returns the error instead of throwing.
std::variant<RenderRequest, RequestError> parse_render_request(std::string_view body);

/// The parameter schema document served at GET /api/schema.
const std::string& schema_json();

/// Response header carrying the effective seed of a render.
inline constexpr const char* kSeedHeader = "X-Thunder-Seed";

/// Local HTTP front end: /healthz, /api/schema, /api/render and static UI files.
class ThunderService {
 public:
  explicit ThunderService(ServiceOptions options);
  ~ThunderService();
  ThunderService(const ThunderService&) = delete;
  ThunderService& operator=(const ThunderService&) = delete;

  /// Binds the listening socket. Returns false if the address is unavailable.
  bool bind();
  /// Serves until stop() is called. Requires a successful bind().
  void run();
  /// Stops accepting connections and waits for in-flight handlers.
  void stop();

  /// Bound port (meaningful after bind()).
  int port() const noexcept;
  bool running() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace thunder::service
