#ifndef NEUROMOD_SERVICE_HPP
#define NEUROMOD_SERVICE_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include <json.hpp>

namespace neuromod::service {

inline constexpr std::size_t kMaxCurveSamples = 20000;
inline constexpr std::size_t kMaxScanSteps = 200000;

struct Reply {
  int status = 200;
  nlohmann::json body;
};

using Query = std::multimap<std::string, std::string>;

// Route handlers, independent of the HTTP transport.
Reply presets();
Reply curves(const Query& query);
Reply scan(const std::string& body);

/// Stateless JSON API over loopback. Optionally serves a static UI bundle.
class ExplorerServer {
 public:
  explicit ExplorerServer(std::filesystem::path static_dir = {});
  ~ExplorerServer();
  ExplorerServer(const ExplorerServer&) = delete;
  ExplorerServer& operator=(const ExplorerServer&) = delete;

  /// Binds without serving; port 0 picks a free port. Returns the bound
  /// port, or -1 on failure.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace neuromod::service

#endif  // NEUROMOD_SERVICE_HPP
