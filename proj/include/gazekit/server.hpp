#pragma once

#include <memory>
#include <string>

namespace gazekit {

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8080;            // 0 picks an ephemeral port
  std::string data_dir = "gazekit-data";
  std::string static_dir;     // UI assets mounted at "/" when set
};

/// Defaults from GAZEKIT_PORT and GAZEKIT_DATA_DIR when set.
ServerOptions server_options_from_env();

/// HTTP+JSON front end over a set of independent sessions.
class Server {
 public:
  /// Creates the data directory if needed. Throws DataDirUnwritable.
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds the socket and returns the bound port. Throws PortInUse.
  int bind();
  /// Serves until stop(); call bind() first.
  void run();
  void stop();
  /// Blocks until the server accepts connections.
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gazekit
