#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <thread>

#include "dalert/api.hpp"

namespace dalert {

// Request/response channel to a server. Implementations throw
// Error(Unreachable) when no response arrives.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual ApiResponse send(const ApiRequest& request) = 0;
};

// Calls the router directly, no network involved.
class InProcessTransport : public Transport {
 public:
  explicit InProcessTransport(const ApiRouter& router) : router_(router) {}
  ApiResponse send(const ApiRequest& request) override { return router_.handle(request); }

 private:
  const ApiRouter& router_;
};

// Plain HTTP/1.1 client. `base_url` is "http://host:port".
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(const std::string& base_url,
                         std::chrono::milliseconds read_timeout = std::chrono::milliseconds(kMaxPollTimeoutMs + 5000));
  ~HttpTransport() override;
  ApiResponse send(const ApiRequest& request) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Serves an ApiRouter over HTTP.
class HttpServer {
 public:
  explicit HttpServer(const ApiRouter& router);
  ~HttpServer();

  // Port 0 picks a free port. Returns the bound port; throws
  // Error(InvalidInput) when binding fails.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void run();
  // run() on a background thread.
  void start();
  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace dalert
