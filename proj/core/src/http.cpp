#include "dalert/http.hpp"

#include <httplib.h>

namespace dalert {

namespace {

std::string with_query(const ApiRequest& r) {
  if (r.query.empty()) return r.path;
  httplib::Params params(r.query.begin(), r.query.end());
  return httplib::append_query_params(r.path, params);
}

}  // namespace

struct HttpTransport::Impl {
  explicit Impl(const std::string& url) : client(url) {}
  httplib::Client client;
};

HttpTransport::HttpTransport(const std::string& base_url, std::chrono::milliseconds read_timeout)
    : impl_(std::make_unique<Impl>(base_url)) {
  if (!impl_->client.is_valid()) throw Error(ErrorCode::InvalidInput, base_url, "not a usable server URL");
  impl_->client.set_connection_timeout(std::chrono::seconds(5));
  impl_->client.set_read_timeout(read_timeout);
  impl_->client.set_keep_alive(true);
  impl_->client.set_tcp_nodelay(true);
}

HttpTransport::~HttpTransport() = default;

ApiResponse HttpTransport::send(const ApiRequest& request) {
  const std::string target = with_query(request);
  const std::string content_type = request.path == "/cap" ? "application/xml" : "application/json";
  httplib::Result result;
  if (request.method == "GET") {
    result = impl_->client.Get(target);
  } else if (request.method == "POST") {
    result = impl_->client.Post(target, request.body, content_type);
  } else {
    throw Error(ErrorCode::InvalidInput, request.method, "unsupported method");
  }
  if (!result) throw Error(ErrorCode::Unreachable, target, httplib::to_string(result.error()));
  ApiResponse response;
  response.status = result->status;
  response.body = result->body;
  response.content_type = result->get_header_value("Content-Type");
  return response;
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(const ApiRouter& router) : impl_(std::make_unique<Impl>()) {
  auto handler = [&router](const httplib::Request& req, httplib::Response& res) {
    ApiRequest request{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) request.query[k] = v;
    ApiResponse response = router.handle(request);
    res.status = response.status;
    res.set_content(response.body, response.content_type);
  };
  impl_->server.Get(R"(/.*)", handler);
  impl_->server.Post(R"(/.*)", handler);
  impl_->server.set_tcp_nodelay(true);
  // The library default adds SO_REUSEPORT, which would let a second server
  // share a busy port instead of failing.
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
  } else {
    port_ = impl_->server.bind_to_port(host, port) ? port : -1;
  }
  if (port_ <= 0) throw Error(ErrorCode::InvalidInput, host + ":" + std::to_string(port), "cannot bind");
  return port_;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::start() {
  thread_ = std::thread([this] { run(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace dalert
