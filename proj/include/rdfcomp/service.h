#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "rdfcomp/store.h"

namespace httplib {
class Server;
}

namespace rdfcomp::service {

struct ServiceConfig {
  // default for POST /query when the request has no config.timeoutMs
  std::chrono::milliseconds entailmentTimeout{10'000};
  std::size_t maxSteps = 1'000'000;
};

// JSON API under /api/v1 over a Store.
class HttpService {
 public:
  HttpService(store::Store& store, ServiceConfig config = {});
  ~HttpService();

  // Blocks until stop(). Returns false if the address cannot be bound.
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it (or -1); serve with listenAfterBind.
  int bindToAnyPort(const std::string& host);
  bool listenAfterBind();
  void waitUntilReady() const;
  void stop();

 private:
  void routes();

  store::Store& store_;
  ServiceConfig config_;
  std::unique_ptr<httplib::Server> server_;
};

// host:port; ":8080" and "8080" bind all interfaces.
std::pair<std::string, int> parseBindAddress(const std::string& text);

}  // namespace rdfcomp::service
