#pragma once

// In-process stand-in for the remote sampling service. Every request is
// answered with the exhaustive minimum of the posted QUBO.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace qroute {

struct MockSamplerOptions {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port
  std::string path = "/sample";
  // Added to every reported energy; the client must notice.
  double energy_error = 0.0;
  // Non-zero answers every request with this HTTP status.
  int fail_status = 0;
  // Sleep before answering.
  std::chrono::milliseconds delay{0};
  // Reply with a body that is not valid protocol JSON.
  bool garbage = false;
  std::uint64_t access_time_us = 20;
};

class MockSamplerService {
 public:
  explicit MockSamplerService(MockSamplerOptions options = {});
  ~MockSamplerService();
  MockSamplerService(const MockSamplerService&) = delete;
  MockSamplerService& operator=(const MockSamplerService&) = delete;

  int port() const { return port_; }
  std::string endpoint() const;
  std::size_t requests() const { return requests_.load(); }
  void stop();

 private:
  MockSamplerOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<std::size_t> requests_{0};
};

}  // namespace qroute
