#include "qroute/mock_sampler.hpp"

#include <httplib.h>

#include "qroute/decomposition.hpp"
#include "qroute/remote.hpp"

namespace qroute {

MockSamplerService::MockSamplerService(MockSamplerOptions options)
    : options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  server_->Post(options_.path, [this](const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    if (options_.delay.count() > 0) std::this_thread::sleep_for(options_.delay);
    if (options_.fail_status != 0) {
      res.status = options_.fail_status;
      res.set_content("{\"error\": \"unavailable\"}", "application/json");
      return;
    }
    if (options_.garbage) {
      res.set_content("{\"samples\": [{\"bits\": 17}]", "application/json");
      return;
    }
    try {
      const RemoteRequest request = decode_request(req.body);
      const QuboProblem q = to_qubo(request);
      const Sample best = solve_subqubo_exhaustive(q);
      RemoteSample rs;
      rs.bits.reserve(best.bits.size());
      for (auto b : best.bits) rs.bits.push_back(b ? '1' : '0');
      rs.energy = best.energy + options_.energy_error;
      rs.occurrences = request.num_reads;
      RemoteResponse response;
      response.samples.push_back(std::move(rs));
      response.access_time_us = options_.access_time_us;
      res.set_content(encode_response(response), "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(std::string("{\"error\": \"") + e.what() + "\"}", "application/json");
    }
  });
  if (options_.port == 0) {
    port_ = server_->bind_to_any_port(options_.host);
  } else {
    port_ = server_->bind_to_port(options_.host, options_.port) ? options_.port : -1;
  }
  if (port_ <= 0) throw SolverError("mock sampler could not bind " + options_.host);
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

MockSamplerService::~MockSamplerService() { stop(); }

std::string MockSamplerService::endpoint() const {
  return "http://" + options_.host + ":" + std::to_string(port_) + options_.path;
}

void MockSamplerService::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace qroute
