// Stand-alone mock of the remote sampling service, for trying the remote
// backend without hardware access.

#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "qroute/mock_sampler.hpp"

namespace {
volatile std::sig_atomic_t stop_requested = 0;
void on_signal(int) { stop_requested = 1; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mock sampling service: answers each QUBO with its exhaustive minimum"};
  qroute::MockSamplerOptions options;
  options.port = 8765;
  app.add_option("--host", options.host)->capture_default_str();
  app.add_option("--port", options.port)->capture_default_str();
  app.add_option("--path", options.path)->capture_default_str();
  app.add_option("--energy-error", options.energy_error, "added to every reported energy");
  app.add_option("--fail-status", options.fail_status, "answer every request with this HTTP status");
  CLI11_PARSE(app, argc, argv);

  try {
    qroute::MockSamplerService service(options);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    std::cout << "listening on " << service.endpoint() << std::endl;
    while (!stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    std::cout << "served " << service.requests() << " requests" << std::endl;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
