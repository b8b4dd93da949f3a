#pragma once

// Client for an annealer-style sampling service and the JSON protocol it
// speaks.
//
//   POST <endpoint>
//   request : {"dim": int, "terms": [[i, j, coeff], ...], "offset": real,
//              "num_reads": int}
//   response: {"samples": [{"bits": "0101...", "energy": real,
//                           "occurrences": int}, ...],
//              "timing": {"access_time_us": int}}
//
// "energy" is x^T Q x without the offset. The client re-evaluates every
// sample and keeps its own value when the service disagrees.

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "qroute/error.hpp"
#include "qroute/qubo.hpp"

namespace qroute {

enum class RemoteErrorKind { Timeout, Unreachable, HttpStatus, MalformedResponse, InvalidEndpoint };

const char* to_string(RemoteErrorKind kind);

class RemoteError : public SolverError {
 public:
  RemoteError(RemoteErrorKind kind, const std::string& what);
  RemoteErrorKind kind() const { return kind_; }

 private:
  RemoteErrorKind kind_;
};

struct RemoteRequest {
  std::size_t dim = 0;
  std::vector<QuboTerm> terms;
  double offset = 0.0;
  std::size_t num_reads = 1;
};

struct RemoteSample {
  std::string bits;
  double energy = 0.0;
  std::size_t occurrences = 1;
};

struct RemoteResponse {
  std::vector<RemoteSample> samples;
  std::uint64_t access_time_us = 0;
};

std::string encode_request(const QuboProblem& q, std::size_t num_reads);
RemoteRequest decode_request(const std::string& body);  // throws InvalidInput
QuboProblem to_qubo(const RemoteRequest& request);
std::string encode_response(const RemoteResponse& response);
RemoteResponse decode_response(const std::string& body);  // throws RemoteError(MalformedResponse)

struct RemoteResult {
  std::vector<Sample> samples;  // ascending energy
  std::uint64_t access_time_us = 0;
  std::size_t energy_corrections = 0;
};

RemoteResult sample_remote(const QuboProblem& q, const std::string& endpoint, std::size_t num_reads,
                           std::chrono::milliseconds timeout);

struct Endpoint {
  std::string scheme;
  std::string host;
  int port = 80;
  std::string path;
};

Endpoint parse_endpoint(const std::string& url);  // throws RemoteError(InvalidEndpoint)

}  // namespace qroute
