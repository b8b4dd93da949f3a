#include "qroute/remote.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include <httplib.h>
#include <json.hpp>

#include "stopwatch.hpp"

namespace qroute {

using nlohmann::json;

const char* to_string(RemoteErrorKind kind) {
  switch (kind) {
    case RemoteErrorKind::Timeout: return "timeout";
    case RemoteErrorKind::Unreachable: return "unreachable";
    case RemoteErrorKind::HttpStatus: return "http status";
    case RemoteErrorKind::MalformedResponse: return "malformed response";
    case RemoteErrorKind::InvalidEndpoint: return "invalid endpoint";
  }
  return "unknown";
}

RemoteError::RemoteError(RemoteErrorKind kind, const std::string& what) : SolverError(what), kind_(kind) {}

std::string encode_request(const QuboProblem& q, std::size_t num_reads) {
  json terms = json::array();
  for (const auto& [k, v] : q.coefficients()) terms.push_back({k.first, k.second, v});
  json body = {{"dim", q.dim()}, {"terms", std::move(terms)}, {"offset", q.offset()}, {"num_reads", num_reads}};
  return body.dump();
}

RemoteRequest decode_request(const std::string& body) {
  RemoteRequest r;
  try {
    const json j = json::parse(body);
    r.dim = j.at("dim").get<std::size_t>();
    r.offset = j.value("offset", 0.0);
    r.num_reads = j.value("num_reads", std::size_t{1});
    for (const auto& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 3) throw InvalidInput("each term must be [i, j, coeff]");
      r.terms.push_back({t[0].get<std::size_t>(), t[1].get<std::size_t>(), t[2].get<double>()});
    }
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("bad sampler request: ") + e.what());
  }
  return r;
}

QuboProblem to_qubo(const RemoteRequest& request) {
  QuboProblem q(request.dim);
  q.add_offset(request.offset);
  for (const auto& t : request.terms) q.add_term(t.i, t.j, t.value);
  return q;
}

std::string encode_response(const RemoteResponse& response) {
  json samples = json::array();
  for (const auto& s : response.samples)
    samples.push_back({{"bits", s.bits}, {"energy", s.energy}, {"occurrences", s.occurrences}});
  json body = {{"samples", std::move(samples)}, {"timing", {{"access_time_us", response.access_time_us}}}};
  return body.dump();
}

RemoteResponse decode_response(const std::string& body) {
  RemoteResponse r;
  try {
    const json j = json::parse(body);
    for (const auto& s : j.at("samples")) {
      RemoteSample rs;
      rs.bits = s.at("bits").get<std::string>();
      rs.energy = s.at("energy").get<double>();
      rs.occurrences = s.value("occurrences", std::size_t{1});
      r.samples.push_back(std::move(rs));
    }
    if (j.contains("timing")) r.access_time_us = j["timing"].value("access_time_us", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw RemoteError(RemoteErrorKind::MalformedResponse, std::string("cannot decode sampler response: ") + e.what());
  }
  return r;
}

Endpoint parse_endpoint(const std::string& url) {
  static const std::regex pattern(R"(^(http)://([^/:]+)(?::(\d+))?(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(url, m, pattern))
    throw RemoteError(RemoteErrorKind::InvalidEndpoint, "unsupported endpoint '" + url + "' (expected http://host[:port][/path])");
  Endpoint e;
  e.scheme = m[1].str();
  e.host = m[2].str();
  e.port = m[3].matched ? std::stoi(m[3].str()) : 80;
  e.path = m[4].matched ? m[4].str() : "/";
  return e;
}

RemoteResult sample_remote(const QuboProblem& q, const std::string& endpoint, std::size_t num_reads,
                           std::chrono::milliseconds timeout) {
  const Endpoint ep = parse_endpoint(endpoint);
  httplib::Client client(ep.host, ep.port);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);

  Stopwatch clock;
  auto res = client.Post(ep.path, encode_request(q, num_reads), "application/json");
  if (!res) {
    const auto err = res.error();
    const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                           (err == httplib::Error::Read && clock.seconds() * 1000.0 >= 0.9 * static_cast<double>(timeout.count()));
    throw RemoteError(timed_out ? RemoteErrorKind::Timeout : RemoteErrorKind::Unreachable,
                      endpoint + ": " + httplib::to_string(err));
  }
  if (res->status != 200)
    throw RemoteError(RemoteErrorKind::HttpStatus, endpoint + " answered HTTP " + std::to_string(res->status));

  const RemoteResponse response = decode_response(res->body);
  RemoteResult out;
  out.access_time_us = response.access_time_us;
  for (const auto& rs : response.samples) {
    if (rs.bits.size() != q.dim())
      throw RemoteError(RemoteErrorKind::MalformedResponse,
                        "sample has " + std::to_string(rs.bits.size()) + " bits, expected " + std::to_string(q.dim()));
    Bits bits(q.dim());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (rs.bits[i] != '0' && rs.bits[i] != '1')
        throw RemoteError(RemoteErrorKind::MalformedResponse, "sample bits must be '0' or '1'");
      bits[i] = rs.bits[i] == '1' ? 1 : 0;
    }
    Sample s = make_sample(q, std::move(bits));
    if (std::abs(s.energy - rs.energy) > 1e-9 * std::max(1.0, std::abs(s.energy))) ++out.energy_corrections;
    out.samples.push_back(std::move(s));
  }
  std::stable_sort(out.samples.begin(), out.samples.end(),
                   [](const Sample& a, const Sample& b) { return a.energy < b.energy; });
  return out;
}

}  // namespace qroute
