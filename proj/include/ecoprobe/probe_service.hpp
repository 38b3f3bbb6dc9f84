#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <thread>

#include "ecoprobe/emission_cost.hpp"
#include "ecoprobe/probe_report.hpp"
#include "ecoprobe/probe_store.hpp"
#include "ecoprobe/trip_detector.hpp"

namespace ecoprobe {

inline constexpr int kDefaultServicePort = 4815;

struct ServiceConfig {
  std::string host{"127.0.0.1"};
  int port{kDefaultServicePort};
  bool allow_remote{false};        // required to bind anything but loopback
  bool export_coordinates{false};  // trip endpoints are omitted from responses otherwise
  ReportSettings report;
  DetectorConfig detector;
  std::function<UnixMs()> clock;   // system clock when empty
};

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct ApiResponse {
  int status{200};
  std::string content_type{"application/json"};
  std::string body;
};

int http_status(ErrorCode code);
ApiResponse error_response(ErrorCode code, const std::string& message);

// Transport-independent request handling over a store; holds no state of its own.
class ProbeApi {
 public:
  ProbeApi(ProbeStore& store, const VehicleCatalog& catalog, ServiceConfig config);

  ApiResponse handle(const ApiRequest& req) const;
  const ServiceConfig& config() const { return config_; }

 private:
  UnixMs now(const ApiRequest& req) const;
  ApiResponse get_trips() const;
  ApiResponse delete_trip(const std::string& id, const ApiRequest& req) const;
  ApiResponse get_vehicle() const;
  ApiResponse put_vehicle(const ApiRequest& req) const;
  ApiResponse get_vehicles() const;
  ApiResponse get_tabs() const;
  ApiResponse get_summary(const std::string& metric, const ApiRequest& req) const;
  ApiResponse post_events(const ApiRequest& req) const;
  ApiResponse export_log() const;
  ApiResponse post_traces(const ApiRequest& req) const;

  ProbeStore& store_;
  const VehicleCatalog& catalog_;
  ServiceConfig config_;
};

bool is_loopback_host(const std::string& host);

// HTTP/1.1 front end for ProbeApi.
class ProbeServer {
 public:
  // Throws Error(invalid_input) for a non-loopback host without allow_remote.
  explicit ProbeServer(const ProbeApi& api);
  ~ProbeServer();
  ProbeServer(const ProbeServer&) = delete;
  ProbeServer& operator=(const ProbeServer&) = delete;

  // Binds (port 0 picks a free port) and serves on a background thread.
  int start();
  // Binds and serves on the calling thread until stop().
  void run();
  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  const ProbeApi& api_;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
  int port_{0};
};

}  // namespace ecoprobe
