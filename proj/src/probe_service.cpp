#include "ecoprobe/probe_service.hpp"

#include <chrono>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "ecoprobe/trace_io.hpp"

namespace ecoprobe {

using nlohmann::json;

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input: return 400;
    case ErrorCode::not_found: return 404;
    case ErrorCode::conflict: return 409;
    case ErrorCode::internal: return 500;
  }
  return 500;
}

ApiResponse error_response(ErrorCode code, const std::string& message) {
  json j{{"error", {{"code", to_string(code)}, {"message", message}}}};
  return ApiResponse{http_status(code), "application/json", j.dump()};
}

namespace {

ApiResponse ok_json(const json& j) { return ApiResponse{200, "application/json", j.dump()}; }

std::vector<std::string_view> path_parts(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    if (path.front() == '/') {
      path.remove_prefix(1);
      continue;
    }
    const auto slash = path.find('/');
    parts.push_back(path.substr(0, slash));
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash);
  }
  return parts;
}

json parse_body(const std::string& body) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    invalid(fmt::format("malformed JSON body: {}", e.what()));
  }
}

}  // namespace

ProbeApi::ProbeApi(ProbeStore& store, const VehicleCatalog& catalog, ServiceConfig config)
    : store_(store), catalog_(catalog), config_(std::move(config)) {
  config_.report.prices.validate();
  config_.detector.validate();
}

UnixMs ProbeApi::now(const ApiRequest& req) const {
  if (auto it = req.query.find("now"); it != req.query.end()) {
    const auto v = csv::parse_int(it->second);
    if (!v || *v <= 0) invalid("now must be a positive Unix millisecond timestamp");
    return *v;
  }
  if (config_.clock) return config_.clock();
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

ApiResponse ProbeApi::handle(const ApiRequest& req) const {
  try {
    const auto parts = path_parts(req.path);
    const auto& m = req.method;
    if (parts.size() == 1 && parts[0] == "trips" && m == "GET") return get_trips();
    if (parts.size() == 2 && parts[0] == "trips" && m == "DELETE") {
      return delete_trip(std::string(parts[1]), req);
    }
    if (parts.size() == 1 && parts[0] == "vehicle" && m == "GET") return get_vehicle();
    if (parts.size() == 1 && parts[0] == "vehicle" && m == "PUT") return put_vehicle(req);
    if (parts.size() == 1 && parts[0] == "vehicles" && m == "GET") return get_vehicles();
    if (parts.size() == 1 && parts[0] == "tabs" && m == "GET") return get_tabs();
    if (parts.size() == 2 && parts[0] == "summary" && m == "GET") {
      return get_summary(std::string(parts[1]), req);
    }
    if (parts.size() == 1 && parts[0] == "events" && m == "POST") return post_events(req);
    if (parts.size() == 2 && parts[0] == "log" && parts[1] == "export" && m == "GET") {
      return export_log();
    }
    if (parts.size() == 1 && parts[0] == "traces" && m == "POST") return post_traces(req);
    return error_response(ErrorCode::not_found, fmt::format("no route for {} {}", m, req.path));
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  } catch (const std::exception& e) {
    return error_response(ErrorCode::internal, e.what());
  }
}

ApiResponse ProbeApi::get_trips() const {
  const auto state = store_.snapshot();
  json arr = json::array();
  for (const auto& v : trip_views(state, catalog_, config_.report.prices)) {
    arr.push_back(json_view::trip(v, config_.export_coordinates));
  }
  return ok_json(arr);
}

ApiResponse ProbeApi::delete_trip(const std::string& id, const ApiRequest& req) const {
  store_.delete_trip(now(req), id);
  return ok_json(json{{"deleted", id}});
}

ApiResponse ProbeApi::get_vehicle() const {
  const auto choice = store_.snapshot().vehicle_or_default();
  return ok_json(json{{"vehicle", json_view::vehicle(catalog_.at(choice.category, choice.powertrain))}});
}

ApiResponse ProbeApi::put_vehicle(const ApiRequest& req) const {
  const auto body = parse_body(req.body);
  if (!body.is_object() || !body.contains("category") || !body.contains("powertrain") ||
      !body["category"].is_string() || !body["powertrain"].is_string()) {
    invalid("body must be {\"category\": ..., \"powertrain\": ...}");
  }
  const auto cat_name = body["category"].get<std::string>();
  const auto pt_name = body["powertrain"].get<std::string>();
  const auto category = parse_vehicle_category(cat_name);
  const auto powertrain = parse_powertrain(pt_name);
  if (!category) invalid(fmt::format("unknown vehicle category '{}'", cat_name));
  if (!powertrain) invalid(fmt::format("unknown powertrain '{}'", pt_name));
  const auto& profile = catalog_.at(*category, *powertrain);
  store_.set_vehicle(now(req), {*category, *powertrain});
  return ok_json(json{{"vehicle", json_view::vehicle(profile)}});
}

ApiResponse ProbeApi::get_vehicles() const {
  json arr = json::array();
  for (const auto& v : catalog_.profiles()) arr.push_back(json_view::vehicle(v));
  return ok_json(arr);
}

ApiResponse ProbeApi::get_tabs() const {
  const auto order = store_.snapshot().display_order.value_or(DisplayOrder::carbon_first);
  json tabs = json::array();
  for (auto t : tab_sequence(order)) tabs.push_back(to_string(t));
  return ok_json(json{{"order", to_string(order)}, {"tabs", tabs}});
}

ApiResponse ProbeApi::get_summary(const std::string& metric_text, const ApiRequest& req) const {
  const auto metric = parse_metric(metric_text);
  if (!metric) invalid(fmt::format("unknown metric '{}', expected cost or carbon", metric_text));
  auto window = ReportWindow::all;
  if (auto it = req.query.find("window"); it != req.query.end()) {
    const auto w = parse_report_window(it->second);
    if (!w) invalid(fmt::format("unknown window '{}', expected all or current", it->second));
    window = *w;
  }
  const auto state = store_.snapshot();
  const auto report = metric_report(state, catalog_, config_.report, *metric, window, now(req));
  return ok_json(json_view::report(report));
}

ApiResponse ProbeApi::post_events(const ApiRequest& req) const {
  const auto body = parse_body(req.body);
  if (!body.is_array()) invalid("body must be a JSON array of events");
  std::vector<InteractionEvent> events;
  for (std::size_t i = 0; i < body.size(); ++i) {
    const auto& e = body[i];
    const bool shape_ok = e.is_object() && e.contains("ts") && e["ts"].is_number_integer() &&
                          e.contains("event") && e["event"].is_string();
    const auto tag = shape_ok ? parse_ui_event_tag(e["event"].get<std::string>()) : std::nullopt;
    const auto ts = shape_ok ? e["ts"].get<UnixMs>() : UnixMs{0};
    if (!tag || ts <= 0) invalid(fmt::format("invalid event at index {}", i));
    events.push_back({ts, *tag});
  }
  store_.record_events(now(req), events);
  return ok_json(json{{"recorded", events.size()}});
}

ApiResponse ProbeApi::export_log() const {
  return ApiResponse{200, "text/csv", serialize_interaction_log(store_.snapshot().events)};
}

ApiResponse ProbeApi::post_traces(const ApiRequest& req) const {
  const auto parsed = parse_trace(req.body);
  const auto trips = detect_trips(parsed.trace, config_.detector);
  const UnixMs ts = now(req);
  json ids = json::array();
  std::size_t other = 0;
  for (const auto& t : trips) {
    if (t.mode != TravelMode::automotive) {
      ++other;
      continue;
    }
    ids.push_back(store_.add_trip(ts, t));
  }
  return ok_json(json{{"trips_added", ids.size()},
                      {"trip_ids", ids},
                      {"non_automotive_trips", other},
                      {"skipped_lines", parsed.skipped_lines}});
}

bool is_loopback_host(const std::string& host) {
  return host == "127.0.0.1" || host == "localhost" || host == "::1" || host.rfind("127.", 0) == 0;
}

struct ProbeServer::Impl {
  httplib::Server server;
};

ProbeServer::ProbeServer(const ProbeApi& api) : api_(api), impl_(std::make_unique<Impl>()) {
  const auto& cfg = api_.config();
  if (!is_loopback_host(cfg.host) && !cfg.allow_remote) {
    invalid(fmt::format("refusing to bind non-loopback host {} without allow_remote", cfg.host));
  }
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    ApiRequest r{req.method, req.path, {}, req.body};
    for (const auto& [k, v] : req.params) r.query[k] = v;
    const auto out = api_.handle(r);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  impl_->server.Get(".*", forward);
  impl_->server.Put(".*", forward);
  impl_->server.Post(".*", forward);
  impl_->server.Delete(".*", forward);
}

ProbeServer::~ProbeServer() { stop(); }

int ProbeServer::start() {
  const auto& cfg = api_.config();
  port_ = cfg.port == 0 ? impl_->server.bind_to_any_port(cfg.host)
                        : (impl_->server.bind_to_port(cfg.host, cfg.port) ? cfg.port : -1);
  if (port_ < 0) fail(ErrorCode::internal, fmt::format("cannot bind {}:{}", cfg.host, cfg.port));
  thread_ = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void ProbeServer::run() {
  const auto& cfg = api_.config();
  port_ = cfg.port == 0 ? impl_->server.bind_to_any_port(cfg.host)
                        : (impl_->server.bind_to_port(cfg.host, cfg.port) ? cfg.port : -1);
  if (port_ < 0) fail(ErrorCode::internal, fmt::format("cannot bind {}:{}", cfg.host, cfg.port));
  impl_->server.listen_after_bind();
}

void ProbeServer::stop() {
  if (impl_) impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace ecoprobe
