#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "ecoprobe/analytics.hpp"
#include "ecoprobe/probe_report.hpp"
#include "ecoprobe/probe_service.hpp"
#include "ecoprobe/probe_store.hpp"
#include "ecoprobe/stats.hpp"
#include "ecoprobe/trace_simulator.hpp"
#include "ecoprobe/trip_detector.hpp"

#ifndef ECOPROBE_DEFAULT_CATALOG
#define ECOPROBE_DEFAULT_CATALOG "data/vehicle_catalog.csv"
#endif

namespace ecoprobe::cli {

using nlohmann::json;

namespace {

enum class Format { table, csv, json };

struct Options {
  std::string store_path{"ecoprobe.journal"};
  std::string catalog_path{ECOPROBE_DEFAULT_CATALOG};
  std::string format{"table"};
  PriceConfig prices;
  DetectorConfig detector;
  std::optional<int> utc_offset_minutes;
  std::optional<UnixMs> now;
  std::optional<std::uint64_t> order_seed;
  bool no_fsync{false};

  // subcommand arguments
  std::string path;
  std::string second_path;
  std::vector<std::string> paths;
  std::string metric;
  std::string window{"all"};
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string truth_path;
  double overlap{0.5};
  std::string test;
  std::string method{"auto"};
  std::string host{"127.0.0.1"};
  int port{kDefaultServicePort};
  bool allow_remote{false};
  bool export_coordinates{false};
};

// Flag values that parse but fall outside their type's range.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid(fmt::format("cannot read {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream outf(path, std::ios::binary | std::ios::trunc);
  if (!outf || !(outf << content)) invalid(fmt::format("cannot write {}", path));
}

Format format_of(const Options& o) {
  if (o.format == "csv") return Format::csv;
  if (o.format == "json") return Format::json;
  return Format::table;
}

UnixMs now_of(const Options& o) {
  if (o.now) return *o.now;
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

ReportSettings report_settings(const Options& o) {
  ReportSettings s;
  s.prices = o.prices;
  s.utc_offset_minutes = o.utc_offset_minutes;
  return s;
}

ProbeStore open_store(const Options& o) {
  StoreOptions so;
  so.fsync = !o.no_fsync;
  so.order_seed = o.order_seed;
  return ProbeStore::open(o.store_path, so);
}

std::string fmt_num(double v) { return csv::format_double(v); }

int cmd_ingest(const Options& o, std::ostream& out) {
  const auto parsed = parse_trace(read_file(o.path));
  const auto trips = detect_trips(parsed.trace, o.detector);
  auto store = open_store(o);
  std::vector<std::string> ids;
  std::size_t other = 0;
  for (const auto& t : trips) {
    if (t.mode != TravelMode::automotive) {
      ++other;
      continue;
    }
    ids.push_back(store.add_trip(now_of(o), t));
  }
  switch (format_of(o)) {
    case Format::json:
      out << json{{"trips_added", ids.size()},
                  {"trip_ids", ids},
                  {"non_automotive_trips", other},
                  {"skipped_lines", parsed.skipped_lines}}
                 .dump()
          << "\n";
      break;
    case Format::csv:
      out << "trips_added,non_automotive_trips,skipped_lines\n"
          << ids.size() << "," << other << "," << parsed.skipped_lines << "\n";
      break;
    case Format::table:
      out << fmt::format("trips added: {}\nnon-automotive trips: {}\nskipped lines: {}\n", ids.size(),
                         other, parsed.skipped_lines);
      break;
  }
  return kExitOk;
}

int cmd_trips(const Options& o, const VehicleCatalog& catalog, std::ostream& out) {
  const auto store = open_store(o);
  const auto views = trip_views(store.snapshot(), catalog, o.prices);
  switch (format_of(o)) {
    case Format::json: {
      json arr = json::array();
      for (const auto& v : views) arr.push_back(json_view::trip(v, false));
      out << arr.dump() << "\n";
      break;
    }
    case Format::csv:
      out << "id,start_ts,end_ts,distance_miles,mode,cost_usd,co2_kg,potential_cost_saving_usd,"
             "potential_co2_saving_kg\n";
      for (const auto& v : views) {
        const auto& s = v.summary;
        out << fmt::format("{},{},{},{:.3f},{},{},{},{},{}\n", v.trip.id, v.trip.start_ts,
                           v.trip.end_ts, v.trip.distance_miles, to_string(v.trip.mode),
                           s ? s->cost.to_cents_string() : "", s ? fmt::format("{:.3f}", s->co2.kg_rounded3()) : "",
                           s ? s->potential_cost_saving.to_cents_string() : "",
                           s ? fmt::format("{:.3f}", s->potential_co2_saving.kg_rounded3()) : "");
      }
      break;
    case Format::table:
      out << fmt::format("{:<12} {:>15} {:>15} {:>9} {:<11} {:>9} {:>9}\n", "id", "start_ts",
                         "end_ts", "miles", "mode", "cost", "co2_kg");
      for (const auto& v : views) {
        const auto& s = v.summary;
        out << fmt::format("{:<12} {:>15} {:>15} {:>9.3f} {:<11} {:>9} {:>9}\n", v.trip.id,
                           v.trip.start_ts, v.trip.end_ts, v.trip.distance_miles,
                           to_string(v.trip.mode), s ? "$" + s->cost.to_cents_string() : "-",
                           s ? fmt::format("{:.3f}", s->co2.kg_rounded3()) : "-");
      }
      if (views.empty()) out << "(no trips)\n";
      break;
  }
  return kExitOk;
}

MetricReport load_report(const Options& o, const VehicleCatalog& catalog) {
  const auto metric = parse_metric(o.metric);
  const auto window = parse_report_window(o.window);
  if (!metric) throw UsageError(fmt::format("unknown metric '{}'", o.metric));
  if (!window) throw UsageError(fmt::format("unknown window '{}'", o.window));
  const auto store = open_store(o);
  return metric_report(store.snapshot(), catalog, report_settings(o), *metric, *window, now_of(o));
}

int cmd_report(const Options& o, const VehicleCatalog& catalog, std::ostream& out) {
  const auto r = load_report(o, catalog);
  const auto& t = r.totals;
  switch (format_of(o)) {
    case Format::json: out << json_view::report(r).dump() << "\n"; break;
    case Format::csv:
      out << "metric,window,cost_usd,co2_kg,potential_cost_saving_usd,potential_co2_saving_kg,"
             "trip_count,goal_kind\n";
      out << fmt::format("{},{},{},{:.3f},{},{:.3f},{},{}\n", metric_name(r.metric),
                         to_string(r.window), t.cost.to_cents_string(), t.co2.kg_rounded3(),
                         t.potential_cost_saving.to_cents_string(),
                         t.potential_co2_saving.kg_rounded3(), t.trip_count, to_string(r.goal.kind));
      break;
    case Format::table:
      out << fmt::format("{} report ({} trips, window {})\n", metric_name(r.metric), t.trip_count,
                         to_string(r.window));
      out << fmt::format("  fuel cost:            ${}\n", t.cost.to_cents_string());
      out << fmt::format("  co2:                  {:.3f} kg\n", t.co2.kg_rounded3());
      out << fmt::format("  potential saving:     ${}\n", t.potential_cost_saving.to_cents_string());
      out << fmt::format("  potential co2 saving: {:.3f} kg\n", t.potential_co2_saving.kg_rounded3());
      break;
  }
  return kExitOk;
}

int cmd_goal(const Options& o, const VehicleCatalog& catalog, std::ostream& out) {
  Options cur = o;
  cur.window = "current";
  const auto r = load_report(cur, catalog);
  const auto& g = r.goal;
  switch (format_of(o)) {
    case Format::json: out << json_view::goal(g).dump() << "\n"; break;
    case Format::csv:
      out << "metric,kind,goal_cost_usd,goal_co2_kg,current_cost_usd,current_co2_kg,message\n";
      out << fmt::format("{},{},{},{},{},{:.3f},{}\n", metric_name(r.metric), to_string(g.kind),
                         g.goal ? g.goal->cost.to_cents_string() : "",
                         g.goal ? fmt::format("{:.3f}", g.goal->co2.kg_rounded3()) : "",
                         g.current.cost.to_cents_string(), g.current.co2.kg_rounded3(),
                         g.message.value_or(""));
      break;
    case Format::table:
      out << fmt::format("goal ({}): {}\n", metric_name(r.metric), to_string(g.kind));
      if (g.goal) {
        out << fmt::format("  previous period: ${} / {:.3f} kg\n", g.goal->cost.to_cents_string(),
                           g.goal->co2.kg_rounded3());
      }
      out << fmt::format("  current period:  ${} / {:.3f} kg\n", g.current.cost.to_cents_string(),
                         g.current.co2.kg_rounded3());
      if (g.message) out << "  " << *g.message << "\n";
      break;
  }
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  auto scenario = parse_scenario_json(read_file(o.path));
  if (o.seed) scenario.seed = *o.seed;
  const auto sim = simulate(scenario);
  const auto trace = simulation_trace_csv(sim);
  const auto truth = ground_truth_to_json(sim.truth);
  if (o.out_path.empty()) {
    out << trace;
    if (!o.truth_path.empty()) write_file(o.truth_path, truth);
    return kExitOk;
  }
  write_file(o.out_path, trace);
  write_file(o.truth_path.empty() ? o.out_path + ".truth.json" : o.truth_path, truth);
  return kExitOk;
}

int cmd_eval_detect(const Options& o, std::ostream& out) {
  const auto parsed = parse_trace(read_file(o.path));
  const auto truth = parse_ground_truth_json(read_file(o.second_path));
  const auto detected = detect_trips(parsed.trace, o.detector);
  std::vector<Trip> automotive;
  std::copy_if(detected.begin(), detected.end(), std::back_inserter(automotive),
               [](const Trip& t) { return t.mode == TravelMode::automotive; });
  const auto ev = evaluate_detection(automotive, truth.trips, o.overlap);
  const auto err = ev.median_distance_error_fraction;
  switch (format_of(o)) {
    case Format::json:
      out << json{{"detected", ev.detected},
                  {"truth", ev.truth},
                  {"matched", ev.matched},
                  {"precision", ev.precision},
                  {"recall", ev.recall},
                  {"zero_detections", ev.zero_detections},
                  {"median_distance_error_fraction", err ? json(*err) : json(nullptr)}}
                 .dump()
          << "\n";
      break;
    case Format::csv:
      out << "detected,truth,matched,precision,recall,median_distance_error_fraction\n";
      out << fmt::format("{},{},{},{},{},{}\n", ev.detected, ev.truth, ev.matched,
                         fmt_num(ev.precision), fmt_num(ev.recall), err ? fmt_num(*err) : "");
      break;
    case Format::table:
      out << fmt::format("detected {} / truth {} / matched {}\n", ev.detected, ev.truth, ev.matched);
      out << fmt::format("precision {:.4f}{}\nrecall    {:.4f}\n", ev.precision,
                         ev.zero_detections ? " (no detections)" : "", ev.recall);
      out << "median distance error "
          << (err ? fmt::format("{:.2f}%", *err * 100.0) : std::string("n/a")) << "\n";
      break;
  }
  return kExitOk;
}

int cmd_dwell(const Options& o, std::ostream& out) {
  json summary = json::array();
  std::string csv_out = "participant,tab,dwell_ms\n";
  std::string table;
  for (const auto& p : o.paths) {
    const auto parsed = parse_interaction_log(read_file(p));
    const auto report = compute_dwell(parsed.events);
    const std::string participant = std::filesystem::path(p).stem().string();
    json tabs = json::object();
    for (auto tab : {AppTab::trips, AppTab::carbon, AppTab::cost, AppTab::info, AppTab::log}) {
      tabs[std::string(to_string(tab))] = report.dwell(tab);
      csv_out += fmt::format("{},{},{}\n", participant, to_string(tab), report.dwell(tab));
    }
    summary.push_back({{"participant", participant},
                       {"dwell_ms", tabs},
                       {"session_count", report.session_count},
                       {"total_foreground_ms", report.total_foreground_ms},
                       {"skipped_lines", parsed.skipped_lines}});
    table += fmt::format("{}: {} sessions, {} ms foreground\n", participant, report.session_count,
                         report.total_foreground_ms);
    for (auto tab : {AppTab::trips, AppTab::carbon, AppTab::cost, AppTab::info, AppTab::log}) {
      table += fmt::format("  {:<7} {:>10} ms\n", to_string(tab), report.dwell(tab));
    }
  }
  switch (format_of(o)) {
    case Format::json: out << summary.dump() << "\n"; break;
    case Format::csv: out << csv_out; break;
    case Format::table: out << table; break;
  }
  return kExitOk;
}

// Two numeric columns with any header; or a dwell CSV (participant,tab,dwell_ms), which
// pairs cost against carbon dwell per participant.
std::pair<std::vector<double>, std::vector<double>> read_pairs(const std::string& text) {
  std::vector<double> x;
  std::vector<double> y;
  bool header = true;
  bool dwell = false;
  std::map<std::string, std::array<std::optional<double>, 2>> by_participant;
  csv::for_each_line(text, [&](std::string_view line, std::size_t line_no) {
    if (line.empty() || line.front() == '#') return;
    const auto f = csv::split(line);
    if (header) {
      header = false;
      dwell = line == "participant,tab,dwell_ms";
      if (!dwell && f.size() != 2) invalid("paired CSV must have exactly two columns");
      return;
    }
    if (dwell) {
      if (f.size() != 3) invalid(fmt::format("line {}: expected participant,tab,dwell_ms", line_no));
      const auto v = csv::parse_double(f[2]);
      if (!v) invalid(fmt::format("line {}: malformed dwell", line_no));
      if (f[1] == "cost") by_participant[std::string(f[0])][0] = *v;
      if (f[1] == "carbon") by_participant[std::string(f[0])][1] = *v;
      return;
    }
    const auto a = f.size() == 2 ? csv::parse_double(f[0]) : std::nullopt;
    const auto b = f.size() == 2 ? csv::parse_double(f[1]) : std::nullopt;
    if (!a || !b) invalid(fmt::format("line {}: expected two numbers", line_no));
    x.push_back(*a);
    y.push_back(*b);
  });
  for (const auto& [participant, v] : by_participant) {
    if (v[0] && v[1]) {
      x.push_back(*v[0]);
      y.push_back(*v[1]);
    }
  }
  return {x, y};
}

json result_json(const stats::TestResult& r) {
  json j{{"statistic", r.statistic},
         {"p_two_sided", r.p_two_sided},
         {"n_effective", r.n_effective},
         {"method", stats::to_string(r.method)}};
  if (r.df) j["df"] = *r.df;
  if (r.estimate) j["mean_difference"] = *r.estimate;
  if (r.ci95) j["ci95"] = {r.ci95->first, r.ci95->second};
  return j;
}

void print_result(std::ostream& out, Format fmt_, const std::string& label, const stats::TestResult& r) {
  switch (fmt_) {
    case Format::json: out << result_json(r).dump() << "\n"; break;
    case Format::csv:
      out << "test,statistic,p_two_sided,n_effective,method,df,ci_lo,ci_hi\n";
      out << fmt::format("{},{},{},{},{},{},{},{}\n", label, fmt_num(r.statistic),
                         fmt_num(r.p_two_sided), r.n_effective, stats::to_string(r.method),
                         r.df ? fmt_num(*r.df) : "", r.ci95 ? fmt_num(r.ci95->first) : "",
                         r.ci95 ? fmt_num(r.ci95->second) : "");
      break;
    case Format::table:
      if (r.method == stats::Method::t) {
        out << fmt::format("paired t-test: t = {:.4f}, df = {}, p = {:.4f}\n", r.statistic,
                           r.df.value_or(0.0), r.p_two_sided);
        out << fmt::format("mean difference {:.4f}, 95% CI [{:.4f}, {:.4f}]\n", r.estimate.value_or(0.0),
                           r.ci95->first, r.ci95->second);
      } else {
        out << fmt::format("wilcoxon signed-rank: W = {}, n = {}, p = {:.4f} ({})\n",
                           fmt_num(r.statistic), r.n_effective, r.p_two_sided,
                           stats::to_string(r.method));
      }
      break;
  }
}

int cmd_stats(const Options& o, std::ostream& out) {
  const auto text = read_file(o.path);
  const auto first_line = text.substr(0, text.find('\n'));
  const bool survey = first_line == kSurveyHeader || first_line == std::string(kSurveyHeader) + "\r";

  if (o.test == "ttest" && survey) {
    const auto results = survey_paired_tests(parse_survey(text).responses);
    json arr = json::array();
    std::string csv_out = "topic,item,pairs,mean_difference,t,df,p_two_sided,ci_lo,ci_hi,error\n";
    std::string table;
    for (const auto& r : results) {
      json j{{"topic", to_string(r.topic)}, {"item", to_string(r.item)}, {"pairs", r.pairs}};
      if (r.test) {
        j["test"] = result_json(*r.test);
        csv_out += fmt::format("{},{},{},{},{},{},{},{},{},\n", to_string(r.topic), to_string(r.item),
                               r.pairs, fmt_num(*r.test->estimate), fmt_num(r.test->statistic),
                               fmt_num(*r.test->df), fmt_num(r.test->p_two_sided),
                               fmt_num(r.test->ci95->first), fmt_num(r.test->ci95->second));
        table += fmt::format("{:<7} {:<14} n={:<3} mean={:+.2f} p={:.4f} CI=[{:.2f}, {:.2f}]\n",
                             to_string(r.topic), to_string(r.item), r.pairs, *r.test->estimate,
                             r.test->p_two_sided, r.test->ci95->first, r.test->ci95->second);
      } else {
        j["error"] = r.error;
        csv_out += fmt::format("{},{},{},,,,,,,{}\n", to_string(r.topic), to_string(r.item), r.pairs, r.error);
        table += fmt::format("{:<7} {:<14} n={:<3} {}\n", to_string(r.topic), to_string(r.item),
                             r.pairs, r.error);
      }
      arr.push_back(j);
    }
    switch (format_of(o)) {
      case Format::json: out << arr.dump() << "\n"; break;
      case Format::csv: out << csv_out; break;
      case Format::table: out << table; break;
    }
    return kExitOk;
  }

  const auto [x, y] = read_pairs(text);
  if (o.test == "ttest") {
    // columns are pre,post
    print_result(out, format_of(o), "ttest", stats::paired_t_test(x, y));
    return kExitOk;
  }
  stats::WilcoxonMethod method = stats::WilcoxonMethod::automatic;
  if (o.method == "exact") method = stats::WilcoxonMethod::exact;
  if (o.method == "normal") method = stats::WilcoxonMethod::normal;
  print_result(out, format_of(o), "wilcoxon", stats::wilcoxon_signed_rank(x, y, method));
  return kExitOk;
}

volatile std::sig_atomic_t g_stop = 0;

void on_signal(int) { g_stop = 1; }

int cmd_serve(const Options& o, const VehicleCatalog& catalog, std::ostream& out) {
  auto store = open_store(o);
  if (store.recovered_truncation()) {
    out << "journal recovered: " << *store.recovered_truncation() << "\n";
  }
  ServiceConfig cfg;
  cfg.host = o.host;
  cfg.port = o.port;
  cfg.allow_remote = o.allow_remote;
  cfg.export_coordinates = o.export_coordinates;
  cfg.report = report_settings(o);
  cfg.detector = o.detector;
  if (o.now) {
    const UnixMs fixed = *o.now;
    cfg.clock = [fixed] { return fixed; };
  }
  ProbeApi api(store, catalog, cfg);
  ProbeServer server(api);
  g_stop = 0;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  const int port = server.start();
  out << fmt::format("serving on http://{}:{}\n", o.host, port) << std::flush;
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  out << "stopped\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trip detection, fuel/CO2 accounting and study analytics for driving probes", "ecoprobe"};
  app.require_subcommand(1);
  Options o;

  app.add_option("--store", o.store_path, "Journal file")->envname("ECOPROBE_STORE");
  app.add_option("--catalog", o.catalog_path, "Vehicle catalog CSV")->envname("ECOPROBE_CATALOG");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--fuel-price", o.prices.fuel_usd_per_gal, "USD per gallon");
  app.add_option("--co2-per-gal", o.prices.co2_kg_per_gal, "kg CO2 per gallon");
  app.add_option("--min-auto-confidence", o.detector.min_auto_confidence);
  app.add_option("--start-speed", o.detector.start_speed_mps, "m/s");
  app.add_option("--end-dwell-ms", o.detector.end_dwell_ms);
  app.add_option("--min-trip-miles", o.detector.min_trip_distance_miles);
  app.add_option("--winding-factor", o.detector.winding_factor);
  app.add_option("--utc-offset-minutes", o.utc_offset_minutes, "Window clock time zone");
  app.add_option("--now", o.now, "Current time, Unix ms");
  app.add_option("--order-seed", o.order_seed, "Seed for the carbon/cost tab order draw");
  app.add_flag("--no-fsync", o.no_fsync, "Skip fsync on journal appends");

  auto* ingest = app.add_subcommand("ingest", "Detect trips in a trace and journal them");
  ingest->add_option("trace", o.path)->required();

  app.add_subcommand("trips", "List stored trips");

  auto* report = app.add_subcommand("report", "Totals for a metric");
  report->add_option("metric", o.metric)->required()->check(CLI::IsMember({"cost", "carbon"}));
  report->add_option("--window", o.window)->check(CLI::IsMember({"all", "current"}));

  auto* goal = app.add_subcommand("goal", "Goal status for a metric");
  goal->add_option("metric", o.metric)->required()->check(CLI::IsMember({"cost", "carbon"}));

  auto* sim = app.add_subcommand("simulate", "Generate a synthetic trace from a scenario");
  sim->add_option("scenario", o.path)->required();
  sim->add_option("--seed", o.seed);
  sim->add_option("--out", o.out_path, "Trace CSV (stdout when omitted)");
  sim->add_option("--truth", o.truth_path, "Ground-truth JSON (default <out>.truth.json)");

  auto* eval = app.add_subcommand("eval-detect", "Score detection against ground truth");
  eval->add_option("trace", o.path)->required();
  eval->add_option("truth", o.second_path)->required();
  eval->add_option("--overlap", o.overlap)->check(CLI::Range(0.0, 1.0));

  auto* dwell = app.add_subcommand("dwell", "Per-tab dwell time from interaction logs");
  dwell->add_option("logs", o.paths)->required();

  auto* st = app.add_subcommand("stats", "Paired tests on a CSV");
  st->add_option("test", o.test)->required()->check(CLI::IsMember({"wilcoxon", "ttest"}));
  st->add_option("csv", o.path)->required();
  st->add_option("--method", o.method)->check(CLI::IsMember({"auto", "exact", "normal"}));

  auto* serve = app.add_subcommand("serve", "Run the local HTTP service");
  serve->add_option("--port", o.port)->check(CLI::Range(0, 65535));
  serve->add_option("--host", o.host);
  serve->add_flag("--allow-remote", o.allow_remote, "Permit binding a non-loopback address");
  serve->add_flag("--export-coordinates", o.export_coordinates, "Include trip endpoints in responses");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    try {
      o.prices.validate();
      o.detector.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    if (*ingest) return cmd_ingest(o, out);
    if (*sim) return cmd_simulate(o, out);
    if (*eval) return cmd_eval_detect(o, out);
    if (*dwell) return cmd_dwell(o, out);
    if (*st) return cmd_stats(o, out);

    const auto catalog = VehicleCatalog::load(o.catalog_path);
    if (app.got_subcommand("trips")) return cmd_trips(o, catalog, out);
    if (*report) return cmd_report(o, catalog, out);
    if (*goal) return cmd_goal(o, catalog, out);
    if (*serve) return cmd_serve(o, catalog, out);
  } catch (const UsageError& e) {
    err << "error: invalid_input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace ecoprobe::cli
