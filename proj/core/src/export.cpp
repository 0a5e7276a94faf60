#include "tsnsim/export.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "tsnsim/error.hpp"

namespace tsnsim {
namespace {

using nlohmann::json;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

json stats_json(const SummaryStats& s) {
  return json{{"count", s.count}, {"min", s.min},   {"mean", s.mean},   {"median", s.median}, {"stddev", s.stddev},
              {"p99", s.p99},     {"p999", s.p999}, {"p9999", s.p9999}, {"max", s.max}};
}

}  // namespace

std::string records_csv(const RunResult& r) {
  std::string out = "stream,seq,tx_ns,rx_ns,latency_ns\n";
  for (const auto& s : r.streams) {
    for (const auto& rec : s.records) {
      out += s.name;
      out += ',' + std::to_string(rec.seq) + ',' + std::to_string(rec.tx_ns) + ',' + std::to_string(rec.rx_ns) + ',' +
             std::to_string(rec.latency_ns) + '\n';
    }
  }
  return out;
}

std::string stats_csv(const RunResult& r) {
  std::string out =
      "stream,pcp,count,min,mean,median,stddev,p99,p99.9,p99.99,max,emitted,sender_drops,switch_drops\n";
  for (const auto& s : r.streams) {
    out += s.name + ',' + std::to_string(s.pcp) + ',';
    if (s.stats) {
      const SummaryStats& st = *s.stats;
      out += std::to_string(st.count) + ',' + std::to_string(st.min) + ',' + fmt_double(st.mean) + ',' +
             std::to_string(st.median) + ',' + fmt_double(st.stddev) + ',' + std::to_string(st.p99) + ',' +
             std::to_string(st.p999) + ',' + std::to_string(st.p9999) + ',' + std::to_string(st.max);
    } else {
      out += "0,,,,,,,,";
    }
    out += ',' + std::to_string(s.emitted) + ',' + std::to_string(s.sender_drops) + ',' +
           std::to_string(s.switch_drops) + '\n';
  }
  return out;
}

std::string deviations_csv(const RunResult& r) {
  std::string out = "true_ns,slave_id,deviation_ns\n";
  for (const auto& d : r.ptp.deviations) {
    out += std::to_string(d.true_ns) + ',' + std::to_string(d.slave_id) + ',' + std::to_string(d.deviation_ns) + '\n';
  }
  return out;
}

std::string result_json(const RunResult& r) {
  json root;
  root["scenario"] = r.scenario;
  root["seed"] = r.seed;
  root["attempt_seed"] = r.attempt_seed;
  root["retry_count"] = r.retry_count;
  root["measurement_start_ns"] = r.measurement_start_ns;
  root["measurement_end_ns"] = r.measurement_end_ns;
  json streams = json::array();
  for (const auto& s : r.streams) {
    json js{{"name", s.name},
            {"pcp", s.pcp},
            {"emitted", s.emitted},
            {"sender_drops", s.sender_drops},
            {"switch_drops", s.switch_drops}};
    js["stats"] = s.stats ? stats_json(*s.stats) : json(nullptr);
    // Columns kept compact: seq, tx, rx, bytes (latency = rx - tx).
    json recs = json::array();
    for (const auto& rec : s.records) recs.push_back(json::array({rec.seq, rec.tx_ns, rec.rx_ns, rec.frame_bytes}));
    js["records"] = std::move(recs);
    streams.push_back(std::move(js));
  }
  root["streams"] = std::move(streams);
  json devs = json::array();
  for (const auto& d : r.ptp.deviations) devs.push_back(json::array({d.true_ns, d.slave_id, d.deviation_ns}));
  root["ptp"] = json{{"enabled", r.ptp.enabled},
                     {"sync_rate_per_s", r.ptp.sync_rate_per_s},
                     {"max_abs_deviation_ns", r.ptp.max_abs_deviation_ns},
                     {"timeouts", r.ptp.timeouts},
                     {"anomalies", r.ptp.anomalies},
                     {"slave_drift_ppb", r.ptp.slave_drift_ppb},
                     {"deviations", std::move(devs)}};
  root["counters"] = json{{"frames_in", r.counters.frames_in},
                          {"forwarded", r.counters.forwarded},
                          {"dropped", r.counters.dropped},
                          {"awaiting_eligibility", r.counters.awaiting_eligibility},
                          {"queued", r.counters.queued},
                          {"terminated_locally", r.counters.terminated_locally}};
  root["cross_emitted"] = r.cross_emitted;
  root["cross_sender_drops"] = r.cross_sender_drops;
  root["events"] = r.events;
  root["warnings"] = r.warnings;
  return root.dump() + "\n";
}

RunResult parse_result_json(const std::string& text) {
  RunResult r;
  try {
    const json root = json::parse(text);
    r.scenario = root.at("scenario").get<std::string>();
    r.seed = root.at("seed").get<std::uint64_t>();
    r.attempt_seed = root.at("attempt_seed").get<std::uint64_t>();
    r.retry_count = root.at("retry_count").get<int>();
    r.measurement_start_ns = root.at("measurement_start_ns").get<std::int64_t>();
    r.measurement_end_ns = root.at("measurement_end_ns").get<std::int64_t>();
    int idx = 0;
    for (const json& js : root.at("streams")) {
      StreamResult s;
      s.name = js.at("name").get<std::string>();
      s.pcp = js.at("pcp").get<int>();
      s.emitted = js.at("emitted").get<std::uint64_t>();
      s.sender_drops = js.at("sender_drops").get<std::uint64_t>();
      s.switch_drops = js.at("switch_drops").get<std::uint64_t>();
      for (const json& rec : js.at("records")) {
        LatencyRecord lr;
        lr.stream = idx;
        lr.seq = rec.at(0).get<std::int64_t>();
        lr.tx_ns = rec.at(1).get<std::int64_t>();
        lr.rx_ns = rec.at(2).get<std::int64_t>();
        lr.frame_bytes = rec.at(3).get<std::int64_t>();
        lr.latency_ns = lr.rx_ns - lr.tx_ns;
        s.records.push_back(lr);
      }
      r.streams.push_back(std::move(s));
      ++idx;
    }
    const json& p = root.at("ptp");
    r.ptp.enabled = p.at("enabled").get<bool>();
    r.ptp.sync_rate_per_s = p.at("sync_rate_per_s").get<int>();
    r.ptp.max_abs_deviation_ns = p.at("max_abs_deviation_ns").get<std::int64_t>();
    r.ptp.timeouts = p.at("timeouts").get<std::uint64_t>();
    r.ptp.anomalies = p.at("anomalies").get<std::uint64_t>();
    r.ptp.slave_drift_ppb = p.at("slave_drift_ppb").get<std::vector<std::int64_t>>();
    for (const json& d : p.at("deviations")) {
      r.ptp.deviations.push_back({d.at(0).get<std::int64_t>(), d.at(1).get<int>(), d.at(2).get<std::int64_t>()});
    }
    const json& c = root.at("counters");
    r.counters.frames_in = c.at("frames_in").get<std::uint64_t>();
    r.counters.forwarded = c.at("forwarded").get<std::uint64_t>();
    r.counters.dropped = c.at("dropped").get<std::uint64_t>();
    r.counters.awaiting_eligibility = c.at("awaiting_eligibility").get<std::uint64_t>();
    r.counters.queued = c.at("queued").get<std::uint64_t>();
    r.counters.terminated_locally = c.at("terminated_locally").get<std::uint64_t>();
    r.cross_emitted = root.at("cross_emitted").get<std::uint64_t>();
    r.cross_sender_drops = root.at("cross_sender_drops").get<std::uint64_t>();
    r.events = root.at("events").get<std::uint64_t>();
    r.warnings = root.at("warnings").get<std::vector<std::string>>();
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("result JSON: ") + e.what(), 1);
  } catch (const json::exception& e) {
    throw ParseError(std::string("result JSON: ") + e.what(), 1);
  }
  r.finalize();
  return r;
}

std::vector<std::pair<std::string, std::vector<LatencyRecord>>> parse_records_csv(const std::string& text) {
  std::vector<std::pair<std::string, std::vector<LatencyRecord>>> out;
  std::map<std::string, std::size_t> index;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    std::istringstream row(line);
    std::string name;
    std::string cells[4];
    if (!std::getline(row, name, ',')) throw ParseError("missing stream", lineno);
    LatencyRecord rec;
    try {
      for (auto& c : cells) {
        if (!std::getline(row, c, ',')) throw ParseError("too few columns", lineno);
      }
      rec.seq = std::stoll(cells[0]);
      rec.tx_ns = std::stoll(cells[1]);
      rec.rx_ns = std::stoll(cells[2]);
      rec.latency_ns = std::stoll(cells[3]);
    } catch (const std::logic_error&) {
      throw ParseError("malformed number", lineno);
    }
    auto [it, inserted] = index.emplace(name, out.size());
    if (inserted) out.emplace_back(name, std::vector<LatencyRecord>{});
    rec.stream = static_cast<int>(it->second);
    out[it->second].second.push_back(rec);
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::filesystem::path> export_result(const RunResult& r, const std::filesystem::path& dir,
                                                 const std::vector<std::string>& formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto put = [&](const char* name, const std::string& text) {
    write_text(dir / name, text);
    written.push_back(dir / name);
  };
  for (const std::string& f : formats) {
    if (f == "csv") {
      put("records.csv", records_csv(r));
      put("stats.csv", stats_csv(r));
      if (r.ptp.enabled) put("deviations.csv", deviations_csv(r));
    } else if (f == "json") {
      put("result.json", result_json(r));
    } else if (f == "svg") {
      SvgOptions opt;
      opt.title = r.scenario;
      put("ccdf.svg", ccdf_svg(r, opt));
    } else {
      throw ConfigError("unknown output format '" + f + "'");
    }
  }
  return written;
}

}  // namespace tsnsim
