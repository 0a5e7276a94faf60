#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <mutex>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "tsnsim/error.hpp"
#include "tsnsim/export.hpp"
#include "tsnsim/orchestrator.hpp"
#include "tsnsim/scenario.hpp"

namespace tsnsim {
namespace {

namespace fs = std::filesystem;

struct Common {
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> formats;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Override the scenario seed");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--format", c.formats, "Output formats: csv, json, svg")->delimiter(',');
}

void apply_common(ScenarioConfig& cfg, const Common& c) {
  if (c.seed) cfg.seed = *c.seed;
  if (!c.formats.empty()) cfg.output.formats = c.formats;
}

fs::path out_dir(const ScenarioConfig& cfg, const Common& c) {
  if (!c.out.empty()) return c.out;
  if (!cfg.output.dir.empty()) return cfg.output.dir;
  return fs::path("results") / cfg.name;
}

std::string fmt_us(double ns) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", ns / 1e3);
  return buf;
}

void print_summary(const RunResult& r, std::ostream& out) {
  out << r.scenario << " (seed " << r.seed;
  if (r.retry_count > 0) out << ", " << r.retry_count << " retries";
  out << ")\n";
  for (const auto& s : r.streams) {
    out << "  " << s.name << ": ";
    if (!s.stats) {
      out << "no samples";
    } else {
      const SummaryStats& st = *s.stats;
      out << st.count << " frames, min " << fmt_us(static_cast<double>(st.min)) << " us, mean " << fmt_us(st.mean)
          << " us, p99.9 " << fmt_us(static_cast<double>(st.p999)) << " us, max " << fmt_us(static_cast<double>(st.max))
          << " us, stddev " << fmt_us(st.stddev) << " us";
    }
    out << ", drops " << s.sender_drops + s.switch_drops << "\n";
  }
  if (r.ptp.enabled) {
    out << "  ptp: max |deviation| " << r.ptp.max_abs_deviation_ns << " ns, timeouts " << r.ptp.timeouts << "\n";
  }
}

RunResult run_and_export(const ScenarioConfig& cfg, const fs::path& dir, std::ostream& out, std::mutex* io_mutex) {
  RunResult r = run_scenario(cfg, [&](const std::string& msg) {
    std::unique_lock<std::mutex> lock;
    if (io_mutex) lock = std::unique_lock<std::mutex>(*io_mutex);
    out << "  " << msg << "\n";
  });
  export_result(r, dir, cfg.output.formats);
  std::unique_lock<std::mutex> lock;
  if (io_mutex) lock = std::unique_lock<std::mutex>(*io_mutex);
  print_summary(r, out);
  out << "  -> " << dir.string() << "\n";
  return r;
}

int cmd_run(const std::string& file, const Common& c, std::ostream& out) {
  ScenarioConfig cfg = load_scenario(file);
  apply_common(cfg, c);
  run_and_export(cfg, out_dir(cfg, c), out, nullptr);
  return 0;
}

int cmd_sweep(const std::string& file, const std::vector<std::string>& vary, unsigned jobs, const Common& c,
              std::ostream& out) {
  std::vector<SweepAxis> axes;
  for (const auto& v : vary) axes.push_back(parse_vary(v));
  const std::string text = read_text(file);
  std::vector<SweepPoint> points = expand_sweep(text, axes, fs::path(file).parent_path());
  const ScenarioConfig base = parse_scenario(text, fs::path(file).parent_path());
  const fs::path root = !c.out.empty() ? fs::path(c.out) : (!base.output.dir.empty() ? fs::path(base.output.dir) : fs::path("results") / base.name);
  for (auto& p : points) {
    apply_common(p.config, c);
    p.config.validate();
  }
  std::mutex io;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        run_and_export(points[i].config, root / points[i].label, out, &io);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1U, std::min<unsigned>(jobs, static_cast<unsigned>(points.size())));
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
  return 0;
}

int cmd_compare(const std::vector<std::string>& dirs, const std::string& out_file, std::ostream& out) {
  std::vector<BoxSeries> series;
  out << "scenario,stream,count,min,median,mean,p99.9,max\n";
  for (const auto& d : dirs) {
    const RunResult r = parse_result_json(read_text(fs::path(d) / "result.json"));
    for (const auto& s : r.streams) {
      series.push_back({r.scenario + "/" + s.name, s.latencies()});
      out << r.scenario << ',' << s.name << ',';
      if (s.stats) {
        out << s.stats->count << ',' << s.stats->min << ',' << s.stats->median << ',' << fmt_us(s.stats->mean * 1e3)
            << ',' << s.stats->p999 << ',' << s.stats->max << '\n';
      } else {
        out << "0,,,,,\n";
      }
    }
  }
  const fs::path target = out_file.empty() ? fs::path("compare.svg") : fs::path(out_file);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  write_text(target, boxplot_svg(series, "Latency comparison", "latency [ns]"));
  out << "-> " << target.string() << "\n";
  return 0;
}

int cmd_reproduce(const std::string& id, bool list, bool dump, const Common& c, std::ostream& out) {
  if (list) {
    for (const auto& s : bundled_scenario_ids()) out << s << "\n";
    return 0;
  }
  if (id.empty()) throw ConfigError("reproduce needs a figure id (see --list)");
  ScenarioConfig cfg = bundled_scenario(id);
  apply_common(cfg, c);
  if (dump) {
    out << dump_scenario(cfg);
    return 0;
  }
  const fs::path dir = out_dir(cfg, c);
  if (id == "ptp-sweep") {
    std::vector<BoxSeries> series;
    for (int rate : {8, 16, 32, 64, 128}) {
      ScenarioConfig point = cfg;
      point.ptp.sync_rate_per_s = rate;
      point.name = cfg.name + "_rate=" + std::to_string(rate);
      const RunResult r = run_and_export(point, dir / ("rate=" + std::to_string(rate)), out, nullptr);
      BoxSeries b{std::to_string(rate) + "/s", {}};
      for (const auto& d : r.ptp.deviations) {
        if (d.true_ns >= r.measurement_start_ns) b.values.push_back(std::llabs(d.deviation_ns));
      }
      series.push_back(std::move(b));
    }
    write_text(dir / "deviation.svg", boxplot_svg(series, "PTP |deviation| vs sync rate", "|deviation| [ns]"));
    out << "-> " << (dir / "deviation.svg").string() << "\n";
    return 0;
  }
  run_and_export(cfg, dir, out, nullptr);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"tsnsim: discrete-event TSN testbed simulator"};
  app.require_subcommand(1);

  Common run_opts;
  std::string run_file;
  auto* run = app.add_subcommand("run", "Run one scenario file");
  run->add_option("scenario", run_file, "Scenario JSON file")->required();
  add_common(run, run_opts);

  Common sweep_opts;
  std::string sweep_file;
  std::vector<std::string> vary;
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a scenario over parameter values");
  sweep->add_option("scenario", sweep_file, "Scenario JSON file")->required();
  sweep->add_option("--vary", vary, "key=v1,v2,... (repeatable)")->required();
  sweep->add_option("--jobs", jobs, "Scenarios run in parallel");
  add_common(sweep, sweep_opts);

  std::vector<std::string> dirs;
  std::string compare_out;
  auto* compare = app.add_subcommand("compare", "Boxplot of several result directories");
  compare->add_option("dirs", dirs, "Result directories holding result.json")->required();
  compare->add_option("--out", compare_out, "SVG file to write (default compare.svg)");

  Common repro_opts;
  std::string figure;
  bool list = false;
  bool dump = false;
  auto* repro = app.add_subcommand("reproduce", "Run a bundled figure scenario");
  repro->add_option("figure", figure, "Figure id");
  repro->add_flag("--list", list, "List figure ids");
  repro->add_flag("--dump", dump, "Print the scenario JSON instead of running it");
  add_common(repro, repro_opts);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << "error: " << e.what() << "\n" << sub->help();
    return 1;
  }

  try {
    if (*run) return cmd_run(run_file, run_opts, out);
    if (*sweep) return cmd_sweep(sweep_file, vary, jobs, sweep_opts, out);
    if (*compare) return cmd_compare(dirs, compare_out, out);
    if (*repro) return cmd_reproduce(figure, list, dump, repro_opts, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const ScenarioError& e) {
    err << "scenario error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "i/o error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}

}  // namespace tsnsim
