#include "report/runner.hpp"

#include "benchmarks/benchmarks.hpp"
#include "bo/loop.hpp"
#include "core/errors.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

namespace pf2es::report {

namespace fs = std::filesystem;

namespace {

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') ? c : '_';
  return out;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  if (!f || !(f << text)) throw IOError("cannot write " + p.string());
}

}  // namespace

std::string record_file_name(const bo::RunConfig& c) {
  std::string name = sanitize(c.problem) + "_" + bo::to_string(c.acquisition) + "_q" + std::to_string(c.q);
  if (!c.label.empty()) name += "_" + sanitize(c.label);
  return name + "_s" + std::to_string(c.seed) + ".json";
}

RunSummary run_all(const std::vector<bo::RunConfig>& runs, const std::string& out_dir, int workers,
                   const LogSink& sink) {
  if (workers < 1) throw ConfigError("workers must be positive");
  for (const auto& c : runs) {
    benchmarks::get_problem(c.problem);
    c.validate();
  }
  const fs::path root(out_dir);
  const fs::path run_dir = root / "runs";
  fs::create_directories(run_dir);
  std::ofstream log(root / "progress.log", std::ios::binary);
  if (!log) throw IOError("cannot write " + (root / "progress.log").string());

  std::mutex log_mutex;
  auto emit = [&](const std::string& line) {
    std::lock_guard<std::mutex> lock(log_mutex);
    log << line << '\n';
    log.flush();
    if (sink) sink(line);
  };

  const int n = static_cast<int>(runs.size());
  RunSummary summary;
  summary.record_files.assign(runs.size(), "");
  std::vector<std::string> csv(runs.size());
  std::vector<std::string> errors(runs.size());
  std::atomic<int> next{0};

  auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      const auto& c = runs[static_cast<std::size_t>(i)];
      const std::string tag = "[" + std::to_string(i + 1) + "/" + std::to_string(n) + "] " + c.problem + " " +
                              bo::to_string(c.acquisition) + " q=" + std::to_string(c.q) +
                              (c.label.empty() ? "" : " " + c.label) + " seed=" + std::to_string(c.seed);
      emit(tag + " start");
      try {
        const auto progress = [&](int t, const bo::BORunRecord& r) {
          char buf[64];
          std::snprintf(buf, sizeof buf, "%.4f", r.iterations.back().log_hv_difference);
          emit(tag + " iteration " + std::to_string(t) + "/" + std::to_string(c.iterations) + " log_hv_diff=" + buf);
        };
        const auto record = bo::run_bo(c, progress);
        const auto file = run_dir / record_file_name(c);
        write_file(file, bo::record_to_json(record));
        csv[static_cast<std::size_t>(i)] = bo::record_to_csv(record, false);
        summary.record_files[static_cast<std::size_t>(i)] = file.string();
        emit(tag + (record.aborted ? " aborted: " + record.abort_reason : std::string(" done")));
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = tag + ": " + e.what();
        emit(tag + " failed: " + e.what());
      }
    }
  };

  const int pool = std::min(workers, std::max(n, 1));
  std::vector<std::thread> threads;
  for (int w = 1; w < pool; ++w) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();

  std::string table = std::string(bo::kCsvHeader) + "\n";
  for (std::size_t i = 0; i < runs.size(); ++i) {
    table += csv[i];
    if (errors[i].empty()) {
      ++summary.completed;
    } else {
      ++summary.failed;
      summary.errors.push_back(errors[i]);
    }
  }
  write_file(root / "summary.csv", table);
  emit("finished: " + std::to_string(summary.completed) + " completed, " + std::to_string(summary.failed) + " failed");
  return summary;
}

}  // namespace pf2es::report
