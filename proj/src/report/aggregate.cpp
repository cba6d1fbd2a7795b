#include "report/aggregate.hpp"

#include "core/errors.hpp"
#include "core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

namespace pf2es::report {

namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

BandPoint band(int iteration, const std::vector<double>& values, double lo, double hi) {
  BandPoint b;
  b.iteration = iteration;
  b.n = static_cast<int>(values.size());
  b.median = median(values);
  b.lower = percentile(values, lo);
  b.upper = percentile(values, hi);
  return b;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string file_stem(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

}  // namespace

std::string SeriesSummary::name() const {
  std::string n = acquisition;
  if (q != 1) n += " q=" + std::to_string(q);
  if (!label.empty()) n += " [" + label + "]";
  return n;
}

AggregateResult aggregate(const std::vector<bo::BORunRecord>& records) {
  using Key = std::tuple<std::string, std::string, int, std::string>;
  std::map<Key, std::vector<const bo::BORunRecord*>> cells;
  for (const auto& r : records)
    cells[{r.config.problem, bo::to_string(r.config.acquisition), r.config.q, r.config.label}].push_back(&r);

  AggregateResult out;
  for (const auto& [key, recs] : cells) {
    SeriesSummary s;
    std::tie(s.problem, s.acquisition, s.q, s.label) = key;
    s.records = static_cast<int>(recs.size());
    std::size_t shortest = std::numeric_limits<std::size_t>::max();
    std::size_t longest = 0;
    for (const auto* r : recs) {
      shortest = std::min(shortest, r->iterations.size());
      longest = std::max(longest, r->iterations.size());
    }
    if (shortest != longest)
      out.warnings.push_back(s.problem + "/" + s.name() + ": budgets differ (" + std::to_string(shortest - 1) +
                             " to " + std::to_string(longest - 1) + " iterations); using the common prefix");
    for (std::size_t t = 0; t < shortest; ++t) {
      std::vector<double> regret;
      std::vector<double> cal;
      std::vector<double> width;
      for (const auto* r : recs) {
        const auto& it = r->iterations[t];
        regret.push_back(it.log_hv_difference);
        if (it.has_calibration) {
          cal.push_back(it.calibration_median);
          width.push_back(it.calibration_p90 - it.calibration_p10);
        }
      }
      const int iteration = recs.front()->iterations[t].iteration;
      s.log_hv_difference.push_back(band(iteration, regret, 25.0, 75.0));
      // Calibration only where every record in the cell has a summary.
      if (cal.size() == recs.size()) {
        s.calibration_median.push_back(band(iteration, cal, 10.0, 90.0));
        s.calibration_width.push_back(band(iteration, width, 10.0, 90.0));
      }
    }
    out.series.push_back(std::move(s));
  }
  return out;
}

std::string AggregateResult::csv() const {
  std::ostringstream os;
  os << kAggregateHeader << '\n';
  for (const auto& s : series) {
    const std::string prefix =
        csv_field(s.problem) + "," + csv_field(s.acquisition) + "," + std::to_string(s.q) + "," + csv_field(s.label) + ",";
    auto emit = [&](const std::vector<BandPoint>& pts, const char* metric) {
      for (const auto& b : pts)
        os << prefix << b.iteration << ',' << metric << ',' << b.n << ',' << fmt(b.median) << ',' << fmt(b.lower)
           << ',' << fmt(b.upper) << '\n';
    };
    emit(s.log_hv_difference, "log_hv_difference");
    emit(s.calibration_median, "calibration_median");
    emit(s.calibration_width, "calibration_width");
  }
  return os.str();
}

std::map<std::string, std::string> AggregateResult::svgs() const {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::map<std::string, std::vector<const SeriesSummary*>> by_problem;
  for (const auto& s : series) by_problem[s.problem].push_back(&s);

  std::map<std::string, std::string> out;
  const double w = 640, h = 400, left = 70, right = 170, top = 40, bottom = 50;
  for (const auto& [problem, list] : by_problem) {
    double xmax = 1.0;
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();
    for (const auto* s : list)
      for (const auto& b : s->log_hv_difference) {
        xmax = std::max(xmax, static_cast<double>(b.iteration));
        for (double v : {b.lower, b.upper}) {
          if (!std::isfinite(v)) continue;
          ymin = std::min(ymin, v);
          ymax = std::max(ymax, v);
        }
      }
    if (!std::isfinite(ymin)) {
      ymin = -1.0;
      ymax = 0.0;
    }
    ymin = std::floor(ymin);
    ymax = std::ceil(ymax);
    if (ymax <= ymin) ymax = ymin + 1.0;
    const double pw = w - left - right;
    const double ph = h - top - bottom;
    auto px = [&](double x) { return left + pw * x / xmax; };
    auto py = [&](double y) { return top + ph * (ymax - y) / (ymax - ymin); };
    auto pt = [&](double x, double y) { return short_fmt(px(x)) + "," + short_fmt(py(y)); };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
       << w << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << xml_escape(problem) << "</text>\n";
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    // Decade ticks: the y values are already log10 HV differences.
    const int step = std::max(1, static_cast<int>(std::ceil((ymax - ymin) / 8.0)));
    for (int k = static_cast<int>(ymin); k <= static_cast<int>(ymax); k += step) {
      os << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << short_fmt(py(k)) << "\" y2=\""
         << short_fmt(py(k)) << "\" stroke=\"#ddd\"/>\n";
      os << "<text x=\"" << left - 6 << "\" y=\"" << short_fmt(py(k) + 4) << "\" text-anchor=\"end\">1e" << k
         << "</text>\n";
    }
    const int xstep = std::max(1, static_cast<int>(std::ceil(xmax / 8.0)));
    for (int t = 0; t <= static_cast<int>(xmax); t += xstep)
      os << "<text x=\"" << short_fmt(px(t)) << "\" y=\"" << top + ph + 16 << "\" text-anchor=\"middle\">" << t
         << "</text>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">iteration</text>\n";
    os << "<text transform=\"translate(16," << top + ph / 2
       << ") rotate(-90)\" text-anchor=\"middle\">HV difference (median, IQR)</text>\n";

    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto& s = *list[i];
      const char* colour = palette[i % 10];
      std::string band_pts;
      std::string line_pts;
      for (const auto& b : s.log_hv_difference) {
        if (!line_pts.empty()) line_pts += ' ';
        line_pts += pt(b.iteration, b.median);
      }
      for (const auto& b : s.log_hv_difference) band_pts += pt(b.iteration, b.upper) + " ";
      for (auto it = s.log_hv_difference.rbegin(); it != s.log_hv_difference.rend(); ++it)
        band_pts += pt(it->iteration, it->lower) + " ";
      if (!band_pts.empty()) band_pts.pop_back();
      os << "<polygon points=\"" << band_pts << "\" fill=\"" << colour << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
      os << "<polyline points=\"" << line_pts << "\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
      const double ly = top + 14 + 18.0 * static_cast<double>(i);
      os << "<line x1=\"" << w - right + 12 << "\" x2=\"" << w - right + 32 << "\" y1=\"" << ly - 4 << "\" y2=\""
         << ly - 4 << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
      os << "<text x=\"" << w - right + 38 << "\" y=\"" << ly << "\">" << xml_escape(s.name()) << " (n=" << s.records
         << ")</text>\n";
    }
    os << "</svg>\n";
    out[problem] = os.str();
  }
  return out;
}

std::vector<bo::BORunRecord> load_records(const std::string& dir) {
  if (!fs::is_directory(dir)) throw IOError("not a directory: " + dir);
  std::vector<fs::path> paths;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") paths.push_back(e.path());
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw IOError("no record files (*.json) under " + dir);
  std::vector<bo::BORunRecord> out;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw IOError("cannot read " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      out.push_back(bo::record_from_json(ss.str()));
    } catch (const ConfigError& e) {
      throw ConfigError(p.string() + ": " + e.what());
    }
  }
  return out;
}

void write_aggregate(const AggregateResult& result, const std::string& out_dir) {
  fs::create_directories(out_dir);
  auto write = [](const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f || !(f << text)) throw IOError("cannot write " + p.string());
  };
  write(fs::path(out_dir) / "aggregate.csv", result.csv());
  for (const auto& [problem, svg] : result.svgs()) write(fs::path(out_dir) / (file_stem(problem) + ".svg"), svg);
}

}  // namespace pf2es::report
