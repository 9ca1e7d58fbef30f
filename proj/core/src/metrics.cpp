#include "asl/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace asl {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string iso_timestamp() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

struct ColumnStats {
  int n = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  double mean() const { return n ? sum / n : 0.0; }
  double stddev() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = (sum_sq - static_cast<double>(n) * m * m) /
                       static_cast<double>(n - 1);
    return var > 0.0 ? std::sqrt(var) : 0.0;
  }
};

std::string histogram_cell(const std::map<int, int>& hist) {
  std::string out;
  for (const auto& [idx, count] : hist) {
    if (!out.empty()) out += ';';
    out += std::to_string(idx) + ":" + std::to_string(count);
  }
  return out;
}

std::map<int, int> parse_histogram(const std::string& cell) {
  std::map<int, int> hist;
  std::istringstream ss(cell);
  std::string tok;
  while (std::getline(ss, tok, ';')) {
    if (tok.empty()) continue;
    const std::size_t colon = tok.find(':');
    if (colon == std::string::npos) {
      throw std::runtime_error("metrics: malformed histogram cell: " + tok);
    }
    hist[std::stoi(tok.substr(0, colon))] = std::stoi(tok.substr(colon + 1));
  }
  return hist;
}

json row_to_json(const EpisodeRow& row) {
  json j;
  j["episode"] = row.episode;
  j["seed"] = row.seed;
  j["ret"] = row.ret;
  j["steps"] = row.steps;
  if (row.correct) j["correct"] = *row.correct;
  if (row.mean_q) j["mean_q"] = *row.mean_q;
  json hist = json::object();
  for (const auto& [idx, count] : row.option_histogram) {
    hist[std::to_string(idx)] = count;
  }
  j["option_hist"] = hist;
  return j;
}

EpisodeRow row_from_json(const json& j) {
  EpisodeRow row;
  row.episode = j.at("episode").get<int>();
  row.seed = j.at("seed").get<std::uint64_t>();
  row.ret = j.at("ret").get<double>();
  row.steps = j.at("steps").get<int>();
  if (j.contains("correct")) row.correct = j.at("correct").get<double>();
  if (j.contains("mean_q")) row.mean_q = j.at("mean_q").get<double>();
  for (const auto& [key, value] : j.at("option_hist").items()) {
    row.option_histogram[std::stoi(key)] = value.get<int>();
  }
  return row;
}

json aggregate_to_json(const Aggregate& agg) {
  json j;
  j["count"] = agg.count;
  j["ret_mean"] = agg.ret_mean;
  j["ret_std"] = agg.ret_std;
  j["steps_mean"] = agg.steps_mean;
  j["steps_std"] = agg.steps_std;
  if (agg.correct_mean) {
    j["correct_mean"] = *agg.correct_mean;
    j["correct_std"] = *agg.correct_std;
  }
  if (agg.q_mean) {
    j["q_mean"] = *agg.q_mean;
    j["q_std"] = *agg.q_std;
  }
  return j;
}

Aggregate aggregate_from_json(const json& j) {
  Aggregate agg;
  agg.count = j.at("count").get<int>();
  agg.ret_mean = j.at("ret_mean").get<double>();
  agg.ret_std = j.at("ret_std").get<double>();
  agg.steps_mean = j.at("steps_mean").get<double>();
  agg.steps_std = j.at("steps_std").get<double>();
  if (j.contains("correct_mean")) {
    agg.correct_mean = j.at("correct_mean").get<double>();
    agg.correct_std = j.at("correct_std").get<double>();
  }
  if (j.contains("q_mean")) {
    agg.q_mean = j.at("q_mean").get<double>();
    agg.q_std = j.at("q_std").get<double>();
  }
  return agg;
}

std::string aggregate_csv_line(const Aggregate& agg) {
  return "#aggregate " + aggregate_summary(agg);
}

Aggregate aggregate_from_csv_line(const std::string& line) {
  Aggregate agg;
  std::istringstream ss(line);
  std::string tok;
  ss >> tok;  // "#aggregate"
  bool has_correct = false, has_q = false;
  while (ss >> tok) {
    const std::size_t eq = tok.find('=');
    if (eq == std::string::npos) continue;
    const std::string key = tok.substr(0, eq);
    const double value = std::stod(tok.substr(eq + 1));
    if (key == "count") agg.count = static_cast<int>(value);
    else if (key == "ret_mean") agg.ret_mean = value;
    else if (key == "ret_std") agg.ret_std = value;
    else if (key == "steps_mean") agg.steps_mean = value;
    else if (key == "steps_std") agg.steps_std = value;
    else if (key == "correct_mean") { agg.correct_mean = value; has_correct = true; }
    else if (key == "correct_std") agg.correct_std = value;
    else if (key == "q_mean") { agg.q_mean = value; has_q = true; }
    else if (key == "q_std") agg.q_std = value;
  }
  if (!has_correct) agg.correct_mean.reset();
  if (!has_q) agg.q_mean.reset();
  return agg;
}

}  // namespace

std::string aggregate_summary(const Aggregate& agg) {
  std::string line = "count=" + std::to_string(agg.count);
  line += " ret_mean=" + fmt(agg.ret_mean) + " ret_std=" + fmt(agg.ret_std);
  line += " steps_mean=" + fmt(agg.steps_mean) + " steps_std=" + fmt(agg.steps_std);
  if (agg.correct_mean) {
    line += " correct_mean=" + fmt(*agg.correct_mean) +
            " correct_std=" + fmt(*agg.correct_std);
  }
  if (agg.q_mean) {
    line += " q_mean=" + fmt(*agg.q_mean) + " q_std=" + fmt(*agg.q_std);
  }
  return line;
}

Aggregate MetricsReport::compute(const std::vector<EpisodeRow>& rows) {
  Aggregate agg;
  agg.count = static_cast<int>(rows.size());
  ColumnStats ret, steps, correct, q;
  for (const EpisodeRow& row : rows) {
    ret.add(row.ret);
    steps.add(static_cast<double>(row.steps));
    if (row.correct) correct.add(*row.correct);
    if (row.mean_q) q.add(*row.mean_q);
  }
  agg.ret_mean = ret.mean();
  agg.ret_std = ret.stddev();
  agg.steps_mean = steps.mean();
  agg.steps_std = steps.stddev();
  if (correct.n > 0) {
    agg.correct_mean = correct.mean();
    agg.correct_std = correct.stddev();
  }
  if (q.n > 0) {
    agg.q_mean = q.mean();
    agg.q_std = q.stddev();
  }
  return agg;
}

struct MetricsWriter::Impl {
  std::ofstream file;
  std::string format;
  int expected = 0;
  int written = 0;
  bool finished = false;
};

MetricsWriter::MetricsWriter(const std::string& path, const std::string& format,
                             int expected_rows)
    : impl_(new Impl), path_(path) {
  impl_->format = format;
  impl_->expected = expected_rows;
  impl_->file.open(path, std::ios::trunc);
  if (!impl_->file) {
    delete impl_;
    throw std::runtime_error("cannot open metrics file for writing: " + path);
  }
  if (format == "jsonl") {
    json header;
    header["rows"] = expected_rows;
    header["timestamp"] = iso_timestamp();
    impl_->file << header.dump() << "\n";
  } else {
    impl_->file << "# rows=" << expected_rows << "\n";
    impl_->file << "# timestamp=" << iso_timestamp() << "\n";
    impl_->file << "episode,seed,ret,steps,correct,mean_q,option_hist\n";
  }
}

MetricsWriter::~MetricsWriter() { delete impl_; }

void MetricsWriter::write_row(const EpisodeRow& row) {
  if (impl_->format == "jsonl") {
    impl_->file << row_to_json(row).dump() << "\n";
  } else {
    impl_->file << row.episode << "," << row.seed << "," << fmt(row.ret) << ","
                << row.steps << ","
                << (row.correct ? fmt(*row.correct) : std::string()) << ","
                << (row.mean_q ? fmt(*row.mean_q) : std::string()) << ","
                << histogram_cell(row.option_histogram) << "\n";
  }
  impl_->file.flush();
  ++impl_->written;
}

void MetricsWriter::finish(const Aggregate& aggregate) {
  if (impl_->finished) return;
  if (impl_->written != impl_->expected) {
    throw std::runtime_error("metrics writer: row count mismatch for " + path_);
  }
  if (impl_->format == "jsonl") {
    json j;
    j["aggregate"] = aggregate_to_json(aggregate);
    impl_->file << j.dump() << "\n";
  } else {
    impl_->file << aggregate_csv_line(aggregate) << "\n";
  }
  impl_->file.flush();
  if (!impl_->file) throw std::runtime_error("metrics writer: write failed for " + path_);
  impl_->finished = true;
}

void write_metrics(const MetricsReport& report, const std::string& path,
                   const std::string& format) {
  MetricsWriter writer(path, format, static_cast<int>(report.rows.size()));
  for (const EpisodeRow& row : report.rows) writer.write_row(row);
  writer.finish(report.aggregate);
}

MetricsReport read_metrics(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open metrics file: " + path);
  std::string first;
  if (!std::getline(f, first)) {
    throw std::runtime_error("empty metrics file: " + path);
  }
  MetricsReport report;
  int declared = -1;
  bool saw_aggregate = false;

  if (!first.empty() && first[0] == '{') {
    // JSONL
    json header = json::parse(first);
    declared = header.at("rows").get<int>();
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      json j = json::parse(line);
      if (j.contains("aggregate")) {
        report.aggregate = aggregate_from_json(j.at("aggregate"));
        saw_aggregate = true;
      } else {
        report.rows.push_back(row_from_json(j));
      }
    }
  } else {
    if (first.rfind("# rows=", 0) != 0) {
      throw std::runtime_error("metrics file missing row-count header: " + path);
    }
    declared = std::stoi(first.substr(7));
    std::string line;
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      if (line.rfind("#aggregate", 0) == 0) {
        report.aggregate = aggregate_from_csv_line(line);
        saw_aggregate = true;
        continue;
      }
      if (line[0] == '#') continue;  // timestamp and other comments
      if (line.rfind("episode,", 0) == 0) continue;  // column header
      std::vector<std::string> cells;
      std::istringstream ss(line);
      std::string cell;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      while (cells.size() < 7) cells.emplace_back();
      EpisodeRow row;
      row.episode = std::stoi(cells[0]);
      row.seed = std::stoull(cells[1]);
      row.ret = std::stod(cells[2]);
      row.steps = std::stoi(cells[3]);
      if (!cells[4].empty()) row.correct = std::stod(cells[4]);
      if (!cells[5].empty()) row.mean_q = std::stod(cells[5]);
      row.option_histogram = parse_histogram(cells[6]);
      report.rows.push_back(row);
    }
  }

  if (static_cast<int>(report.rows.size()) != declared || !saw_aggregate) {
    throw std::runtime_error("truncated metrics file (row-count header mismatch): " + path);
  }
  return report;
}

}  // namespace asl
