#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace asl {

struct EpisodeRow {
  int episode = 0;
  std::uint64_t seed = 0;
  double ret = 0.0;  // episode return (sum of composite totals)
  int steps = 0;
  std::optional<double> correct;  // classification correctness / task success
  std::optional<double> mean_q;   // mean quality over the episode
  std::map<int, int> option_histogram;  // flat option index -> times chosen
};

struct Aggregate {
  int count = 0;
  double ret_mean = 0.0, ret_std = 0.0;
  double steps_mean = 0.0, steps_std = 0.0;
  std::optional<double> correct_mean, correct_std;
  std::optional<double> q_mean, q_std;
};

struct MetricsReport {
  std::vector<EpisodeRow> rows;
  Aggregate aggregate;

  // Sample standard deviation (n-1); zero for n < 2. Missing columns are
  // aggregated over the rows that carry them.
  static Aggregate compute(const std::vector<EpisodeRow>& rows);
};

// Streaming writer: the row-count header goes out first, rows append as
// episodes finish, the aggregate record closes the file. The timestamp lives
// in a dedicated comment line excluded from byte comparisons.
class MetricsWriter {
 public:
  MetricsWriter(const std::string& path, const std::string& format,
                int expected_rows);
  ~MetricsWriter();

  void write_row(const EpisodeRow& row);
  void finish(const Aggregate& aggregate);
  const std::string& path() const { return path_; }

 private:
  struct Impl;
  Impl* impl_;
  std::string path_;
};

void write_metrics(const MetricsReport& report, const std::string& path,
                   const std::string& format);

// Re-reads either format; throws on a row-count mismatch (truncated file).
MetricsReport read_metrics(const std::string& path);

// "count=N ret_mean=... ret_std=... steps_mean=..." key=value form, shared by
// the CSV footer and the CLI's stdout summary.
std::string aggregate_summary(const Aggregate& aggregate);

}  // namespace asl
