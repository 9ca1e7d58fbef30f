#pragma once

#include <string>
#include <vector>

#include "asl/metrics.hpp"

namespace asl {

enum class CompareMetric { kReturn, kSteps, kCorrect, kMeanQ };

CompareMetric compare_metric_from_string(const std::string& name);
std::string to_string(CompareMetric metric);

struct ComparisonSummary {
  CompareMetric metric = CompareMetric::kReturn;
  int pairs = 0;
  double mean_a = 0.0;
  double mean_b = 0.0;
  double mean_diff = 0.0;
  int wins_a = 0;
  int wins_b = 0;
  int ties = 0;
  double p_sign = 1.0;  // exact two-sided binomial sign test; ties dropped,
                        // p = 1 when every pair ties
  std::vector<double> diffs;  // per-episode a - b, paired by seed
};

// Paired comparison of two reports with matching seed lists.
ComparisonSummary compare(const MetricsReport& a, const MetricsReport& b,
                          CompareMetric metric = CompareMetric::kReturn);

std::string comparison_text(const ComparisonSummary& s);
std::string comparison_json(const ComparisonSummary& s);  // one-line record

}  // namespace asl
