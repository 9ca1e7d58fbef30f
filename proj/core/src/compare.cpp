#include "asl/compare.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace asl {

CompareMetric compare_metric_from_string(const std::string& name) {
  if (name == "ret" || name == "return") return CompareMetric::kReturn;
  if (name == "steps") return CompareMetric::kSteps;
  if (name == "correct") return CompareMetric::kCorrect;
  if (name == "mean_q") return CompareMetric::kMeanQ;
  throw std::invalid_argument("unknown comparison metric: " + name);
}

std::string to_string(CompareMetric metric) {
  switch (metric) {
    case CompareMetric::kReturn: return "ret";
    case CompareMetric::kSteps: return "steps";
    case CompareMetric::kCorrect: return "correct";
    case CompareMetric::kMeanQ: return "mean_q";
  }
  return "unknown";
}

namespace {

double metric_value(const EpisodeRow& row, CompareMetric metric) {
  switch (metric) {
    case CompareMetric::kReturn: return row.ret;
    case CompareMetric::kSteps: return static_cast<double>(row.steps);
    case CompareMetric::kCorrect:
      if (!row.correct) {
        throw std::invalid_argument("compare: 'correct' missing in a row");
      }
      return *row.correct;
    case CompareMetric::kMeanQ:
      if (!row.mean_q) {
        throw std::invalid_argument("compare: 'mean_q' missing in a row");
      }
      return *row.mean_q;
  }
  throw std::logic_error("unreachable");
}

// Exact two-sided binomial sign test in log space; ties excluded by caller.
double sign_test_p(int n, int k_min) {
  if (n == 0) return 1.0;
  double tail = 0.0;
  for (int i = 0; i <= k_min; ++i) {
    const double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) -
                            std::lgamma(n - i + 1.0) -
                            n * std::log(2.0);
    tail += std::exp(log_term);
  }
  return std::min(1.0, 2.0 * tail);
}

}  // namespace

ComparisonSummary compare(const MetricsReport& a, const MetricsReport& b,
                          CompareMetric metric) {
  if (a.rows.size() != b.rows.size()) {
    throw std::invalid_argument("compare: episode counts differ");
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].seed != b.rows[i].seed) {
      throw std::invalid_argument("compare: seed mismatch at episode " +
                                  std::to_string(i));
    }
  }

  ComparisonSummary s;
  s.metric = metric;
  s.pairs = static_cast<int>(a.rows.size());
  s.diffs.reserve(a.rows.size());
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    const double va = metric_value(a.rows[i], metric);
    const double vb = metric_value(b.rows[i], metric);
    sum_a += va;
    sum_b += vb;
    const double d = va - vb;
    s.diffs.push_back(d);
    if (d > 0.0) ++s.wins_a;
    else if (d < 0.0) ++s.wins_b;
    else ++s.ties;
  }
  if (s.pairs > 0) {
    s.mean_a = sum_a / s.pairs;
    s.mean_b = sum_b / s.pairs;
    s.mean_diff = s.mean_a - s.mean_b;
  }
  s.p_sign = sign_test_p(s.wins_a + s.wins_b, std::min(s.wins_a, s.wins_b));
  return s;
}

std::string comparison_text(const ComparisonSummary& s) {
  char buf[256];
  std::ostringstream out;
  out << "paired comparison on '" << to_string(s.metric) << "' (" << s.pairs
      << " episodes)\n";
  std::snprintf(buf, sizeof(buf), "  mean A        %.6g\n", s.mean_a);
  out << buf;
  std::snprintf(buf, sizeof(buf), "  mean B        %.6g\n", s.mean_b);
  out << buf;
  std::snprintf(buf, sizeof(buf), "  mean A-B      %.6g\n", s.mean_diff);
  out << buf;
  out << "  wins A/B/tie  " << s.wins_a << "/" << s.wins_b << "/" << s.ties
      << "\n";
  std::snprintf(buf, sizeof(buf), "  sign-test p   %.6g\n", s.p_sign);
  out << buf;
  return out.str();
}

std::string comparison_json(const ComparisonSummary& s) {
  nlohmann::json j;
  j["metric"] = to_string(s.metric);
  j["pairs"] = s.pairs;
  j["mean_a"] = s.mean_a;
  j["mean_b"] = s.mean_b;
  j["mean_diff"] = s.mean_diff;
  j["wins_a"] = s.wins_a;
  j["wins_b"] = s.wins_b;
  j["ties"] = s.ties;
  j["p_sign"] = s.p_sign;
  return j.dump();
}

}  // namespace asl
