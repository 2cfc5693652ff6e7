#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "toipol/records.hpp"

namespace toipol {

// ---------------------------------------------------------------------------
// Daily series
// ---------------------------------------------------------------------------

/// Pattern filter for a series. An empty field matches everything.
struct GroupKey {
  std::optional<Gender> gender;
  std::optional<std::string> nuts2;

  bool matches(const PatternRecord& r) const;
  std::string label() const;
};

struct DailyRow {
  Date date{};
  double mean_polarity = 0.0;
  std::size_t pattern_count = 0;
  int article_count = 0;
  int outlet_count = 0;
  double normalized_value = 0.0;  // polarity sum / article_count
};

struct DailySeries {
  Dimension dimension = Dimension::sentiment;
  GroupKey group;
  std::vector<DailyRow> rows;  // strictly increasing dates
};

/// One row per day with at least one matching pattern. Throws
/// std::invalid_argument when a pattern's date is missing from `counts` or
/// the day reports no articles.
DailySeries daily_aggregate(std::span<const PatternRecord> patterns, const CorpusCounts& counts, Dimension d,
                            const GroupKey& group = {});

/// Trailing mean over rows dated in (d - window_days, d]. Smooths both
/// mean_polarity and normalized_value; other fields are carried over.
DailySeries rolling_mean(const DailySeries& series, int window_days = 90);

// ---------------------------------------------------------------------------
// Distribution statistics
// ---------------------------------------------------------------------------

inline constexpr std::array<double, 5> kReportProbs = {0.10, 0.25, 0.50, 0.75, 0.90};

/// Linear interpolation between order statistics at rank h = (n - 1) p.
/// Throws std::invalid_argument on empty input or p outside [0, 1].
std::vector<double> quantiles(std::span<const double> values, std::span<const double> probs);
double quantile(std::span<const double> values, double p);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  bool std_defined = true;  // false for a single value; std is then reported as 0
  std::array<double, 5> q{};  // at kReportProbs
};

Summary distribution_summary(std::span<const double> values);

/// 100 (female - non_female) / |non_female|; nullopt when non_female is 0.
std::optional<double> pct_diff(double stat_female, double stat_nonfemale);

// ---------------------------------------------------------------------------
// Mann-Whitney U
// ---------------------------------------------------------------------------

enum class TestMethod { exact, normal_approximation };

std::string_view to_string(TestMethod m);

struct TestReport {
  double u_statistic = 0.0;  // min(U_a, U_b)
  double p_value = 1.0;      // two-sided
  TestMethod method = TestMethod::exact;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
};

/// Largest combined sample size handled by exact enumeration.
inline constexpr std::size_t kExactLimit = 16;

/// Two-sided rank-sum test with average ranks for ties. Tie-free samples with
/// n1 + n2 <= kExactLimit use the exact null distribution; everything else
/// uses the normal approximation with tie-corrected variance and continuity
/// correction. Throws std::invalid_argument if either sample is empty.
TestReport mann_whitney_u(std::span<const double> a, std::span<const double> b);

/// Exact two-sided p for statistic `u` of tie-free samples of sizes n1, n2.
double mann_whitney_exact_p(double u, std::size_t n1, std::size_t n2);

// ---------------------------------------------------------------------------
// Grouped tables
// ---------------------------------------------------------------------------

enum class Grouping { year, nuts2_with_spain };

inline constexpr std::string_view kCountryRow = "SPAIN";

/// Raw values of one sample; merge is concatenation and every statistic is
/// computed on the sorted values, so partials merge in any order.
struct SampleAccumulator {
  std::vector<double> values;

  void add(double v) { values.push_back(v); }
  void merge(const SampleAccumulator& o) { values.insert(values.end(), o.values.begin(), o.values.end()); }
  std::vector<double> sorted() const;
};

struct GenderSamples {
  SampleAccumulator female;
  SampleAccumulator non_female;

  void merge(const GenderSamples& o) {
    female.merge(o.female);
    non_female.merge(o.non_female);
  }
};

/// Group key -> samples. The SPAIN row, when present, pools every pattern.
using GroupPartial = std::map<std::string, GenderSamples>;

GroupPartial accumulate_groups(std::span<const PatternRecord> patterns, Grouping grouping, Dimension d);
void merge_into(GroupPartial& into, const GroupPartial& from);

struct QuantileRow {
  std::string key;
  std::optional<Summary> stats;  // empty when the sample is empty
};

/// Percentage differences for mean, q10, q25, q50, q75, q90.
struct PctDiffRow {
  std::string key;
  std::array<std::optional<double>, 6> values;
};

struct GroupTables {
  Grouping grouping = Grouping::year;
  Dimension dimension = Dimension::sentiment;
  std::vector<QuantileRow> female;
  std::vector<QuantileRow> non_female;
  std::vector<PctDiffRow> pct_diff;
  std::vector<std::string> warnings;
};

GroupTables finalize_tables(const GroupPartial& partial, Grouping grouping, Dimension d);

/// Female and Non-Female distribution tables per year or per NUTS2 region
/// (plus a SPAIN row pooling everything), and their percentage differences.
/// Work is split across `workers` partial accumulators; output does not
/// depend on the worker count.
GroupTables group_tables(std::span<const PatternRecord> patterns, Grouping grouping, Dimension d,
                         std::size_t workers = 1);

}  // namespace toipol
