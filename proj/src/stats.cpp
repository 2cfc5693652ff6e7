#include "toipol/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace toipol {

// ---------------------------------------------------------------------------
// Daily series

bool GroupKey::matches(const PatternRecord& r) const {
  if (gender && r.gender != *gender) return false;
  if (nuts2 && r.nuts2 != nuts2) return false;
  return true;
}

std::string GroupKey::label() const {
  std::string out = gender ? std::string(to_string(*gender)) : "all";
  if (nuts2) out += "_" + *nuts2;
  return out;
}

namespace {

// Summation over sorted values makes the result independent of input order.
double sorted_sum(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

DailySeries daily_aggregate(std::span<const PatternRecord> patterns, const CorpusCounts& counts, Dimension d,
                            const GroupKey& group) {
  std::map<Date, std::vector<double>> by_day;
  for (const auto& r : patterns)
    if (group.matches(r)) by_day[r.date].push_back(r.polarity[d]);

  DailySeries out{d, group, {}};
  out.rows.reserve(by_day.size());
  for (auto& [date, values] : by_day) {
    auto it = counts.find(date);
    if (it == counts.end()) throw std::invalid_argument("corpus counts have no row for " + format_date(date));
    if (it->second.article_count <= 0)
      throw std::invalid_argument("corpus counts report no articles on " + format_date(date));
    const double sum = sorted_sum(values);
    DailyRow row;
    row.date = date;
    row.pattern_count = values.size();
    row.mean_polarity = sum / static_cast<double>(values.size());
    row.article_count = it->second.article_count;
    row.outlet_count = it->second.outlet_count;
    row.normalized_value = sum / static_cast<double>(row.article_count);
    out.rows.push_back(row);
  }
  return out;
}

DailySeries rolling_mean(const DailySeries& series, int window_days) {
  if (window_days < 1) throw std::invalid_argument("window must be at least one day");
  using std::chrono::sys_days;
  DailySeries out{series.dimension, series.group, {}};
  out.rows.reserve(series.rows.size());
  std::size_t first = 0;
  for (std::size_t i = 0; i < series.rows.size(); ++i) {
    const auto end_day = sys_days{series.rows[i].date};
    while (sys_days{series.rows[first].date} <= end_day - std::chrono::days{window_days}) ++first;
    double mean_sum = 0.0, norm_sum = 0.0;
    for (std::size_t j = first; j <= i; ++j) {
      mean_sum += series.rows[j].mean_polarity;
      norm_sum += series.rows[j].normalized_value;
    }
    const double n = static_cast<double>(i - first + 1);
    DailyRow row = series.rows[i];
    row.mean_polarity = mean_sum / n;
    row.normalized_value = norm_sum / n;
    out.rows.push_back(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Distribution statistics

namespace {

double quantile_sorted(const std::vector<double>& x, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(fmt::format("probability {} outside [0, 1]", p));
  const double h = static_cast<double>(x.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, x.size() - 1);
  const double v = x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
  return std::clamp(v, x[lo], x[hi]);
}

}  // namespace

std::vector<double> quantiles(std::span<const double> values, std::span<const double> probs) {
  if (values.empty()) throw std::invalid_argument("quantiles of an empty sample");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  std::vector<double> out;
  out.reserve(probs.size());
  for (double p : probs) out.push_back(quantile_sorted(x, p));
  return out;
}

double quantile(std::span<const double> values, double p) { return quantiles(values, std::span(&p, 1)).front(); }

Summary distribution_summary(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summary of an empty sample");
  std::vector<double> x(values.begin(), values.end());
  const double n = static_cast<double>(x.size());
  Summary s;
  s.count = x.size();
  s.mean = sorted_sum(x) / n;
  if (x.size() > 1) {
    double ss = 0.0;
    for (double v : x) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / (n - 1.0));
  } else {
    s.std = 0.0;
    s.std_defined = false;
  }
  for (std::size_t i = 0; i < kReportProbs.size(); ++i) s.q[i] = quantile_sorted(x, kReportProbs[i]);
  return s;
}

std::optional<double> pct_diff(double stat_female, double stat_nonfemale) {
  if (stat_nonfemale == 0.0) return std::nullopt;
  return 100.0 * (stat_female - stat_nonfemale) / std::abs(stat_nonfemale);
}

// ---------------------------------------------------------------------------
// Mann-Whitney U

std::string_view to_string(TestMethod m) { return m == TestMethod::exact ? "exact" : "normal_approximation"; }

namespace {

/// Null frequencies of U_a for sizes (n1, n2): f(m, n, u) = f(m-1, n, u-n) + f(m, n-1, u).
std::vector<double> u_frequencies(std::size_t n1, std::size_t n2) {
  const std::size_t umax = n1 * n2;
  // table[m][n] is the frequency vector for sizes (m, n).
  std::vector<std::vector<std::vector<double>>> table(n1 + 1, std::vector<std::vector<double>>(n2 + 1));
  for (std::size_t m = 0; m <= n1; ++m) {
    for (std::size_t n = 0; n <= n2; ++n) {
      auto& f = table[m][n];
      f.assign(m * n + 1, 0.0);
      if (m == 0 || n == 0) {
        f[0] = 1.0;
        continue;
      }
      // Largest pooled value either comes from a (beating all n of b) or from b.
      const auto& left = table[m - 1][n];
      const auto& down = table[m][n - 1];
      for (std::size_t u = 0; u < left.size(); ++u) f[u + n] += left[u];
      for (std::size_t u = 0; u < down.size(); ++u) f[u] += down[u];
    }
  }
  auto out = std::move(table[n1][n2]);
  out.resize(umax + 1, 0.0);
  return out;
}

}  // namespace

double mann_whitney_exact_p(double u, std::size_t n1, std::size_t n2) {
  const auto freq = u_frequencies(n1, n2);
  const double total = std::accumulate(freq.begin(), freq.end(), 0.0);
  const double umin = std::min(u, static_cast<double>(n1 * n2) - u);
  double tail = 0.0;
  for (std::size_t k = 0; k < freq.size() && static_cast<double>(k) <= umin + 1e-9; ++k) tail += freq[k];
  return std::min(1.0, 2.0 * tail / total);
}

TestReport mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("Mann-Whitney U needs two non-empty samples");
  const std::size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;

  std::vector<std::pair<double, bool>> pooled;  // (value, from a)
  pooled.reserve(n);
  for (double v : a) pooled.emplace_back(v, true);
  for (double v : b) pooled.emplace_back(v, false);
  std::sort(pooled.begin(), pooled.end(), [](auto& x, auto& y) { return x.first < y.first; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;  // sum of t^3 - t over tie groups
  bool ties = false;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && pooled[j].first == pooled[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k)
      if (pooled[k].second) rank_sum_a += avg_rank;
    if (t > 1) {
      ties = true;
      tie_term += t * t * t - t;
    }
    i = j;
  }

  const double dn1 = static_cast<double>(n1), dn2 = static_cast<double>(n2), dn = static_cast<double>(n);
  const double u_a = rank_sum_a - dn1 * (dn1 + 1.0) / 2.0;
  const double u_b = dn1 * dn2 - u_a;

  TestReport rep;
  rep.n1 = n1;
  rep.n2 = n2;
  rep.u_statistic = std::min(u_a, u_b);
  if (!ties && n <= kExactLimit) {
    rep.method = TestMethod::exact;
    rep.p_value = mann_whitney_exact_p(u_a, n1, n2);
    return rep;
  }
  rep.method = TestMethod::normal_approximation;
  const double mu = dn1 * dn2 / 2.0;
  const double var = dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (!(var > 0.0)) {
    rep.p_value = 1.0;
    return rep;
  }
  const double z = std::max(0.0, std::abs(u_a - mu) - 0.5) / std::sqrt(var);
  rep.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return rep;
}

// ---------------------------------------------------------------------------
// Grouped tables

std::vector<double> SampleAccumulator::sorted() const {
  auto v = values;
  std::sort(v.begin(), v.end());
  return v;
}

GroupPartial accumulate_groups(std::span<const PatternRecord> patterns, Grouping grouping, Dimension d) {
  GroupPartial out;
  const auto add = [&](const std::string& key, const PatternRecord& r) {
    auto& g = out[key];
    (r.gender == Gender::female ? g.female : g.non_female).add(r.polarity[d]);
  };
  for (const auto& r : patterns) {
    if (grouping == Grouping::year) {
      add(std::to_string(r.year()), r);
    } else {
      if (r.nuts2) add(*r.nuts2, r);
      add(std::string(kCountryRow), r);
    }
  }
  return out;
}

void merge_into(GroupPartial& into, const GroupPartial& from) {
  for (const auto& [key, samples] : from) into[key].merge(samples);
}

GroupTables finalize_tables(const GroupPartial& partial, Grouping grouping, Dimension d) {
  GroupTables t;
  t.grouping = grouping;
  t.dimension = d;

  std::vector<std::string> keys;
  for (const auto& [key, _] : partial)
    if (key != kCountryRow) keys.push_back(key);
  if (partial.contains(std::string(kCountryRow))) keys.emplace_back(kCountryRow);

  for (const auto& key : keys) {
    const auto& g = partial.at(key);
    const auto summarize = [](const SampleAccumulator& acc) -> std::optional<Summary> {
      if (acc.values.empty()) return std::nullopt;
      auto v = acc.sorted();
      return distribution_summary(v);
    };
    auto f = summarize(g.female);
    auto nf = summarize(g.non_female);
    PctDiffRow diff{key, {}};
    if (f && nf) {
      diff.values[0] = pct_diff(f->mean, nf->mean);
      for (std::size_t i = 0; i < 5; ++i) diff.values[i + 1] = pct_diff(f->q[i], nf->q[i]);
    } else {
      t.warnings.push_back(fmt::format("{} {}: no {} patterns", to_string(d), key, f ? "non_female" : "female"));
    }
    t.female.push_back({key, std::move(f)});
    t.non_female.push_back({key, std::move(nf)});
    t.pct_diff.push_back(std::move(diff));
  }
  return t;
}

GroupTables group_tables(std::span<const PatternRecord> patterns, Grouping grouping, Dimension d,
                         std::size_t workers) {
  workers = std::max<std::size_t>(1, std::min(workers, std::max<std::size_t>(1, patterns.size())));
  const std::size_t chunk = (patterns.size() + workers - 1) / workers;
  GroupPartial total;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(patterns.size(), w * chunk);
    const std::size_t end = std::min(patterns.size(), begin + chunk);
    merge_into(total, accumulate_groups(patterns.subspan(begin, end - begin), grouping, d));
  }
  return finalize_tables(total, grouping, d);
}

}  // namespace toipol
