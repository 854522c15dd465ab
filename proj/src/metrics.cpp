#include "rambp/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rambp/parallel.hpp"

namespace rambp {

double chi_square(const FeatureHistogram& x, const FeatureHistogram& y) {
  if (x.size() != y.size()) throw std::invalid_argument("chi_square: bin counts differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double s = x.bins[i] + y.bins[i];
    if (s == 0.0) continue;
    const double d = x.bins[i] - y.bins[i];
    sum += d * d / s;
  }
  return 0.5 * sum;
}

DistanceMatrix distance_matrix(const std::vector<LabeledHistogram>& queries,
                               const std::vector<LabeledHistogram>& references, unsigned workers) {
  DistanceMatrix m{queries.size(), references.size(),
                   std::vector<double>(queries.size() * references.size())};
  parallel_for(queries.size(), workers, [&](std::size_t q) {
    for (std::size_t r = 0; r < references.size(); ++r)
      m.distances[q * references.size() + r] = chi_square(queries[q].histogram, references[r].histogram);
  });
  return m;
}

std::vector<std::size_t> ascending_order(const std::vector<double>& distances) {
  std::vector<std::size_t> order(distances.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return distances[a] < distances[b]; });
  return order;
}

std::size_t knn_vote(const std::vector<double>& distances, const std::vector<LabeledHistogram>& train,
                     std::size_t k) {
  if (train.empty()) throw std::invalid_argument("knn: empty training set");
  if (k < 1 || k > train.size()) throw std::invalid_argument("knn: k must lie in [1, training size]");
  const auto order = ascending_order(distances);

  // class -> (votes, rank of its nearest member)
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> tally;
  for (std::size_t rank = 0; rank < k; ++rank) {
    const auto label = train[order[rank]].label;
    auto [it, inserted] = tally.try_emplace(label, 0, rank);
    ++it->second.first;
  }
  auto best = tally.begin();
  for (auto it = tally.begin(); it != tally.end(); ++it) {
    const auto [votes, nearest] = it->second;
    if (votes > best->second.first || (votes == best->second.first && nearest < best->second.second)) best = it;
  }
  return best->first;
}

std::size_t knn_classify(const FeatureHistogram& query, const std::vector<LabeledHistogram>& train,
                         std::size_t k) {
  std::vector<double> d(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) d[i] = chi_square(query, train[i].histogram);
  return knn_vote(d, train, k);
}

RankedRetrieval rank_by_distance(std::size_t query_class, const std::vector<double>& distances,
                                 const std::vector<LabeledHistogram>& db) {
  if (db.empty()) throw std::invalid_argument("retrieval: empty database");
  RankedRetrieval out;
  out.query_class = query_class;
  out.ranked = ascending_order(distances);
  for (auto idx : out.ranked) {
    out.distances.push_back(distances[idx]);
    out.relevant.push_back(db[idx].label == query_class);
  }
  return out;
}

RankedRetrieval rank_references(const LabeledHistogram& query, const std::vector<LabeledHistogram>& db) {
  std::vector<double> d(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) d[i] = chi_square(query.histogram, db[i].histogram);
  return rank_by_distance(query.label, d, db);
}

RecallPrecision recall_precision(const RankedRetrieval& r, std::size_t k, std::size_t class_size) {
  if (k < 1 || k > r.ranked.size()) throw std::invalid_argument("recall_precision: k out of range");
  if (class_size < 1) throw std::invalid_argument("recall_precision: class size must be >= 1");
  const auto hits = static_cast<double>(std::count(r.relevant.begin(), r.relevant.begin() + k, true));
  return {hits / static_cast<double>(class_size), hits / static_cast<double>(k)};
}

PrCurve pr_curve(const std::vector<LabeledHistogram>& queries, const std::vector<LabeledHistogram>& db,
                 const std::vector<std::size_t>& ks, unsigned workers) {
  if (queries.empty() || db.empty()) throw std::invalid_argument("pr_curve: empty queries or database");
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (ks[i] % 2 == 0 || ks[i] > db.size()) throw std::invalid_argument("pr_curve: k must be odd and <= db size");
    if (i && ks[i] <= ks[i - 1]) throw std::invalid_argument("pr_curve: ks must be ascending");
  }
  std::map<std::size_t, std::size_t> class_sizes;
  for (const auto& e : db) ++class_sizes[e.label];

  const auto dm = distance_matrix(queries, db, workers);
  // per-query values, reduced in query order
  std::vector<std::vector<RecallPrecision>> per_query(queries.size());
  parallel_for(queries.size(), workers, [&](std::size_t q) {
    const auto it = class_sizes.find(queries[q].label);
    if (it == class_sizes.end()) throw std::invalid_argument("pr_curve: query class absent from database");
    const std::vector<double> row(dm.distances.begin() + q * db.size(), dm.distances.begin() + (q + 1) * db.size());
    const auto ranked = rank_by_distance(queries[q].label, row, db);
    for (auto k : ks) per_query[q].push_back(recall_precision(ranked, k, it->second));
  });

  PrCurve curve{ks, std::vector<double>(ks.size(), 0.0), std::vector<double>(ks.size(), 0.0)};
  for (const auto& rp : per_query)
    for (std::size_t i = 0; i < ks.size(); ++i) {
      curve.recall[i] += rp[i].recall;
      curve.precision[i] += rp[i].precision;
    }
  const auto n = static_cast<double>(queries.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    curve.recall[i] /= n;
    curve.precision[i] /= n;
  }
  return curve;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string pr_curve_csv(const PrCurve& curve) {
  std::ostringstream out;
  out << "k,recall,precision\n";
  for (std::size_t i = 0; i < curve.ks.size(); ++i)
    out << curve.ks[i] << ',' << format_real(curve.recall[i]) << ',' << format_real(curve.precision[i]) << '\n';
  return std::move(out).str();
}

}  // namespace rambp
