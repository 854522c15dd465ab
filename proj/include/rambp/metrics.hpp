#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rambp/histogram.hpp"

namespace rambp {

/// 0.5 * sum (x_i - y_i)^2 / (x_i + y_i); bins with x_i + y_i = 0 add nothing.
double chi_square(const FeatureHistogram& x, const FeatureHistogram& y);

struct LabeledHistogram {
  FeatureHistogram histogram;
  std::size_t label = 0;
};

struct DistanceMatrix {
  std::size_t queries = 0;
  std::size_t references = 0;
  std::vector<double> distances;  // row-major, queries x references

  double at(std::size_t q, std::size_t r) const { return distances[q * references + r]; }
};

DistanceMatrix distance_matrix(const std::vector<LabeledHistogram>& queries,
                               const std::vector<LabeledHistogram>& references, unsigned workers = 1);

/// Indices sorted by ascending distance; equal distances keep enumeration order.
std::vector<std::size_t> ascending_order(const std::vector<double>& distances);

/// Majority vote over the k nearest references. Ties in the vote go to the
/// tied class that owns the nearest single member.
std::size_t knn_vote(const std::vector<double>& distances, const std::vector<LabeledHistogram>& train,
                     std::size_t k);

std::size_t knn_classify(const FeatureHistogram& query, const std::vector<LabeledHistogram>& train,
                         std::size_t k);

struct RankedRetrieval {
  std::size_t query_class = 0;
  std::vector<std::size_t> ranked;
  std::vector<double> distances;  // along `ranked`
  std::vector<bool> relevant;     // along `ranked`
};

RankedRetrieval rank_by_distance(std::size_t query_class, const std::vector<double>& distances,
                                 const std::vector<LabeledHistogram>& db);

RankedRetrieval rank_references(const LabeledHistogram& query, const std::vector<LabeledHistogram>& db);

struct RecallPrecision {
  double recall = 0.0;
  double precision = 0.0;
};

RecallPrecision recall_precision(const RankedRetrieval& r, std::size_t k, std::size_t class_size);

struct PrCurve {
  std::vector<std::size_t> ks;
  std::vector<double> recall;
  std::vector<double> precision;
};

PrCurve pr_curve(const std::vector<LabeledHistogram>& queries, const std::vector<LabeledHistogram>& db,
                 const std::vector<std::size_t>& ks, unsigned workers = 1);

/// `k,recall,precision` rows under a header.
std::string pr_curve_csv(const PrCurve& curve);

/// Decimal text with 17 significant digits (round-trips every double).
std::string format_real(double v);

}  // namespace rambp
