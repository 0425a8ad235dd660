#include "cranring/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace cranring {

void LatencyHistogram::record(Uot latency, std::int64_t n) {
    if (latency < 0) throw ConfigError("negative latency");
    auto idx = static_cast<std::size_t>(latency);
    if (idx >= counts_.size()) counts_.resize(idx + 1, 0);
    counts_[idx] += n;
    total_ += n;
}

void LatencyHistogram::merge(const LatencyHistogram& other) {
    if (other.counts_.size() > counts_.size()) counts_.resize(other.counts_.size(), 0);
    for (std::size_t i = 0; i < other.counts_.size(); ++i) counts_[i] += other.counts_[i];
    total_ += other.total_;
}

Uot LatencyHistogram::max() const {
    for (std::size_t i = counts_.size(); i-- > 0;) {
        if (counts_[i] > 0) return static_cast<Uot>(i);
    }
    return 0;
}

double LatencyHistogram::mean() const {
    if (total_ == 0) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        acc += static_cast<double>(i) * static_cast<double>(counts_[i]);
    }
    return acc / static_cast<double>(total_);
}

Uot LatencyHistogram::quantile(double q) const {
    if (total_ == 0) throw EmptyHistogramError();
    auto target = static_cast<std::int64_t>(std::ceil(q * static_cast<double>(total_)));
    if (target < 1) target = 1;
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        acc += counts_[i];
        if (acc >= target) return static_cast<Uot>(i);
    }
    return max();
}

std::int64_t LatencyHistogram::count_at(Uot latency) const {
    auto idx = static_cast<std::size_t>(latency);
    return latency >= 0 && idx < counts_.size() ? counts_[idx] : 0;
}

std::vector<std::pair<Uot, double>> LatencyHistogram::cdf() const {
    std::vector<std::pair<Uot, double>> out;
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (counts_[i] == 0) continue;
        acc += counts_[i];
        out.emplace_back(static_cast<Uot>(i), static_cast<double>(acc) / static_cast<double>(total_));
    }
    return out;
}

LatencySummary summarize(const LatencyHistogram& hist) {
    if (hist.empty()) throw EmptyHistogramError();
    LatencySummary s;
    s.mean = hist.mean();
    s.max = hist.max();
    s.p50 = hist.quantile(0.50);
    s.p90 = hist.quantile(0.90);
    s.p99 = hist.quantile(0.99);
    return s;
}

void MetricsSink::record(TrafficClass cls, Uot latency, int node, std::int64_t period) {
    (void)node;
    (void)period;
    hist_[static_cast<int>(cls)].record(latency);
}

void MetricsSink::count_fill_in_period(TrafficClass cls, std::int64_t period_index) {
    auto& v = period_fills_[static_cast<int>(cls)];
    auto idx = static_cast<std::size_t>(period_index);
    if (idx >= v.size()) v.resize(idx + 1, 0);
    ++v[idx];
}

void MetricsSink::merge(const MetricsSink& other) {
    for (int i = 0; i < kTrafficClassCount; ++i) {
        hist_[i].merge(other.hist_[i]);
        fills_[i] += other.fills_[i];
    }
    reserved_unused_ += other.reserved_unused_;
}

std::string histogram_csv(TrafficClass cls, const LatencyHistogram& hist) {
    std::string out = "class,latency_uot,count\n";
    for (Uot l = 0; l <= hist.max_latency_tracked(); ++l) {
        std::int64_t n = hist.count_at(l);
        if (n == 0) continue;
        out += to_string(cls);
        out += ',';
        out += std::to_string(l);
        out += ',';
        out += std::to_string(n);
        out += '\n';
    }
    return out;
}

}  // namespace cranring
