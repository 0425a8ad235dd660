#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cranring/types.hpp"

namespace cranring {

struct EmptyHistogramError : std::runtime_error {
    EmptyHistogramError() : std::runtime_error("empty histogram") {}
};

/// Counts of integer latencies (UoT). Latencies are kept exact; any
/// conversion to microseconds happens at presentation only.
class LatencyHistogram {
public:
    void record(Uot latency, std::int64_t n = 1);
    void merge(const LatencyHistogram& other);

    std::int64_t total() const { return total_; }
    bool empty() const { return total_ == 0; }
    Uot max() const;
    double mean() const;
    /// Smallest latency whose cumulative fraction reaches q (0 < q <= 1).
    Uot quantile(double q) const;
    std::int64_t count_at(Uot latency) const;
    Uot max_latency_tracked() const { return static_cast<Uot>(counts_.size()) - 1; }

    /// (latency, cumulative fraction) for every latency with samples.
    std::vector<std::pair<Uot, double>> cdf() const;

private:
    std::vector<std::int64_t> counts_;
    std::int64_t total_ = 0;
};

struct LatencySummary {
    double mean = 0.0;
    Uot max = 0;
    Uot p50 = 0, p90 = 0, p99 = 0;
};

/// Exact statistics from integer counts; throws EmptyHistogramError.
LatencySummary summarize(const LatencyHistogram& hist);

/// Per-class latency samples plus the fill/waste counters of one run.
class MetricsSink {
public:
    MetricsSink() = default;

    void record(TrafficClass cls, Uot latency, int node, std::int64_t period);

    const LatencyHistogram& histogram(TrafficClass cls) const {
        return hist_[static_cast<int>(cls)];
    }
    LatencyHistogram& histogram(TrafficClass cls) { return hist_[static_cast<int>(cls)]; }

    void count_fill(TrafficClass cls) { ++fills_[static_cast<int>(cls)]; }
    std::int64_t fills(TrafficClass cls) const { return fills_[static_cast<int>(cls)]; }
    std::int64_t fills_total() const { return fills_[0] + fills_[1] + fills_[2]; }

    /// Fraction of the ring's container-fill capacity used per period
    /// (capacity is one fill per UoT, i.e. P fills per period).
    double load_fraction(Uot period, std::int64_t periods_measured) const {
        if (period <= 0 || periods_measured <= 0) return 0.0;
        return static_cast<double>(fills_total()) /
               (static_cast<double>(period) * static_cast<double>(periods_measured));
    }

    void set_reserved_unused(double w) { reserved_unused_ = w; }
    double reserved_unused() const { return reserved_unused_; }

    void merge(const MetricsSink& other);

    /// per-period fill counts (measured window), used by conservation checks
    void count_fill_in_period(TrafficClass cls, std::int64_t period_index);
    const std::vector<std::int64_t>& per_period_fills(TrafficClass cls) const {
        return period_fills_[static_cast<int>(cls)];
    }

private:
    std::array<LatencyHistogram, kTrafficClassCount> hist_;
    std::array<std::int64_t, kTrafficClassCount> fills_{0, 0, 0};
    std::array<std::vector<std::int64_t>, kTrafficClassCount> period_fills_;
    double reserved_unused_ = 0.0;
};

/// CSV rows "class,latency_uot,count", ascending latency.
std::string histogram_csv(TrafficClass cls, const LatencyHistogram& hist);

}  // namespace cranring
