#pragma once

#include "staypoint/detector.hpp"
#include "staypoint/trajectory_io.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace staypoint {

struct MatchConfig {
    double radius_m = 500.0;
    double min_overlap_min = 1.0;

    /// Throws std::invalid_argument unless both are positive.
    void validate() const;
};

/// Indices refer to the spans passed to match().
struct MatchPair {
    std::size_t detected = 0;
    std::size_t truth = 0;
    double overlap_min = 0.0;
    double distance_m = 0.0;

    bool operator==(const MatchPair&) const = default;
};

/// Minutes shared by [a0, a1] and [b0, b1]; never negative.
double overlap_minutes(double a0, double a1, double b0, double b1);

/// Greedy one-to-one matching of detected Stay records to truth on the same
/// day. Candidate pairs need at least `min_overlap_min` of shared time and a
/// centre distance within `radius_m`; they are taken in order of decreasing
/// overlap (ties: smaller distance, then lower indices). Records that are not
/// of class Stay never match.
std::vector<MatchPair> match(std::span<const StayPoint> detected, std::span<const GroundTruthStay> truth,
                             const MatchConfig& cfg = {});

struct InflectionStats {
    std::size_t count = 0;
    double min_min = 0.0;
    double max_min = 0.0;
    double avg_min = 0.0;
    std::size_t at_least_5_min = 0;
};

struct EvalReport {
    std::size_t n_truth = 0;
    std::size_t n_detected = 0;         ///< Stay records
    std::size_t n_candidates = 0;       ///< Candidate records, not scored
    std::size_t n_matched = 0;
    std::size_t n_false_positive = 0;
    std::optional<double> success_rate_pct;     ///< absent without truth
    std::optional<double> false_positive_pct;   ///< absent without detected stays
    // Over matched pairs, deviation = estimated - actual duration.
    std::optional<double> duration_dev_avg_pct;
    std::optional<double> duration_dev_std_pct;
    std::optional<double> duration_dev_avg_min;
    std::optional<double> duration_dev_std_min;
    std::optional<double> duration_abs_dev_avg_pct;
    double estimated_total_min = 0.0;
    double actual_total_min = 0.0;
    InflectionStats inflections;
};

/// Standard deviations are population deviations.
EvalReport report(std::span<const StayPoint> detected, std::span<const GroundTruthStay> truth,
                  std::span<const MatchPair> pairs);

/// match() followed by report().
EvalReport evaluate(std::span<const StayPoint> detected, std::span<const GroundTruthStay> truth,
                    const MatchConfig& cfg = {});

/// Single-line JSON object; absent values are null.
std::string report_json(const EvalReport& r);
std::string report_table(const EvalReport& r);

} // namespace staypoint
