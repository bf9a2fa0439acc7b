#include "staypoint/evaluation.hpp"

#include "staypoint/curve_transform.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace staypoint {

void MatchConfig::validate() const
{
    if (!(radius_m > 0.0))
        throw std::invalid_argument("radius_m must be positive");
    if (!(min_overlap_min > 0.0))
        throw std::invalid_argument("min_overlap_min must be positive");
}

double overlap_minutes(double a0, double a1, double b0, double b1)
{
    return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

std::vector<MatchPair> match(std::span<const StayPoint> detected, std::span<const GroundTruthStay> truth,
                             const MatchConfig& cfg)
{
    cfg.validate();
    std::vector<MatchPair> candidates;
    for (std::size_t d = 0; d < detected.size(); ++d) {
        const auto& sp = detected[d];
        if (sp.cls != StayClass::Stay)
            continue;
        for (std::size_t t = 0; t < truth.size(); ++t) {
            const auto& gt = truth[t];
            if (gt.day != sp.day)
                continue;
            const double overlap = overlap_minutes(sp.start_minute, sp.end_minute, gt.arrival_min, gt.departure_min);
            if (overlap < cfg.min_overlap_min)
                continue;
            const double dist_m = 1000.0 * haversine_km({sp.latitude, sp.longitude}, {gt.latitude, gt.longitude});
            if (dist_m > cfg.radius_m)
                continue;
            candidates.push_back({d, t, overlap, dist_m});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const MatchPair& a, const MatchPair& b) {
        if (a.overlap_min != b.overlap_min)
            return a.overlap_min > b.overlap_min;
        if (a.distance_m != b.distance_m)
            return a.distance_m < b.distance_m;
        if (a.detected != b.detected)
            return a.detected < b.detected;
        return a.truth < b.truth;
    });

    std::vector<bool> used_d(detected.size(), false);
    std::vector<bool> used_t(truth.size(), false);
    std::vector<MatchPair> pairs;
    for (const auto& c : candidates) {
        if (used_d[c.detected] || used_t[c.truth])
            continue;
        used_d[c.detected] = used_t[c.truth] = true;
        pairs.push_back(c);
    }
    std::sort(pairs.begin(), pairs.end(), [](const MatchPair& a, const MatchPair& b) { return a.detected < b.detected; });
    return pairs;
}

namespace {

struct Moments {
    double mean = 0.0;
    double std = 0.0;
};

Moments moments(const std::vector<double>& v)
{
    Moments m;
    for (double x : v)
        m.mean += x;
    m.mean /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double x : v)
        ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(v.size()));
    return m;
}

} // namespace

EvalReport report(std::span<const StayPoint> detected, std::span<const GroundTruthStay> truth,
                  std::span<const MatchPair> pairs)
{
    EvalReport r;
    r.n_truth = truth.size();
    r.n_matched = pairs.size();

    std::vector<double> inflections;
    for (const auto& sp : detected) {
        if (sp.cls == StayClass::Stay)
            ++r.n_detected;
        else if (sp.cls == StayClass::Candidate)
            ++r.n_candidates;
        else
            inflections.push_back(sp.estimated_duration_min);
    }
    r.n_false_positive = r.n_detected - std::min(r.n_detected, r.n_matched);
    if (r.n_truth > 0)
        r.success_rate_pct = 100.0 * static_cast<double>(r.n_matched) / static_cast<double>(r.n_truth);
    if (r.n_detected > 0)
        r.false_positive_pct = 100.0 * static_cast<double>(r.n_false_positive) / static_cast<double>(r.n_detected);

    if (!pairs.empty()) {
        std::vector<double> dev_min;
        std::vector<double> dev_pct;
        std::vector<double> abs_pct;
        for (const auto& p : pairs) {
            const double estimated = detected[p.detected].estimated_duration_min;
            const double actual = truth[p.truth].duration_min();
            r.estimated_total_min += estimated;
            r.actual_total_min += actual;
            dev_min.push_back(estimated - actual);
            dev_pct.push_back(100.0 * (estimated - actual) / actual);
            abs_pct.push_back(std::abs(dev_pct.back()));
        }
        const auto m = moments(dev_min);
        const auto pct = moments(dev_pct);
        r.duration_dev_avg_min = m.mean;
        r.duration_dev_std_min = m.std;
        r.duration_dev_avg_pct = pct.mean;
        r.duration_dev_std_pct = pct.std;
        r.duration_abs_dev_avg_pct = moments(abs_pct).mean;
    }

    auto& inf = r.inflections;
    inf.count = inflections.size();
    if (!inflections.empty()) {
        inf.min_min = *std::min_element(inflections.begin(), inflections.end());
        inf.max_min = *std::max_element(inflections.begin(), inflections.end());
        inf.avg_min = moments(inflections).mean;
        inf.at_least_5_min = static_cast<std::size_t>(
            std::count_if(inflections.begin(), inflections.end(), [](double d) { return d >= 5.0; }));
    }
    return r;
}

EvalReport evaluate(std::span<const StayPoint> detected, std::span<const GroundTruthStay> truth,
                    const MatchConfig& cfg)
{
    const auto pairs = match(detected, truth, cfg);
    return report(detected, truth, pairs);
}

namespace {

nlohmann::json opt(const std::optional<double>& v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string fmt(const std::optional<double>& v, const char* unit = "")
{
    if (!v)
        return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f%s", *v, unit);
    return buf;
}

} // namespace

std::string report_json(const EvalReport& r)
{
    nlohmann::ordered_json j;
    j["n_truth"] = r.n_truth;
    j["n_detected"] = r.n_detected;
    j["n_candidates"] = r.n_candidates;
    j["n_matched"] = r.n_matched;
    j["n_false_positive"] = r.n_false_positive;
    j["success_rate_pct"] = opt(r.success_rate_pct);
    j["false_positive_pct"] = opt(r.false_positive_pct);
    j["duration_dev_avg_pct"] = opt(r.duration_dev_avg_pct);
    j["duration_dev_std_pct"] = opt(r.duration_dev_std_pct);
    j["duration_dev_avg_min"] = opt(r.duration_dev_avg_min);
    j["duration_dev_std_min"] = opt(r.duration_dev_std_min);
    j["duration_abs_dev_avg_pct"] = opt(r.duration_abs_dev_avg_pct);
    j["estimated_total_min"] = r.estimated_total_min;
    j["actual_total_min"] = r.actual_total_min;
    j["inflections"] = {{"count", r.inflections.count},
                        {"min_min", r.inflections.min_min},
                        {"max_min", r.inflections.max_min},
                        {"avg_min", r.inflections.avg_min},
                        {"at_least_5_min", r.inflections.at_least_5_min}};
    return j.dump();
}

std::string report_table(const EvalReport& r)
{
    const std::pair<std::string, std::string> rows[] = {
        {"truth stays", std::to_string(r.n_truth)},
        {"detected stays", std::to_string(r.n_detected)},
        {"candidates", std::to_string(r.n_candidates)},
        {"matched", std::to_string(r.n_matched)},
        {"false positives", std::to_string(r.n_false_positive)},
        {"success rate", fmt(r.success_rate_pct, " %")},
        {"false positive rate", fmt(r.false_positive_pct, " %")},
        {"duration deviation avg", fmt(r.duration_dev_avg_pct, " %") + " / " + fmt(r.duration_dev_avg_min, " min")},
        {"duration deviation std", fmt(r.duration_dev_std_pct, " %") + " / " + fmt(r.duration_dev_std_min, " min")},
        {"mean |deviation|", fmt(r.duration_abs_dev_avg_pct, " %")},
        {"estimated / actual total", fmt(r.estimated_total_min) + " / " + fmt(r.actual_total_min) + " min"},
        {"inflections", std::to_string(r.inflections.count)},
        {"inflection min/max/avg", fmt(r.inflections.min_min) + " / " + fmt(r.inflections.max_min) + " / " +
                                       fmt(r.inflections.avg_min) + " min"},
        {"inflections >= 5 min", std::to_string(r.inflections.at_least_5_min)},
    };
    std::size_t width = 0;
    for (const auto& [name, value] : rows)
        width = std::max(width, name.size());
    std::ostringstream out;
    for (const auto& [name, value] : rows)
        out << name << std::string(width - name.size() + 2, ' ') << value << '\n';
    return out.str();
}

} // namespace staypoint
