#include "resbench/error.hpp"
#include "resbench/experiments.hpp"

#include <algorithm>
#include <cmath>

namespace resbench {

std::string to_string(MatchStatus s)
{
    switch (s) {
    case MatchStatus::Matched:
        return "matched";
    case MatchStatus::BelowRange:
        return "below_range";
    case MatchStatus::Unreachable:
        return "unreachable";
    }
    return "unknown";
}

namespace {

void check_curve(std::span<const CurvePoint> c, const char* name)
{
    if (c.empty()) {
        throw ContractError(std::string("functional_compare: ") + name + " curve is empty");
    }
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (!std::isfinite(c[i].size) || !std::isfinite(c[i].error)) {
            throw ContractError(std::string("functional_compare: non-finite ") + name + " point");
        }
        if (i > 0 && !(c[i].size > c[i - 1].size)) {
            throw ContractError(std::string("functional_compare: ") + name
                                + " sizes must be strictly ascending");
        }
    }
}

} // namespace

EquivalenceCurve functional_compare(std::span<const CurvePoint> reference,
                                    std::span<const CurvePoint> candidate, TaskId task)
{
    check_curve(reference, "reference");
    check_curve(candidate, "candidate");

    std::vector<double> mono(candidate.size());
    mono[0] = candidate[0].error;
    for (std::size_t i = 1; i < candidate.size(); ++i) {
        mono[i] = std::min(mono[i - 1], candidate[i].error);
    }

    EquivalenceCurve out;
    out.task = task;
    for (const CurvePoint& r : reference) {
        EquivalencePoint p;
        p.reference_size = r.size;
        p.reference_error = r.error;
        if (mono[0] <= r.error) {
            p.status = MatchStatus::BelowRange;
            p.matched_size = candidate[0].size;
            p.matched_error = mono[0];
        } else if (mono.back() > r.error) {
            p.status = MatchStatus::Unreachable;
        } else {
            std::size_t i = 0;
            while (!(mono[i + 1] <= r.error)) {
                ++i;
            }
            // mono[i] > r.error >= mono[i + 1]
            const double t = (mono[i] - r.error) / (mono[i] - mono[i + 1]);
            p.status = MatchStatus::Matched;
            p.matched_size = candidate[i].size + t * (candidate[i + 1].size - candidate[i].size);
            p.matched_error = mono[i] + t * (mono[i + 1] - mono[i]);
        }
        out.points.push_back(p);
    }
    return out;
}

} // namespace resbench
