#include "resbench/error.hpp"
#include "resbench/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace resbench {

Summary describe(std::span<const double> samples)
{
    if (samples.empty()) {
        throw ContractError("describe: empty sample");
    }
    Summary s;
    s.count = samples.size();
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double x : samples) {
        sum += x;
    }
    s.mean = sum / n;
    double ss = 0.0;
    for (double x : samples) {
        ss += (x - s.mean) * (x - s.mean);
    }
    s.std = std::sqrt(ss / n);
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

} // namespace resbench
