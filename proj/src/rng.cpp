#include "resbench/rng.hpp"

#include <cmath>

namespace resbench {

std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts) noexcept
{
    std::uint64_t h = 0x243f6a8885a308d3ULL;
    for (std::uint64_t p : parts) {
        h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
    }
    return h;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : seed_(seed), stream_id_(stream_id), key_(derive_seed({seed, stream_id}))
{
}

std::uint64_t RngStream::next_u64() noexcept
{
    // Counter mode: hash(key, counter). Two rounds decorrelate adjacent keys.
    const std::uint64_t c = counter_++;
    return mix64(mix64(key_ + c * 0xd1b54a32d192ed03ULL) ^ key_);
}

double RngStream::uniform() noexcept
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::normal() noexcept
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double a = 0.0;
    double b = 0.0;
    double s = 0.0;
    do {
        a = 2.0 * uniform() - 1.0;
        b = 2.0 * uniform() - 1.0;
        s = a * a + b * b;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = b * f;
    has_spare_ = true;
    return a * f;
}

} // namespace resbench
