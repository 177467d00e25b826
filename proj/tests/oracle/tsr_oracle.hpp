#pragma once

// Brute-force reference for the TSR statistics. Written against the textual
// definition only: registers are plain vectors of 0/1 in index order, pairs
// are found by literally comparing neighbours, and every derived value is an
// exact fraction.

#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

// bits[0] is register index 1 (the most recent outcome).
using Bits = std::vector<int>;

// Enumerates registers by reading `code` most-significant-bit first:
// index 1 <- bit L-1 of code, ..., index L <- bit 0.
inline Bits bits_of(std::uint64_t code, unsigned length)
{
    Bits b(length);
    for (unsigned k = 1; k <= length; ++k)
        b[k - 1] = static_cast<int>((code >> (length - k)) & 1u);
    return b;
}

struct Counts
{
    long n0 = 0, n1 = 0, nc0 = 0, nc1 = 0;
};

// half = 1 scans indices 1..L/2, half = 2 scans L/2+1..L.
inline Counts scan(const Bits& b, int half)
{
    const std::size_t h = b.size() / 2;
    const std::size_t lo = half == 1 ? 0 : h;
    Counts c;
    for (std::size_t i = lo; i < lo + h; ++i)
        (b[i] == 0 ? c.n0 : c.n1) += 1;
    for (std::size_t i = lo; i + 1 < lo + h; ++i)
    {
        if (b[i] == 0 && b[i + 1] == 0)
            ++c.nc0;
        if (b[i] == 1 && b[i + 1] == 1)
            ++c.nc1;
    }
    return c;
}

struct Fraction
{
    long num = 0;
    long den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline Fraction reduce(long num, long den)
{
    if (den < 0)
        num = -num, den = -den;
    const long g = std::gcd(num, den);
    return g == 0 ? Fraction{0, 1} : Fraction{num / g, den / g};
}

// (n0/(L/2))*nc0 - (n1/(L/2))*nc1
inline Fraction weighted(const Counts& c, unsigned length)
{
    return reduce(c.n0 * c.nc0 - c.n1 * c.nc1, static_cast<long>(length / 2));
}

// alpha = quarters/4 so every alpha of the test grid stays exact.
inline Fraction mu(const Fraction& x1, const Fraction& x2, long quarters)
{
    return reduce(quarters * x1.num * x2.den + (4 - quarters) * x2.num * x1.den, 4 * x1.den * x2.den);
}

} // namespace oracle
