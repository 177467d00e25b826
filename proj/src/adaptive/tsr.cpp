#include "tadsim/adaptive/tsr.hpp"

#include "tadsim/errors.hpp"

#include <bit>

namespace tadsim::adaptive {

namespace {

std::uint64_t alternating_word(unsigned length)
{
    // Index 1 = 0, index 2 = 1, ... so odd bit positions of the word are set.
    std::uint64_t word = 0;
    for (unsigned i = 1; i < length; i += 2)
        word |= std::uint64_t{1} << i;
    return word;
}

} // namespace

TsrRegister::TsrRegister(unsigned length, TsrInit init) : length_(length), word_(0)
{
    if (length < 2 || length > kMaxLength || length % 2 != 0)
        throw ConfigError("TSR length must be an even number in [2, 64], got " + std::to_string(length));
    if (init == TsrInit::Alternating)
        word_ = alternating_word(length);
}

TsrRegister TsrRegister::from_bits(std::initializer_list<int> bits)
{
    TsrRegister reg(static_cast<unsigned>(bits.size()), TsrInit::Zeros);
    unsigned i = 0;
    for (int b : bits)
    {
        if (b != 0 && b != 1)
            throw ConfigError("TSR bits must be 0 or 1");
        if (b)
            reg.word_ |= std::uint64_t{1} << i;
        ++i;
    }
    return reg;
}

TsrRegister TsrRegister::from_word(unsigned length, std::uint64_t word)
{
    TsrRegister reg(length, TsrInit::Zeros);
    reg.word_ = word & reg.mask();
    return reg;
}

bool TsrRegister::at(unsigned index) const
{
    if (index < 1 || index > length_)
        throw std::out_of_range("TSR index " + std::to_string(index) + " outside 1.." + std::to_string(length_));
    return (word_ >> (index - 1)) & 1u;
}

void TsrRegister::push(bool bit) noexcept
{
    word_ = ((word_ << 1) | static_cast<std::uint64_t>(bit)) & mask();
}

TsrRegister TsrRegister::complemented() const noexcept
{
    return TsrRegister(length_, ~word_ & mask(), 0);
}

std::string TsrRegister::to_string() const
{
    std::string s(length_, '0');
    for (unsigned i = 0; i < length_; ++i)
        if ((word_ >> i) & 1u)
            s[i] = '1';
    return s;
}

void TsrBank::add_neighbor(NodeId id)
{
    registers_.try_emplace(id, length_, init_);
}

TsrRegister& TsrBank::at(NodeId id)
{
    auto it = registers_.find(id);
    if (it == registers_.end())
        throw SimulationFault("no TSR for node " + std::to_string(id));
    return it->second;
}

const TsrRegister& TsrBank::at(NodeId id) const
{
    auto it = registers_.find(id);
    if (it == registers_.end())
        throw SimulationFault("no TSR for node " + std::to_string(id));
    return it->second;
}

HalfStats half_stats(const TsrRegister& reg, Half half) noexcept
{
    const unsigned width = reg.length() / 2;
    const unsigned shift = half == Half::First ? 0 : width;
    const std::uint64_t mask = (std::uint64_t{1} << width) - 1;
    const std::uint64_t ones = (reg.word() >> shift) & mask;
    const std::uint64_t zeros = ~ones & mask;

    // Adjacent pairs inside the half: AND each position with its neighbour,
    // restricted to width - 1 pair slots.
    const std::uint64_t pair_mask = mask >> 1;
    HalfStats s;
    s.n1 = static_cast<unsigned>(std::popcount(ones));
    s.n0 = width - s.n1;
    s.nc1 = static_cast<unsigned>(std::popcount(ones & (ones >> 1) & pair_mask));
    s.nc0 = static_cast<unsigned>(std::popcount(zeros & (zeros >> 1) & pair_mask));
    return s;
}

} // namespace tadsim::adaptive
