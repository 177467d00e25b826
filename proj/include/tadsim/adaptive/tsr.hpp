#pragma once

#include "tadsim/time.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace tadsim::adaptive {

enum class TsrInit : std::uint8_t
{
    Alternating, // 0101... with index 1 holding 0
    Zeros,
};

// Traffic status register: fixed-length binary shift register. Index 1 is
// the most recent outcome; push() shifts everything one place toward index L
// and drops the oldest bit.
class TsrRegister
{
  public:
    static constexpr unsigned kMaxLength = 64;

    // Throws ConfigError unless length is even and in [2, kMaxLength].
    explicit TsrRegister(unsigned length, TsrInit init = TsrInit::Alternating);

    // Builds a register from bits given in index order (bits[0] is index 1).
    static TsrRegister from_bits(std::initializer_list<int> bits);
    static TsrRegister from_word(unsigned length, std::uint64_t word);

    unsigned length() const noexcept { return length_; }

    // 1-based access, matching the register's index convention.
    bool at(unsigned index) const;

    void push(bool bit) noexcept;
    TsrRegister pushed(bool bit) const noexcept
    {
        TsrRegister copy = *this;
        copy.push(bit);
        return copy;
    }

    TsrRegister complemented() const noexcept;

    // Bit i of the word is register index i + 1.
    std::uint64_t word() const noexcept { return word_; }

    // Index order, e.g. "10100101".
    std::string to_string() const;

    friend bool operator==(const TsrRegister&, const TsrRegister&) = default;

  private:
    TsrRegister(unsigned length, std::uint64_t word, int /*tag*/) : length_(length), word_(word) {}

    std::uint64_t mask() const noexcept
    {
        return length_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << length_) - 1;
    }

    unsigned length_;
    std::uint64_t word_;
};

// One register per neighbour transmitter, all of the same length.
class TsrBank
{
  public:
    TsrBank(unsigned length, TsrInit init) : length_(length), init_(init) {}

    // Idempotent.
    void add_neighbor(NodeId id);
    bool contains(NodeId id) const { return registers_.contains(id); }

    TsrRegister& at(NodeId id);
    const TsrRegister& at(NodeId id) const;

    std::size_t size() const noexcept { return registers_.size(); }
    unsigned length() const noexcept { return length_; }
    const std::map<NodeId, TsrRegister>& registers() const noexcept { return registers_; }

  private:
    unsigned length_;
    TsrInit init_;
    std::map<NodeId, TsrRegister> registers_;
};

enum class Half : std::uint8_t
{
    First,  // indices 1 .. L/2, the most recent outcomes
    Second, // indices L/2 + 1 .. L
};

struct HalfStats
{
    unsigned n0 = 0;
    unsigned n1 = 0;
    unsigned nc0 = 0; // adjacent zero pairs, overlapping
    unsigned nc1 = 0;

    friend bool operator==(const HalfStats&, const HalfStats&) = default;
};

// Pairs are counted only between adjacent positions inside the half; no pair
// spans the half boundary. A run 0,0,0 contributes two zero pairs.
HalfStats half_stats(const TsrRegister& reg, Half half) noexcept;

} // namespace tadsim::adaptive
