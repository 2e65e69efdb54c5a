#pragma once

// Input tape: the only way an evaluator may look at input bits. Every read
// is recorded so that per-bit read probabilities can be measured.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace revealment {

struct TapeError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Set of distinct positions read during one run. Flags only go false->true
/// until clear(); clear() costs O(reads), not O(n).
class ReadLog {
public:
    ReadLog() = default;
    explicit ReadLog(std::uint64_t n) : flags_(n, 0) {}

    std::uint64_t size() const { return flags_.size(); }
    std::uint64_t read_count() const { return order_.size(); }
    bool was_read(std::uint64_t i) const { return flags_[i] != 0; }

    void mark(std::uint64_t i) {
        if (!flags_[i]) {
            flags_[i] = 1;
            order_.push_back(i);
        }
    }

    /// Positions in first-read order.
    std::span<const std::uint64_t> positions() const { return order_; }
    /// Positions sorted ascending.
    std::vector<std::uint64_t> sorted() const;

    void clear();
    void resize(std::uint64_t n);

private:
    std::vector<std::uint8_t> flags_;
    std::vector<std::uint64_t> order_;
};

class InputTape {
public:
    /// Empty tape of length zero.
    InputTape() = default;

    /// Explicit bits, position i = bit i of words[i / 64]. Bits beyond n must be zero.
    static InputTape from_words(std::uint64_t n, std::vector<std::uint64_t> words);
    static InputTape from_bits(std::span<const std::uint8_t> bits);
    /// Up to 64 bits from a single integer; position 0 is the least significant bit.
    static InputTape from_integer(std::uint64_t n, std::uint64_t value);
    /// Hex string, least significant bit = position 0, zero-padded to n bits.
    static InputTape from_hex(std::uint64_t n, std::string_view hex);
    /// Uniform pseudorandom bits determined by (seed, trial, position).
    static InputTape pseudorandom(std::uint64_t n, std::uint64_t seed, std::uint64_t trial);

    std::uint64_t size() const { return n_; }

    /// Returns bit i and records the read.
    int read(std::uint64_t i) {
        if (i >= n_) throw_out_of_range(i);
        log_.mark(i);
        return bit_of(i);
    }

    /// Bit value without recording a read. For oracles and test code only.
    int peek(std::uint64_t i) const {
        if (i >= n_) throw_out_of_range(i);
        return bit_of(i);
    }

    const ReadLog& log() const { return log_; }
    std::uint64_t read_count() const { return log_.read_count(); }
    std::vector<std::uint64_t> read_set() const { return log_.sorted(); }

    /// Forget all reads; the bit values are unchanged.
    void clear_log() { log_.clear(); }

    /// Switch to a new pseudorandom source of the same length, keeping buffers.
    void reseed(std::uint64_t seed, std::uint64_t trial);
    /// Switch to explicit bits of the same length, keeping buffers.
    void assign_integer(std::uint64_t value);

    bool is_pseudorandom() const { return pseudorandom_; }
    /// All n bits as packed words (materializes pseudorandom tapes).
    std::vector<std::uint64_t> words() const;
    std::string to_hex() const;

private:
    InputTape(std::uint64_t n, std::vector<std::uint64_t> words, bool pseudorandom, std::uint64_t key);

    int bit_of(std::uint64_t i) const;
    std::uint64_t word_of(std::uint64_t w) const;
    [[noreturn]] void throw_out_of_range(std::uint64_t i) const;

    std::uint64_t n_ = 0;
    std::vector<std::uint64_t> words_;
    bool pseudorandom_ = false;
    std::uint64_t key_ = 0;
    ReadLog log_;
};

/// z = x on `positions`, y elsewhere. Both tapes must have the same length.
InputTape splice(const InputTape& x, std::span<const std::uint64_t> positions, const InputTape& y);

}  // namespace revealment
