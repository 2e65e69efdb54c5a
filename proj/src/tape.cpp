#include "revealment/tape.hpp"

#include <algorithm>
#include <cctype>

#include "revealment/rng.hpp"

namespace revealment {

std::vector<std::uint64_t> ReadLog::sorted() const {
    std::vector<std::uint64_t> out(order_.begin(), order_.end());
    std::sort(out.begin(), out.end());
    return out;
}

void ReadLog::clear() {
    for (auto i : order_) flags_[i] = 0;
    order_.clear();
}

void ReadLog::resize(std::uint64_t n) {
    flags_.assign(n, 0);
    order_.clear();
}

InputTape::InputTape(std::uint64_t n, std::vector<std::uint64_t> words, bool pseudorandom, std::uint64_t key)
    : n_(n), words_(std::move(words)), pseudorandom_(pseudorandom), key_(key), log_(n) {}

InputTape InputTape::from_words(std::uint64_t n, std::vector<std::uint64_t> words) {
    if (words.size() != (n + 63) / 64) {
        throw std::invalid_argument("expected " + std::to_string((n + 63) / 64) + " words for " +
                                    std::to_string(n) + " bits, got " + std::to_string(words.size()));
    }
    if (n % 64 != 0 && (words.back() >> (n % 64)) != 0) {
        throw std::invalid_argument("bits set beyond tape length " + std::to_string(n));
    }
    return InputTape(n, std::move(words), false, 0);
}

InputTape InputTape::from_bits(std::span<const std::uint8_t> bits) {
    std::vector<std::uint64_t> words((bits.size() + 63) / 64, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] > 1) throw std::invalid_argument("bit values must be 0 or 1");
        words[i / 64] |= std::uint64_t{bits[i]} << (i % 64);
    }
    return InputTape(bits.size(), std::move(words), false, 0);
}

InputTape InputTape::from_integer(std::uint64_t n, std::uint64_t value) {
    if (n > 64) throw std::invalid_argument("from_integer supports at most 64 bits");
    if (n < 64 && (value >> n) != 0) throw std::invalid_argument("value has bits beyond tape length");
    std::vector<std::uint64_t> words;
    if (n > 0) words.push_back(value);
    return InputTape(n, std::move(words), false, 0);
}

InputTape InputTape::from_hex(std::uint64_t n, std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    std::vector<std::uint64_t> words((n + 63) / 64, 0);
    std::uint64_t pos = 0;
    for (auto it = hex.rbegin(); it != hex.rend(); ++it, pos += 4) {
        const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(*it)));
        int nibble;
        if (c >= '0' && c <= '9') nibble = c - '0';
        else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
        else throw std::invalid_argument(std::string("invalid hex digit '") + *it + "'");
        for (int b = 0; b < 4; ++b) {
            if (!((nibble >> b) & 1)) continue;
            const std::uint64_t i = pos + b;
            if (i >= n) throw std::invalid_argument("hex input has bits beyond n=" + std::to_string(n));
            words[i / 64] |= std::uint64_t{1} << (i % 64);
        }
    }
    return InputTape(n, std::move(words), false, 0);
}

InputTape InputTape::pseudorandom(std::uint64_t n, std::uint64_t seed, std::uint64_t trial) {
    return InputTape(n, {}, true, mix(seed, trial));
}

void InputTape::reseed(std::uint64_t seed, std::uint64_t trial) {
    pseudorandom_ = true;
    key_ = mix(seed, trial);
    words_.clear();
    log_.clear();
}

void InputTape::assign_integer(std::uint64_t value) {
    if (n_ > 64) throw std::invalid_argument("assign_integer supports at most 64 bits");
    if (n_ < 64 && (value >> n_) != 0) throw std::invalid_argument("value has bits beyond tape length");
    pseudorandom_ = false;
    words_.assign(n_ > 0 ? 1 : 0, value);
    log_.clear();
}

std::uint64_t InputTape::word_of(std::uint64_t w) const {
    if (!pseudorandom_) return words_[w];
    std::uint64_t word = mix(key_, w);
    const std::uint64_t used = n_ - 64 * w;
    if (used < 64) word &= (std::uint64_t{1} << used) - 1;
    return word;
}

int InputTape::bit_of(std::uint64_t i) const { return static_cast<int>((word_of(i / 64) >> (i % 64)) & 1); }

void InputTape::throw_out_of_range(std::uint64_t i) const {
    throw TapeError("read of position " + std::to_string(i) + " on tape of length " + std::to_string(n_));
}

std::vector<std::uint64_t> InputTape::words() const {
    std::vector<std::uint64_t> out((n_ + 63) / 64);
    for (std::uint64_t w = 0; w < out.size(); ++w) out[w] = word_of(w);
    return out;
}

std::string InputTape::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    const auto ws = words();
    const std::uint64_t nibbles = std::max<std::uint64_t>(1, (n_ + 3) / 4);
    std::string out(nibbles, '0');
    for (std::uint64_t k = 0; k < nibbles && n_ > 0; ++k) {
        const std::uint64_t bit = 4 * k;
        const unsigned v = static_cast<unsigned>((ws[bit / 64] >> (bit % 64)) & 0xF);
        out[nibbles - 1 - k] = digits[v];
    }
    return out;
}

InputTape splice(const InputTape& x, std::span<const std::uint64_t> positions, const InputTape& y) {
    if (x.size() != y.size()) throw std::invalid_argument("splice needs tapes of equal length");
    auto words = y.words();
    for (auto i : positions) {
        const std::uint64_t mask = std::uint64_t{1} << (i % 64);
        if (x.peek(i)) words[i / 64] |= mask;
        else words[i / 64] &= ~mask;
    }
    return InputTape::from_words(x.size(), std::move(words));
}

}  // namespace revealment
