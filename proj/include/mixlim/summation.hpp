#ifndef MIXLIM_SUMMATION_HPP
#define MIXLIM_SUMMATION_HPP

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace mixlim {

/// Recursive pairwise sum of a contiguous range.
template <typename Scalar>
Scalar pairwise_sum(std::span<const Scalar> xs) {
    if (xs.size() <= 8) {
        Scalar s{};
        for (const Scalar& x : xs) s += x;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Streaming pairwise accumulator. Values are buffered into fixed blocks;
/// block sums are merged with a binary counter so that the reduction tree is
/// balanced and the error grows like O(log n) ulps without storing the stream.
template <typename Scalar, std::size_t Block = 256>
class PairwiseAccumulator {
public:
    void add(Scalar x) {
        buffer_[fill_++] = x;
        if (fill_ == Block) flush();
    }

    Scalar result() const {
        Scalar tail = pairwise_sum(std::span<const Scalar>(buffer_.data(), fill_));
        // Fold from the smallest level up so partial sums stay balanced.
        for (std::size_t k = 0; k < levels_.size(); ++k) {
            if (occupied_[k]) tail = levels_[k] + tail;
        }
        return tail;
    }

private:
    void flush() {
        Scalar carry = pairwise_sum(std::span<const Scalar>(buffer_.data(), fill_));
        fill_ = 0;
        std::size_t k = 0;
        for (; k < levels_.size() && occupied_[k]; ++k) {
            carry = levels_[k] + carry;
            occupied_[k] = false;
        }
        if (k == levels_.size()) {
            levels_.push_back(carry);
            occupied_.push_back(true);
        } else {
            levels_[k] = carry;
            occupied_[k] = true;
        }
    }

    std::array<Scalar, Block> buffer_{};
    std::size_t fill_ = 0;
    std::vector<Scalar> levels_;
    std::vector<bool> occupied_;
};

}  // namespace mixlim

#endif  // MIXLIM_SUMMATION_HPP
