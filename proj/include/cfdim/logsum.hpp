#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace cfdim {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// log(e^a + e^b) without overflow.
inline double log_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

/// Streaming log-sum-exp accumulator. Addition order is part of the contract:
/// summing the same terms in the same order gives bit-identical results.
class LogSumAcc {
public:
    void add(double x) {
        if (x == kNegInf) return;
        if (x <= shift_) {
            sum_ += std::exp(x - shift_);
        } else {
            // rescale to the new maximum
            sum_ = sum_ * std::exp(shift_ - x) + 1.0;
            shift_ = x;
        }
        ++count_;
    }

    // Merge a partial accumulator (fixed merge order required by callers).
    void merge(const LogSumAcc& other) {
        if (other.count_ == 0) return;
        if (other.shift_ <= shift_) {
            sum_ += other.sum_ * std::exp(other.shift_ - shift_);
        } else {
            sum_ = sum_ * std::exp(shift_ - other.shift_) + other.sum_;
            shift_ = other.shift_;
        }
        count_ += other.count_;
    }

    double value() const { return count_ == 0 ? kNegInf : shift_ + std::log(sum_); }
    std::size_t count() const { return count_; }

private:
    double shift_ = kNegInf;
    double sum_ = 0.0;
    std::size_t count_ = 0;
};

/// Neumaier-compensated sum; error stays O(eps) independent of length.
inline double compensated_sum(std::span<const double> xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    return s + c;
}

class CompensatedAcc {
public:
    void add(double x) {
        double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0.0, c_ = 0.0;
};

} // namespace cfdim
