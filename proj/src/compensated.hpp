#pragma once

#include <cmath>

namespace nfa {

// Neumaier-compensated accumulator: keeps a running error term so sums of
// values spanning many orders of magnitude (fourth powers of positions vs.
// their means) stay accurate to the last few ulps.
class compensated_sum {
public:
    void add(double v) noexcept {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

} // namespace nfa
