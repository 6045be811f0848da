#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace spinchain {

/// Neumaier variant of Kahan summation. Unlike plain Kahan it stays correct
/// when an addend is larger in magnitude than the running sum.
class CompensatedSum {
public:
    CompensatedSum& operator+=(double value) noexcept
    {
        const double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value))
            compensation_ += (sum_ - t) + value;
        else
            compensation_ += (value - t) + sum_;
        sum_ = t;
        return *this;
    }

    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

/// Sums terms in non-decreasing order of magnitude with compensation.
inline double sorted_compensated_sum(std::vector<double> terms)
{
    std::sort(terms.begin(), terms.end(),
              [](double x, double y) { return std::abs(x) < std::abs(y); });
    CompensatedSum acc;
    for (double t : terms)
        acc += t;
    return acc.value();
}

inline double absolute_sum(std::span<const double> terms) noexcept
{
    double s = 0.0;
    for (double t : terms)
        s += std::abs(t);
    return s;
}

} // namespace spinchain
