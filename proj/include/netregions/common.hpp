#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace netregions {

/// Bad or inconsistent input: unreadable files, schema mismatches, violated
/// preconditions. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation could not produce a defined result (degenerate null model,
/// empty graph after filtering, ...). The CLI maps this to exit code 2.
class ComputationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Kahan-Neumaier compensated accumulator. Edge weights and strengths are
/// sums over up to millions of doubles; plain summation drifts enough to
/// break the strength/total-weight identities we test for.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Splits one delimited line. No quoting: unit ids and numbers never need it,
/// and the formats we read/write are under our control.
std::vector<std::string> split_line(const std::string& line, char delimiter);

/// Strips trailing \r (CRLF input) and surrounding spaces/tabs.
std::string trim(const std::string& s);

/// Formats a double with 12 significant digits (graph dumps, CSV artifacts).
std::string format_sig12(double v);

}  // namespace netregions
