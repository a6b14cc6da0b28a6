#pragma once

#include <stdexcept>
#include <string>

namespace oracle_cs {

/// A restricted sensing matrix is numerically rank deficient.
class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was asked for a covariance the channel does not have.
class DeterministicChannelError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Brute-force enumeration refused because the subset count is too large.
class CombinatorialLimitError : public std::runtime_error {
public:
    CombinatorialLimitError(double subsets, double limit)
        : std::runtime_error("refusing to enumerate " + std::to_string(subsets) +
                             " subsets (limit " + std::to_string(limit) + ")"),
          subsets_(subsets) {}
    double subsets() const { return subsets_; }

private:
    double subsets_;
};

}  // namespace oracle_cs
