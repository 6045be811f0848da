#pragma once

#include <stdexcept>
#include <string>

namespace spinchain {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters or arguments outside an operation's domain.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// An iterative method ran out of budget. Carries the best value it reached.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double best_estimate, double error_estimate)
        : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate)
    {
    }

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

/// A coefficient series whose geometric ratio is too close to one.
class SlowConvergence : public Error {
public:
    using Error::Error;
};

/// A region-specific formula was requested outside its region.
class WrongRegion : public Error {
public:
    using Error::Error;
};

} // namespace spinchain
