#pragma once

#include <stdexcept>
#include <string>

namespace ldmd {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidProblem : public Error { using Error::Error; };
class NonMonotonicGrid : public Error { using Error::Error; };
class DimensionMismatch : public Error { using Error::Error; };
class NumericalFailure : public Error { using Error::Error; };

/// Explicit advection step would exceed unit Courant number.
class CflViolation : public Error {
public:
    CflViolation(const std::string& what, double max_speed, int time_index)
        : Error(what), max_speed_(max_speed), time_index_(time_index) {}
    double max_speed() const noexcept { return max_speed_; }
    int time_index() const noexcept { return time_index_; }

private:
    double max_speed_;
    int time_index_;
};

/// Moving grid lost strict monotonicity (characteristics crossed).
class GridEntanglement : public Error {
public:
    GridEntanglement(const std::string& what, int time_index)
        : Error(what), time_index_(time_index) {}
    int time_index() const noexcept { return time_index_; }

private:
    int time_index_;
};

class SingularTridiagonal : public Error { using Error::Error; };
class EmptySpectrum : public Error { using Error::Error; };
class RankOutOfRange : public Error { using Error::Error; };
class RankDeficient : public Error { using Error::Error; };
class TooFewSnapshots : public Error { using Error::Error; };
class NewtonDivergence : public Error { using Error::Error; };
class IndexBeforeAnchor : public Error { using Error::Error; };
class RangeNotCovered : public Error { using Error::Error; };
class NoSignChange : public Error { using Error::Error; };
class MultipleSignChanges : public Error { using Error::Error; };

}  // namespace ldmd
