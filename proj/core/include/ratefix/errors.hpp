#pragma once

#include <stdexcept>
#include <string>

namespace ratefix {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

/// A zero exposure cell (or a zero adjusted-exposure denominator) was hit
/// where positivity is required.
class ZeroExposure : public Error {
public:
    explicit ZeroExposure(const std::string& what) : Error(what) {}
};

/// The base slice of some factor carries zero total loss.
class ZeroBaseSliceLoss : public Error {
public:
    explicit ZeroBaseSliceLoss(const std::string& what) : Error(what) {}
};

/// A non-base slice carries zero total loss; its indicated relativity would
/// collapse to zero. Rejected in strict mode.
class ZeroSliceLoss : public Error {
public:
    explicit ZeroSliceLoss(const std::string& what) : Error(what) {}
};

class ZeroDenominator : public Error {
public:
    explicit ZeroDenominator(const std::string& what) : Error(what) {}
};

/// Raised by operations that are only defined for three rating factors.
class UnsupportedDimension : public Error {
public:
    explicit UnsupportedDimension(const std::string& what) : Error(what) {}
};

class WeakCompetitionViolated : public Error {
public:
    explicit WeakCompetitionViolated(const std::string& what) : Error(what) {}
};

class GrowthNotAboveOne : public Error {
public:
    explicit GrowthNotAboveOne(const std::string& what) : Error(what) {}
};

/// Linear system has no unique solution. `rank_consistent` distinguishes
/// infinitely many solutions (true) from none (false).
class SingularMatrix : public Error {
public:
    SingularMatrix(const std::string& what, bool rank_consistent)
        : Error(what), rank_consistent(rank_consistent) {}
    bool rank_consistent;
};

/// Input file could not be parsed; message cites the offending row/column.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

/// Dense grid input is missing a cell.
class MissingCell : public Error {
public:
    explicit MissingCell(const std::string& what) : Error(what) {}
};

}  // namespace ratefix
