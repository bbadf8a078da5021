#pragma once

#include <stdexcept>
#include <string>

namespace fracadapt {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error("invalid argument: " + what) {}
};

class NonInvertibleSeries : public Error {
public:
    explicit NonInvertibleSeries(const std::string& what) : Error("non-invertible series: " + what) {}
};

class DegenerateData : public Error {
public:
    explicit DegenerateData(const std::string& what) : Error("degenerate data: " + what) {}
};

class EstimationFailed : public Error {
public:
    explicit EstimationFailed(const std::string& what) : Error("estimation failed: " + what) {}
};

class SingularBasis : public Error {
public:
    SingularBasis(int L, const std::string& what)
        : Error("singular basis at L=" + std::to_string(L) + ": " + what), L_(L) {}
    int L() const noexcept { return L_; }

private:
    int L_;
};

class DesignDegenerate : public Error {
public:
    explicit DesignDegenerate(const std::string& what) : Error("degenerate design: " + what) {}
};

class InvalidFamily : public Error {
public:
    explicit InvalidFamily(const std::string& what) : Error("invalid family: " + what) {}
};

class InvalidRestriction : public Error {
public:
    explicit InvalidRestriction(const std::string& what) : Error("invalid restriction: " + what) {}
};

class CellFailed : public Error {
public:
    explicit CellFailed(const std::string& what) : Error("cell failed: " + what) {}
};

}  // namespace fracadapt
