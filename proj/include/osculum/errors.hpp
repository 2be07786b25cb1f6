#pragma once

#include <stdexcept>
#include <string>

namespace osculum {

// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Expression source text does not conform to the grammar.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"), pos(position) {}
    std::size_t pos;
};

// A Taylor order was requested beyond the smoothness class at the base point.
class SmoothnessExceeded : public Error {
public:
    SmoothnessExceeded(int requested, int available)
        : Error("jet order " + std::to_string(requested) + " exceeds smoothness class " +
                std::to_string(available)),
          requested_order(requested), smoothness(available) {}
    int requested_order;
    int smoothness;
};

// Exact mode would need an irrational scalar (e.g. sin at a non-zero point).
class InexactValue : public Error {
public:
    explicit InexactValue(const std::string& what) : Error(what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

// Evaluation outside the domain (division by zero at base, sqrt of negative, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

// Tangent spaces of the two patches differ at the contact point.
class NoCommonTangent : public Error {
public:
    NoCommonTangent() : Error("tangent spaces differ at the contact point") {}
};

// The input is not a graph over a coordinate plane (up to affine change).
class UnsupportedShape : public Error {
public:
    explicit UnsupportedShape(const std::string& what) : Error(what) {}
};

// The homogeneous part that should certify the order vanishes identically.
class NoWitness : public Error {
public:
    explicit NoWitness(const std::string& what) : Error(what) {}
};

// The two branches coincide: no separation exponent to measure.
class NoSeparation : public Error {
public:
    explicit NoSeparation(const std::string& what) : Error(what) {}
};

// A sampled distance underflowed; the branches coincide at that scale.
class DegenerateDistance : public Error {
public:
    explicit DegenerateDistance(const std::string& what) : Error(what) {}
};

class NewtonDivergence : public Error {
public:
    explicit NewtonDivergence(const std::string& what) : Error(what) {}
};

class InsufficientJetOrder : public Error {
public:
    explicit InsufficientJetOrder(const std::string& what) : Error(what) {}
};

} // namespace osculum
