#pragma once

#include <stdexcept>
#include <string>

namespace gidag {

// Error taxonomy shared across the library. The CLI maps categories onto
// exit codes: usage/config -> 1, data/structure -> 2, numeric -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed graph input (nonsquare adjacency, nonzero diagonal, bad vertex).
class GraphError : public Error {
public:
    using Error::Error;
};

// Structurally valid input, invalid query (overlapping sets, missing edge).
class QueryError : public Error {
public:
    using Error::Error;
};

// Intervention validity violations (cyclic post-intervention graph,
// inconsistent I-DAG state).
class ValidityError : public Error {
public:
    using Error::Error;
};

// Enumeration or problem-size caps exceeded.
class CapacityError : public Error {
public:
    using Error::Error;
};

// Numerical failure (non-positive-definite matrix past all fallbacks).
class NumericError : public Error {
public:
    using Error::Error;
};

// Hyperparameter outside its admissible range.
class HyperparamError : public Error {
public:
    using Error::Error;
};

// File and format problems in ingested data.
class DataError : public Error {
public:
    using Error::Error;
};

// Run-configuration validation failures.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace gidag
