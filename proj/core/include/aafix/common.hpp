#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace aafix {

/// State vectors live in R^d with the Euclidean norm.
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation outside the region a path or warp can serve.
class DomainError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

/// A tail that does not decay fast enough to be integrable.
class DivergenceError : public QuadratureError {
public:
    using QuadratureError::QuadratureError;
};

class CertificationError : public Error {
public:
    using Error::Error;
};

class NonContractionError : public Error {
public:
    using Error::Error;
};

class PropagationError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace aafix
